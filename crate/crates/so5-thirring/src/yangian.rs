//! Yangian generators built from lattice fermion currents.
//!
//! Level-0 generators are sums of on-site currents
//! `I_ab(x) = -(1/2) Psi+(x) G^ab Psi(x)`; level-1 generators combine a
//! symmetric lattice derivative term with an antisymmetrized bilocal sum,
//! `J_ab = T_ab + U J0_ab` with `U = sign * (i/2) h`. The field `Psi` is
//! either the bare fermion or its string-dressed counterpart, selected by
//! an optional angle matrix.

use crate::bethe::admissibility_check;
use crate::clifford::{
    check_so5_closure, pair_index, signed_pair_index, so5_structure_constants, GammaRep, SO5_PAIRS,
};
use crate::error::{Result, So5Error};
use crate::fock::{annihilate_mode, create_mode, mode, total_number_basis, FockSpace, StateBasis};
use crate::linalg::CsrMatrix;
use crate::report::ViolationReport;
use crate::scalar::{imag_unit, re, Scalar, C};
use crate::stringmap::{string_phase_arg_on_state, StringConvention, ThetaMatrix};

/// Sign choice in the level-1 coefficient `U = sign * (i/2) h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum USign {
    Plus,
    Minus,
}

impl USign {
    pub const BOTH: [USign; 2] = [USign::Plus, USign::Minus];

    pub fn factor(self) -> f64 {
        match self {
            USign::Plus => 1.0,
            USign::Minus => -1.0,
        }
    }
}

/// The ten level-0 and ten level-1 generators in ordered-pair layout,
/// together with the two pieces the level-1 set is assembled from.
#[derive(Debug, Clone)]
pub struct YangianGenerators<T: Scalar> {
    /// `I_ab`, indexed by [`SO5_PAIRS`].
    pub level0: Vec<CsrMatrix<T>>,
    /// `J_ab = T_ab + U J0_ab`, indexed by [`SO5_PAIRS`].
    pub level1: Vec<CsrMatrix<T>>,
    /// Symmetric-difference derivative term `T_ab`.
    pub derivative: Vec<CsrMatrix<T>>,
    /// Antisymmetrized bilocal term `J0_ab`.
    pub bilocal: Vec<CsrMatrix<T>>,
    /// Level-1 coefficient `U`.
    pub u: C<T>,
    pub h: T,
}

impl<T: Scalar> YangianGenerators<T> {
    /// Level-0 generator for an arbitrary ordered index pair (`a != b`).
    pub fn level0_pair(&self, a: usize, b: usize) -> CsrMatrix<T> {
        signed_access(&self.level0, a, b)
    }

    /// Level-1 generator for an arbitrary ordered index pair (`a != b`).
    pub fn level1_pair(&self, a: usize, b: usize) -> CsrMatrix<T> {
        signed_access(&self.level1, a, b)
    }

    /// Same level-0 content with the level-1 set recombined for the other
    /// sign convention of `U`.
    pub fn resigned(&self, sign: USign) -> Self {
        let u = u_coefficient::<T>(self.h, sign);
        let level1 = combine_level1(&self.derivative, &self.bilocal, u);
        YangianGenerators {
            level0: self.level0.clone(),
            level1,
            derivative: self.derivative.clone(),
            bilocal: self.bilocal.clone(),
            u,
            h: self.h,
        }
    }

    /// Worst Hermiticity deviation across the level-0 set.
    pub fn level0_hermiticity(&self) -> f64 {
        self.level0
            .iter()
            .map(|m| m.hermiticity_deviation().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

fn signed_access<T: Scalar>(set: &[CsrMatrix<T>], a: usize, b: usize) -> CsrMatrix<T> {
    let (idx, sign) = signed_pair_index(a, b).expect("distinct generator indices");
    if sign > 0.0 {
        set[idx].clone()
    } else {
        set[idx].scale(re(-T::one()))
    }
}

fn u_coefficient<T: Scalar>(h: T, sign: USign) -> C<T> {
    let half = T::from(0.5 * sign.factor()).expect("small constant fits");
    imag_unit::<T>().scale(half * h)
}

fn combine_level1<T: Scalar>(
    derivative: &[CsrMatrix<T>],
    bilocal: &[CsrMatrix<T>],
    u: C<T>,
) -> Vec<CsrMatrix<T>> {
    derivative
        .iter()
        .zip(bilocal.iter())
        .map(|(t, j0)| t.add_scaled(j0, u))
        .collect()
}

/// Accumulate `coeff * Psi+_{i}(create_site) Psi_{j}(annihilate_site)` into
/// a triplet list, with both string phases evaluated on the intermediate
/// state reached after the annihilation.
fn accumulate_dressed<T: Scalar>(
    basis: &StateBasis,
    theta: Option<&ThetaMatrix>,
    create: (usize, usize),
    annihilate: (usize, usize),
    coeff: C<T>,
    out: &mut Vec<(usize, usize, C<T>)>,
) {
    let m_annihilate = mode(annihilate.1, annihilate.0);
    let m_create = mode(create.1, create.0);
    for col in 0..basis.dim() {
        let s = basis.state(col);
        let Some((s1, sign1)) = annihilate_mode(s, m_annihilate) else {
            continue;
        };
        let Some((s2, sign2)) = create_mode(s1, m_create) else {
            continue;
        };
        let Some(row) = basis.position(s2) else {
            continue;
        };
        let mut value = coeff.scale(T::from(sign1 * sign2).expect("sign fits"));
        if let Some(theta) = theta {
            let arg_create = string_phase_arg_on_state(
                &theta.entries()[create.0],
                StringConvention::Exclusive,
                s1,
                create.1,
            );
            let arg_annihilate = string_phase_arg_on_state(
                &theta.entries()[annihilate.0],
                StringConvention::Exclusive,
                s1,
                annihilate.1,
            );
            let arg = T::from(arg_create - arg_annihilate).expect("angle fits");
            value *= C::from_polar(T::one(), arg);
        }
        out.push((row, col, value));
    }
}

/// Single bilinear `Psi+_{i}(create_site) Psi_{j}(annihilate_site)` with
/// optional string dressing, as a matrix on the basis.
pub(crate) fn dressed_bilinear<T: Scalar>(
    basis: &StateBasis,
    theta: Option<&ThetaMatrix>,
    create: (usize, usize),
    annihilate: (usize, usize),
) -> CsrMatrix<T> {
    let dim = basis.dim();
    let mut triplets = Vec::new();
    accumulate_dressed(
        basis,
        theta,
        create,
        annihilate,
        C::new(T::one(), T::zero()),
        &mut triplets,
    );
    CsrMatrix::from_triplets(dim, dim, triplets)
}

fn flavor_entries<T: Scalar>(g: &CsrMatrix<T>) -> Vec<(usize, usize, C<T>)> {
    let mut entries = Vec::new();
    for i in 0..g.nrows() {
        for (j, v) in g.row(i) {
            entries.push((i, j, v));
        }
    }
    entries
}

/// On-site current `I_ab(site) = -(1/2) Psi+(site) G^ab Psi(site)` on an
/// arbitrary basis, with antisymmetric handling of the index pair.
pub fn local_current<T: Scalar>(
    basis: &StateBasis,
    theta: Option<&ThetaMatrix>,
    rep: &GammaRep<T>,
    a: usize,
    b: usize,
    site: usize,
) -> Result<CsrMatrix<T>> {
    let Some((idx, sign)) = signed_pair_index(a, b) else {
        return Err(So5Error::InvalidConfig(format!(
            "current indices must be distinct and in 1..=5, got ({a}, {b})"
        )));
    };
    let m = local_current_canonical(basis, theta, rep, idx, site);
    Ok(if sign > 0.0 { m } else { m.scale(re(-T::one())) })
}

fn local_current_canonical<T: Scalar>(
    basis: &StateBasis,
    theta: Option<&ThetaMatrix>,
    rep: &GammaRep<T>,
    pair_idx: usize,
    site: usize,
) -> CsrMatrix<T> {
    let minus_half = re::<T>(T::from(-0.5).expect("half fits"));
    let dim = basis.dim();
    let mut triplets = Vec::new();
    for (i, j, g) in flavor_entries(&rep.generators[pair_idx]) {
        accumulate_dressed(
            basis,
            theta,
            (i, site),
            (j, site),
            minus_half * g,
            &mut triplets,
        );
    }
    CsrMatrix::from_triplets(dim, dim, triplets)
}

fn derivative_current<T: Scalar>(
    basis: &StateBasis,
    theta: Option<&ThetaMatrix>,
    rep: &GammaRep<T>,
    pair_idx: usize,
) -> CsrMatrix<T> {
    let n_sites = basis.n_sites();
    let dim = basis.dim();
    let entries = flavor_entries(&rep.generators[pair_idx]);
    let half = T::from(0.5).expect("half fits");
    let mut triplets = Vec::new();
    for x in 0..n_sites {
        for &(i, j, g) in &entries {
            for (step, orient) in [(1usize, half), (n_sites - 1, -half)] {
                let y = (x + step) % n_sites;
                accumulate_dressed(basis, theta, (i, x), (j, y), g.scale(orient), &mut triplets);
            }
        }
    }
    CsrMatrix::from_triplets(dim, dim, triplets)
}

fn bilocal_current<T: Scalar>(
    local: &[Vec<CsrMatrix<T>>],
    dim: usize,
    a: usize,
    b: usize,
) -> CsrMatrix<T> {
    let n_sites = local[0].len();
    let mut total = CsrMatrix::zeros(dim, dim);
    for c in 1..=5 {
        if c == a || c == b {
            continue;
        }
        let (ac_idx, ac_sign) = signed_pair_index(a, c).expect("distinct");
        let (cb_idx, cb_sign) = signed_pair_index(c, b).expect("distinct");
        let orient = re::<T>(T::from(ac_sign * cb_sign).expect("sign fits"));
        let sites_cb = &local[cb_idx];
        let mut cumulative = Vec::with_capacity(n_sites + 1);
        cumulative.push(CsrMatrix::zeros(dim, dim));
        for y in 0..n_sites {
            let next = cumulative[y].add(&sites_cb[y]);
            cumulative.push(next);
        }
        let all = cumulative[n_sites].clone();
        for x in 0..n_sites {
            let weighted = cumulative[x].add(&cumulative[x + 1]).sub(&all);
            total = total.add(&local[ac_idx][x].matmul(&weighted).scale(orient));
        }
    }
    total
}

/// Build the full generator set on an arbitrary basis.
///
/// `theta = None` uses the bare fermion field; an angle matrix switches
/// every `Psi` to the string-dressed field with the exclusive convention.
pub fn build_currents_on_basis<T: Scalar>(
    basis: &StateBasis,
    theta: Option<&ThetaMatrix>,
    rep: &GammaRep<T>,
    h: T,
    sign: USign,
) -> Result<YangianGenerators<T>> {
    let dim = basis.dim();
    let n_sites = basis.n_sites();
    let mut local: Vec<Vec<CsrMatrix<T>>> = Vec::with_capacity(10);
    for pair_idx in 0..SO5_PAIRS.len() {
        let per_site = (0..n_sites)
            .map(|x| local_current_canonical(basis, theta, rep, pair_idx, x))
            .collect();
        local.push(per_site);
    }
    let level0: Vec<CsrMatrix<T>> = local
        .iter()
        .map(|sites| {
            sites
                .iter()
                .fold(CsrMatrix::zeros(dim, dim), |acc, m| acc.add(m))
        })
        .collect();
    let derivative: Vec<CsrMatrix<T>> = (0..SO5_PAIRS.len())
        .map(|pair_idx| derivative_current(basis, theta, rep, pair_idx))
        .collect();
    let bilocal: Vec<CsrMatrix<T>> = SO5_PAIRS
        .iter()
        .map(|&(a, b)| bilocal_current(&local, dim, a, b))
        .collect();
    let u = u_coefficient::<T>(h, sign);
    let level1 = combine_level1(&derivative, &bilocal, u);
    Ok(YangianGenerators {
        level0,
        level1,
        derivative,
        bilocal,
        u,
        h,
    })
}

/// Build the generator set on the full Fock space of `space`.
pub fn build_currents<T: Scalar>(
    space: &FockSpace,
    theta: Option<&ThetaMatrix>,
    rep: &GammaRep<T>,
    h: T,
    sign: USign,
) -> Result<YangianGenerators<T>> {
    build_currents_on_basis(space.basis(), theta, rep, h, sign)
}

/// Sum of all six permutation products of three square matrices.
pub fn symmetric_triple<T: Scalar>(
    x1: &CsrMatrix<T>,
    x2: &CsrMatrix<T>,
    x3: &CsrMatrix<T>,
) -> Result<CsrMatrix<T>> {
    let dim = x1.nrows();
    for m in [x1, x2, x3] {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(So5Error::DimensionMismatch {
                left: dim,
                right: m.nrows().max(m.ncols()),
                context: "symmetric triple product".to_string(),
            });
        }
    }
    let p12 = x1.matmul(x2).add(&x2.matmul(x1));
    let p13 = x1.matmul(x3).add(&x3.matmul(x1));
    let p23 = x2.matmul(x3).add(&x3.matmul(x2));
    Ok(p12.matmul(x3).add(&p13.matmul(x2)).add(&p23.matmul(x1)))
}

/// Check `[I_ab, J_cd] = i (d_bc J_ad + d_ad J_bc - d_ac J_bd - d_bd J_ac)`
/// over all one hundred index pairs.
pub fn check_adjoint_relation<T: Scalar>(gen: &YangianGenerators<T>) -> Result<ViolationReport> {
    let dim = gen.level0[0].nrows();
    let mut report = ViolationReport::new();
    for &(a, b) in SO5_PAIRS.iter() {
        for &(c, d) in SO5_PAIRS.iter() {
            let lhs = gen.level0[pair_index(a, b)].commutator(&gen.level1[pair_index(c, d)])?;
            let mut rhs = CsrMatrix::zeros(dim, dim);
            let terms: [(usize, usize, bool, T); 4] = [
                (a, d, b == c, T::one()),
                (b, c, a == d, T::one()),
                (b, d, a == c, -T::one()),
                (a, c, b == d, -T::one()),
            ];
            for (x, y, delta, orient) in terms {
                if !delta {
                    continue;
                }
                if let Some((idx, sign)) = signed_pair_index(x, y) {
                    let coeff = imag_unit::<T>().scale(orient * T::from(sign).expect("sign fits"));
                    rhs = rhs.add_scaled(&gen.level1[idx], coeff);
                }
            }
            let violation = lhs.sub(&rhs).max_abs();
            report.record(
                format!("[I_{a}{b}, J_{c}{d}]"),
                violation.to_f64().unwrap_or(f64::INFINITY),
            );
        }
    }
    Ok(report)
}

/// Outcome of the single independent level-1 constraint
/// `[J_23, J_15] = (i/24) h^2 ({I_13,I_42,I_45} + {I_12,I_45,I_34}
/// - {I_14,I_42,I_35} - {I_14,I_34,I_25})`.
#[derive(Debug, Clone, Copy)]
pub struct SerreReport {
    /// Max-norm of the difference of the two sides.
    pub absolute: f64,
    /// Max-norm of the right side.
    pub rhs_scale: f64,
    /// `absolute / rhs_scale` when the scale is nonzero, `absolute`
    /// otherwise.
    pub relative: f64,
    /// Raw norm of `[T_23, T_15]`, the part that survives at `h = 0`.
    pub h_zero_obstruction: f64,
}

type IndexPair = (usize, usize);

const SERRE_TRIPLES: [(IndexPair, IndexPair, IndexPair, f64); 4] = [
    ((1, 3), (4, 2), (4, 5), 1.0),
    ((1, 2), (4, 5), (3, 4), 1.0),
    ((1, 4), (4, 2), (3, 5), -1.0),
    ((1, 4), (3, 4), (2, 5), -1.0),
];

fn serre_rhs<T: Scalar>(level0: &[CsrMatrix<T>], h: T) -> Result<CsrMatrix<T>> {
    let dim = level0[0].nrows();
    let mut rhs = CsrMatrix::zeros(dim, dim);
    for &(p1, p2, p3, coeff) in SERRE_TRIPLES.iter() {
        let mut sign = coeff;
        let mut idx = [0usize; 3];
        for (slot, (a, b)) in [p1, p2, p3].into_iter().enumerate() {
            let (i, s) = signed_pair_index(a, b).expect("distinct");
            idx[slot] = i;
            sign *= s;
        }
        let triple = symmetric_triple(&level0[idx[0]], &level0[idx[1]], &level0[idx[2]])?;
        rhs = rhs.add_scaled(&triple, re(T::from(sign).expect("sign fits")));
    }
    let weight = imag_unit::<T>().scale(T::from(1.0 / 24.0).expect("constant fits") * h * h);
    Ok(rhs.scale(weight))
}

pub fn check_serre_relation<T: Scalar>(gen: &YangianGenerators<T>) -> Result<SerreReport> {
    let lhs = gen.level1[pair_index(2, 3)].commutator(&gen.level1[pair_index(1, 5)])?;
    let rhs = serre_rhs(&gen.level0, gen.h)?;
    let absolute = lhs.sub(&rhs).max_abs().to_f64().unwrap_or(f64::INFINITY);
    let rhs_scale = rhs.max_abs().to_f64().unwrap_or(f64::INFINITY);
    let relative = if rhs_scale > 0.0 {
        absolute / rhs_scale
    } else {
        absolute
    };
    let h_zero_obstruction = gen.derivative[pair_index(2, 3)]
        .commutator(&gen.derivative[pair_index(1, 5)])?
        .max_abs()
        .to_f64()
        .unwrap_or(f64::INFINITY);
    Ok(SerreReport {
        absolute,
        rhs_scale,
        relative,
        h_zero_obstruction,
    })
}

/// The five violation figures tracked per angle sample in the gauge scan.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct YangianViolations {
    pub closure: f64,
    pub adjoint_plus: f64,
    pub serre_plus: f64,
    pub adjoint_minus: f64,
    pub serre_minus: f64,
}

impl YangianViolations {
    pub fn as_array(&self) -> [f64; 5] {
        [
            self.closure,
            self.adjoint_plus,
            self.serre_plus,
            self.adjoint_minus,
            self.serre_minus,
        ]
    }

    /// Largest absolute difference against another violation set.
    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array().iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest one-sided excess over a baseline violation set.
    pub fn max_excess_over(&self, baseline: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(baseline.as_array().iter())
            .map(|(a, b)| a - b)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Closure, adjoint, and Serre violations for the dressed generator set at
/// one angle matrix, with both signs of `U`.
pub fn yangian_violations<T: Scalar>(
    space: &FockSpace,
    theta: &ThetaMatrix,
    rep: &GammaRep<T>,
    h: T,
) -> Result<YangianViolations> {
    let plus = build_currents(space, Some(theta), rep, h, USign::Plus)?;
    let minus = plus.resigned(USign::Minus);
    let closure = check_so5_closure(&plus.level0)?.max_violation;
    let adjoint_plus = check_adjoint_relation(&plus)?.max_violation;
    let serre_plus = check_serre_relation(&plus)?.relative;
    let adjoint_minus = check_adjoint_relation(&minus)?.max_violation;
    let serre_minus = check_serre_relation(&minus)?.relative;
    Ok(YangianViolations {
        closure,
        adjoint_plus,
        serre_plus,
        adjoint_minus,
        serre_minus,
    })
}

/// Deviation band below which a sample counts as satisfying the angle
/// difference constraints in the scan classification.
pub const ADMISSIBLE_BAND: f64 = 1e-8;

#[derive(Debug, Clone, serde::Serialize)]
pub struct GaugeScanRow {
    pub theta_upper: [f64; 6],
    pub admissibility_deviation: f64,
    pub admissible: bool,
    pub violations: YangianViolations,
    /// Largest absolute deviation of the violation figures from the zero
    /// angle baseline.
    pub distance_from_baseline: f64,
    /// Largest one-sided excess of the violation figures over the zero
    /// angle baseline.
    pub excess_over_baseline: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct GaugeScanTable {
    pub baseline: YangianViolations,
    pub rows: Vec<GaugeScanRow>,
}

impl GaugeScanTable {
    /// Largest baseline distance among rows classified admissible.
    pub fn admissible_max_distance(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.admissible)
            .map(|r| r.distance_from_baseline)
            .fold(0.0, f64::max)
    }

    /// Smallest baseline excess among rows classified inadmissible.
    pub fn inadmissible_min_excess(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| !r.admissible)
            .map(|r| r.excess_over_baseline)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Evaluate every sample against the zero angle baseline.
pub fn gauge_invariance_scan<T: Scalar>(
    space: &FockSpace,
    rep: &GammaRep<T>,
    h: T,
    samples: &[ThetaMatrix],
) -> Result<GaugeScanTable> {
    let baseline = yangian_violations(space, &ThetaMatrix::zero(), rep, h)?;
    let mut rows = Vec::with_capacity(samples.len());
    for theta in samples {
        let admissibility = admissibility_check(theta);
        let violations = yangian_violations(space, theta, rep, h)?;
        rows.push(GaugeScanRow {
            theta_upper: theta.upper(),
            admissibility_deviation: admissibility.max_deviation,
            admissible: admissibility.is_admissible(ADMISSIBLE_BAND),
            distance_from_baseline: violations.max_abs_difference(&baseline),
            excess_over_baseline: violations.max_excess_over(&baseline),
            violations,
        });
    }
    Ok(GaugeScanTable { baseline, rows })
}

// ------------------------------------------------------------------
// Generic defining relations on dense particle-number blocks.

struct Dense<T: Scalar> {
    n: usize,
    a: Vec<C<T>>,
}

impl<T: Scalar> Dense<T> {
    fn zeros(n: usize) -> Self {
        Dense {
            n,
            a: vec![C::new(T::zero(), T::zero()); n * n],
        }
    }

    fn from_csr(m: &CsrMatrix<T>) -> Self {
        let n = m.nrows();
        let mut out = Self::zeros(n);
        for r in 0..n {
            for (c, v) in m.row(r) {
                out.a[r * n + c] = v;
            }
        }
        out
    }

    fn matmul(&self, other: &Dense<T>) -> Dense<T> {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let arow = &self.a[i * n..(i + 1) * n];
            let orow = &mut out.a[i * n..(i + 1) * n];
            for (k, &aik) in arow.iter().enumerate() {
                if aik.re == T::zero() && aik.im == T::zero() {
                    continue;
                }
                let brow = &other.a[k * n..(k + 1) * n];
                for (o, &b) in orow.iter_mut().zip(brow.iter()) {
                    *o += aik * b;
                }
            }
        }
        out
    }

    fn commutator(&self, other: &Dense<T>) -> Dense<T> {
        let mut ab = self.matmul(other);
        ab.sub_assign(&other.matmul(self));
        ab
    }

    fn add_assign(&mut self, other: &Dense<T>) {
        for (x, y) in self.a.iter_mut().zip(other.a.iter()) {
            *x += *y;
        }
    }

    fn sub_assign(&mut self, other: &Dense<T>) {
        for (x, y) in self.a.iter_mut().zip(other.a.iter()) {
            *x -= *y;
        }
    }

    fn add_assign_scaled(&mut self, other: &Dense<T>, coeff: C<T>) {
        for (x, y) in self.a.iter_mut().zip(other.a.iter()) {
            *x += coeff * *y;
        }
    }

    fn difference(&self, other: &Dense<T>) -> Dense<T> {
        let mut out = Dense {
            n: self.n,
            a: self.a.clone(),
        };
        out.sub_assign(other);
        out
    }

    fn max_abs_diff(&self, other: &Dense<T>) -> T {
        self.a
            .iter()
            .zip(other.a.iter())
            .map(|(x, y)| (*x - *y).norm_sqr())
            .fold(T::zero(), |acc, v| if v > acc { v } else { acc })
            .sqrt()
    }
}

/// Violations of the two generic level-1 defining relations on one
/// particle-number block.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DrinfeldBlock {
    pub total_particles: usize,
    pub dim: usize,
    /// `[J_l, [J_m, I_n]] - [I_l, [J_m, J_n]]` against the quartic weight
    /// contraction of pure level-0 triples, swept over all thousand index
    /// triples.
    pub first_relation: f64,
    /// Double-bracket relation against the contraction applied to mixed
    /// triples `{I_a, I_b, J_g}`, swept over all index-pair combinations.
    pub second_relation_mixed_triple: f64,
    /// The same left side against the contraction applied to pure level-0
    /// triples; recorded to document that only the mixed form closes.
    pub second_relation_level0_triple: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DrinfeldReport {
    /// Deviation of the structure-constant contraction from the bracket on
    /// the defining four-dimensional representation.
    pub structure_closure: f64,
    /// Largest weight magnitude in the quartic contraction tensor.
    pub max_weight: f64,
    pub blocks: Vec<DrinfeldBlock>,
}

/// Integer quartic contraction weights: entry `[(lmn), (abg)]` holds
/// `sum c_las c_mbt c_ngr c_str` divided by `i^4 = 1`, stored times 24 so
/// the true weight is `w / 24`.
fn weight_tensor() -> Vec<i64> {
    let sc = so5_structure_constants();
    let mut nonzeros: Vec<(usize, usize, usize, i64)> = Vec::new();
    for l in 0..10 {
        for m in 0..10 {
            for n in 0..10 {
                let v = sc.coeff[l][m][n];
                if v != 0 {
                    nonzeros.push((l, m, n, v));
                }
            }
        }
    }
    let mut by_first_two: Vec<Vec<Vec<(usize, i64)>>> = vec![vec![Vec::new(); 10]; 10];
    let mut by_third: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); 10];
    for &(l, m, n, v) in &nonzeros {
        by_first_two[l][m].push((n, v));
        by_third[n].push((l, m, v));
    }
    let mut weights = vec![0i64; 1_000_000];
    for &(l, alpha, sigma, v1) in &nonzeros {
        for &(m, beta, tau, v2) in &nonzeros {
            let v12 = v1 * v2;
            for &(rho, v4) in &by_first_two[sigma][tau] {
                for &(n, gamma, v3) in &by_third[rho] {
                    let idx = ((l * 10 + m) * 10 + n) * 1000 + alpha * 100 + beta * 10 + gamma;
                    weights[idx] += v12 * v3 * v4;
                }
            }
        }
    }
    weights
}

fn structure_closure_deviation<T: Scalar>(rep: &GammaRep<T>) -> f64 {
    let sc = so5_structure_constants();
    let set = rep.closure_set();
    let dim = set[0].nrows();
    let mut worst = T::zero();
    for l in 0..10 {
        for m in 0..10 {
            let lhs = set[l]
                .commutator(&set[m])
                .expect("equal dimensions by construction");
            let mut rhs = CsrMatrix::zeros(dim, dim);
            for (n, gen) in set.iter().enumerate() {
                let c = sc.complex::<T>(l, m, n);
                if c.re != T::zero() || c.im != T::zero() {
                    rhs = rhs.add_scaled(gen, c);
                }
            }
            let v = lhs.sub(&rhs).max_abs();
            if v > worst {
                worst = v;
            }
        }
    }
    worst.to_f64().unwrap_or(f64::INFINITY)
}

fn sorted3(a: usize, b: usize, c: usize) -> (usize, usize, usize) {
    let mut v = [a, b, c];
    v.sort_unstable();
    (v[0], v[1], v[2])
}

/// Sweep both generic level-1 defining relations for the bare realization
/// on two sites, restricted to the listed total particle numbers.
pub fn check_drinfeld_relations<T: Scalar>(
    rep: &GammaRep<T>,
    h: T,
    blocks: &[usize],
) -> Result<DrinfeldReport> {
    let structure_closure = structure_closure_deviation(rep);
    let weights = weight_tensor();
    let max_weight = weights.iter().map(|w| w.abs()).max().unwrap_or(0) as f64 / 24.0;
    let sc = so5_structure_constants();
    let h2 = h * h;
    let unit_weight = T::from(1.0 / 24.0).expect("constant fits") * h2;
    let mut out_blocks = Vec::with_capacity(blocks.len());
    for &n_particles in blocks {
        let basis = total_number_basis(2, n_particles)?;
        let gens = build_currents_on_basis(&basis, None, rep, h, USign::Plus)?;
        let dim = basis.dim();
        let i_set: Vec<Dense<T>> = gens.level0.iter().map(Dense::from_csr).collect();
        let j_set: Vec<Dense<T>> = gens.level1.iter().map(Dense::from_csr).collect();

        let pair_ii: Vec<Vec<Dense<T>>> = (0..10)
            .map(|p| (0..10).map(|q| i_set[p].matmul(&i_set[q])).collect())
            .collect();
        let pair_ij: Vec<Vec<Dense<T>>> = (0..10)
            .map(|p| (0..10).map(|q| i_set[p].matmul(&j_set[q])).collect())
            .collect();
        let pair_ji: Vec<Vec<Dense<T>>> = (0..10)
            .map(|p| (0..10).map(|q| j_set[p].matmul(&i_set[q])).collect())
            .collect();
        let pair_jj: Vec<Vec<Dense<T>>> = (0..10)
            .map(|p| (0..10).map(|q| j_set[p].matmul(&j_set[q])).collect())
            .collect();

        let mut pure_store: Vec<Option<Dense<T>>> = (0..1000).map(|_| None).collect();
        for a in 0..10 {
            for b in a..10 {
                for g in b..10 {
                    let mut s = pair_ii[a][b].matmul(&i_set[g]);
                    s.add_assign(&pair_ii[b][a].matmul(&i_set[g]));
                    s.add_assign(&pair_ii[a][g].matmul(&i_set[b]));
                    s.add_assign(&pair_ii[g][a].matmul(&i_set[b]));
                    s.add_assign(&pair_ii[b][g].matmul(&i_set[a]));
                    s.add_assign(&pair_ii[g][b].matmul(&i_set[a]));
                    pure_store[(a * 10 + b) * 10 + g] = Some(s);
                }
            }
        }
        let pure_triple = |a: usize, b: usize, g: usize| -> &Dense<T> {
            let (x, y, z) = sorted3(a, b, g);
            pure_store[(x * 10 + y) * 10 + z].as_ref().expect("precomputed")
        };

        let mut mixed_store: Vec<Option<Dense<T>>> = (0..1000).map(|_| None).collect();
        for a in 0..10 {
            for b in a..10 {
                for g in 0..10 {
                    let mut s = pair_ii[a][b].matmul(&j_set[g]);
                    s.add_assign(&pair_ii[b][a].matmul(&j_set[g]));
                    s.add_assign(&pair_ij[a][g].matmul(&i_set[b]));
                    s.add_assign(&pair_ij[b][g].matmul(&i_set[a]));
                    s.add_assign(&pair_ji[g][a].matmul(&i_set[b]));
                    s.add_assign(&pair_ji[g][b].matmul(&i_set[a]));
                    mixed_store[(a * 10 + b) * 10 + g] = Some(s);
                }
            }
        }
        let mixed_triple = |a: usize, b: usize, g: usize| -> &Dense<T> {
            let (x, y) = if a <= b { (a, b) } else { (b, a) };
            mixed_store[(x * 10 + y) * 10 + g].as_ref().expect("precomputed")
        };

        let weighted_sum = |lmn: usize, mixed: bool| -> Dense<T> {
            let mut rhs = Dense::zeros(dim);
            let base = lmn * 1000;
            for (abg, &w) in weights[base..base + 1000].iter().enumerate() {
                if w == 0 {
                    continue;
                }
                let (a, b, g) = (abg / 100, (abg / 10) % 10, abg % 10);
                let triple = if mixed {
                    mixed_triple(a, b, g)
                } else {
                    pure_triple(a, b, g)
                };
                let coeff = re::<T>(T::from(w).expect("small weight fits") * unit_weight);
                rhs.add_assign_scaled(triple, coeff);
            }
            rhs
        };

        let contracted_pure: Vec<Dense<T>> =
            (0..1000).map(|lmn| weighted_sum(lmn, false)).collect();
        let contracted_mixed: Vec<Dense<T>> =
            (0..1000).map(|lmn| weighted_sum(lmn, true)).collect();

        let mut first_relation = T::zero();
        for m in 0..10 {
            for n in 0..10 {
                let jm_in = pair_ji[m][n].difference(&pair_ij[n][m]);
                let jm_jn = pair_jj[m][n].difference(&pair_jj[n][m]);
                for l in 0..10 {
                    let mut lhs = j_set[l].commutator(&jm_in);
                    lhs.sub_assign(&i_set[l].commutator(&jm_jn));
                    let v = lhs.max_abs_diff(&contracted_pure[(l * 10 + m) * 10 + n]);
                    if v > first_relation {
                        first_relation = v;
                    }
                }
            }
        }

        let k_comms: Vec<Vec<Dense<T>>> = (0..10)
            .map(|l| {
                (0..10)
                    .map(|m| pair_jj[l][m].difference(&pair_jj[m][l]))
                    .collect()
            })
            .collect();
        let p_comms: Vec<Vec<Dense<T>>> = (0..10)
            .map(|l| {
                (0..10)
                    .map(|m| pair_ij[l][m].difference(&pair_ji[m][l]))
                    .collect()
            })
            .collect();

        let contracted = |lm: (usize, usize), st: (usize, usize), store: &[Dense<T>]| {
            let mut rhs = Dense::zeros(dim);
            for nu in 0..10 {
                let c_st = sc.coeff[st.0][st.1][nu];
                if c_st != 0 {
                    rhs.add_assign_scaled(
                        &store[(lm.0 * 10 + lm.1) * 10 + nu],
                        imag_unit::<T>().scale(T::from(c_st).expect("small weight fits")),
                    );
                }
                let c_lm = sc.coeff[lm.0][lm.1][nu];
                if c_lm != 0 {
                    rhs.add_assign_scaled(
                        &store[(st.0 * 10 + st.1) * 10 + nu],
                        imag_unit::<T>().scale(T::from(c_lm).expect("small weight fits")),
                    );
                }
            }
            rhs
        };

        let mut second_mixed = T::zero();
        let mut second_pure = T::zero();
        for flat_lm in 0..100usize {
            let lm = (flat_lm / 10, flat_lm % 10);
            for flat_st in flat_lm..100usize {
                let st = (flat_st / 10, flat_st % 10);
                let mut lhs = k_comms[lm.0][lm.1].commutator(&p_comms[st.0][st.1]);
                lhs.add_assign(&k_comms[st.0][st.1].commutator(&p_comms[lm.0][lm.1]));
                let v = lhs.max_abs_diff(&contracted(lm, st, &contracted_mixed));
                if v > second_mixed {
                    second_mixed = v;
                }
                let v = lhs.max_abs_diff(&contracted(lm, st, &contracted_pure));
                if v > second_pure {
                    second_pure = v;
                }
            }
        }

        out_blocks.push(DrinfeldBlock {
            total_particles: n_particles,
            dim,
            first_relation: first_relation.to_f64().unwrap_or(f64::INFINITY),
            second_relation_mixed_triple: second_mixed.to_f64().unwrap_or(f64::INFINITY),
            second_relation_level0_triple: second_pure.to_f64().unwrap_or(f64::INFINITY),
        });
    }
    Ok(DrinfeldReport {
        structure_closure,
        max_weight,
        blocks: out_blocks,
    })
}
