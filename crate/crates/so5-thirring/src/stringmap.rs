//! Statistics angles, counting strings, and string-deformed operators.
//!
//! A [`ThetaMatrix`] holds the exchange angles `theta_ij` between flavors.
//! The deformed annihilator attaches a diagonal phase
//! `exp[-i sum_k theta_ik phi_k(x)]` built from counting strings to the
//! bare operator, which trades plain anticommutation for exchange
//! relations with constant phases `e^{i theta_ij}` at separated sites.

use crate::error::{Result, So5Error};
use crate::fock::{annihilate_mode, mode, occupation, FockSpace, StateBasis, N_FLAVORS};
use crate::linalg::CsrMatrix;
use crate::report::ViolationReport;
use crate::scalar::{re, C, Scalar};
use serde::{Deserialize, Serialize};

/// Reduce an angle to the interval `(-pi, pi]`.
pub fn reduce_angle(x: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut y = x % tau;
    if y <= -std::f64::consts::PI {
        y += tau;
    } else if y > std::f64::consts::PI {
        y -= tau;
    }
    y
}

/// Deviation of an angle from zero mod 2 pi.
fn mod_tau_deviation(x: f64) -> f64 {
    reduce_angle(x).abs()
}

/// Antisymmetric matrix of exchange angles between the four flavors.
///
/// Invariants, both mod 2 pi: zero diagonal and `theta_ij + theta_ji = 0`.
/// Entries are reduced to `(-pi, pi]` on construction with the lower
/// triangle slaved to the upper, so equal angle classes have equal storage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[f64; 4]; 4]", into = "[[f64; 4]; 4]")]
pub struct ThetaMatrix {
    entries: [[f64; N_FLAVORS]; N_FLAVORS],
}

impl ThetaMatrix {
    /// Validation tolerance for the mod-2-pi invariants.
    pub const TOLERANCE: f64 = 1e-9;

    /// Validate and canonicalize a raw 4x4 angle matrix.
    pub fn new(raw: [[f64; N_FLAVORS]; N_FLAVORS]) -> Result<Self> {
        for (i, row) in raw.iter().enumerate() {
            let dev = mod_tau_deviation(row[i]);
            if dev > Self::TOLERANCE {
                return Err(So5Error::InvalidConfig(format!(
                    "zero-diagonal condition violated: theta[{i}][{i}] = {} \
                     is {dev:.3e} away from 0 mod 2 pi",
                    row[i]
                )));
            }
        }
        for i in 0..N_FLAVORS {
            for j in (i + 1)..N_FLAVORS {
                let dev = mod_tau_deviation(raw[i][j] + raw[j][i]);
                if dev > Self::TOLERANCE {
                    return Err(So5Error::InvalidConfig(format!(
                        "antisymmetry condition violated: theta[{i}][{j}] + theta[{j}][{i}] \
                         = {} is {dev:.3e} away from 0 mod 2 pi",
                        raw[i][j] + raw[j][i]
                    )));
                }
            }
        }
        let mut entries = [[0.0; N_FLAVORS]; N_FLAVORS];
        for i in 0..N_FLAVORS {
            for j in (i + 1)..N_FLAVORS {
                let e = reduce_angle(raw[i][j]);
                entries[i][j] = e;
                entries[j][i] = reduce_angle(-e);
            }
        }
        Ok(Self { entries })
    }

    /// The zero matrix (plain fermions).
    pub fn zero() -> Self {
        Self {
            entries: [[0.0; N_FLAVORS]; N_FLAVORS],
        }
    }

    /// Build from the six upper-triangle angles in the order
    /// `(01, 02, 03, 12, 13, 23)` (zero-based flavor pairs).
    pub fn from_upper(upper: [f64; 6]) -> Self {
        let mut entries = [[0.0; N_FLAVORS]; N_FLAVORS];
        let mut k = 0;
        for i in 0..N_FLAVORS {
            for j in (i + 1)..N_FLAVORS {
                let e = reduce_angle(upper[k]);
                entries[i][j] = e;
                entries[j][i] = reduce_angle(-e);
                k += 1;
            }
        }
        Self { entries }
    }

    /// Potential form `theta_ij = f_i - f_j`; always admissible.
    pub fn from_potential(f: [f64; N_FLAVORS]) -> Self {
        let mut upper = [0.0; 6];
        let mut k = 0;
        for i in 0..N_FLAVORS {
            for j in (i + 1)..N_FLAVORS {
                upper[k] = f[i] - f[j];
                k += 1;
            }
        }
        Self::from_upper(upper)
    }

    /// Angle between flavors `i` and `j` (zero-based).
    pub fn angle(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[[f64; N_FLAVORS]; N_FLAVORS] {
        &self.entries
    }

    /// The six upper-triangle angles in `(01, 02, 03, 12, 13, 23)` order.
    pub fn upper(&self) -> [f64; 6] {
        [
            self.entries[0][1],
            self.entries[0][2],
            self.entries[0][3],
            self.entries[1][2],
            self.entries[1][3],
            self.entries[2][3],
        ]
    }
}

impl TryFrom<[[f64; N_FLAVORS]; N_FLAVORS]> for ThetaMatrix {
    type Error = So5Error;

    fn try_from(raw: [[f64; N_FLAVORS]; N_FLAVORS]) -> Result<Self> {
        Self::new(raw)
    }
}

impl From<ThetaMatrix> for [[f64; N_FLAVORS]; N_FLAVORS] {
    fn from(theta: ThetaMatrix) -> Self {
        theta.entries
    }
}

/// How the counting string treats the operator's own site.
///
/// `Exclusive` counts strictly earlier sites only; `Midpoint` adds half of
/// the occupation at the operator's site, the symmetric convention used by
/// the hopping terms of the diagonalized Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StringConvention {
    Exclusive,
    Midpoint,
}

/// Diagonal of the counting string `phi_f(x) = sum_{y<x} n_f(y)` over a
/// basis (zero-based flavor).
pub fn counting_vector(basis: &StateBasis, flavor0: usize, site: usize) -> Vec<u32> {
    let dim = basis.dim();
    let mut out = vec![0u32; dim];
    for (idx, val) in out.iter_mut().enumerate() {
        let s = basis.state(idx);
        let mut count = 0u32;
        for y in 0..site {
            count += occupation(s, mode(y, flavor0)) as u32;
        }
        *val = count;
    }
    out
}

/// Counting-string operator `phi_flavor(site)`: the diagonal matrix of
/// particles of that flavor strictly left of `site`. One-based flavor.
pub fn counting_string<T: Scalar>(
    space: &FockSpace,
    flavor: usize,
    site: usize,
) -> Result<CsrMatrix<T>> {
    let f = crate::fock::flavor_index(flavor)?;
    if site >= space.n_sites() {
        return Err(So5Error::IndexOutOfRange {
            what: "site",
            value: site,
            lo: 0,
            hi: space.n_sites() - 1,
        });
    }
    let diag: Vec<C<T>> = counting_vector(space.basis(), f, site)
        .into_iter()
        .map(|c| re(T::from(c).expect("small count fits")))
        .collect();
    Ok(CsrMatrix::from_diagonal(&diag))
}

/// String-weight argument `sum_k theta_row[k] phi_k(site)` on one state,
/// where the midpoint convention adds half the occupation at `site` to
/// each string.
pub fn string_phase_arg_on_state(
    theta_row: &[f64; N_FLAVORS],
    convention: StringConvention,
    s: u64,
    site: usize,
) -> f64 {
    let mut arg = 0.0f64;
    for (k, &theta) in theta_row.iter().enumerate() {
        if theta == 0.0 {
            continue;
        }
        let mut weight = 0.0f64;
        for y in 0..site {
            weight += occupation(s, mode(y, k)) as f64;
        }
        if convention == StringConvention::Midpoint {
            weight += 0.5 * occupation(s, mode(site, k)) as f64;
        }
        arg += theta * weight;
    }
    arg
}

/// Phase diagonal `exp[-i sum_k theta_ik phi_k(site)]` for flavor `i`
/// (zero-based) over a basis, from raw angle entries.
///
/// With [`StringConvention::Midpoint`] the string also picks up half the
/// occupation at `site` itself for every flavor; the own-flavor term drops
/// out through the zero diagonal of theta.
pub fn raw_string_phases<T: Scalar>(
    basis: &StateBasis,
    raw: &[[f64; N_FLAVORS]; N_FLAVORS],
    convention: StringConvention,
    flavor0: usize,
    site: usize,
) -> Vec<C<T>> {
    let dim = basis.dim();
    let mut out = Vec::with_capacity(dim);
    for idx in 0..dim {
        let arg = string_phase_arg_on_state(&raw[flavor0], convention, basis.state(idx), site);
        let a = T::from(-arg).expect("angle fits");
        out.push(C::from_polar(T::one(), a));
    }
    out
}

/// Phase diagonal for a validated angle matrix.
pub fn string_phases<T: Scalar>(
    basis: &StateBasis,
    theta: &ThetaMatrix,
    convention: StringConvention,
    flavor0: usize,
    site: usize,
) -> Vec<C<T>> {
    raw_string_phases(basis, theta.entries(), convention, flavor0, site)
}

/// String-deformed annihilator `Phi_i(x)` on an arbitrary basis
/// (zero-based flavor): the diagonal phase applied after the bare
/// annihilator.
pub fn deformed_annihilator<T: Scalar>(
    basis: &StateBasis,
    theta: &ThetaMatrix,
    convention: StringConvention,
    flavor0: usize,
    site: usize,
) -> CsrMatrix<T> {
    let phases = string_phases::<T>(basis, theta, convention, flavor0, site);
    let m = mode(site, flavor0);
    let dim = basis.dim();
    let mut triplets = Vec::new();
    for col in 0..dim {
        let s = basis.state(col);
        let Some((s2, sign)) = annihilate_mode(s, m) else {
            continue;
        };
        if let Some(row) = basis.position(s2) {
            let v = phases[row].scale(T::from(sign).expect("sign fits"));
            triplets.push((row, col, v));
        }
    }
    CsrMatrix::from_triplets(dim, dim, triplets)
}

/// String-deformed annihilator on the full space with one-based flavor,
/// exclusive string:
/// `Phi_i(x) = exp[-i sum_k theta_ik phi_k(x)] psi_i(x)`.
pub fn deformed_operator<T: Scalar>(
    space: &FockSpace,
    theta: &ThetaMatrix,
    flavor: usize,
    site: usize,
) -> Result<CsrMatrix<T>> {
    let f = crate::fock::flavor_index(flavor)?;
    if site >= space.n_sites() {
        return Err(So5Error::IndexOutOfRange {
            what: "site",
            value: site,
            lo: 0,
            hi: space.n_sites() - 1,
        });
    }
    Ok(deformed_annihilator(
        space.basis(),
        theta,
        StringConvention::Exclusive,
        f,
        site,
    ))
}

/// Outcome of the exchange-relation sweep.
///
/// `separated` collects all site pairs `x != y` plus the same-flavor
/// coincident cases, where the relations hold exactly. `coincident_cross`
/// holds the `x = y, i != j` residuals of the phase-twisted relations,
/// which the exclusive string does not enforce; `coincident_plain` shows
/// that those pairs instead anticommute plainly.
#[derive(Debug, Clone)]
pub struct ZfReport {
    pub separated: ViolationReport,
    pub coincident_cross: ViolationReport,
    pub coincident_plain: ViolationReport,
}

/// Sweep the deformed exchange relations over all flavor and site pairs.
///
/// For each pair, three residuals:
/// `Phi_i(x) Phi_j(y) + e^{i theta_ij} Phi_j(y) Phi_i(x)`, the daggered
/// version with the same phase, and
/// `Phi_i(x) Phi_j+(y) + e^{-i theta_ij} Phi_j+(y) Phi_i(x) - delta_ij delta_xy`.
pub fn check_zf<T: Scalar>(space: &FockSpace, theta: &ThetaMatrix) -> Result<ZfReport> {
    let basis = space.basis();
    let n_sites = space.n_sites();
    let dim = basis.dim();
    let mut ops: Vec<Vec<CsrMatrix<T>>> = Vec::with_capacity(N_FLAVORS);
    for f in 0..N_FLAVORS {
        let mut row = Vec::with_capacity(n_sites);
        for x in 0..n_sites {
            row.push(deformed_annihilator(
                basis,
                theta,
                StringConvention::Exclusive,
                f,
                x,
            ));
        }
        ops.push(row);
    }
    let identity = CsrMatrix::<T>::identity(dim);
    let mut separated = ViolationReport::new();
    let mut coincident_cross = ViolationReport::new();
    let mut coincident_plain = ViolationReport::new();
    for i in 0..N_FLAVORS {
        for j in 0..N_FLAVORS {
            let phase = C::from_polar(
                T::one(),
                T::from(theta.angle(i, j)).expect("angle fits"),
            );
            for x in 0..n_sites {
                for y in 0..n_sites {
                    let p_i = &ops[i][x];
                    let p_j = &ops[j][y];
                    let d_i = p_i.adjoint();
                    let d_j = p_j.adjoint();
                    let e_exchange = p_i
                        .matmul(p_j)
                        .add_scaled(&p_j.matmul(p_i), phase)
                        .max_abs();
                    let e_exchange_dag = d_i
                        .matmul(&d_j)
                        .add_scaled(&d_j.matmul(&d_i), phase)
                        .max_abs();
                    let mut mixed = p_i.matmul(&d_j).add_scaled(&d_j.matmul(p_i), phase.conj());
                    if i == j && x == y {
                        mixed = mixed.sub(&identity);
                    }
                    let e_mixed = mixed.max_abs();
                    let label = |rel: &str| format!("{rel} f{}x{x} f{}x{y}", i + 1, j + 1);
                    let worst = [
                        ("exchange", e_exchange),
                        ("exchange+", e_exchange_dag),
                        ("mixed", e_mixed),
                    ];
                    if x == y && i != j {
                        for (rel, v) in worst {
                            coincident_cross.record(label(rel), v.to_f64().unwrap_or(f64::INFINITY));
                        }
                        let plain = p_i
                            .anticommutator(p_j)?
                            .max_abs()
                            .max(p_i.anticommutator(&d_j)?.max_abs());
                        coincident_plain
                            .record(label("plain"), plain.to_f64().unwrap_or(f64::INFINITY));
                    } else {
                        for (rel, v) in worst {
                            separated.record(label(rel), v.to_f64().unwrap_or(f64::INFINITY));
                        }
                    }
                }
            }
        }
    }
    Ok(ZfReport {
        separated,
        coincident_cross,
        coincident_plain,
    })
}

/// Double-exchange fixture: residual of exchanging a product twice with a
/// raw, possibly antisymmetry-breaking angle matrix.
///
/// Exchanging `Phi_i(x) Phi_j(y)` and back multiplies the product by
/// `e^{i(theta_ij + theta_ji)}`; returns the residual of that round trip
/// and the scale `|1 - e^{i(theta_ij + theta_ji)}| * |Phi_i Phi_j|`, which
/// bounds it from below when the angles fail antisymmetry.
pub fn double_exchange_residual(
    space: &FockSpace,
    raw: &[[f64; N_FLAVORS]; N_FLAVORS],
    flavors: (usize, usize),
    sites: (usize, usize),
) -> (f64, f64) {
    let basis = space.basis();
    let build = |f: usize, x: usize| -> CsrMatrix<f64> {
        let phases = raw_string_phases::<f64>(basis, raw, StringConvention::Exclusive, f, x);
        let m = mode(x, f);
        let dim = basis.dim();
        let mut triplets = Vec::new();
        for col in 0..dim {
            let Some((s2, sign)) = annihilate_mode(basis.state(col), m) else {
                continue;
            };
            let row = basis.position(s2).expect("full basis is closed");
            triplets.push((row, col, phases[row].scale(sign as f64)));
        }
        CsrMatrix::from_triplets(dim, dim, triplets)
    };
    let (i, j) = flavors;
    let (x, y) = sites;
    let p_i = build(i, x);
    let p_j = build(j, y);
    let product = p_i.matmul(&p_j);
    let round_trip = C::from_polar(1.0, raw[i][j] + raw[j][i]);
    let residual = product.scale(round_trip).sub(&product).max_abs();
    let scale = (C::new(1.0, 0.0) - round_trip).norm() * product.max_abs();
    (residual, scale)
}
