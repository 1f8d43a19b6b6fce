//! Exchange angles from couplings, admissibility, and the Bethe ansatz.
//!
//! The momenta of the free Hamiltonian's eigenstates are quantized by the
//! counting strings: moving a particle of flavor `p` around the ring
//! collects the exchange phases of every other particle, so
//! `k_j L = -sum_{q != p} n_q theta_pq + 2 pi l_j`. The closed-form
//! momenta, energies, wavefunctions, and Fock-space state vectors built
//! here serve as the oracle for exact diagonalization.

use crate::error::{Result, So5Error};
use crate::fock::{bit_combinations_of, create_mode, mode, FockSpace, StateBasis, N_FLAVORS};
use crate::linalg::vec_norm;
use crate::model::CouplingConfig;
use crate::scalar::C;
use crate::stringmap::{
    reduce_angle, string_phase_arg_on_state, StringConvention, ThetaMatrix,
};
use rand::Rng;
use serde::Serialize;

/// Exchange angles `theta_ij = (2 g / v) c_pair_ij / (c_i - c_j)` from a
/// coupling set; antisymmetric by construction.
///
/// Fails when two coupled flavors share a hopping weight (the angle would
/// divide by zero); uncoupled degenerate pairs get angle zero.
pub fn theta_from_couplings(cfg: &CouplingConfig) -> Result<ThetaMatrix> {
    let mut upper = [0.0f64; 6];
    let mut k = 0;
    for i in 0..N_FLAVORS {
        for j in (i + 1)..N_FLAVORS {
            if cfg.c_pair[i][j] != 0.0 {
                let gap = cfg.c[i] - cfg.c[j];
                if gap == 0.0 {
                    return Err(So5Error::InvalidConfig(format!(
                        "flavors {} and {} are coupled but share hopping weight {}; \
                         no exchange angle exists",
                        i + 1,
                        j + 1,
                        cfg.c[i]
                    )));
                }
                upper[k] = (2.0 * cfg.g / cfg.v) * cfg.c_pair[i][j] / gap;
            }
            k += 1;
        }
    }
    Ok(ThetaMatrix::from_upper(upper))
}

/// Result of sweeping the potential-difference constraints
/// `theta_im - theta_jm = theta_in - theta_jn (mod 2 pi)` over all index
/// quadruples.
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub max_deviation: f64,
    /// Quadruple `(i, j, m, n)` realizing the max deviation.
    pub worst: (usize, usize, usize, usize),
    pub breakdown: Vec<((usize, usize, usize, usize), f64)>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self, tolerance: f64) -> bool {
        self.max_deviation <= tolerance
    }
}

/// Evaluate every potential-difference constraint on an angle matrix.
///
/// Deviations are distances from the nearest multiple of 2 pi. An angle
/// matrix passes all constraints exactly iff it has the potential form
/// `theta_ij = f_i - f_j (mod 2 pi)`.
pub fn admissibility_check(theta: &ThetaMatrix) -> AdmissibilityReport {
    let mut report = AdmissibilityReport {
        max_deviation: 0.0,
        worst: (0, 1, 0, 1),
        breakdown: Vec::new(),
    };
    for i in 0..N_FLAVORS {
        for j in 0..N_FLAVORS {
            if i == j {
                continue;
            }
            for m in 0..N_FLAVORS {
                for n in 0..N_FLAVORS {
                    if m == n {
                        continue;
                    }
                    let value = theta.angle(i, m) - theta.angle(j, m) - theta.angle(i, n)
                        + theta.angle(j, n);
                    let deviation = reduce_angle(value).abs();
                    if deviation > report.max_deviation {
                        report.max_deviation = deviation;
                        report.worst = (i, j, m, n);
                    }
                    report.breakdown.push(((i, j, m, n), deviation));
                }
            }
        }
    }
    report
}

/// Coupling-level admissibility: compose the angle formula with the
/// constraint sweep.
pub fn admissibility_from_couplings(cfg: &CouplingConfig) -> Result<AdmissibilityReport> {
    Ok(admissibility_check(&theta_from_couplings(cfg)?))
}

/// Require an admissible angle matrix; the error names the worst violated
/// constraint.
pub fn require_admissible(theta: &ThetaMatrix, tolerance: f64) -> Result<()> {
    let report = admissibility_check(theta);
    if report.is_admissible(tolerance) {
        Ok(())
    } else {
        let (i, j, m, n) = report.worst;
        Err(So5Error::InadmissibleTheta {
            i,
            j,
            m,
            n,
            deviation: report.max_deviation,
        })
    }
}

/// Constraint rows of the potential-difference system over the six
/// independent angles, ordered `(01, 02, 03, 12, 13, 23)`; integer
/// coefficients.
pub fn admissibility_constraint_rows() -> Vec<[i64; 6]> {
    let var = |i: usize, j: usize| -> Option<(usize, i64)> {
        if i == j {
            return None;
        }
        let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let idx = match (a, b) {
            (0, 1) => 0,
            (0, 2) => 1,
            (0, 3) => 2,
            (1, 2) => 3,
            (1, 3) => 4,
            (2, 3) => 5,
            _ => unreachable!("pair within range"),
        };
        Some((idx, sign))
    };
    let mut rows = Vec::new();
    for i in 0..N_FLAVORS {
        for j in 0..N_FLAVORS {
            if i == j {
                continue;
            }
            for m in 0..N_FLAVORS {
                for n in 0..N_FLAVORS {
                    if m == n {
                        continue;
                    }
                    let mut row = [0i64; 6];
                    for (a, b, c) in [(i, m, 1), (j, m, -1), (i, n, -1), (j, n, 1)] {
                        if let Some((idx, sign)) = var(a, b) {
                            row[idx] += c * sign;
                        }
                    }
                    if row.iter().any(|&x| x != 0) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    rows
}

/// Rank of an integer matrix with six columns, by fraction-free Gaussian
/// elimination; exact.
pub fn integer_rank(rows: &[[i64; 6]]) -> usize {
    let mut m: Vec<[i128; 6]> = rows
        .iter()
        .map(|r| {
            let mut out = [0i128; 6];
            for (dst, &src) in out.iter_mut().zip(r.iter()) {
                *dst = src as i128;
            }
            out
        })
        .collect();
    let mut rank = 0;
    for col in 0..6 {
        let Some(pivot_row) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col];
        for r in (rank + 1)..m.len() {
            if m[r][col] == 0 {
                continue;
            }
            let factor = m[r][col];
            for c in 0..6 {
                m[r][c] = m[r][c] * pivot - m[rank][c] * factor;
            }
            let gcd = m[r].iter().fold(0i128, |acc, &x| gcd_i128(acc, x.abs()));
            if gcd > 1 {
                for c in m[r].iter_mut() {
                    *c /= gcd;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd_i128(b, a % b)
    }
}

/// Rank of the full admissibility constraint system; exactly 3.
pub fn admissibility_constraint_rank() -> usize {
    integer_rank(&admissibility_constraint_rows())
}

/// Number of free parameters among the six independent angles after the
/// potential-difference constraints; exactly 3.
pub fn gauge_freedom_dimension() -> usize {
    6 - admissibility_constraint_rank()
}

/// Draw an admissible angle matrix from uniform random potentials.
pub fn sample_admissible<R: Rng>(rng: &mut R) -> ThetaMatrix {
    let f: [f64; N_FLAVORS] = std::array::from_fn(|_| {
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)
    });
    ThetaMatrix::from_potential(f)
}

/// Draw a valid but otherwise unconstrained antisymmetric angle matrix.
pub fn sample_antisymmetric<R: Rng>(rng: &mut R) -> ThetaMatrix {
    let upper: [f64; 6] = std::array::from_fn(|_| {
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)
    });
    ThetaMatrix::from_upper(upper)
}

/// Draw an antisymmetric angle matrix whose admissibility deviation is at
/// least `min_deviation` (resamples until it is).
pub fn sample_inadmissible<R: Rng>(rng: &mut R, min_deviation: f64) -> ThetaMatrix {
    loop {
        let theta = sample_antisymmetric(rng);
        if admissibility_check(&theta).max_deviation >= min_deviation {
            return theta;
        }
    }
}

/// A solved Bethe state: occupations, quantum numbers, closed-form
/// momenta, and both energy conventions.
///
/// Particles are listed grouped by flavor in ascending flavor order;
/// `flavors[j]` is the zero-based flavor of particle `j`.
#[derive(Debug, Clone, Serialize)]
pub struct BetheState {
    pub length: f64,
    pub occupations: [usize; N_FLAVORS],
    pub quantum_numbers: Vec<i64>,
    pub flavors: Vec<usize>,
    pub momenta: Vec<f64>,
    /// `-v sum_j c_{p(j)} k_j`, the linear-dispersion energy.
    pub continuum_energy: f64,
    /// `-v sum_j c_{p(j)} sin k_j`, matching the lattice dispersion.
    pub lattice_energy: f64,
    pub theta: ThetaMatrix,
}

/// Solve the Bethe equations in closed form.
///
/// For a particle of flavor `p` with quantum number `l`,
/// `k = (-sum_{q != p} n_q theta_pq + 2 pi l) / length`. `length` may be
/// any positive real; lattice constructions additionally require it to be
/// the integer site count of the space they act on.
pub fn solve_bethe(
    length: f64,
    occupations: [usize; N_FLAVORS],
    quantum_numbers: &[i64],
    theta: &ThetaMatrix,
    cfg: &CouplingConfig,
) -> Result<BetheState> {
    if !length.is_finite() || length <= 0.0 {
        return Err(So5Error::InvalidConfig(format!(
            "length must be positive, got {length}"
        )));
    }
    let total: usize = occupations.iter().sum();
    if total != quantum_numbers.len() {
        return Err(So5Error::DimensionMismatch {
            left: total,
            right: quantum_numbers.len(),
            context: "occupations vs quantum numbers".to_string(),
        });
    }
    let mut flavors = Vec::with_capacity(total);
    for (p, &n) in occupations.iter().enumerate() {
        flavors.extend(std::iter::repeat_n(p, n));
    }
    let mut momenta = Vec::with_capacity(total);
    for (j, &p) in flavors.iter().enumerate() {
        let mut shift = 0.0f64;
        for q in 0..N_FLAVORS {
            if q != p {
                shift += occupations[q] as f64 * theta.angle(p, q);
            }
        }
        momenta.push((-shift + std::f64::consts::TAU * quantum_numbers[j] as f64) / length);
    }
    let continuum_energy = -cfg.v
        * flavors
            .iter()
            .zip(&momenta)
            .map(|(&p, &k)| cfg.c[p] * k)
            .sum::<f64>();
    let lattice_energy = -cfg.v
        * flavors
            .iter()
            .zip(&momenta)
            .map(|(&p, &k)| cfg.c[p] * k.sin())
            .sum::<f64>();
    Ok(BetheState {
        length,
        occupations,
        quantum_numbers: quantum_numbers.to_vec(),
        flavors,
        momenta,
        continuum_energy,
        lattice_energy,
        theta: *theta,
    })
}

/// Evaluate the Bethe wavefunction
/// `exp(i sum_j k_j x_j) prod_{j<j'} [1 - i tan(theta/2) eps(x_j - x_j')]`
/// at real positions (cross-flavor pairs only; same-flavor pairs carry no
/// factor).
///
/// Coincident positions of different flavors leave the sign function
/// undefined and are rejected.
pub fn bethe_amplitude(state: &BetheState, positions: &[f64]) -> Result<C<f64>> {
    let m = state.flavors.len();
    if positions.len() != m {
        return Err(So5Error::DimensionMismatch {
            left: m,
            right: positions.len(),
            context: "particles vs positions".to_string(),
        });
    }
    let phase: f64 = state
        .momenta
        .iter()
        .zip(positions)
        .map(|(&k, &x)| k * x)
        .sum();
    let mut amp = C::from_polar(1.0, phase);
    for j in 0..m {
        for jp in (j + 1)..m {
            let (p, q) = (state.flavors[j], state.flavors[jp]);
            if p == q {
                continue;
            }
            let d = positions[j] - positions[jp];
            if d == 0.0 {
                return Err(So5Error::AmbiguousSign {
                    flavor_a: p + 1,
                    flavor_b: q + 1,
                    position: positions[j],
                });
            }
            let eps = if d > 0.0 { 1.0 } else { -1.0 };
            let t = (state.theta.angle(p, q) * 0.5).tan();
            amp *= C::new(1.0, -t * eps);
        }
    }
    Ok(amp)
}

/// Which operator basis a Fock-space Bethe vector is assembled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateConstruction {
    /// Plane-wave amplitudes on products of string-deformed creators.
    Deformed,
    /// Step-phase amplitudes on products of bare creators.
    Bare,
}

fn integer_length(state: &BetheState, n_sites: usize) -> Result<usize> {
    if state.length == n_sites as f64 {
        Ok(n_sites)
    } else {
        Err(So5Error::InvalidConfig(format!(
            "state length {} does not match the {}-site space",
            state.length, n_sites
        )))
    }
}

/// Step-phase amplitude of the bare construction for one position tuple:
/// plane wave times, per cross pair in listing order, `e^{i theta}` when
/// the left particle sits right of the right one, `e^{i theta / 2}` at
/// coincidence, 1 otherwise.
fn step_amplitude(state: &BetheState, xs: &[usize]) -> C<f64> {
    let phase: f64 = state
        .momenta
        .iter()
        .zip(xs)
        .map(|(&k, &x)| k * x as f64)
        .sum();
    let mut arg = phase;
    let m = xs.len();
    for j in 0..m {
        for jp in (j + 1)..m {
            let theta = state.theta.angle(state.flavors[j], state.flavors[jp]);
            if theta == 0.0 {
                continue;
            }
            match xs[j].cmp(&xs[jp]) {
                std::cmp::Ordering::Greater => arg += theta,
                std::cmp::Ordering::Equal => arg += 0.5 * theta,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    C::from_polar(1.0, arg)
}

fn for_each_tuple(n_sites: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    let mut xs = vec![0usize; arity];
    loop {
        f(&xs);
        let mut pos = arity;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            xs[pos] += 1;
            if xs[pos] < n_sites {
                break;
            }
            xs[pos] = 0;
        }
    }
}

/// Bare-construction Bethe vector on an arbitrary basis, normalized.
///
/// Sums the step-phase wavefunction over all position tuples, applying
/// the bare creators rightmost first.
pub fn bethe_vector_on_basis(basis: &StateBasis, state: &BetheState) -> Result<Vec<C<f64>>> {
    let n_sites = integer_length(state, basis.n_sites())?;
    let m = state.flavors.len();
    let mut vec = vec![C::new(0.0, 0.0); basis.dim()];
    for_each_tuple(n_sites, m, |xs| {
        let mut s = 0u64;
        let mut sign = 1i32;
        for j in (0..m).rev() {
            let Some((s2, sg)) = create_mode(s, mode(xs[j], state.flavors[j])) else {
                return;
            };
            s = s2;
            sign *= sg;
        }
        if let Some(idx) = basis.position(s) {
            vec[idx] += step_amplitude(state, xs).scale(sign as f64);
        }
    });
    normalize(vec)
}

/// Fock-space Bethe vector on the full space, in either construction,
/// normalized.
///
/// The deformed construction uses plain plane-wave amplitudes on products
/// of midpoint-string deformed creators; the bare construction carries
/// the exchange step phases explicitly. Both assemble the same state.
pub fn build_fock_state(
    space: &FockSpace,
    state: &BetheState,
    construction: StateConstruction,
) -> Result<Vec<C<f64>>> {
    let n_sites = integer_length(state, space.n_sites())?;
    for &n in state.occupations.iter() {
        if n > n_sites {
            return Err(So5Error::IndexOutOfRange {
                what: "sector occupation",
                value: n,
                lo: 0,
                hi: n_sites,
            });
        }
    }
    match construction {
        StateConstruction::Bare => bethe_vector_on_basis(space.basis(), state),
        StateConstruction::Deformed => {
            let m = state.flavors.len();
            let basis = space.basis();
            let mut vec = vec![C::new(0.0, 0.0); basis.dim()];
            for_each_tuple(n_sites, m, |xs| {
                let phase: f64 = state
                    .momenta
                    .iter()
                    .zip(xs)
                    .map(|(&k, &x)| k * x as f64)
                    .sum();
                let mut amp = C::from_polar(1.0, phase);
                let mut s = 0u64;
                for j in (0..m).rev() {
                    let arg = string_phase_arg_on_state(
                        &state.theta.entries()[state.flavors[j]],
                        StringConvention::Midpoint,
                        s,
                        xs[j],
                    );
                    let Some((s2, sign)) = create_mode(s, mode(xs[j], state.flavors[j])) else {
                        return;
                    };
                    amp = amp * C::from_polar(1.0, arg) * (sign as f64);
                    s = s2;
                }
                if let Some(idx) = basis.position(s) {
                    vec[idx] += amp;
                }
            });
            normalize(vec)
        }
    }
}

fn normalize(mut vec: Vec<C<f64>>) -> Result<Vec<C<f64>>> {
    let norm = vec_norm(&vec);
    if norm == 0.0 {
        return Err(So5Error::InvalidConfig(
            "Bethe vector vanished; the position sum cancelled exactly".to_string(),
        ));
    }
    for v in &mut vec {
        *v = v.unscale(norm);
    }
    Ok(vec)
}

/// All quantum-number assignments with distinct integers `0..L` per
/// flavor, in flavor-grouped order; exactly `prod_p C(L, n_p)` of them,
/// matching the sector dimension.
pub fn enumerate_quantum_numbers(
    n_sites: usize,
    occupations: [usize; N_FLAVORS],
) -> Vec<Vec<i64>> {
    let per_flavor: Vec<Vec<Vec<i64>>> = occupations
        .iter()
        .map(|&n| {
            bit_combinations_of(n_sites, n)
                .into_iter()
                .map(|mask| {
                    (0..n_sites)
                        .filter(|&l| (mask >> l) & 1 == 1)
                        .map(|l| l as i64)
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<i64> = Vec::new();
    fn recurse(
        per_flavor: &[Vec<Vec<i64>>],
        level: usize,
        stack: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if level == per_flavor.len() {
            out.push(stack.clone());
            return;
        }
        for choice in &per_flavor[level] {
            let len = stack.len();
            stack.extend_from_slice(choice);
            recurse(per_flavor, level + 1, stack, out);
            stack.truncate(len);
        }
    }
    recurse(&per_flavor, 0, &mut stack, &mut out);
    out
}
