//! Five-dimensional Clifford algebra, so(5) generators, and closure checks.
//!
//! The five 4x4 Dirac matrices are built from Pauli tensor products and
//! frozen: the choice is the one for which the per-site current table in
//! [`crate::observables`] matches the physical-operator dictionary entry by
//! entry. The ten generators are `G^{ab} = -i G^a G^b` for `a < b`, and the
//! rescaled set `-(1/2) G^{ab}` closes under the so(5) bracket
//! `[I_ab, I_cd] = i(d_bc I_ad + d_ad I_bc - d_ac I_bd - d_bd I_ac)`.

use crate::error::{Result, So5Error};
use crate::linalg::CsrMatrix;
use crate::report::ViolationReport;
use crate::scalar::{imag_unit, re, C, Scalar};

/// Ordered generator index pairs `(a, b)` with `1 <= a < b <= 5`.
pub const SO5_PAIRS: [(usize, usize); 10] = [
    (1, 2),
    (1, 3),
    (1, 4),
    (1, 5),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 4),
    (3, 5),
    (4, 5),
];

/// Position of the ordered pair `(a, b)`, `a < b`, in [`SO5_PAIRS`].
pub fn pair_index(a: usize, b: usize) -> usize {
    SO5_PAIRS
        .iter()
        .position(|&p| p == (a, b))
        .expect("valid ordered pair")
}

/// Signed lookup of an antisymmetric pair family: returns
/// `(index, sign)` with `X_ab = sign * stored[index]`, or `None` when the
/// indices coincide or leave `1..=5`.
pub fn signed_pair_index(a: usize, b: usize) -> Option<(usize, f64)> {
    if a == b || !(1..=5).contains(&a) || !(1..=5).contains(&b) {
        None
    } else if a < b {
        Some((pair_index(a, b), 1.0))
    } else {
        Some((pair_index(b, a), -1.0))
    }
}

/// The five Dirac matrices and the ten so(5) generators in one fixed
/// 4-dimensional representation.
#[derive(Debug, Clone)]
pub struct GammaRep<T: Scalar> {
    /// Dirac matrices `G^1..G^5`, each Hermitian with square one.
    pub gammas: [CsrMatrix<T>; 5],
    /// Generators `G^{ab} = -i G^a G^b`, indexed by [`SO5_PAIRS`].
    pub generators: [CsrMatrix<T>; 10],
}

fn kron2<T: Scalar>(a: &[[C<T>; 2]; 2], b: &[[C<T>; 2]; 2]) -> CsrMatrix<T> {
    let mut triplets = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let v = a[i][j] * b[k][l];
                    triplets.push((2 * i + k, 2 * j + l, v));
                }
            }
        }
    }
    CsrMatrix::from_triplets(4, 4, triplets)
}

fn pauli<T: Scalar>(which: char) -> [[C<T>; 2]; 2] {
    let z = C::new(T::zero(), T::zero());
    let one = C::new(T::one(), T::zero());
    let i = imag_unit::<T>();
    match which {
        'x' => [[z, one], [one, z]],
        'y' => [[z, -i], [i, z]],
        'z' => [[one, z], [z, -one]],
        'i' => [[one, z], [z, one]],
        _ => unreachable!("pauli label"),
    }
}

/// The fixed Dirac representation.
///
/// `G^1 = -sy x sy`, `G^2 = -1 x sx`, `G^3 = -sz x sy`, `G^4 = -1 x sz`,
/// `G^5 = -sx x sy` (Pauli tensor products). Deterministic: every call
/// returns identical matrices.
pub fn gamma_rep<T: Scalar>() -> GammaRep<T> {
    let minus_one = re(-T::one());
    let g1 = kron2(&pauli::<T>('y'), &pauli('y')).scale(minus_one);
    let g2 = kron2(&pauli::<T>('i'), &pauli('x')).scale(minus_one);
    let g3 = kron2(&pauli::<T>('z'), &pauli('y')).scale(minus_one);
    let g4 = kron2(&pauli::<T>('i'), &pauli('z')).scale(minus_one);
    let g5 = kron2(&pauli::<T>('x'), &pauli('y')).scale(minus_one);
    let gammas = [g1, g2, g3, g4, g5];
    let minus_i = -imag_unit::<T>();
    let generators: [CsrMatrix<T>; 10] = SO5_PAIRS
        .map(|(a, b)| gammas[a - 1].matmul(&gammas[b - 1]).scale(minus_i));
    GammaRep { gammas, generators }
}

impl<T: Scalar> GammaRep<T> {
    /// Generator `G^{ab}` with antisymmetric index handling (`a != b`).
    pub fn generator(&self, a: usize, b: usize) -> CsrMatrix<T> {
        let (idx, sign) = signed_pair_index(a, b).expect("distinct indices");
        self.generators[idx].scale(re(T::from(sign).expect("small integer fits")))
    }

    /// The ten matrices `-(1/2) G^{ab}` that close under the so(5) bracket.
    pub fn closure_set(&self) -> Vec<CsrMatrix<T>> {
        let half = re(T::from(-0.5).expect("half fits"));
        self.generators.iter().map(|g| g.scale(half)).collect()
    }
}

/// so(5) structure constants in the pair-index basis.
///
/// Stored as integer multiples of `i`: `[I_l, I_m] = sum_n i * m[l][m][n] I_n`
/// with `m[l][m][n]` in `{-1, 0, 1}`, so antisymmetry and the Jacobi
/// identity can be checked in exact integer arithmetic.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    pub coeff: [[[i64; 10]; 10]; 10],
}

impl StructureConstants {
    /// Structure constant as a complex number.
    pub fn complex<T: Scalar>(&self, l: usize, m: usize, n: usize) -> C<T> {
        imag_unit::<T>().scale(T::from(self.coeff[l][m][n] as f64).expect("small integer"))
    }

    /// Exact integer Jacobi residual
    /// `sum_r (c_lmr c_rns + c_mnr c_rls + c_nlr c_rms)`, maximized over all
    /// `(l, m, n, s)`. Zero for a Lie algebra. The double-`i` from nested
    /// brackets contributes a common factor `i^2 = -1` that drops out.
    pub fn jacobi_residual(&self) -> i64 {
        let mut worst = 0i64;
        for l in 0..10 {
            for m in 0..10 {
                for n in 0..10 {
                    for s in 0..10 {
                        let mut acc = 0i64;
                        for r in 0..10 {
                            acc += self.coeff[l][m][r] * self.coeff[r][n][s]
                                + self.coeff[m][n][r] * self.coeff[r][l][s]
                                + self.coeff[n][l][r] * self.coeff[r][m][s];
                        }
                        worst = worst.max(acc.abs());
                    }
                }
            }
        }
        worst
    }
}

/// Structure constants read off from the so(5) bracket pattern
/// `[I_ab, I_cd] = i(d_bc I_ad + d_ad I_bc - d_ac I_bd - d_bd I_ac)`.
pub fn so5_structure_constants() -> StructureConstants {
    let mut coeff = [[[0i64; 10]; 10]; 10];
    let mut add = |l: usize, m: usize, a: usize, b: usize, sign: i64| {
        if a == b {
            return;
        }
        if a < b {
            coeff[l][m][pair_index(a, b)] += sign;
        } else {
            coeff[l][m][pair_index(b, a)] -= sign;
        }
    };
    for (l, &(a, b)) in SO5_PAIRS.iter().enumerate() {
        for (m, &(c, d)) in SO5_PAIRS.iter().enumerate() {
            if b == c {
                add(l, m, a, d, 1);
            }
            if a == d {
                add(l, m, b, c, 1);
            }
            if a == c {
                add(l, m, b, d, -1);
            }
            if b == d {
                add(l, m, a, c, -1);
            }
        }
    }
    StructureConstants { coeff }
}

/// Residual of the so(5) bracket relation over all pair combinations.
///
/// `generators` must hold the ten operators indexed by [`SO5_PAIRS`], all of
/// the same dimension. Returns the max-norm of
/// `[I_ab, I_cd] - i(d_bc I_ad + d_ad I_bc - d_ac I_bd - d_bd I_ac)` per
/// pair combination, and the overall maximum.
pub fn check_so5_closure<T: Scalar>(generators: &[CsrMatrix<T>]) -> Result<ViolationReport> {
    if generators.len() != 10 {
        return Err(So5Error::InvalidConfig(format!(
            "expected 10 generators indexed by ordered pairs, got {}",
            generators.len()
        )));
    }
    let dim = generators[0].nrows();
    for g in generators {
        if g.nrows() != dim || g.ncols() != dim {
            return Err(So5Error::DimensionMismatch {
                left: dim,
                right: g.nrows(),
                context: "so(5) closure generator set".to_string(),
            });
        }
    }
    let lookup = |a: usize, b: usize| -> Option<(usize, T)> {
        signed_pair_index(a, b).map(|(i, s)| (i, T::from(s).expect("sign fits")))
    };
    let mut report = ViolationReport::new();
    for &(a, b) in SO5_PAIRS.iter() {
        for &(c, d) in SO5_PAIRS.iter() {
            let lhs = generators[pair_index(a, b)].commutator(&generators[pair_index(c, d)])?;
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
                if let Some((idx, sign)) = lookup(x, y) {
                    rhs = rhs.add_scaled(&generators[idx], imag_unit::<T>().scale(orient * sign));
                }
            }
            let violation = lhs.sub(&rhs).max_abs();
            report.record(
                format!("[I_{a}{b}, I_{c}{d}]"),
                violation.to_f64().unwrap_or(f64::INFINITY),
            );
        }
    }
    Ok(report)
}
