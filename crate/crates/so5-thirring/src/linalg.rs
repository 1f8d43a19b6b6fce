//! Sparse complex matrices and the small dense kernel used for spectra.
//!
//! Operators on the many-body space are stored in compressed sparse row
//! format with canonical (sorted, deduplicated) column order, so equality
//! of construction paths is reflected in equality of storage. The only
//! dense operation is Hermitian diagonalization of sector blocks, which is
//! delegated to `nalgebra`.

use crate::error::{Result, So5Error};
use crate::scalar::{C, Scalar};
use nalgebra::DMatrix;
use num_complex::Complex;

/// Square or rectangular sparse matrix over `Complex<T>` in CSR form.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T: Scalar> {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C<T>>,
}

impl<T: Scalar> CsrMatrix<T> {
    /// Matrix with no stored entries.
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let one = C::new(T::one(), T::zero());
        Self {
            nrows: dim,
            ncols: dim,
            indptr: (0..=dim).collect(),
            indices: (0..dim).collect(),
            values: vec![one; dim],
        }
    }

    /// Diagonal matrix from the given entries.
    pub fn from_diagonal(diag: &[C<T>]) -> Self {
        let mut triplets: Vec<(usize, usize, C<T>)> = Vec::with_capacity(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            triplets.push((i, i, v));
        }
        Self::from_triplets(diag.len(), diag.len(), triplets)
    }

    /// Build from (row, col, value) triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, mut t: Vec<(usize, usize, C<T>)>) -> Self {
        t.sort_unstable_by_key(|a| (a.0, a.1));
        let mut indptr = vec![0usize; nrows + 1];
        let mut indices = Vec::with_capacity(t.len());
        let mut values: Vec<C<T>> = Vec::with_capacity(t.len());
        let mut it = t.into_iter().peekable();
        while let Some((r, c, mut v)) = it.next() {
            while let Some(&(r2, c2, v2)) = it.peek() {
                if r2 == r && c2 == c {
                    v += v2;
                    it.next();
                } else {
                    break;
                }
            }
            if !is_zero(v) {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
            }
        }
        for r in 0..nrows {
            indptr[r + 1] += indptr[r];
        }
        Self {
            nrows,
            ncols,
            indptr,
            indices,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterator over the stored entries of one row as (col, value) pairs.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C<T>)> + '_ {
        let lo = self.indptr[r];
        let hi = self.indptr[r + 1];
        self.indices[lo..hi]
            .iter()
            .copied()
            .zip(self.values[lo..hi].iter().copied())
    }

    /// Entry accessor; zero when not stored.
    pub fn get(&self, r: usize, c: usize) -> C<T> {
        for (col, v) in self.row(r) {
            if col == c {
                return v;
            }
        }
        C::new(T::zero(), T::zero())
    }

    fn check_same_shape(&self, other: &Self, context: &str) -> Result<()> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(So5Error::DimensionMismatch {
                left: self.nrows,
                right: other.nrows,
                context: context.to_string(),
            });
        }
        Ok(())
    }

    /// Entry-wise linear combination `self + alpha * other`.
    pub fn add_scaled(&self, other: &Self, alpha: C<T>) -> Self {
        debug_assert_eq!(self.nrows, other.nrows);
        debug_assert_eq!(self.ncols, other.ncols);
        let mut indptr = vec![0usize; self.nrows + 1];
        let mut indices = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        for r in 0..self.nrows {
            let (mut i, hi_a) = (self.indptr[r], self.indptr[r + 1]);
            let (mut j, hi_b) = (other.indptr[r], other.indptr[r + 1]);
            while i < hi_a || j < hi_b {
                let v;
                let c;
                if j >= hi_b || (i < hi_a && self.indices[i] < other.indices[j]) {
                    c = self.indices[i];
                    v = self.values[i];
                    i += 1;
                } else if i >= hi_a || other.indices[j] < self.indices[i] {
                    c = other.indices[j];
                    v = alpha * other.values[j];
                    j += 1;
                } else {
                    c = self.indices[i];
                    v = self.values[i] + alpha * other.values[j];
                    i += 1;
                    j += 1;
                }
                if !is_zero(v) {
                    indices.push(c);
                    values.push(v);
                    indptr[r + 1] += 1;
                }
            }
        }
        for r in 0..self.nrows {
            indptr[r + 1] += indptr[r];
        }
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            indptr,
            indices,
            values,
        }
    }

    /// Sum of two matrices.
    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, C::new(T::one(), T::zero()))
    }

    /// Difference of two matrices.
    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, C::new(-T::one(), T::zero()))
    }

    /// Scalar multiple.
    pub fn scale(&self, alpha: C<T>) -> Self {
        if is_zero(alpha) {
            return Self::zeros(self.nrows, self.ncols);
        }
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= alpha;
        }
        out
    }

    /// Sparse-sparse product using a row-wise accumulator.
    pub fn matmul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.ncols, other.nrows);
        let mut indptr = vec![0usize; self.nrows + 1];
        let mut indices: Vec<usize> = Vec::new();
        let mut values: Vec<C<T>> = Vec::new();
        let zero = C::new(T::zero(), T::zero());
        let mut acc: Vec<C<T>> = vec![zero; other.ncols];
        let mut stamp: Vec<usize> = vec![usize::MAX; other.ncols];
        let mut touched: Vec<usize> = Vec::new();
        for r in 0..self.nrows {
            touched.clear();
            for (k, a) in self.row(r) {
                let lo = other.indptr[k];
                let hi = other.indptr[k + 1];
                for idx in lo..hi {
                    let c = other.indices[idx];
                    let contrib = a * other.values[idx];
                    if stamp[c] != r {
                        stamp[c] = r;
                        acc[c] = contrib;
                        touched.push(c);
                    } else {
                        acc[c] += contrib;
                    }
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                let v = acc[c];
                if !is_zero(v) {
                    indices.push(c);
                    values.push(v);
                    indptr[r + 1] += 1;
                }
            }
        }
        for r in 0..self.nrows {
            indptr[r + 1] += indptr[r];
        }
        Self {
            nrows: self.nrows,
            ncols: other.ncols,
            indptr,
            indices,
            values,
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut triplets = Vec::with_capacity(self.nnz());
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                triplets.push((c, r, v.conj()));
            }
        }
        Self::from_triplets(self.ncols, self.nrows, triplets)
    }

    /// Largest entry modulus; the max-norm used by every violation report.
    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .map(|v| v.norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> C<T> {
        let mut t = C::new(T::zero(), T::zero());
        for r in 0..self.nrows.min(self.ncols) {
            t += self.get(r, r);
        }
        t
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[C<T>]) -> Vec<C<T>> {
        debug_assert_eq!(self.ncols, x.len());
        let zero = C::new(T::zero(), T::zero());
        let mut y = vec![zero; self.nrows];
        for r in 0..self.nrows {
            let mut s = zero;
            for (c, v) in self.row(r) {
                s += v * x[c];
            }
            y[r] = s;
        }
        y
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "commutator")?;
        Ok(self.matmul(other).sub(&other.matmul(self)))
    }

    /// Anticommutator `{self, other}`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "anticommutator")?;
        Ok(self.matmul(other).add(&other.matmul(self)))
    }

    /// Deviation from Hermiticity, `max |A - A^dagger|`.
    pub fn hermiticity_deviation(&self) -> T {
        self.sub(&self.adjoint()).max_abs()
    }
}

fn is_zero<T: Scalar>(v: C<T>) -> bool {
    v.re == T::zero() && v.im == T::zero()
}

impl CsrMatrix<f64> {
    /// Dense copy, for handoff to the eigensolver.
    pub fn to_dense(&self) -> DMatrix<Complex<f64>> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                m[(r, c)] = v;
            }
        }
        m
    }
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.
///
/// Fails when the input deviates from Hermiticity by more than the given
/// tolerance.
pub fn hermitian_eigenvalues(h: &CsrMatrix<f64>, tolerance: f64) -> Result<Vec<f64>> {
    let dev = h.hermiticity_deviation();
    if dev > tolerance {
        return Err(So5Error::NotHermitian { deviation: dev });
    }
    if h.nrows() == 0 {
        return Ok(Vec::new());
    }
    let dense = h.to_dense();
    let eig = nalgebra::SymmetricEigen::new(dense);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    Ok(vals)
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(x: &[C<f64>]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian inner product `<x, y>` (conjugate-linear in the first slot).
pub fn vec_dot(x: &[C<f64>], y: &[C<f64>]) -> C<f64> {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}
