//! Lattice Fock space for four fermion flavors on a periodic chain.
//!
//! Basis states are occupation bitstrings in a `u64`: the mode for flavor
//! `f` (zero-based) at site `x` sits at bit `4 x + f`, so sites are the
//! major index. Operators carry the string signs of the fermionic ordering
//! induced by ascending mode index.

use crate::error::{Result, So5Error};
use crate::linalg::CsrMatrix;
use crate::report::ViolationReport;
use crate::scalar::{re, Scalar};

/// Number of fermion flavors; fixed by the model.
pub const N_FLAVORS: usize = 4;

/// Bit position of flavor `f` (zero-based) at site `x`.
#[inline]
pub fn mode(site: usize, flavor0: usize) -> usize {
    N_FLAVORS * site + flavor0
}

/// Whether mode `m` is occupied in basis state `s`.
#[inline]
pub fn occupied(s: u64, m: usize) -> bool {
    (s >> m) & 1 == 1
}

/// Occupation of mode `m` as a number (0 or 1).
#[inline]
pub fn occupation(s: u64, m: usize) -> u64 {
    (s >> m) & 1
}

/// Apply the annihilation operator for mode `m` to basis state `s`.
///
/// Returns the resulting state and the fermionic sign, or `None` when the
/// mode is empty. The sign is the parity of the occupied modes below `m`.
#[inline]
pub fn annihilate_mode(s: u64, m: usize) -> Option<(u64, i32)> {
    if !occupied(s, m) {
        return None;
    }
    let below = (s & ((1u64 << m) - 1)).count_ones();
    let sign = if below.is_multiple_of(2) { 1 } else { -1 };
    Some((s & !(1u64 << m), sign))
}

/// Apply the creation operator for mode `m` to basis state `s`.
///
/// Returns the resulting state and the fermionic sign, or `None` when the
/// mode is already occupied.
#[inline]
pub fn create_mode(s: u64, m: usize) -> Option<(u64, i32)> {
    if occupied(s, m) {
        return None;
    }
    let below = (s & ((1u64 << m) - 1)).count_ones();
    let sign = if below.is_multiple_of(2) { 1 } else { -1 };
    Some((s | (1u64 << m), sign))
}

/// Per-flavor particle counts of a basis state.
pub fn flavor_counts(s: u64, n_sites: usize) -> [usize; N_FLAVORS] {
    let mut counts = [0usize; N_FLAVORS];
    for x in 0..n_sites {
        for f in 0..N_FLAVORS {
            counts[f] += occupation(s, mode(x, f)) as usize;
        }
    }
    counts
}

/// An ordered list of occupation bitstrings spanning a subspace.
///
/// Either the full Fock space of a chain or a restriction to fixed
/// occupation numbers. States are sorted ascending, so operators built on
/// equal bases have identical storage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateBasis {
    n_sites: usize,
    full: bool,
    states: Vec<u64>,
}

impl StateBasis {
    /// Every occupation pattern of `4 n_sites` modes.
    pub fn full_space(n_sites: usize) -> Self {
        let dim = 1usize << (N_FLAVORS * n_sites);
        Self {
            n_sites,
            full: true,
            states: (0..dim as u64).collect(),
        }
    }

    /// Basis from an explicit state list; sorts and deduplicates.
    pub fn from_states(n_sites: usize, mut states: Vec<u64>) -> Self {
        states.sort_unstable();
        states.dedup();
        Self {
            n_sites,
            full: false,
            states,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_modes(&self) -> usize {
        N_FLAVORS * self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Bitstring of the `idx`-th basis state.
    pub fn state(&self, idx: usize) -> u64 {
        self.states[idx]
    }

    /// Index of a bitstring within the basis, if present.
    pub fn position(&self, s: u64) -> Option<usize> {
        if self.full {
            let idx = s as usize;
            (idx < self.states.len()).then_some(idx)
        } else {
            self.states.binary_search(&s).ok()
        }
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }
}

/// The full Fock space of a four-flavor chain, capped in dimension.
#[derive(Debug, Clone)]
pub struct FockSpace {
    basis: StateBasis,
}

impl FockSpace {
    /// Default cap on the full-space dimension (`4^L` states of `4 L`
    /// modes reach it at three sites).
    pub const DEFAULT_MAX_DIM: usize = 4096;

    /// Full Fock space with the default dimension cap.
    pub fn new(n_sites: usize) -> Result<Self> {
        Self::with_max_dim(n_sites, Self::DEFAULT_MAX_DIM)
    }

    /// Full Fock space with an explicit dimension cap.
    pub fn with_max_dim(n_sites: usize, max_dim: usize) -> Result<Self> {
        if n_sites == 0 {
            return Err(So5Error::InvalidConfig(
                "chain needs at least one site".to_string(),
            ));
        }
        let n_modes = N_FLAVORS * n_sites;
        if n_modes >= usize::BITS as usize {
            return Err(So5Error::SpaceTooLarge {
                dim: usize::MAX,
                cap: max_dim,
            });
        }
        let dim = 1usize << n_modes;
        if dim > max_dim {
            return Err(So5Error::SpaceTooLarge { dim, cap: max_dim });
        }
        Ok(Self {
            basis: StateBasis::full_space(n_sites),
        })
    }

    pub fn n_sites(&self) -> usize {
        self.basis.n_sites()
    }

    pub fn n_modes(&self) -> usize {
        self.basis.n_modes()
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &StateBasis {
        &self.basis
    }
}

/// What a single-mode operator does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Create,
    Annihilate,
    Number,
}

/// Validate a one-based flavor label and convert to the internal index.
pub fn flavor_index(flavor: usize) -> Result<usize> {
    if (1..=N_FLAVORS).contains(&flavor) {
        Ok(flavor - 1)
    } else {
        Err(So5Error::IndexOutOfRange {
            what: "flavor",
            value: flavor,
            lo: 1,
            hi: N_FLAVORS,
        })
    }
}

fn check_site(space_sites: usize, site: usize) -> Result<()> {
    if site < space_sites {
        Ok(())
    } else {
        Err(So5Error::IndexOutOfRange {
            what: "site",
            value: site,
            lo: 0,
            hi: space_sites - 1,
        })
    }
}

/// Matrix of a single creation, annihilation, or number operator.
///
/// `flavor` is one-based (1 to 4); `site` is zero-based. The matrix acts on
/// the full space of `space` with the fermionic string signs included.
pub fn mode_operator<T: Scalar>(
    space: &FockSpace,
    flavor: usize,
    site: usize,
    kind: OperatorKind,
) -> Result<CsrMatrix<T>> {
    let f = flavor_index(flavor)?;
    check_site(space.n_sites(), site)?;
    let m = mode(site, f);
    let basis = space.basis();
    let dim = basis.dim();
    let mut triplets = Vec::with_capacity(dim / 2 + 1);
    for col in 0..dim {
        let s = basis.state(col);
        match kind {
            OperatorKind::Number => {
                if occupied(s, m) {
                    triplets.push((col, col, re(T::one())));
                }
            }
            OperatorKind::Create => {
                if let Some((s2, sign)) = create_mode(s, m) {
                    let row = basis.position(s2).expect("full basis is closed");
                    triplets.push((row, col, re(T::from(sign).expect("sign fits"))));
                }
            }
            OperatorKind::Annihilate => {
                if let Some((s2, sign)) = annihilate_mode(s, m) {
                    let row = basis.position(s2).expect("full basis is closed");
                    triplets.push((row, col, re(T::from(sign).expect("sign fits"))));
                }
            }
        }
    }
    Ok(CsrMatrix::from_triplets(dim, dim, triplets))
}

/// Matrix of the bilinear `psi+_{i,x} psi_{j,y}` on an arbitrary basis.
///
/// Flavors are zero-based here. On a restricted basis the operator is
/// compressed to the span: target states outside the basis are dropped,
/// which is exact whenever the basis is closed under the bilinear.
pub fn bilinear<T: Scalar>(
    basis: &StateBasis,
    create: (usize, usize),
    annihilate: (usize, usize),
) -> CsrMatrix<T> {
    let m_create = mode(create.1, create.0);
    let m_annihilate = mode(annihilate.1, annihilate.0);
    let dim = basis.dim();
    let mut triplets = Vec::new();
    for col in 0..dim {
        let s = basis.state(col);
        let Some((s1, sign1)) = annihilate_mode(s, m_annihilate) else {
            continue;
        };
        let Some((s2, sign2)) = create_mode(s1, m_create) else {
            continue;
        };
        if let Some(row) = basis.position(s2) {
            let v = T::from(sign1 * sign2).expect("sign fits");
            triplets.push((row, col, re(v)));
        }
    }
    CsrMatrix::from_triplets(dim, dim, triplets)
}

/// Bare annihilator `psi_{f,x}` on an arbitrary basis (zero-based flavor),
/// compressed to the span of the basis.
pub fn annihilator_on_basis<T: Scalar>(
    basis: &StateBasis,
    flavor0: usize,
    site: usize,
) -> CsrMatrix<T> {
    let m = mode(site, flavor0);
    let dim = basis.dim();
    let mut triplets = Vec::new();
    for col in 0..dim {
        let Some((s2, sign)) = annihilate_mode(basis.state(col), m) else {
            continue;
        };
        if let Some(row) = basis.position(s2) {
            triplets.push((row, col, re(T::from(sign).expect("sign fits"))));
        }
    }
    CsrMatrix::from_triplets(dim, dim, triplets)
}

/// Diagonal number operator `n_{f,x}` on an arbitrary basis (zero-based
/// flavor).
pub fn number_on_basis<T: Scalar>(basis: &StateBasis, flavor0: usize, site: usize) -> CsrMatrix<T> {
    let m = mode(site, flavor0);
    let dim = basis.dim();
    let mut triplets = Vec::new();
    for col in 0..dim {
        if occupied(basis.state(col), m) {
            triplets.push((col, col, re(T::one())));
        }
    }
    CsrMatrix::from_triplets(dim, dim, triplets)
}

/// Sweep the canonical anticommutation relations over every mode pair.
///
/// Checks `{a_m, a_n} = 0`, `{a+_m, a+_n} = 0`, and
/// `{a_m, a+_n} = delta_mn` on the full space; the report records one
/// entry per pair and relation.
pub fn check_car<T: Scalar>(space: &FockSpace) -> Result<ViolationReport> {
    let n_sites = space.n_sites();
    let mut annihilators = Vec::with_capacity(space.n_modes());
    for x in 0..n_sites {
        for f in 0..N_FLAVORS {
            annihilators.push((
                (f, x),
                mode_operator::<T>(space, f + 1, x, OperatorKind::Annihilate)?,
            ));
        }
    }
    let dim = space.dim();
    let identity = CsrMatrix::<T>::identity(dim);
    let mut report = ViolationReport::new();
    for (label_m, a_m) in &annihilators {
        let adj_m = a_m.adjoint();
        for (label_n, a_n) in &annihilators {
            let adj_n = a_n.adjoint();
            let same = label_m == label_n;
            let aa = a_m.anticommutator(a_n)?.max_abs();
            let cc = adj_m.anticommutator(&adj_n)?.max_abs();
            let mixed = a_m.anticommutator(&adj_n)?;
            let ac = if same {
                mixed.sub(&identity).max_abs()
            } else {
                mixed.max_abs()
            };
            let tag = format!(
                "f{}x{} vs f{}x{}",
                label_m.0 + 1,
                label_m.1,
                label_n.0 + 1,
                label_n.1
            );
            report.record(
                format!("{{a, a}} {tag}"),
                aa.to_f64().unwrap_or(f64::INFINITY),
            );
            report.record(
                format!("{{a+, a+}} {tag}"),
                cc.to_f64().unwrap_or(f64::INFINITY),
            );
            report.record(
                format!("{{a, a+}} {tag}"),
                ac.to_f64().unwrap_or(f64::INFINITY),
            );
        }
    }
    Ok(report)
}

/// Exact binomial coefficient (panics on overflow of `u128`).
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Dimension of the fixed-occupation sector `prod_f C(L, n_f)`.
pub fn sector_dimension(n_sites: usize, occupations: [usize; N_FLAVORS]) -> u128 {
    occupations
        .iter()
        .map(|&n| binomial(n_sites, n))
        .product()
}

/// All subsets of `width` bits with exactly `count` bits set, ascending.
pub fn bit_combinations_of(width: usize, count: usize) -> Vec<u64> {
    if count > width {
        return Vec::new();
    }
    if count == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let limit: u64 = 1u64 << width;
    let mut s: u64 = (1u64 << count) - 1;
    while s < limit {
        out.push(s);
        let c = s & s.wrapping_neg();
        let r = s.wrapping_add(c);
        if r == 0 {
            break;
        }
        s = r | (((s ^ r) / c) >> 2);
    }
    out
}

/// Basis of the sector with fixed per-flavor particle numbers.
///
/// Enumerated combinatorially, so it works for chains whose full space
/// would blow the cap. Site patterns per flavor are interleaved into the
/// site-major mode layout.
pub fn sector_basis(n_sites: usize, occupations: [usize; N_FLAVORS]) -> Result<StateBasis> {
    if n_sites == 0 || n_sites > 15 {
        return Err(So5Error::InvalidConfig(format!(
            "sector basis supports 1..=15 sites, got {n_sites}"
        )));
    }
    for &n in occupations.iter() {
        if n > n_sites {
            return Err(So5Error::IndexOutOfRange {
                what: "sector occupation",
                value: n,
                lo: 0,
                hi: n_sites,
            });
        }
    }
    let dim = sector_dimension(n_sites, occupations);
    if dim > (1u128 << 24) {
        return Err(So5Error::SpaceTooLarge {
            dim: dim.min(usize::MAX as u128) as usize,
            cap: 1 << 24,
        });
    }
    let per_flavor: Vec<Vec<u64>> = occupations
        .iter()
        .map(|&n| bit_combinations_of(n_sites, n))
        .collect();
    let spread = |site_mask: u64, f: usize| -> u64 {
        let mut out = 0u64;
        for x in 0..n_sites {
            if (site_mask >> x) & 1 == 1 {
                out |= 1u64 << mode(x, f);
            }
        }
        out
    };
    let mut states = Vec::with_capacity(dim as usize);
    for &m0 in &per_flavor[0] {
        let b0 = spread(m0, 0);
        for &m1 in &per_flavor[1] {
            let b1 = b0 | spread(m1, 1);
            for &m2 in &per_flavor[2] {
                let b2 = b1 | spread(m2, 2);
                for &m3 in &per_flavor[3] {
                    states.push(b2 | spread(m3, 3));
                }
            }
        }
    }
    Ok(StateBasis::from_states(n_sites, states))
}

/// Basis of all states with a fixed total particle number.
pub fn total_number_basis(n_sites: usize, n_particles: usize) -> Result<StateBasis> {
    let n_modes = N_FLAVORS * n_sites;
    if n_sites == 0 || n_modes >= 63 {
        return Err(So5Error::InvalidConfig(format!(
            "total-number basis supports 1..=15 sites, got {n_sites}"
        )));
    }
    if n_particles > n_modes {
        return Err(So5Error::IndexOutOfRange {
            what: "total particle number",
            value: n_particles,
            lo: 0,
            hi: n_modes,
        });
    }
    let dim = binomial(n_modes, n_particles);
    if dim > (1u128 << 24) {
        return Err(So5Error::SpaceTooLarge {
            dim: dim.min(usize::MAX as u128) as usize,
            cap: 1 << 24,
        });
    }
    Ok(StateBasis::from_states(
        n_sites,
        bit_combinations_of(n_modes, n_particles),
    ))
}
