#![allow(clippy::needless_range_loop)]

//! Lattice Fock-space laboratory for an SO(5) four-flavor fermion chain.
//!
//! The crate builds every operator of the model as an explicit sparse
//! matrix on a finite chain and checks the algebraic structure
//! numerically: canonical anticommutators, exchange algebra of
//! string-dressed fields, the so(5) current algebra and its two-level
//! extension, coordinate Bethe states against exact diagonalization, and
//! the closed rotation formulas for the dressed observables.
//!
//! Modules build on each other in layers:
//!
//! * [`scalar`], [`linalg`], [`report`], [`error`]: numeric scaffolding.
//! * [`clifford`]: the pinned 4x4 gamma representation, generator pairs,
//!   and exact integer structure constants.
//! * [`fock`]: bit-coded occupation bases, mode operators, sector bases.
//! * [`stringmap`]: angle matrices, counting strings, dressed fields, and
//!   the exchange-algebra checks.
//! * [`model`]: interacting and dressed-free Hamiltonians plus the
//!   equation-of-motion checks.
//! * [`bethe`]: angle admissibility, gauge freedom rank, momentum
//!   quantization, Bethe energies and state construction.
//! * [`yangian`]: level-0/level-1 current generators and their defining
//!   relations, the gauge scan, and the generic dense-block checker.
//! * [`observables`]: per-site physical dictionary, current table, and
//!   dressed-rotation closed forms.
//!
//! Everything is generic over the real scalar through [`Scalar`]; the
//! aliases below fix `f64` for ordinary use.

pub mod bethe;
pub mod clifford;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod report;
pub mod scalar;
pub mod stringmap;
pub mod yangian;

pub use error::{Result, So5Error};
pub use report::ViolationReport;
pub use scalar::{Scalar, C};

pub use bethe::{
    admissibility_check, admissibility_constraint_rank, admissibility_constraint_rows,
    admissibility_from_couplings, bethe_amplitude, bethe_vector_on_basis, build_fock_state,
    enumerate_quantum_numbers, gauge_freedom_dimension, require_admissible, sample_admissible,
    sample_antisymmetric, sample_inadmissible, solve_bethe, theta_from_couplings,
    AdmissibilityReport, BetheState, StateConstruction,
};
pub use clifford::{
    check_so5_closure, gamma_rep, pair_index, signed_pair_index, so5_structure_constants,
    GammaRep, StructureConstants, SO5_PAIRS,
};
pub use fock::{
    check_car, flavor_counts, mode_operator, sector_basis, sector_dimension, total_number_basis,
    FockSpace, OperatorKind, StateBasis, N_FLAVORS,
};
pub use linalg::{hermitian_eigenvalues, CsrMatrix};
pub use model::{
    build_free_hamiltonian, build_interacting_hamiltonian, free_field_residual,
    free_hamiltonian_on_basis, heisenberg_residual, interacting_hamiltonian_on_basis, spectrum,
    CouplingConfig, FreeFieldReport,
};
pub use observables::{
    check_gauge_phase_formulas, dressed_physical_operators, literal_rotation_discrepancy,
    physical_operators, rotation_angles, so5_current_matrix, transformed_observables,
    CurrentTable, GaugePhaseReport, PhysicalOps, RotationAngles,
};
pub use stringmap::{
    check_zf, counting_string, deformed_operator, double_exchange_residual, reduce_angle,
    string_phases, StringConvention, ThetaMatrix, ZfReport,
};
pub use yangian::{
    build_currents, build_currents_on_basis, check_adjoint_relation, check_drinfeld_relations,
    check_serre_relation, gauge_invariance_scan, local_current, symmetric_triple,
    yangian_violations, DrinfeldReport, GaugeScanTable, SerreReport, USign, YangianGenerators,
    YangianViolations,
};

/// Complex scalar at the default `f64` precision.
pub type Complex64 = C<f64>;
/// Sparse operator at the default `f64` precision.
pub type Operator = CsrMatrix<f64>;
/// Gamma representation at the default `f64` precision.
pub type GammaRep64 = GammaRep<f64>;
/// Physical operator set at the default `f64` precision.
pub type PhysicalOps64 = PhysicalOps<f64>;
/// Yangian generator set at the default `f64` precision.
pub type YangianGenerators64 = YangianGenerators<f64>;
