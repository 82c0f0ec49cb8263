//! Dissipatively engineered topological quantum wires.
//!
//! The crate evolves quadratic fermionic Lindblad dynamics in the Majorana
//! covariance representation, extracts dissipative Majorana edge modes,
//! evaluates the mixed-state winding invariant of translation-invariant
//! steady states, runs adiabatic Majorana moves and braiding
//! interferometry, and checks all of it against a brute-force Fock-space
//! Lindblad simulator on small lattices.
//!
//! Every numerical type is generic over a [`Real`] scalar; `f64` aliases are
//! provided at the crate root.

// Negated comparisons are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod braid;
pub mod error;
pub mod gaussian;
pub mod integrate;
pub mod liouville;
pub mod models;
pub mod momentum;
pub mod oracle;
pub mod scalar;

pub use braid::{
    adiabatic_move, braid_rotation, interferometry_demo, prepare_move_initial_state, InterferometryReport,
    MoveReport,
};

pub use error::{Result, WireError};
pub use gaussian::{
    build_damping_matrices, complex_to_majorana, occupation, purity_spectrum, CovarianceMatrix,
    DampingPair, MajoranaVector, QuadraticHamiltonian,
};
pub use liouville::{
    damping_spectrum, edge_bulk_decay_check, evolve, evolve_driven, evolve_sampled, steady_state,
    zero_modes, EvolutionReport, SpectralDecomposition,
};
pub use models::{
    analytic_zero_modes, deformed_wire, ideal_wire, localization_length, move_ramp, two_wire_system,
    RampSchedule, WireKind, WireSpec,
};
pub use momentum::{
    chiral_axis, momentum_evolve, momentum_model, momentum_solution, steady_bloch, winding_number,
    xi_deformed, BlochField, BogoliubovFunction, BzGrid, Family, MomentumState, WindingReport,
};
pub use oracle::{covariance_from_rho, DensityMatrix, FockLindblad, FockOperator, FockSpace};
pub use scalar::Real;

pub type MajoranaVector64 = MajoranaVector<f64>;
pub type CovarianceMatrix64 = CovarianceMatrix<f64>;
pub type DampingPair64 = DampingPair<f64>;
pub type QuadraticHamiltonian64 = QuadraticHamiltonian<f64>;
pub type SpectralDecomposition64 = SpectralDecomposition<f64>;
pub type EvolutionReport64 = EvolutionReport<f64>;
pub type WireSpec64 = WireSpec<f64>;
pub type RampSchedule64 = RampSchedule<f64>;
pub type BogoliubovFunction64 = BogoliubovFunction<f64>;
pub type BlochField64 = BlochField<f64>;
pub type WindingReport64 = WindingReport<f64>;
pub type MomentumState64 = MomentumState<f64>;
pub type MoveReport64 = MoveReport<f64>;
pub type FockSpace64 = FockSpace<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
