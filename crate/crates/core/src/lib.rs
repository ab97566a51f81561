//! Polyhedral chains with normed-group coefficients, polyhedral varifolds,
//! and the canonical calibration by constant m-vectors.
//!
//! Every polyhedral varifold `V` gives a chain `⟨V⟩` with coefficients in
//! `Λ_m ℝᴺ` that is calibrated by `Φ(Σ gᵢ[σᵢ]) = Σ (gᵢ · η(σᵢ)) Hᵐ(σᵢ)`.
//! The crate checks stationarity by conormal balance, builds `⟨V⟩`,
//! certifies calibration, and cross-checks minimality with an independent
//! convex solver on the host complex.

pub mod calibration;
pub mod catalog;
pub mod chains;
pub mod complex;
pub mod deform;
pub mod error;
pub mod exterior;
pub mod groups;
pub mod io;
pub mod solver;
pub mod varifolds;

pub use calibration::{
    certify_calibrated, check_stokes, minimality_certificate, phi, phi_flat_bound, Certificate, Conclusion,
};
pub use catalog::{generate_example, Example, ExampleName, ExampleParams, GeodesicNet};
pub use chains::{Chain, PlMap, Pushforward};
pub use complex::{BoundaryRegion, EmbeddedComplex, SubdivisionRule};
pub use deform::{deform_experiment, DeformReport};
pub use error::{Error, Result};
pub use exterior::{simplex_volume, unit_simple_vector, Multivector, OrientedSimplex};
pub use groups::{CoefficientGroup, ExteriorPower, Integers, RealLine, Subgroup};
pub use solver::{flat_norm_solve, min_mass_fixed_boundary, FlatNormResult, SolveResult, SolveStatus, SolverConfig};
pub use varifolds::{PolyhedralVarifold, StationarityReport};

/// Largest supported ambient dimension.
pub const MAX_AMBIENT_DIM: usize = 12;

/// Default absolute tolerance for zero tests.
pub const DEFAULT_TOL: f64 = 1e-9;
