//! Normalized Bessel functions `j_ν(z) = (z/2)^{−ν} J_ν(z)` of complex order,
//! their zeros, ratios of zeros and Liouville-type chains built from them,
//! the Euler–Poisson–Darboux propagator on periodic grids and the
//! two-snapshot reconstruction problem.
//!
//! Floating-point code is generic over [`scalar::Real`] (`f32`, `f64`); the
//! aliases below fix `f64`. Ratio chains on arithmetic lattices run in exact
//! big-rational arithmetic.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod bessel;
mod dd;
pub mod epd;
pub mod error;
mod fixed;
pub mod gamma;
pub mod grid;
pub mod liouville;
#[cfg(test)]
mod oracle;
pub mod scalar;
pub mod snapshot;
pub mod zeros;

pub use bessel::{envelope, j, j_derivative};
pub use epd::{
    asgeirsson_check, eigen_check, epd_residual, m_alpha_quadrature, propagate, propagate_with, slow_decrease_profile,
    spherical_mean,
};
pub use error::{Error, Result};
pub use grid::Dtype;
pub use liouville::{
    generalized_lattice, is_jnu_rational, liouville_quality, measure_cover, theta, theta_chain, BinarySequence,
    ChainOptions, Lattice, ThetaChain,
};
pub use scalar::{ComplexScalar, Real};
pub use snapshot::{
    compatibility_residual, kernel_witness, make_problem, reconstruct, small_denominator_scan,
    strong_compatibility_residual, FloorPolicy,
};
pub use zeros::{complex_zeros, real_zeros, zero_ratio_f};

pub type Complex64 = num_complex::Complex<f64>;
pub type BesselEvaluator = bessel::BesselEvaluator<f64>;
pub type GridFunction = grid::GridFunction<f64>;
pub type EpdMultiplier = epd::EpdMultiplier<f64>;
pub type ZeroLattice = zeros::ZeroLattice<f64>;
pub type SnapshotProblem = snapshot::SnapshotProblem<f64>;
pub type ReconstructionReport = snapshot::ReconstructionReport<f64>;
