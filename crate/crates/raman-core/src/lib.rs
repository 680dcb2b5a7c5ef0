//! Collective Stokes-Raman scattering in atomic ensembles: spatial
//! eigenmodes of the coupling kernel, temporal quantum statistics under
//! decoherence, and optimal estimators of the stored spin-wave number.
//!
//! The crate is organized bottom-up:
//! - [`quadrature`], [`specfun`]: Gauss-Legendre rules, Laguerre/₂F₁
//!   kernels, Laguerre-Gauss mode evaluation;
//! - [`geometry`]: the two experimental regimes and their dimensionless
//!   reduction (Fresnel number F, χ = 2πF, κ);
//! - [`coupling`]: closed-form coupling matrix elements and their
//!   discretization over the axial coordinate;
//! - [`modes`]: quadrature-weighted SVD → photon/atomic mode pairs;
//! - [`temporal`]: closed-form two-time correlations with damping;
//! - [`estimator`]: variational weights minimizing the spin-wave-number
//!   readout error;
//! - [`oracle`]: independent time-sliced covariance propagation used to
//!   validate the closed forms.

pub mod coupling;
pub mod error;
pub mod estimator;
pub mod geometry;
pub mod modes;
pub mod oracle;
pub mod quadrature;
pub mod specfun;
mod svd;
pub mod temporal;

mod dd;

pub use coupling::CouplingBlock;
pub use error::{Error, Result};
pub use estimator::{EstimatorProblem, EstimatorSolution};
pub use geometry::{ExperimentGeometry, ReducedGeometry, Regime};
pub use modes::{ModeDecomposition, SpectrumEntry};
pub use oracle::{CorrelationRecords, SliceCoefficients, SliceState};
pub use temporal::{GainRegime, TemporalParams};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
