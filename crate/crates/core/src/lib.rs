//! Simulation and analysis of the hard-edge point process of β-Laguerre
//! random matrices and its square-root counting function.
//!
//! Numerical kernels are generic over [`Real`] (`f32`, `f64`); the
//! experiment harness and file formats work in `f64`. Aliases for both
//! precisions are exported here.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod io;
pub mod noise;
pub mod oracle;
pub mod parallel;
pub mod quadrature;
pub mod scalar;
pub mod sde;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use noise::NoiseDriver;
pub use scalar::Real;

pub type ModelParams64 = sde::ModelParams<f64>;
pub type ModelParams32 = sde::ModelParams<f32>;
pub type IntegratorConfig64 = sde::IntegratorConfig<f64>;
pub type IntegratorConfig32 = sde::IntegratorConfig<f32>;
pub type DiffusionRun64 = sde::DiffusionRun<f64>;
pub type DiffusionRun32 = sde::DiffusionRun<f32>;
pub type CountSample64 = sde::CountSample<f64>;
pub type CountSample32 = sde::CountSample<f32>;
pub type BidiagonalEnsemble64 = oracle::BidiagonalEnsemble<f64>;
pub type BidiagonalEnsemble32 = oracle::BidiagonalEnsemble<f32>;
pub type OracleSpectrum64 = oracle::OracleSpectrum<f64>;
pub type OracleSpectrum32 = oracle::OracleSpectrum<f32>;
pub type RateEvaluation64 = special::RateEvaluation<f64>;
pub type RateEvaluation32 = special::RateEvaluation<f32>;
