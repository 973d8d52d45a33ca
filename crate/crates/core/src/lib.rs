//! Steady-state mechanical squeezing of a levitated nanodiamond whose NV
//! centre is driven into a dressed three-level spin.
//!
//! The crate is generic over the real scalar (`f32` or `f64`). Units are
//! chosen so that ω_m sets the frequency scale; every rate and frequency in
//! [`SystemParams`] is in the same unit.
//!
//! Layers, bottom up:
//! - [`model`]: parameters, NV Hamiltonian, dressed frame and resonance lock
//! - [`spinsolver`]: pumped spin steady state, closed form and numerical
//! - [`reduced`]: coefficients of the mechanical master equation after spin elimination
//! - [`moments`]: closed moment equations, stability, quadrature variance
//! - [`lindblad`]: brute-force density-matrix oracle on spin ⊗ Fock space

pub mod error;
pub mod linalg;
pub mod lindblad;
pub mod model;
pub mod moments;
pub mod operator;
pub mod reduced;
pub mod scalar;
pub mod spinsolver;

pub use error::{Error, Result};
pub use model::{detuning_for_resonance, dressed_frame, DressedFrame, PumpParams, SystemParams};
pub use moments::{analyze, stability_check, steady_moments, SqueezingReport};
pub use reduced::{coefficients_exact, ReducedCoefficients};
pub use scalar::{Real, C};
pub use spinsolver::{spin_steady_closed, spin_steady_numeric, SpinSteadyState};

pub type SystemParamsF64 = SystemParams<f64>;
pub type SystemParamsF32 = SystemParams<f32>;
pub type DressedFrameF64 = DressedFrame<f64>;
pub type DressedFrameF32 = DressedFrame<f32>;
pub type SpinSteadyStateF64 = SpinSteadyState<f64>;
pub type SpinSteadyStateF32 = SpinSteadyState<f32>;
pub type ReducedCoefficientsF64 = ReducedCoefficients<f64>;
pub type ReducedCoefficientsF32 = ReducedCoefficients<f32>;
pub type SqueezingReportF64 = SqueezingReport<f64>;
pub type SqueezingReportF32 = SqueezingReport<f32>;
