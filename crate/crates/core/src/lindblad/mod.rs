//! Brute-force density-matrix engine used as the oracle for every closed form.
//!
//! Basis ordering on spin ⊗ modes is mode-major with the spin index fastest:
//! index = ((n₀·N₁ + n₁)·…)·spin_dim + s. Operators realised on this space
//! couple nearby indices only, which keeps Liouvillians narrowly banded.
//! Density matrices are vectorised row-major: vec(ρ)[i·D + j] = ρᵢⱼ, so
//! vec(AρB) = (A ⊗ Bᵀ) vec(ρ).

mod models;
mod solve;
mod space;
mod superop;

pub use models::{
    bare_full_model, full_model, interaction_full_model, spin_bloch_generator, spin_dissipator_effective, ModelFrame,
};
pub use solve::{
    evolve, steady_state, steady_state_escalating, truncation_check, EvolveOptions, Escalated, SteadyOptions,
};
pub use space::{build_operators, DensityMatrix, HilbertSpace, OperatorSet};
pub use superop::{assemble, Superoperator};
