//! Bath discretization, truncated basis and matrix-free operators.

pub mod basis;
pub mod bath;
pub mod drive;
pub mod operator;
pub mod state;

use std::sync::Arc;

pub use basis::{
    enumerate_basis, enumerate_basis_around, Csr, TruncatedBasis, DEFAULT_STATE_BUDGET,
};
pub use bath::{discretize_bath, BathModes, BathSpec, Beta};
pub use drive::DriveSpec;
pub use operator::{apply_hamiltonian, apply_operator, inner, norm, Hamiltonian, Operator, Terms};
pub use state::StateVector;

use crate::error::Result;

/// Builds the zero-temperature Hamiltonian for `spec` with tunneling `delta`.
pub fn build_model(spec: &BathSpec, delta: f64) -> Result<(BathModes, Hamiltonian)> {
    build_model_around(spec, delta, &vec![0; spec.m_mod], DEFAULT_STATE_BUDGET)
}

/// Builds the Hamiltonian on the basis around the given reference occupations.
pub fn build_model_around(
    spec: &BathSpec,
    delta: f64,
    reference: &[u32],
    budget: usize,
) -> Result<(BathModes, Hamiltonian)> {
    spec.validate()?;
    spec.require_ohmic()?;
    let modes = discretize_bath(spec)?;
    let basis = Arc::new(enumerate_basis_around(spec, &modes, reference, budget)?);
    let h = Hamiltonian::new(basis, &modes, delta)?;
    Ok((modes, h))
}
