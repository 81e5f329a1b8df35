//! Closed-form results: renormalized gap, weak-coupling and Toulouse-limit Onsager matrices.

pub mod special;
pub mod toulouse;
pub mod weak;

use std::f64::consts::PI;

pub use special::{complex_digamma, digamma, gamma};
pub use toulouse::{toulouse_fluctuation_asymptote, toulouse_onsager, ToulouseParams};
pub use weak::{weak_coupling_onsager, weak_coupling_slopes, WeakCouplingParams};

use crate::error::{invalid, Result};

/// Renormalized tunneling `Delta_eff` of the Ohmic spin-boson model.
///
/// For `alpha = 1/2` this returns the Kondo frequency `pi Delta^2 / (2 omega_c)`,
/// which is also the limit of the general formula.
pub fn delta_eff(delta: f64, omega_c: f64, alpha: f64) -> Result<f64> {
    if !(delta > 0.0) || !(omega_c > 0.0) {
        return Err(invalid("delta", "tunneling and cutoff must be positive"));
    }
    if !(0.0..=0.5).contains(&alpha) {
        return Err(invalid(
            "alpha",
            format!("delta_eff needs 0 <= alpha <= 1/2, got {alpha}"),
        ));
    }
    if alpha == 0.0 {
        return Ok(delta);
    }
    if alpha == 0.5 {
        return Ok(kondo_frequency(delta, omega_c));
    }
    let ratio = delta / omega_c;
    let delta_r = delta * ratio.powf(alpha / (1.0 - alpha));
    let base = gamma(1.0 - 2.0 * alpha) * (PI * alpha).cos();
    Ok(delta_r * base.powf(1.0 / (2.0 * (1.0 - alpha))))
}

/// `gamma = pi Delta^2 / (2 omega_c)`.
pub fn kondo_frequency(delta: f64, omega_c: f64) -> f64 {
    PI * delta * delta / (2.0 * omega_c)
}
