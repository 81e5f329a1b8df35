//! Weak-damping correlation function and Onsager matrix.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::analytic::delta_eff;
use crate::error::{invalid, Result};
use crate::hilbert::Beta;
use crate::linres::{OnsagerMatrix, OnsagerSource, Provenance};

/// Above this dissipation strength the weak-damping form is only advisory.
pub const ADVISORY_ALPHA: f64 = 0.2;
/// Above this dissipation strength the weak-damping form is rejected.
pub const MAX_ALPHA: f64 = 0.35;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakCouplingParams {
    pub alpha: f64,
    /// Tunneling `Delta` (energy unit).
    pub delta: f64,
    pub beta: Beta,
    /// Effective frequency `Delta_eff`.
    pub omega_eff: f64,
    /// Decay rate `(pi alpha Omega / 2) coth(beta Omega / 2)`.
    pub gamma_tilde: f64,
    pub a1: C64,
    pub a2: C64,
}

impl WeakCouplingParams {
    pub fn new(alpha: f64, delta: f64, omega_c: f64, beta: Beta) -> Result<Self> {
        if alpha > MAX_ALPHA {
            return Err(invalid(
                "alpha",
                format!("weak coupling requires alpha <= {MAX_ALPHA}, got {alpha}"),
            ));
        }
        if !(alpha > 0.0) {
            return Err(invalid(
                "alpha",
                format!("weak coupling requires alpha > 0, got {alpha}"),
            ));
        }
        let omega = delta_eff(delta, omega_c, alpha)?;
        Ok(Self::from_frequency(alpha, delta, omega, beta))
    }

    /// Uses `omega_eff` directly instead of the renormalization formula.
    pub fn from_frequency(alpha: f64, delta: f64, omega_eff: f64, beta: Beta) -> Self {
        let gamma_tilde = 0.5 * PI * alpha * omega_eff * beta.coth_half(omega_eff);
        let weight = (omega_eff / delta).powi(2) * beta.tanh_half(omega_eff);
        Self {
            alpha,
            delta,
            beta,
            omega_eff,
            gamma_tilde,
            a1: C64::new(1.0, 0.0),
            a2: C64::new(gamma_tilde / omega_eff, -weight),
        }
    }

    /// Message for parameters where the closed form is stretched.
    pub fn validity_warning(&self) -> Option<String> {
        let beta_omega = self.beta.value() * self.omega_eff;
        if self.alpha > ADVISORY_ALPHA {
            Some(format!(
                "weak coupling is outside its validity range at alpha = {}",
                self.alpha
            ))
        } else if beta_omega <= 1.0 {
            Some(format!(
                "weak coupling assumes beta * Omega > 1, got {beta_omega:.3}"
            ))
        } else {
            None
        }
    }

    /// `C(tau) = (A1 cos(Omega tau) + A2 sin(Omega tau)) exp(-gamma_tilde tau)`.
    pub fn correlation(&self, tau: f64) -> C64 {
        let (s, c) = (self.omega_eff * tau).sin_cos();
        (self.a1 * c + self.a2 * s) * (-self.gamma_tilde * tau).exp()
    }

    /// Frequency `sqrt(gamma_tilde^2 + Omega^2)` where `L12` changes sign at `phi = 0`.
    pub fn crossing_frequency(&self) -> f64 {
        self.gamma_tilde.hypot(self.omega_eff)
    }
}

pub fn weak_coupling_onsager(p: &WeakCouplingParams, omega: f64, phi: f64) -> OnsagerMatrix {
    let (om, g) = (p.omega_eff, p.gamma_tilde);
    let den = (g * g + (om - omega).powi(2)) * (g * g + (om + omega).powi(2));
    let pre = omega / 8.0 * (om / p.delta).powi(2) * p.beta.tanh_half(om) / den;
    let f = 4.0 * om * omega * g;
    let gg = 2.0 * om * (g * g + om * om - omega * omega);
    let l11 = pre * f;
    let l12 = |ph: f64| pre * (ph.sin() * f - ph.cos() * gg);
    OnsagerMatrix {
        l11,
        l12: l12(phi),
        l21: -l12(-phi),
        l22: l11,
        omega,
        phi,
        provenance: Provenance::WeakCoupling,
    }
}

/// Leading slopes of `P_out` and `D_out` against `1 - eta` on the high-frequency branch.
pub fn weak_coupling_slopes(p: &WeakCouplingParams, eps2: f64) -> (f64, f64) {
    let om = p.omega_eff;
    let common = eps2 * eps2 * (om / p.delta).powi(2) * p.beta.tanh_half(om);
    (-common / 16.0 * om / p.gamma_tilde, common / 8.0 * om)
}

impl OnsagerSource for WeakCouplingParams {
    fn onsager(&self, omega: f64, phi: f64) -> Result<OnsagerMatrix> {
        Ok(weak_coupling_onsager(self, omega, phi))
    }

    fn beta(&self) -> Beta {
        self.beta
    }
}
