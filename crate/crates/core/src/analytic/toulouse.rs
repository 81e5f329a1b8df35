//! Onsager matrix at `alpha = 1/2` in the scaling limit.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::analytic::{complex_digamma, kondo_frequency};
use crate::error::{invalid, Result};
use crate::hilbert::Beta;
use crate::linres::{OnsagerMatrix, OnsagerSource, Provenance};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToulouseParams {
    /// Kondo frequency.
    pub gamma: f64,
    pub beta: Beta,
}

impl ToulouseParams {
    pub fn new(gamma: f64, beta: Beta) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(invalid("gamma", format!("must be > 0, got {gamma}")));
        }
        match beta {
            Beta::Finite(b) if b > 0.0 => Ok(Self { gamma, beta }),
            _ => Err(invalid(
                "beta",
                "the Toulouse solution needs a finite temperature",
            )),
        }
    }

    pub fn from_bath(delta: f64, omega_c: f64, beta: Beta) -> Result<Self> {
        Self::new(kondo_frequency(delta, omega_c), beta)
    }

    fn z_prime(&self) -> f64 {
        0.5 + self.gamma * self.beta.value() / (4.0 * PI)
    }

    /// `(R1, R2)` at drive frequency `omega`.
    pub fn r_functions(&self, omega: f64) -> Result<(f64, f64)> {
        let b = self.beta.value();
        let zp = self.z_prime();
        let z = C64::new(zp, -omega * b / (2.0 * PI));
        let pz = complex_digamma(z)?;
        let pzc = complex_digamma(z.conj())?;
        let pp = complex_digamma(C64::new(zp, 0.0))?;
        let r1 = (C64::new(0.0, self.gamma / PI) * (pz - pzc)).re;
        let r2 = (self.gamma / PI) * (pz + pzc - 2.0 * pp).re;
        Ok((r1, r2))
    }
}

pub fn toulouse_onsager(p: &ToulouseParams, omega: f64, phi: f64) -> Result<OnsagerMatrix> {
    let (r1, r2) = p.r_functions(omega)?;
    let g = p.gamma;
    let den = 4.0 * (omega * omega + g * g);
    let a = (omega * r1 + g * r2) / den;
    let b = (omega * r2 - g * r1) / den;
    let l12 = |ph: f64| ph.sin() * a + ph.cos() * b;
    Ok(OnsagerMatrix {
        l11: a,
        l12: l12(phi),
        l21: -l12(-phi),
        l22: a,
        omega,
        phi,
        provenance: Provenance::Toulouse,
    })
}

/// High-frequency asymptote of the output fluctuations at maximum efficiency.
pub fn toulouse_fluctuation_asymptote(p: &ToulouseParams, eps2: f64, omega: f64) -> Result<f64> {
    let b = p.beta.value();
    let psi = complex_digamma(C64::new(p.z_prime(), 0.0))?.re;
    let g = ((b * omega / (2.0 * PI)).ln() - psi).abs();
    Ok(eps2 * eps2 * p.gamma / 4.0 * (1.0 - PI / g + PI * PI / (2.0 * g * g)))
}

impl OnsagerSource for ToulouseParams {
    fn onsager(&self, omega: f64, phi: f64) -> Result<OnsagerMatrix> {
        toulouse_onsager(self, omega, phi)
    }

    fn beta(&self) -> Beta {
        self.beta
    }
}
