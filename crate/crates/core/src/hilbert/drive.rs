use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Two periodic bias fields `eps1 sin(w t)` and `eps2 cos(n w t - phi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    pub eps1: f64,
    pub eps2: f64,
    pub omega: f64,
    pub n_ratio: u32,
    pub phi: f64,
}

impl DriveSpec {
    pub fn new(eps1: f64, eps2: f64, omega: f64, phi: f64) -> Self {
        Self {
            eps1,
            eps2,
            omega,
            n_ratio: 1,
            phi,
        }
    }

    /// Field-free drive (period fixed at `2 pi`).
    pub fn undriven() -> Self {
        Self::new(0.0, 0.0, 1.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(invalid("omega", format!("must be > 0, got {}", self.omega)));
        }
        if self.n_ratio != 1 {
            return Err(Error::Unsupported(format!(
                "n = 1 only, got n_ratio = {}",
                self.n_ratio
            )));
        }
        for (name, v) in [("eps1", self.eps1), ("eps2", self.eps2), ("phi", self.phi)] {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        Ok(())
    }

    pub fn is_driven(&self) -> bool {
        self.eps1 != 0.0 || self.eps2 != 0.0
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    /// `(eps1(t), eps2(t))`.
    pub fn fields(&self, t: f64) -> (f64, f64) {
        let n = self.n_ratio as f64;
        (
            self.eps1 * (self.omega * t).sin(),
            self.eps2 * (n * self.omega * t - self.phi).cos(),
        )
    }

    /// `(d eps1/dt, d eps2/dt)`.
    pub fn field_rates(&self, t: f64) -> (f64, f64) {
        let n = self.n_ratio as f64;
        (
            self.eps1 * self.omega * (self.omega * t).cos(),
            -self.eps2 * n * self.omega * (n * self.omega * t - self.phi).sin(),
        )
    }

    /// Rate of channel `i` (1 or 2).
    pub fn rate(&self, channel: usize, t: f64) -> f64 {
        let (a, b) = self.field_rates(t);
        if channel == 1 {
            a
        } else {
            b
        }
    }

    /// Coefficient of `sigma_z` in `H_S(t)`.
    pub fn bias(&self, t: f64) -> f64 {
        let (a, b) = self.fields(t);
        -0.5 * (a + b)
    }
}
