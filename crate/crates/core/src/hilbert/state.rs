use num_complex::Complex64 as C64;

use crate::error::{invalid, Result};
use crate::hilbert::operator::norm;

/// Complex amplitudes over the truncated basis at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vec<C64>,
    pub t: f64,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>, t: f64) -> Self {
        Self { amplitudes, t }
    }

    /// `(a |+> + b |->)` times the reference bath configuration.
    pub fn product(dim: usize, tls: [C64; 2], t: f64) -> Result<Self> {
        let n = (tls[0].norm_sqr() + tls[1].norm_sqr()).sqrt();
        if !(n > 0.0) {
            return Err(invalid("tls", "TLS amplitudes must not vanish"));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[0] = tls[0] / n;
        amplitudes[1] = tls[1] / n;
        Ok(Self { amplitudes, t })
    }

    /// `|+> (sigma_z = +1)` times the reference configuration.
    pub fn up(dim: usize) -> Self {
        Self::product(dim, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)], 0.0).expect("nonzero")
    }

    /// Eigenstates of `sigma_y` with eigenvalue `+1` (`plus = true`) or `-1`.
    pub fn y_state(dim: usize, plus: bool) -> Self {
        let s = if plus { 1.0 } else { -1.0 };
        Self::product(dim, [C64::new(1.0, 0.0), C64::new(0.0, s)], 0.0).expect("nonzero")
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amplitudes.iter_mut().for_each(|z| *z /= n);
        }
    }
}
