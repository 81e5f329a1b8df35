//! Bath specification and its discretization into a finite set of modes.
//!
//! Modes are placed at the midpoint quantiles of an exponential density of
//! states `rho(w) = C exp(-w / omega_c)` supported on `(0, 2 omega_c]`, with `C`
//! fixed so that the density integrates to the mode count over that support.
//! Each coupling is then chosen so that `rho(w_k) g_k^2 = J(w_k)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Inverse temperature in units of `1/Delta`. `Infinite` is the zero-temperature limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub enum Beta {
    Infinite,
    Finite(f64),
}

impl Beta {
    pub fn new(beta: f64) -> Self {
        if beta.is_infinite() {
            Beta::Infinite
        } else {
            Beta::Finite(beta)
        }
    }

    pub fn from_temperature(t: f64) -> Self {
        if t == 0.0 {
            Beta::Infinite
        } else {
            Beta::Finite(1.0 / t)
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Beta::Infinite => f64::INFINITY,
            Beta::Finite(b) => b,
        }
    }

    pub fn is_zero_temperature(self) -> bool {
        matches!(self, Beta::Infinite)
    }

    /// `coth(beta w / 2)`, equal to `sign(w)` at zero temperature.
    pub fn coth_half(self, w: f64) -> f64 {
        match self {
            Beta::Infinite => w.signum(),
            Beta::Finite(b) => 1.0 / (0.5 * b * w).tanh(),
        }
    }

    /// `tanh(beta w / 2)`.
    pub fn tanh_half(self, w: f64) -> f64 {
        match self {
            Beta::Infinite => w.signum(),
            Beta::Finite(b) => (0.5 * b * w).tanh(),
        }
    }

    /// Bose-Einstein occupation `1 / (exp(beta w) - 1)`.
    pub fn bose(self, w: f64) -> f64 {
        match self {
            Beta::Infinite => 0.0,
            Beta::Finite(b) => 1.0 / (b * w).exp_m1(),
        }
    }
}

impl From<f64> for Beta {
    fn from(b: f64) -> Self {
        Beta::new(b)
    }
}

impl From<Beta> for f64 {
    fn from(b: Beta) -> f64 {
        b.value()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    /// Dimensionless dissipation strength.
    pub alpha: f64,
    /// Spectral exponent; only the Ohmic case `s = 1` is simulated.
    pub s: f64,
    pub omega_c: f64,
    pub m_mod: usize,
    pub n_ph: usize,
    pub beta: Beta,
}

impl BathSpec {
    pub fn ohmic(alpha: f64, omega_c: f64, m_mod: usize, n_ph: usize, beta: Beta) -> Self {
        Self {
            alpha,
            s: 1.0,
            omega_c,
            m_mod,
            n_ph,
            beta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0) {
            return Err(invalid(
                "alpha",
                format!("must be >= 0, got {}", self.alpha),
            ));
        }
        if !(self.omega_c > 0.0) {
            return Err(invalid(
                "omega_c",
                format!("must be > 0, got {}", self.omega_c),
            ));
        }
        if self.m_mod == 0 {
            return Err(invalid("m_mod", "at least one bath mode is required"));
        }
        if self.n_ph == 0 {
            return Err(invalid("n_ph", "the excitation cap must be >= 1"));
        }
        if let Beta::Finite(b) = self.beta {
            if !(b > 0.0) {
                return Err(invalid("beta", format!("must be > 0, got {b}")));
            }
        }
        Ok(())
    }

    /// Rejects spectral exponents other than the Ohmic one.
    pub fn require_ohmic(&self) -> Result<()> {
        if self.s != 1.0 {
            return Err(Error::Unsupported(format!(
                "Ohmic only: spectral exponent s = {} is not simulated",
                self.s
            )));
        }
        Ok(())
    }

    /// `J(w) = 2 alpha w^s omega_c^(1-s) exp(-w / omega_c)`.
    pub fn spectral_density(&self, w: f64) -> f64 {
        2.0 * self.alpha
            * w.powf(self.s)
            * self.omega_c.powf(1.0 - self.s)
            * (-w / self.omega_c).exp()
    }
}

/// Discretized bath: mode frequencies and their couplings to the TLS.
#[derive(Clone, Debug, PartialEq)]
pub struct BathModes {
    pub omega: Vec<f64>,
    pub coupling: Vec<f64>,
    /// Prefactor `C` of the density of states.
    pub density_prefactor: f64,
    pub omega_c: f64,
}

impl BathModes {
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn density(&self, w: f64) -> f64 {
        self.density_prefactor * (-w / self.omega_c).exp()
    }

    /// Largest frequency gap between neighbouring modes below `w_max`.
    pub fn max_spacing_below(&self, w_max: f64) -> f64 {
        self.omega
            .windows(2)
            .filter(|p| p[0] <= w_max)
            .map(|p| p[1] - p[0])
            .fold(self.omega.first().copied().unwrap_or(0.0), f64::max)
    }
}

/// Upper edge of the mode support in units of `omega_c`.
const SUPPORT: f64 = 2.0;

pub fn discretize_bath(spec: &BathSpec) -> Result<BathModes> {
    if spec.m_mod == 0 {
        return Err(invalid("m_mod", "at least one bath mode is required"));
    }
    if !(spec.omega_c > 0.0) {
        return Err(invalid(
            "omega_c",
            format!("must be > 0, got {}", spec.omega_c),
        ));
    }
    if !(spec.alpha >= 0.0) {
        return Err(invalid(
            "alpha",
            format!("must be >= 0, got {}", spec.alpha),
        ));
    }
    let m = spec.m_mod as f64;
    let wc = spec.omega_c;
    // fraction of the untruncated exponential that lies inside the support
    let mass = -(-SUPPORT).exp_m1();
    let prefactor = m / (wc * mass);

    let omega: Vec<f64> = (0..spec.m_mod)
        .map(|k| {
            let u = (k as f64 + 0.5) / m;
            -wc * (-u * mass).ln_1p()
        })
        .collect();
    let coupling = omega
        .iter()
        .map(|&w| {
            let rho = prefactor * (-w / wc).exp();
            (spec.spectral_density(w) / rho).sqrt()
        })
        .collect();
    Ok(BathModes {
        omega,
        coupling,
        density_prefactor: prefactor,
        omega_c: wc,
    })
}

/// Draws one set of reference occupations from the Bose-Einstein distribution.
///
/// Occupations are capped at `cap`; the neglected tail has weight `exp(-beta w (cap + 1))`.
pub fn sample_occupations<R: Rng + ?Sized>(
    modes: &BathModes,
    beta: Beta,
    cap: u32,
    rng: &mut R,
) -> Vec<u32> {
    match beta {
        Beta::Infinite => vec![0; modes.len()],
        Beta::Finite(b) => modes
            .omega
            .iter()
            .map(|&w| {
                // geometric law P(n) = (1 - q) q^n with q = exp(-beta w)
                let u: f64 = rng.random::<f64>();
                let n = ((1.0 - u).ln() / (-b * w)).floor();
                if n.is_finite() {
                    (n as u64).min(cap as u64) as u32
                } else {
                    cap
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(alpha: f64, omega_c: f64, m: usize) -> BathSpec {
        BathSpec::ohmic(alpha, omega_c, m, 2, Beta::Infinite)
    }

    #[test]
    fn zero_alpha_has_no_coupling() {
        for s in [0.5, 1.0, 2.0] {
            let mut b = spec(0.0, 3.0, 17);
            b.s = s;
            let modes = discretize_bath(&b).unwrap();
            assert!(modes.coupling.iter().all(|&g| g == 0.0));
        }
    }

    #[test]
    fn coupling_rule_reproduces_spectral_density() {
        let b = spec(0.1, 10.0, 220);
        let modes = discretize_bath(&b).unwrap();
        for (&w, &g) in modes.omega.iter().zip(&modes.coupling) {
            let j = 2.0 * 0.1 * w * (-w / 10.0).exp();
            let lhs = modes.density(w) * g * g;
            assert!(((lhs - j) / j).abs() <= 1e-10, "w = {w}: {lhs} vs {j}");
        }
    }

    #[test]
    fn nodes_are_cdf_quantiles() {
        // oracle: bisection on the cumulative integral of rho over (0, w]
        let b = spec(0.1, 1.0, 4);
        let modes = discretize_bath(&b).unwrap();
        let c = 4.0 / (1.0 - (-2.0f64).exp());
        let cumulative = |w: f64| c * (1.0 - (-w).exp());
        for (k, &w) in modes.omega.iter().enumerate() {
            let target = k as f64 + 0.5;
            let (mut lo, mut hi) = (0.0f64, 2.0f64);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if cumulative(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            assert!((w - 0.5 * (lo + hi)).abs() < 1e-13, "node {k}: {w} vs {lo}");
        }
    }

    #[test]
    fn modes_lie_in_support() {
        let modes = discretize_bath(&spec(0.2, 7.0, 500)).unwrap();
        assert!(modes.omega.iter().all(|&w| w > 0.0 && w <= 14.0));
        assert!(modes.omega.windows(2).all(|p| p[1] > p[0]));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(discretize_bath(&spec(0.1, 10.0, 0)).is_err());
        assert!(discretize_bath(&spec(0.1, 0.0, 4)).is_err());
        assert!(discretize_bath(&spec(0.1, -1.0, 4)).is_err());
        let mut b = spec(0.1, 10.0, 4);
        b.s = 0.5;
        assert!(matches!(b.require_ohmic(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn beta_conventions() {
        assert_eq!(Beta::from_temperature(0.0), Beta::Infinite);
        assert_eq!(Beta::Infinite.coth_half(2.0), 1.0);
        assert_eq!(Beta::Infinite.bose(0.3), 0.0);
        let b = Beta::Finite(10.0);
        assert!((b.coth_half(0.2) - 1.0 / 1.0f64.tanh()).abs() < 1e-15);
        assert!((b.bose(0.1) - 1.0 / (1.0f64.exp() - 1.0)).abs() < 1e-14);
    }
}
