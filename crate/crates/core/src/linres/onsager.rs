use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::Beta;

/// Origin of an Onsager matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Numeric,
    WeakCoupling,
    Toulouse,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Numeric => "numeric",
            Provenance::WeakCoupling => "weak_coupling",
            Provenance::Toulouse => "toulouse",
        }
    }
}

/// Linear kinetic coefficients with `P_i = sum_j L_ij eps_i eps_j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OnsagerMatrix {
    pub l11: f64,
    pub l12: f64,
    pub l21: f64,
    pub l22: f64,
    pub omega: f64,
    pub phi: f64,
    pub provenance: Provenance,
}

impl OnsagerMatrix {
    /// Builds the matrix from the half-line transform `F(omega)` of `Im C`.
    pub fn from_fourier(f: C64, omega: f64, phi: f64, provenance: Provenance) -> Self {
        let q = 0.25 * omega;
        let (s, c) = phi.sin_cos();
        let diag = -q * f.im;
        Self {
            l11: diag,
            l12: q * (c * f.re - s * f.im),
            l21: -q * (c * f.re + s * f.im),
            l22: diag,
            omega,
            phi,
            provenance,
        }
    }

    pub fn det(&self) -> f64 {
        self.l11 * self.l22 - self.l12 * self.l21
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.l11, self.l12, self.l21, self.l22]
    }
}

/// Operating regime implied by the signs of the two mean powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// One channel delivers work (`output` has negative power).
    Conversion { output: usize },
    /// Both channels absorb work.
    Dissipator,
    /// At least one power vanishes.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanPowers {
    pub p1: f64,
    pub p2: f64,
    pub regime: Regime,
}

pub fn mean_powers(l: &OnsagerMatrix, eps1: f64, eps2: f64) -> MeanPowers {
    let p1 = l.l11 * eps1 * eps1 + l.l12 * eps1 * eps2;
    let p2 = l.l21 * eps1 * eps2 + l.l22 * eps2 * eps2;
    let regime = if p1 == 0.0 || p2 == 0.0 {
        Regime::Degenerate
    } else if p1 < 0.0 && p2 > 0.0 {
        Regime::Conversion { output: 1 }
    } else if p2 < 0.0 && p1 > 0.0 {
        Regime::Conversion { output: 2 }
    } else if p1 > 0.0 && p2 > 0.0 {
        Regime::Dissipator
    } else {
        Regime::Degenerate
    };
    MeanPowers { p1, p2, regime }
}

/// Efficiency `-P1 / P2` of converting work from channel 2 into channel 1.
pub fn efficiency(l: &OnsagerMatrix, eps1: f64, eps2: f64) -> f64 {
    let p = mean_powers(l, eps1, eps2);
    -p.p1 / p.p2
}

/// Performance at maximum efficiency for fixed `eps2`; channel 1 is the output.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MEPoint {
    pub omega: f64,
    pub eps1_me: f64,
    pub eta_me: f64,
    /// `P_1` at the ME point (negative).
    pub p_out_me: f64,
    /// `P_2` at the ME point.
    pub p_in_me: f64,
    /// Output power fluctuations `eps1_ME^2 omega coth(beta omega / 2) L11`.
    pub d_out_me: f64,
    /// Relative uncertainty `sqrt(D_out) / |P_out|`.
    pub sigma_rel_me: f64,
    /// Entropy production rate times temperature, `P_in - |P_out|`.
    pub dissipation: f64,
}

/// Relative size of `det L` below which the matrix is treated as singular.
pub const SINGULAR_DET: f64 = 1e-12;

/// Maximum-efficiency line and performance along it.
pub fn me_line_and_performance(l: &OnsagerMatrix, eps2: f64, beta: Beta) -> Result<MEPoint> {
    let omega = l.omega;
    let det = l.det();
    let scale = (l.l11 * l.l22).abs() + (l.l12 * l.l21).abs();
    if !(det.abs() > SINGULAR_DET * scale) || l.l21 == 0.0 || l.l12 == 0.0 {
        return Err(Error::SingularOnsager { omega, det });
    }
    let y = l.l12 * l.l21 / det;
    if !(1.0 + y >= 0.0) {
        return Err(Error::NoConversion { omega });
    }
    let root = (1.0 + y).sqrt();
    let x = l.l12 / l.l21;
    let eps1 = eps2 * (l.l22 / l.l21) * (1.0 / root - 1.0);
    let eta = x * (root - 1.0) / (root + 1.0);
    let powers = mean_powers(l, eps1, eps2);
    if powers.regime != (Regime::Conversion { output: 1 }) || !(eta > 0.0 && eta <= 1.0 + 1e-12) {
        return Err(Error::NoConversion { omega });
    }
    let p_out = -eps2 * eps2 * eta * l.l22 / root;
    let d_out = eps1 * eps1 * omega * beta.coth_half(omega) * l.l11;
    Ok(MEPoint {
        omega,
        eps1_me: eps1,
        eta_me: eta,
        p_out_me: p_out,
        p_in_me: powers.p2,
        d_out_me: d_out,
        sigma_rel_me: d_out.sqrt() / p_out.abs(),
        dissipation: powers.p2 - p_out.abs(),
    })
}
