//! Static and dynamic thermodynamic uncertainty relations at maximum efficiency.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hilbert::Beta;
use crate::linres::{me_line_and_performance, MEPoint, OnsagerMatrix, OnsagerSource};

/// Static bound on `Q`.
pub const STATIC_BOUND: f64 = 2.0;
/// `|P_out|` below which the dynamic bound is not evaluated.
pub const P_OUT_FLOOR: f64 = 1e-10;

/// `Q = sigma D_out / P_out^2` with `sigma = beta (P_in - |P_out|)`.
///
/// The equivalent form `beta |P_out| (1/eta - 1) Sigma_out^2` is evaluated as a check.
pub fn tradeoff_q(p_in: f64, p_out: f64, d_out: f64, beta: Beta) -> Result<f64> {
    if !(p_out < 0.0 && p_in > 0.0) {
        return Err(Error::NoConversion { omega: f64::NAN });
    }
    let b = match beta {
        Beta::Finite(b) => b,
        Beta::Infinite => {
            return Err(invalid(
                "beta",
                "the tradeoff parameter needs a finite temperature",
            ))
        }
    };
    let sigma = b * (p_in - p_out.abs());
    let q = sigma * d_out / (p_out * p_out);
    let eta = p_out.abs() / p_in;
    let sigma_out_sq = d_out / (p_out * p_out);
    let q_alt = b * p_out.abs() * (1.0 / eta - 1.0) * sigma_out_sq;
    // 1/eta - 1 loses digits as eta -> 1
    let tol = 1e-12 + 8.0 * f64::EPSILON / (1.0 - eta).abs();
    debug_assert!(
        (q - q_alt).abs() <= tol * q.abs().max(q_alt.abs()) + 1e-300,
        "Q forms disagree: {q} vs {q_alt}"
    );
    Ok(q)
}

/// Value of the dynamic bound at one grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynamicBound {
    pub value: f64,
    /// `P_out` changes sign or drops below the floor within the stencil.
    pub singular: bool,
}

fn check_uniform(omegas: &[f64]) -> Result<f64> {
    if omegas.len() < 3 {
        return Err(Error::IncompleteStencil {
            omega: omegas.first().copied().unwrap_or(f64::NAN),
        });
    }
    let h = omegas[1] - omegas[0];
    if !(h > 0.0)
        || omegas
            .windows(2)
            .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(w[1].abs()))
    {
        return Err(invalid("omegas", "the grid must be uniform and increasing"));
    }
    Ok(h)
}

/// `dP/domega` at `i`: 4th-order central inside, 2nd-order central next to the
/// edges and 2nd-order one-sided at the ends. Returns the derivative and the stencil.
fn derivative(p: &[f64], h: f64, i: usize) -> (f64, std::ops::Range<usize>) {
    let n = p.len();
    if i >= 2 && i + 2 < n {
        (
            (p[i - 2] - 8.0 * p[i - 1] + 8.0 * p[i + 1] - p[i + 2]) / (12.0 * h),
            i - 2..i + 3,
        )
    } else if i >= 1 && i + 1 < n {
        ((p[i + 1] - p[i - 1]) / (2.0 * h), i - 1..i + 2)
    } else if i == 0 {
        ((-3.0 * p[0] + 4.0 * p[1] - p[2]) / (2.0 * h), 0..3)
    } else {
        (
            (3.0 * p[n - 1] - 4.0 * p[n - 2] + p[n - 3]) / (2.0 * h),
            n - 3..n,
        )
    }
}

/// `V_dyn = 2 (1 - (omega / P_out) dP_out/domega)^2` at grid index `i`.
pub fn dynamic_bound(omegas: &[f64], p_out: &[f64], i: usize) -> Result<DynamicBound> {
    if omegas.len() != p_out.len() {
        return Err(Error::DimensionMismatch {
            expected: omegas.len(),
            found: p_out.len(),
        });
    }
    if i >= omegas.len() {
        return Err(invalid("i", "index outside the grid"));
    }
    let h = check_uniform(omegas)?;
    if !(p_out[i].abs() >= P_OUT_FLOOR) {
        return Err(Error::BelowFloor {
            value: p_out[i].abs(),
            floor: P_OUT_FLOOR,
            omega: omegas[i],
        });
    }
    let (d, stencil) = derivative(p_out, h, i);
    let singular = p_out[stencil]
        .iter()
        .any(|&x| !(x.abs() >= P_OUT_FLOOR) || x.signum() != p_out[i].signum());
    let v = 1.0 - omegas[i] * d / p_out[i];
    Ok(DynamicBound {
        value: 2.0 * v * v,
        singular,
    })
}

/// How `dP_out/domega` is taken along the maximum-efficiency line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeMode {
    /// `eps1` held at `eps1_ME(omega)` while the Onsager matrix varies.
    #[default]
    Frozen,
    /// Derivative of `P_out,ME(omega)` with `eps1 = eps1_ME(omega)` varying too.
    Composed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TurPoint {
    pub omega: f64,
    pub me: MEPoint,
    /// Entropy production rate `(P_in - |P_out|) / T`.
    pub sigma: f64,
    pub q: f64,
    pub v_static: f64,
    pub v_dyn: f64,
    pub ratio: f64,
    pub static_violation: bool,
    pub dynamic_violation: bool,
    pub singular: bool,
}

/// One grid point of a sweep: either a full point or a gap with its reason.
#[derive(Clone, Debug, PartialEq)]
pub enum TurRow {
    Point(TurPoint),
    Gap { omega: f64, reason: String },
}

impl TurRow {
    pub fn omega(&self) -> f64 {
        match self {
            TurRow::Point(p) => p.omega,
            TurRow::Gap { omega, .. } => *omega,
        }
    }

    pub fn point(&self) -> Option<&TurPoint> {
        match self {
            TurRow::Point(p) => Some(p),
            TurRow::Gap { .. } => None,
        }
    }
}

fn is_gap_error(e: &Error) -> bool {
    matches!(
        e,
        Error::NoConversion { .. }
            | Error::SingularOnsager { .. }
            | Error::BelowFloor { .. }
            | Error::IncompleteStencil { .. }
    )
}

/// ME performance, static and dynamic TUR over a uniform `omega` grid.
pub fn sweep_tur<S: OnsagerSource + ?Sized>(
    source: &S,
    omegas: &[f64],
    eps2: f64,
    phi: f64,
    mode: DerivativeMode,
) -> Result<Vec<TurRow>> {
    check_uniform(omegas)?;
    let beta = source.beta();
    if let Beta::Infinite = beta {
        return Err(invalid(
            "beta",
            "the tradeoff parameter needs a finite temperature",
        ));
    }
    let mats: Vec<OnsagerMatrix> = omegas
        .par_iter()
        .map(|&w| source.onsager(w, phi))
        .collect::<Result<_>>()?;
    let mes: Vec<std::result::Result<MEPoint, String>> = mats
        .iter()
        .map(|l| match me_line_and_performance(l, eps2, beta) {
            Ok(m) => Ok(Ok(m)),
            Err(e) if is_gap_error(&e) => Ok(Err(e.to_string())),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let composed: Vec<f64> = mes
        .iter()
        .map(|m| m.as_ref().map(|m| m.p_out_me).unwrap_or(f64::NAN))
        .collect();

    let mut rows: Vec<TurRow> = Vec::with_capacity(omegas.len());
    for (i, &omega) in omegas.iter().enumerate() {
        let me = match &mes[i] {
            Ok(m) => *m,
            Err(reason) => {
                rows.push(TurRow::Gap {
                    omega,
                    reason: reason.clone(),
                });
                continue;
            }
        };
        let q = tradeoff_q(me.p_in_me, me.p_out_me, me.d_out_me, beta)?;
        let bound = match mode {
            DerivativeMode::Composed => dynamic_bound(omegas, &composed, i),
            DerivativeMode::Frozen => {
                let e1 = me.eps1_me;
                let frozen: Vec<f64> = mats
                    .iter()
                    .map(|l| l.l11 * e1 * e1 + l.l12 * e1 * eps2)
                    .collect();
                dynamic_bound(omegas, &frozen, i)
            }
        };
        let bound = match bound {
            Ok(b) => b,
            Err(e) if is_gap_error(&e) => {
                rows.push(TurRow::Gap {
                    omega,
                    reason: e.to_string(),
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let sigma = beta.value() * (me.p_in_me - me.p_out_me.abs());
        rows.push(TurRow::Point(TurPoint {
            omega,
            me,
            sigma,
            q,
            v_static: STATIC_BOUND,
            v_dyn: bound.value,
            ratio: q / bound.value,
            static_violation: false,
            dynamic_violation: false,
            singular: bound.singular,
        }));
    }
    debounce(&mut rows);
    Ok(rows)
}

/// A violation is claimed only where the point and all its grid neighbours violate.
fn debounce(rows: &mut [TurRow]) {
    let raw: Vec<(bool, bool)> = rows
        .iter()
        .map(|r| match r {
            TurRow::Point(p) if !p.singular => (p.q < STATIC_BOUND, p.ratio < 1.0),
            _ => (false, false),
        })
        .collect();
    let n = rows.len();
    for i in 0..n {
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(n - 1);
        if let TurRow::Point(p) = &mut rows[i] {
            p.static_violation = (lo..=hi).all(|j| raw[j].0);
            p.dynamic_violation = (lo..=hi).all(|j| raw[j].1);
        }
    }
}
