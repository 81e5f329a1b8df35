//! Short Iterative Lanczos step with midpoint Hamiltonian.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hilbert::{inner, norm, DriveSpec, Hamiltonian, StateVector, Terms};

/// Relative norm of a new Krylov vector below which the space is invariant.
pub const BREAKDOWN: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SilConfig {
    pub dt: f64,
    pub krylov_dim: usize,
    pub reorthogonalize: bool,
    pub tolerance: f64,
}

impl Default for SilConfig {
    fn default() -> Self {
        Self {
            dt: 0.01,
            krylov_dim: 12,
            reorthogonalize: true,
            tolerance: 1e-9,
        }
    }
}

impl SilConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(invalid("dt", format!("must be > 0, got {}", self.dt)));
        }
        if !(2..=64).contains(&self.krylov_dim) {
            return Err(invalid(
                "krylov_dim",
                format!("must lie in [2, 64], got {}", self.krylov_dim),
            ));
        }
        if !(self.tolerance > 0.0) {
            return Err(invalid(
                "tolerance",
                format!("must be > 0, got {}", self.tolerance),
            ));
        }
        Ok(())
    }

    /// Default step for a drive: `min(0.01, T_drive / 200)`.
    pub fn for_drive(drive: &DriveSpec) -> Self {
        let dt = if drive.is_driven() {
            0.01f64.min(drive.period() / 200.0)
        } else {
            0.01
        };
        Self {
            dt,
            ..Self::default()
        }
    }
}

/// Diagnostics of one step.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StepInfo {
    /// Krylov dimension actually used.
    pub dim: usize,
    /// Estimated truncation error of the step.
    pub error: f64,
    /// The Krylov space closed before reaching the requested dimension.
    pub breakdown: bool,
}

/// Reusable Lanczos workspace.
#[derive(Debug)]
pub struct Stepper {
    cfg: SilConfig,
    basis: Vec<Vec<C64>>,
    work: Vec<C64>,
}

impl Stepper {
    pub fn new(cfg: SilConfig, dim: usize) -> Result<Self> {
        cfg.validate()?;
        let basis = (0..cfg.krylov_dim)
            .map(|_| vec![C64::new(0.0, 0.0); dim])
            .collect();
        Ok(Self {
            cfg,
            basis,
            work: vec![C64::new(0.0, 0.0); dim],
        })
    }

    pub fn config(&self) -> &SilConfig {
        &self.cfg
    }

    /// Advances `psi` by `dt` (negative for backward propagation) under fixed `terms`.
    ///
    /// The norm of `psi` is carried through unchanged, so unnormalized vectors
    /// (such as `A psi`) can be propagated as well.
    pub fn step_terms(
        &mut self,
        h: &Hamiltonian,
        terms: &Terms,
        dt: f64,
        psi: &mut [C64],
    ) -> Result<StepInfo> {
        let dim = h.dim();
        if psi.len() != dim || self.work.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: psi.len(),
            });
        }
        let nrm = norm(psi);
        if nrm == 0.0 {
            return Ok(StepInfo {
                dim: 0,
                error: 0.0,
                breakdown: true,
            });
        }
        let m = self.cfg.krylov_dim;
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        for (v, x) in self.basis[0].iter_mut().zip(psi.iter()) {
            *v = x / nrm;
        }
        let mut breakdown = false;
        let mut k = 0;
        while k < m {
            let (head, tail) = self.basis.split_at_mut(k + 1);
            let vk = &head[k];
            h.apply_terms(terms, vk, &mut self.work)?;
            let scale = norm(&self.work);
            let a = inner(vk, &self.work).re;
            alpha.push(a);
            for (w, v) in self.work.iter_mut().zip(vk) {
                *w -= v * a;
            }
            if k > 0 {
                let b = beta[k - 1];
                for (w, v) in self.work.iter_mut().zip(&head[k - 1]) {
                    *w -= v * b;
                }
            }
            if self.cfg.reorthogonalize {
                for v in head.iter() {
                    let c = inner(v, &self.work);
                    for (w, x) in self.work.iter_mut().zip(v) {
                        *w -= x * c;
                    }
                }
            }
            let b = norm(&self.work);
            k += 1;
            if !(b > BREAKDOWN * scale.max(f64::MIN_POSITIVE)) {
                breakdown = true;
                beta.push(0.0);
                break;
            }
            beta.push(b);
            if k < m {
                for (n, w) in tail[0].iter_mut().zip(&self.work) {
                    *n = w / b;
                }
            }
        }

        let t = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                alpha[i]
            } else if i == j + 1 {
                beta[j]
            } else if j == i + 1 {
                beta[i]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let q = &eig.eigenvectors;
        let mut coef = vec![C64::new(0.0, 0.0); k];
        for (l, &lam) in eig.eigenvalues.iter().enumerate() {
            let phase = C64::from_polar(q[(0, l)], -lam * dt);
            for (i, c) in coef.iter_mut().enumerate() {
                *c += phase * q[(i, l)];
            }
        }
        let error = if breakdown {
            0.0
        } else {
            beta[k - 1] * coef[k - 1].norm()
        };
        if error > self.cfg.tolerance {
            return Err(Error::ToleranceExceeded {
                estimate: error,
                tolerance: self.cfg.tolerance,
                t: f64::NAN,
            });
        }
        psi.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
        for (c, v) in coef.iter().zip(&self.basis) {
            let c = c * nrm;
            for (x, y) in psi.iter_mut().zip(v) {
                *x += y * c;
            }
        }
        Ok(StepInfo {
            dim: k,
            error,
            breakdown,
        })
    }

    /// One step from `t` to `t + dt` with `H(t + dt/2)`.
    pub fn step(
        &mut self,
        h: &Hamiltonian,
        drive: &DriveSpec,
        t: f64,
        dt: f64,
        psi: &mut [C64],
    ) -> Result<StepInfo> {
        let terms = h.terms_at(drive, t + 0.5 * dt);
        self.step_terms(h, &terms, dt, psi).map_err(|e| match e {
            Error::ToleranceExceeded {
                estimate,
                tolerance,
                ..
            } => Error::ToleranceExceeded {
                estimate,
                tolerance,
                t,
            },
            other => other,
        })
    }
}

/// Single SIL step of `psi` from `psi.t` to `psi.t + cfg.dt`.
pub fn sil_step(
    h: &Hamiltonian,
    drive: &DriveSpec,
    cfg: &SilConfig,
    psi: &StateVector,
) -> Result<(StateVector, StepInfo)> {
    let mut stepper = Stepper::new(*cfg, h.dim())?;
    let mut out = psi.clone();
    let info = stepper.step(h, drive, psi.t, cfg.dt, &mut out.amplitudes)?;
    out.t += cfg.dt;
    Ok((out, info))
}

/// Advances `psi` from `t0` to `t1` in equal steps no longer than `|cfg.dt|`.
pub fn advance(
    stepper: &mut Stepper,
    h: &Hamiltonian,
    drive: &DriveSpec,
    t0: f64,
    t1: f64,
    psi: &mut [C64],
) -> Result<usize> {
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(0);
    }
    let dt_max = stepper.config().dt;
    let n = ((span.abs() / dt_max) - 1e-9).ceil().max(1.0) as usize;
    let dt = span / n as f64;
    let mut breakdowns = 0;
    for i in 0..n {
        let t = t0 + i as f64 * dt;
        if stepper.step(h, drive, t, dt, psi)?.breakdown {
            breakdowns += 1;
        }
    }
    Ok(breakdowns)
}
