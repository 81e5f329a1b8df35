//! Equilibrium correlation function of `sigma_z` and its half-line transform.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hilbert::bath::sample_occupations;
use crate::hilbert::{
    build_model_around, discretize_bath, inner, norm, BathSpec, Beta, DriveSpec, Hamiltonian,
    Operator, StateVector, DEFAULT_STATE_BUDGET,
};
use crate::linres::{OnsagerMatrix, OnsagerSource, Provenance};
use crate::quad::trapezoid;
use crate::sil::{advance, correlator_forward, SilConfig, Stepper};

/// `C(tau) = <sigma_z(tau) sigma_z(0)>` sampled on a uniform grid starting at zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationFunction {
    pub dtau: f64,
    pub values: Vec<C64>,
    /// Time at which the correlator was started.
    pub t_bar: f64,
    /// Temperature of the prepared state.
    pub beta: Beta,
    /// `<sigma_z>` in the prepared state.
    pub mean_sigma_z: f64,
}

impl CorrelationFunction {
    pub fn from_fn<F: Fn(f64) -> C64>(f: F, dtau: f64, len: usize, beta: Beta) -> Self {
        let values = (0..len).map(|i| f(i as f64 * dtau)).collect();
        Self {
            dtau,
            values,
            t_bar: 0.0,
            beta,
            mean_sigma_z: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn tau(&self, i: usize) -> f64 {
        i as f64 * self.dtau
    }

    pub fn tau_max(&self) -> f64 {
        self.tau(self.len().saturating_sub(1))
    }
}

/// How the equilibrium state is prepared before the correlator is sampled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Preparation {
    /// Free relaxation from `|+>` times sampled reference occupations.
    Relaxed {
        t_bar_max: f64,
        /// Window over which `<sigma_z>` is averaged when measuring drift.
        window: f64,
        drift_tolerance: f64,
        samples: usize,
        seed: u64,
    },
    /// Lowest eigenstate of the field-free Hamiltonian (zero temperature).
    GroundState { tolerance: f64, max_restarts: usize },
}

impl Preparation {
    pub fn relaxed() -> Self {
        Preparation::Relaxed {
            t_bar_max: 400.0,
            window: std::f64::consts::TAU,
            drift_tolerance: 1e-4,
            samples: 16,
            seed: 1,
        }
    }

    pub fn ground_state() -> Self {
        Preparation::GroundState {
            tolerance: 1e-10,
            max_restarts: 200,
        }
    }
}

/// Restarted Lanczos ground state of `h` (no drive).
pub fn ground_state(
    h: &Hamiltonian,
    tolerance: f64,
    max_restarts: usize,
) -> Result<(f64, Vec<C64>)> {
    const KRYLOV: usize = 40;
    let terms = h.terms_at(&DriveSpec::undriven(), 0.0);
    let dim = h.dim();
    let zero = C64::new(0.0, 0.0);
    // start: TLS in the symmetric combination on the reference configuration, plus a small spread
    let mut x = vec![zero; dim];
    for (i, z) in x.iter_mut().enumerate() {
        *z = C64::new(1e-3 / (1.0 + i as f64), 0.0);
    }
    x[0] = C64::new(1.0, 0.0);
    x[1] = C64::new(1.0, 0.0);
    let mut hx = vec![zero; dim];
    let mut residual = f64::INFINITY;
    let m = KRYLOV.min(dim);
    let mut vs: Vec<Vec<C64>> = Vec::with_capacity(m);
    for _ in 0..max_restarts {
        let n = norm(&x);
        x.iter_mut().for_each(|z| *z /= n);
        vs.clear();
        vs.push(x.clone());
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        for k in 0..m {
            h.apply_terms(&terms, &vs[k], &mut hx)?;
            let scale = norm(&hx);
            let a = inner(&vs[k], &hx).re;
            alpha.push(a);
            for v in vs.iter() {
                let c = inner(v, &hx);
                hx.iter_mut().zip(v).for_each(|(w, y)| *w -= y * c);
            }
            let b = norm(&hx);
            if k + 1 == m || b <= 1e-12 * scale {
                break;
            }
            beta.push(b);
            vs.push(hx.iter().map(|z| z / b).collect());
        }
        let k = alpha.len();
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
        let (lo, &theta) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty");
        x.iter_mut().for_each(|z| *z = zero);
        for (i, v) in vs.iter().enumerate().take(k) {
            let c = eig.eigenvectors[(i, lo)];
            x.iter_mut().zip(v).for_each(|(z, y)| *z += y * c);
        }
        h.apply_terms(&terms, &x, &mut hx)?;
        residual = hx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b * theta).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual < tolerance {
            return Ok((theta, x));
        }
    }
    Err(Error::NoConvergence {
        residual,
        iterations: max_restarts,
    })
}

/// Samples `<sigma_z(t + tau) sigma_z(t)>` for `tau = 0, dtau, ..., tau_max` from `psi` at time `t`.
fn sample_correlator(
    h: &Hamiltonian,
    cfg: &SilConfig,
    psi: &StateVector,
    dtau: f64,
    n: usize,
) -> Result<Vec<C64>> {
    let taus: Vec<f64> = (0..n).map(|i| i as f64 * dtau).collect();
    correlator_forward(
        h,
        &DriveSpec::undriven(),
        cfg,
        psi,
        Operator::SigmaZ,
        Operator::SigmaZ,
        &taus,
    )
}

/// Propagates `psi` freely until the windowed drift of `<sigma_z>` falls below tolerance.
fn relax(
    h: &Hamiltonian,
    cfg: &SilConfig,
    psi: &mut StateVector,
    t_max: f64,
    window: f64,
    tol: f64,
) -> Result<()> {
    let drive = DriveSpec::undriven();
    let mut stepper = Stepper::new(*cfg, h.dim())?;
    let per_window = ((window / cfg.dt).ceil() as usize).max(2);
    let h_step = window / per_window as f64;
    let mut prev: Option<f64> = None;
    let mut drift = f64::INFINITY;
    while psi.t + window <= t_max + 1e-9 {
        let mut samples = Vec::with_capacity(per_window + 1);
        samples.push(h.expectation(Operator::SigmaZ, &drive, psi.t, &psi.amplitudes)?);
        for _ in 0..per_window {
            advance(
                &mut stepper,
                h,
                &drive,
                psi.t,
                psi.t + h_step,
                &mut psi.amplitudes,
            )?;
            psi.t += h_step;
            samples.push(h.expectation(Operator::SigmaZ, &drive, psi.t, &psi.amplitudes)?);
        }
        let mean = trapezoid(&samples, h_step) / window;
        if let Some(p) = prev {
            drift = (mean - p).abs() / window;
            if drift < tol {
                return Ok(());
            }
        }
        prev = Some(mean);
    }
    Err(Error::NotRelaxed { drift, t: psi.t })
}

/// Equilibrium `sigma_z` correlation of the field-free model.
///
/// `tau_max` and `dtau` fix the sampling grid; `dtau` should be a multiple of `cfg.dt`.
pub fn equilibrium_correlation(
    spec: &BathSpec,
    delta: f64,
    cfg: &SilConfig,
    preparation: &Preparation,
    tau_max: f64,
    dtau: f64,
) -> Result<CorrelationFunction> {
    if !(dtau > 0.0) || !(tau_max > 0.0) {
        return Err(invalid("tau_max", "tau grid must be positive"));
    }
    let n = (tau_max / dtau).round() as usize + 1;
    match *preparation {
        Preparation::GroundState {
            tolerance,
            max_restarts,
        } => {
            let (_, h) =
                build_model_around(spec, delta, &vec![0; spec.m_mod], DEFAULT_STATE_BUDGET)?;
            let (_, x) = ground_state(&h, tolerance, max_restarts)?;
            let psi = StateVector::new(x, 0.0);
            let mean = h.expectation(
                Operator::SigmaZ,
                &DriveSpec::undriven(),
                0.0,
                &psi.amplitudes,
            )?;
            let values = sample_correlator(&h, cfg, &psi, dtau, n)?;
            Ok(CorrelationFunction {
                dtau,
                values,
                t_bar: 0.0,
                beta: Beta::Infinite,
                mean_sigma_z: mean,
            })
        }
        Preparation::Relaxed {
            t_bar_max,
            window,
            drift_tolerance,
            samples,
            seed,
        } => {
            let modes = discretize_bath(spec)?;
            let count = if spec.beta.is_zero_temperature() {
                1
            } else {
                samples.max(1)
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut acc = vec![C64::new(0.0, 0.0); n];
            let mut mean = 0.0;
            let mut t_bar: f64 = 0.0;
            for _ in 0..count {
                let reference = sample_occupations(&modes, spec.beta, 64, &mut rng);
                let (_, h) = build_model_around(spec, delta, &reference, DEFAULT_STATE_BUDGET)?;
                let mut psi = StateVector::up(h.dim());
                relax(&h, cfg, &mut psi, t_bar_max, window, drift_tolerance)?;
                t_bar = t_bar.max(psi.t);
                mean += h.expectation(
                    Operator::SigmaZ,
                    &DriveSpec::undriven(),
                    psi.t,
                    &psi.amplitudes,
                )?;
                for (a, v) in acc
                    .iter_mut()
                    .zip(sample_correlator(&h, cfg, &psi, dtau, n)?)
                {
                    *a += v;
                }
            }
            let c = count as f64;
            acc.iter_mut().for_each(|z| *z /= c);
            Ok(CorrelationFunction {
                dtau,
                values: acc,
                t_bar,
                beta: spec.beta,
                mean_sigma_z: mean / c,
            })
        }
    }
}

/// Options for the half-line transform.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierOptions {
    /// Exponential window rates; empty for the bare transform. With several
    /// rates the result is extrapolated polynomially to zero rate.
    pub etas: Vec<f64>,
    /// Allowed size of the (windowed) tail relative to the peak of `Im C`.
    pub tail_tolerance: f64,
}

impl Default for FourierOptions {
    /// Window `eta = 1e-3` and `2e-3`, extrapolated linearly.
    fn default() -> Self {
        Self {
            etas: vec![1e-3, 2e-3],
            tail_tolerance: 1e-4,
        }
    }
}

impl FourierOptions {
    /// No window.
    pub fn bare() -> Self {
        Self {
            etas: Vec::new(),
            tail_tolerance: 1e-4,
        }
    }

    pub fn windowed(etas: Vec<f64>) -> Self {
        Self {
            etas,
            tail_tolerance: 1e-4,
        }
    }
}

fn windowed_transform(
    corr: &CorrelationFunction,
    omega: f64,
    eta: f64,
    mut f: impl FnMut(C64) -> f64,
) -> C64 {
    let samples: Vec<C64> = corr
        .values
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let tau = corr.tau(i);
            C64::from_polar((-eta * tau).exp(), omega * tau) * f(*c)
        })
        .collect();
    trapezoid(&samples, corr.dtau)
}

/// Lagrange extrapolation of `(x_i, y_i)` to `x = 0`.
fn extrapolate_to_zero(xs: &[f64], ys: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        let mut w = 1.0;
        for (j, &xj) in xs.iter().enumerate() {
            if i != j {
                w *= xj / (xj - xi);
            }
        }
        acc += yi * w;
    }
    acc
}

fn tail_ratio(corr: &CorrelationFunction, eta: f64, part: impl Fn(C64) -> f64) -> f64 {
    let n = corr.len();
    let peak = corr
        .values
        .iter()
        .map(|&c| part(c).abs())
        .fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let start = n - (n / 20).max(1);
    let tail = (start..n)
        .map(|i| part(corr.values[i]).abs() * (-eta * corr.tau(i)).exp())
        .fold(0.0, f64::max);
    tail / peak
}

/// Half-line transform of an arbitrary real part of `C` with the window/extrapolation rules.
pub fn half_line_transform(
    corr: &CorrelationFunction,
    omega: f64,
    opts: &FourierOptions,
    part: impl Fn(C64) -> f64 + Copy,
) -> Result<C64> {
    if corr.len() < 2 {
        return Err(invalid("corr", "at least two samples are needed"));
    }
    let eta_min = opts.etas.iter().copied().fold(f64::INFINITY, f64::min);
    let eta_min = if eta_min.is_finite() { eta_min } else { 0.0 };
    let residual = tail_ratio(corr, eta_min, part);
    if residual > opts.tail_tolerance {
        return Err(Error::UndecayedTail {
            residual,
            tau: corr.tau_max(),
        });
    }
    match opts.etas.len() {
        0 => Ok(windowed_transform(corr, omega, 0.0, part)),
        1 => Ok(windowed_transform(corr, omega, opts.etas[0], part)),
        _ => {
            let ys: Vec<C64> = opts
                .etas
                .iter()
                .map(|&e| windowed_transform(corr, omega, e, part))
                .collect();
            Ok(extrapolate_to_zero(&opts.etas, &ys))
        }
    }
}

/// `F(omega) = int_0^inf exp(i omega tau) Im C(tau) d tau`.
pub fn half_line_fourier(
    corr: &CorrelationFunction,
    omega: f64,
    opts: &FourierOptions,
) -> Result<C64> {
    half_line_transform(corr, omega, opts, |c| c.im)
}

pub fn onsager_from_correlation(
    corr: &CorrelationFunction,
    omega: f64,
    phi: f64,
    opts: &FourierOptions,
) -> Result<OnsagerMatrix> {
    let f = half_line_fourier(corr, omega, opts)?;
    Ok(OnsagerMatrix::from_fourier(
        f,
        omega,
        phi,
        Provenance::Numeric,
    ))
}

/// Linear-response fluctuation `D_i` of channel `channel` of `drive` by nested
/// trapezoid quadrature of `(1/2T) int dt eps_dot(t) int dtau eps_dot(t - tau) Re C(tau)`.
///
/// The window and extrapolation rules of `opts` apply to the inner integral.
pub fn fluctuations_from_correlation(
    corr: &CorrelationFunction,
    drive: &DriveSpec,
    channel: usize,
    n_t: usize,
    opts: &FourierOptions,
) -> Result<f64> {
    if n_t < 2 {
        return Err(invalid(
            "n_t",
            "at least two time points per period are needed",
        ));
    }
    if corr.len() < 2 {
        return Err(invalid("corr", "at least two samples are needed"));
    }
    let eta_min = opts.etas.iter().copied().fold(f64::INFINITY, f64::min);
    let eta_min = if eta_min.is_finite() { eta_min } else { 0.0 };
    let residual = tail_ratio(corr, eta_min, |c| c.re);
    if residual > opts.tail_tolerance {
        return Err(Error::UndecayedTail {
            residual,
            tau: corr.tau_max(),
        });
    }
    let period = drive.period();
    let nested = |eta: f64| -> f64 {
        let mut outer = 0.0;
        let mut inner_vals = vec![0.0; corr.len()];
        for j in 0..n_t {
            // periodic integrand: the rectangle rule is the trapezoid rule
            let t = j as f64 * period / n_t as f64;
            for (i, (v, c)) in inner_vals.iter_mut().zip(&corr.values).enumerate() {
                let tau = corr.tau(i);
                *v = drive.rate(channel, t - tau) * c.re * (-eta * tau).exp();
            }
            outer += drive.rate(channel, t) * trapezoid(&inner_vals, corr.dtau);
        }
        0.5 * outer / n_t as f64
    };
    Ok(match opts.etas.len() {
        0 => nested(0.0),
        1 => nested(opts.etas[0]),
        _ => {
            let ys: Vec<C64> = opts
                .etas
                .iter()
                .map(|&e| C64::new(nested(e), 0.0))
                .collect();
            extrapolate_to_zero(&opts.etas, &ys).re
        }
    })
}

/// Onsager source backed by a sampled correlation function.
#[derive(Clone, Debug)]
pub struct NumericSource {
    pub corr: CorrelationFunction,
    pub opts: FourierOptions,
}

impl OnsagerSource for NumericSource {
    fn onsager(&self, omega: f64, phi: f64) -> Result<OnsagerMatrix> {
        onsager_from_correlation(&self.corr, omega, phi, &self.opts)
    }

    fn beta(&self) -> Beta {
        self.corr.beta
    }
}
