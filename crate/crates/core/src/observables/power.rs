//! Channel powers, energy bookkeeping, period averages and power fluctuations.

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::hilbert::{inner, DriveSpec, Hamiltonian, Operator, StateVector};
use crate::quad::trapezoid;
use crate::sil::{advance, propagate_with, SilConfig, Stepper};

/// `<P_i(t)> = -(1/2) eps_dot_i(t) <sigma_z>`.
pub fn channel_power(
    h: &Hamiltonian,
    drive: &DriveSpec,
    psi: &[C64],
    channel: usize,
    t: f64,
) -> Result<f64> {
    if !(1..=2).contains(&channel) {
        return Err(invalid("channel", format!("must be 1 or 2, got {channel}")));
    }
    let rate = drive.rate(channel, t);
    if rate == 0.0 {
        if psi.len() != h.dim() {
            return Err(Error::DimensionMismatch {
                expected: h.dim(),
                found: psi.len(),
            });
        }
        return Ok(0.0);
    }
    Ok(-0.5 * rate * h.expectation(Operator::SigmaZ, drive, t, psi)?)
}

/// Powers and energy variations (relative to the first sample) at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerRecord {
    pub t: f64,
    pub p1: f64,
    pub p2: f64,
    pub e_s: f64,
    pub e_b: f64,
    pub e_sb: f64,
    pub sigma_z: f64,
}

#[derive(Clone, Debug)]
pub struct PowerSeries {
    pub records: Vec<PowerRecord>,
    pub period: f64,
    pub final_state: StateVector,
}

impl PowerSeries {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn column(&self, f: impl Fn(&PowerRecord) -> f64) -> Vec<f64> {
        self.records.iter().map(f).collect()
    }
}

/// Propagates `psi0` to `t_final`, recording a `PowerRecord` every `stride` steps.
pub fn record_powers(
    h: &Hamiltonian,
    drive: &DriveSpec,
    cfg: &SilConfig,
    psi0: &StateVector,
    t_final: f64,
    stride: usize,
) -> Result<PowerSeries> {
    let names = ["p1", "p2", "e_s", "e_b", "e_sb", "sigma_z"]
        .map(String::from)
        .to_vec();
    let traj = propagate_with(h, drive, cfg, psi0, t_final, stride, names, |t, psi| {
        let sz = h.expectation(Operator::SigmaZ, drive, t, psi)?;
        let (r1, r2) = drive.field_rates(t);
        Ok(vec![
            -0.5 * r1 * sz,
            -0.5 * r2 * sz,
            h.expectation(Operator::System, drive, t, psi)?,
            h.expectation(Operator::BathEnergy, drive, t, psi)?,
            h.expectation(Operator::Coupling, drive, t, psi)?,
            sz,
        ])
    })?;
    let base = traj.values[0].clone();
    let records = traj
        .times
        .iter()
        .zip(&traj.values)
        .map(|(&t, v)| PowerRecord {
            t,
            p1: v[0],
            p2: v[1],
            e_s: v[2] - base[2],
            e_b: v[3] - base[3],
            e_sb: v[4] - base[4],
            sigma_z: v[5],
        })
        .collect();
    Ok(PowerSeries {
        records,
        period: drive.period(),
        final_state: traj.final_state,
    })
}

fn interpolate(times: &[f64], values: &[f64], t: f64) -> f64 {
    let i = times.partition_point(|&x| x <= t).clamp(1, times.len() - 1);
    let (t0, t1) = (times[i - 1], times[i]);
    let w = (t - t0) / (t1 - t0);
    values[i - 1] * (1.0 - w) + values[i] * w
}

/// Average of the piecewise-linear interpolant of `values` over `[start, start + width]`.
pub fn window_average(times: &[f64], values: &[f64], start: f64, width: f64) -> Result<f64> {
    if times.len() != values.len() || times.len() < 2 {
        return Err(invalid(
            "values",
            "need at least two samples with matching times",
        ));
    }
    let end = start + width;
    let slack = 1e-9 * width.max(1.0);
    if !(width > 0.0) || start < times[0] - slack || end > times[times.len() - 1] + slack {
        return Err(invalid(
            "window",
            format!("[{start}, {end}] is not covered by the samples"),
        ));
    }
    let (start, end) = (start.max(times[0]), end.min(times[times.len() - 1]));
    let mut knots = vec![start];
    knots.extend(times.iter().copied().filter(|&t| t > start && t < end));
    knots.push(end);
    let mut acc = 0.0;
    for w in knots.windows(2) {
        acc += 0.5
            * (w[1] - w[0])
            * (interpolate(times, values, w[0]) + interpolate(times, values, w[1]));
    }
    Ok(acc / width)
}

/// Trapezoidal average over exactly one drive period starting at `start`.
pub fn period_average(times: &[f64], values: &[f64], start: f64, period: f64) -> Result<f64> {
    window_average(times, values, start, period)
}

/// Start of the first period after which successive period averages of both
/// channel powers change by less than `tolerance` (relative), and not before `t_min`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyState {
    pub start: f64,
    pub p1: f64,
    pub p2: f64,
}

pub fn detect_steady_state(
    series: &PowerSeries,
    tolerance: f64,
    t_min: f64,
) -> Result<SteadyState> {
    let times = series.times();
    let (p1, p2) = (series.column(|r| r.p1), series.column(|r| r.p2));
    let t0 = times[0];
    let t_end = *times.last().expect("nonempty");
    let period = series.period;
    let mut prev: Option<(f64, f64)> = None;
    let mut k = 0usize;
    loop {
        let start = t0 + k as f64 * period;
        if start + period > t_end + 1e-9 * period {
            return Err(Error::NoSteadyState { t: t_end });
        }
        let a = (
            period_average(&times, &p1, start, period)?,
            period_average(&times, &p2, start, period)?,
        );
        if let Some(b) = prev {
            let close = |x: f64, y: f64| {
                (x - y).abs() <= tolerance * x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
            };
            let settled_at = start - period;
            if settled_at >= t_min && close(a.0, b.0) && close(a.1, b.1) {
                return Ok(SteadyState {
                    start: settled_at,
                    p1: b.0,
                    p2: b.1,
                });
            }
        }
        prev = Some(a);
        k += 1;
    }
}

/// Period average that refuses windows before the detected steady state.
pub fn steady_period_average(
    times: &[f64],
    values: &[f64],
    start: f64,
    period: f64,
    steady: &SteadyState,
) -> Result<f64> {
    if start < steady.start - 1e-9 * period {
        return Err(Error::NotSteady {
            start,
            steady: steady.start,
        });
    }
    period_average(times, values, start, period)
}

/// Sampling options for `power_fluctuations`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluctuationOptions {
    /// Reference times per period.
    pub n_s: usize,
    /// Relative size of `|B|` allowed at the end of the tau grid.
    pub tail_tolerance: f64,
    /// Tau span added between tail checks.
    pub tau_chunk: f64,
    pub tau_max: f64,
}

impl Default for FluctuationOptions {
    fn default() -> Self {
        Self {
            n_s: 16,
            tail_tolerance: 1e-4,
            tau_chunk: 20.0,
            tau_max: 2000.0,
        }
    }
}

/// `D_i` from connected two-time correlators of `sigma_z` in the steady state.
///
/// Uses `D_i = (1/2T) int_0^T ds eps_dot(s) int_0^inf dtau eps_dot(s + tau) B(s + tau, s)`,
/// which equals the backward form by periodicity. `psi` must be in the steady state;
/// the tau grid has the spacing of `cfg.dt`.
pub fn power_fluctuations(
    h: &Hamiltonian,
    drive: &DriveSpec,
    cfg: &SilConfig,
    psi: &StateVector,
    channel: usize,
    opts: &FluctuationOptions,
) -> Result<f64> {
    if !(1..=2).contains(&channel) {
        return Err(invalid("channel", format!("must be 1 or 2, got {channel}")));
    }
    let eps = if channel == 1 { drive.eps1 } else { drive.eps2 };
    if eps == 0.0 || !drive.is_driven() {
        return Ok(0.0);
    }
    if opts.n_s == 0 || !(opts.tau_chunk > 0.0) {
        return Err(invalid(
            "n_s",
            "need at least one reference time and a positive tau chunk",
        ));
    }
    let period = drive.period();
    let mut stepper = Stepper::new(*cfg, h.dim())?;
    let mut base = psi.amplitudes.clone();
    let mut now = psi.t;
    let mut acc = 0.0;
    for j in 0..opts.n_s {
        let s = psi.t + j as f64 * period / opts.n_s as f64;
        advance(&mut stepper, h, drive, now, s, &mut base)?;
        now = s;
        let inner_int = correlator_integral(h, drive, cfg, &base, s, channel, opts)?;
        acc += drive.rate(channel, s) * inner_int;
    }
    Ok(0.5 * acc / opts.n_s as f64)
}

/// `int_0^inf dtau eps_dot(s + tau) B(s + tau, s)` with adaptive tau extent.
fn correlator_integral(
    h: &Hamiltonian,
    drive: &DriveSpec,
    cfg: &SilConfig,
    psi_s: &[C64],
    s: f64,
    channel: usize,
    opts: &FluctuationOptions,
) -> Result<f64> {
    let dim = h.dim();
    let mut stepper = Stepper::new(*cfg, dim)?;
    let mut psi = psi_s.to_vec();
    let mut phi = vec![C64::new(0.0, 0.0); dim];
    h.apply_operator(Operator::SigmaZ, drive, s, &psi, &mut phi)?;
    let sz_s = inner(&psi, &phi).re;
    let mut zpsi = vec![C64::new(0.0, 0.0); dim];
    let dtau = cfg.dt;
    let per_chunk = ((opts.tau_chunk / dtau).round() as usize).max(1);
    let mut samples = Vec::new();
    let mut b_peak: f64 = 0.0;
    let mut t = s;
    loop {
        let mut chunk_peak: f64 = 0.0;
        for _ in 0..per_chunk {
            if !samples.is_empty() {
                advance(&mut stepper, h, drive, t, t + dtau, &mut psi)?;
                advance(&mut stepper, h, drive, t, t + dtau, &mut phi)?;
                t += dtau;
            }
            h.apply_operator(Operator::SigmaZ, drive, t, &psi, &mut zpsi)?;
            let corr = inner(&zpsi, &phi).re;
            let sz_t = inner(&psi, &zpsi).re;
            let b = corr - sz_t * sz_s;
            b_peak = b_peak.max(b.abs());
            chunk_peak = chunk_peak.max(b.abs());
            samples.push(drive.rate(channel, t) * b);
        }
        let tau = t - s;
        if chunk_peak <= opts.tail_tolerance * b_peak {
            return Ok(trapezoid(&samples, dtau));
        }
        if tau + opts.tau_chunk > opts.tau_max + 1e-9 {
            return Err(Error::UndecayedTail {
                residual: chunk_peak / b_peak.max(f64::MIN_POSITIVE),
                tau,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{build_model, BathSpec, Beta};

    #[test]
    fn averages_of_simple_signals() {
        let period = 2.0;
        let times: Vec<f64> = (0..=400).map(|i| i as f64 * 0.01).collect();
        let c = vec![3.5; times.len()];
        assert!((period_average(&times, &c, 0.37, period).unwrap() - 3.5).abs() < 1e-14);
        let w = std::f64::consts::TAU / period;
        let sine: Vec<f64> = times.iter().map(|t| (w * t).sin()).collect();
        assert!(period_average(&times, &sine, 0.5, period).unwrap().abs() < 1e-4);
        assert!(period_average(&times, &sine, 2.5, period).is_err());
    }

    #[test]
    fn power_vanishes_without_field_rate() {
        let spec = BathSpec::ohmic(0.1, 10.0, 3, 2, Beta::Infinite);
        let (_, h) = build_model(&spec, 1.0).unwrap();
        let psi = StateVector::up(h.dim());
        let d = DriveSpec::new(0.0, 0.5, 2.0, 0.0);
        assert_eq!(channel_power(&h, &d, &psi.amplitudes, 1, 0.3).unwrap(), 0.0);
        // eps1 sin(w t) has zero slope at w t = pi / 2
        let d = DriveSpec::new(-1.0, 0.5, 2.0, 0.0);
        let t = std::f64::consts::FRAC_PI_2 / 2.0;
        assert!(channel_power(&h, &d, &psi.amplitudes, 1, t).unwrap().abs() < 1e-15);
        assert!(channel_power(&h, &d, &psi.amplitudes, 3, t).is_err());
    }

    #[test]
    fn energy_balance_along_trajectory() {
        let spec = BathSpec::ohmic(0.1, 10.0, 4, 2, Beta::Infinite);
        let (_, h) = build_model(&spec, 1.0).unwrap();
        let drive = DriveSpec::new(-1.0, 0.5, 2.0, 0.0);
        let cfg = SilConfig {
            dt: 0.005,
            ..SilConfig::default()
        };
        let s = record_powers(&h, &drive, &cfg, &StateVector::up(h.dim()), 6.0, 1).unwrap();
        let r = &s.records;
        for i in 1..r.len() - 1 {
            let e = |k: usize| r[k].e_s + r[k].e_b + r[k].e_sb;
            let de = (e(i + 1) - e(i - 1)) / (r[i + 1].t - r[i - 1].t);
            assert!((de - (r[i].p1 + r[i].p2)).abs() < 1e-4, "t = {}", r[i].t);
        }
    }

    #[test]
    fn undissipated_correlator_reports_tail() {
        let spec = BathSpec::ohmic(0.0, 10.0, 2, 1, Beta::Infinite);
        let (_, h) = build_model(&spec, 1.0).unwrap();
        let drive = DriveSpec::new(0.5, 0.0, 1.0, 0.0);
        let opts = FluctuationOptions {
            n_s: 2,
            tau_chunk: 5.0,
            tau_max: 20.0,
            ..FluctuationOptions::default()
        };
        let r = power_fluctuations(
            &h,
            &drive,
            &SilConfig::default(),
            &StateVector::up(h.dim()),
            1,
            &opts,
        );
        assert!(matches!(r, Err(Error::UndecayedTail { .. })));
        assert_eq!(
            power_fluctuations(
                &h,
                &drive,
                &SilConfig::default(),
                &StateVector::up(h.dim()),
                2,
                &opts
            )
            .unwrap(),
            0.0
        );
    }
}
