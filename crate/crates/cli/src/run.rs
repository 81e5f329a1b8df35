//! Pipelines behind each run mode.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use wtw_core::analytic::{ToulouseParams, WeakCouplingParams};
use wtw_core::hilbert::bath::sample_occupations;
use wtw_core::hilbert::{
    build_model, build_model_around, discretize_bath, BathSpec, DriveSpec, StateVector,
    DEFAULT_STATE_BUDGET,
};
use wtw_core::linres::{
    equilibrium_correlation, me_line_and_performance, CorrelationFunction, FourierOptions,
    NumericSource, OnsagerSource,
};
use wtw_core::observables::{record_powers, witness_series, PowerRecord, PowerSeries};
use wtw_core::output::{self, Cell, Header};
use wtw_core::sil::SilConfig;
use wtw_core::tur::sweep_tur;

use crate::config::{ExperimentConfig, Mode, Oracle};

/// Largest thermal occupation drawn for a reference state.
const OCCUPATION_CAP: u32 = 64;

#[derive(Debug, thiserror::Error)]
#[error("{context}: {source}")]
pub struct RunError {
    pub context: String,
    #[source]
    pub source: wtw_core::Error,
}

trait Context<T> {
    fn context(self, f: impl FnOnce() -> String) -> Result<T, RunError>;
}

impl<T> Context<T> for wtw_core::Result<T> {
    fn context(self, f: impl FnOnce() -> String) -> Result<T, RunError> {
        self.map_err(|source| RunError {
            context: f(),
            source,
        })
    }
}

pub struct RunOutput {
    pub header: Header,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl RunOutput {
    pub fn write<W: std::io::Write>(&self, w: W) -> wtw_core::Result<()> {
        output::write_csv(w, &self.header, &self.columns, &self.rows)
    }
}

fn base_header(cfg: &ExperimentConfig) -> Header {
    let mut h = Header::default();
    h.push("wtw_version", env!("CARGO_PKG_VERSION"));
    h.push("provenance", cfg.oracle.as_str());
    for (k, v) in cfg.flattened() {
        h.push(k, v);
    }
    h
}

fn drive_at_config(cfg: &ExperimentConfig) -> DriveSpec {
    cfg.drive.spec(cfg.drive.omega.unwrap_or(1.0))
}

pub fn execute(cfg: &ExperimentConfig) -> Result<RunOutput, RunError> {
    let mut header = base_header(cfg);
    let (columns, rows) = match cfg.mode {
        Mode::Trajectory => {
            let (series, dim, sil) = trajectory(cfg)?;
            header
                .push("derived.dim", dim)
                .push("derived.dt", sil.dt)
                .push("derived.period", series.period);
            (output::POWER_COLUMNS.to_vec(), output::power_rows(&series))
        }
        Mode::Witness => {
            let drive = drive_at_config(cfg);
            let sil = cfg.sil.config(Some(&drive));
            let (_, h) = build_model(&cfg.bath.spec(), cfg.bath.delta)
                .context(|| "building the model".into())?;
            let t_final = cfg.time.t_final.unwrap_or_default();
            let w = witness_series(&h, &drive, &sil, t_final, cfg.time.stride)
                .context(|| "witness propagation".into())?;
            header
                .push("derived.dim", h.dim())
                .push("derived.dt", sil.dt)
                .push("derived.positive_growth", w.positive_growth());
            (output::WITNESS_COLUMNS.to_vec(), output::witness_rows(&w))
        }
        Mode::Correlation => {
            let corr = correlation(cfg, cfg.bath.alpha)?;
            header
                .push("derived.t_bar", corr.t_bar)
                .push("derived.mean_sigma_z", corr.mean_sigma_z);
            (
                output::CORRELATION_COLUMNS.to_vec(),
                output::correlation_rows(&corr),
            )
        }
        Mode::OnsagerSweep => {
            let mut rows = Vec::new();
            for alpha in cfg.alpha_grid() {
                rows.extend(with_alpha(alpha, onsager_sweep(cfg, alpha)?));
            }
            (prefixed(&output::ONSAGER_COLUMNS), rows)
        }
        Mode::TurSweep => {
            let mut rows = Vec::new();
            for alpha in cfg.alpha_grid() {
                let source = source(cfg, alpha)?;
                let tur = sweep_tur(
                    source.as_ref(),
                    &cfg.omega_grid(),
                    cfg.drive.eps2,
                    cfg.drive.phi,
                    cfg.sweep.derivative.into(),
                )
                .context(|| format!("TUR sweep at alpha = {alpha}"))?;
                rows.extend(with_alpha(alpha, output::tur_rows(&tur)));
            }
            (prefixed(&output::TUR_COLUMNS), rows)
        }
    };
    Ok(RunOutput {
        header,
        columns,
        rows,
    })
}

fn prefixed(columns: &[&'static str]) -> Vec<&'static str> {
    std::iter::once("alpha")
        .chain(columns.iter().copied())
        .collect()
}

fn with_alpha(alpha: f64, rows: Vec<Vec<Cell>>) -> Vec<Vec<Cell>> {
    rows.into_iter()
        .map(|r| {
            let mut out = vec![Cell::Num(alpha)];
            out.extend(r);
            out
        })
        .collect()
}

/// Power series from `|+>` times the bath reference; at finite temperature the
/// records are averaged over sampled reference occupations.
fn trajectory(cfg: &ExperimentConfig) -> Result<(PowerSeries, usize, SilConfig), RunError> {
    let drive = drive_at_config(cfg);
    let sil = cfg.sil.config(Some(&drive));
    let spec = cfg.bath.spec();
    let t_final = cfg.time.t_final.unwrap_or_default();
    let run = |reference: &[u32]| -> Result<(PowerSeries, usize), RunError> {
        let (_, h) = build_model_around(&spec, cfg.bath.delta, reference, DEFAULT_STATE_BUDGET)
            .context(|| "building the model".into())?;
        let s = record_powers(
            &h,
            &drive,
            &sil,
            &StateVector::up(h.dim()),
            t_final,
            cfg.time.stride,
        )
        .context(|| "trajectory propagation".into())?;
        Ok((s, h.dim()))
    };
    let references = references(&spec, cfg)?;
    let runs: Vec<(PowerSeries, usize)> = references
        .par_iter()
        .map(|r| run(r))
        .collect::<Result<_, _>>()?;
    let dim = runs.iter().map(|r| r.1).max().unwrap_or(0);
    let n = runs.len() as f64;
    let mut iter = runs.into_iter();
    let (mut acc, _) = iter.next().expect("at least one reference");
    for (s, _) in iter {
        for (a, b) in acc.records.iter_mut().zip(&s.records) {
            *a = PowerRecord {
                t: a.t,
                p1: a.p1 + b.p1,
                p2: a.p2 + b.p2,
                e_s: a.e_s + b.e_s,
                e_b: a.e_b + b.e_b,
                e_sb: a.e_sb + b.e_sb,
                sigma_z: a.sigma_z + b.sigma_z,
            };
        }
    }
    if n > 1.0 {
        for r in &mut acc.records {
            *r = PowerRecord {
                t: r.t,
                p1: r.p1 / n,
                p2: r.p2 / n,
                e_s: r.e_s / n,
                e_b: r.e_b / n,
                e_sb: r.e_sb / n,
                sigma_z: r.sigma_z / n,
            };
        }
    }
    Ok((acc, dim, sil))
}

fn references(spec: &BathSpec, cfg: &ExperimentConfig) -> Result<Vec<Vec<u32>>, RunError> {
    if spec.beta.is_zero_temperature() {
        return Ok(vec![vec![0; spec.m_mod]]);
    }
    let modes = discretize_bath(spec).context(|| "discretizing the bath".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok((0..cfg.time.samples.max(1))
        .map(|_| sample_occupations(&modes, spec.beta, OCCUPATION_CAP, &mut rng))
        .collect())
}

fn correlation(cfg: &ExperimentConfig, alpha: f64) -> Result<CorrelationFunction, RunError> {
    let c = &cfg.correlation;
    match cfg.oracle {
        Oracle::WeakCoupling => {
            let p = weak(cfg, alpha)?;
            let n = (c.tau_max / c.dtau).round() as usize + 1;
            Ok(CorrelationFunction::from_fn(
                |t| p.correlation(t),
                c.dtau,
                n,
                p.beta,
            ))
        }
        _ => {
            let spec = BathSpec {
                alpha,
                ..cfg.bath.spec()
            };
            let sil = cfg.sil.config(None);
            equilibrium_correlation(
                &spec,
                cfg.bath.delta,
                &sil,
                &c.preparation,
                c.tau_max,
                c.dtau,
            )
            .context(|| format!("equilibrium correlation at alpha = {alpha}"))
        }
    }
}

fn weak(cfg: &ExperimentConfig, alpha: f64) -> Result<WeakCouplingParams, RunError> {
    WeakCouplingParams::new(alpha, cfg.bath.delta, cfg.bath.omega_c, cfg.bath.beta())
        .context(|| "weak-coupling parameters".into())
}

fn source(cfg: &ExperimentConfig, alpha: f64) -> Result<Box<dyn OnsagerSource>, RunError> {
    Ok(match cfg.oracle {
        Oracle::Sil => {
            let corr = correlation(cfg, alpha)?;
            Box::new(NumericSource {
                corr,
                opts: FourierOptions::windowed(cfg.correlation.etas.clone()),
            })
        }
        Oracle::WeakCoupling => Box::new(weak(cfg, alpha)?),
        Oracle::Toulouse => {
            let beta = cfg.bath.beta();
            let p = match cfg.sweep.gamma {
                Some(g) => ToulouseParams::new(g, beta),
                None => ToulouseParams::from_bath(cfg.bath.delta, cfg.bath.omega_c, beta),
            };
            Box::new(p.context(|| "Toulouse parameters".into())?)
        }
    })
}

fn onsager_sweep(cfg: &ExperimentConfig, alpha: f64) -> Result<Vec<Vec<Cell>>, RunError> {
    let source = source(cfg, alpha)?;
    let beta = source.beta();
    let points = cfg
        .omega_grid()
        .par_iter()
        .map(|&w| {
            let l = source
                .onsager(w, cfg.drive.phi)
                .context(|| format!("Onsager matrix at omega = {w}"))?;
            Ok((l, me_line_and_performance(&l, cfg.drive.eps2, beta).ok()))
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    Ok(output::onsager_rows(&points))
}
