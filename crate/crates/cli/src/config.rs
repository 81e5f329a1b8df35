//! Experiment configuration, dotted-path overrides and validation.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use wtw_core::analytic::WeakCouplingParams;
use wtw_core::hilbert::basis::count_configs;
use wtw_core::hilbert::{BathSpec, Beta, DriveSpec, DEFAULT_STATE_BUDGET};
use wtw_core::linres::Preparation;
use wtw_core::sil::SilConfig;
use wtw_core::tur::DerivativeMode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Trajectory,
    Correlation,
    OnsagerSweep,
    TurSweep,
    Witness,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Trajectory => "trajectory",
            Mode::Correlation => "correlation",
            Mode::OnsagerSweep => "onsager_sweep",
            Mode::TurSweep => "tur_sweep",
            Mode::Witness => "witness",
        }
    }

    fn is_sweep(self) -> bool {
        matches!(self, Mode::OnsagerSweep | Mode::TurSweep)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Oracle {
    Sil,
    WeakCoupling,
    Toulouse,
}

impl Oracle {
    pub fn as_str(self) -> &'static str {
        match self {
            Oracle::Sil => "sil",
            Oracle::WeakCoupling => "weak_coupling",
            Oracle::Toulouse => "toulouse",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    pub alpha: f64,
    #[serde(default = "one")]
    pub s: f64,
    #[serde(default = "default_omega_c")]
    pub omega_c: f64,
    #[serde(default = "default_m_mod")]
    pub m_mod: usize,
    #[serde(default = "default_n_ph")]
    pub n_ph: usize,
    /// Inverse temperature; omitted means zero temperature.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Tunneling `Delta`.
    #[serde(default = "one")]
    pub delta: f64,
}

impl BathConfig {
    pub fn beta(&self) -> Beta {
        self.beta.map(Beta::new).unwrap_or(Beta::Infinite)
    }

    pub fn spec(&self) -> BathSpec {
        BathSpec {
            alpha: self.alpha,
            s: self.s,
            omega_c: self.omega_c,
            m_mod: self.m_mod,
            n_ph: self.n_ph,
            beta: self.beta(),
        }
    }
}

fn one() -> f64 {
    1.0
}
fn default_omega_c() -> f64 {
    10.0
}
fn default_m_mod() -> usize {
    60
}
fn default_n_ph() -> usize {
    2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    #[serde(default)]
    pub eps1: f64,
    pub eps2: f64,
    /// Single frequency for trajectory and witness runs; sweeps use `sweep.omega`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default)]
    pub phi: f64,
    #[serde(default = "one_u32")]
    pub n_ratio: u32,
}

fn one_u32() -> u32 {
    1
}

impl DriveConfig {
    pub fn spec(&self, omega: f64) -> DriveSpec {
        DriveSpec {
            eps1: self.eps1,
            eps2: self.eps2,
            omega,
            n_ratio: self.n_ratio,
            phi: self.phi,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SilSettings {
    /// Defaults to `min(0.01, T / 200)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub krylov_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl SilSettings {
    pub fn config(&self, drive: Option<&DriveSpec>) -> SilConfig {
        let mut cfg = drive.map(SilConfig::for_drive).unwrap_or_default();
        if let Some(dt) = self.dt {
            cfg.dt = dt;
        }
        if let Some(k) = self.krylov_dim {
            cfg.krylov_dim = k;
        }
        if let Some(t) = self.tolerance {
            cfg.tolerance = t;
        }
        cfg
    }
}

/// Frequency or coupling grid: an explicit list or `{ start, stop, count }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::List(v) => v.clone(),
            Grid::Range { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n)
                    .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Grid>,
    /// Coupling strengths; defaults to `bath.alpha`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Grid>,
    #[serde(default)]
    pub derivative: Derivative,
    /// Kondo frequency for the Toulouse oracle; derived from the bath if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Derivative {
    #[default]
    Frozen,
    Composed,
}

impl From<Derivative> for DerivativeMode {
    fn from(d: Derivative) -> Self {
        match d {
            Derivative::Frozen => DerivativeMode::Frozen,
            Derivative::Composed => DerivativeMode::Composed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[serde(default = "default_stride")]
    pub stride: usize,
    /// Thermal samples averaged at finite temperature.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self {
            t_final: None,
            stride: default_stride(),
            samples: default_samples(),
        }
    }
}

fn default_stride() -> usize {
    10
}
fn default_samples() -> usize {
    16
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationConfig {
    #[serde(default = "default_tau_max")]
    pub tau_max: f64,
    #[serde(default = "default_dtau")]
    pub dtau: f64,
    #[serde(default = "Preparation::relaxed")]
    pub preparation: Preparation,
    /// Exponential window rates of the half-line transform.
    #[serde(default = "default_etas")]
    pub etas: Vec<f64>,
}

impl Default for CorrelationConfig {
    fn default() -> Self {
        Self {
            tau_max: default_tau_max(),
            dtau: default_dtau(),
            preparation: Preparation::relaxed(),
            etas: default_etas(),
        }
    }
}

fn default_tau_max() -> f64 {
    1000.0
}
fn default_dtau() -> f64 {
    0.05
}
fn default_etas() -> Vec<f64> {
    vec![1e-3, 2e-3]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default = "default_oracle")]
    pub oracle: Oracle,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub bath: BathConfig,
    pub drive: DriveConfig,
    #[serde(default)]
    pub sil: SilSettings,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub correlation: CorrelationConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
}

fn default_oracle() -> Oracle {
    Oracle::Sil
}
fn default_seed() -> u64 {
    1
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed configuration: {0}")]
    Parse(String),
    #[error("override `{0}` must have the form path.to.field=value")]
    Override(String),
    #[error("override `{path}` does not name a field")]
    UnknownPath { path: String },
}

/// Parses a TOML document, applies `path=value` overrides, and deserializes.
pub fn load(text: &str, overrides: &[String]) -> Result<ExperimentConfig, ConfigError> {
    let mut doc: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    toml::Value::Table(doc)
        .try_into()
        .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))
}

pub fn read(path: &std::path::Path, overrides: &[String]) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    load(&text, overrides)
}

fn parse_value(raw: &str) -> toml::Value {
    // reuse the TOML grammar for numbers, booleans, arrays and inline tables
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn apply_override(doc: &mut toml::Table, item: &str) -> Result<(), ConfigError> {
    let (path, raw) = item
        .split_once('=')
        .ok_or_else(|| ConfigError::Override(item.to_string()))?;
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(ConfigError::Override(item.to_string()));
    }
    let (last, parents) = keys.split_last().expect("nonempty");
    let mut table = doc;
    for k in parents {
        let entry = table
            .entry(k.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| ConfigError::UnknownPath {
                path: path.to_string(),
            })?;
    }
    table.insert(last.to_string(), parse_value(raw.trim()));
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Finding {
    pub severity: Severity,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}: {}", self.field, self.message)
    }
}

/// Number of basis states (TLS included) of the zero-temperature basis.
pub fn state_count(bath: &BathConfig) -> u128 {
    2 * count_configs(bath.n_ph, &vec![0; bath.m_mod])
}

/// Rough peak memory in bytes of one SIL trajectory: Krylov vectors, work
/// vectors and the coupling matrix.
pub fn memory_estimate(bath: &BathConfig, krylov_dim: usize) -> u128 {
    let dim = state_count(bath);
    let configs = dim / 2;
    let vectors = (krylov_dim as u128 + 6) * dim * 16;
    let coupling = configs * (2 * bath.m_mod as u128).min(configs) * 12;
    vectors + coupling + configs * (bath.m_mod as u128 + 8)
}

impl ExperimentConfig {
    pub fn omega_grid(&self) -> Vec<f64> {
        self.sweep
            .omega
            .as_ref()
            .map(Grid::values)
            .unwrap_or_default()
    }

    pub fn alpha_grid(&self) -> Vec<f64> {
        self.sweep
            .alpha
            .as_ref()
            .map(Grid::values)
            .unwrap_or_else(|| vec![self.bath.alpha])
    }

    /// Every error and warning; the config is runnable when no error is present.
    pub fn validate(&self) -> Vec<Finding> {
        let mut out = Vec::new();
        let mut error = |field: &str, message: String| {
            out.push(Finding {
                severity: Severity::Error,
                field: field.into(),
                message,
            })
        };
        let b = &self.bath;
        if !(b.alpha >= 0.0) {
            error("bath.alpha", format!("must be >= 0, got {}", b.alpha));
        }
        if b.s != 1.0 {
            error(
                "bath.s",
                format!("Ohmic only: spectral exponent s = {} is not simulated", b.s),
            );
        }
        if !(b.omega_c > 0.0) {
            error("bath.omega_c", format!("must be > 0, got {}", b.omega_c));
        }
        if !(b.delta > 0.0) {
            error("bath.delta", format!("must be > 0, got {}", b.delta));
        }
        if let Some(beta) = b.beta {
            if !(beta > 0.0) {
                error("bath.beta", format!("must be > 0, got {beta}"));
            }
        }
        let needs_basis = self.oracle == Oracle::Sil || !self.mode.is_sweep();
        if needs_basis {
            if b.m_mod == 0 {
                error("bath.m_mod", "at least one bath mode is required".into());
            }
            if b.n_ph == 0 {
                error("bath.n_ph", "the excitation cap must be >= 1".into());
            }
            if b.m_mod > 0 && b.n_ph > 0 {
                let count = state_count(b);
                if count > DEFAULT_STATE_BUDGET as u128 {
                    error(
                        "bath",
                        format!("{count} basis states exceed the budget of {DEFAULT_STATE_BUDGET}"),
                    );
                }
            }
        }
        let d = &self.drive;
        if d.n_ratio != 1 {
            error(
                "drive.n_ratio",
                format!("out of scope: n=1 only, got {}", d.n_ratio),
            );
        }
        for (name, v) in [
            ("drive.eps1", d.eps1),
            ("drive.eps2", d.eps2),
            ("drive.phi", d.phi),
        ] {
            if !v.is_finite() {
                error(name, "must be finite".into());
            }
        }
        if let Some(dt) = self.sil.dt {
            if !(dt > 0.0) {
                error("sil.dt", format!("must be > 0, got {dt}"));
            }
        }
        if let Some(k) = self.sil.krylov_dim {
            if !(2..=64).contains(&k) {
                error("sil.krylov_dim", format!("must lie in [2, 64], got {k}"));
            }
        }
        match self.mode {
            Mode::Trajectory | Mode::Witness => {
                match d.omega {
                    None => error(
                        "drive.omega",
                        format!("required by mode {}", self.mode.as_str()),
                    ),
                    Some(w) if !(w > 0.0) => error("drive.omega", format!("must be > 0, got {w}")),
                    _ => {}
                }
                match self.time.t_final {
                    None => error(
                        "time.t_final",
                        format!("required by mode {}", self.mode.as_str()),
                    ),
                    Some(t) if !(t > 0.0) => error("time.t_final", format!("must be > 0, got {t}")),
                    _ => {}
                }
                if self.time.stride == 0 {
                    error("time.stride", "must be >= 1".into());
                }
                if self.oracle != Oracle::Sil {
                    error(
                        "oracle",
                        format!("mode {} needs the sil oracle", self.mode.as_str()),
                    );
                }
            }
            Mode::Correlation => {
                let c = &self.correlation;
                if !(c.tau_max > 0.0) || !(c.dtau > 0.0) || c.dtau > c.tau_max {
                    error(
                        "correlation.tau_max",
                        format!(
                            "need 0 < dtau <= tau_max, got dtau = {}, tau_max = {}",
                            c.dtau, c.tau_max
                        ),
                    );
                }
                if self.oracle == Oracle::Toulouse {
                    error(
                        "oracle",
                        "the Toulouse oracle has no sampled correlation function".into(),
                    );
                }
            }
            Mode::OnsagerSweep | Mode::TurSweep => {}
        }
        if self.mode.is_sweep() {
            let omegas = self.omega_grid();
            if omegas.is_empty() {
                error("sweep.omega", "grid is empty".into());
            } else if omegas.iter().any(|w| !(*w > 0.0)) {
                error("sweep.omega", "frequencies must be > 0".into());
            } else if !omegas.windows(2).all(|p| p[1] > p[0]) {
                error("sweep.omega", "grid must be strictly increasing".into());
            }
            let alphas = self.alpha_grid();
            if alphas.is_empty() {
                error("sweep.alpha", "grid is empty".into());
            } else if !alphas.windows(2).all(|p| p[1] > p[0]) {
                error("sweep.alpha", "grid must be strictly increasing".into());
            }
            if self.mode == Mode::TurSweep && omegas.len() < 3 {
                error(
                    "sweep.omega",
                    "the dynamic bound needs at least 3 frequencies".into(),
                );
            }
            if self.mode == Mode::TurSweep && self.bath.beta.is_none() {
                error(
                    "bath.beta",
                    "the tradeoff parameter needs a finite temperature".into(),
                );
            }
        }
        let mut warnings = Vec::new();
        if self.mode == Mode::Witness && b.beta.is_some() {
            warnings.push((
                "bath.beta",
                "witness runs start from the bath vacuum; beta is ignored".into(),
            ));
        }
        match self.oracle {
            Oracle::WeakCoupling => {
                for &alpha in &self.alpha_grid() {
                    match WeakCouplingParams::new(alpha, b.delta, b.omega_c, b.beta()) {
                        Err(e) => error("bath.alpha", e.to_string()),
                        Ok(p) => {
                            if let Some(w) = p.validity_warning() {
                                warnings.push(("bath.alpha", w));
                            }
                        }
                    }
                }
            }
            Oracle::Toulouse => {
                if self.alpha_grid().iter().any(|&a| a != 0.5) {
                    error(
                        "bath.alpha",
                        "the Toulouse oracle is the alpha = 0.5 solution".into(),
                    );
                }
                if b.beta.is_none() {
                    error(
                        "bath.beta",
                        "the Toulouse solution needs a finite temperature".into(),
                    );
                }
                if let Some(g) = self.sweep.gamma {
                    if !(g > 0.0) {
                        error("sweep.gamma", format!("must be > 0, got {g}"));
                    }
                }
            }
            Oracle::Sil => {
                if self.mode.is_sweep() && self.alpha_grid().len() > 1 {
                    warnings.push((
                        "sweep.alpha",
                        "each alpha needs its own correlator run".into(),
                    ));
                }
            }
        }
        out.extend(warnings.into_iter().map(|(f, m)| Finding {
            severity: Severity::Warning,
            field: f.into(),
            message: m,
        }));
        out
    }

    /// Flattened `path = value` pairs of the full configuration.
    pub fn flattened(&self) -> Vec<(String, String)> {
        let value = toml::Value::try_from(self).expect("config serializes");
        let mut out = Vec::new();
        flatten("", &value, &mut out);
        out
    }
}

fn flatten(prefix: &str, v: &toml::Value, out: &mut Vec<(String, String)>) {
    match v {
        toml::Value::Table(t) => {
            for (k, v) in t {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        toml::Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn has_errors(findings: &[Finding]) -> bool {
    findings.iter().any(|f| f.severity == Severity::Error)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
mode = "tur_sweep"
oracle = "weak_coupling"
[bath]
alpha = 0.1
beta = 10.0
[drive]
eps2 = 0.5
[sweep]
omega = { start = 0.1, stop = 2.0, count = 20 }
"#;

    fn errors_on(cfg: &ExperimentConfig, field: &str) -> Vec<String> {
        cfg.validate()
            .into_iter()
            .filter(|f| f.severity == Severity::Error && f.field == field)
            .map(|f| f.message)
            .collect()
    }

    #[test]
    fn base_config_is_clean() {
        let cfg = load(BASE, &[]).unwrap();
        assert!(cfg.validate().is_empty(), "{:?}", cfg.validate());
        assert_eq!(cfg.omega_grid().len(), 20);
        assert_eq!(cfg.alpha_grid(), vec![0.1]);
    }

    #[test]
    fn overrides_follow_dotted_paths() {
        let cfg = load(
            BASE,
            &[
                "bath.alpha=0.2".into(),
                "sweep.derivative=composed".into(),
                "time.t_final=5".into(),
            ],
        )
        .unwrap();
        assert_eq!(cfg.bath.alpha, 0.2);
        assert_eq!(cfg.sweep.derivative, Derivative::Composed);
        assert_eq!(cfg.time.t_final, Some(5.0));
        assert!(load(BASE, &["bath.alpha".into()]).is_err());
        assert!(load(BASE, &["bath.nonsense=1".into()]).is_err());
        assert!(load(BASE, &["bath.alpha.x=1".into()]).is_err());
    }

    #[test]
    fn strong_coupling_with_weak_oracle_is_an_error() {
        let cfg = load(BASE, &["bath.alpha=0.5".into()]).unwrap();
        assert_eq!(errors_on(&cfg, "bath.alpha").len(), 1);
    }

    #[test]
    fn stretched_weak_coupling_is_a_warning() {
        let cfg = load(BASE, &["bath.alpha=0.3".into()]).unwrap();
        let f = cfg.validate();
        assert!(!has_errors(&f));
        assert!(f
            .iter()
            .any(|x| x.severity == Severity::Warning && x.field == "bath.alpha"));
    }

    #[test]
    fn scope_limits() {
        let cfg = load(BASE, &["drive.n_ratio=2".into(), "bath.s=0.5".into()]).unwrap();
        assert_eq!(
            errors_on(&cfg, "drive.n_ratio"),
            vec!["out of scope: n=1 only, got 2"]
        );
        assert!(errors_on(&cfg, "bath.s")[0].starts_with("Ohmic only"));
    }

    #[test]
    fn empty_and_unsorted_grids_name_the_field() {
        let cfg = load(BASE, &["sweep.omega=[]".into()]).unwrap();
        assert_eq!(
            errors_on(&cfg, "sweep.omega"),
            vec![
                "grid is empty",
                "the dynamic bound needs at least 3 frequencies"
            ]
        );
        let cfg = load(BASE, &["sweep.omega=[1.0, 0.5, 2.0]".into()]).unwrap();
        assert_eq!(
            errors_on(&cfg, "sweep.omega"),
            vec!["grid must be strictly increasing"]
        );
    }

    #[test]
    fn every_finding_is_reported() {
        let cfg = load(
            BASE,
            &[
                "drive.n_ratio=3".into(),
                "bath.s=2".into(),
                "sweep.omega=[]".into(),
                "bath.alpha=0.9".into(),
            ],
        )
        .unwrap();
        let fields: Vec<String> = cfg.validate().into_iter().map(|f| f.field).collect();
        for want in ["drive.n_ratio", "bath.s", "sweep.omega", "bath.alpha"] {
            assert!(
                fields.iter().any(|f| f == want),
                "{want} missing from {fields:?}"
            );
        }
    }

    #[test]
    fn trajectory_requires_time_and_frequency() {
        let text = "mode = \"trajectory\"\n[bath]\nalpha = 0.1\n[drive]\neps2 = 0.5\n";
        let cfg = load(text, &[]).unwrap();
        assert_eq!(errors_on(&cfg, "drive.omega").len(), 1);
        assert_eq!(errors_on(&cfg, "time.t_final").len(), 1);
    }

    #[test]
    fn flattened_header_lists_fields() {
        let cfg = load(BASE, &[]).unwrap();
        let flat = cfg.flattened();
        assert!(flat.contains(&("bath.alpha".into(), "0.1".into())));
        assert!(flat.contains(&("mode".into(), "tur_sweep".into())));
        assert!(flat.iter().any(|(k, _)| k == "sweep.omega.count"));
    }

    #[test]
    fn state_count_at_full_scale() {
        let b = BathConfig {
            alpha: 0.1,
            s: 1.0,
            omega_c: 10.0,
            m_mod: 220,
            n_ph: 3,
            beta: None,
            delta: 1.0,
        };
        let n = state_count(&b);
        assert!(n > 3_500_000 && n < 3_700_000, "{n}");
    }
}
