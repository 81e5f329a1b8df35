//! `wtw`: run, validate and size work-to-work converter experiments.
//!
//! Exit status is 0 on success, 1 when a run fails, and 2 for invalid
//! configurations or usage.

mod config;
mod presets;
mod run;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{has_errors, ConfigError, ExperimentConfig, Severity};

const WORKERS_ENV: &str = "WTW_WORKERS";

#[derive(Parser)]
#[command(
    name = "wtw",
    version,
    about = "Driven spin-boson work-to-work converter simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its CSV.
    Run {
        #[command(flatten)]
        source: Source,
        /// Output file; overrides `output` in the config. `-` writes to stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Full-scale bath (m_mod = 220, n_ph = 3).
        #[arg(long)]
        full: bool,
        /// Worker threads for sweeps and thermal samples.
        #[arg(long, env = WORKERS_ENV)]
        workers: Option<usize>,
    },
    /// Report every configuration error and warning.
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// List presets, or print one as TOML.
    Presets { name: Option<String> },
    /// Print the basis size and memory needed by a configuration.
    Estimate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        full: bool,
    },
}

#[derive(Args)]
struct Source {
    /// TOML configuration file.
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Use a built-in preset instead of a file.
    #[arg(short, long)]
    preset: Option<String>,
    /// Override a field by its dotted path, e.g. `--set bath.alpha=0.2`.
    #[arg(short = 's', long = "set", value_name = "PATH=VALUE")]
    overrides: Vec<String>,
}

impl Source {
    fn load(&self, full: bool) -> Result<ExperimentConfig, ConfigError> {
        let mut overrides = Vec::new();
        if full {
            overrides.extend(["bath.m_mod=220".to_string(), "bath.n_ph=3".to_string()]);
        }
        overrides.extend(self.overrides.iter().cloned());
        match (&self.config, &self.preset) {
            (_, Some(name)) => {
                let p = presets::find(name).ok_or_else(|| {
                    ConfigError::Parse(format!("unknown preset `{name}`; see `wtw presets`"))
                })?;
                config::load(p.toml, &overrides)
            }
            (Some(path), None) => config::read(path, &overrides),
            (None, None) => unreachable!("clap requires a config or a preset"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Presets { name } => presets_command(name.as_deref()),
        Command::Validate { source } => {
            let cfg = match source.load(false) {
                Ok(c) => c,
                Err(e) => return config_failure(e),
            };
            let findings = cfg.validate();
            for f in &findings {
                println!("{f}");
            }
            if has_errors(&findings) {
                ExitCode::from(2)
            } else {
                println!("ok");
                ExitCode::SUCCESS
            }
        }
        Command::Estimate { source, full } => {
            let cfg = match source.load(full) {
                Ok(c) => c,
                Err(e) => return config_failure(e),
            };
            print_estimate(&cfg, &mut io::stdout());
            ExitCode::SUCCESS
        }
        Command::Run {
            source,
            out,
            full,
            workers,
        } => {
            let cfg = match source.load(full) {
                Ok(c) => c,
                Err(e) => return config_failure(e),
            };
            if full {
                print_estimate(&cfg, &mut io::stderr());
            }
            run_command(cfg, out, workers)
        }
    }
}

fn config_failure(e: ConfigError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn presets_command(name: Option<&str>) -> ExitCode {
    match name {
        None => {
            for p in presets::PRESETS {
                println!("{:<12} {}", p.name, p.summary);
            }
            ExitCode::SUCCESS
        }
        Some(n) => match presets::find(n) {
            Some(p) => {
                print!("{}", p.toml);
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("error: unknown preset `{n}`");
                ExitCode::from(2)
            }
        },
    }
}

fn print_estimate(cfg: &ExperimentConfig, w: &mut dyn Write) {
    let krylov = cfg
        .sil
        .krylov_dim
        .unwrap_or(wtw_core::sil::SilConfig::default().krylov_dim);
    let states = config::state_count(&cfg.bath);
    let bytes = config::memory_estimate(&cfg.bath, krylov);
    let _ = writeln!(
        w,
        "m_mod = {}, n_ph = {}: {states} basis states",
        cfg.bath.m_mod, cfg.bath.n_ph
    );
    let _ = writeln!(
        w,
        "estimated memory per trajectory: {:.2} GiB",
        bytes as f64 / (1u64 << 30) as f64
    );
    if let (Some(t), Some(omega)) = (cfg.time.t_final, cfg.drive.omega) {
        let dt = cfg.sil.config(Some(&cfg.drive.spec(omega))).dt;
        let _ = writeln!(w, "steps: {}", (t / dt).ceil() as u64);
    }
}

fn run_command(cfg: ExperimentConfig, out: Option<PathBuf>, workers: Option<usize>) -> ExitCode {
    let findings = cfg.validate();
    for f in &findings {
        eprintln!("{f}");
    }
    if has_errors(&findings) {
        return ExitCode::from(2);
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        pool = pool.num_threads(n.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start workers: {e}");
            return ExitCode::from(1);
        }
    };
    let result = match pool.install(|| run::execute(&cfg)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let target = out.or_else(|| cfg.output.clone());
    let written = match target.as_deref() {
        None => result.write(io::stdout().lock()),
        Some(p) if p.as_os_str() == "-" => result.write(io::stdout().lock()),
        Some(p) => match File::create(p) {
            Ok(f) => result.write(BufWriter::new(f)),
            Err(e) => Err(e.into()),
        },
    };
    match written {
        Ok(()) => {
            if findings.iter().any(|f| f.severity == Severity::Warning) {
                eprintln!("completed with warnings");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: writing output: {e}");
            ExitCode::from(1)
        }
    }
}
