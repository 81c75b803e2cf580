mod output;
mod selfcheck;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use droplet_core::{CenterLaw, RunConfig, SchemeKind, Termination};

use crate::output::{run_and_write, write_table};

/// Exit status for configuration and argument errors.
const EXIT_CONFIG: u8 = 2;
/// Exit status for a run that stopped on an error (including a refused CFL violation).
const EXIT_SIMULATION: u8 = 3;
/// Exit status for a run that stopped because the radius became non-positive.
const EXIT_NEGATIVE_RADIUS: u8 = 4;

#[derive(Parser)]
#[command(name = "droplet", version, about = "Sedimenting droplet surface evolution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation and write profiles, diagnostics, sections and a manifest.
    Run(RunArgs),
    /// Run a simulation and print the diagnostics at the table sample times.
    Tables(RunArgs),
    /// Check the quadrature and the exact solution at a given resolution.
    Selfcheck(SelfcheckArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// upwind, fv or lf.
    #[arg(long)]
    scheme: Option<String>,
    /// flow, scaled:<lambda> or exact.
    #[arg(long = "center-law")]
    center_law: Option<String>,
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long = "L")]
    l: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "T")]
    t_final: Option<f64>,
    #[arg(long = "output-dir")]
    output_dir: Option<PathBuf>,
    #[arg(long = "output-every")]
    output_every: Option<usize>,
    /// Assemble the operators on all available threads.
    #[arg(long)]
    parallel: bool,
    /// Keep stepping when the Courant number reaches 1.
    #[arg(long = "allow-cfl-violation")]
    allow_cfl_violation: bool,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)
                .with_context(|| format!("loading {}", path.display()))?,
            None => RunConfig::default(),
        };
        if let Some(s) = &self.scheme {
            cfg.scheme = s.parse::<SchemeKind>()?;
        }
        if let Some(s) = &self.center_law {
            cfg.center_law = s.parse::<CenterLaw>()?;
        }
        if let Some(v) = self.m {
            cfg.m = v;
        }
        if let Some(v) = self.l {
            cfg.l = v;
        }
        if let Some(v) = self.dt {
            cfg.dt = v;
        }
        if let Some(v) = self.t_final {
            cfg.t_final = v;
        }
        if let Some(v) = &self.output_dir {
            cfg.output_dir = v.clone();
        }
        if let Some(v) = self.output_every {
            cfg.output_every = v;
        }
        cfg.parallel |= self.parallel;
        cfg.allow_cfl_violation |= self.allow_cfl_violation;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SelfcheckArgs {
    #[arg(long = "M", default_value_t = 100)]
    m: usize,
    #[arg(long = "L", default_value_t = 200)]
    l: usize,
}

fn exit_code(termination: Termination) -> ExitCode {
    match termination {
        Termination::Completed => ExitCode::SUCCESS,
        Termination::NegativeRadius { .. } => ExitCode::from(EXIT_NEGATIVE_RADIUS),
        Termination::CflViolation { .. } => ExitCode::from(EXIT_SIMULATION),
    }
}

fn report(err: &anyhow::Error) {
    eprintln!("error: {err:#}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = match &cli.command {
        Command::Selfcheck(a) => {
            return match selfcheck::run(a.m, a.l) {
                Ok(true) => ExitCode::SUCCESS,
                Ok(false) => ExitCode::FAILURE,
                Err(e) => {
                    report(&e);
                    ExitCode::from(EXIT_CONFIG)
                }
            };
        }
        Command::Run(a) | Command::Tables(a) => a,
    };
    let cfg = match args.resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            report(&e);
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let result = match cli.command {
        Command::Run(_) => run_and_write(&cfg).map(|m| {
            println!("{}", m.summary());
            m.termination_kind()
        }),
        Command::Tables(_) => write_table(&cfg, &mut std::io::stdout().lock()),
        Command::Selfcheck(_) => unreachable!(),
    };
    match result {
        Ok(termination) => exit_code(termination),
        Err(e) => {
            report(&e);
            ExitCode::from(EXIT_SIMULATION)
        }
    }
}
