//! `pvd`: demo runs, security experiments and numeric check suites.
//!
//! Exit status: 0 on success, 1 when a checked property fails, 2 on a usage
//! or configuration error.

mod config;
mod demo;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use pvd_core::harness::{
    abort_report, chain_report, evpke_report, hybrid_report, preimage_report, run_check,
    CheckConfig, Report,
};

use config::{
    AdversaryName, GameKind, ModeArg, OwfKind, PkeKind, RunConfig, SchemeKind, SuiteArg, WrapperArg,
};

#[derive(Parser)]
#[command(
    name = "pvd",
    version,
    about = "Publicly-verifiable deletion: demos, experiments and checks"
)]
struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Key generation, encryption, decryption, deletion and verification.
    Demo(RunArgs),
    /// Runs a game and prints a JSON report.
    Experiment {
        #[command(flatten)]
        run: RunArgs,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized numeric checks.
    Check {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Samples per sampler instance (measurement suite).
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
}

#[derive(Args, Default)]
struct RunArgs {
    /// JSON run configuration; the flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    scheme: Option<SchemeKind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_enum)]
    owf: Option<OwfKind>,
    #[arg(long)]
    owf_seed: Option<u64>,
    #[arg(long)]
    owsg_seed: Option<u64>,
    #[arg(long, value_enum)]
    pke: Option<PkeKind>,
    #[arg(long, value_enum)]
    wrapper: Option<WrapperArg>,
    #[arg(long)]
    zero_secret: bool,
    #[arg(long, value_enum)]
    adversary: Option<AdversaryName>,
    #[arg(long)]
    target: Option<u8>,
    #[arg(long)]
    workspace: Option<usize>,
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long)]
    circuit_seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    confidence: Option<f64>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, value_enum)]
    game: Option<GameKind>,
    #[arg(long)]
    hybrid: Option<u8>,
    #[arg(long)]
    b: Option<u8>,
}

macro_rules! override_fields {
    ($cfg:ident, $args:ident, $($f:ident),*) => {
        $(if let Some(v) = $args.$f { $cfg.$f = v; })*
    };
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let a = self;
        override_fields!(
            cfg,
            a,
            scheme,
            n,
            owf,
            owf_seed,
            owsg_seed,
            pke,
            wrapper,
            adversary,
            target,
            workspace,
            layers,
            circuit_seed,
            trials,
            seed,
            mode,
            confidence,
            t,
            game,
            hybrid,
            b
        );
        if a.m.is_some() {
            cfg.m = a.m;
        }
        cfg.zero_secret |= a.zero_secret;
        Ok(cfg)
    }
}

enum Failure {
    Property,
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn report_for(cfg: &RunConfig) -> Result<Report> {
    Ok(match cfg.game {
        GameKind::OtherPreimage => preimage_report(&cfg.preimage()?)?,
        GameKind::Evpke => evpke_report(&cfg.experiment()?)?,
        GameKind::Hybrid => hybrid_report(&cfg.experiment()?, cfg.hybrid)?,
        GameKind::Chain => chain_report(&cfg.experiment()?)?,
        GameKind::Abort => abort_report(&cfg.experiment()?)?,
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("starting the thread pool")?;
    }
    match cli.command {
        Command::Demo(args) => {
            let (transcript, ok) = demo::run(&args.resolve()?)?;
            print!("{transcript}");
            if !ok {
                return Err(Failure::Property);
            }
        }
        Command::Experiment { run, out } => {
            let report = report_for(&run.resolve()?)?;
            let json = report.to_json();
            match out {
                Some(path) => std::fs::write(&path, json + "\n")
                    .with_context(|| format!("writing {}", path.display()))?,
                None => println!("{json}"),
            }
            if !report.all_satisfied() {
                for i in report.inequalities.iter().filter(|i| !i.satisfied) {
                    eprintln!("violated: {} ({} > {} + {})", i.name, i.lhs, i.rhs, i.slack);
                }
                return Err(Failure::Property);
            }
        }
        Command::Check {
            suite,
            instances,
            seed,
            samples,
        } => {
            let summary = run_check(&CheckConfig {
                suite: suite.into(),
                instances,
                seed,
                samples,
            })
            .map_err(anyhow::Error::from)?;
            println!(
                "{:?}: {}/{} passed (worst {})",
                summary.suite, summary.passed, summary.instances, summary.worst
            );
            for f in &summary.failures {
                println!("  FAIL {f}");
            }
            if !summary.all_passed() {
                return Err(Failure::Property);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
