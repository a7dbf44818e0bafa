use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use unred::config::{Command, RunConfig};
use unred::runner::{self, EXIT_CONFIG};
use unred::Error;

#[derive(Parser)]
#[command(name = "unred", version, about = "Covariant un-reduction experiments")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides output.dir.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CheckArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the un-reduced boundary-value problem.
    Match(RunArgs),
    /// Integrate the hyperbolic curvature flow.
    Flow(RunArgs),
    /// Horizontal lift and holonomy on the Hopf bundle.
    Hopf(RunArgs),
    /// Sigma-model residuals and reconstruction.
    Sigma(RunArgs),
    /// Run the built-in invariant suite.
    Check(CheckArgs),
    /// Report every problem in a config file.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn init_threads() {
    if let Some(n) = std::env::var("UNRED_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn report_config_error(e: &Error) -> ExitCode {
    match e {
        Error::Config(msgs) => msgs.iter().for_each(|m| eprintln!("config: {m}")),
        other => eprintln!("config: {other}"),
    }
    ExitCode::from(EXIT_CONFIG as u8)
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    let (cmd, config, out) = match cli.command {
        Cmd::Match(a) => (Command::Match, Some(a.config), a.out),
        Cmd::Flow(a) => (Command::Flow, Some(a.config), a.out),
        Cmd::Hopf(a) => (Command::Hopf, Some(a.config), a.out),
        Cmd::Sigma(a) => (Command::Sigma, Some(a.config), a.out),
        Cmd::Check(a) => (Command::Check, a.config, a.out),
        Cmd::Validate { config } => {
            return match RunConfig::from_file(&config, None) {
                Ok(cfg) => {
                    println!("{}: valid `{}` config", config.display(), cfg.command.name());
                    ExitCode::SUCCESS
                }
                Err(e) => report_config_error(&e),
            };
        }
    };
    let cfg = match config {
        Some(path) => match RunConfig::from_file(&path, Some(cmd)) {
            Ok(c) => c,
            Err(e) => return report_config_error(&e),
        },
        None => RunConfig::default_for(cmd),
    };
    let outcome = runner::run(&cfg, out.as_deref());
    let m = &outcome.manifest;
    println!("{} {} -> {}", m.command, m.status, outcome.dir.display());
    if let Some(err) = &m.error {
        eprintln!("error: {err}");
    }
    if let Some(failures) = m.results.get("failures").and_then(|f| f.as_array()) {
        for f in failures {
            eprintln!("FAILED {}", f.as_str().unwrap_or_default());
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
