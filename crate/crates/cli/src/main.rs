use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use natpow::experiment::{mor_checks, run_experiment, CheckStatus, ExperimentName, ExperimentSpec};
use natpow::io::{format_real, load_matrix, load_system};
use natpow::linalg::general_eig;
use natpow::ltv::{ltv_simulate, LtvScenario};
use natpow::npm::NpmConfig;
use natpow::Error;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "natpow", version, about = "Natural power method experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment and write long-format CSV.
    Run {
        /// fig1, fig2, fig3, fig3-modified, fig4, fig5, mor-check or lemma-checks
        #[arg(long)]
        experiment: String,
        #[arg(long, value_delimiter = ',', default_value = "0,0.2,0.5,0.9", allow_hyphen_values = true)]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Steps for fig1-fig3; iteration cap for the check experiments.
        #[arg(long)]
        max_iter: Option<usize>,
        /// Closed-loop horizon for fig4 and fig5.
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the spectrum of a CSV matrix, sorted by modulus.
    Eig {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Reduce a system file (A, B, C blocks) and print the structural checks.
    Mor {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Simulate the rotating plant under the low-rank controller.
    Ltv {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 500)]
        horizon: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e.root() {
            Error::Config(_) | Error::Io(_) | Error::Parse { .. } | Error::Shape(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Check(e.to_string()),
        }
    }
}

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run { experiment, alpha, seed, max_iter, horizon, out } => {
            let name: ExperimentName = experiment.parse()?;
            let spec = ExperimentSpec { name, alphas: alpha, max_iter, horizon, seed };
            let output = run_experiment(&spec)?;
            write_out(&out, &output.to_csv())?;
            if output.failed_checks > 0 {
                return Err(Failure::Check(format!("{} check(s) failed", output.failed_checks)));
            }
        }
        Command::Eig { matrix } => {
            let m = load_matrix(&matrix)?;
            let spectrum = general_eig(&m)?;
            let mut text = String::from("index,re,im,modulus,tied_with_next\n");
            for (i, z) in spectrum.eigenvalues().iter().enumerate() {
                let tied = spectrum.ties().get(i).copied().unwrap_or(false);
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    i + 1,
                    format_real(z.re),
                    format_real(z.im),
                    format_real(z.norm()),
                    u8::from(tied)
                ));
            }
            print(&text)?;
        }
        Command::Mor { system, r, seed, max_iter } => {
            let sys = load_system(&system)?;
            let cfg = NpmConfig { max_iter, ..Default::default() };
            let checks = mor_checks(&sys, r, &cfg, seed)?;
            let mut text = String::from("check,value,status\n");
            for c in &checks {
                text.push_str(&format!("{},{},{}\n", c.name, format_real(c.value), c.status.as_str()));
            }
            print(&text)?;
            let failed = checks.iter().filter(|c| c.status == CheckStatus::Fail).count();
            if failed > 0 {
                return Err(Failure::Check(format!("{failed} check(s) failed")));
            }
        }
        Command::Ltv { alpha, horizon, seed, out } => {
            let scenario = LtvScenario { horizon, seed, ..LtvScenario::with_alpha(alpha) };
            let log = ltv_simulate(&scenario)?;
            write_out(&out, &log.to_csv())?;
        }
    }
    Ok(())
}

fn print(text: &str) -> Result<(), Failure> {
    io::stdout().lock().write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
    }
}
