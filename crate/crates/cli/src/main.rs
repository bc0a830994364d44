use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use capbound::capacity::DEFAULT_GRID_POINTS;
use capbound::norms::{DEFAULT_SAMPLES, SAMPLING_SEED};
use capbound::sdp::set_default_options;
use capbound_cli::commands::{self, thread_cap, SweepArgs};
use capbound_cli::config::{Command, Format, GridSpec, RunConfig, Tolerances};
use capbound_cli::selftest::{selftest, Settings};
use capbound_cli::{CliError, CliResult, Exit};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "capbound", version, about = "Entropy continuity and quantum capacity bounds")]
struct Cli {
    #[command(flatten)]
    tolerances: Tolerances,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Channel {
    Depolarizing,
}

#[derive(Subcommand)]
enum Cmd {
    /// Two-distance entropy bound with Sason's and Csiszár's for comparison.
    BoundShannon {
        #[arg(long)]
        d: usize,
        /// Total variation distance.
        #[arg(long, allow_negative_numbers = true)]
        eps: f64,
        /// Local distance; defaults to `eps`.
        #[arg(long, allow_negative_numbers = true)]
        nu: Option<f64>,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
    },
    /// Norm bundle of `E^c − Λ∘E` for the SDP-fitted degrading map.
    Norms {
        #[arg(long, value_enum, default_value = "depolarizing")]
        channel: Channel,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = SAMPLING_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: TextOrJson,
    },
    /// Capacity bounds over a grid of depolarizing parameters.
    DepolSweep {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        p_min: f64,
        #[arg(long, default_value_t = 0.025, allow_negative_numbers = true)]
        p_max: f64,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        points: usize,
        #[arg(long, default_value = "capbound-out")]
        out: PathBuf,
        #[arg(long, default_value_t = SAMPLING_SEED)]
        seed: u64,
        /// Sampled norm lower bounds per point; 0 skips them.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Output formats (repeatable); all three by default.
        #[arg(long, value_enum)]
        format: Vec<Format>,
        /// Skip `S(E_p, Λ_p)`.
        #[arg(long)]
        no_s_phi_lambda: bool,
        /// Worker threads; overrides CAPBOUND_THREADS.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Runs the invariant suite and prints a pass/fail table.
    Selftest {
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 0x5e1f_7e57)]
        seed: u64,
    },
}

fn run(cli: Cli) -> CliResult<Exit> {
    let opts = cli.tolerances.solver_options()?;
    set_default_options(opts).map_err(|e| CliError::BadInput(e.to_string()))?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Cmd::BoundShannon { d, eps, nu, format } => {
            commands::bound_shannon(d, eps, nu, format == TextOrJson::Json, &mut out)?;
        }
        Cmd::Norms { channel: Channel::Depolarizing, p, samples, seed, format } => {
            commands::norms(p, samples, seed, format == TextOrJson::Json, &mut out)?;
        }
        Cmd::DepolSweep { p_min, p_max, points, out: dir, seed, samples, format, no_s_phi_lambda, threads } => {
            let formats = if format.is_empty() { vec![Format::Csv, Format::Json, Format::Svg] } else { format };
            let config = RunConfig {
                command: Command::DepolSweep,
                grid: GridSpec { p_min, p_max, n_points: points },
                seed,
                tolerances: opts,
                output_dir: dir,
                formats,
            };
            let args = SweepArgs { config, s_phi_lambda: !no_s_phi_lambda, samples, threads: thread_cap(threads)? };
            let threads = args.threads.unwrap_or(0);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| CliError::BadInput(e.to_string()))?;
            let report = pool.install(|| commands::depol_sweep(&args, &mut io::stderr()))?;
            let failed = report.rows.iter().filter(|r| r.bound.error.is_some()).count();
            writeln!(
                out,
                "{} points ({failed} failed), envelope resolution {:e}, written to {}",
                report.rows.len(),
                report.envelope_resolution,
                args.config.output_dir.display()
            )?;
        }
        Cmd::Selftest { quick, seed } => {
            if !selftest(&Settings { quick, seed }, &mut out)? {
                return Ok(Exit::SelftestFailed);
            }
        }
    }
    Ok(Exit::Ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Exit::BadInput.into() } else { Exit::Ok.into() };
        }
    };
    match run(cli) {
        Ok(code) => code.into(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit().into()
        }
    }
}
