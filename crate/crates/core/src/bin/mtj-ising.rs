use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mtj_ising::commands::{
    cmd_device_calibrate, cmd_device_sweep, cmd_oracle, cmd_solve, cmd_verify, BackendKind, DeviceCalibrateArgs,
    DeviceSweepArgs, ProblemKind, ProblemSource, SolveArgs,
};
use mtj_ising::device::CurrentSweep;
use mtj_ising::ising::OrderPolicy;
use mtj_ising::problems::DEFAULT_ORACLE_LIMIT;

/// Spin-Hall MTJ Ising machine simulator.
///
/// Default `device.toml` and `switch_curve.csv` are looked up in the
/// directory named by MTJ_ISING_PARAMS_DIR.
#[derive(Parser)]
#[command(name = "mtj-ising", version, about)]
struct Cli {
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Device characterization.
    #[command(subcommand)]
    Device(DeviceCommand),
    /// Anneal a problem instance.
    Solve(SolveCli),
    /// Check a solver summary against its problem.
    Verify(VerifyCli),
    /// Exhaustive ground state of a small instance.
    Oracle(OracleCli),
}

#[derive(Subcommand)]
enum DeviceCommand {
    /// Monte-Carlo switching probability versus write current.
    Sweep(SweepCli),
    /// Tune the torque scale so a target current switches with a target probability.
    Calibrate(CalibrateCli),
}

#[derive(Args)]
struct SweepCli {
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long, default_value_t = 40.0)]
    min_ua: f64,
    #[arg(long, default_value_t = 160.0)]
    max_ua: f64,
    #[arg(long, default_value_t = 5.0)]
    step_ua: f64,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Also record one write event at this current (uA) as trajectory.csv.
    #[arg(long)]
    trajectory_ua: Option<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct CalibrateCli {
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long, default_value_t = 90.0)]
    target_ua: f64,
    #[arg(long, default_value_t = 0.5)]
    target_p: f64,
    #[arg(long, default_value_t = 3.0)]
    scale_lo: f64,
    #[arg(long, default_value_t = 4.0)]
    scale_hi: f64,
    #[arg(long, default_value_t = 8)]
    iterations: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Maxcut,
    Coloring,
    Digits,
}

impl From<KindArg> for ProblemKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Maxcut => Self::Maxcut,
            KindArg::Coloring => Self::Coloring,
            KindArg::Digits => Self::Digits,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Curve,
    Llg,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Sequential,
    Random,
}

#[derive(Args)]
struct ProblemCli {
    /// Problem kind.
    kind: KindArg,
    /// Edge list (maxcut), JSON spec (coloring) or PGM images (digits).
    files: Vec<PathBuf>,
    /// Built-in coloring instance: triangle-k3, square-k2, wheel5-k3, triangle-k2.
    #[arg(long)]
    demo: Option<String>,
    /// Built-in digit glyphs (0-4) to tile when no PGM is given.
    #[arg(long, value_delimiter = ',')]
    digits: Vec<usize>,
    /// Tiles per row for digit images (default: one row).
    #[arg(long, default_value_t = 0)]
    columns: usize,
}

impl ProblemCli {
    fn source(&self) -> ProblemSource {
        ProblemSource {
            files: self.files.clone(),
            demo: self.demo.clone(),
            digits: self.digits.clone(),
            columns: self.columns,
        }
    }
}

#[derive(Args)]
struct SolveCli {
    #[command(flatten)]
    problem: ProblemCli,
    #[arg(long, value_enum, default_value = "curve")]
    backend: BackendArg,
    #[arg(long)]
    params: Option<PathBuf>,
    /// Switching curve CSV for the curve backend.
    #[arg(long)]
    curve: Option<PathBuf>,
    /// `calibrated` (default), `nominal`, or `start:min_uA:max_uA,...`.
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long, default_value_t = 500)]
    sweeps: usize,
    #[arg(long, value_enum, default_value = "sequential")]
    order: OrderArg,
    #[arg(long)]
    seed: Option<u64>,
    /// Stop once H reaches this value.
    #[arg(long, allow_negative_numbers = true)]
    target_energy: Option<i64>,
    /// Enumerate the exact ground energy and stop on reaching it.
    #[arg(long)]
    oracle: bool,
    /// Exit non-zero when the run ends unsolved.
    #[arg(long)]
    strict: bool,
    /// Snapshot interval in sweeps (0: initial and final only).
    #[arg(long, default_value_t = 100)]
    snapshot_every: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyCli {
    #[command(flatten)]
    problem: ProblemCli,
    /// `summary.json` written by `solve`.
    #[arg(long)]
    solution: PathBuf,
    /// Also compare against the exhaustive minimum.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct OracleCli {
    #[command(flatten)]
    problem: ProblemCli,
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    limit: usize,
}

fn print_json<T: Serialize>(value: &T) {
    match serde_json::to_string_pretty(value) {
        Ok(s) => println!("{s}"),
        Err(e) => eprintln!("error: {e}"),
    }
}

fn seed_note(seed: u64, generated: bool) {
    if generated {
        eprintln!("note: no --seed given; using generated seed {seed}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> mtj_ising::Result<ExitCode> {
    let threads = cli.threads;
    match cli.command {
        Command::Device(DeviceCommand::Sweep(a)) => {
            let report = cmd_device_sweep(&DeviceSweepArgs {
                params: a.params,
                sweep: CurrentSweep {
                    min_ua: a.min_ua,
                    max_ua: a.max_ua,
                    step_ua: a.step_ua,
                },
                trials: a.trials,
                seed: a.seed,
                threads,
                trajectory_ua: a.trajectory_ua,
                out: a.out,
            })?;
            seed_note(report.seed, report.seed_generated);
            match report.crossing_50_ua {
                Some(x) => println!("50% crossing: {x:.2} uA"),
                None => println!("50% crossing: not reached in the swept range"),
            }
            if report.low_statistics {
                println!("warning: fewer than 100 trials per point; intervals are wide");
            }
            println!("wrote {}", report.csv.display());
        }
        Command::Device(DeviceCommand::Calibrate(a)) => {
            let report = cmd_device_calibrate(&DeviceCalibrateArgs {
                params: a.params,
                target_ua: a.target_ua,
                target_p: a.target_p,
                bracket: (a.scale_lo, a.scale_hi),
                iterations: a.iterations,
                trials: a.trials,
                seed: a.seed,
                threads,
                out: a.out,
            })?;
            seed_note(report.seed, report.seed_generated);
            println!(
                "torque scale {:.6}: p({} uA) = {:.4}",
                report.calibration.torque_scale, report.target_ua, report.calibration.estimate.p_hat
            );
            println!("wrote {}", report.params_out.display());
        }
        Command::Solve(a) => {
            let outcome = cmd_solve(&SolveArgs {
                kind: a.problem.kind.into(),
                source: a.problem.source(),
                backend: match a.backend {
                    BackendArg::Curve => BackendKind::Curve,
                    BackendArg::Llg => BackendKind::Llg,
                },
                params: a.params,
                curve: a.curve,
                schedule: a.schedule,
                sweeps: a.sweeps,
                order: match a.order {
                    OrderArg::Sequential => OrderPolicy::Sequential,
                    OrderArg::Random => OrderPolicy::RandomPermutation,
                },
                seed: a.seed,
                target_energy: a.target_energy,
                oracle: a.oracle,
                strict: a.strict,
                snapshot_every: a.snapshot_every,
                threads,
                out: a.out.clone(),
            })?;
            let s = &outcome.summary;
            seed_note(s.seed, s.seed_generated);
            println!(
                "H = {} after {} sweeps ({} updates, {:.3} pJ); solved: {}",
                s.energy, s.sweeps, s.spin_updates, s.energy_pj.total_pj, s.solved
            );
            println!("wrote {}", a.out.join("summary.json").display());
            if a.strict && !s.solved {
                eprintln!("strict: run ended unsolved");
                return Ok(ExitCode::from(2));
            }
        }
        Command::Verify(a) => {
            let report = cmd_verify(a.problem.kind.into(), &a.problem.source(), &a.solution, a.oracle, threads)?;
            print_json(&report);
            if !report.verified {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Oracle(a) => {
            let report = cmd_oracle(a.problem.kind.into(), &a.problem.source(), a.limit, threads)?;
            print_json(&report);
        }
    }
    Ok(ExitCode::SUCCESS)
}
