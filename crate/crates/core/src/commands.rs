//! File-based front end behind the `mtj-ising` binary. Each command reads
//! its inputs, writes plain CSV/JSON/PGM artifacts into an output
//! directory, and returns a report that the binary prints.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::device::{
    calibrate_switch_curve, calibrate_torque_scale, CurrentSweep, DeviceParams, EnergyLedger, SwitchCurve,
    TorqueCalibration,
};
use crate::error::{Error, Result};
use crate::exec::{with_threads, Execution};
use crate::ising::{
    hamiltonian, run, AnnealSchedule, CouplingGraph, CurveBackend, Initial, LlgBackend, OrderPolicy, Periphery,
    RunConfig, RunStats, SpinArray, SwitchBackend,
};
use crate::problems::{
    brute_force, coloring_decode, coloring_encode, conflicting_edges, cut_value, demo_instances, digit_glyph,
    digit_instance, maxcut_encode, Bitmap, ColoringInstance, ColoringSpec, Decoded, DigitInstance, WeightedGraph,
    DEFAULT_COLORING_LIMIT, DEFAULT_ORACLE_LIMIT,
};
use crate::magnetics::{
    simulate_write_event, thermalize, trajectory_csv, MagnetizationState, WritePulse, BURN_IN,
};
use crate::rng::{stage_seed, RngStream};

/// Directory searched for `device.toml` and `switch_curve.csv` when no
/// explicit path is given.
pub const PARAMS_DIR_ENV: &str = "MTJ_ISING_PARAMS_DIR";
pub const PARAMS_FILE: &str = "device.toml";
pub const CURVE_FILE: &str = "switch_curve.csv";

const BUNDLED_CURVE_CSV: &str = include_str!("../data/switch_curve.csv");
const BUNDLED_CURVE_JSON: &str = include_str!("../data/switch_curve.json");

/// First 8 bytes of SHA-256, hex encoded.
pub fn short_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().take(8).map(|b| format!("{b:02x}")).collect()
}

fn params_dir() -> Option<PathBuf> {
    std::env::var_os(PARAMS_DIR_ENV).map(PathBuf::from)
}

/// Explicit file, else `$MTJ_ISING_PARAMS_DIR/device.toml`, else the
/// built-in defaults.
pub fn resolve_params(path: Option<&Path>) -> Result<(DeviceParams, String)> {
    if let Some(p) = path {
        return Ok((DeviceParams::load(p)?, p.display().to_string()));
    }
    if let Some(p) = params_dir().map(|d| d.join(PARAMS_FILE)).filter(|p| p.exists()) {
        return Ok((DeviceParams::load(&p)?, p.display().to_string()));
    }
    Ok((DeviceParams::default(), "built-in".into()))
}

/// Explicit file, else `$MTJ_ISING_PARAMS_DIR/switch_curve.csv`, else the
/// curve shipped with the crate.
pub fn resolve_curve(path: Option<&Path>) -> Result<(SwitchCurve, String)> {
    if let Some(p) = path {
        return Ok((SwitchCurve::load(p)?, p.display().to_string()));
    }
    if let Some(p) = params_dir().map(|d| d.join(CURVE_FILE)).filter(|p| p.exists()) {
        return Ok((SwitchCurve::load(&p)?, p.display().to_string()));
    }
    Ok((bundled_curve()?, "built-in".into()))
}

pub fn bundled_curve() -> Result<SwitchCurve> {
    SwitchCurve::from_csv(BUNDLED_CURVE_CSV, "built-in curve", serde_json::from_str(BUNDLED_CURVE_JSON)?)
}

/// The given seed, or a fresh one from OS entropy. The flag is true when
/// the seed was generated.
pub fn resolve_seed(seed: Option<u64>) -> (u64, bool) {
    match seed {
        Some(s) => (s, false),
        None => (rand::rng().random(), true),
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_file(path, serde_json::to_string_pretty(value)? + "\n")
}

#[derive(Clone, Debug)]
pub struct DeviceSweepArgs {
    pub params: Option<PathBuf>,
    pub sweep: CurrentSweep,
    pub trials: usize,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    /// Also record one write event at this current (µA) to `trajectory.csv`.
    pub trajectory_ua: Option<f64>,
    pub out: PathBuf,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeviceSweepReport {
    pub csv: PathBuf,
    pub seed: u64,
    pub seed_generated: bool,
    pub params_digest: String,
    pub crossing_50_ua: Option<f64>,
    pub low_statistics: bool,
}

pub fn cmd_device_sweep(args: &DeviceSweepArgs) -> Result<DeviceSweepReport> {
    let (params, _) = resolve_params(args.params.as_deref())?;
    let (seed, seed_generated) = resolve_seed(args.seed);
    let spin = params.macrospin()?;
    let timings = params.timings();
    let mut curve = with_threads(args.threads, |exec| {
        calibrate_switch_curve(
            &spin,
            &args.sweep,
            args.trials,
            timings.t_write,
            timings.t_relax,
            &params.integrator(),
            stage_seed(seed, "device-trials"),
            exec,
        )
    })?;
    curve.metadata.seed = seed;
    curve.metadata.params_digest = params.digest();
    create_dir(&args.out)?;
    let csv = args.out.join(CURVE_FILE);
    curve.save(&csv)?;
    if let Some(ua) = args.trajectory_ua {
        let mut rng = RngStream::new(stage_seed(seed, "trajectory"), 0).rng();
        let easy = spin.anisotropy.easy();
        let start = thermalize(&spin, MagnetizationState::new(easy), BURN_IN, &params.integrator(), &mut rng)?;
        let pulse = WritePulse::new(-ua.abs() * 1e-6, timings.t_write, timings.t_relax)?;
        let event = simulate_write_event(&spin, start, &pulse, &params.integrator(), &mut rng, Some(10))?;
        let points = event.trajectory.unwrap_or_default();
        write_file(&args.out.join("trajectory.csv"), trajectory_csv(&points))?;
    }
    Ok(DeviceSweepReport {
        csv,
        seed,
        seed_generated,
        params_digest: curve.metadata.params_digest.clone(),
        crossing_50_ua: curve.metadata.crossing_50_ua,
        low_statistics: curve.metadata.low_statistics,
    })
}

#[derive(Clone, Debug)]
pub struct DeviceCalibrateArgs {
    pub params: Option<PathBuf>,
    pub target_ua: f64,
    pub target_p: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub trials: usize,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: PathBuf,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeviceCalibrateReport {
    pub seed: u64,
    pub seed_generated: bool,
    pub params_digest: String,
    pub target_ua: f64,
    pub target_p: f64,
    pub trials: usize,
    pub calibration: TorqueCalibration,
    /// Parameter file with the calibrated torque scale.
    pub params_out: PathBuf,
}

pub fn cmd_device_calibrate(args: &DeviceCalibrateArgs) -> Result<DeviceCalibrateReport> {
    let (params, _) = resolve_params(args.params.as_deref())?;
    let (seed, seed_generated) = resolve_seed(args.seed);
    let spin = params.macrospin()?;
    let timings = params.timings();
    let calibration = with_threads(args.threads, |exec| {
        calibrate_torque_scale(
            &spin,
            args.target_ua * 1e-6,
            args.target_p,
            args.bracket,
            args.iterations,
            args.trials,
            timings.t_write,
            timings.t_relax,
            &params.integrator(),
            stage_seed(seed, "device-calibrate"),
            exec,
        )
    })?;
    create_dir(&args.out)?;
    let tuned = DeviceParams {
        torque_scale: calibration.torque_scale,
        ..params.clone()
    };
    let params_out = args.out.join(PARAMS_FILE);
    write_file(&params_out, tuned.to_toml())?;
    let report = DeviceCalibrateReport {
        seed,
        seed_generated,
        params_digest: params.digest(),
        target_ua: args.target_ua,
        target_p: args.target_p,
        trials: args.trials,
        calibration,
        params_out,
    };
    write_json(&args.out.join("calibration.json"), &report)?;
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Maxcut,
    Coloring,
    Digits,
}

/// Where the problem instance comes from.
#[derive(Clone, Debug, Default)]
pub struct ProblemSource {
    /// Edge list (maxcut), JSON spec (coloring) or PGM images (digits).
    pub files: Vec<PathBuf>,
    /// Named coloring demo instance.
    pub demo: Option<String>,
    /// Built-in digit glyphs, used when no PGM files are given.
    pub digits: Vec<usize>,
    /// Tiles per row for digit images.
    pub columns: usize,
}

#[derive(Clone, Debug)]
pub enum Problem {
    Maxcut(WeightedGraph),
    Coloring(ColoringSpec, ColoringInstance),
    Digits(DigitInstance),
}

impl Problem {
    pub fn load(kind: ProblemKind, src: &ProblemSource) -> Result<Self> {
        match kind {
            ProblemKind::Maxcut => match src.files.as_slice() {
                [f] => Ok(Self::Maxcut(WeightedGraph::load(f)?)),
                _ => Err(Error::invalid("problem", "maxcut takes exactly one edge-list file")),
            },
            ProblemKind::Coloring => {
                let spec = match (src.files.as_slice(), &src.demo) {
                    ([f], None) => ColoringSpec::load(f)?,
                    ([], Some(name)) => demo_instances()
                        .into_iter()
                        .find(|(n, _)| n == name)
                        .map(|(_, s)| s)
                        .ok_or_else(|| {
                            let names: Vec<_> = demo_instances().iter().map(|d| d.0).collect();
                            Error::invalid("demo", format!("unknown `{name}`; choose one of {}", names.join(", ")))
                        })?,
                    _ => return Err(Error::invalid("problem", "coloring takes one JSON file or --demo")),
                };
                let inst = coloring_encode(&spec, DEFAULT_COLORING_LIMIT)?;
                Ok(Self::Coloring(spec, inst))
            }
            ProblemKind::Digits => {
                let tiles = if src.files.is_empty() {
                    let digits = if src.digits.is_empty() { vec![0] } else { src.digits.clone() };
                    digits.iter().map(|&d| digit_glyph(d)).collect::<Result<Vec<_>>>()?
                } else {
                    src.files.iter().map(|f| Bitmap::load_pgm(f)).collect::<Result<Vec<_>>>()?
                };
                let cols = if src.columns == 0 { tiles.len() } else { src.columns };
                Ok(Self::Digits(digit_instance(&tiles, cols)?))
            }
        }
    }

    pub fn kind(&self) -> ProblemKind {
        match self {
            Self::Maxcut(_) => ProblemKind::Maxcut,
            Self::Coloring(..) => ProblemKind::Coloring,
            Self::Digits(_) => ProblemKind::Digits,
        }
    }

    pub fn graph(&self) -> CouplingGraph {
        match self {
            Self::Maxcut(g) => maxcut_encode(g),
            Self::Coloring(_, inst) => inst.graph.clone(),
            Self::Digits(d) => d.graph.clone(),
        }
    }

    /// Problem-level reading of a spin state.
    pub fn assess(&self, s: &SpinArray) -> Result<Assessment> {
        Ok(match self {
            Self::Maxcut(g) => Assessment::Maxcut {
                cut: cut_value(s, g)?,
                total_weight: g.total_weight(),
            },
            Self::Coloring(spec, inst) => {
                let penalty = inst.penalty(s)?;
                let decoded = coloring_decode(s, spec)?;
                let conflicts = match &decoded {
                    Decoded::Assignment(c) => conflicting_edges(spec, c),
                    Decoded::Invalid(_) => Vec::new(),
                };
                let valid = matches!(decoded, Decoded::Assignment(_)) && conflicts.is_empty();
                Assessment::Coloring {
                    penalty,
                    valid,
                    decoded,
                    conflicts,
                }
            }
            Self::Digits(d) => Assessment::Digits {
                agreement: s.agreement_mod_flip(&d.target),
                width: d.image.width(),
                height: d.image.height(),
            },
        })
    }

    /// Ising energy that counts as solved, when known without search.
    pub fn natural_target(&self) -> Option<i64> {
        match self {
            Self::Coloring(_, inst) => Some(inst.zero_penalty_energy()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Assessment {
    Maxcut {
        cut: i64,
        total_weight: i64,
    },
    Coloring {
        penalty: i64,
        valid: bool,
        decoded: Decoded,
        conflicts: Vec<(usize, usize)>,
    },
    Digits {
        /// Pixel agreement with the target, best over a global flip.
        agreement: f64,
        width: usize,
        height: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Curve,
    Llg,
}

#[derive(Clone, Debug)]
pub struct SolveArgs {
    pub kind: ProblemKind,
    pub source: ProblemSource,
    pub backend: BackendKind,
    pub params: Option<PathBuf>,
    pub curve: Option<PathBuf>,
    /// See [`parse_schedule`].
    pub schedule: Option<String>,
    pub sweeps: usize,
    pub order: OrderPolicy,
    pub seed: Option<u64>,
    pub target_energy: Option<i64>,
    /// Also compute the exact ground energy and stop on reaching it.
    pub oracle: bool,
    /// Report failure when the run ends unsolved.
    pub strict: bool,
    pub snapshot_every: usize,
    pub threads: Option<usize>,
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub ground_energy: i64,
    pub ground_state_count: u64,
    pub reached: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergySummary {
    pub write_pj: f64,
    pub read_pj: f64,
    pub relax_pj: f64,
    pub overhead_pj: f64,
    pub total_pj: f64,
    pub per_update_pj: f64,
}

impl From<&EnergyLedger> for EnergySummary {
    fn from(l: &EnergyLedger) -> Self {
        Self {
            write_pj: l.write_j * 1e12,
            read_pj: l.read_j * 1e12,
            relax_pj: l.relax_j * 1e12,
            overhead_pj: l.overhead_j * 1e12,
            total_pj: l.total_pj(),
            per_update_pj: if l.updates == 0 { 0.0 } else { l.total_pj() / l.updates as f64 },
        }
    }
}

/// Contents of `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    pub kind: ProblemKind,
    pub spins: usize,
    pub seed: u64,
    pub seed_generated: bool,
    pub params_digest: String,
    /// Digest of the switching curve used for the lookup backend and for
    /// deriving the schedule.
    pub curve_digest: String,
    pub backend: BackendKind,
    pub schedule: String,
    pub order: OrderPolicy,
    pub max_sweeps: usize,
    pub sweeps: usize,
    pub spin_updates: u64,
    pub target_energy: Option<i64>,
    pub converged_at: Option<usize>,
    pub solved: bool,
    pub initial_energy: i64,
    pub final_energy: i64,
    /// Lowest energy seen after any sweep; the reported solution.
    pub energy: i64,
    pub solution: SpinArray,
    pub final_spins: SpinArray,
    pub assessment: Assessment,
    pub oracle: Option<OracleSummary>,
    pub energy_pj: EnergySummary,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub summary: SolveSummary,
    pub stats: RunStats,
}

/// `None` or `calibrated`: probability-matched phase 1 from `curve`;
/// `nominal`: 60–120 µA then 40–160 µA; anything else is parsed as
/// `start:min_uA:max_uA,...`.
pub fn parse_schedule(text: Option<&str>, curve: &SwitchCurve) -> Result<AnnealSchedule> {
    match text {
        None | Some("calibrated") => AnnealSchedule::calibrated(curve),
        Some("nominal") => Ok(AnnealSchedule::nominal()),
        Some(s) => s.parse(),
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<SolveOutcome> {
    let problem = Problem::load(args.kind, &args.source)?;
    let graph = problem.graph();
    let (params, _) = resolve_params(args.params.as_deref())?;
    let (seed, seed_generated) = resolve_seed(args.seed);
    let periphery = Periphery::from_params(&params)?;
    let (curve, _) = resolve_curve(args.curve.as_deref())?;
    let curve_digest = short_digest(curve.to_csv().as_bytes());
    let schedule = parse_schedule(args.schedule.as_deref(), &curve)?;

    let backend: Box<dyn SwitchBackend> = match args.backend {
        BackendKind::Curve => {
            schedule.fits(&curve)?;
            Box::new(CurveBackend { curve })
        }
        BackendKind::Llg => Box::new(LlgBackend::from_params(&params)?),
    };

    let oracle = if args.oracle {
        let gs = with_threads(args.threads, |exec| brute_force(&graph, DEFAULT_ORACLE_LIMIT, exec))?;
        Some(gs)
    } else {
        None
    };
    let target_energy = args
        .target_energy
        .or(oracle.as_ref().map(|g| g.energy))
        .or(problem.natural_target());

    let config = RunConfig {
        max_sweeps: args.sweeps,
        target_energy,
        order: args.order,
        snapshot_every: Some(args.snapshot_every).filter(|&k| k > 0),
    };
    let stats = run(
        &graph,
        &Initial::Random,
        backend.as_ref(),
        &schedule,
        &config,
        &periphery,
        stage_seed(seed, "solve"),
    )?;

    let assessment = problem.assess(&stats.best_spins)?;
    let solved = match (&assessment, target_energy) {
        (Assessment::Coloring { valid, .. }, _) => *valid,
        (_, Some(t)) => stats.best_energy <= t,
        (Assessment::Digits { agreement, .. }, None) => *agreement == 1.0,
        (Assessment::Maxcut { .. }, None) => true,
    };
    let summary = SolveSummary {
        kind: args.kind,
        spins: graph.len(),
        seed,
        seed_generated,
        params_digest: params.digest(),
        curve_digest,
        backend: args.backend,
        schedule: schedule.to_string(),
        order: args.order,
        max_sweeps: args.sweeps,
        sweeps: stats.sweeps,
        spin_updates: stats.updates,
        target_energy,
        converged_at: stats.converged_at,
        solved,
        initial_energy: stats.energy_trace[0],
        final_energy: stats.final_energy(),
        energy: stats.best_energy,
        solution: stats.best_spins.clone(),
        final_spins: stats.final_spins.clone(),
        assessment,
        oracle: oracle.map(|g| OracleSummary {
            ground_energy: g.energy,
            ground_state_count: g.count,
            reached: stats.best_energy == g.energy,
        }),
        energy_pj: EnergySummary::from(&stats.ledger),
    };
    write_solve_outputs(&args.out, &problem, &summary, &stats)?;
    Ok(SolveOutcome { summary, stats })
}

fn provenance(summary: &SolveSummary) -> String {
    format!(
        "seed={} params={} schedule={} backend={:?}",
        summary.seed, summary.params_digest, summary.schedule, summary.backend
    )
    .to_lowercase()
}

fn write_solve_outputs(out: &Path, problem: &Problem, summary: &SolveSummary, stats: &RunStats) -> Result<()> {
    create_dir(out)?;
    let tag = provenance(summary);
    let mut trace = format!("# {tag}\nsweep,energy,flips,cumulative_pj\n");
    for (k, e) in stats.energy_trace.iter().enumerate() {
        let flips = if k == 0 { 0 } else { stats.flips_per_sweep[k - 1] };
        let _ = writeln!(trace, "{k},{e},{flips},{}", stats.cumulative_pj[k]);
    }
    write_file(&out.join("trace.csv"), trace)?;

    let g = problem.graph();
    for (sweep, s) in &stats.snapshots {
        match problem {
            Problem::Digits(d) => {
                let img = Bitmap::from_spins(d.image.width(), d.image.height(), s)?;
                let pgm = img.to_pgm().replacen('\n', &format!("\n# sweep={sweep} {tag}\n"), 1);
                write_file(&out.join(format!("snapshot_{sweep:05}.pgm")), pgm)?;
            }
            _ => {
                #[derive(Serialize)]
                struct Snapshot<'a> {
                    sweep: usize,
                    seed: u64,
                    params_digest: &'a str,
                    schedule: &'a str,
                    energy: i64,
                    spins: &'a SpinArray,
                }
                let snap = Snapshot {
                    sweep: *sweep,
                    seed: summary.seed,
                    params_digest: &summary.params_digest,
                    schedule: &summary.schedule,
                    energy: hamiltonian(s, &g)?,
                    spins: s,
                };
                write_json(&out.join(format!("snapshot_{sweep:05}.json")), &snap)?;
            }
        }
    }
    write_json(&out.join("summary.json"), summary)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub verified: bool,
    pub declared_energy: i64,
    pub recomputed_energy: i64,
    pub declared: Assessment,
    pub recomputed: Assessment,
    pub mismatches: Vec<String>,
    pub oracle: Option<OracleSummary>,
}

/// Recompute a `summary.json` against the problem, independent of the
/// solver.
pub fn cmd_verify(
    kind: ProblemKind,
    source: &ProblemSource,
    solution: &Path,
    oracle: bool,
    threads: Option<usize>,
) -> Result<VerifyReport> {
    let problem = Problem::load(kind, source)?;
    let text = std::fs::read_to_string(solution).map_err(|e| Error::io(solution, e))?;
    let summary: SolveSummary = serde_json::from_str(&text)
        .map_err(|e| Error::parse(solution.display().to_string(), e.line(), e.to_string()))?;
    let graph = problem.graph();
    let mut mismatches = Vec::new();
    if summary.kind != kind {
        mismatches.push(format!("solution is for {:?}, not {:?}", summary.kind, kind));
    }
    if summary.solution.len() != graph.len() {
        return Err(Error::LengthMismatch {
            expected: graph.len(),
            actual: summary.solution.len(),
        });
    }
    let energy = hamiltonian(&summary.solution, &graph)?;
    if energy != summary.energy {
        mismatches.push(format!("energy: declared {}, recomputed {energy}", summary.energy));
    }
    let recomputed = problem.assess(&summary.solution)?;
    if recomputed != summary.assessment {
        mismatches.push("problem assessment differs from the declared one".into());
    }
    let oracle = if oracle {
        let gs = with_threads(threads, |exec| brute_force(&graph, DEFAULT_ORACLE_LIMIT, exec))?;
        if energy < gs.energy {
            mismatches.push(format!("energy {energy} is below the exact minimum {}", gs.energy));
        }
        Some(OracleSummary {
            ground_energy: gs.energy,
            ground_state_count: gs.count,
            reached: energy == gs.energy,
        })
    } else {
        None
    };
    Ok(VerifyReport {
        verified: mismatches.is_empty(),
        declared_energy: summary.energy,
        recomputed_energy: energy,
        declared: summary.assessment,
        recomputed,
        mismatches,
        oracle,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub spins: usize,
    pub ground_energy: i64,
    pub ground_state_count: u64,
    /// Problem reading of the first ground state.
    pub assessment: Assessment,
    pub ground_states: Vec<SpinArray>,
}

pub fn cmd_oracle(kind: ProblemKind, source: &ProblemSource, limit: usize, threads: Option<usize>) -> Result<OracleReport> {
    let problem = Problem::load(kind, source)?;
    let graph = problem.graph();
    let gs = with_threads(threads, |exec: Execution| brute_force(&graph, limit, exec))?;
    Ok(OracleReport {
        spins: graph.len(),
        ground_energy: gs.energy,
        ground_state_count: gs.count,
        assessment: problem.assess(&gs.states[0])?,
        ground_states: gs.states,
    })
}
