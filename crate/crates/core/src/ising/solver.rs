use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_len, count_votes, hamiltonian, vote_to_current, AnnealSchedule, CouplingGraph, SpinArray, Votes, VoteCurrentMap};
use crate::device::{
    account_energy, psw_lookup, read_state, DeviceParams, EnergyLedger, ResistanceModel, Spin, SwitchCurve,
    Timings,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::magnetics::{write_trial, IntegratorConfig, Macrospin};
use crate::rng::stage_seed;

/// What a backend sees when asked to flip one cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpdateContext {
    pub state: Spin,
    pub votes: Votes,
    /// Write-current magnitude, A.
    pub current: f64,
}

/// Decides whether a write toward the opposite state succeeds.
pub trait SwitchBackend: Sync {
    fn name(&self) -> &str;
    fn attempt(&self, ctx: &UpdateContext, rng: &mut ChaCha8Rng) -> Result<bool>;
}

/// Samples the calibrated switching curve.
#[derive(Clone, Debug)]
pub struct CurveBackend {
    pub curve: SwitchCurve,
}

impl SwitchBackend for CurveBackend {
    fn name(&self) -> &str {
        "curve"
    }

    fn attempt(&self, ctx: &UpdateContext, rng: &mut ChaCha8Rng) -> Result<bool> {
        let p = psw_lookup(&self.curve, ctx.current)?;
        Ok(rng.random::<f64>() < p)
    }
}

/// Runs a full stochastic LLG write event per update.
#[derive(Clone, Debug)]
pub struct LlgBackend {
    pub spin: Macrospin,
    pub t_write: f64,
    pub t_relax: f64,
    pub config: IntegratorConfig,
}

impl LlgBackend {
    pub fn from_params(params: &DeviceParams) -> Result<Self> {
        let timings = params.timings();
        Ok(Self {
            spin: params.macrospin()?,
            t_write: timings.t_write,
            t_relax: timings.t_relax,
            config: params.integrator(),
        })
    }
}

impl SwitchBackend for LlgBackend {
    fn name(&self) -> &str {
        "llg"
    }

    fn attempt(&self, ctx: &UpdateContext, rng: &mut ChaCha8Rng) -> Result<bool> {
        write_trial(&self.spin, ctx.state > 0, ctx.current, self.t_write, self.t_relax, &self.config, rng)
    }
}

/// Flips exactly when a strict majority of the vote weight says so.
#[derive(Clone, Copy, Debug, Default)]
pub struct MajorityBackend;

impl SwitchBackend for MajorityBackend {
    fn name(&self) -> &str {
        "majority"
    }

    fn attempt(&self, ctx: &UpdateContext, _rng: &mut ChaCha8Rng) -> Result<bool> {
        Ok(2 * ctx.votes.to_flip > ctx.votes.total)
    }
}

/// Read path and supply used to charge each update.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Periphery {
    pub resistance: ResistanceModel,
    pub timings: Timings,
    pub vdd: f64,
    pub read_current: f64,
    pub overhead_j: f64,
}

impl Periphery {
    pub fn from_params(params: &DeviceParams) -> Result<Self> {
        Ok(Self {
            resistance: params.resistance_model()?,
            timings: params.timings(),
            vdd: params.vdd(),
            read_current: params.read_current(),
            overhead_j: params.overhead_j(),
        })
    }
}

impl Default for Periphery {
    fn default() -> Self {
        Self::from_params(&DeviceParams::default()).expect("default parameters are valid")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpdateOutcome {
    pub spin: Spin,
    pub flipped: bool,
    pub votes: Votes,
    pub current: f64,
    pub energy: EnergyLedger,
}

/// Read cell `i`, tally its neighbours, and drive it toward the opposite
/// state with the vote-weighted current. Modifies `s` in place.
#[allow(clippy::too_many_arguments)]
pub fn update_spin(
    i: usize,
    s: &mut SpinArray,
    g: &CouplingGraph,
    backend: &dyn SwitchBackend,
    map: &VoteCurrentMap,
    periphery: &Periphery,
    rng: &mut ChaCha8Rng,
) -> Result<UpdateOutcome> {
    let at = |e: Error| Error::AtSpin {
        index: i,
        source: Box::new(e),
    };
    let stored = s.get(i);
    let state = read_state(periphery.resistance.resistance_of_spin(stored), &periphery.resistance, periphery.vdd)
        .map_err(at)?;
    let votes = count_votes(i, s, g);
    let current = vote_to_current(votes.to_flip, votes.total, map).map_err(at)?;
    let ctx = UpdateContext { state, votes, current };
    let flipped = backend.attempt(&ctx, rng).map_err(at)?;
    if flipped {
        s.flip(i);
    }
    let energy = account_energy(
        current,
        periphery.read_current,
        &periphery.timings,
        periphery.vdd,
        periphery.overhead_j,
    );
    Ok(UpdateOutcome {
        spin: s.get(i),
        flipped,
        votes,
        current,
        energy,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderPolicy {
    #[default]
    Sequential,
    RandomPermutation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepStats {
    pub flips: u64,
    /// Hamiltonian after the sweep.
    pub energy: i64,
    pub ledger: EnergyLedger,
}

/// The random sources of one run, derived from its seed.
#[derive(Clone, Debug)]
pub struct RunRngs {
    pub init: ChaCha8Rng,
    pub order: ChaCha8Rng,
    pub update: ChaCha8Rng,
}

impl RunRngs {
    pub fn new(seed: u64) -> Self {
        let make = |stage| ChaCha8Rng::seed_from_u64(stage_seed(seed, stage));
        Self {
            init: make("init"),
            order: make("sweep-order"),
            update: make("spin-updates"),
        }
    }
}

/// Update every spin once, each seeing its neighbours' newest states.
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    s: &mut SpinArray,
    g: &CouplingGraph,
    backend: &dyn SwitchBackend,
    map: &VoteCurrentMap,
    order: OrderPolicy,
    periphery: &Periphery,
    rngs: &mut RunRngs,
) -> Result<SweepStats> {
    check_len(s, g)?;
    let mut indices: Vec<usize> = (0..s.len()).collect();
    if order == OrderPolicy::RandomPermutation {
        indices.shuffle(&mut rngs.order);
    }
    let mut flips = 0;
    let mut ledger = EnergyLedger::default();
    for i in indices {
        let out = update_spin(i, s, g, backend, map, periphery, &mut rngs.update)?;
        flips += u64::from(out.flipped);
        ledger += out.energy;
    }
    Ok(SweepStats {
        flips,
        energy: hamiltonian(s, g)?,
        ledger,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Initial {
    Given(SpinArray),
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub max_sweeps: usize,
    /// Stop once H reaches this value or lower.
    pub target_energy: Option<i64>,
    pub order: OrderPolicy,
    /// Keep a copy of the state every this many sweeps.
    pub snapshot_every: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            max_sweeps: 500,
            target_energy: None,
            order: OrderPolicy::Sequential,
            snapshot_every: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub seed: u64,
    pub backend: String,
    pub schedule: String,
    pub sweeps: usize,
    pub updates: u64,
    /// H before the first sweep and after each one.
    pub energy_trace: Vec<i64>,
    pub flips_per_sweep: Vec<u64>,
    /// Cumulative ledger total (pJ) before the first sweep and after each.
    pub cumulative_pj: Vec<f64>,
    pub ledger: EnergyLedger,
    /// First sweep count at which the target energy was reached.
    pub converged_at: Option<usize>,
    pub best_energy: i64,
    pub best_spins: SpinArray,
    pub initial_spins: SpinArray,
    pub final_spins: SpinArray,
    pub snapshots: Vec<(usize, SpinArray)>,
}

impl RunStats {
    pub fn final_energy(&self) -> i64 {
        *self.energy_trace.last().expect("trace holds the initial energy")
    }
}

/// Anneal `g` under `schedule`. Not reaching the target is reported in the
/// stats, not as an error.
#[allow(clippy::too_many_arguments)]
pub fn run(
    g: &CouplingGraph,
    initial: &Initial,
    backend: &dyn SwitchBackend,
    schedule: &AnnealSchedule,
    config: &RunConfig,
    periphery: &Periphery,
    seed: u64,
) -> Result<RunStats> {
    if config.max_sweeps == 0 {
        return Err(Error::Precondition("max_sweeps must be >= 1".into()));
    }
    let mut rngs = RunRngs::new(seed);
    let mut s = match initial {
        Initial::Given(s) => s.clone(),
        Initial::Random => SpinArray::random(g.len(), &mut rngs.init),
    };
    let h0 = hamiltonian(&s, g)?;
    let reached = |h: i64| config.target_energy.is_some_and(|t| h <= t);
    let mut stats = RunStats {
        seed,
        backend: backend.name().to_string(),
        schedule: schedule.to_string(),
        sweeps: 0,
        updates: 0,
        energy_trace: vec![h0],
        flips_per_sweep: Vec::new(),
        cumulative_pj: vec![0.0],
        ledger: EnergyLedger::default(),
        converged_at: reached(h0).then_some(0),
        best_energy: h0,
        best_spins: s.clone(),
        initial_spins: s.clone(),
        final_spins: s.clone(),
        snapshots: vec![(0, s.clone())],
    };
    let mut k = 0;
    while k < config.max_sweeps && stats.converged_at.is_none() {
        let out = sweep(&mut s, g, backend, schedule.map_at(k), config.order, periphery, &mut rngs)?;
        k += 1;
        stats.energy_trace.push(out.energy);
        stats.flips_per_sweep.push(out.flips);
        stats.ledger += out.ledger;
        stats.cumulative_pj.push(stats.ledger.total_pj());
        if out.energy < stats.best_energy {
            stats.best_energy = out.energy;
            stats.best_spins = s.clone();
        }
        if reached(out.energy) {
            stats.converged_at = Some(k);
        }
        if config.snapshot_every.is_some_and(|e| e > 0 && k % e == 0) {
            stats.snapshots.push((k, s.clone()));
        }
    }
    stats.sweeps = k;
    stats.updates = stats.ledger.updates;
    if stats.snapshots.last().map(|x| x.0) != Some(k) {
        stats.snapshots.push((k, s.clone()));
    }
    stats.final_spins = s;
    Ok(stats)
}

/// Independent random-start runs, one per seed.
pub fn run_restarts(
    g: &CouplingGraph,
    backend: &dyn SwitchBackend,
    schedule: &AnnealSchedule,
    config: &RunConfig,
    periphery: &Periphery,
    seeds: &[u64],
    exec: Execution,
) -> Result<Vec<RunStats>> {
    exec.try_map(seeds.len(), |k| {
        run(g, &Initial::Random, backend, schedule, config, periphery, seeds[k])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::{CurveMetadata, CurvePoint};

    fn ring(n: usize) -> CouplingGraph {
        let mut g = CouplingGraph::new(n);
        for i in 0..n {
            g.add_coupling(i, (i + 1) % n, 1).unwrap();
        }
        g
    }

    fn step_curve(p_lo: f64, p_hi: f64) -> CurveBackend {
        let pt = |ua, p| CurvePoint {
            current_ua: ua,
            p,
            ci_lo: p,
            ci_hi: p,
        };
        CurveBackend {
            curve: SwitchCurve::new(vec![pt(40.0, p_lo), pt(160.0, p_hi)], CurveMetadata::default()).unwrap(),
        }
    }

    fn nominal_map() -> VoteCurrentMap {
        VoteCurrentMap::from_ua(60.0, 120.0).unwrap()
    }

    #[test]
    fn uncoupled_spins_stay_put_when_curve_is_zero() {
        let g = CouplingGraph::new(10);
        let mut rngs = RunRngs::new(1);
        let mut s = SpinArray::random(10, &mut rngs.init);
        let before = s.clone();
        let backend = step_curve(0.0, 0.0);
        let out = sweep(&mut s, &g, &backend, &nominal_map(), OrderPolicy::Sequential, &Periphery::default(), &mut rngs)
            .unwrap();
        assert_eq!(s, before);
        assert_eq!(out.flips, 0);
        assert_eq!(out.ledger.updates, 10);
    }

    #[test]
    fn majority_ring_reaches_ground_state() {
        let n = 12;
        let g = ring(n);
        let mut v = vec![1; n];
        v[3] = -1;
        v[7] = -1;
        let stats = run(
            &g,
            &Initial::Given(SpinArray::new(v).unwrap()),
            &MajorityBackend,
            &AnnealSchedule::nominal(),
            &RunConfig {
                max_sweeps: 5,
                ..RunConfig::default()
            },
            &Periphery::default(),
            0,
        )
        .unwrap();
        assert_eq!(stats.final_energy(), -(n as i64));
        assert_eq!(stats.energy_trace.len(), stats.sweeps + 1);
    }

    #[test]
    fn majority_fixed_point() {
        let g = ring(8);
        let mut s = SpinArray::new(vec![1, 1, 1, 1, -1, -1, -1, -1]).unwrap();
        // every spin has at least one agreeing neighbour, so no strict majority to flip
        let before = s.clone();
        let mut rngs = RunRngs::new(0);
        sweep(&mut s, &g, &MajorityBackend, &nominal_map(), OrderPolicy::RandomPermutation, &Periphery::default(), &mut rngs)
            .unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn zero_sweeps_rejected() {
        let g = ring(4);
        let cfg = RunConfig {
            max_sweeps: 0,
            ..RunConfig::default()
        };
        let err = run(&g, &Initial::Random, &MajorityBackend, &AnnealSchedule::nominal(), &cfg, &Periphery::default(), 1);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn target_energy_stops_early() {
        let g = ring(6);
        let cfg = RunConfig {
            max_sweeps: 100,
            target_energy: Some(-6),
            ..RunConfig::default()
        };
        let s = SpinArray::new(vec![1, 1, 1, 1, -1, 1]).unwrap();
        let stats = run(&g, &Initial::Given(s), &MajorityBackend, &AnnealSchedule::nominal(), &cfg, &Periphery::default(), 1)
            .unwrap();
        assert_eq!(stats.converged_at, Some(1));
        assert_eq!(stats.sweeps, 1);
    }

    #[test]
    fn ledger_counts_one_read_and_write_per_update() {
        let g = ring(5);
        let cfg = RunConfig {
            max_sweeps: 3,
            ..RunConfig::default()
        };
        let p = Periphery::default();
        let stats = run(&g, &Initial::Random, &step_curve(0.3, 0.7), &AnnealSchedule::nominal(), &cfg, &p, 4).unwrap();
        assert_eq!(stats.updates, 15);
        let read = p.vdd * p.read_current * p.timings.t_read;
        assert!((stats.ledger.read_j - 15.0 * read).abs() < 1e-24);
        assert!((stats.ledger.overhead_j - 15.0 * p.overhead_j).abs() < 1e-24);
    }

    #[test]
    fn same_seed_same_trace() {
        let g = ring(9);
        let cfg = RunConfig {
            max_sweeps: 20,
            order: OrderPolicy::RandomPermutation,
            ..RunConfig::default()
        };
        let b = step_curve(0.1, 0.9);
        let a = run(&g, &Initial::Random, &b, &AnnealSchedule::nominal(), &cfg, &Periphery::default(), 77).unwrap();
        let c = run(&g, &Initial::Random, &b, &AnnealSchedule::nominal(), &cfg, &Periphery::default(), 77).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn curve_out_of_range_names_the_spin() {
        let g = ring(3);
        let mut s = SpinArray::uniform(3, 1);
        let map = VoteCurrentMap::from_ua(20.0, 120.0).unwrap();
        let mut rngs = RunRngs::new(0);
        let err = update_spin(1, &mut s, &g, &step_curve(0.0, 1.0), &map, &Periphery::default(), &mut rngs.update)
            .unwrap_err();
        assert!(matches!(err, Error::AtSpin { index: 1, .. }), "{err}");
    }
}
