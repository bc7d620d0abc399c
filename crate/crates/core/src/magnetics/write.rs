use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::llg::Stepper;
use super::{IntegratorConfig, Macrospin, MagnetizationState, Vec3};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::rng::RngStream;

/// Burn-in before each Monte-Carlo trial, s.
pub const BURN_IN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WritePulse {
    /// Heavy-metal charge current, A. Positive drives m toward +σ̂.
    pub i_q: f64,
    /// Pulse duration, s.
    pub t_write: f64,
    /// Zero-current wait after the pulse, s.
    pub t_relax: f64,
}

impl WritePulse {
    pub fn new(i_q: f64, t_write: f64, t_relax: f64) -> Result<Self> {
        if !(t_write >= 0.0 && t_relax >= 0.0) {
            return Err(Error::invalid("pulse", "t_write and t_relax must be >= 0"));
        }
        Ok(Self {
            i_q,
            t_write,
            t_relax,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub m: [f64; 3],
    pub i_q: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WriteOutcome {
    pub final_state: MagnetizationState,
    pub flipped: bool,
    pub trajectory: Option<Vec<TrajectoryPoint>>,
}

fn steps_for(duration: f64, dt: f64) -> usize {
    (duration / dt).round() as usize
}

/// Run `initial` for `duration` with zero current. Starting from the exact
/// well minimum this samples the thermal cone around it.
pub fn thermalize<R: Rng + ?Sized>(
    spin: &Macrospin,
    initial: MagnetizationState,
    duration: f64,
    config: &IntegratorConfig,
    rng: &mut R,
) -> Result<MagnetizationState> {
    config.validate()?;
    let stepper = Stepper::new(spin, &Vec3::zeros(), config);
    let mut st = initial;
    for _ in 0..steps_for(duration, config.dt) {
        st = stepper.step(&st, rng)?;
    }
    Ok(MagnetizationState { m: st.m, t: initial.t })
}

/// Apply `pulse` to `initial`, then let it relax. `record_stride` samples the
/// path every that many steps and always runs the full relax time.
pub fn simulate_write_event<R: Rng + ?Sized>(
    spin: &Macrospin,
    initial: MagnetizationState,
    pulse: &WritePulse,
    config: &IntegratorConfig,
    rng: &mut R,
    record_stride: Option<usize>,
) -> Result<WriteOutcome> {
    config.validate()?;
    let easy = spin.anisotropy.easy();
    let start_sign = initial.m.dot(&easy) >= 0.0;
    let drive = Stepper::new(spin, &spin.spin_current(pulse.i_q), config);
    let relax = Stepper::new(spin, &Vec3::zeros(), config);

    let mut trajectory = record_stride.map(|_| Vec::new());
    let stride = record_stride.unwrap_or(usize::MAX).max(1);
    let record = |st: &MagnetizationState, i_q: f64, k: usize, traj: &mut Option<Vec<TrajectoryPoint>>| {
        if let Some(path) = traj.as_mut() {
            if k.is_multiple_of(stride) {
                path.push(TrajectoryPoint {
                    t: st.t,
                    m: [st.m.x, st.m.y, st.m.z],
                    i_q,
                });
            }
        }
    };

    let mut st = initial;
    let write_steps = steps_for(pulse.t_write, config.dt);
    let relax_steps = steps_for(pulse.t_relax, config.dt);
    record(&st, pulse.i_q, 0, &mut trajectory);
    for k in 1..=write_steps {
        st = drive.step(&st, rng)?;
        record(&st, pulse.i_q, k, &mut trajectory);
    }

    // Below this energy the state is trapped in its well for the rest of the
    // relax phase.
    let settle = match (config.settle_margin_kt, record_stride) {
        (Some(margin), None) => {
            Some(spin.energy(&easy) + spin.barrier() - margin * spin.material.kt())
        }
        _ => None,
    };
    for k in 1..=relax_steps {
        if let Some(level) = settle {
            if spin.energy(&st.m) <= level {
                break;
            }
        }
        st = relax.step(&st, rng)?;
        record(&st, 0.0, write_steps + k, &mut trajectory);
    }

    let end_sign = st.m.dot(&easy) >= 0.0;
    Ok(WriteOutcome {
        final_state: st,
        flipped: start_sign != end_sign,
        trajectory,
    })
}

/// CSV with columns `t,m_x,m_y,m_z,I_q` (SI units).
pub fn trajectory_csv(points: &[TrajectoryPoint]) -> String {
    let mut out = String::from("t,m_x,m_y,m_z,I_q\n");
    for p in points {
        let _ = writeln!(out, "{},{},{},{},{}", p.t, p.m[0], p.m[1], p.m[2], p.i_q);
    }
    out
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = n as f64;
    let p = successes as f64 / n;
    let z2n = z * z / n;
    let centre = (p + z2n / 2.0) / (1.0 + z2n);
    let half = z / (1.0 + z2n) * (p * (1.0 - p) / n + z2n / (4.0 * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes as f64 == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PswEstimate {
    /// Current magnitude, A.
    pub current: f64,
    pub flips: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub ci95: (f64, f64),
}

/// One write attempt from a thermalized well: `from_parallel` selects the
/// starting well (+ê or −ê) and the current of magnitude `current` is driven
/// toward the other one. Returns whether the layer flipped.
pub fn write_trial<R: Rng + ?Sized>(
    spin: &Macrospin,
    from_parallel: bool,
    current: f64,
    t_write: f64,
    t_relax: f64,
    config: &IntegratorConfig,
    rng: &mut R,
) -> Result<bool> {
    let easy = spin.anisotropy.easy();
    let (start, i_q) = if from_parallel {
        (easy, -current.abs())
    } else {
        (-easy, current.abs())
    };
    let pulse = WritePulse::new(i_q, t_write, t_relax)?;
    let start = thermalize(spin, MagnetizationState::new(start), BURN_IN, config, rng)?;
    simulate_write_event(spin, start, &pulse, config, rng, None).map(|o| o.flipped)
}

/// Switching probability at current magnitude `current` from `n_trials`
/// independent P→AP writes, each from a freshly thermalized state. Trial `i`
/// uses stream `stream.nth(i)`.
#[allow(clippy::too_many_arguments)]
pub fn estimate_psw(
    spin: &Macrospin,
    current: f64,
    t_write: f64,
    t_relax: f64,
    n_trials: usize,
    config: &IntegratorConfig,
    stream: RngStream,
    exec: Execution,
) -> Result<PswEstimate> {
    if n_trials == 0 {
        return Err(Error::Precondition("n_trials must be >= 1".into()));
    }
    config.validate()?;
    WritePulse::new(current, t_write, t_relax)?;
    let outcomes = exec.try_map(n_trials, |i| {
        let mut rng = stream.nth(i as u64).rng();
        write_trial(spin, true, current, t_write, t_relax, config, &mut rng)
    })?;
    let flips = outcomes.iter().filter(|&&f| f).count() as u64;
    let trials = n_trials as u64;
    Ok(PswEstimate {
        current: current.abs(),
        flips,
        trials,
        p_hat: flips as f64 / trials as f64,
        ci95: wilson_interval(flips, trials),
    })
}
