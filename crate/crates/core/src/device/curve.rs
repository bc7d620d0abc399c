use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::magnetics::{estimate_psw, IntegratorConfig, Macrospin, PswEstimate};
use crate::rng::RngStream;

/// Below this many trials per point the curve is flagged as low-statistics.
pub const MIN_RELIABLE_TRIALS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub current_ua: f64,
    pub p: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl CurvePoint {
    pub fn current(&self) -> f64 {
        self.current_ua * 1e-6
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CurveMetadata {
    pub n_trials: usize,
    pub t_write_ns: f64,
    pub t_relax_ns: f64,
    pub torque_scale: f64,
    pub dt_ps: f64,
    pub temperature_k: f64,
    pub seed: u64,
    pub params_digest: String,
    /// Fewer than 100 trials per point: intervals are wide.
    pub low_statistics: bool,
    /// Linear-interpolated current where P_SW first reaches 0.5 (µA).
    pub crossing_50_ua: Option<f64>,
}

/// Sampled switching probability versus write-current magnitude.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwitchCurve {
    pub points: Vec<CurvePoint>,
    pub metadata: CurveMetadata,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurrentSweep {
    pub min_ua: f64,
    pub max_ua: f64,
    pub step_ua: f64,
}

impl Default for CurrentSweep {
    fn default() -> Self {
        Self {
            min_ua: 40.0,
            max_ua: 160.0,
            step_ua: 5.0,
        }
    }
}

impl CurrentSweep {
    pub fn currents_ua(&self) -> Result<Vec<f64>> {
        let valid = self.step_ua > 0.0 && self.max_ua >= self.min_ua && self.min_ua >= 0.0;
        if !valid {
            return Err(Error::invalid("sweep", format!("bad sweep {self:?}")));
        }
        let n = ((self.max_ua - self.min_ua) / self.step_ua + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|k| self.min_ua + k as f64 * self.step_ua).collect())
    }
}

impl SwitchCurve {
    pub fn new(points: Vec<CurvePoint>, metadata: CurveMetadata) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("curve", "no points"));
        }
        for w in points.windows(2) {
            let increasing = w[1].current_ua > w[0].current_ua;
            if !increasing {
                return Err(Error::invalid("curve", "currents must be strictly increasing"));
            }
        }
        if let Some(p) = points.iter().find(|p| !(0.0..=1.0).contains(&p.p)) {
            return Err(Error::invalid("curve", format!("probability {} outside [0, 1]", p.p)));
        }
        let mut curve = Self { points, metadata };
        curve.metadata.crossing_50_ua = curve.current_at(0.5).map(|i| i * 1e6);
        Ok(curve)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.points[0].current(), self.points[self.points.len() - 1].current())
    }

    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| w[1].p >= w[0].p)
    }

    /// Smallest current (A) at which the interpolated curve reaches `p`.
    pub fn current_at(&self, p: f64) -> Option<f64> {
        if self.points[0].p >= p {
            return (self.points[0].p == p).then(|| self.points[0].current());
        }
        self.points.windows(2).find(|w| w[0].p < p && w[1].p >= p).map(|w| {
            let f = (p - w[0].p) / (w[1].p - w[0].p);
            (w[0].current_ua + f * (w[1].current_ua - w[0].current_ua)) * 1e-6
        })
    }

    pub fn to_csv(&self) -> String {
        let m = &self.metadata;
        let mut out = format!(
            "# seed={} params={} trials={} torque_scale={}\nI_uA,p,ci_lo,ci_hi\n",
            m.seed, m.params_digest, m.n_trials, m.torque_scale
        );
        for p in &self.points {
            let _ = writeln!(out, "{},{},{},{}", p.current_ua, p.p, p.ci_lo, p.ci_hi);
        }
        out
    }

    pub fn from_csv(text: &str, origin: &str, metadata: CurveMetadata) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.starts_with('#'));
        match lines.next() {
            Some((_, h)) if h.trim() == "I_uA,p,ci_lo,ci_hi" => {}
            other => {
                let line = other.map_or(1, |(i, _)| i + 1);
                return Err(Error::parse(origin, line, "expected header `I_uA,p,ci_lo,ci_hi`"));
            }
        }
        let mut points = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(Error::parse(origin, i + 1, "expected 4 comma-separated fields"));
            }
            let mut v = [0.0; 4];
            for (slot, f) in v.iter_mut().zip(&fields) {
                *slot = f
                    .parse()
                    .map_err(|_| Error::parse(origin, i + 1, format!("not a number: `{f}`")))?;
            }
            points.push(CurvePoint {
                current_ua: v[0],
                p: v[1],
                ci_lo: v[2],
                ci_hi: v[3],
            });
        }
        Self::new(points, metadata)
    }

    /// Metadata sidecar path for a curve CSV: `curve.csv` → `curve.json`.
    pub fn sidecar_path(csv: &Path) -> PathBuf {
        csv.with_extension("json")
    }

    pub fn save(&self, csv: &Path) -> Result<()> {
        std::fs::write(csv, self.to_csv()).map_err(|e| Error::io(csv, e))?;
        let side = Self::sidecar_path(csv);
        let json = serde_json::to_string_pretty(&self.metadata)?;
        std::fs::write(&side, json + "\n").map_err(|e| Error::io(&side, e))
    }

    pub fn load(csv: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(csv).map_err(|e| Error::io(csv, e))?;
        let side = Self::sidecar_path(csv);
        let metadata = match std::fs::read_to_string(&side) {
            Ok(s) => serde_json::from_str(&s)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => CurveMetadata::default(),
            Err(e) => return Err(Error::io(&side, e)),
        };
        Self::from_csv(&text, &csv.display().to_string(), metadata)
    }
}

/// Piecewise-linear switching probability at current magnitude `current`
/// (A). No extrapolation outside the sampled range.
pub fn psw_lookup(curve: &SwitchCurve, current: f64) -> Result<f64> {
    let ua = current.abs() * 1e6;
    let pts = &curve.points;
    let (lo, hi) = (pts[0].current_ua, pts[pts.len() - 1].current_ua);
    // tolerate float noise at the end points
    let eps = 1e-9 * hi.abs().max(1.0);
    if ua < lo - eps || ua > hi + eps {
        return Err(Error::OutOfRange {
            current_ua: ua,
            lo_ua: lo,
            hi_ua: hi,
        });
    }
    let ua = ua.clamp(lo, hi);
    let k = pts.partition_point(|p| p.current_ua <= ua);
    if k == 0 {
        return Ok(pts[0].p);
    }
    if k == pts.len() {
        return Ok(pts[k - 1].p);
    }
    let (a, b) = (&pts[k - 1], &pts[k]);
    if ua == a.current_ua {
        return Ok(a.p);
    }
    let f = (ua - a.current_ua) / (b.current_ua - a.current_ua);
    Ok(a.p + f * (b.p - a.p))
}

/// Monte-Carlo switching curve over `sweep`. Point `k`, trial `i` uses
/// stream `(seed, k·2³² + i)`.
#[allow(clippy::too_many_arguments)]
pub fn calibrate_switch_curve(
    spin: &Macrospin,
    sweep: &CurrentSweep,
    n_trials: usize,
    t_write: f64,
    t_relax: f64,
    config: &IntegratorConfig,
    seed: u64,
    exec: Execution,
) -> Result<SwitchCurve> {
    if n_trials == 0 {
        return Err(Error::Precondition("n_trials must be >= 1".into()));
    }
    let currents = sweep.currents_ua()?;
    let estimates = exec.try_map(currents.len(), |k| {
        let stream = RngStream::new(seed, (k as u64) << 32);
        estimate_psw(spin, currents[k] * 1e-6, t_write, t_relax, n_trials, config, stream, exec).map_err(|e| {
            Error::AtCurrent {
                current_ua: currents[k],
                source: Box::new(e),
            }
        })
    })?;
    let points = currents
        .iter()
        .zip(&estimates)
        .map(|(&ua, e)| CurvePoint {
            current_ua: ua,
            p: e.p_hat,
            ci_lo: e.ci95.0,
            ci_hi: e.ci95.1,
        })
        .collect();
    SwitchCurve::new(
        points,
        CurveMetadata {
            n_trials,
            t_write_ns: t_write * 1e9,
            t_relax_ns: t_relax * 1e9,
            torque_scale: spin.torque_scale,
            dt_ps: config.dt * 1e12,
            temperature_k: spin.material.temperature,
            seed,
            params_digest: String::new(),
            low_statistics: n_trials < MIN_RELIABLE_TRIALS,
            crossing_50_ua: None,
        },
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorqueCalibration {
    pub torque_scale: f64,
    pub estimate: PswEstimate,
    /// (scale, p_hat) at every bisection probe.
    pub history: Vec<(f64, f64)>,
}

/// Bisect (in log space) for the torque scale at which the switching
/// probability at `target_current` equals `target_p`. Every probe reuses the
/// same random streams, so p(scale) is a deterministic monotone function.
#[allow(clippy::too_many_arguments)]
pub fn calibrate_torque_scale(
    spin: &Macrospin,
    target_current: f64,
    target_p: f64,
    bracket: (f64, f64),
    iterations: usize,
    n_trials: usize,
    t_write: f64,
    t_relax: f64,
    config: &IntegratorConfig,
    seed: u64,
    exec: Execution,
) -> Result<TorqueCalibration> {
    let stream = RngStream::new(seed, 0);
    let probe = |scale: f64| -> Result<PswEstimate> {
        let s = spin.with_torque_scale(scale)?;
        estimate_psw(&s, target_current, t_write, t_relax, n_trials, config, stream, exec)
    };
    let (mut lo, mut hi) = bracket;
    let mut history = Vec::new();
    let p_lo = probe(lo)?;
    let p_hi = probe(hi)?;
    history.push((lo, p_lo.p_hat));
    history.push((hi, p_hi.p_hat));
    if !(p_lo.p_hat <= target_p && p_hi.p_hat >= target_p) {
        return Err(Error::Precondition(format!(
            "bracket [{lo}, {hi}] gives p in [{}, {}], which does not straddle {target_p}",
            p_lo.p_hat, p_hi.p_hat
        )));
    }
    let mut best = if (p_lo.p_hat - target_p).abs() < (p_hi.p_hat - target_p).abs() {
        (lo, p_lo)
    } else {
        (hi, p_hi)
    };
    for _ in 0..iterations {
        let mid = (lo * hi).sqrt();
        let e = probe(mid)?;
        history.push((mid, e.p_hat));
        if (e.p_hat - target_p).abs() <= (best.1.p_hat - target_p).abs() {
            best = (mid, e);
        }
        if e.p_hat < target_p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(TorqueCalibration {
        torque_scale: best.0,
        estimate: best.1,
        history,
    })
}
