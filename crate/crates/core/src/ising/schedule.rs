use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::device::SwitchCurve;
use crate::error::{Error, Result};

/// Affine map from the number of flip votes to the write-current magnitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoteCurrentMap {
    /// Current with no flip votes, A.
    pub i_min: f64,
    /// Current when every vote is to flip, A.
    pub i_max: f64,
}

impl VoteCurrentMap {
    pub fn new(i_min: f64, i_max: f64) -> Result<Self> {
        if !(i_min > 0.0 && i_max > i_min && i_max.is_finite()) {
            return Err(Error::invalid(
                "vote map",
                format!("need 0 < I_min < I_max, got {i_min} / {i_max}"),
            ));
        }
        Ok(Self { i_min, i_max })
    }

    pub fn from_ua(min_ua: f64, max_ua: f64) -> Result<Self> {
        Self::new(min_ua * 1e-6, max_ua * 1e-6)
    }

    /// Current added per flip vote when `total` votes are cast.
    pub fn increment(&self, total: u64) -> f64 {
        (self.i_max - self.i_min) / total as f64
    }
}

/// I = I_min + to_flip·(I_max − I_min)/total. A spin with no voters gets
/// I_min.
pub fn vote_to_current(to_flip: u64, total: u64, map: &VoteCurrentMap) -> Result<f64> {
    if to_flip > total {
        return Err(Error::invalid("votes", format!("{to_flip} flip votes out of {total}")));
    }
    if total == 0 {
        return Ok(map.i_min);
    }
    if to_flip == total {
        return Ok(map.i_max);
    }
    Ok(map.i_min + to_flip as f64 * map.increment(total))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub start_sweep: usize,
    pub map: VoteCurrentMap,
}

/// Piecewise-constant vote map over sweeps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Phase>", into = "Vec<Phase>")]
pub struct AnnealSchedule {
    phases: Vec<Phase>,
}

impl AnnealSchedule {
    pub const DEFAULT_BOUNDARY: usize = 400;

    pub fn new(phases: Vec<Phase>) -> Result<Self> {
        match phases.first() {
            None => return Err(Error::invalid("schedule", "no phases")),
            Some(p) if p.start_sweep != 0 => {
                return Err(Error::invalid("schedule", "first phase must start at sweep 0"))
            }
            _ => {}
        }
        if phases.windows(2).any(|w| w[1].start_sweep <= w[0].start_sweep) {
            return Err(Error::invalid("schedule", "phase starts must be strictly increasing"));
        }
        for p in &phases {
            VoteCurrentMap::new(p.map.i_min, p.map.i_max)?;
        }
        Ok(Self { phases })
    }

    pub fn constant(map: VoteCurrentMap) -> Self {
        Self {
            phases: vec![Phase { start_sweep: 0, map }],
        }
    }

    /// 60–120 µA, widened to 40–160 µA from sweep 400.
    pub fn nominal() -> Self {
        "0:60:120,400:40:160".parse().expect("valid literal")
    }

    /// Phase 1 spans the currents at which `curve` switches with
    /// probability `p_min` (no flip votes) and `p_max` (unanimous); from
    /// `boundary` the map widens to `late`.
    pub fn from_curve(
        curve: &SwitchCurve,
        p_min: f64,
        p_max: f64,
        boundary: usize,
        late: VoteCurrentMap,
    ) -> Result<Self> {
        let at = |p: f64| {
            curve
                .current_at(p)
                .ok_or_else(|| Error::invalid("schedule", format!("switching curve never reaches p = {p}")))
        };
        let early = VoteCurrentMap::new(at(p_min)?, at(p_max)?)?;
        Self::new(vec![
            Phase {
                start_sweep: 0,
                map: early,
            },
            Phase {
                start_sweep: boundary,
                map: late,
            },
        ])
    }

    /// [`from_curve`](Self::from_curve) with the residual and unanimous
    /// switching probabilities 2% and 96%, widening to 40–160 µA at sweep
    /// 400.
    pub fn calibrated(curve: &SwitchCurve) -> Result<Self> {
        let late = VoteCurrentMap::from_ua(40.0, 160.0)?;
        Self::from_curve(curve, 0.02, 0.96, Self::DEFAULT_BOUNDARY, late)
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn map_at(&self, sweep: usize) -> &VoteCurrentMap {
        let k = self.phases.partition_point(|p| p.start_sweep <= sweep);
        &self.phases[k - 1].map
    }

    /// Whether every phase's currents lie inside the curve's sampled range.
    pub fn fits(&self, curve: &SwitchCurve) -> Result<()> {
        let (lo, hi) = curve.range();
        let eps = 1e-12;
        for p in &self.phases {
            if p.map.i_min < lo - eps || p.map.i_max > hi + eps {
                return Err(Error::OutOfRange {
                    current_ua: if p.map.i_min < lo - eps { p.map.i_min } else { p.map.i_max } * 1e6,
                    lo_ua: lo * 1e6,
                    hi_ua: hi * 1e6,
                });
            }
        }
        Ok(())
    }
}

impl TryFrom<Vec<Phase>> for AnnealSchedule {
    type Error = Error;
    fn try_from(v: Vec<Phase>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<AnnealSchedule> for Vec<Phase> {
    fn from(s: AnnealSchedule) -> Self {
        s.phases
    }
}

/// `start:min_uA:max_uA` entries separated by commas.
impl FromStr for AnnealSchedule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = |part: &str| Error::invalid("schedule", format!("`{part}` is not start:min_uA:max_uA"));
        let phases = s
            .split(',')
            .map(|part| {
                let f: Vec<&str> = part.trim().split(':').collect();
                let [start, lo, hi] = f.as_slice() else {
                    return Err(bad(part));
                };
                let start = start.parse().map_err(|_| bad(part))?;
                let lo: f64 = lo.parse().map_err(|_| bad(part))?;
                let hi: f64 = hi.parse().map_err(|_| bad(part))?;
                Ok(Phase {
                    start_sweep: start,
                    map: VoteCurrentMap::from_ua(lo, hi)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(phases)
    }
}

/// Amps to µA, rounded to the pA so the text form reads back cleanly.
fn round_ua(amps: f64) -> f64 {
    (amps * 1e12).round() / 1e6
}

impl fmt::Display for AnnealSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.phases.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}:{}", p.start_sweep, round_ua(p.map.i_min), round_ua(p.map.i_max))?;
        }
        Ok(())
    }
}
