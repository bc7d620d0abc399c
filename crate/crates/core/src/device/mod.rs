//! Behavioral SHE-MTJ cell: parameters, resistive read-out, switching-curve
//! calibration and lookup, and per-update energy accounting.

mod curve;
mod energy;
mod params;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnetics::Vec3;

pub use curve::{
    calibrate_switch_curve, calibrate_torque_scale, psw_lookup, CurveMetadata, CurvePoint, CurrentSweep,
    SwitchCurve, TorqueCalibration,
};
pub use energy::{account_energy, EnergyLedger, Timings};
pub use params::{DeviceParams, PolarizationAxis};

/// Logical spin value: +1 for the parallel (low resistance) state, −1 for
/// anti-parallel.
pub type Spin = i8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResistanceModel {
    pub r_p: f64,
    pub r_ap: f64,
    pub r_ref: f64,
}

impl ResistanceModel {
    /// `r_ref = None` places the reference at the geometric mean of the two
    /// states.
    pub fn new(r_p: f64, r_ap: f64, r_ref: Option<f64>) -> Result<Self> {
        if !(r_p > 0.0 && r_ap > r_p) {
            return Err(Error::invalid("r_ap", format!("need R_AP > R_P > 0, got {r_p} / {r_ap}")));
        }
        let r_ref = r_ref.unwrap_or_else(|| (r_p * r_ap).sqrt());
        if !(r_p < r_ref && r_ref < r_ap) {
            return Err(Error::invalid("r_ref", format!("{r_ref} not strictly between R_P and R_AP")));
        }
        Ok(Self { r_p, r_ap, r_ref })
    }

    /// Resistance of a free layer with magnetization `m`; the pinned layer
    /// points along `+easy`.
    pub fn resistance_of(&self, m: &Vec3, easy: &Vec3) -> f64 {
        if m.dot(easy) >= 0.0 {
            self.r_p
        } else {
            self.r_ap
        }
    }

    pub fn resistance_of_spin(&self, s: Spin) -> f64 {
        if s > 0 {
            self.r_p
        } else {
            self.r_ap
        }
    }
}

/// Sense the MTJ through the `R_REF` divider and inverter.
///
/// The divider midpoint `V_DD R_MTJ / (R_MTJ + R_REF)` sits below `V_DD/2`
/// for the parallel state, which drives the inverter output high (+1).
pub fn read_state(resistance: f64, model: &ResistanceModel, vdd: f64) -> Result<Spin> {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * b;
    if !(close(resistance, model.r_p) || close(resistance, model.r_ap)) {
        return Err(Error::UnknownResistance(resistance));
    }
    let v_mid = vdd * resistance / (resistance + model.r_ref);
    Ok(if v_mid < vdd / 2.0 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> ResistanceModel {
        ResistanceModel::new(8.56e3, 18.31e3, None).unwrap()
    }

    #[test]
    fn reference_is_geometric_mean() {
        assert!((table().r_ref - 12.519e3).abs() < 1.0, "{}", table().r_ref);
    }

    #[test]
    fn parallel_reads_plus_one() {
        assert_eq!(read_state(8.56e3, &table(), 1.0).unwrap(), 1);
        assert_eq!(read_state(18.31e3, &table(), 1.0).unwrap(), -1);
    }

    #[test]
    fn swapped_resistances_swap_output() {
        let m = table();
        let a = read_state(m.r_p, &m, 1.0).unwrap();
        let b = read_state(m.r_ap, &m, 1.0).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn rejects_unknown_resistance() {
        assert!(matches!(read_state(10e3, &table(), 1.0), Err(Error::UnknownResistance(_))));
    }

    #[test]
    fn rejects_misordered_resistances() {
        assert!(ResistanceModel::new(18e3, 8e3, None).is_err());
        assert!(ResistanceModel::new(8e3, 18e3, Some(20e3)).is_err());
    }
}
