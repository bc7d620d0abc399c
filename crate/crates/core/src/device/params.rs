use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ResistanceModel, Timings};
use crate::error::{Error, Result};
use crate::magnetics::{
    thin_film_demag_factors, AnisotropyModel, Geometry, IntegratorConfig, Macrospin, MaterialParams, Vec3,
};

/// Torque-scale multiplier that puts the 50% switching point at 90 µA for
/// the default parameters (output of `mtj-ising device calibrate`).
pub const DEFAULT_TORQUE_SCALE: f64 = 3.447;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarizationAxis {
    /// Along the long (easy) axis of the ellipse.
    Easy,
    /// Along the short in-plane axis.
    Short,
    /// Along the film normal.
    Normal,
}

impl PolarizationAxis {
    pub fn vector(self) -> Vec3 {
        match self {
            PolarizationAxis::Easy => Vec3::x(),
            PolarizationAxis::Short => Vec3::y(),
            PolarizationAxis::Normal => Vec3::z(),
        }
    }
}

/// Device parameters in the units of the usual data-sheet table. The file
/// form is a flat TOML table with these keys; missing keys take defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceParams {
    /// Free-layer ellipse, long axis (nm).
    pub free_layer_long_nm: f64,
    /// Free-layer ellipse, short axis (nm).
    pub free_layer_short_nm: f64,
    pub t_fl_nm: f64,
    pub t_hm_nm: f64,
    pub ms_emu_per_cm3: f64,
    pub theta_sh: f64,
    pub alpha: f64,
    pub energy_barrier_kt: f64,
    pub t_mgo_nm: f64,
    pub r_p_kohm: f64,
    pub r_ap_kohm: f64,
    /// Read reference resistor; geometric mean of R_P and R_AP when absent.
    pub r_ref_kohm: Option<f64>,
    pub rho_hm_uohm_cm: f64,
    pub t_pw_ns: f64,
    pub t_relax_ns: f64,
    pub t_read_ns: f64,
    pub temperature_k: f64,
    pub vdd_v: f64,
    /// Width entering the spin-Hall gain θ_SH · W_MTJ / t_HM (nm).
    pub w_mtj_nm: f64,
    pub polarization: PolarizationAxis,
    pub torque_scale: f64,
    pub read_current_ua: f64,
    pub overhead_pj: f64,
    pub dt_ps: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        Self {
            free_layer_long_nm: 112.5,
            free_layer_short_nm: 45.0,
            t_fl_nm: 1.5,
            t_hm_nm: 2.3,
            ms_emu_per_cm3: 1257.3,
            theta_sh: 0.3,
            alpha: 0.1,
            energy_barrier_kt: 60.0,
            t_mgo_nm: 1.4,
            r_p_kohm: 8.56,
            r_ap_kohm: 18.31,
            r_ref_kohm: None,
            rho_hm_uohm_cm: 200.0,
            t_pw_ns: 3.0,
            t_relax_ns: 6.0,
            t_read_ns: 1.0,
            temperature_k: 300.0,
            vdd_v: 1.0,
            w_mtj_nm: 45.0,
            polarization: PolarizationAxis::Easy,
            torque_scale: DEFAULT_TORQUE_SCALE,
            read_current_ua: 38.0,
            overhead_pj: 0.01,
            dt_ps: 0.1,
        }
    }
}

const NM: f64 = 1e-9;

fn toml_line(text: &str, err: &toml::de::Error) -> usize {
    err.span()
        .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
        .unwrap_or(0)
}

impl DeviceParams {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let params: Self = toml::from_str(text).map_err(|e| {
            Error::parse(origin, toml_line(text, &e), e.message().to_string())
        })?;
        params.validate()?;
        Ok(params)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("device parameters serialize")
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("free_layer_long_nm", self.free_layer_long_nm),
            ("free_layer_short_nm", self.free_layer_short_nm),
            ("t_fl_nm", self.t_fl_nm),
            ("t_hm_nm", self.t_hm_nm),
            ("ms_emu_per_cm3", self.ms_emu_per_cm3),
            ("energy_barrier_kt", self.energy_barrier_kt),
            ("t_mgo_nm", self.t_mgo_nm),
            ("rho_hm_uohm_cm", self.rho_hm_uohm_cm),
            ("vdd_v", self.vdd_v),
            ("w_mtj_nm", self.w_mtj_nm),
            ("torque_scale", self.torque_scale),
            ("dt_ps", self.dt_ps),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be > 0, got {v}")));
            }
        }
        if !(self.theta_sh > 0.0 && self.theta_sh <= 1.0) {
            return Err(Error::invalid("theta_sh", format!("must lie in (0, 1], got {}", self.theta_sh)));
        }
        for (name, v) in [
            ("t_pw_ns", self.t_pw_ns),
            ("t_relax_ns", self.t_relax_ns),
            ("t_read_ns", self.t_read_ns),
            ("read_current_ua", self.read_current_ua),
            ("overhead_pj", self.overhead_pj),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be >= 0, got {v}")));
            }
        }
        self.resistance_model()?;
        self.integrator().validate()?;
        MaterialParams::new(self.ms(), self.alpha, self.temperature_k)?;
        Geometry::new(self.free_layer_long_nm * NM, self.free_layer_short_nm * NM, self.t_fl_nm * NM)?;
        Ok(())
    }

    /// Saturation magnetization in A/m (1 emu/cm³ = 10³ A/m).
    pub fn ms(&self) -> f64 {
        self.ms_emu_per_cm3 * 1e3
    }

    pub fn t_hm(&self) -> f64 {
        self.t_hm_nm * NM
    }

    pub fn w_mtj(&self) -> f64 {
        self.w_mtj_nm * NM
    }

    pub fn vdd(&self) -> f64 {
        self.vdd_v
    }

    pub fn read_current(&self) -> f64 {
        self.read_current_ua * 1e-6
    }

    pub fn overhead_j(&self) -> f64 {
        self.overhead_pj * 1e-12
    }

    pub fn timings(&self) -> Timings {
        Timings {
            t_write: self.t_pw_ns * NM,
            t_relax: self.t_relax_ns * NM,
            t_read: self.t_read_ns * NM,
        }
    }

    pub fn spin_hall_gain(&self) -> f64 {
        self.theta_sh * self.w_mtj() / self.t_hm()
    }

    /// Spin current for charge current `i_q`, A.
    pub fn spin_current(&self, i_q: f64) -> Vec3 {
        crate::magnetics::spin_current(i_q, self.spin_hall_gain(), &self.polarization.vector())
    }

    pub fn resistance_model(&self) -> Result<ResistanceModel> {
        ResistanceModel::new(
            self.r_p_kohm * 1e3,
            self.r_ap_kohm * 1e3,
            self.r_ref_kohm.map(|r| r * 1e3),
        )
    }

    pub fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig::default().with_dt(self.dt_ps * 1e-12)
    }

    /// Build the free-layer model: demag factors from the ellipse, `H_k`
    /// calibrated to the configured barrier.
    pub fn macrospin(&self) -> Result<Macrospin> {
        let material = MaterialParams::new(self.ms(), self.alpha, self.temperature_k)?;
        let geometry = Geometry::new(self.free_layer_long_nm * NM, self.free_layer_short_nm * NM, self.t_fl_nm * NM)?;
        let demag = thin_film_demag_factors(&geometry);
        // The barrier is specified in units of kT at the operating temperature.
        let kt = crate::magnetics::CONSTANTS.k_b * self.temperature_k;
        let aniso = AnisotropyModel::calibrated(&material, &geometry, demag, self.energy_barrier_kt * kt)?;
        Macrospin::new(
            material,
            geometry,
            aniso,
            self.polarization.vector(),
            self.spin_hall_gain(),
            self.torque_scale,
        )
    }

    /// Short SHA-256 digest of the canonical serialization.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("device parameters serialize");
        let hash = Sha256::digest(json.as_bytes());
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
