//! Stochastic macrospin model of the SHE-MTJ free layer.
//!
//! The free layer is a single unit vector `m` driven by the explicit-form
//! Landau-Lifshitz-Gilbert equation with a Slonczewski spin-torque term fed
//! by the spin-Hall current of the heavy-metal underlayer, and a Gaussian
//! thermal field. All quantities are SI.

mod demag;
mod llg;
mod write;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use demag::{bessel_j1, thin_film_demag_factors};
pub use llg::{Stepper, anisotropy_field, demag_field, llg_rhs, llg_step, spin_current, thermal_field};
pub use write::{
    estimate_psw, simulate_write_event, thermalize, trajectory_csv, BURN_IN, wilson_interval, write_trial, PswEstimate, TrajectoryPoint,
    WriteOutcome, WritePulse,
};

pub type Vec3 = Vector3<f64>;

/// CODATA constants used by the model. Not configurable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    /// Bohr magneton, J/T.
    pub mu_b: f64,
    /// Vacuum permeability, T·m/A.
    pub mu_0: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Elementary charge, C.
    pub q: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
}

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    mu_b: 9.274_010_078_3e-24,
    mu_0: 1.256_637_062_12e-6,
    hbar: 1.054_571_817e-34,
    q: 1.602_176_634e-19,
    k_b: 1.380_649e-23,
};

/// Gyromagnetic ratio `2 μ_B μ_0 / ħ` in m/(A·s).
pub fn gyromagnetic_ratio() -> f64 {
    2.0 * CONSTANTS.mu_b * CONSTANTS.mu_0 / CONSTANTS.hbar
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Saturation magnetization, A/m.
    pub ms: f64,
    /// Gilbert damping.
    pub alpha: f64,
    /// Temperature, K.
    pub temperature: f64,
}

impl MaterialParams {
    pub fn new(ms: f64, alpha: f64, temperature: f64) -> Result<Self> {
        if !(ms > 0.0 && ms.is_finite()) {
            return Err(Error::invalid("ms", format!("must be > 0, got {ms}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::invalid("temperature", format!("must be >= 0, got {temperature}")));
        }
        Ok(Self {
            ms,
            alpha,
            temperature,
        })
    }

    pub fn gamma(&self) -> f64 {
        gyromagnetic_ratio()
    }

    /// Thermal energy `k_B T`, J.
    pub fn kt(&self) -> f64 {
        CONSTANTS.k_b * self.temperature
    }
}

/// Elliptical free layer. Axes are full lengths (not semi-axes).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    /// Long in-plane axis, m. The easy axis lies along it.
    pub axis_long: f64,
    /// Short in-plane axis, m.
    pub axis_short: f64,
    /// Free-layer thickness, m.
    pub thickness: f64,
}

impl Geometry {
    pub fn new(axis_long: f64, axis_short: f64, thickness: f64) -> Result<Self> {
        for (name, v) in [("axis_long", axis_long), ("axis_short", axis_short), ("thickness", thickness)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be > 0, got {v}")));
            }
        }
        if axis_short > axis_long {
            return Err(Error::invalid("axis_short", "must not exceed axis_long"));
        }
        Ok(Self {
            axis_long,
            axis_short,
            thickness,
        })
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::FRAC_PI_4 * self.axis_long * self.axis_short
    }

    pub fn volume(&self) -> f64 {
        self.area() * self.thickness
    }

    /// Number of spins `N_s = M_s V / μ_B`.
    pub fn spin_count(&self, ms: f64) -> f64 {
        ms * self.volume() / CONSTANTS.mu_b
    }
}

/// Uniaxial anisotropy plus diagonal demagnetization tensor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnisotropyModel {
    pub easy_axis: [f64; 3],
    /// Uniaxial anisotropy field, A/m.
    pub h_k: f64,
    /// Demag factors (N_x, N_y, N_z) in the frame x = long axis, z = film normal.
    pub demag_diag: [f64; 3],
}

impl AnisotropyModel {
    pub fn new(easy_axis: Vec3, h_k: f64, demag_diag: [f64; 3]) -> Result<Self> {
        let n = easy_axis.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(Error::invalid("easy_axis", "must be a non-zero vector"));
        }
        let e = easy_axis / n;
        if demag_diag.iter().any(|d| !(0.0..=1.0).contains(d)) {
            return Err(Error::invalid("demag_diag", format!("{demag_diag:?} not in [0, 1]")));
        }
        let sum: f64 = demag_diag.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("demag_diag", format!("factors sum to {sum}, not 1")));
        }
        Ok(Self {
            easy_axis: [e.x, e.y, e.z],
            h_k,
            demag_diag,
        })
    }

    /// Choose `H_k` along the long axis so that the in-plane rotation barrier
    /// (uniaxial plus in-plane shape anisotropy) equals `barrier_j`.
    ///
    /// The barrier of the energy density `½μ0 M_s [M_s Σ N_i m_i² − H_k (m·ê)²]`
    /// between ±x̂ and the in-plane saddle ŷ is
    /// `½ μ0 M_s V (H_k + (N_y − N_x) M_s)`.
    pub fn calibrated(
        material: &MaterialParams,
        geometry: &Geometry,
        demag_diag: [f64; 3],
        barrier_j: f64,
    ) -> Result<Self> {
        let total = 2.0 * barrier_j / (CONSTANTS.mu_0 * material.ms * geometry.volume());
        let shape = (demag_diag[1] - demag_diag[0]) * material.ms;
        let h_k = total - shape;
        if h_k < 0.0 {
            return Err(Error::invalid(
                "energy_barrier",
                format!("shape anisotropy alone exceeds the requested barrier (H_k = {h_k:.3e} A/m)"),
            ));
        }
        Self::new(Vec3::x(), h_k, demag_diag)
    }

    pub fn easy(&self) -> Vec3 {
        Vec3::from(self.easy_axis)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MagnetizationState {
    pub m: Vec3,
    /// Elapsed time, s.
    pub t: f64,
}

impl MagnetizationState {
    pub fn new(m: Vec3) -> Self {
        Self {
            m: m.normalize(),
            t: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Scheme {
    /// Stochastic Heun predictor-corrector (Stratonovich).
    Heun,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    /// Time step, s.
    pub dt: f64,
    pub scheme: Scheme,
    pub renormalize: bool,
    /// During the zero-current relax phase, stop once the deterministic
    /// energy has fallen this many kT below the saddle. `None` always runs
    /// the full relax time.
    pub settle_margin_kt: Option<f64>,
}

pub const MAX_DT: f64 = 1e-12;

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            dt: 1e-13,
            scheme: Scheme::Heun,
            renormalize: true,
            settle_margin_kt: Some(20.0),
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt <= MAX_DT) {
            return Err(Error::invalid("dt", format!("must lie in (0, 1 ps], got {:e} s", self.dt)));
        }
        Ok(())
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn full_relax(mut self) -> Self {
        self.settle_margin_kt = None;
        self
    }
}

/// Everything the integrator needs about one free layer, with derived
/// coefficients precomputed.
#[derive(Clone, Debug, PartialEq)]
pub struct Macrospin {
    pub material: MaterialParams,
    pub geometry: Geometry,
    pub anisotropy: AnisotropyModel,
    /// Unit spin polarization axis σ̂.
    pub polarization: Vec3,
    /// Spin-Hall gain `θ_SH · W_MTJ / t_HM`.
    pub spin_hall_gain: f64,
    /// Dimensionless multiplier on the spin-torque term.
    pub torque_scale: f64,
    gamma: f64,
    spin_count: f64,
}

impl Macrospin {
    pub fn new(
        material: MaterialParams,
        geometry: Geometry,
        anisotropy: AnisotropyModel,
        polarization: Vec3,
        spin_hall_gain: f64,
        torque_scale: f64,
    ) -> Result<Self> {
        if !(torque_scale > 0.0 && torque_scale.is_finite()) {
            return Err(Error::invalid("torque_scale", format!("must be > 0, got {torque_scale}")));
        }
        Ok(Self {
            gamma: material.gamma(),
            spin_count: geometry.spin_count(material.ms),
            material,
            geometry,
            anisotropy,
            polarization: polarization.normalize(),
            spin_hall_gain,
            torque_scale,
        })
    }

    pub fn with_torque_scale(&self, torque_scale: f64) -> Result<Self> {
        let mut out = self.clone();
        if !(torque_scale > 0.0 && torque_scale.is_finite()) {
            return Err(Error::invalid("torque_scale", format!("must be > 0, got {torque_scale}")));
        }
        out.torque_scale = torque_scale;
        Ok(out)
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        let material = MaterialParams::new(self.material.ms, self.material.alpha, temperature)?;
        let mut out = self.clone();
        out.material = material;
        Ok(out)
    }

    pub fn spin_count(&self) -> f64 {
        self.spin_count
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Demag plus anisotropy field at `m`, A/m.
    pub fn deterministic_field(&self, m: &Vec3) -> Vec3 {
        demag_field(m, &self.anisotropy, self.material.ms) + anisotropy_field(m, &self.anisotropy)
    }

    /// Magnetic energy of the free layer at `m`, J.
    pub fn energy(&self, m: &Vec3) -> f64 {
        let n = self.anisotropy.demag_diag;
        let ms = self.material.ms;
        let e = self.anisotropy.easy();
        let demag = ms * (n[0] * m.x * m.x + n[1] * m.y * m.y + n[2] * m.z * m.z);
        let uni = self.anisotropy.h_k * m.dot(&e).powi(2);
        0.5 * CONSTANTS.mu_0 * ms * self.geometry.volume() * (demag - uni)
    }

    /// Height of the in-plane barrier between the two wells, J.
    pub fn barrier(&self) -> f64 {
        let e = self.anisotropy.easy();
        let hard = Vec3::z().cross(&e).normalize();
        self.energy(&hard) - self.energy(&e)
    }

    pub fn spin_current(&self, i_q: f64) -> Vec3 {
        spin_current(i_q, self.spin_hall_gain, &self.polarization)
    }

    pub fn thermal_sigma(&self, dt: f64) -> f64 {
        llg::thermal_sigma(&self.material, &self.geometry, dt)
    }

    /// Coefficient multiplying `m × (I_s × m)` in the torque term, 1/(A·s).
    pub fn torque_coefficient(&self) -> f64 {
        self.torque_scale / (CONSTANTS.q * self.spin_count)
    }
}
