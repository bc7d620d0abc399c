use rand::Rng;
use rand_distr::StandardNormal;

use super::{AnisotropyModel, Geometry, IntegratorConfig, Macrospin, MagnetizationState, MaterialParams, Vec3, CONSTANTS};
use crate::error::{Error, Result};

/// Shape anisotropy field `−M_s (N_x m_x, N_y m_y, N_z m_z)`, A/m.
pub fn demag_field(m: &Vec3, aniso: &AnisotropyModel, ms: f64) -> Vec3 {
    let n = aniso.demag_diag;
    Vec3::new(-ms * n[0] * m.x, -ms * n[1] * m.y, -ms * n[2] * m.z)
}

/// Uniaxial anisotropy field `H_k (m·ê) ê`, A/m.
pub fn anisotropy_field(m: &Vec3, aniso: &AnisotropyModel) -> Vec3 {
    let e = aniso.easy();
    e * (aniso.h_k * m.dot(&e))
}

pub(crate) fn thermal_sigma(material: &MaterialParams, geometry: &Geometry, dt: f64) -> f64 {
    let alpha = material.alpha;
    let damping = alpha / (1.0 + alpha * alpha);
    let denom = material.gamma() * CONSTANTS.mu_0 * material.ms * geometry.volume() * dt;
    (damping * 2.0 * material.kt() / denom).sqrt()
}

/// One sample of the thermal field for a step of length `dt`, A/m. Each
/// component is an independent normal with standard deviation
/// `sqrt(α/(1+α²) · 2 k_B T / (γ μ0 M_s V dt))`.
pub fn thermal_field<R: Rng + ?Sized>(
    material: &MaterialParams,
    geometry: &Geometry,
    dt: f64,
    rng: &mut R,
) -> Vec3 {
    if material.temperature == 0.0 {
        return Vec3::zeros();
    }
    let sigma = thermal_sigma(material, geometry, dt);
    Vec3::new(
        rng.sample::<f64, _>(StandardNormal),
        rng.sample::<f64, _>(StandardNormal),
        rng.sample::<f64, _>(StandardNormal),
    ) * sigma
}

/// Spin current `θ_SH (W/t_HM) I_q` along ±σ̂, A. `gain` is `θ_SH W / t_HM`.
pub fn spin_current(i_q: f64, gain: f64, polarization: &Vec3) -> Vec3 {
    polarization * (gain * i_q)
}

/// Right-hand side of the explicit (Landau-Lifshitz) form of
/// `dm/dt = −γ m×H + α m×dm/dt + c m×(I_s×m)`:
///
/// `dm/dt = [A + α m×A] / (1+α²)` with `A = −γ m×H + c (I_s − (m·I_s) m)`.
pub fn llg_rhs(m: &Vec3, h: &Vec3, i_s: &Vec3, gamma: f64, alpha: f64, torque_coeff: f64) -> Vec3 {
    let precession = m.cross(h) * (-gamma);
    let torque = (i_s - m * m.dot(i_s)) * torque_coeff;
    let a = precession + torque;
    (a + m.cross(&a) * alpha) / (1.0 + alpha * alpha)
}

/// Advance `state` by one Heun step. `h_thermal` is held fixed across the
/// predictor and corrector stages; the deterministic field is re-evaluated
/// at the predicted point.
pub fn llg_step(
    state: &MagnetizationState,
    spin: &Macrospin,
    i_s: &Vec3,
    h_thermal: &Vec3,
    config: &IntegratorConfig,
) -> Result<MagnetizationState> {
    let k = StepCoefficients::new(spin, i_s);
    let m1 = k.heun(&state.m, h_thermal, config.dt, config.renormalize);
    let t = state.t + config.dt;
    if !(m1.x.is_finite() && m1.y.is_finite() && m1.z.is_finite()) {
        return Err(Error::NonFiniteState { t });
    }
    Ok(MagnetizationState { m: m1, t })
}

/// Per-pulse constants of the right-hand side, hoisted out of the step loop.
#[derive(Clone, Copy, Debug)]
pub(crate) struct StepCoefficients {
    demag: Vec3,
    easy: Vec3,
    h_k: f64,
    gamma: f64,
    alpha: f64,
    inv_norm: f64,
    torque: Vec3,
}

impl StepCoefficients {
    pub(crate) fn new(spin: &Macrospin, i_s: &Vec3) -> Self {
        let ms = spin.material.ms;
        let n = spin.anisotropy.demag_diag;
        let alpha = spin.material.alpha;
        Self {
            demag: Vec3::new(-ms * n[0], -ms * n[1], -ms * n[2]),
            easy: spin.anisotropy.easy(),
            h_k: spin.anisotropy.h_k,
            gamma: spin.gamma(),
            alpha,
            inv_norm: 1.0 / (1.0 + alpha * alpha),
            torque: i_s * spin.torque_coefficient(),
        }
    }

    #[inline(always)]
    fn rhs(&self, m: &Vec3, h_thermal: &Vec3) -> Vec3 {
        let (mx, my, mz) = (m.x, m.y, m.z);
        let (ex, ey, ez) = (self.easy.x, self.easy.y, self.easy.z);
        let proj = self.h_k * (mx * ex + my * ey + mz * ez);
        let hx = mx * self.demag.x + proj * ex + h_thermal.x;
        let hy = my * self.demag.y + proj * ey + h_thermal.y;
        let hz = mz * self.demag.z + proj * ez + h_thermal.z;
        let (tx, ty, tz) = (self.torque.x, self.torque.y, self.torque.z);
        let mt = mx * tx + my * ty + mz * tz;
        let g = -self.gamma;
        let ax = g * (my * hz - mz * hy) + tx - mt * mx;
        let ay = g * (mz * hx - mx * hz) + ty - mt * my;
        let az = g * (mx * hy - my * hx) + tz - mt * mz;
        let al = self.alpha;
        Vec3::new(
            (ax + al * (my * az - mz * ay)) * self.inv_norm,
            (ay + al * (mz * ax - mx * az)) * self.inv_norm,
            (az + al * (mx * ay - my * ax)) * self.inv_norm,
        )
    }

    #[inline(always)]
    pub(crate) fn heun(&self, m0: &Vec3, h_thermal: &Vec3, dt: f64, renormalize: bool) -> Vec3 {
        let f0 = self.rhs(m0, h_thermal);
        let mp = m0 + f0 * dt;
        let f1 = self.rhs(&mp, h_thermal);
        let m1 = m0 + (f0 + f1) * (0.5 * dt);
        if renormalize {
            m1 * (1.0 / m1.norm())
        } else {
            m1
        }
    }
}

/// Stateful stepper for a fixed current: thermal sampling plus Heun.
pub struct Stepper {
    coeffs: StepCoefficients,
    sigma: f64,
    dt: f64,
    renormalize: bool,
}

impl Stepper {
    pub fn new(spin: &Macrospin, i_s: &Vec3, config: &IntegratorConfig) -> Self {
        let sigma = if spin.material.temperature == 0.0 {
            0.0
        } else {
            spin.thermal_sigma(config.dt)
        };
        Self {
            coeffs: StepCoefficients::new(spin, i_s),
            sigma,
            dt: config.dt,
            renormalize: config.renormalize,
        }
    }

    #[inline]
    pub fn step<R: Rng + ?Sized>(&self, state: &MagnetizationState, rng: &mut R) -> Result<MagnetizationState> {
        let h_th = if self.sigma == 0.0 {
            Vec3::zeros()
        } else {
            Vec3::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            ) * self.sigma
        };
        let m = self.coeffs.heun(&state.m, &h_th, self.dt, self.renormalize);
        let t = state.t + self.dt;
        if !(m.x.is_finite() && m.y.is_finite() && m.z.is_finite()) {
            return Err(Error::NonFiniteState { t });
        }
        Ok(MagnetizationState { m, t })
    }
}

impl Macrospin {
    /// Draw a thermal sample and take one step.
    pub fn step<R: Rng + ?Sized>(
        &self,
        state: &MagnetizationState,
        i_s: &Vec3,
        config: &IntegratorConfig,
        rng: &mut R,
    ) -> Result<MagnetizationState> {
        Stepper::new(self, i_s, config).step(state, rng)
    }
}
