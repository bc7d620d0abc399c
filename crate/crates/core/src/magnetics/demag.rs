//! Demagnetization factors of a uniformly magnetized elliptic cylinder.
//!
//! Uses the shape-amplitude (reciprocal space) representation
//!
//! `N_ij = 1/(8π³V) ∫ |D(k)|² k_i k_j / k² d³k`
//!
//! with `D(k) = 2πab J1(q)/q · 2 sin(k_z t/2)/k_z` and
//! `q = sqrt(a²k_x² + b²k_y²)`. The `k_z` integral is done in closed form,
//! leaving for the in-plane factors
//!
//! `N_x = (1/π) ∫₀^{2π} dφ cos²φ / (a² g(φ)) · F(t √g(φ))`
//!
//! where `g = cos²φ/a² + sin²φ/b²` and
//! `F(τ) = ∫₀^∞ J1(r)²/r · [1 − (1 − e^{−rτ})/(rτ)] dr`.
//! `N_z` follows from the trace.

use std::f64::consts::PI;

use super::Geometry;

/// Bessel function of the first kind, order one (rational approximation,
/// absolute error below 1e-8).
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 8.0 {
        let y = x * x;
        let p = x
            * (72362614232.0
                + y * (-7895059235.0
                    + y * (242396853.1 + y * (-2972611.439 + y * (15704.48260 + y * (-30.16036606))))));
        let q = 144725228442.0
            + y * (2300535178.0 + y * (18583304.74 + y * (99447.43394 + y * (376.9991397 + y))));
        p / q
    } else {
        let z = 8.0 / ax;
        let y = z * z;
        let xx = ax - 2.356194491;
        let p = 1.0
            + y * (0.183105e-2 + y * (-0.3516396496e-4 + y * (0.2457520174e-5 + y * (-0.240337019e-6))));
        let q = 0.04687499995
            + y * (-0.2002690873e-3 + y * (0.8449199096e-5 + y * (-0.88228987e-6 + y * 0.105787412e-6)));
        let ans = (std::f64::consts::FRAC_2_PI / ax).sqrt() * (xx.cos() * p - z * xx.sin() * q);
        if x < 0.0 {
            -ans
        } else {
            ans
        }
    }
}

const R_MAX: f64 = 2000.0;
const R_STEP: f64 = 0.05;
const PHI_POINTS: usize = 48;

/// Radial kernel `F(τ)`, Simpson on [0, R_MAX] plus the asymptotic tail.
fn radial_kernel(tau: f64, j1_sq_over_r: &[f64]) -> f64 {
    let n = j1_sq_over_r.len() - 1;
    let mut acc = 0.0;
    for (i, &w) in j1_sq_over_r.iter().enumerate() {
        let r = i as f64 * R_STEP;
        let x = r * tau;
        // 1 − (1 − e^{−x})/x, with a series near zero
        let bracket = if x < 1e-4 {
            x / 2.0 - x * x / 6.0
        } else {
            1.0 - (-x).exp_m1().abs() / x
        };
        let coef = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += coef * w * bracket;
    }
    let body = acc * R_STEP / 3.0;
    // J1(r)² ≈ 1/(πr) on average for large r
    let tail = 1.0 / (PI * R_MAX) - 1.0 / (2.0 * PI * tau * R_MAX * R_MAX);
    body + tail
}

/// Demag factors `(N_long, N_short, N_normal)` of an elliptic cylinder.
pub fn thin_film_demag_factors(geometry: &Geometry) -> [f64; 3] {
    let a = geometry.axis_long / 2.0;
    let b = geometry.axis_short / 2.0;
    let t = geometry.thickness;

    let n = (R_MAX / R_STEP).round() as usize;
    let table: Vec<f64> = (0..=n)
        .map(|i| {
            let r = i as f64 * R_STEP;
            if r == 0.0 {
                0.0
            } else {
                let j = bessel_j1(r);
                j * j / r
            }
        })
        .collect();

    // Midpoint rule over one quadrant; the integrand is smooth and periodic.
    let dphi = (PI / 2.0) / PHI_POINTS as f64;
    let (mut nx, mut ny) = (0.0, 0.0);
    for k in 0..PHI_POINTS {
        let phi = (k as f64 + 0.5) * dphi;
        let (s, c) = phi.sin_cos();
        let g = c * c / (a * a) + s * s / (b * b);
        let f = radial_kernel(t * g.sqrt(), &table);
        nx += c * c / (a * a * g) * f;
        ny += s * s / (b * b * g) * f;
    }
    // four quadrants, 1/π prefactor
    nx *= 4.0 * dphi / PI;
    ny *= 4.0 * dphi / PI;
    [nx, ny, 1.0 - nx - ny]
}
