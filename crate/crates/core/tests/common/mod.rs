//! Test-only oracles. Nothing here calls into the crate's quadrature or
//! pattern code: integrals use composite Gauss-Legendre, and the far-field
//! intensity is written out from the double-slit formula directly.

#![allow(dead_code)]

use std::f64::consts::PI;

pub const SLIT_WIDTH: f64 = 100e-6;
pub const SLIT_SEPARATION: f64 = 250e-6;
pub const WAVELENGTH: f64 = 650e-9;
pub const CROSSING: f64 = 0.11e-3;
/// `8 · (separation/2) · crossing / λ`
pub const FOCAL_LENGTH: f64 = 8.0 * 125e-6 * 0.11e-3 / 650e-9;

// Reference values computed offline with 30-digit mpmath quadrature of the
// same model (default geometry, η = 1).
pub const P_C_100UM: f64 = 0.173_907_765_353_543_22;
pub const P_B_100UM: f64 = 0.007_499_133_366_544_068_8;
pub const P_C_10UM: f64 = 0.018_173_684_371_945_233;
pub const P_B_10UM: f64 = 7.721_862_156_277_597_3e-6;
pub const P_C_220UM: f64 = 0.324_358_777_196_772_58;
pub const P_B_220UM: f64 = 0.071_289_192_493_665_288;
pub const V_FOR_055_AT_100UM: f64 = 0.600_930_365_245_792_08;
pub const P_OPT_CALIBRATED: f64 = 0.576_038_598_984_119_59;
pub const V_TABLE: f64 = 0.917_031_710_486_340_25;
pub const HERALD_RATE_TABLE: f64 = 31.244_677_242_103_027;
pub const PURITY_100UM_HERALD: f64 = 0.920_740_295_303_463_02;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite 20-point Gauss-Legendre on `panels` equal panels.
pub fn gl_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre(20);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = a + h * (p as f64 + 0.5);
            rule.iter()
                .map(|&(x, w)| w * f(mid + 0.5 * h * x))
                .sum::<f64>()
                * 0.5
                * h
        })
        .sum()
}

/// Amplitudes of the two slit waves summed at focal-plane position `x`, as
/// a normalized probability density for a pure state `(α, β)` (real
/// parameterization: `β = |β| e^{iφ}` relative to real `α`) and visibility
/// `v` applied to the interference term.
pub fn intensity(alpha: f64, beta_mag: f64, beta_phase: f64, v: f64, x: f64) -> f64 {
    let q = 2.0 * PI * x / (WAVELENGTH * FOCAL_LENGTH);
    let u = q * SLIT_WIDTH / 2.0;
    let sinc2 = if u == 0.0 { 1.0 } else { (u.sin() / u).powi(2) };
    // Slit 0 sits at −d/2, slit 1 at +d/2: relative phase q·d between them.
    let cross = 2.0 * alpha * beta_mag * (q * SLIT_SEPARATION - beta_phase).cos();
    let norm = SLIT_WIDTH / (WAVELENGTH * FOCAL_LENGTH);
    norm * sinc2 * (alpha * alpha + beta_mag * beta_mag + v * cross)
}

pub fn window(alpha: f64, beta_mag: f64, beta_phase: f64, v: f64, lo: f64, hi: f64) -> f64 {
    let panels = (((hi - lo) / 2e-6).ceil() as usize).max(8);
    gl_integrate(
        |x| intensity(alpha, beta_mag, beta_phase, v, x),
        lo,
        hi,
        panels,
    )
}

pub fn plus_window(v: f64, width: f64) -> f64 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    window(h, h, 0.0, v, -0.5 * width, 0.5 * width)
}

pub fn minus_window(v: f64, width: f64) -> f64 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    window(h, h, PI, v, -0.5 * width, 0.5 * width)
}
