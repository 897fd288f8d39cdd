//! Far-field (Fourier-plane) and image-plane intensity of a path qubit.
//!
//! In the envelope coordinate `u = q a` the normalized Fourier-plane density
//! of a state `ρ` is
//!
//! ```text
//! I(x) dx = (1/π) sinc²(u) [ρ00 + ρ11 + 2V Re(ρ01 e^{iβu})] du,   β = 2d/a
//! ```
//!
//! so `I` integrates to the trace over the full line: the sinc² area is `π`
//! and its cosine transform vanishes for `β ≥ 2`. Half-line integrals have a
//! closed form, which is what lets windows reach to infinity without the
//! quadrature having to chase a `1/x²` tail.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::geometry::SlitGeometry;
use crate::quadrature::Quadrature;
use crate::qubit::MixedState;

/// Geometry plus a scalar fringe visibility `V ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternModel {
    pub geometry: SlitGeometry,
    pub visibility: f64,
}

impl PatternModel {
    pub fn new(geometry: SlitGeometry, visibility: f64) -> Result<Self> {
        let m = Self {
            geometry,
            visibility,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn ideal(geometry: SlitGeometry) -> Self {
        Self {
            geometry,
            visibility: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        if !(0.0..=1.0).contains(&self.visibility) {
            return Err(invalid(
                "visibility",
                format!("must lie in [0, 1], got {}", self.visibility),
            ));
        }
        Ok(())
    }

    pub fn with_visibility(&self, visibility: f64) -> Result<Self> {
        Self::new(self.geometry, visibility)
    }
}

impl Default for PatternModel {
    fn default() -> Self {
        Self::ideal(SlitGeometry::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntensitySample {
    #[serde(rename = "x_m")]
    pub x: f64,
    #[serde(rename = "intensity_per_m")]
    pub value: f64,
}

pub(crate) fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sin() / u
    }
}

/// Single-slit sinc² envelope, normalized to unit area over the focal plane.
/// Equal to the pattern of either slit alone, and to `(I₊ + I₋)/2`.
pub fn envelope(g: &SlitGeometry, x: f64) -> f64 {
    let norm = g.slit_width / (g.wavelength * g.focal_length);
    norm * sinc(g.envelope_arg(x)).powi(2)
}

/// Normalized Fourier-plane probability density at `x` (per meter).
pub fn fourier_intensity(state: &MixedState, model: &PatternModel, x: f64) -> f64 {
    let theta = model.geometry.fringe_phase(x);
    let coherence = state.rho01() * Complex64::from_polar(1.0, theta);
    let value =
        envelope(&model.geometry, x) * (state.trace() + 2.0 * model.visibility * coherence.re);
    value.max(0.0)
}

/// Integrals of `envelope`, `envelope·cos θ`, and `envelope·sin θ` over a
/// window of the focal plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WindowMoments {
    pub envelope: f64,
    pub cos: f64,
    pub sin: f64,
}

impl WindowMoments {
    /// `∫ envelope · e^{iθ}`
    pub fn phasor(&self) -> Complex64 {
        Complex64::new(self.cos, self.sin)
    }

    /// Probability of the window for state `ρ` under visibility `V`.
    pub fn probability(&self, state: &MixedState, visibility: f64) -> f64 {
        state.trace() * self.envelope + 2.0 * visibility * (state.rho01() * self.phasor()).re
    }
}

/// `∫₀^∞ sin²u · sin(βu) / u² du` for `β > 2`.
fn half_line_sine_moment(beta: f64) -> f64 {
    let t_ln_t = |t: f64| if t > 0.0 { t * t.ln() } else { 0.0 };
    0.25 * (t_ln_t(beta + 2.0) + t_ln_t((beta - 2.0).abs()) - 2.0 * t_ln_t(beta))
}

/// Moments over the half line `[0, ∞)`.
pub fn half_plane_moments(g: &SlitGeometry) -> WindowMoments {
    let beta = g.fringe_ratio();
    WindowMoments {
        envelope: 0.5,
        cos: 0.5 * (1.0 - 0.5 * beta).max(0.0),
        sin: half_line_sine_moment(beta) / PI,
    }
}

/// Splits `∫_{x1}^{x2}` into finite quadrature plus analytic half lines.
/// `finite` integrates over a finite interval; `half` is the value over
/// `[0, ∞)`, and `mirror` maps it to `(−∞, 0]`.
fn integrate_extended<const N: usize>(
    x1: f64,
    x2: f64,
    finite: impl Fn(f64, f64) -> Result<[f64; N]>,
    half: [f64; N],
    mirror: impl Fn([f64; N]) -> [f64; N],
) -> Result<[f64; N]> {
    if x1.is_nan() || x2.is_nan() || x2 < x1 {
        return Err(invalid("window", format!("invalid bounds [{x1}, {x2}]")));
    }
    if x1 == x2 {
        return Ok([0.0; N]);
    }
    let add = |a: [f64; N], b: [f64; N]| -> [f64; N] { std::array::from_fn(|k| a[k] + b[k]) };
    let sub = |a: [f64; N], b: [f64; N]| -> [f64; N] { std::array::from_fn(|k| a[k] - b[k]) };
    match (x1.is_finite(), x2.is_finite()) {
        (true, true) => finite(x1, x2),
        (false, true) => {
            if x1 > 0.0 {
                return Err(invalid("window", "lower bound is +∞"));
            }
            Ok(add(mirror(half), finite(0.0, x2)?))
        }
        (true, false) => {
            if x2 < 0.0 {
                return Err(invalid("window", "upper bound is −∞"));
            }
            Ok(sub(half, finite(0.0, x1)?))
        }
        (false, false) => Ok(add(mirror(half), half)),
    }
}

/// Envelope moments over `[x1, x2]`; either end may be infinite.
pub fn window_moments(g: &SlitGeometry, x1: f64, x2: f64) -> Result<WindowMoments> {
    let q = Quadrature::default();
    let h = half_plane_moments(g);
    let [envelope, cos, sin] = integrate_extended(
        x1,
        x2,
        |a, b| {
            q.integrate_vec(
                |x| {
                    let e = envelope(g, x);
                    let (s, c) = g.fringe_phase(x).sin_cos();
                    [e, e * c, e * s]
                },
                a,
                b,
            )
        },
        [h.envelope, h.cos, h.sin],
        |[e, c, s]| [e, c, -s],
    )?;
    Ok(WindowMoments { envelope, cos, sin })
}

/// `∫_{x1}^{x2} fourier_intensity dx`, evaluated by quadrature of the
/// intensity itself (not via moments); either end may be infinite.
pub fn integrate_intensity(
    state: &MixedState,
    model: &PatternModel,
    x1: f64,
    x2: f64,
) -> Result<f64> {
    let q = Quadrature::default();
    let h = half_plane_moments(&model.geometry);
    let coherence = 2.0 * model.visibility * state.rho01();
    let upper = state.trace() * h.envelope + (coherence * Complex64::new(h.cos, h.sin)).re;
    let lower = state.trace() * h.envelope + (coherence * Complex64::new(h.cos, -h.sin)).re;
    // (−∞, 0] is the mirror image of [0, ∞): the sine moment flips sign.
    let [v] = integrate_extended(
        x1,
        x2,
        |a, b| q.integrate_vec(|x| [fourier_intensity(state, model, x)], a, b),
        [upper],
        |_| [lower],
    )?;
    Ok(v)
}

/// Focal length at which the `|+⟩` and `|−⟩` patterns cross at `x_cross`,
/// i.e. where the fringe phase reaches `π/2`.
pub fn calibrate_focal_length(x_cross: f64, slit_separation: f64, wavelength: f64) -> Result<f64> {
    if !(x_cross.is_finite() && x_cross > 0.0) {
        return Err(invalid("x_cross", "must be positive"));
    }
    if !(slit_separation > 0.0 && wavelength > 0.0) {
        return Err(invalid(
            "geometry",
            "separation and wavelength must be positive",
        ));
    }
    Ok(4.0 * slit_separation * x_cross / wavelength)
}

/// First positive crossing of the constant and balanced patterns.
pub fn crossing_point(g: &SlitGeometry) -> f64 {
    g.wavelength * g.focal_length / (4.0 * g.slit_separation)
}

/// Image-plane density: two top-hat peaks, `|0⟩` at negative `x`, `|1⟩` at
/// positive `x`, each of width `slit_width · magnification`.
pub fn image_intensity(
    state: &MixedState,
    g: &SlitGeometry,
    magnification: f64,
    x: f64,
) -> Result<f64> {
    if !(magnification.is_finite() && magnification > 0.0) {
        return Err(invalid("magnification", "must be positive"));
    }
    let width = g.slit_width * magnification;
    let center = g.half_separation() * magnification;
    let inside = |c: f64| x >= c - 0.5 * width && x < c + 0.5 * width;
    let mut v = 0.0;
    if inside(-center) {
        v += state.rho00() / width;
    }
    if inside(center) {
        v += state.rho11() / width;
    }
    Ok(v)
}

fn grid(x_min: f64, x_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(x_min.is_finite() && x_max.is_finite()) || x_min >= x_max {
        return Err(Error::EmptyGrid);
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(invalid("step", "must be positive"));
    }
    let n = ((x_max - x_min) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| x_min + step * i as f64).collect())
}

/// Fourier-plane pattern on the uniform grid `x_min, x_min + step, … ≤ x_max`.
pub fn sample_pattern(
    state: &MixedState,
    model: &PatternModel,
    x_min: f64,
    x_max: f64,
    step: f64,
) -> Result<Vec<IntensitySample>> {
    model.validate()?;
    Ok(grid(x_min, x_max, step)?
        .into_iter()
        .map(|x| IntensitySample {
            x,
            value: fourier_intensity(state, model, x),
        })
        .collect())
}

/// Image-plane counterpart of [`sample_pattern`].
pub fn sample_image(
    state: &MixedState,
    g: &SlitGeometry,
    magnification: f64,
    x_min: f64,
    x_max: f64,
    step: f64,
) -> Result<Vec<IntensitySample>> {
    grid(x_min, x_max, step)?
        .into_iter()
        .map(|x| {
            Ok(IntensitySample {
                x,
                value: image_intensity(state, g, magnification, x)?,
            })
        })
        .collect()
}
