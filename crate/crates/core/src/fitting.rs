//! Least-squares recovery of fringe parameters from sampled patterns.
//!
//! Two scans taken on the same setup, a reference and one with an extra
//! relative phase, are fitted jointly to
//!
//! ```text
//! y_k(x) = A · sinc²(u(x − x₀)) · (1 + V cos(θ(x − x₀) + φ_k)),   φ_ref = 0
//! ```
//!
//! with the envelope width and fringe period fixed by the slit geometry.
//! The phase is seeded on a 64-point grid (amplitude and `A·V` are linear
//! given the phase), then all four parameters are refined by damped
//! Gauss-Newton.

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{invalid, Error, Result};
use crate::geometry::SlitGeometry;
use crate::optics::{sinc, IntensitySample};

const PHASE_SEEDS: usize = 64;
const MAX_ITERATIONS: usize = 200;
const STEP_TOL: f64 = 1e-10;
const MIN_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub amplitude: f64,
    pub visibility: f64,
    /// Phase of the shifted pattern relative to the reference, in `[0, 2π)`.
    pub delta_phi: f64,
    pub center_offset: f64,
    pub residual_rms: f64,
}

/// `(d/du) sinc²(u)`
fn sinc_sq_prime(u: f64) -> f64 {
    let d_sinc = if u.abs() < 1e-4 {
        -u / 3.0 + u * u * u / 30.0
    } else {
        (u * u.cos() - u.sin()) / (u * u)
    };
    2.0 * sinc(u) * d_sinc
}

struct Problem<'a> {
    reference: &'a [IntensitySample],
    shifted: &'a [IntensitySample],
    /// `du/dx` and `dθ/dx`
    k_env: f64,
    k_fringe: f64,
    period: f64,
}

/// Parameters: amplitude, visibility, offset in fringe periods, phase.
type Params = Vector4<f64>;

impl Problem<'_> {
    fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.reference
            .iter()
            .map(|s| (s.x, s.value, 0.0))
            .chain(self.shifted.iter().map(|s| (s.x, s.value, 1.0)))
    }

    fn len(&self) -> usize {
        self.reference.len() + self.shifted.len()
    }

    /// Model value and gradient at one sample; `which` is 0 for the
    /// reference and 1 for the shifted scan.
    fn eval(&self, p: &Params, x: f64, which: f64) -> (f64, Vector4<f64>) {
        let (a, v, s, dphi) = (p[0], p[1], p[2], p[3]);
        let t = x - s * self.period;
        let u = self.k_env * t;
        let env = sinc(u).powi(2);
        let (sin_f, cos_f) = (self.k_fringe * t + which * dphi).sin_cos();
        let fringe = 1.0 + v * cos_f;
        let y = a * env * fringe;
        // d/dx0 of env and fringe, then scaled to offset in periods.
        let d_env = -sinc_sq_prime(u) * self.k_env;
        let d_fringe = v * sin_f * self.k_fringe;
        let grad = Vector4::new(
            env * fringe,
            a * env * cos_f,
            a * (d_env * fringe + env * d_fringe) * self.period,
            -which * a * env * v * sin_f,
        );
        (y, grad)
    }

    fn ssr(&self, p: &Params) -> f64 {
        self.points()
            .map(|(x, y, w)| (self.eval(p, x, w).0 - y).powi(2))
            .sum()
    }

    /// Best `(A, A·V)` for fixed offset and phase, by linear least squares.
    fn linear_seed(&self, s: f64, dphi: f64) -> Option<(Params, f64)> {
        let (mut s11, mut s12, mut s22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (x, y, w) in self.points() {
            let t = x - s * self.period;
            let env = sinc(self.k_env * t).powi(2);
            let c = env * (self.k_fringe * t + w * dphi).cos();
            s11 += env * env;
            s12 += env * c;
            s22 += c * c;
            b1 += env * y;
            b2 += c * y;
        }
        let det = s11 * s22 - s12 * s12;
        if det.abs() <= f64::EPSILON * s11 * s22 {
            return None;
        }
        let a = (b1 * s22 - b2 * s12) / det;
        let av = (s11 * b2 - s12 * b1) / det;
        if !(a > 0.0) {
            return None;
        }
        let p = Params::new(a, (av / a).clamp(0.0, 1.0), s, dphi);
        Some((p, self.ssr(&p)))
    }

    fn refine(&self, mut p: Params) -> Result<Params> {
        let mut cost = self.ssr(&p);
        let mut lambda = 1e-3;
        for _ in 0..MAX_ITERATIONS {
            let mut jtj = Matrix4::<f64>::zeros();
            let mut jtr = Vector4::<f64>::zeros();
            for (x, y, w) in self.points() {
                let (m, g) = self.eval(&p, x, w);
                jtj += g * g.transpose();
                jtr += g * (m - y);
            }
            let mut accepted = false;
            for _ in 0..40 {
                let mut damped = jtj;
                for i in 0..4 {
                    damped[(i, i)] += lambda * jtj[(i, i)].max(1e-300);
                }
                let Some(step) = damped.cholesky().map(|c| c.solve(&(-jtr))) else {
                    lambda *= 10.0;
                    continue;
                };
                let mut next = p + step;
                next[1] = next[1].clamp(0.0, 1.0);
                let next_cost = self.ssr(&next);
                if next_cost <= cost {
                    let scaled = Vector4::new(
                        (next[0] - p[0]) / p[0].abs().max(f64::MIN_POSITIVE),
                        next[1] - p[1],
                        next[2] - p[2],
                        next[3] - p[3],
                    );
                    p = next;
                    cost = next_cost;
                    lambda = (lambda / 3.0).max(1e-12);
                    accepted = true;
                    if scaled.amax() < STEP_TOL {
                        return Ok(p);
                    }
                    break;
                }
                lambda *= 4.0;
            }
            if !accepted {
                // No descent direction left: already at the minimum to
                // working precision.
                return Ok(p);
            }
        }
        Err(Error::FitFailed(format!(
            "no convergence after {MAX_ITERATIONS} iterations"
        )))
    }
}

fn check_samples(name: &'static str, s: &[IntensitySample], period: f64) -> Result<()> {
    if s.len() < MIN_SAMPLES {
        return Err(invalid(
            name,
            format!("need at least {MIN_SAMPLES} samples"),
        ));
    }
    if s.iter().any(|p| !(p.x.is_finite() && p.value.is_finite())) {
        return Err(invalid(name, "non-finite sample"));
    }
    let (lo, hi) = s
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.x), hi.max(p.x))
        });
    if hi - lo < period {
        return Err(invalid(
            name,
            "samples must span at least one fringe period",
        ));
    }
    Ok(())
}

/// Jointly fits a reference scan and a phase-shifted scan.
pub fn fit_pattern_pair(
    reference: &[IntensitySample],
    shifted: &[IntensitySample],
    g: &SlitGeometry,
) -> Result<FitResult> {
    g.validate()?;
    let period = g.fringe_period();
    check_samples("reference", reference, period)?;
    check_samples("shifted", shifted, period)?;
    let first = reference[0].value;
    if reference
        .iter()
        .chain(shifted)
        .all(|s| (s.value - first).abs() <= f64::EPSILON * first.abs())
    {
        return Err(Error::NoFringes);
    }

    let problem = Problem {
        reference,
        shifted,
        k_env: 2.0 * PI * g.half_width() / (g.wavelength * g.focal_length),
        k_fringe: 2.0 * PI * g.slit_separation / (g.wavelength * g.focal_length),
        period,
    };

    // Offset seed: centroid of the reference scan, whose fringes are even
    // about the true center.
    let (mut w, mut wx) = (0.0, 0.0);
    for s in reference {
        w += s.value.max(0.0);
        wx += s.value.max(0.0) * s.x;
    }
    if !(w > 0.0) {
        return Err(Error::NoFringes);
    }
    let s0 = wx / w / period;

    let seed = (0..PHASE_SEEDS)
        .filter_map(|i| problem.linear_seed(s0, TAU * i as f64 / PHASE_SEEDS as f64))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(p, _)| p)
        .ok_or(Error::NoFringes)?;

    let p = problem.refine(seed)?;
    let residual_rms = (problem.ssr(&p) / problem.len() as f64).sqrt();
    // rem_euclid rounds tiny negative phases up to exactly 2π.
    let mut delta_phi = p[3].rem_euclid(TAU);
    if delta_phi >= TAU {
        delta_phi = 0.0;
    }
    Ok(FitResult {
        amplitude: p[0],
        visibility: p[1],
        delta_phi,
        center_offset: p[2] * period,
        residual_rms,
    })
}

/// Trapezoidal areas left and right of `boundary`. The segment straddling
/// the boundary is split at the linearly interpolated value, so the two
/// areas always add up to the trapezoid integral of the whole scan.
pub fn peak_areas(samples: &[IntensitySample], boundary: f64) -> Result<(f64, f64)> {
    let mut s: Vec<IntensitySample> = samples.to_vec();
    s.sort_by(|a, b| a.x.total_cmp(&b.x));
    let left = s.iter().filter(|p| p.x < boundary).count();
    if left == 0 || left == s.len() {
        return Err(invalid(
            "boundary",
            "one side of the boundary has no samples",
        ));
    }
    let (mut neg, mut pos) = (0.0, 0.0);
    for pair in s.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let whole = 0.5 * (a.value + b.value) * (b.x - a.x);
        if b.x <= boundary {
            neg += whole;
        } else if a.x >= boundary {
            pos += whole;
        } else {
            let t = (boundary - a.x) / (b.x - a.x);
            let mid = a.value + t * (b.value - a.value);
            let l = 0.5 * (a.value + mid) * (boundary - a.x);
            neg += l;
            pos += whole - l;
        }
    }
    Ok((neg, pos))
}

/// Trapezoid integral of the whole scan.
pub fn trapezoid(samples: &[IntensitySample]) -> f64 {
    let mut s: Vec<IntensitySample> = samples.to_vec();
    s.sort_by(|a, b| a.x.total_cmp(&b.x));
    s.windows(2)
        .map(|p| 0.5 * (p[0].value + p[1].value) * (p[1].x - p[0].x))
        .sum()
}
