//! Finite-width, finite-efficiency detector in the Fourier plane.
//!
//! A point detector at the origin measures an operator proportional to
//! `|+⟩⟨+|`; an open slit of width `w` measures the integral of the local
//! kernels across the slit, which is a positive operator but no longer a
//! projector.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::optics::{integrate_intensity, window_moments, PatternModel};
use crate::qubit::{deutsch_output, hermitian_eigenvalues, MixedState, OracleFunction};

pub const DEFAULT_DETECTOR_WIDTH: f64 = 100e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorConfig {
    pub center: f64,
    pub width: f64,
    pub efficiency: f64,
}

impl DetectorConfig {
    pub fn new(center: f64, width: f64, efficiency: f64) -> Result<Self> {
        let d = Self {
            center,
            width,
            efficiency,
        };
        d.validate()?;
        Ok(d)
    }

    /// Detector covering the whole focal plane.
    pub fn full_plane(efficiency: f64) -> Result<Self> {
        Self::new(0.0, f64::INFINITY, efficiency)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center.is_finite() {
            return Err(invalid("detector.center", "must be finite"));
        }
        if self.width.is_nan() || self.width < 0.0 {
            return Err(invalid("detector.width", "must be non-negative"));
        }
        if !(0.0..=1.0).contains(&self.efficiency) {
            return Err(invalid(
                "detector.efficiency",
                format!("must lie in [0, 1], got {}", self.efficiency),
            ));
        }
        Ok(())
    }

    pub fn with_width(&self, width: f64) -> Result<Self> {
        Self::new(self.center, width, self.efficiency)
    }

    pub fn with_efficiency(&self, efficiency: f64) -> Result<Self> {
        Self::new(self.center, self.width, efficiency)
    }

    pub fn bounds(&self) -> (f64, f64) {
        if self.width.is_infinite() {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else {
            (
                self.center - 0.5 * self.width,
                self.center + 0.5 * self.width,
            )
        }
    }
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            center: 0.0,
            width: DEFAULT_DETECTOR_WIDTH,
            efficiency: 1.0,
        }
    }
}

/// Hermitian 2×2 effect operator, `e[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PovmElement {
    pub e: [[Complex64; 2]; 2],
}

impl PovmElement {
    /// `Tr(E ρ)`
    pub fn probability(&self, state: &MixedState) -> f64 {
        let rho = state.entries();
        let mut t = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                t += self.e[i][j] * rho[j][i];
            }
        }
        t.re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        hermitian_eigenvalues(self.e[0][0].re, self.e[0][1], self.e[1][1].re)
    }

    pub fn is_effect(&self, tol: f64) -> bool {
        let (lo, hi) = self.eigenvalues();
        let hermitian = (self.e[1][0] - self.e[0][1].conj()).norm() <= tol
            && self.e[0][0].im.abs() <= tol
            && self.e[1][1].im.abs() <= tol;
        hermitian && lo >= -tol && hi <= 1.0 + tol
    }
}

/// Detection probabilities per oracle, plus the constant and balanced means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTable {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
    pub p_c: f64,
    pub p_b: f64,
}

impl ProbabilityTable {
    pub fn new(p00: f64, p01: f64, p10: f64, p11: f64) -> Result<Self> {
        for (name, p) in [("p00", p00), ("p01", p01), ("p10", p10), ("p11", p11)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(name, format!("probability {p} outside [0, 1]")));
            }
        }
        Ok(Self {
            p00,
            p01,
            p10,
            p11,
            p_c: 0.5 * (p00 + p11),
            p_b: 0.5 * (p01 + p10),
        })
    }

    /// Table with `p00 = p11 = p_c` and `p01 = p10 = p_b`.
    pub fn symmetric(p_c: f64, p_b: f64) -> Result<Self> {
        Self::new(p_c, p_b, p_b, p_c)
    }

    pub fn get(&self, f: OracleFunction) -> f64 {
        match (f.f0, f.f1) {
            (false, false) => self.p00,
            (false, true) => self.p01,
            (true, false) => self.p10,
            (true, true) => self.p11,
        }
    }
}

/// `η ∫_window I(x) dx`
pub fn window_probability(
    state: &MixedState,
    model: &PatternModel,
    det: &DetectorConfig,
) -> Result<f64> {
    det.validate()?;
    if det.width == 0.0 || det.efficiency == 0.0 {
        return Ok(0.0);
    }
    let (lo, hi) = det.bounds();
    let p = integrate_intensity(state, model, lo, hi)?;
    Ok((det.efficiency * p).clamp(0.0, 1.0))
}

/// Effect operator `E` with `Tr(E ρ) = window_probability(ρ)` for every `ρ`.
pub fn povm_element(model: &PatternModel, det: &DetectorConfig) -> Result<PovmElement> {
    det.validate()?;
    model.validate()?;
    let zero = Complex64::new(0.0, 0.0);
    if det.width == 0.0 {
        return Ok(PovmElement { e: [[zero; 2]; 2] });
    }
    let (lo, hi) = det.bounds();
    let m = window_moments(&model.geometry, lo, hi)?;
    let eta = det.efficiency;
    let diag = Complex64::new(eta * m.envelope, 0.0);
    let lower = eta * model.visibility * m.phasor();
    Ok(PovmElement {
        e: [[diag, lower.conj()], [lower, diag]],
    })
}

/// Effect operator of an infinitesimal detector at `center`, per unit width.
pub fn point_povm_density(model: &PatternModel, center: f64) -> PovmElement {
    let g = &model.geometry;
    let env = crate::optics::envelope(g, center);
    let diag = Complex64::new(env, 0.0);
    let lower = model.visibility * Complex64::from_polar(env, g.fringe_phase(center));
    PovmElement {
        e: [[diag, lower.conj()], [lower, diag]],
    }
}

/// Detection probability for each of the four oracle outputs.
pub fn detection_probabilities(
    model: &PatternModel,
    det: &DetectorConfig,
) -> Result<ProbabilityTable> {
    let p = |f: OracleFunction| window_probability(&deutsch_output(f).density(), model, det);
    let [f00, f01, f10, f11] = OracleFunction::ALL;
    ProbabilityTable::new(p(f00)?, p(f01)?, p(f10)?, p(f11)?)
}
