//! Heralded preparation of the signal qubit from the two-photon state
//! `|ψ⁺⟩ = (|0_s 1_i⟩ + |1_s 0_i⟩)/√2`.
//!
//! Detecting the idler at focal-plane position `x` leaves the signal in
//! `(|0⟩ + e^{iφ(x)}|1⟩)/√2` with `φ(x) = 2 q(x) d`, the same fringe phase
//! that shapes the one-photon pattern. A finite idler slit averages these
//! pure states with the idler's marginal intensity as weight.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::SlitGeometry;
use crate::optics::{envelope, sinc, window_moments, PatternModel, WindowMoments};
use crate::quadrature::Quadrature;
use crate::qubit::{oracle_unitary, DiagonalMap, MixedState, OracleFunction, QubitState};

/// Entrywise tolerance for the two orderings of oracle and herald.
pub const COMMUTATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BiphotonState {
    #[default]
    PsiPlus,
}

impl BiphotonState {
    /// Amplitudes `c[s][i]` on `|s⟩_signal ⊗ |i⟩_idler`.
    pub fn amplitudes(&self) -> [[Complex64; 2]; 2] {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        match self {
            BiphotonState::PsiPlus => [[z, h], [h, z]],
        }
    }
}

/// Idler detector aperture. `width == 0` is an ideal point detector;
/// `width == ∞` covers the whole plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeraldWindow {
    pub center: f64,
    pub width: f64,
}

impl HeraldWindow {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        let w = Self { center, width };
        w.validate()?;
        Ok(w)
    }

    pub fn point(center: f64) -> Self {
        Self { center, width: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center.is_finite() {
            return Err(invalid("herald.center", "must be finite"));
        }
        if self.width.is_nan() || self.width < 0.0 {
            return Err(invalid("herald.width", "must be non-negative"));
        }
        Ok(())
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

impl Default for HeraldWindow {
    fn default() -> Self {
        Self::point(0.0)
    }
}

/// Relative phase imprinted on the signal by an idler detection at `x_i`.
pub fn herald_phase(x_i: f64, g: &SlitGeometry) -> f64 {
    g.fringe_phase(x_i)
}

pub fn conditional_signal_state(x_i: f64, g: &SlitGeometry) -> QubitState {
    QubitState::with_relative_phase(herald_phase(x_i, g))
}

/// Relative envelope weight below which a window counts as dark; exact
/// envelope zeros evaluate to roughly `ε²` in floating point.
const DARK_WEIGHT: f64 = f64::EPSILON * f64::EPSILON;

fn mixed_from_moments(m: &WindowMoments, width: f64, peak: f64) -> Result<MixedState> {
    if !(m.envelope > DARK_WEIGHT * peak * width.min(1.0)) {
        return Err(Error::NoHeralds);
    }
    // ρ01 = ½ ⟨e^{−iφ}⟩ over the idler marginal.
    let rho01 = 0.5 * m.phasor().conj() / m.envelope;
    Ok(MixedState::from_entries_unchecked([
        [0.5.into(), rho01],
        [rho01.conj(), 0.5.into()],
    ]))
}

/// Signal state conditioned on an idler detection anywhere in `window`.
///
/// The idler marginal of `|ψ⁺⟩` is the fringe-free envelope, so the
/// populations stay at ½ and only the coherence shrinks as the window widens.
pub fn heralded_mixed_state(window: &HeraldWindow, model: &PatternModel) -> Result<MixedState> {
    window.validate()?;
    model.validate()?;
    let g = &model.geometry;
    if window.width == 0.0 {
        if !(envelope(g, window.center) > DARK_WEIGHT * envelope(g, 0.0)) {
            return Err(Error::NoHeralds);
        }
        return Ok(conditional_signal_state(window.center, g).density());
    }
    let (lo, hi) = window.bounds();
    mixed_from_moments(&window_moments(g, lo, hi)?, window.width, envelope(g, 0.0))
}

/// Idler position amplitudes `⟨x|0_i⟩`, `⟨x|1_i⟩`.
fn idler_amplitudes(g: &SlitGeometry, x: f64) -> [Complex64; 2] {
    let norm = (g.slit_width / (g.wavelength * g.focal_length)).sqrt();
    let s = norm * sinc(g.envelope_arg(x));
    let half_phase = 0.5 * g.fringe_phase(x);
    [
        Complex64::from_polar(s, half_phase),
        Complex64::from_polar(s, -half_phase),
    ]
}

/// Idler window operator `W_jk = ∫ ⟨j|x⟩⟨x|k⟩ dx` on the idler slit basis.
fn idler_window_operator(window: &HeraldWindow, g: &SlitGeometry) -> Result<[[Complex64; 2]; 2]> {
    if window.width == 0.0 {
        let a = idler_amplitudes(g, window.center);
        return Ok(std::array::from_fn(|j| {
            std::array::from_fn(|k| a[j].conj() * a[k])
        }));
    }
    let (lo, hi) = window.bounds();
    let [d, re, im] = if lo.is_finite() && hi.is_finite() {
        Quadrature::default().integrate_vec(
            |x| {
                let [a0, a1] = idler_amplitudes(g, x);
                let c = a0.conj() * a1;
                [a0.norm_sqr(), c.re, c.im]
            },
            lo,
            hi,
        )?
    } else {
        let m = window_moments(g, lo, hi)?;
        [m.envelope, m.cos, -m.sin]
    };
    let w01 = Complex64::new(re, im);
    Ok([[d.into(), w01], [w01.conj(), d.into()]])
}

/// Heralds after the oracle has acted on the signal half of the pair:
/// `Tr_i[(1 ⊗ W) (U ⊗ 1)|ψ⁺⟩⟨ψ⁺|(U ⊗ 1)†]`, normalized.
pub fn herald_after_oracle(
    u: &DiagonalMap,
    window: &HeraldWindow,
    model: &PatternModel,
) -> Result<MixedState> {
    window.validate()?;
    let c = BiphotonState::PsiPlus.amplitudes();
    let diag = [u.m0(), u.m1()];
    let c: [[Complex64; 2]; 2] =
        std::array::from_fn(|s| std::array::from_fn(|i| diag[s] * c[s][i]));
    let w = idler_window_operator(window, &model.geometry)?;

    let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (a, row) in rho.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            for j in 0..2 {
                for k in 0..2 {
                    *entry += c[a][j] * c[b][k].conj() * w[k][j];
                }
            }
        }
    }
    let norm = rho[0][0].re + rho[1][1].re;
    if !(norm > 0.0) {
        return Err(Error::NoHeralds);
    }
    Ok(MixedState::from_entries_unchecked(
        rho.map(|r| r.map(|z| z / norm)),
    ))
}

/// Checks that applying the oracle before or after the idler detection
/// yields the same signal state, entrywise within [`COMMUTATION_TOL`].
pub fn verify_commutation(
    f: OracleFunction,
    window: &HeraldWindow,
    model: &PatternModel,
) -> Result<bool> {
    let u = oracle_unitary(f);
    let (herald_first, _) = u.apply_mixed(&heralded_mixed_state(window, model)?)?;
    let oracle_first = herald_after_oracle(&u, window, model)?;
    Ok(herald_first.max_entry_distance(&oracle_first) <= COMMUTATION_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DEFAULT_CROSSING;
    use crate::qubit::ALGEBRA_TOL;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn herald_phase_cases() {
        let g = SlitGeometry::default();
        assert_eq!(herald_phase(0.0, &g), 0.0);
        assert!((herald_phase(DEFAULT_CROSSING, &g) - FRAC_PI_2).abs() < 1e-12);
        for x in [1e-6, 3.3e-5, 2e-4, 1.7e-3] {
            assert_eq!(herald_phase(-x, &g), -herald_phase(x, &g));
        }
    }

    #[test]
    fn conditional_states() {
        let g = SlitGeometry::default();
        assert!(conditional_signal_state(0.0, &g).same_ray(&QubitState::plus(), ALGEBRA_TOL));
        let y = QubitState::new(
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
        )
        .unwrap();
        assert!(conditional_signal_state(DEFAULT_CROSSING, &g).same_ray(&y, 1e-12));
        let half_period = 0.5 * g.fringe_period();
        assert!(conditional_signal_state(half_period, &g).same_ray(&QubitState::minus(), 1e-12));
        for x in [-4e-4, 1e-5, 9e-4] {
            let s = conditional_signal_state(x, &g);
            assert!((s.alpha().norm() - s.beta().norm()).abs() < 1e-15);
        }
        assert!((herald_phase(half_period, &g) - PI).abs() < 1e-12);
    }

    #[test]
    fn point_window_is_pure() {
        let m = PatternModel::default();
        let rho = heralded_mixed_state(&HeraldWindow::point(0.0), &m).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!((rho.expectation(&QubitState::plus()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn point_window_on_dark_envelope_has_no_heralds() {
        let m = PatternModel::default();
        let zero = m.geometry.envelope_half_width();
        assert_eq!(
            heralded_mixed_state(&HeraldWindow::point(zero), &m),
            Err(Error::NoHeralds)
        );
    }

    #[test]
    fn full_plane_window_is_strictly_mixed() {
        let m = PatternModel::default();
        let w = HeraldWindow::new(0.0, f64::INFINITY).unwrap();
        let rho = heralded_mixed_state(&w, &m).unwrap();
        assert!(rho.rho01().norm() < 0.5);
        assert!(rho.purity() < 1.0 - 1e-3);
        rho.validate().unwrap();
    }

    #[test]
    fn commutation_trivial_cases() {
        let m = PatternModel::default();
        for w in [
            HeraldWindow::point(0.0),
            HeraldWindow::new(3e-5, 1e-4).unwrap(),
            HeraldWindow::new(0.0, f64::INFINITY).unwrap(),
        ] {
            for f in OracleFunction::ALL {
                assert!(verify_commutation(f, &w, &m).unwrap(), "{f} {w:?}");
            }
        }
    }

    #[test]
    fn rejects_negative_width() {
        assert!(HeraldWindow::new(0.0, -1e-6).is_err());
    }
}
