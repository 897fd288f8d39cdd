//! Physical double-slit parameters and the far-field coordinate maps.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Result};

pub const DEFAULT_SLIT_WIDTH: f64 = 100e-6;
pub const DEFAULT_SLIT_SEPARATION: f64 = 250e-6;
pub const DEFAULT_WAVELENGTH: f64 = 650e-9;
/// Position where the `|+⟩` and `|−⟩` fringes cross in the default setup.
pub const DEFAULT_CROSSING: f64 = 0.11e-3;

/// Double slit seen through a Fourier-transforming lens. All lengths in
/// meters; `slit_separation` is center-to-center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlitGeometry {
    pub slit_width: f64,
    pub slit_separation: f64,
    pub wavelength: f64,
    pub focal_length: f64,
}

impl Default for SlitGeometry {
    /// 100 µm slits, 250 µm apart, 650 nm light, focal length calibrated so
    /// the constant/balanced fringes cross at 0.11 mm.
    fn default() -> Self {
        Self {
            slit_width: DEFAULT_SLIT_WIDTH,
            slit_separation: DEFAULT_SLIT_SEPARATION,
            wavelength: DEFAULT_WAVELENGTH,
            focal_length: crate::optics::calibrate_focal_length(
                DEFAULT_CROSSING,
                DEFAULT_SLIT_SEPARATION,
                DEFAULT_WAVELENGTH,
            )
            .expect("default crossing is positive"),
        }
    }
}

impl SlitGeometry {
    pub fn new(
        slit_width: f64,
        slit_separation: f64,
        wavelength: f64,
        focal_length: f64,
    ) -> Result<Self> {
        let g = Self {
            slit_width,
            slit_separation,
            wavelength,
            focal_length,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("slit_width", self.slit_width),
            ("slit_separation", self.slit_separation),
            ("wavelength", self.wavelength),
            ("focal_length", self.focal_length),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(
                    name,
                    format!("must be positive and finite, got {v}"),
                ));
            }
        }
        if self.slit_separation <= self.slit_width {
            return Err(invalid(
                "slit_separation",
                "must exceed slit_width (slits would overlap)",
            ));
        }
        Ok(())
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.slit_width
    }

    pub fn half_separation(&self) -> f64 {
        0.5 * self.slit_separation
    }

    /// Transverse wavenumber `q = 2πx / (λ f)` at focal-plane position `x`.
    pub fn wavenumber(&self, x: f64) -> f64 {
        2.0 * PI * x / (self.wavelength * self.focal_length)
    }

    /// Dimensionless envelope coordinate `u = q · a`, with `a` the slit half width.
    pub fn envelope_arg(&self, x: f64) -> f64 {
        self.wavenumber(x) * self.half_width()
    }

    /// Relative phase between the two slit waves at `x`: `θ = 2 q d`.
    pub fn fringe_phase(&self, x: f64) -> f64 {
        self.wavenumber(x) * self.slit_separation
    }

    /// Ratio `θ / u = 2d / a`; strictly above 2 for non-overlapping slits.
    pub fn fringe_ratio(&self) -> f64 {
        2.0 * self.slit_separation / self.slit_width
    }

    /// Distance between adjacent bright fringes in the focal plane.
    pub fn fringe_period(&self) -> f64 {
        self.wavelength * self.focal_length / self.slit_separation
    }

    /// Distance from the center to the first envelope zero.
    pub fn envelope_half_width(&self) -> f64 {
        self.wavelength * self.focal_length / self.slit_width
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_focal_length() {
        let g = SlitGeometry::default();
        assert!((g.focal_length - 0.169_230_769_230_769_23).abs() < 1e-15);
        assert!((g.fringe_phase(DEFAULT_CROSSING) - PI / 2.0).abs() < 1e-12);
        assert!(g.fringe_ratio() > 2.0);
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(SlitGeometry::new(100e-6, 90e-6, 650e-9, 0.1).is_err());
        assert!(SlitGeometry::new(0.0, 250e-6, 650e-9, 0.1).is_err());
        assert!(SlitGeometry::new(100e-6, 250e-6, f64::NAN, 0.1).is_err());
        assert!(SlitGeometry::new(100e-6, 250e-6, 650e-9, -1.0).is_err());
    }
}
