//! TOML experiment configuration. Every section has defaults reproducing the
//! tabletop setup, so an empty file (or no file) is a valid config.

use deutsch_slit::biphoton::HeraldWindow;
use deutsch_slit::detection::DetectorConfig;
use deutsch_slit::geometry::{
    DEFAULT_CROSSING, DEFAULT_SLIT_SEPARATION, DEFAULT_SLIT_WIDTH, DEFAULT_WAVELENGTH,
};
use deutsch_slit::inference::DEFAULT_SCAN_STEP;
use deutsch_slit::montecarlo::DEFAULT_DURATION;
use deutsch_slit::optics::calibrate_focal_length;
use deutsch_slit::{PatternModel, SlitGeometry};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: Option<u64>,
    /// Fixed fringe visibility. When absent it is calibrated so the
    /// configured detector reaches `calibration.target_p_success`.
    pub visibility: Option<f64>,
    pub geometry: GeometryConfig,
    pub detector: DetectorSection,
    pub herald: HeraldSection,
    pub monte_carlo: MonteCarloConfig,
    pub scan: ScanConfig,
    pub pattern: PatternConfig,
    pub calibration: CalibrationConfig,
}

/// Exactly one of `focal_length` and `crossing_point` may be given; with
/// neither the focal length is calibrated from the default crossing point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    pub slit_width: f64,
    pub slit_separation: f64,
    pub wavelength: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub focal_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossing_point: Option<f64>,
}

/// Signal detector slit. Lengths in meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorSection {
    pub center: f64,
    pub width: f64,
    pub efficiency: f64,
}

/// Idler window used to herald the signal photon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeraldSection {
    pub center: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MonteCarloConfig {
    /// Heralded photons per second. When absent, `table` calibrates both
    /// rate and visibility from `calibration.table_*` counts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub herald_rate: Option<f64>,
    pub duration: f64,
    pub trials: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub width_min: f64,
    pub width_max: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PatternConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub step: f64,
    pub magnification: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationConfig {
    pub target_p_success: f64,
    pub table_constant: u64,
    pub table_balanced: u64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            slit_width: DEFAULT_SLIT_WIDTH,
            slit_separation: DEFAULT_SLIT_SEPARATION,
            wavelength: DEFAULT_WAVELENGTH,
            focal_length: None,
            crossing_point: None,
        }
    }
}

impl Default for DetectorSection {
    fn default() -> Self {
        let d = DetectorConfig::default();
        Self {
            center: d.center,
            width: d.width,
            efficiency: d.efficiency,
        }
    }
}

impl Default for HeraldSection {
    fn default() -> Self {
        Self {
            center: 0.0,
            width: 100e-6,
        }
    }
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        Self {
            herald_rate: None,
            duration: DEFAULT_DURATION,
            trials: 1_000_000,
        }
    }
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            width_min: DEFAULT_SCAN_STEP,
            width_max: 1e-3,
            step: DEFAULT_SCAN_STEP,
        }
    }
}

impl Default for PatternConfig {
    fn default() -> Self {
        Self {
            x_min: -1e-3,
            x_max: 1e-3,
            step: 40e-6,
            magnification: 1.0,
        }
    }
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self {
            target_p_success: 0.55,
            table_constant: 5218,
            table_balanced: 450,
        }
    }
}

impl GeometryConfig {
    pub fn resolve(&self) -> Result<SlitGeometry, CliError> {
        let focal_length = match (self.focal_length, self.crossing_point) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "geometry: give focal_length or crossing_point, not both".into(),
                ))
            }
            (Some(f), None) => f,
            (None, x) => calibrate_focal_length(
                x.unwrap_or(DEFAULT_CROSSING),
                self.slit_separation,
                self.wavelength,
            )?,
        };
        Ok(SlitGeometry::new(
            self.slit_width,
            self.slit_separation,
            self.wavelength,
            focal_length,
        )?)
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Re-runs every module-level check.
    pub fn validate(&self) -> Result<(), CliError> {
        let g = self.geometry.resolve()?;
        if let Some(v) = self.visibility {
            PatternModel::new(g, v)?;
        }
        self.detector()?;
        self.herald()?;
        let mc = &self.monte_carlo;
        if let Some(r) = mc.herald_rate {
            if !(r.is_finite() && r >= 0.0) {
                return Err(CliError::Config(
                    "monte_carlo.herald_rate must be non-negative".into(),
                ));
            }
        }
        if !(mc.duration.is_finite() && mc.duration > 0.0) {
            return Err(CliError::Config(
                "monte_carlo.duration must be positive".into(),
            ));
        }
        if mc.trials == 0 {
            return Err(CliError::Config(
                "monte_carlo.trials must be positive".into(),
            ));
        }
        let s = &self.scan;
        if !(s.width_min >= 0.0 && s.width_max > s.width_min && s.step > 0.0) {
            return Err(CliError::Config(
                "scan: need 0 ≤ width_min < width_max and step > 0".into(),
            ));
        }
        let p = &self.pattern;
        if !(p.x_max > p.x_min && p.step > 0.0 && p.magnification > 0.0) {
            return Err(CliError::Config(
                "pattern: need x_min < x_max, step > 0 and magnification > 0".into(),
            ));
        }
        let c = &self.calibration;
        if !(0.5..=1.0).contains(&c.target_p_success) {
            return Err(CliError::Config(
                "calibration.target_p_success must lie in [0.5, 1]".into(),
            ));
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<SlitGeometry, CliError> {
        self.geometry.resolve()
    }

    pub fn detector(&self) -> Result<DetectorConfig, CliError> {
        let d = &self.detector;
        Ok(DetectorConfig::new(d.center, d.width, d.efficiency)?)
    }

    pub fn herald(&self) -> Result<HeraldWindow, CliError> {
        Ok(HeraldWindow::new(self.herald.center, self.herald.width)?)
    }

    /// Pattern model with the fixed or calibrated visibility.
    pub fn model(&self) -> Result<PatternModel, CliError> {
        let ideal = PatternModel::ideal(self.geometry()?);
        let v = match self.visibility {
            Some(v) => v,
            None => deutsch_slit::inference::calibrate_visibility(
                &ideal,
                &self.detector()?,
                self.detector.efficiency,
                self.calibration.target_p_success,
            )?,
        };
        Ok(ideal.with_visibility(v)?)
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or(CliError::MissingSeed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_default() {
        assert_eq!(
            ExperimentConfig::from_toml("").unwrap(),
            ExperimentConfig::default()
        );
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = ExperimentConfig::from_toml("[detector]\nwidht = 1e-4\n").unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
        assert!(ExperimentConfig::from_toml("colour = 1\n").is_err());
    }

    #[test]
    fn dump_round_trips() {
        let cfg = ExperimentConfig {
            seed: Some(9),
            visibility: Some(0.6009303652457921),
            geometry: GeometryConfig {
                crossing_point: Some(0.12e-3),
                ..GeometryConfig::default()
            },
            ..ExperimentConfig::default()
        };
        let again = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn module_invariants_rechecked() {
        assert!(ExperimentConfig::from_toml("visibility = 1.5\n").is_err());
        assert!(ExperimentConfig::from_toml("[detector]\nefficiency = 2.0\n").is_err());
        assert!(ExperimentConfig::from_toml("[geometry]\nslit_separation = 50e-6\n").is_err());
        assert!(ExperimentConfig::from_toml(
            "[geometry]\nfocal_length = 0.2\ncrossing_point = 1e-4\n"
        )
        .is_err());
    }

    #[test]
    fn default_model_is_calibrated() {
        let m = ExperimentConfig::default().model().unwrap();
        assert!((m.visibility - 0.60093036524579208).abs() < 1e-9);
    }
}
