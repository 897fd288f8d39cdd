//! Simulation of the one-qubit Deutsch algorithm on a double-slit path qubit.
//!
//! A photon crossing the inferior slit is `|0⟩`, the superior slit `|1⟩`. A
//! diagonal phase mask behind the slits plays the oracle, the idler photon of
//! a down-converted pair heralds the input state, and a finite detector at
//! the center of the far-field pattern performs the final, imperfect
//! `{|+⟩, |−⟩}` measurement.
//!
//! Modules, bottom up:
//!
//! - [`qubit`]: states, diagonal maps, oracle unitaries.
//! - [`geometry`], [`optics`]: far-field and image-plane intensities.
//! - [`biphoton`]: heralded preparation from the two-photon Bell state.
//! - [`detection`]: finite detector windows and their POVM elements.
//! - [`inference`]: single-query betting, Bayes posteriors, width scans.
//! - [`montecarlo`]: seeded event-level simulation of counts and games.
//! - [`fitting`]: least-squares recovery of visibility and relative phase.
//!
//! ```
//! use deutsch_slit::{detection, inference, optics::PatternModel, qubit::OracleFunction};
//!
//! let model = PatternModel::default();
//! let det = detection::DetectorConfig::new(0.0, 100e-6, 1.0).unwrap();
//! let table = detection::detection_probabilities(&model, &det).unwrap();
//! let p = inference::success_probability(&table, 1.0).unwrap();
//! assert!(p > 0.5);
//! assert!(OracleFunction::ALL.iter().filter(|f| f.is_constant()).count() == 2);
//! ```

pub mod biphoton;
pub mod detection;
pub mod error;
pub mod fitting;
pub mod geometry;
pub mod inference;
pub mod io;
pub mod montecarlo;
pub mod optics;
pub mod quadrature;
pub mod qubit;

pub use error::{Error, Result};
pub use geometry::SlitGeometry;
pub use optics::PatternModel;
pub use qubit::{MixedState, OracleFunction, QubitState};
