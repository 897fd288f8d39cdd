//! Checks the quadrature-backed model against the independent oracles in
//! `common` and the frozen reference values.

mod common;

use common::*;
use deutsch_slit::biphoton::{heralded_mixed_state, HeraldWindow};
use deutsch_slit::detection::{detection_probabilities, window_probability, DetectorConfig};
use deutsch_slit::inference::{calibrate_visibility, scan_detector_width, success_probability};
use deutsch_slit::montecarlo::calibrate_to_table;
use deutsch_slit::optics::{fourier_intensity, PatternModel};
use deutsch_slit::qubit::QubitState;
use deutsch_slit::SlitGeometry;

fn det(width: f64) -> DetectorConfig {
    DetectorConfig::new(0.0, width, 1.0).unwrap()
}

#[test]
fn default_geometry_matches_oracle_constants() {
    let g = SlitGeometry::default();
    assert!((g.focal_length - FOCAL_LENGTH).abs() < 1e-15);
    assert!((g.focal_length - 0.1692).abs() < 1e-4);
}

#[test]
fn intensity_matches_direct_formula() {
    let m = PatternModel::new(SlitGeometry::default(), 0.8).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (phase, state) in [
        (0.0, QubitState::plus()),
        (std::f64::consts::PI, QubitState::minus()),
        (1.3, QubitState::with_relative_phase(1.3)),
    ] {
        for k in -50..=50 {
            let x = k as f64 * 13e-6;
            let a = fourier_intensity(&state.density(), &m, x);
            // ρ01 = α β* = e^{−iφ}/2 shifts the fringe to θ = φ.
            let b = intensity(h, h, phase, 0.8, x);
            assert!((a - b).abs() < 1e-9 * b.max(1.0), "{x}: {a} vs {b}");
        }
    }
}

#[test]
fn window_probability_against_gauss_legendre() {
    let m = PatternModel::default();
    let plus = QubitState::plus().density();
    let p = window_probability(&plus, &m, &det(100e-6)).unwrap();
    let oracle = plus_window(1.0, 100e-6);
    assert!((p - oracle).abs() < 1e-9 * oracle, "{p} vs {oracle}");
    assert!((p - P_C_100UM).abs() < 1e-9 * P_C_100UM);
    // ≈ 0.175 at the default 100 µm opening.
    assert!((p - 0.175).abs() < 2e-3);
}

#[test]
fn probability_table_at_default_detector() {
    let t = detection_probabilities(&PatternModel::default(), &det(100e-6)).unwrap();
    assert!((t.p00 - P_C_100UM).abs() < 1e-9 * P_C_100UM);
    assert!((t.p01 - P_B_100UM).abs() < 1e-9 * P_B_100UM);
    assert!((t.p01 - minus_window(1.0, 100e-6)).abs() < 1e-9 * P_B_100UM);
    assert!((t.p01 - 0.008).abs() < 1e-3);
    let t10 = detection_probabilities(&PatternModel::default(), &det(10e-6)).unwrap();
    assert!((t10.p_c - P_C_10UM).abs() < 1e-9 * P_C_10UM);
    assert!((t10.p_b - P_B_10UM).abs() < 1e-8 * P_B_10UM);
    let t220 = detection_probabilities(&PatternModel::default(), &det(220e-6)).unwrap();
    assert!((t220.p_c - P_C_220UM).abs() < 1e-9);
    assert!((t220.p_b - P_B_220UM).abs() < 1e-9);
}

#[test]
fn visibility_for_055_at_100um() {
    let v = calibrate_visibility(&PatternModel::default(), &det(100e-6), 1.0, 0.55).unwrap();
    assert!((v - V_FOR_055_AT_100UM).abs() < 1e-6, "{v}");
    // Closed form: ½(1 + V (p_c − p_b)) with the V = 1 table.
    let closed = 0.1 / (plus_window(1.0, 100e-6) - minus_window(1.0, 100e-6));
    assert!((v - closed).abs() < 1e-6);
    assert!((v - 0.60).abs() < 0.01);
}

#[test]
fn ideal_scan_optimum_is_twice_the_crossing() {
    let m = PatternModel::default();
    let scan = scan_detector_width(&m, 1.0, 5e-6, 1e-3, 5e-6).unwrap();
    assert!(
        (scan.optimal_width - 2.0 * CROSSING).abs() < 1e-9,
        "{}",
        scan.optimal_width
    );
    let oracle = 0.5 * (1.0 + P_C_220UM - P_B_220UM);
    assert!((scan.optimal_p - oracle).abs() < 1e-9);

    // Brute force over the oracle: the constant-minus-balanced window
    // difference peaks where the integrand cos(2qd) changes sign.
    let best = (1..=200)
        .map(|i| i as f64 * 5e-6)
        .map(|w| (w, plus_window(1.0, w) - minus_window(1.0, w)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert!((best.0 - 220e-6).abs() < 1e-9);
}

#[test]
fn table_calibration() {
    let m = PatternModel::default();
    let (v, rate) = calibrate_to_table(5218, 450, 1000.0, &m, &det(100e-6)).unwrap();
    assert!((v - V_TABLE).abs() < 1e-9, "{v}");
    assert!((rate - HERALD_RATE_TABLE).abs() < 1e-6 * HERALD_RATE_TABLE);
    let t = detection_probabilities(&m.with_visibility(v).unwrap(), &det(100e-6)).unwrap();
    assert!((t.p_b / t.p_c - 450.0 / 5218.0).abs() < 1e-6);
}

#[test]
fn heralded_purity_at_100um() {
    let m = PatternModel::default();
    let rho = heralded_mixed_state(&HeraldWindow::new(0.0, 100e-6).unwrap(), &m).unwrap();
    assert!(
        (rho.purity() - PURITY_100UM_HERALD).abs() < 1e-9,
        "{}",
        rho.purity()
    );
    // Oracle: average of e^{−iθ} over the envelope-weighted window.
    let g = SlitGeometry::default();
    let env = |x: f64| intensity(1.0, 0.0, 0.0, 0.0, x);
    let z = gl_integrate(env, -50e-6, 50e-6, 200);
    let c = gl_integrate(|x| env(x) * g.fringe_phase(x).cos(), -50e-6, 50e-6, 200);
    let coherence = 0.5 * c / z;
    assert!((rho.rho01().re - coherence).abs() < 1e-9);
    assert!(rho.rho01().im.abs() < 1e-12);
}

#[test]
fn success_probability_at_calibrated_point() {
    let m = PatternModel::default()
        .with_visibility(V_FOR_055_AT_100UM)
        .unwrap();
    let t = detection_probabilities(&m, &det(100e-6)).unwrap();
    assert!((success_probability(&t, 1.0).unwrap() - 0.55).abs() < 1e-9);
    let scan = scan_detector_width(&m, 1.0, 5e-6, 1e-3, 5e-6).unwrap();
    assert!((scan.optimal_p - P_OPT_CALIBRATED).abs() < 1e-9);
}
