//! Single-query betting on constant vs. balanced.
//!
//! The four functions are equally likely. One heralded photon is sent
//! through the oracle and the detector either fires or not; the bettor maps
//! that outcome to a guess. Tables passed here hold *landing* probabilities
//! (efficiency 1); the detector efficiency `η` is applied explicitly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::{detection_probabilities, DetectorConfig, ProbabilityTable};
use crate::error::{invalid, Error, Result};
use crate::optics::PatternModel;

/// Convergence target for visibility calibration.
pub const CALIBRATION_TOL: f64 = 1e-6;
pub const DEFAULT_SCAN_STEP: f64 = 5e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionRule {
    /// Bet "constant" on a detection, "balanced" otherwise.
    DetectMeansConstant,
    /// The inverted bet, useful where balanced functions light the detector more.
    DetectMeansBalanced,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetOutcome {
    pub p_success: f64,
    pub posterior_constant_given_detection: f64,
    pub posterior_balanced_given_no_detection: f64,
    pub decision_rule: DecisionRule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub widths: Vec<f64>,
    pub p_success_curve: Vec<f64>,
    pub optimal_width: f64,
    pub optimal_p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub optimal_width_m: f64,
    pub optimal_p: f64,
    pub visibility: f64,
    pub eta: f64,
}

fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(invalid("eta", format!("efficiency {eta} outside [0, 1]")))
    }
}

/// `P(S)` under `rule` with a uniform prior over the four functions.
pub fn success_probability_with_rule(
    table: &ProbabilityTable,
    eta: f64,
    rule: DecisionRule,
) -> Result<f64> {
    check_eta(eta)?;
    let detect = |p: f64| eta * p;
    let miss = |p: f64| 1.0 - eta * p;
    let p = match rule {
        DecisionRule::DetectMeansConstant => {
            detect(table.p00) + detect(table.p11) + miss(table.p01) + miss(table.p10)
        }
        DecisionRule::DetectMeansBalanced => {
            miss(table.p00) + miss(table.p11) + detect(table.p01) + detect(table.p10)
        }
    };
    Ok(0.25 * p)
}

/// `P(S)` for the rule "detection ⇒ constant". For a symmetric table this
/// is `½[1 + η(p_c − p_b)]`.
pub fn success_probability(table: &ProbabilityTable, eta: f64) -> Result<f64> {
    success_probability_with_rule(table, eta, DecisionRule::DetectMeansConstant)
}

/// The better of the two rules and its success probability; ties go to
/// "detection ⇒ constant".
pub fn best_rule(table: &ProbabilityTable, eta: f64) -> Result<(DecisionRule, f64)> {
    let c = success_probability_with_rule(table, eta, DecisionRule::DetectMeansConstant)?;
    let b = success_probability_with_rule(table, eta, DecisionRule::DetectMeansBalanced)?;
    Ok(if b > c {
        (DecisionRule::DetectMeansBalanced, b)
    } else {
        (DecisionRule::DetectMeansConstant, c)
    })
}

/// `(P(constant | detection), P(balanced | no detection))`.
pub fn bayes_posteriors(table: &ProbabilityTable, eta: f64) -> Result<(f64, f64)> {
    check_eta(eta)?;
    let (pc, pb) = (table.p_c, table.p_b);
    if pc + pb <= 0.0 {
        return Err(Error::NoDetectionsPossible);
    }
    let denom = 2.0 - eta * (pc + pb);
    if denom <= 0.0 {
        return Err(invalid("table", "a no-detection event is impossible"));
    }
    Ok((pc / (pc + pb), (1.0 - eta * pb) / denom))
}

pub fn bet_outcome(table: &ProbabilityTable, eta: f64) -> Result<BetOutcome> {
    let (decision_rule, p_success) = best_rule(table, eta)?;
    let (post_c, post_b) = bayes_posteriors(table, eta)?;
    Ok(BetOutcome {
        p_success,
        posterior_constant_given_detection: post_c,
        posterior_balanced_given_no_detection: post_b,
        decision_rule,
    })
}

fn landing_table(model: &PatternModel, center: f64, width: f64) -> Result<ProbabilityTable> {
    detection_probabilities(model, &DetectorConfig::new(center, width, 1.0)?)
}

/// Success probability against detector slit width, betting with the
/// better rule at each width. Widths run `w_min, w_min + step, … ≤ w_max`.
pub fn scan_detector_width(
    model: &PatternModel,
    eta: f64,
    w_min: f64,
    w_max: f64,
    step: f64,
) -> Result<ScanResult> {
    check_eta(eta)?;
    model.validate()?;
    if !(w_min > 0.0 && w_max > w_min && w_max.is_finite()) {
        return Err(invalid(
            "scan",
            format!("need 0 < w_min < w_max, got [{w_min}, {w_max}]"),
        ));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(invalid("scan.step", "must be positive"));
    }
    let n = ((w_max - w_min) / step + 1e-9).floor() as usize + 1;
    let widths: Vec<f64> = (0..n).map(|i| w_min + step * i as f64).collect();
    let curve = widths
        .par_iter()
        .map(|&w| best_rule(&landing_table(model, 0.0, w)?, eta).map(|(_, p)| p))
        .collect::<Result<Vec<f64>>>()?;

    let (mut best_i, mut best_p) = (0, curve[0]);
    for (i, &p) in curve.iter().enumerate().skip(1) {
        if p > best_p {
            best_i = i;
            best_p = p;
        }
    }
    Ok(ScanResult {
        optimal_width: widths[best_i],
        optimal_p: best_p,
        widths,
        p_success_curve: curve,
    })
}

/// Fringe visibility at which the rule "detection ⇒ constant" succeeds with
/// probability `target_p` for the given detector. `P(S)` is affine and
/// nondecreasing in `V`, so bisection has a unique root.
pub fn calibrate_visibility(
    model: &PatternModel,
    det: &DetectorConfig,
    eta: f64,
    target_p: f64,
) -> Result<f64> {
    check_eta(eta)?;
    let success = |v: f64| -> Result<f64> {
        let m = model.with_visibility(v)?;
        success_probability(&landing_table(&m, det.center, det.width)?, eta)
    };
    if !(target_p >= 0.5) {
        return Err(invalid("target_p", "must be at least 0.5"));
    }
    let max = success(1.0)?;
    if target_p > max + 1e-12 {
        return Err(Error::TargetExceedsModel {
            target: target_p,
            max,
        });
    }
    let min = success(0.0)?;
    if target_p <= min {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let p = success(mid)?;
        if (p - target_p).abs() < 1e-13 {
            return Ok(mid);
        }
        if p < target_p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
