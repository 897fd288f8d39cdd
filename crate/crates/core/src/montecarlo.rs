//! Seeded event-level simulation: coincidence counts for a fixed oracle and
//! the one-shot betting game.
//!
//! All randomness comes from ChaCha8 keyed by the user seed. Every consumer
//! owns a distinct stream id, and game trials address their words by trial
//! index, so results do not depend on how work is split across threads.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::{detection_probabilities, window_probability, DetectorConfig};
use crate::error::{invalid, Error, Result};
use crate::optics::PatternModel;
use crate::qubit::{deutsch_output, OracleFunction};

/// Coincidence acquisition time of the reference four-oracle run.
pub const DEFAULT_DURATION: f64 = 1000.0;

const GAME_STREAM: u64 = 0x6761_6d65;
const GAME_CHUNK: u64 = 1 << 14;
/// ChaCha 32-bit words consumed per game trial (two `u64` draws).
const WORDS_PER_TRIAL: u128 = 4;

/// Independent generator for `(seed, stream)`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn oracle_stream(f: OracleFunction) -> u64 {
    ((f.f0 as u64) << 1) | f.f1 as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub f: OracleFunction,
    pub model: PatternModel,
    pub detector: DetectorConfig,
    pub herald_rate: f64,
    pub duration: f64,
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.detector.validate()?;
        if !(self.herald_rate.is_finite() && self.herald_rate > 0.0) {
            return Err(invalid("herald_rate", "must be positive"));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(invalid("duration", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub coincidences: u64,
    pub expected: f64,
    pub std_error: f64,
}

/// Serialized form of one simulated row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub f: OracleFunction,
    pub coincidences: u64,
    pub expected: f64,
    pub std_error: f64,
    pub seed: u64,
}

impl CountRecord {
    pub fn new(f: OracleFunction, seed: u64, r: CountResult) -> Self {
        Self {
            f,
            coincidences: r.coincidences,
            expected: r.expected,
            std_error: r.std_error,
            seed,
        }
    }
}

/// Draws `N ~ Poisson(rate · duration)` heralds, each producing a
/// coincidence with the window probability of the oracle's output state.
pub fn simulate_coincidences(cfg: &RunConfig) -> Result<CountResult> {
    cfg.validate()?;
    let p = window_probability(&deutsch_output(cfg.f).density(), &cfg.model, &cfg.detector)?;
    let mean_heralds = cfg.herald_rate * cfg.duration;
    let expected = mean_heralds * p;

    let mut rng = substream(cfg.seed, oracle_stream(cfg.f));
    let heralds = Poisson::new(mean_heralds)
        .map_err(|e| invalid("herald_rate", e.to_string()))?
        .sample(&mut rng) as u64;
    let coincidences = Binomial::new(heralds, p)
        .map_err(|e| invalid("probability", e.to_string()))?
        .sample(&mut rng);

    Ok(CountResult {
        coincidences,
        expected,
        std_error: expected.sqrt(),
    })
}

/// Inverts a constant/balanced count pair into a visibility and a herald
/// rate. `model.visibility` is ignored.
pub fn calibrate_to_table(
    counts_constant: u64,
    counts_balanced: u64,
    duration: f64,
    model: &PatternModel,
    detector: &DetectorConfig,
) -> Result<(f64, f64)> {
    if counts_constant == 0 || counts_constant < counts_balanced {
        return Err(invalid(
            "counts",
            "constant counts must be positive and at least the balanced counts",
        ));
    }
    if !(duration.is_finite() && duration > 0.0) {
        return Err(invalid("duration", "must be positive"));
    }
    let table = |v: f64| detection_probabilities(&model.with_visibility(v)?, detector);
    let ratio_at = |v: f64| -> Result<f64> {
        let t = table(v)?;
        if t.p_c <= 0.0 {
            return Err(invalid("detector", "collects no light"));
        }
        Ok(t.p_b / t.p_c)
    };

    let target = counts_balanced as f64 / counts_constant as f64;
    let min = ratio_at(1.0)?;
    if target < min - 1e-12 {
        return Err(Error::InconsistentCounts { ratio: target, min });
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let visibility = if target <= min {
        1.0
    } else {
        // ratio(V) falls strictly from 1 at V = 0 to `min` at V = 1.
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if ratio_at(mid)? > target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        if target >= 1.0 {
            0.0
        } else {
            0.5 * (lo + hi)
        }
    };
    let pc = table(visibility)?.p_c;
    Ok((visibility, counts_constant as f64 / (duration * pc)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameResult {
    pub trials: u64,
    pub successes: u64,
    pub frequency: f64,
    /// Binomial standard error of `frequency`.
    pub std_error: f64,
    pub seed: u64,
}

/// Plays `trials` rounds: draw `f` uniformly, send one photon, bet
/// "constant" on a detection and "balanced" otherwise.
///
/// The detector's slit is taken from `det`; its efficiency is replaced by `eta`.
pub fn play_single_shot_game(
    trials: u64,
    model: &PatternModel,
    det: &DetectorConfig,
    eta: f64,
    seed: u64,
) -> Result<GameResult> {
    if trials == 0 {
        return Err(invalid("trials", "must be positive"));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(invalid("eta", format!("efficiency {eta} outside [0, 1]")));
    }
    let landing = detection_probabilities(model, &det.with_efficiency(1.0)?)?;
    let p_detect = OracleFunction::ALL.map(|f| eta * landing.get(f));

    let chunks = trials.div_ceil(GAME_CHUNK);
    let successes: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let first = c * GAME_CHUNK;
            let last = (first + GAME_CHUNK).min(trials);
            let mut rng = substream(seed, GAME_STREAM);
            rng.set_word_pos(first as u128 * WORDS_PER_TRIAL);
            let mut wins = 0u64;
            for _ in first..last {
                let k = (rng.next_u64() >> 62) as usize;
                let detected = rng.gen::<f64>() < p_detect[k];
                let f = OracleFunction::ALL[k];
                if detected == f.is_constant() {
                    wins += 1;
                }
            }
            wins
        })
        .sum();

    let frequency = successes as f64 / trials as f64;
    Ok(GameResult {
        trials,
        successes,
        frequency,
        std_error: (frequency * (1.0 - frequency) / trials as f64).sqrt(),
        seed,
    })
}
