use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use deutsch_slit::biphoton::{herald_after_oracle, heralded_mixed_state, verify_commutation};
use deutsch_slit::detection::detection_probabilities;
use deutsch_slit::fitting::{fit_pattern_pair, FitResult};
use deutsch_slit::inference::{
    bet_outcome, calibrate_visibility, scan_detector_width, success_probability, BetOutcome,
    ScanSummary,
};
use deutsch_slit::io::{read_pattern_csv, write_pattern_csv, write_scan_csv};
use deutsch_slit::montecarlo::{
    calibrate_to_table, play_single_shot_game, simulate_coincidences, CountRecord, GameResult,
    RunConfig,
};
use deutsch_slit::optics::{crossing_point, sample_image, sample_pattern};
use deutsch_slit::qubit::{deutsch_output, oracle_unitary};
use deutsch_slit::{MixedState, OracleFunction, PatternModel, QubitState};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::{Cli, Command, FitArgs, GameArgs, PatternArgs, Plane, ScanArgs};

pub fn dispatch(cli: &Cli, cfg: &ExperimentConfig) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Pattern(args) => pattern(cfg, args, out),
        Command::Herald => emit_json(&herald(cfg)?, out),
        Command::Table => emit_json(&table(cfg)?, out),
        Command::Scan(args) => scan(cfg, args, out),
        Command::Game(args) => emit_json(&game(cfg, args)?, out),
        Command::Fit(args) => emit_json(&fit(cfg, args)?, out),
        Command::Calibrate => emit_json(&calibrate(cfg)?, out),
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::io(path, e))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    let mut w = sink(out)?;
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(out.unwrap_or(Path::new("<stdout>")), e))
}

fn signal_state(
    cfg: &ExperimentConfig,
    args: &PatternArgs,
    model: &PatternModel,
) -> Result<MixedState, CliError> {
    if let Some(shift) = args.phase {
        // A relative phase φ on |1⟩ moves the fringes to cos(θ − φ).
        let u = deutsch_slit::qubit::slm_map(1.0, 0.0, 1.0, -shift)?;
        return Ok(if args.heralded {
            herald_after_oracle(&u, &cfg.herald()?, model)?
        } else {
            QubitState::with_relative_phase(-shift).density()
        });
    }
    Ok(if args.heralded {
        herald_after_oracle(&oracle_unitary(args.oracle), &cfg.herald()?, model)?
    } else {
        deutsch_output(args.oracle).density()
    })
}

fn pattern(cfg: &ExperimentConfig, args: &PatternArgs, out: Option<&Path>) -> Result<(), CliError> {
    let model = cfg.model()?;
    let state = signal_state(cfg, args, &model)?;
    let p = &cfg.pattern;
    let samples = match args.plane {
        Plane::Fourier => sample_pattern(&state, &model, p.x_min, p.x_max, p.step)?,
        Plane::Image => sample_image(
            &state,
            &model.geometry,
            p.magnification,
            p.x_min,
            p.x_max,
            p.step,
        )?,
    };
    write_pattern_csv(&samples, sink(out)?)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct CommutationRow {
    f: OracleFunction,
    commutes: bool,
}

#[derive(Debug, Serialize)]
struct HeraldReport {
    herald_center_m: f64,
    herald_width_m: f64,
    rho00: f64,
    rho11: f64,
    rho01_re: f64,
    rho01_im: f64,
    purity: f64,
    commutation: Vec<CommutationRow>,
}

fn herald(cfg: &ExperimentConfig) -> Result<HeraldReport, CliError> {
    let model = cfg.model()?;
    let window = cfg.herald()?;
    let rho = heralded_mixed_state(&window, &model)?;
    let commutation = OracleFunction::ALL
        .into_iter()
        .map(|f| {
            Ok(CommutationRow {
                f,
                commutes: verify_commutation(f, &window, &model)?,
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(HeraldReport {
        herald_center_m: window.center,
        herald_width_m: window.width,
        rho00: rho.rho00(),
        rho11: rho.rho11(),
        rho01_re: rho.rho01().re,
        rho01_im: rho.rho01().im,
        purity: rho.purity(),
        commutation,
    })
}

#[derive(Debug, Serialize)]
struct TableReport {
    visibility: f64,
    herald_rate: f64,
    duration_s: f64,
    detector_width_m: f64,
    seed: u64,
    rows: Vec<CountRecord>,
}

fn table(cfg: &ExperimentConfig) -> Result<TableReport, CliError> {
    let seed = cfg.seed()?;
    let det = cfg.detector()?;
    let duration = cfg.monte_carlo.duration;
    let (model, herald_rate) = match cfg.monte_carlo.herald_rate {
        Some(rate) => (cfg.model()?, rate),
        None => {
            let ideal = PatternModel::ideal(cfg.geometry()?);
            let c = &cfg.calibration;
            let (v, rate) =
                calibrate_to_table(c.table_constant, c.table_balanced, duration, &ideal, &det)?;
            (ideal.with_visibility(v)?, rate)
        }
    };
    let rows = OracleFunction::ALL
        .into_iter()
        .map(|f| {
            let run = RunConfig {
                f,
                model,
                detector: det,
                herald_rate,
                duration,
                seed,
            };
            Ok(CountRecord::new(f, seed, simulate_coincidences(&run)?))
        })
        .collect::<Result<_, CliError>>()?;
    Ok(TableReport {
        visibility: model.visibility,
        herald_rate,
        duration_s: duration,
        detector_width_m: det.width,
        seed,
        rows,
    })
}

fn scan(cfg: &ExperimentConfig, args: &ScanArgs, out: Option<&Path>) -> Result<(), CliError> {
    let model = cfg.model()?;
    let eta = cfg.detector.efficiency;
    let s = &cfg.scan;
    let result = scan_detector_width(&model, eta, s.width_min, s.width_max, s.step)?;
    write_scan_csv(&result, sink(out)?)?;
    let summary = ScanSummary {
        optimal_width_m: result.optimal_width,
        optimal_p: result.optimal_p,
        visibility: model.visibility,
        eta,
    };
    match (&args.summary, out) {
        (Some(path), _) => emit_json(&summary, Some(path)),
        (None, Some(_)) => emit_json(&summary, None),
        (None, None) => Ok(()),
    }
}

#[derive(Debug, Serialize)]
struct GameReport {
    #[serde(flatten)]
    result: GameResult,
    p_success_expected: f64,
    visibility: f64,
    detector_width_m: f64,
    eta: f64,
}

fn game(cfg: &ExperimentConfig, args: &GameArgs) -> Result<GameReport, CliError> {
    let seed = cfg.seed()?;
    let model = cfg.model()?;
    let det = cfg.detector()?;
    let eta = det.efficiency;
    let trials = args.trials.unwrap_or(cfg.monte_carlo.trials);
    let result = play_single_shot_game(trials, &model, &det, eta, seed)?;
    let expected = success_probability(
        &detection_probabilities(&model, &det.with_efficiency(1.0)?)?,
        eta,
    )?;
    Ok(GameReport {
        result,
        p_success_expected: expected,
        visibility: model.visibility,
        detector_width_m: det.width,
        eta,
    })
}

fn read_csv(path: &Path) -> Result<Vec<deutsch_slit::optics::IntensitySample>, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(read_pattern_csv(file)?)
}

fn fit(cfg: &ExperimentConfig, args: &FitArgs) -> Result<FitResult, CliError> {
    let reference = read_csv(&args.reference)?;
    let shifted = read_csv(&args.shifted)?;
    Ok(fit_pattern_pair(&reference, &shifted, &cfg.geometry()?)?)
}

#[derive(Debug, Serialize)]
struct TableCalibration {
    counts_constant: u64,
    counts_balanced: u64,
    visibility: f64,
    herald_rate: f64,
}

#[derive(Debug, Serialize)]
struct CalibrationReport {
    focal_length_m: f64,
    crossing_point_m: f64,
    target_p_success: f64,
    visibility: f64,
    bet: BetOutcome,
    table: TableCalibration,
}

fn calibrate(cfg: &ExperimentConfig) -> Result<CalibrationReport, CliError> {
    let g = cfg.geometry()?;
    let det = cfg.detector()?;
    let eta = det.efficiency;
    let ideal = PatternModel::ideal(g);
    let c = &cfg.calibration;
    let v = calibrate_visibility(&ideal, &det, eta, c.target_p_success)?;
    let model = ideal.with_visibility(v)?;
    let bet = bet_outcome(
        &detection_probabilities(&model, &det.with_efficiency(1.0)?)?,
        eta,
    )?;
    let (v_table, rate) = calibrate_to_table(
        c.table_constant,
        c.table_balanced,
        cfg.monte_carlo.duration,
        &ideal,
        &det,
    )?;
    Ok(CalibrationReport {
        focal_length_m: g.focal_length,
        crossing_point_m: crossing_point(&g),
        target_p_success: c.target_p_success,
        visibility: v,
        bet,
        table: TableCalibration {
            counts_constant: c.table_constant,
            counts_balanced: c.table_balanced,
            visibility: v_table,
            herald_rate: rate,
        },
    })
}
