//! Single runs, sweeps and CSV output.

use std::io::Write;

use fogcache::{
    generate_library, load_bounds, mn_sync_load, partition_into_subfiles, place_caches, run_delivery, uncoded_load,
    AnalyticRecords, DeliveryOptions, Error, FixedLConfig, RequestSchedule, SkipRule,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentConfig, Mode, RunSpec, ScheduleMode};

/// Bit-exact runs keep every placed position; `K N F` beyond this is refused.
pub const MAX_BIT_EXACT_CELLS: usize = 50_000_000;

/// One CSV line. Columns after `transmission_count` extend the base layout.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "F")]
    pub f: usize,
    #[serde(rename = "B")]
    pub b: usize,
    #[serde(rename = "deltaB")]
    pub delta_b: usize,
    #[serde(rename = "L")]
    pub l: Option<usize>,
    pub mode: String,
    pub trials: usize,
    pub seed: u64,
    /// Worst case over trials.
    pub measured_load: Option<f64>,
    pub closed_form_load: Option<f64>,
    pub lower_bound: Option<f64>,
    pub upper_bound: Option<f64>,
    pub uncoded_load: Option<f64>,
    pub mn_sync_load: Option<f64>,
    /// Transmissions in the worst-case trial.
    pub transmission_count: Option<usize>,
    pub measured_load_mean: Option<f64>,
    pub error: Option<String>,
}

impl ResultRow {
    fn skeleton(spec: &RunSpec) -> Self {
        let valid = spec.params().is_ok();
        let (lower, upper) = load_bounds::<f64>(spec.m, spec.n, spec.k, spec.b, spec.delta_b);
        ResultRow {
            k: spec.k,
            n: spec.n,
            m: spec.m,
            f: spec.f,
            b: spec.b,
            delta_b: spec.delta_b,
            l: spec.l(),
            mode: spec.mode.to_string(),
            trials: spec.trials,
            seed: spec.seed,
            measured_load: None,
            closed_form_load: None,
            lower_bound: valid.then_some(lower),
            upper_bound: valid.then_some(upper),
            uncoded_load: valid.then(|| uncoded_load(spec.m, spec.n, spec.k)),
            mn_sync_load: valid.then(|| mn_sync_load(spec.m, spec.n, spec.k)),
            transmission_count: None,
            measured_load_mean: None,
            error: None,
        }
    }

    fn failed(spec: &RunSpec, err: &Error) -> Self {
        ResultRow {
            error: Some(err.to_string()),
            ..Self::skeleton(spec)
        }
    }
}

/// Load and transmission count of one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialResult {
    pub load: f64,
    pub transmissions: usize,
}

/// Trial `t` derives every random choice from `seed + t`.
pub fn run_trial(spec: &RunSpec, trial: usize, skip_rule: SkipRule) -> fogcache::Result<TrialResult> {
    let params = spec.validate()?;
    let seed = spec.seed.wrapping_add(trial as u64);
    let schedule = match spec.schedule {
        ScheduleMode::FixedL(l) => RequestSchedule::fixed_l(spec.k, spec.b, l, None)?,
        ScheduleMode::Random => RequestSchedule::random(spec.k, spec.b, seed)?,
    };
    let options = DeliveryOptions {
        skip_rule,
        record_trace: false,
    };
    let out = match spec.mode {
        Mode::Analytic => {
            let records = AnalyticRecords::analytic(&params, &schedule)?;
            run_delivery(&params, &schedule, records, options)?
        }
        Mode::Bitexact => {
            let cells = spec.k.saturating_mul(spec.n).saturating_mul(spec.f);
            if cells > MAX_BIT_EXACT_CELLS {
                return Err(Error::InvalidParams(format!(
                    "bit-exact mode holds K N F = {cells} cached bit slots, limit {MAX_BIT_EXACT_CELLS}; use --mode analytic"
                )));
            }
            let library = generate_library(&params, seed)?;
            let caches = place_caches(&params, seed)?;
            let records = partition_into_subfiles(&library, &caches, &schedule)?;
            run_delivery(&params, &schedule, records, options)?
        }
    };
    Ok(TrialResult {
        load: out.report.normalized_load,
        transmissions: out.report.transmission_count,
    })
}

/// Runs every trial of `spec`. `measured_load` is the worst case; the mean is reported alongside.
pub fn run_single(spec: &RunSpec) -> fogcache::Result<ResultRow> {
    let trials: Vec<TrialResult> = (0..spec.trials)
        .into_par_iter()
        .map(|t| run_trial(spec, t, SkipRule::DeadlineNeed))
        .collect::<fogcache::Result<_>>()?;
    let worst = trials
        .iter()
        .copied()
        .reduce(|a, b| if b.load > a.load { b } else { a })
        .expect("at least one trial");
    let mean = trials.iter().map(|t| t.load).sum::<f64>() / trials.len() as f64;
    let closed_form_load = match spec.schedule {
        ScheduleMode::FixedL(l) => {
            let config = FixedLConfig::new(spec.k, spec.n, spec.m, spec.f, spec.b, l, spec.delta_b)?;
            Some(fogcache::closed_form_load::<f64>(&config)?)
        }
        ScheduleMode::Random => None,
    };
    Ok(ResultRow {
        measured_load: Some(worst.load),
        closed_form_load,
        transmission_count: Some(worst.transmissions),
        measured_load_mean: Some(mean),
        ..ResultRow::skeleton(spec)
    })
}

/// One row per cell in sweep order; failing cells carry their error and the rest still run.
pub fn run_sweep(config: &ExperimentConfig) -> Vec<ResultRow> {
    config
        .cells()
        .par_iter()
        .map(|spec| run_single(spec).unwrap_or_else(|e| ResultRow::failed(spec, &e)))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV output is UTF-8")
}
