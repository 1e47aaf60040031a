//! Pipeline orchestration: one record per curve, a worker-pool batch
//! driver with order-preserving output, and deterministic per-line seeds.

use std::time::Instant;

use archbound::{
    compute_bound, empirical_max_psi, two_torsion_x, BoundConfig, CurveModel, PlaceSpec,
};
use rayon::prelude::*;

use crate::input::{parse_record, place_name, render, CurveInput};
use crate::report::{
    pair, BInvariants, ErrorRecord, PlaceReport, Record, Report, Summary, ValidationReport, SCHEMA,
};
use crate::{CliError, Result};

/// Validation request: sample size and series depth per place.
#[derive(Clone, Debug)]
pub struct ValidationSpec {
    pub n_samples: usize,
    pub terms: usize,
}

#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub bound: BoundConfig,
    pub validate: Option<ValidationSpec>,
    pub seed: u64,
    /// Shift reported bounds by log|disc|_v / 6 (the other common
    /// normalization of the local height difference).
    pub shift_by_disc: bool,
}

/// Builds the full report for one curve; any failure (singular model,
/// root-finding breakdown, exhausted sampler) aborts the whole record.
pub fn compute_report(input: &CurveInput, cfg: &RunConfig) -> Result<Report> {
    let model = CurveModel::from_a_invariants(&input.coefficients)?;
    let discriminant_sign =
        model.is_real.then_some(if model.disc.re >= 0.0 { 1i8 } else { -1i8 });
    let mut places = Vec::with_capacity(input.places.len());
    for place in &input.places {
        places.push(place_report(&model, *place, cfg)?);
    }
    Ok(Report {
        schema: SCHEMA.to_string(),
        label: input.label.clone(),
        curve: render(input),
        b_invariants: BInvariants {
            b2: pair(model.b2),
            b4: pair(model.b4),
            b6: pair(model.b6),
            b8: pair(model.b8),
        },
        discriminant_sign,
        places,
    })
}

fn place_report(model: &CurveModel, place: PlaceSpec, cfg: &RunConfig) -> Result<PlaceReport> {
    let start = Instant::now();
    let xt = two_torsion_x(model, place)?;
    let res = compute_bound(model, place, &cfg.bound)?;
    let raw_validation = match &cfg.validate {
        None => None,
        Some(v) => {
            let empirical = empirical_max_psi(model, place, v.n_samples, v.terms, cfg.seed)?;
            Some((v.clone(), empirical))
        }
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    // The normalized absolute value squares at a complex place.
    let shift = if cfg.shift_by_disc {
        let weight = match place {
            PlaceSpec::Real => 1.0,
            PlaceSpec::Complex => 2.0,
        };
        weight * model.disc.norm().ln() / 6.0
    } else {
        0.0
    };
    let validation = raw_validation.map(|(v, empirical)| ValidationReport {
        n_samples: v.n_samples,
        terms: v.terms,
        empirical_max: empirical + shift,
        sound: empirical <= res.bound + 1e-9,
    });
    Ok(PlaceReport {
        place: place_name(place).to_string(),
        variant: res.variant_used.as_str().to_string(),
        two_torsion_x: [pair(xt[0]), pair(xt[1]), pair(xt[2])],
        c_seq: res.c_seq,
        iterations: res.iterations,
        bound: res.bound + shift,
        normalization: if cfg.shift_by_disc { "shifted-by-log-disc" } else { "series" }.to_string(),
        normalization_shift: shift,
        wall_time_ms,
        validation,
    })
}

/// Report record, or an error record if the pipeline failed; math failures
/// never escape as process errors.
pub fn record_for_input(input: &CurveInput, cfg: &RunConfig, line: Option<usize>) -> Record {
    match compute_report(input, cfg) {
        Ok(report) => Record::Report(report),
        Err(err) => Record::Error(ErrorRecord {
            schema: SCHEMA.to_string(),
            line,
            label: input.label.clone(),
            error: err.to_string(),
        }),
    }
}

/// SplitMix-style mix of the global seed and the 1-based line number, so a
/// line's samples are reproducible regardless of worker scheduling or
/// which other lines exist.
pub fn line_seed(global: u64, line: u64) -> u64 {
    let mut z = global ^ line.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs every record line of `text` on a worker pool (`jobs` threads,
/// 0 = one per core) and returns records in input order, error records
/// inline, and a summary record at the end.
pub fn batch_run(text: &str, cfg: &RunConfig, jobs: usize) -> Result<Vec<Record>> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    let work = |(line_no, line): &(usize, &str)| -> Option<Record> {
        match parse_record(line, *line_no) {
            Ok(None) => None,
            Ok(Some(input)) => {
                let line_cfg =
                    RunConfig { seed: line_seed(cfg.seed, *line_no as u64), ..cfg.clone() };
                Some(record_for_input(&input, &line_cfg, Some(*line_no)))
            }
            Err(err) => Some(Record::Error(ErrorRecord {
                schema: SCHEMA.to_string(),
                line: Some(*line_no),
                label: None,
                error: err.to_string(),
            })),
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))?;
    let mut records: Vec<Record> = pool.install(|| lines.par_iter().filter_map(work).collect());
    records.push(summarize(&records));
    Ok(records)
}

fn summarize(records: &[Record]) -> Record {
    let mut reports = 0usize;
    let mut errors = 0usize;
    let mut bound_sum = 0.0;
    let mut wall_sum = 0.0;
    let mut entries = 0usize;
    for record in records {
        match record {
            Record::Report(report) => {
                reports += 1;
                for place in &report.places {
                    bound_sum += place.bound;
                    wall_sum += place.wall_time_ms;
                    entries += 1;
                }
            }
            Record::Error(_) => errors += 1,
            Record::Summary(_) => {}
        }
    }
    Record::Summary(Summary {
        schema: SCHEMA.to_string(),
        reports,
        errors,
        mean_bound: (entries > 0).then(|| bound_sum / entries as f64),
        mean_wall_time_ms: (entries > 0).then(|| wall_sum / entries as f64),
    })
}
