use std::io::Write;
use std::path::Path;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Cell, ExperimentConfig, Mode};
use super::trial::{run_trial, TrialOptions, TrialResult};
use crate::error::Result;
use crate::sbm::SbmParams;

pub const CSV_HEADER: [&str; 15] = [
    "variant", "n", "a", "b", "rho", "xi", "eps", "delta_exp", "mode", "seed", "recovered", "bottom", "conc_pass",
    "cert_valid", "ms",
];

/// Per-cell summary; rates over the trials where the flag is defined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub cell: Cell,
    pub mode: Mode,
    pub trials: usize,
    pub recovered: f64,
    pub bottom: f64,
    pub conc_pass: Option<f64>,
    pub cert_valid: Option<f64>,
    pub ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub rows: Vec<TrialResult>,
    pub aggregates: Vec<Aggregate>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of trial `trial` in cell `cell`.
pub fn trial_seed(seed_base: u64, cell: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed_base) ^ cell as u64) ^ trial as u64)
}

pub fn aggregate(rows: &[TrialResult]) -> Option<Aggregate> {
    let first = rows.first()?;
    let k = rows.len() as f64;
    let rate = |f: fn(&TrialResult) -> Option<bool>| {
        let defined: Vec<bool> = rows.iter().filter_map(f).collect();
        (!defined.is_empty()).then(|| defined.iter().filter(|&&x| x).count() as f64 / defined.len() as f64)
    };
    Some(Aggregate {
        cell: first.cell.clone(),
        mode: first.mode,
        trials: rows.len(),
        recovered: rows.iter().filter(|r| r.recovered).count() as f64 / k,
        bottom: rows.iter().filter(|r| r.bottom).count() as f64 / k,
        conc_pass: rate(|r| r.conc_pass),
        cert_valid: rate(|r| r.cert_valid),
        ms: rows.iter().map(|r| r.ms).sum::<f64>() / k,
    })
}

/// Runs every trial of `config` on the rayon pool. Rows come back in grid
/// order, trials in index order within a cell.
pub fn sweep(config: &ExperimentConfig) -> Result<SweepOutput> {
    let cells = config.cells()?;
    let opts = TrialOptions {
        mode: config.mode,
        solver: config.solver.clone(),
        source: config.source,
        budget: config.budget_ms.map(Duration::from_millis),
    };
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..config.trials).map(move |t| (c, t)))
        .collect();
    let rows: Vec<TrialResult> = jobs
        .par_iter()
        .map(|&(c, t)| run_trial(&cells[c], trial_seed(config.seed_base, c, t), &opts))
        .collect();
    let aggregates = rows.chunks(config.trials).filter_map(aggregate).collect();
    Ok(SweepOutput { rows, aggregates })
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn flag(x: Option<bool>) -> String {
    x.map_or(String::new(), |b| b.to_string())
}

fn model_fields(p: &SbmParams) -> [String; 5] {
    match p {
        SbmParams::Basbm { n, a, b, rho } => [n.to_string(), num(*a), num(*b), num(*rho), String::new()],
        SbmParams::Cbsbm { n, a, rho, xi } => [n.to_string(), num(*a), String::new(), num(*rho), num(*xi)],
        SbmParams::Gssbm { n, a, b, rhos } => [
            n.to_string(),
            num(*a),
            num(*b),
            rhos.iter().map(|r| num(*r)).collect::<Vec<_>>().join(";"),
            String::new(),
        ],
    }
}

fn record(cell: &Cell, mode: Mode, tail: [String; 6]) -> Vec<String> {
    let mut r = vec![cell.params.variant().name().to_string()];
    r.extend(model_fields(&cell.params));
    r.push(num(cell.eps));
    r.push(num(cell.delta_exp));
    r.push(mode.name().to_string());
    r.extend(tail);
    r
}

/// Trial rows, then one aggregate row per cell with `seed = agg` and rates in
/// the flag columns.
pub fn write_csv<W: Write>(out: &SweepOutput, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(CSV_HEADER)?;
    for r in &out.rows {
        wr.write_record(record(
            &r.cell,
            r.mode,
            [
                r.seed.to_string(),
                r.recovered.to_string(),
                r.bottom.to_string(),
                flag(r.conc_pass),
                flag(r.cert_valid),
                format!("{:.3}", r.ms),
            ],
        ))?;
    }
    let opt = |x: Option<f64>| x.map_or(String::new(), num);
    for a in &out.aggregates {
        wr.write_record(record(
            &a.cell,
            a.mode,
            [
                "agg".into(),
                num(a.recovered),
                num(a.bottom),
                opt(a.conc_pass),
                opt(a.cert_valid),
                format!("{:.3}", a.ms),
            ],
        ))?;
    }
    wr.flush()?;
    Ok(())
}

/// Writes to `path` (JSON if it ends in `.json`, CSV otherwise) or to stdout.
pub fn write_output(out: &SweepOutput, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) if p.extension().is_some_and(|e| e == "json") => {
            let f = std::io::BufWriter::new(std::fs::File::create(p)?);
            serde_json::to_writer_pretty(f, out)?;
        }
        Some(p) => write_csv(out, std::io::BufWriter::new(std::fs::File::create(p)?))?,
        None => write_csv(out, std::io::stdout().lock())?,
    }
    Ok(())
}
