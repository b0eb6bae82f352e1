//! Run persistence: `front.csv`, `metrics.csv`, `trajectory.csv` and `run.json`.
//!
//! Floating-point values in CSV files are written with 17 significant digits,
//! so parsing them back gives the exact doubles.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cbo::StepRecord;
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::harness::{RunRecord, Summary};
use crate::metrics::MetricSeries;
use crate::problems::Problem;
use crate::simplex::Weight;

pub const FRONT_CSV: &str = "front.csv";
pub const METRICS_CSV: &str = "metrics.csv";
pub const TRAJECTORY_CSV: &str = "trajectory.csv";
pub const RUN_JSON: &str = "run.json";

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RunJson {
    pub config: ExperimentConfig,
    pub seed: u64,
    pub reference_seed: u64,
    pub summary: Summary,
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| csv_error(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse {
            path: path.to_path_buf(),
            message: format!("{other:?}"),
        },
    }
}

fn prefixed(prefix: &str, count: usize) -> impl Iterator<Item = String> + '_ {
    (1..=count).map(move |l| format!("{prefix}_{l}"))
}

/// Writes the four output files into `dir` (created if missing).
pub fn emit_outputs(record: &RunRecord, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let last = record.final_step();
    let m = last.weights[0].dim();
    let d = record.decisions.first().map_or(0, Vec::len);

    let front = dir.join(FRONT_CSV);
    let mut w = csv_writer(&front)?;
    let header: Vec<String> = std::iter::once("i".to_string())
        .chain(prefixed("w", m))
        .chain(prefixed("f", m))
        .chain(prefixed("x", d))
        .collect();
    w.write_record(&header).map_err(|e| csv_error(&front, e))?;
    for (i, ((wt, f), x)) in last
        .weights
        .iter()
        .zip(&last.fronts)
        .zip(&record.decisions)
        .enumerate()
    {
        let row: Vec<String> = std::iter::once(i.to_string())
            .chain(wt.as_slice().iter().map(|v| num(*v)))
            .chain(f.iter().map(|v| num(*v)))
            .chain(x.iter().map(|v| num(*v)))
            .collect();
        w.write_record(&row).map_err(|e| csv_error(&front, e))?;
    }
    w.flush().map_err(|e| Error::io(&front, e))?;

    let metrics = dir.join(METRICS_CSV);
    let mut w = csv_writer(&metrics)?;
    w.write_record(["k", "energy", "igd"])
        .map_err(|e| csv_error(&metrics, e))?;
    let s = &record.metrics;
    for ((k, e), g) in s.k.iter().zip(&s.energy).zip(&s.igd) {
        w.write_record([k.to_string(), num(*e), num(*g)])
            .map_err(|e| csv_error(&metrics, e))?;
    }
    w.flush().map_err(|e| Error::io(&metrics, e))?;

    let traj = dir.join(TRAJECTORY_CSV);
    let mut w = csv_writer(&traj)?;
    let header: Vec<String> = ["k".to_string(), "i".to_string()]
        .into_iter()
        .chain(prefixed("w", m))
        .chain(prefixed("f", m))
        .collect();
    w.write_record(&header).map_err(|e| csv_error(&traj, e))?;
    for rec in &record.history {
        for (i, (wt, f)) in rec.weights.iter().zip(&rec.fronts).enumerate() {
            let row: Vec<String> = [rec.k.to_string(), i.to_string()]
                .into_iter()
                .chain(wt.as_slice().iter().map(|v| num(*v)))
                .chain(f.iter().map(|v| num(*v)))
                .collect();
            w.write_record(&row).map_err(|e| csv_error(&traj, e))?;
        }
    }
    w.flush().map_err(|e| Error::io(&traj, e))?;

    let json = dir.join(RUN_JSON);
    let doc = RunJson {
        config: record.config.clone(),
        seed: record.seed(),
        reference_seed: record.config.reference_seed,
        summary: record.summary(),
    };
    let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse {
        path: json.clone(),
        message: e.to_string(),
    })?;
    fs::write(&json, text + "\n").map_err(|e| Error::io(&json, e))?;

    Ok(vec![front, metrics, traj, json])
}

fn read_rows(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let header = r
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<Vec<Vec<String>>, _>>()
        .map_err(|e| csv_error(path, e))?;
    Ok((header, rows))
}

fn parse_num<T: std::str::FromStr>(path: &Path, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        message: format!("bad number `{s}`"),
    })
}

fn columns(header: &[String], prefix: &str) -> Vec<usize> {
    let tag = format!("{prefix}_");
    header
        .iter()
        .enumerate()
        .filter(|(_, h)| h.starts_with(&tag))
        .map(|(c, _)| c)
        .collect()
}

/// Rows of `front.csv` as (weights, images, decisions).
pub type FrontRows = (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>);

pub fn read_front_csv(path: &Path) -> Result<FrontRows> {
    let (header, rows) = read_rows(path)?;
    let (wc, fc, xc) = (
        columns(&header, "w"),
        columns(&header, "f"),
        columns(&header, "x"),
    );
    let pick = |row: &[String], cols: &[usize]| -> Result<Vec<f64>> {
        cols.iter().map(|&c| parse_num(path, &row[c])).collect()
    };
    let mut out: FrontRows = (Vec::new(), Vec::new(), Vec::new());
    for row in &rows {
        out.0.push(pick(row, &wc)?);
        out.1.push(pick(row, &fc)?);
        out.2.push(pick(row, &xc)?);
    }
    Ok(out)
}

pub fn read_metrics_csv(path: &Path) -> Result<MetricSeries> {
    let (_, rows) = read_rows(path)?;
    let mut s = MetricSeries::default();
    for row in rows {
        if row.len() != 3 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                message: "metrics rows need 3 columns".into(),
            });
        }
        s.push(
            parse_num(path, &row[0])?,
            parse_num(path, &row[1])?,
            parse_num(path, &row[2])?,
        );
    }
    Ok(s)
}

fn read_trajectory_csv(path: &Path) -> Result<Vec<StepRecord>> {
    let (header, rows) = read_rows(path)?;
    let (wc, fc) = (columns(&header, "w"), columns(&header, "f"));
    let mut history: Vec<StepRecord> = Vec::new();
    for row in &rows {
        let k: usize = parse_num(path, &row[0])?;
        let w: Vec<f64> = wc
            .iter()
            .map(|&c| parse_num(path, &row[c]))
            .collect::<Result<_>>()?;
        let f: Vec<f64> = fc
            .iter()
            .map(|&c| parse_num(path, &row[c]))
            .collect::<Result<_>>()?;
        let weight = Weight::new(w).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        match history.last_mut() {
            Some(rec) if rec.k == k => {
                rec.weights.push(weight);
                rec.fronts.push(f);
            }
            _ => history.push(StepRecord {
                k,
                weights: vec![weight],
                fronts: vec![f],
            }),
        }
    }
    Ok(history)
}

/// Rebuilds a run record from a directory written by [`emit_outputs`].
pub fn load_record(dir: &Path) -> Result<RunRecord> {
    let json_path = dir.join(RUN_JSON);
    let text = fs::read_to_string(&json_path).map_err(|e| Error::io(&json_path, e))?;
    let doc: RunJson = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: json_path.clone(),
        message: e.to_string(),
    })?;
    let (_, _, decisions) = read_front_csv(&dir.join(FRONT_CSV))?;
    let metrics = read_metrics_csv(&dir.join(METRICS_CSV))?;
    let history = read_trajectory_csv(&dir.join(TRAJECTORY_CSV))?;
    if history.is_empty() {
        return Err(Error::Parse {
            path: dir.join(TRAJECTORY_CSV),
            message: "empty trajectory".into(),
        });
    }
    let m = doc.config.problem()?.m();
    if history[0].weights[0].dim() != m {
        return Err(Error::Parse {
            path: dir.join(TRAJECTORY_CSV),
            message: format!("trajectory has the wrong number of objectives (expected {m})"),
        });
    }
    Ok(RunRecord {
        config: doc.config,
        history,
        metrics,
        decisions,
        duration_secs: doc.summary.duration_secs,
    })
}
