//! CSV records for runs, histograms and traces.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One run of one algorithm on one seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algo: String,
    pub graph: String,
    pub seed: u64,
    /// Query budget, or rounds played for DS-Lin.
    pub budget: u64,
    /// True density of the output set.
    pub quality: f64,
    pub opt: Option<f64>,
    pub out_size: usize,
    pub total_queries: u64,
    pub single_edge_queries: u64,
    pub elapsed_ms: f64,
}

impl RunRecord {
    /// `single_edge_queries / total_queries`, or 0 without queries.
    pub fn single_edge_fraction(&self) -> f64 {
        if self.total_queries == 0 {
            0.0
        } else {
            self.single_edge_queries as f64 / self.total_queries as f64
        }
    }
}

/// Mean and sample standard deviation of `values`.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    let mut file = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    file.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    file.sync_all().map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner()
        .map_err(|e| Error::Config(format!("csv buffer: {e}")))
}

/// Results CSV with one row per record followed by `mean` and `std` rows.
pub fn results_csv(records: &[RunRecord]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record([
        "algo",
        "graph",
        "seed",
        "budget",
        "quality",
        "opt",
        "out_size",
        "total_queries",
        "single_edge_queries",
        "elapsed_ms",
    ])?;
    for r in records {
        w.serialize(r)?;
    }
    if let Some(first) = records.first() {
        let column = |f: &dyn Fn(&RunRecord) -> f64| -> (f64, f64) {
            mean_std(&records.iter().map(f).collect::<Vec<_>>())
        };
        let stats = [
            column(&|r| r.budget as f64),
            column(&|r| r.quality),
            column(&|r| r.opt.unwrap_or(f64::NAN)),
            column(&|r| r.out_size as f64),
            column(&|r| r.total_queries as f64),
            column(&|r| r.single_edge_queries as f64),
            column(&|r| r.elapsed_ms),
        ];
        let has_opt = records.iter().all(|r| r.opt.is_some());
        for (label, pick) in [("mean", 0usize), ("std", 1)] {
            let value = |i: usize| {
                let (m, s) = stats[i];
                if pick == 0 { m } else { s }.to_string()
            };
            w.write_record([
                first.algo.clone(),
                first.graph.clone(),
                label.to_string(),
                value(0),
                value(1),
                if has_opt { value(2) } else { String::new() },
                value(3),
                value(4),
                value(5),
                value(6),
            ])?;
        }
    }
    w.into_inner()
        .map_err(|e| Error::Config(format!("csv buffer: {e}")))
}

pub fn write_results(path: &Path, records: &[RunRecord]) -> Result<()> {
    write_atomic(path, &results_csv(records)?)
}

/// Reads per-seed records back, skipping the aggregate rows.
pub fn read_results(path: &Path) -> Result<Vec<RunRecord>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_results(file)
}

pub fn parse_results(reader: impl std::io::Read) -> Result<Vec<RunRecord>> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers()?.clone();
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        if matches!(row.get(2), Some("mean") | Some("std")) {
            continue;
        }
        out.push(row.deserialize(Some(&headers))?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct HistogramRow {
    query_size: usize,
    count: u64,
}

/// `query_size,count` rows for every size that occurred.
pub fn histogram_csv(histogram: &[u64]) -> Result<Vec<u8>> {
    let rows: Vec<HistogramRow> = histogram
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(query_size, &count)| HistogramRow { query_size, count })
        .collect();
    if rows.is_empty() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["query_size", "count"])?;
        return w
            .into_inner()
            .map_err(|e| Error::Config(format!("csv buffer: {e}")));
    }
    to_csv(&rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub(crate) struct DsLinTraceCsv {
    pub iteration: u64,
    pub incumbent_density: f64,
    pub confidence_radius: f64,
    pub estimation_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub(crate) struct DssrTraceCsv {
    pub phase: usize,
    pub survivors: usize,
    pub f_hat: f64,
    pub cumulative_queries: u64,
    pub cumulative_single_edge_queries: u64,
}

pub(crate) fn trace_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    to_csv(rows)
}
