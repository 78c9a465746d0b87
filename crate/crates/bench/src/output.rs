//! Result files: `results.csv`, `summary.json` and per-trial traces.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use flate2::write::GzEncoder;
use flate2::Compression;
use hadopt::TraceRecord;
use serde::Serialize;

use crate::runner::{BenchResult, CellSummary, Failure, TrialRecord, TrialTrace};

#[derive(Serialize)]
struct SummaryFile<'a> {
    f_star: Option<f64>,
    target_value: Option<f64>,
    cells: Vec<CellSummary>,
    failures: &'a [Failure],
}

#[derive(Serialize)]
struct TraceRow {
    iteration: usize,
    f: f64,
    grad_norm: f64,
    step: f64,
    seconds: f64,
}

impl From<&TraceRecord> for TraceRow {
    fn from(r: &TraceRecord) -> Self {
        Self { iteration: r.iteration, f: r.value, grad_norm: r.grad_norm, step: r.step, seconds: r.seconds }
    }
}

pub fn trace_file_name(trace: &TrialTrace, gzip: bool) -> String {
    let ext = if gzip { "csv.gz" } else { "csv" };
    format!("{}_n{}_t{}.{ext}", trace.solver, trace.n, trace.trial)
}

pub fn write_results_csv(path: &Path, rows: &[TrialRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_json(path: &Path, result: &BenchResult) -> Result<()> {
    let summary = SummaryFile {
        f_star: result.f_star,
        target_value: result.target_value,
        cells: result.summary(),
        failures: &result.failures,
    };
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &summary)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Writes one trace as CSV to any sink.
pub fn write_trace<W: Write>(sink: W, records: &[TraceRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(sink);
    w.write_record(["iteration", "f", "grad_norm", "step", "seconds"])?;
    for r in records {
        w.serialize(TraceRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

fn write_trace_file(path: &Path, records: &[TraceRecord], gzip: bool) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    if gzip {
        let mut enc = GzEncoder::new(BufWriter::new(file), Compression::default());
        write_trace(&mut enc, records)?;
        enc.finish()?.flush()?;
    } else {
        let mut w = BufWriter::new(file);
        write_trace(&mut w, records)?;
        w.flush()?;
    }
    Ok(())
}

/// Paths written by [`write_all`].
#[derive(Debug, Clone)]
pub struct Written {
    pub results: PathBuf,
    pub summary: PathBuf,
    pub traces: Vec<PathBuf>,
}

pub fn write_all(result: &BenchResult, out_dir: &Path, gzip_traces: bool) -> Result<Written> {
    let trace_dir = out_dir.join("traces");
    fs::create_dir_all(&trace_dir).with_context(|| format!("creating {}", trace_dir.display()))?;
    let results = out_dir.join("results.csv");
    write_results_csv(&results, &result.rows)?;
    let summary = out_dir.join("summary.json");
    write_summary_json(&summary, result)?;
    let mut traces = Vec::with_capacity(result.traces.len());
    for t in &result.traces {
        let path = trace_dir.join(trace_file_name(t, gzip_traces));
        write_trace_file(&path, &t.records, gzip_traces)?;
        traces.push(path);
    }
    Ok(Written { results, summary, traces })
}
