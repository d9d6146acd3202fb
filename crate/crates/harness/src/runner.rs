//! Executes planned runs, in parallel when asked, and streams results
//! into an append-only CSV. One row per finished run, flushed
//! immediately so an interrupted experiment can be resumed with the
//! completed (cell, run index) pairs skipped.

use std::collections::{BTreeMap, HashSet};
use std::fs::OpenOptions;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use anyhow::{bail, Context, Result};
use pdo_core::algorithms::run;
use pdo_core::coverage::ProblemInstance;
use pdo_core::graph::Graph;
use serde::{Deserialize, Serialize};

use crate::config::{resolve_graph, ExperimentConfig};
use crate::matrix::{expand_matrix, PlannedRun};

/// One CSV record. Field order is the column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub graph: String,
    pub algorithm: String,
    #[serde(rename = "B")]
    pub budget: u64,
    #[serde(rename = "m")]
    pub margin: u64,
    pub mu: usize,
    pub seed: u64,
    pub run_index: u32,
    pub f_min: u32,
    pub best_f: Option<u32>,
    pub entropy: Option<f64>,
    pub evaluations: u64,
    pub wall_ms: u64,
}

impl ResultRow {
    /// Identity of a run within an experiment, used for resume
    /// bookkeeping. Seeds are derived from these fields, so they are
    /// deliberately not part of the key.
    pub fn key(&self) -> (String, String, u64, u64, usize, u32) {
        (
            self.graph.clone(),
            self.algorithm.clone(),
            self.budget,
            self.margin,
            self.mu,
            self.run_index,
        )
    }
}

pub fn read_rows<P: AsRef<Path>>(path: P) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path)
        .with_context(|| format!("opening results {}", path.display()))?;
    let mut rows = Vec::new();
    for record in reader.deserialize() {
        rows.push(record.with_context(|| format!("parsing results {}", path.display()))?);
    }
    Ok(rows)
}

#[derive(Debug)]
pub struct ExecutionReport {
    pub executed: usize,
    pub skipped: usize,
    pub csv_path: PathBuf,
}

fn planned_row(planned: &PlannedRun, graphs: &BTreeMap<String, Graph>) -> ResultRow {
    let cfg = &planned.cfg;
    let graph = &graphs[&cfg.graph_id];
    let instance = ProblemInstance::new(graph, cfg.budget, cfg.margin);
    let record = run(cfg, &instance);
    ResultRow {
        graph: cfg.graph_id.clone(),
        algorithm: cfg.algorithm.name().to_string(),
        budget: cfg.budget,
        margin: cfg.margin,
        mu: cfg.mu,
        seed: cfg.seed,
        run_index: planned.run_index,
        f_min: record.f_min,
        best_f: record.best_f,
        entropy: record.final_entropy,
        evaluations: record.evaluations,
        wall_ms: record.wall_ms,
    }
}

/// Runs the whole grid described by `cfg`. `workers` bounds the rayon
/// pool (`None` = available parallelism). With `resume`, rows already
/// present in the output CSV are kept and their runs skipped; without
/// it, a nonempty output file is an error rather than silently mixing
/// experiments.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    workers: Option<usize>,
    resume: bool,
) -> Result<ExecutionReport> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("creating output dir {}", cfg.out_dir.display()))?;
    let csv_path = cfg.out_dir.join("results.csv");

    let file_len = std::fs::metadata(&csv_path).map(|m| m.len()).unwrap_or(0);
    let mut done: HashSet<(String, String, u64, u64, usize, u32)> = HashSet::new();
    if file_len > 0 {
        if !resume {
            bail!(
                "{} already contains results; pass --resume to continue it \
                 or point --out elsewhere",
                csv_path.display()
            );
        }
        for row in read_rows(&csv_path)? {
            done.insert(row.key());
        }
    }

    let mut graphs: BTreeMap<String, Graph> = BTreeMap::new();
    for name in &cfg.graphs {
        if !graphs.contains_key(name) {
            graphs.insert(name.clone(), resolve_graph(name, &cfg.data_dir)?);
        }
    }

    let planned: Vec<PlannedRun> = expand_matrix(cfg)
        .into_iter()
        .filter(|p| {
            !done.contains(&(
                p.cfg.graph_id.clone(),
                p.cfg.algorithm.name().to_string(),
                p.cfg.budget,
                p.cfg.margin,
                p.cfg.mu,
                p.run_index,
            ))
        })
        .collect();
    let skipped = done.len();

    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&csv_path)
        .with_context(|| format!("opening {}", csv_path.display()))?;
    let writer = Mutex::new(
        csv::WriterBuilder::new()
            .has_headers(file_len == 0)
            .from_writer(file),
    );

    let total = planned.len();
    let finished = std::sync::atomic::AtomicUsize::new(0);
    let write_row = |planned_run: &PlannedRun| -> Result<()> {
        let row = planned_row(planned_run, &graphs);
        let mut guard = writer.lock().expect("csv writer poisoned");
        guard.serialize(&row)?;
        guard.flush()?;
        let n = finished.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
        eprintln!(
            "[{n}/{total}] {} {} B={} m={} mu={} run={} best_f={} H={}",
            row.graph,
            row.algorithm,
            row.budget,
            row.margin,
            row.mu,
            row.run_index,
            row.best_f.map_or_else(|| "-".into(), |v| v.to_string()),
            row.entropy.map_or_else(|| "-".into(), |h| format!("{h:.2}")),
        );
        Ok(())
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .context("building worker pool")?;
    let results: Vec<Result<()>> = pool.install(|| {
        use rayon::prelude::*;
        planned.par_iter().map(write_row).collect()
    });
    for r in results {
        r?;
    }

    Ok(ExecutionReport { executed: total, skipped, csv_path })
}
