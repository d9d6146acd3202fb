//! Aggregation of result rows: per-cell means and pairwise
//! Mann-Whitney tests, rendered as a Markdown table with one row per
//! (graph, B, m, mu) cell.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use pdo_core::algorithms::Algorithm;
use pdo_core::stats::{format_p, mann_whitney_u};

use crate::runner::ResultRow;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AlgorithmStats {
    pub best_f: Vec<f64>,
    pub entropy: Vec<f64>,
    pub runs: usize,
}

impl AlgorithmStats {
    pub fn mean_best_f(&self) -> Option<f64> {
        mean(&self.best_f)
    }

    pub fn mean_entropy(&self) -> Option<f64> {
        mean(&self.entropy)
    }
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub graph: String,
    pub budget: u64,
    pub margin: u64,
    pub mu: usize,
    pub per_algorithm: BTreeMap<String, AlgorithmStats>,
}

/// Groups rows into cells sorted by (graph, B, m, mu). Runs with no
/// accepted solution contribute to `runs` but not to the means.
pub fn summarize_cells(rows: &[ResultRow]) -> Vec<CellSummary> {
    let mut cells: BTreeMap<(String, u64, u64, usize), CellSummary> = BTreeMap::new();
    for row in rows {
        let key = (row.graph.clone(), row.budget, row.margin, row.mu);
        let cell = cells.entry(key).or_insert_with(|| CellSummary {
            graph: row.graph.clone(),
            budget: row.budget,
            margin: row.margin,
            mu: row.mu,
            per_algorithm: BTreeMap::new(),
        });
        let stats = cell.per_algorithm.entry(row.algorithm.clone()).or_default();
        stats.runs += 1;
        if let Some(f) = row.best_f {
            stats.best_f.push(f as f64);
        }
        if let Some(h) = row.entropy {
            stats.entropy.push(h);
        }
    }
    cells.into_values().collect()
}

/// Algorithms present across the cells, in canonical order.
pub fn algorithms_present(cells: &[CellSummary]) -> Vec<String> {
    Algorithm::ALL
        .iter()
        .map(|a| a.name().to_string())
        .filter(|name| cells.iter().any(|c| c.per_algorithm.contains_key(name)))
        .collect()
}

/// Consecutive canonical pairs among the algorithms present, e.g.
/// DIVEA vs PDO, PDO vs PDO-C, PDO-C vs PDO-CH when all four ran.
pub fn default_pairs(cells: &[CellSummary]) -> Vec<(String, String)> {
    let present = algorithms_present(cells);
    present
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect()
}

pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for part in text.split(',') {
        let Some((a, b)) = part.split_once(':') else {
            bail!("pair '{part}' is not of the form ALG_A:ALG_B");
        };
        for name in [a, b] {
            Algorithm::from_str(name).map_err(|e| anyhow::anyhow!(e))?;
        }
        pairs.push((a.to_string(), b.to_string()));
    }
    if pairs.is_empty() {
        bail!("no pairs given");
    }
    Ok(pairs)
}

fn pair_p(cell: &CellSummary, pair: &(String, String), metric: fn(&AlgorithmStats) -> &[f64]) -> String {
    let (Some(a), Some(b)) = (cell.per_algorithm.get(&pair.0), cell.per_algorithm.get(&pair.1))
    else {
        return "n/a".into();
    };
    let (xs, ys) = (metric(a), metric(b));
    if xs.len() < 2 || ys.len() < 2 {
        return "n/a".into();
    }
    let (_, p) = mann_whitney_u(xs, ys);
    format_p(p)
}

fn fmt_mean(m: Option<f64>) -> String {
    m.map_or_else(|| "n/a".into(), |v| format!("{v:.2}"))
}

/// Renders cells as a Markdown table: per-algorithm mean best coverage
/// and mean diversity, with a two-sided p-value column per requested
/// algorithm pair and metric.
pub fn render_markdown(cells: &[CellSummary], pairs: &[(String, String)]) -> String {
    let algorithms = algorithms_present(cells);
    let mut header = vec!["graph".into(), "B".into(), "m".into(), "mu".into()];
    for a in &algorithms {
        header.push(format!("{a} f"));
    }
    for (a, b) in pairs {
        header.push(format!("p_f {a}:{b}"));
    }
    for a in &algorithms {
        header.push(format!("{a} H"));
    }
    for (a, b) in pairs {
        header.push(format!("p_H {a}:{b}"));
    }

    let mut out = String::new();
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
    for cell in cells {
        let mut fields = vec![
            cell.graph.clone(),
            cell.budget.to_string(),
            cell.margin.to_string(),
            cell.mu.to_string(),
        ];
        for a in &algorithms {
            fields.push(fmt_mean(cell.per_algorithm.get(a).and_then(AlgorithmStats::mean_best_f)));
        }
        for pair in pairs {
            fields.push(pair_p(cell, pair, |s| &s.best_f));
        }
        for a in &algorithms {
            fields.push(fmt_mean(cell.per_algorithm.get(a).and_then(AlgorithmStats::mean_entropy)));
        }
        for pair in pairs {
            fields.push(pair_p(cell, pair, |s| &s.entropy));
        }
        let _ = writeln!(out, "| {} |", fields.join(" | "));
    }
    out
}

/// Column to test in `stats` queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    BestF,
    Entropy,
    FMin,
    Evaluations,
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "best_f" => Ok(Metric::BestF),
            "entropy" => Ok(Metric::Entropy),
            "f_min" => Ok(Metric::FMin),
            "evaluations" => Ok(Metric::Evaluations),
            other => Err(format!(
                "unknown metric '{other}' (expected best_f, entropy, f_min, or evaluations)"
            )),
        }
    }
}

/// One side of a `stats` comparison:
/// `<csv path>:<metric>[:key=value,key=value...]` with keys graph,
/// algorithm, B, m, mu, seed, or run_index. Rows must match every
/// key; rows without the metric (e.g. no accepted solution) are
/// dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleQuery {
    pub path: PathBuf,
    pub metric: Metric,
    pub equals: Vec<(String, String)>,
}

impl FromStr for SampleQuery {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.splitn(3, ':');
        let path = parts.next().filter(|p| !p.is_empty()).context("empty csv path")?;
        let metric: Metric = parts
            .next()
            .context("missing metric (expected <path>:<metric>[:k=v,...])")?
            .parse()
            .map_err(|e: String| anyhow::anyhow!(e))?;
        let mut equals = Vec::new();
        if let Some(filters) = parts.next() {
            for kv in filters.split(',').filter(|kv| !kv.is_empty()) {
                let Some((k, v)) = kv.split_once('=') else {
                    bail!("filter '{kv}' is not of the form key=value");
                };
                match k {
                    "graph" | "algorithm" | "B" | "m" | "mu" | "seed" | "run_index" => {
                        equals.push((k.to_string(), v.to_string()));
                    }
                    other => bail!("unknown filter key '{other}'"),
                }
            }
        }
        Ok(SampleQuery { path: PathBuf::from(path), metric, equals })
    }
}

impl SampleQuery {
    fn matches(&self, row: &ResultRow) -> bool {
        self.equals.iter().all(|(k, v)| match k.as_str() {
            "graph" => row.graph == *v,
            "algorithm" => row.algorithm == *v,
            "B" => row.budget.to_string() == *v,
            "m" => row.margin.to_string() == *v,
            "mu" => row.mu.to_string() == *v,
            "seed" => row.seed.to_string() == *v,
            "run_index" => row.run_index.to_string() == *v,
            _ => unreachable!("keys validated at parse time"),
        })
    }

    pub fn extract(&self, rows: &[ResultRow]) -> Vec<f64> {
        rows.iter()
            .filter(|r| self.matches(r))
            .filter_map(|r| match self.metric {
                Metric::BestF => r.best_f.map(f64::from),
                Metric::Entropy => r.entropy,
                Metric::FMin => Some(f64::from(r.f_min)),
                Metric::Evaluations => Some(r.evaluations as f64),
            })
            .collect()
    }
}
