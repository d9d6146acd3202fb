//! Experiment configuration: JSON schema, validation, presets, and
//! named synthetic stand-ins for benchmark graphs that are not on disk.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use pdo_core::algorithms::Algorithm;
use pdo_core::graph::Graph;
use serde::{Deserialize, Serialize};

fn default_runs() -> u32 {
    30
}
fn default_t_max() -> u64 {
    10_000_000
}
fn default_p_c() -> f64 {
    0.2
}
fn default_beta() -> f64 {
    1.5
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("results")
}
fn default_data_dir() -> PathBuf {
    PathBuf::from("data")
}

/// Full description of one experiment grid. Serialized as JSON; every
/// field except the five lists may be omitted and falls back to the
/// defaults used throughout the experiments (30 runs of 10^7
/// evaluations, p_c = 0.2, beta = 1.5).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graphs: Vec<String>,
    pub budgets: Vec<u64>,
    pub margins: Vec<u64>,
    pub mus: Vec<usize>,
    pub algorithms: Vec<String>,
    #[serde(default = "default_runs")]
    pub runs: u32,
    #[serde(default = "default_t_max")]
    pub t_max: u64,
    #[serde(default = "default_p_c")]
    pub p_c: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default = "default_data_dir")]
    pub data_dir: PathBuf,
    #[serde(default)]
    pub trace_every: Option<u64>,
}

impl ExperimentConfig {
    pub fn from_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.graphs.is_empty() {
            bail!("config lists no graphs");
        }
        if self.budgets.is_empty() {
            bail!("config lists no budgets");
        }
        if self.margins.is_empty() {
            bail!("config lists no margins");
        }
        if self.mus.is_empty() {
            bail!("config lists no population sizes");
        }
        if self.algorithms.is_empty() {
            bail!("config lists no algorithms");
        }
        for name in &self.algorithms {
            Algorithm::from_str(name).map_err(|e| anyhow::anyhow!(e))?;
        }
        if self.runs == 0 {
            bail!("runs must be at least 1");
        }
        if self.t_max == 0 {
            bail!("t_max must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.p_c) {
            bail!("p_c {} outside [0, 1]", self.p_c);
        }
        if self.beta <= 1.0 {
            bail!("beta {} must exceed 1", self.beta);
        }
        if self.mus.contains(&0) {
            bail!("population sizes must be at least 1");
        }
        for &b in &self.budgets {
            for &m in &self.margins {
                if m > b {
                    bail!("margin {m} exceeds budget {b}");
                }
            }
        }
        Ok(())
    }

    pub fn parsed_algorithms(&self) -> Vec<Algorithm> {
        self.algorithms
            .iter()
            .map(|s| Algorithm::from_str(s).expect("validated algorithm name"))
            .collect()
    }
}

fn all_algorithm_names() -> Vec<String> {
    Algorithm::ALL.iter().map(|a| a.name().to_string()).collect()
}

/// Reduced grid for quick directional checks on a single machine:
/// one graph, 10 runs of 10^6 evaluations per cell.
pub fn desk_preset() -> ExperimentConfig {
    ExperimentConfig {
        graphs: vec!["frb30-15-1".into()],
        budgets: vec![20_000],
        margins: vec![2_000],
        mus: vec![10, 50],
        algorithms: all_algorithm_names(),
        runs: 10,
        t_max: 1_000_000,
        p_c: default_p_c(),
        beta: default_beta(),
        base_seed: 0,
        out_dir: default_out_dir(),
        data_dir: default_data_dir(),
        trace_every: None,
    }
}

/// The full published grid: four graphs, B in {20000, 40000},
/// m in {2000, 4000}, mu in {10, 20, 50, 100}, 30 runs of 10^7
/// evaluations per cell. Expect machine-days of compute.
pub fn paper_preset() -> ExperimentConfig {
    ExperimentConfig {
        graphs: vec![
            "frb30-15-1".into(),
            "frb30-15-2".into(),
            "frb35-17-1".into(),
            "frb40-19-1".into(),
        ],
        budgets: vec![20_000, 40_000],
        margins: vec![2_000, 4_000],
        mus: vec![10, 20, 50, 100],
        algorithms: all_algorithm_names(),
        runs: 30,
        t_max: 10_000_000,
        p_c: default_p_c(),
        beta: default_beta(),
        base_seed: 0,
        out_dir: default_out_dir(),
        data_dir: default_data_dir(),
        trace_every: None,
    }
}

/// Shape parameters for a synthetic stand-in graph: disjoint cliques
/// plus cross edges confined to a subset of group pairs, tuned so the
/// greedy-sampling statistics land near the published values for the
/// benchmark of the same name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwinSpec {
    pub groups: usize,
    pub group_size: usize,
    pub constrained_pairs: usize,
    pub edges: usize,
    pub seed: u64,
}

impl TwinSpec {
    pub fn build(&self) -> Graph {
        Graph::random_blocked(
            self.groups,
            self.group_size,
            self.constrained_pairs,
            self.edges,
            self.seed,
        )
    }
}

/// Synthetic stand-ins for the four benchmark graphs, keyed by their
/// short names. Node and edge counts match the published instances.
pub fn twin_catalog() -> BTreeMap<&'static str, TwinSpec> {
    BTreeMap::from([
        (
            "frb30-15-1",
            TwinSpec { groups: 30, group_size: 15, constrained_pairs: 115, edges: 17_827, seed: 2 },
        ),
        (
            "frb30-15-2",
            TwinSpec { groups: 30, group_size: 15, constrained_pairs: 115, edges: 17_874, seed: 3 },
        ),
        (
            "frb35-17-1",
            TwinSpec { groups: 35, group_size: 17, constrained_pairs: 165, edges: 27_856, seed: 4 },
        ),
        (
            "frb40-19-1",
            TwinSpec { groups: 40, group_size: 19, constrained_pairs: 206, edges: 41_314, seed: 1 },
        ),
    ])
}

fn catalog_key(name: &str) -> &str {
    name.strip_suffix("-mis").unwrap_or(name)
}

/// Locate a configured graph. Tries, in order: the name as a literal
/// path, `<data_dir>/<name>.mis`, `<data_dir>/<name>`, and finally the
/// synthetic twin catalog (with a stderr notice, since a stand-in is
/// not the published benchmark). Costs are set to (degree + 1)^2.
pub fn resolve_graph(name: &str, data_dir: &Path) -> Result<Graph> {
    let literal = Path::new(name);
    let candidates = [
        literal.to_path_buf(),
        data_dir.join(format!("{name}.mis")),
        data_dir.join(name),
    ];
    for path in &candidates {
        if path.is_file() {
            let g = Graph::load_dimacs(path)
                .with_context(|| format!("loading graph {}", path.display()))?;
            return Ok(g.with_degree_squared_costs());
        }
    }
    if let Some(spec) = twin_catalog().get(catalog_key(name)) {
        eprintln!(
            "note: graph file for '{name}' not found; using the synthetic \
             stand-in ({} nodes, {} edges). Place the benchmark file at \
             {} to run on the published instance.",
            spec.groups * spec.group_size,
            spec.edges,
            data_dir.join(format!("{name}.mis")).display(),
        );
        return Ok(spec.build().with_degree_squared_costs());
    }
    bail!(
        "graph '{name}' not found: no such file, nothing at {}, and no \
         synthetic stand-in of that name (known: {})",
        data_dir.join(format!("{name}.mis")).display(),
        twin_catalog().keys().copied().collect::<Vec<_>>().join(", "),
    );
}
