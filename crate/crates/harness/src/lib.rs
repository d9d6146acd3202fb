//! Experiment harness around `pdo_core`: configuration files and
//! presets, deterministic per-run seed assignment, parallel execution
//! with crash-safe CSV output, and aggregation into comparison tables.

pub mod config;
pub mod matrix;
pub mod report;
pub mod runner;

pub use config::{
    desk_preset, paper_preset, resolve_graph, twin_catalog, ExperimentConfig, TwinSpec,
};
pub use matrix::{expand_matrix, gdgs_seed, loop_seed, PlannedRun};
pub use report::{
    algorithms_present, default_pairs, parse_pairs, render_markdown, summarize_cells, CellSummary,
    Metric, SampleQuery,
};
pub use runner::{read_rows, run_experiment, ExecutionReport, ResultRow};
