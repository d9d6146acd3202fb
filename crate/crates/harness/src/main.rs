use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use pdo_core::stats::{format_p, mann_whitney_u, significance_label};
use pdo_harness::{
    default_pairs, desk_preset, paper_preset, parse_pairs, read_rows, render_markdown,
    run_experiment, summarize_cells, twin_catalog, ExperimentConfig, SampleQuery,
};

#[derive(Parser)]
#[command(
    name = "pdo",
    version,
    about = "Evolve diverse sets of high-quality solutions for budget-constrained \
             maximum coverage in graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// Full published grid: 4 graphs, 30 runs of 10^7 evaluations per cell
    Paper,
    /// Reduced grid: one graph, 10 runs of 10^6 evaluations per cell
    Desk,
}

#[derive(Subcommand)]
enum Command {
    /// Execute an experiment grid; writes results.csv and summary.md
    Run {
        /// JSON experiment config (see README for the schema)
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Built-in grid instead of a config file
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        /// Worker threads (default: available parallelism)
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory (overrides the config's out_dir)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Continue into an existing results.csv, skipping finished runs
        #[arg(long)]
        resume: bool,
    },
    /// Aggregate a results CSV into a Markdown comparison table
    Summarize {
        /// results.csv produced by `run`
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated algorithm pairs to test, e.g. DIVEA:PDO,PDO:PDO-C
        #[arg(long)]
        pairs: Option<String>,
    },
    /// Mann-Whitney U test between two filtered samples
    Stats {
        /// First sample: <csv>:<metric>[:key=value,...]
        #[arg(long)]
        a: String,
        /// Second sample, same syntax
        #[arg(long)]
        b: String,
    },
    /// Write the synthetic stand-in graphs as DIMACS files
    Gen {
        /// Stand-in to write (default: all known)
        #[arg(long)]
        name: Option<String>,
        /// Target directory
        #[arg(long, default_value = "data")]
        out: PathBuf,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { config, preset, workers, out, resume } => {
            cmd_run(config, preset, workers, out, resume)
        }
        Command::Summarize { input, pairs } => cmd_summarize(input, pairs),
        Command::Stats { a, b } => cmd_stats(&a, &b),
        Command::Gen { name, out } => cmd_gen(name, out),
    }
}

fn cmd_run(
    config: Option<PathBuf>,
    preset: Option<Preset>,
    workers: Option<usize>,
    out: Option<PathBuf>,
    resume: bool,
) -> Result<()> {
    let mut cfg: ExperimentConfig = match (config, preset) {
        (Some(path), None) => ExperimentConfig::from_file(path)?,
        (None, Some(Preset::Paper)) => paper_preset(),
        (None, Some(Preset::Desk)) => desk_preset(),
        (None, None) => bail!("pass --config <file> or --preset <paper|desk>"),
        (Some(_), Some(_)) => unreachable!("clap rejects --config with --preset"),
    };
    if let Some(dir) = out {
        cfg.out_dir = dir;
    }

    let report = run_experiment(&cfg, workers, resume)?;
    println!(
        "executed {} runs ({} already present), results in {}",
        report.executed,
        report.skipped,
        report.csv_path.display()
    );

    let rows = read_rows(&report.csv_path)?;
    let cells = summarize_cells(&rows);
    let table = render_markdown(&cells, &default_pairs(&cells));
    let summary_path = cfg.out_dir.join("summary.md");
    fs::write(&summary_path, &table)
        .with_context(|| format!("writing {}", summary_path.display()))?;
    println!("summary in {}", summary_path.display());
    Ok(())
}

fn cmd_summarize(input: PathBuf, pairs: Option<String>) -> Result<()> {
    let rows = read_rows(&input)?;
    if rows.is_empty() {
        bail!("{} holds no result rows", input.display());
    }
    let cells = summarize_cells(&rows);
    let pairs = match pairs {
        Some(text) => parse_pairs(&text)?,
        None => default_pairs(&cells),
    };
    print!("{}", render_markdown(&cells, &pairs));
    Ok(())
}

fn cmd_stats(a: &str, b: &str) -> Result<()> {
    let qa: SampleQuery = a.parse().context("parsing --a")?;
    let qb: SampleQuery = b.parse().context("parsing --b")?;
    let sample_a = qa.extract(&read_rows(&qa.path)?);
    let sample_b = qb.extract(&read_rows(&qb.path)?);
    if sample_a.is_empty() || sample_b.is_empty() {
        bail!(
            "empty sample (a: {} values, b: {} values)",
            sample_a.len(),
            sample_b.len()
        );
    }
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let (u, p) = mann_whitney_u(&sample_a, &sample_b);
    println!("a: n={} mean={:.4}", sample_a.len(), mean(&sample_a));
    println!("b: n={} mean={:.4}", sample_b.len(), mean(&sample_b));
    println!("U={u}");
    println!(
        "p={p:.6e} ({}), significant at 0.05: {}",
        format_p(p),
        if significance_label(p) { "yes" } else { "no" }
    );
    Ok(())
}

fn cmd_gen(name: Option<String>, out: PathBuf) -> Result<()> {
    let catalog = twin_catalog();
    let selected: Vec<&str> = match &name {
        Some(n) => {
            let key = n.strip_suffix("-mis").unwrap_or(n);
            if !catalog.contains_key(key) {
                bail!(
                    "unknown stand-in '{n}' (known: {})",
                    catalog.keys().copied().collect::<Vec<_>>().join(", ")
                );
            }
            vec![catalog.keys().copied().find(|k| *k == key).expect("checked")]
        }
        None => catalog.keys().copied().collect(),
    };
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    for key in selected {
        let graph = catalog[key].build();
        let path = out.join(format!("{key}.mis"));
        fs::write(&path, graph.to_dimacs()).with_context(|| format!("writing {}", path.display()))?;
        println!(
            "wrote {} ({} nodes, {} edges)",
            path.display(),
            graph.node_count(),
            graph.edge_count()
        );
    }
    Ok(())
}
