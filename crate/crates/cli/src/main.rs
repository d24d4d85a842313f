use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use neuromat::experiment::{
    encode_features, format_table, load_graphs, read_results, run_experiment, ExperimentConfig,
    Method, Readout, SyntheticParams,
};
use neuromat::readout::Task;
use neuromat::spike::encode_graph;
use neuromat::structures::save_dataset;

#[derive(Parser)]
#[command(name = "neuromat", version, about = "Molecular graph encoders and bandgap benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded synthetic dataset as JSON.
    GenSynthetic {
        #[arg(long, default_value_t = 54)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        max_atoms: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Encode every record and write the feature vectors as JSON.
    Encode {
        #[command(flatten)]
        opts: ExperimentArgs,
        /// Seed for codebooks or reservoir wiring.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Print each record's spike frames as 0/1 strings.
        #[arg(long)]
        dump_frames: bool,
    },
    /// Run one experiment and append its row to the results CSV.
    Run {
        #[command(flatten)]
        opts: ExperimentArgs,
    },
    /// Print the method × metric table for a results CSV.
    Report {
        results: PathBuf,
    },
}

/// Flags mirror the config file fields and override them.
#[derive(Args)]
struct ExperimentArgs {
    /// JSON config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    task: Option<Task>,
    #[arg(long)]
    readout: Option<Readout>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    reservoir_size: Option<usize>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    base_seed: Option<u64>,
    /// Dataset JSON; the synthetic generator is used without it.
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long)]
    synthetic_seed: Option<u64>,
    #[arg(long)]
    synthetic_n: Option<usize>,
    #[arg(long)]
    max_atoms: Option<usize>,
    /// Results CSV to append to.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    train_fraction: Option<f64>,
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    length_scale: Option<f64>,
    #[arg(long)]
    center_positions: bool,
    #[arg(long)]
    ridge: Option<f64>,
    /// Fixed timestamp for the results row.
    #[arg(long)]
    timestamp: Option<String>,
}

macro_rules! set {
    ($cfg:ident, $($field:ident <- $value:expr),+ $(,)?) => {
        $(if let Some(v) = $value {
            $cfg.$field = v;
        })+
    };
}

impl ExperimentArgs {
    fn resolve(self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                ExperimentConfig::from_json(&text).with_context(|| path.display().to_string())?
            }
            None => ExperimentConfig::default(),
        };
        set!(cfg,
            method <- self.method,
            task <- self.task,
            dim <- self.dim,
            reservoir_size <- self.reservoir_size,
            base_seed <- self.base_seed,
            train_fraction <- self.train_fraction,
            cutoff <- self.cutoff,
            levels <- self.levels,
            length_scale <- self.length_scale,
            ridge <- self.ridge,
        );
        let SyntheticParams { seed, n, max_atoms } = cfg.synthetic;
        cfg.synthetic = SyntheticParams {
            seed: self.synthetic_seed.unwrap_or(seed),
            n: self.synthetic_n.unwrap_or(n),
            max_atoms: self.max_atoms.unwrap_or(max_atoms),
        };
        if self.readout.is_some() {
            cfg.readout = self.readout;
        }
        if self.runs.is_some() {
            cfg.runs = self.runs;
        }
        if self.dataset.is_some() {
            cfg.dataset_path = self.dataset;
        }
        if self.output.is_some() {
            cfg.output_path = self.output;
        }
        if self.timestamp.is_some() {
            cfg.timestamp = self.timestamp;
        }
        cfg.center_positions |= self.center_positions;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn encode(cfg: &ExperimentConfig, seed: u64, out: Option<PathBuf>, dump_frames: bool) -> Result<()> {
    let graphs = load_graphs(cfg)?;
    if dump_frames {
        for g in &graphs {
            println!("# {}", g.id());
            for frame in encode_graph(g)? {
                println!("{frame}");
            }
        }
    }
    let Some(out) = out else {
        if !dump_frames {
            bail!("nothing to do: pass --out and/or --dump-frames");
        }
        return Ok(());
    };
    let rows = encode_features(&graphs, cfg, seed)?;
    let records: Vec<serde_json::Value> = graphs
        .iter()
        .zip(rows)
        .map(|(g, values)| serde_json::json!({ "id": g.id(), "values": values }))
        .collect();
    let doc = serde_json::json!({
        "method": cfg.method,
        "dim_or_size": cfg.dim_or_size(),
        "seed": seed,
        "levels": cfg.levels,
        "length_scale": cfg.length_scale,
        "records": records,
    });
    std::fs::write(&out, serde_json::to_string(&doc)?)
        .with_context(|| format!("writing {}", out.display()))?;
    eprintln!("encoded {} records to {}", graphs.len(), out.display());
    Ok(())
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::GenSynthetic {
            n,
            max_atoms,
            seed,
            out,
        } => {
            let params = SyntheticParams { seed, n, max_atoms };
            let graphs = neuromat::experiment::synthetic_dataset(&params)?;
            save_dataset(&graphs, &out)?;
            eprintln!("wrote {} records to {}", graphs.len(), out.display());
        }
        Command::Encode {
            opts,
            seed,
            out,
            dump_frames,
        } => encode(&opts.resolve()?, seed, out, dump_frames)?,
        Command::Run { opts } => {
            let cfg = opts.resolve()?;
            let outcome = run_experiment(&cfg)?;
            println!("{}", format_table(std::slice::from_ref(&outcome.row)));
            println!(
                "{} over {} run(s): {:.4} ± {:.4} (constant baseline {:.4})",
                outcome.row.metric,
                outcome.runs.len(),
                outcome.row.mean,
                outcome.row.std,
                outcome.baseline_mean()
            );
        }
        Command::Report { results } => {
            let rows = read_results(&results)?;
            println!("{}", format_table(&rows));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
