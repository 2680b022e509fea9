use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use densebandit::bench::{
    knockout_weights, mean_std, parse_noise, parse_seeds, parse_stop_mode, read_results,
    run_experiment, write_atomic, Algorithm, ExperimentConfig,
};
use densebandit::io::{load_edge_list, write_weights};
use densebandit::Error;

/// Online densest-subgraph discovery from noisy subset-sum feedback.
#[derive(Parser)]
#[command(name = "densebandit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write knockout weights for a graph to a weight file.
    GenWeights {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        weight_seed: u64,
        /// Destination weight file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact densest subgraph by parametric min cut.
    Exact(RunArgs),
    /// Exhaustive search (at most 20 vertices).
    Brute(RunArgs),
    /// Greedy peeling.
    GOracle(RunArgs),
    /// Fixed-confidence DS-Lin.
    Dslin(RunArgs),
    /// Fixed-budget DS-SR.
    Dssr(RunArgs),
    /// Naive equal-split baseline.
    Naive(RunArgs),
    /// R-Oracle baseline.
    ROracle(RunArgs),
    /// Summarize results files.
    Report {
        #[arg(required = true)]
        results: Vec<PathBuf>,
    },
    /// Run an experiment described by a key=value config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Edge-list file.
    #[arg(long)]
    graph: PathBuf,
    /// Weight file; knockout weights are generated when omitted.
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    weight_seed: u64,
    /// Seed list such as `7`, `1,2,3` or `0..100`.
    #[arg(long, alias = "seed", default_value = "0")]
    seeds: String,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Per-edge Gaussian noise scale, or `none`.
    #[arg(long, default_value = "1")]
    noise: String,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 100.0)]
    lambda: f64,
    /// Sub-Gaussian scale assumed by DS-Lin.
    #[arg(long = "R", default_value_t = 1.0)]
    r: f64,
    /// Norm bound on the weights; defaults to 100 sqrt(m).
    #[arg(long = "L")]
    l: Option<f64>,
    /// Minimum arm size.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Number of arms; defaults to 2m.
    #[arg(long)]
    arms: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    /// Round cap including initialization; defaults to m + 10000.
    #[arg(long)]
    max_iters: Option<u64>,
    /// `conservative` or `exact`.
    #[arg(long, default_value = "conservative")]
    stop_mode: String,
    #[arg(long, default_value_t = 0.9)]
    gamma: f64,
    /// Use lower interval ends min(w - 1, 0) in R-Oracle.
    #[arg(long)]
    literal_intervals: bool,
}

impl RunArgs {
    fn into_config(self, algorithm: Algorithm) -> Result<ExperimentConfig, Error> {
        let mut c = ExperimentConfig::new(algorithm, self.graph, self.out);
        c.weights = self.weights;
        c.weight_seed = self.weight_seed;
        c.seeds = parse_seeds(&self.seeds)?;
        c.noise = parse_noise(&self.noise)?;
        c.epsilon = self.epsilon;
        c.delta = self.delta;
        c.lambda = self.lambda;
        c.r = self.r;
        c.l = self.l;
        c.k = self.k;
        c.arms = self.arms;
        c.budget = self.budget;
        c.max_iters = self.max_iters;
        c.stop_mode = parse_stop_mode(&self.stop_mode)?;
        c.gamma = self.gamma;
        c.literal_intervals = self.literal_intervals;
        Ok(c)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn execute(command: Command) -> Result<ExitCode, Error> {
    let (algorithm, args) = match command {
        Command::GenWeights {
            graph,
            weight_seed,
            out,
        } => return gen_weights(&graph, weight_seed, &out),
        Command::Report { results } => return report(&results),
        Command::Run { config } => {
            if !config.is_file() {
                return Err(Error::Config(format!(
                    "config file {} does not exist",
                    config.display()
                )));
            }
            return run(ExperimentConfig::load(&config)?);
        }
        Command::Exact(a) => (Algorithm::Exact, a),
        Command::Brute(a) => (Algorithm::Brute, a),
        Command::GOracle(a) => (Algorithm::GOracle, a),
        Command::Dslin(a) => (Algorithm::DsLin, a),
        Command::Dssr(a) => (Algorithm::DsSr, a),
        Command::Naive(a) => (Algorithm::Naive, a),
        Command::ROracle(a) => (Algorithm::ROracle, a),
    };
    run(args.into_config(algorithm)?)
}

fn gen_weights(graph: &Path, seed: u64, out: &Path) -> Result<ExitCode, Error> {
    if !graph.is_file() {
        return Err(Error::Config(format!(
            "graph file {} does not exist",
            graph.display()
        )));
    }
    let g = load_edge_list(graph)?.graph;
    let w = knockout_weights(&g, seed)?;
    let mut bytes = Vec::new();
    write_weights(&g, &w, &mut bytes).map_err(|e| Error::Config(e.to_string()))?;
    write_atomic(out, &bytes)?;
    println!("wrote {} weights to {}", w.len(), out.display());
    Ok(ExitCode::SUCCESS)
}

fn run(config: ExperimentConfig) -> Result<ExitCode, Error> {
    let batch = run_experiment(&config)?;
    for (seed, msg) in &batch.failures {
        eprintln!("seed {seed} failed: {msg}");
    }
    if !batch.records.is_empty() {
        print_summary(&batch.records);
    }
    println!(
        "results written to {}",
        config.out.join("results.csv").display()
    );
    Ok(if batch.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn print_summary(records: &[densebandit::bench::RunRecord]) {
    let column = |f: &dyn Fn(&densebandit::bench::RunRecord) -> f64| {
        mean_std(&records.iter().map(f).collect::<Vec<_>>())
    };
    let (q, qs) = column(&|r| r.quality);
    let (single, _) = column(&|r| r.single_edge_queries as f64);
    let (frac, _) = column(&|r| r.single_edge_fraction());
    let (ms, _) = column(&|r| r.elapsed_ms);
    let first = &records[0];
    let opt = first.opt.map_or("-".to_string(), |o| format!("{o:.4}"));
    println!(
        "{} on {}: {} runs, quality {q:.4} +- {qs:.4}, opt {opt}, single-edge queries {single:.1} ({:.1}%), {ms:.1} ms/run",
        first.algo,
        first.graph,
        records.len(),
        100.0 * frac
    );
}

fn report(paths: &[PathBuf]) -> Result<ExitCode, Error> {
    for path in paths {
        if !path.is_file() {
            return Err(Error::Config(format!(
                "results file {} does not exist",
                path.display()
            )));
        }
        let records = read_results(path)?;
        if records.is_empty() {
            println!("{}: no runs", path.display());
        } else {
            print_summary(&records);
        }
    }
    Ok(ExitCode::SUCCESS)
}
