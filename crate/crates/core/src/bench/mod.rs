//! Experiment harness: knockout weights, seeded batches and CSV output.

mod config;
mod records;

pub use config::{
    parse_noise, parse_seeds, parse_stop_mode, stop_mode_name, Algorithm, ExperimentConfig,
};
pub use records::{
    histogram_csv, mean_std, parse_results, read_results, results_csv, write_atomic, write_results,
    RunRecord,
};

use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::baselines::{run_naive, run_r_oracle};
use crate::dslin::{run_dslin, ArmFamily, DsLinParams};
use crate::dssr::{run_dssr, schedule_overhead};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet, WeightVector};
use crate::io::{load_edge_list, load_weights};
use crate::oracle::SamplingOracle;
use crate::solvers::{brute_force_densest, exact_densest, greedy_peeling};
use records::{trace_csv, DsLinTraceCsv, DssrTraceCsv};

/// Mixed into run seeds for the randomness an algorithm draws itself (arm
/// families, Naive's arm choice), keeping it apart from the oracle noise.
pub const ALGORITHM_SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

/// Knockout weights: `Uniform(1, 20)` on the edges of the densest subgraph of
/// the unweighted graph and `Uniform(1, 100)` on all other edges.
pub fn knockout_weights(graph: &Graph, seed: u64) -> Result<WeightVector> {
    let unit = WeightVector::uniform(graph.m(), 1.0)?;
    let core = exact_densest(graph, &unit)?.set;
    let mask = core.mask(graph.n());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = graph
        .edges()
        .iter()
        .map(|&(u, v)| {
            let high = if mask[u] && mask[v] { 20.0 } else { 100.0 };
            rng.random_range(1.0..=high)
        })
        .collect();
    WeightVector::new(weights)
}

/// Smallest power of ten not below `(n + 1)(n + 2) / 2`.
pub fn default_budget(n: usize) -> u64 {
    let overhead = schedule_overhead(n);
    let mut budget = 1u64;
    while budget < overhead {
        budget *= 10;
    }
    budget
}

/// Arm family used by DS-Lin and Naive for a run seed: `count` arms (default
/// `2m`) drawn with the run's algorithm generator.
pub fn experiment_family(
    graph: &Graph,
    k: usize,
    count: Option<usize>,
    rng: &mut ChaCha8Rng,
) -> Result<ArmFamily> {
    ArmFamily::random(graph, k, count.unwrap_or(2 * graph.m()), rng)
}

/// Per-run outputs besides the record.
#[derive(Debug, Clone, Default)]
pub struct RunArtifacts {
    pub histogram: Vec<u64>,
    /// CSV bytes of the per-round or per-phase trace, if the algorithm has one.
    pub trace: Option<Vec<u8>>,
}

/// Loaded inputs shared by every seed of a batch.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub graph: Graph,
    pub weights: WeightVector,
    pub opt: f64,
}

impl Instance {
    pub fn load(config: &ExperimentConfig) -> Result<Self> {
        let graph = load_edge_list(&config.graph)?.graph;
        let weights = match &config.weights {
            Some(path) => load_weights(&graph, path)?,
            None => knockout_weights(&graph, config.weight_seed)?,
        };
        let opt = exact_densest(&graph, &weights)?.density;
        let name = config
            .graph
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "graph".into());
        Ok(Self {
            name,
            graph,
            weights,
            opt,
        })
    }
}

/// Runs one seed of `config` on `instance`.
pub fn run_seed(
    config: &ExperimentConfig,
    instance: &Instance,
    seed: u64,
) -> Result<(RunRecord, RunArtifacts)> {
    let graph = &instance.graph;
    let weights = &instance.weights;
    let start = Instant::now();
    let mut oracle = SamplingOracle::new(graph, weights, config.noise_model()?, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ALGORITHM_SEED_MIX);
    let mut artifacts = RunArtifacts::default();

    let (set, budget): (VertexSet, u64) = match config.algorithm {
        Algorithm::Exact => (exact_densest(graph, weights)?.set, 0),
        Algorithm::Brute => (brute_force_densest(graph, weights)?.set, 0),
        Algorithm::GOracle => (greedy_peeling(graph, weights)?.set, 0),
        Algorithm::DsSr => {
            let budget = config.budget.unwrap_or_else(|| default_budget(graph.n()));
            let out = run_dssr(graph, &mut oracle, budget)?;
            let rows: Vec<DssrTraceCsv> = out
                .phases
                .iter()
                .map(|p| DssrTraceCsv {
                    phase: p.phase,
                    survivors: p.survivors,
                    f_hat: p.f_hat,
                    cumulative_queries: p.cumulative_queries,
                    cumulative_single_edge_queries: p.cumulative_single_edge_queries,
                })
                .collect();
            artifacts.trace = Some(trace_csv(&rows)?);
            (out.set, budget)
        }
        Algorithm::DsLin => {
            let family = experiment_family(graph, config.k, config.arms, &mut rng)?;
            let mut params = DsLinParams::defaults(graph.m());
            params.epsilon = config.epsilon();
            params.delta = config.delta;
            params.lambda = config.lambda;
            params.r = config.r;
            params.stop_mode = config.stop_mode;
            if let Some(l) = config.l {
                params.l = l;
            }
            if let Some(cap) = config.max_iters {
                params.max_iters = cap;
            }
            let out = run_dslin(graph, &family, &mut oracle, &params, Some(weights))?;
            let rows: Vec<DsLinTraceCsv> = out
                .trace
                .iter()
                .map(|r| DsLinTraceCsv {
                    iteration: r.iteration,
                    incumbent_density: r.incumbent_density,
                    confidence_radius: r.confidence_radius,
                    estimation_error: r.estimation_error,
                })
                .collect();
            artifacts.trace = Some(trace_csv(&rows)?);
            (out.set, out.iterations)
        }
        Algorithm::Naive => {
            let family = experiment_family(graph, config.k, config.arms, &mut rng)?;
            let budget = config.budget.unwrap_or(graph.m() as u64 + 10_000);
            (
                run_naive(graph, &family, &mut oracle, budget, &mut rng)?.set,
                budget,
            )
        }
        Algorithm::ROracle => {
            let out = run_r_oracle(
                graph,
                weights,
                &mut oracle,
                config.gamma,
                config.epsilon(),
                config.literal_intervals,
            )?;
            let samples = out.total_samples();
            (out.set, samples)
        }
    };

    let quality = graph.density(weights, &set)?;
    artifacts.histogram = oracle.histogram().to_vec();
    let record = RunRecord {
        algo: config.algorithm.to_string(),
        graph: instance.name.clone(),
        seed,
        budget,
        quality,
        opt: Some(instance.opt),
        out_size: set.len(),
        total_queries: oracle.total_queries(),
        single_edge_queries: oracle.single_edge_queries(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    if quality > instance.opt + 1e-9 * instance.opt.abs().max(1.0) {
        return Err(Error::Inconsistent(format!(
            "output density {quality} exceeds the optimum {}",
            instance.opt
        )));
    }
    Ok((record, artifacts))
}

/// Outcome of a batch: successful records in seed order and per-seed errors.
#[derive(Debug, Default)]
pub struct Batch {
    pub records: Vec<RunRecord>,
    pub failures: Vec<(u64, String)>,
}

/// Runs every seed of `config` in parallel and writes `results.csv`,
/// per-run histogram and trace CSVs, `failures.csv` when a seed failed, and
/// `config.txt` into the output directory.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Batch> {
    config.validate()?;
    let instance = Instance::load(config)?;
    let outcomes: Vec<(u64, Result<(RunRecord, RunArtifacts)>)> = config
        .seeds
        .par_iter()
        .map(|&seed| (seed, run_seed(config, &instance, seed)))
        .collect();

    let out = &config.out;
    let mut batch = Batch::default();
    for (seed, outcome) in outcomes {
        match outcome {
            Ok((record, artifacts)) => {
                let stem = format!("{}_seed{seed}", config.algorithm);
                write_atomic(
                    &out.join(format!("hist_{stem}.csv")),
                    &histogram_csv(&artifacts.histogram)?,
                )?;
                if let Some(trace) = artifacts.trace {
                    write_atomic(&out.join(format!("trace_{stem}.csv")), &trace)?;
                }
                batch.records.push(record);
            }
            Err(e) => batch.failures.push((seed, e.to_string())),
        }
    }
    write_results(&out.join("results.csv"), &batch.records)?;
    if !batch.failures.is_empty() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["seed", "error"])?;
        for (seed, msg) in &batch.failures {
            w.write_record([seed.to_string(), msg.clone()])?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Config(format!("csv buffer: {e}")))?;
        write_atomic(&out.join("failures.csv"), &bytes)?;
    }
    write_atomic(
        &out.join("config.txt"),
        absolute(config).to_text().as_bytes(),
    )?;
    Ok(batch)
}

/// Copy of `config` with absolute paths, so the saved file replays from any
/// working directory.
fn absolute(config: &ExperimentConfig) -> ExperimentConfig {
    let abs = |p: &Path| std::path::absolute(p).unwrap_or_else(|_| p.to_path_buf());
    let mut c = config.clone();
    c.graph = abs(&c.graph);
    c.weights = c.weights.as_deref().map(abs);
    c.out = abs(&c.out);
    c
}
