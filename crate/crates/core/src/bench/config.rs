//! Experiment configuration and its flat `key=value` text form.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::dslin::StopMode;
use crate::error::{Error, Result};
use crate::oracle::NoiseModel;

/// Algorithms the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    DsLin,
    DsSr,
    Naive,
    ROracle,
    GOracle,
    Exact,
    Brute,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::DsLin,
        Algorithm::DsSr,
        Algorithm::Naive,
        Algorithm::ROracle,
        Algorithm::GOracle,
        Algorithm::Exact,
        Algorithm::Brute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::DsLin => "dslin",
            Algorithm::DsSr => "dssr",
            Algorithm::Naive => "naive",
            Algorithm::ROracle => "r-oracle",
            Algorithm::GOracle => "g-oracle",
            Algorithm::Exact => "exact",
            Algorithm::Brute => "brute",
        }
    }

    /// Whether the algorithm queries the sampling oracle.
    pub fn is_online(self) -> bool {
        matches!(
            self,
            Algorithm::DsLin | Algorithm::DsSr | Algorithm::Naive | Algorithm::ROracle
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm {s:?}")))
    }
}

/// Everything needed to replay a batch of runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: PathBuf,
    /// Weight file; knockout weights from `weight_seed` when absent.
    pub weights: Option<PathBuf>,
    pub weight_seed: u64,
    pub algorithm: Algorithm,
    pub seeds: Vec<u64>,
    pub out: PathBuf,
    /// Noise scale `R` of the simulated oracle; 0 disables noise.
    pub noise: f64,
    pub epsilon: Option<f64>,
    pub delta: f64,
    pub lambda: f64,
    /// Sub-Gaussian scale assumed by DS-Lin.
    pub r: f64,
    pub l: Option<f64>,
    pub k: usize,
    pub arms: Option<usize>,
    pub budget: Option<u64>,
    pub max_iters: Option<u64>,
    pub stop_mode: StopMode,
    pub gamma: f64,
    pub literal_intervals: bool,
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, graph: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            graph: graph.into(),
            weights: None,
            weight_seed: 0,
            algorithm,
            seeds: vec![0],
            out: out.into(),
            noise: 1.0,
            epsilon: None,
            delta: 0.05,
            lambda: 100.0,
            r: 1.0,
            l: None,
            k: 10,
            arms: None,
            budget: None,
            max_iters: None,
            stop_mode: StopMode::Conservative,
            gamma: 0.9,
            literal_intervals: false,
        }
    }

    /// `epsilon`, defaulting to 0.9 for R-Oracle and 0.01 otherwise.
    pub fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(match self.algorithm {
            Algorithm::ROracle => 0.9,
            _ => 0.01,
        })
    }

    pub fn noise_model(&self) -> Result<NoiseModel> {
        if self.noise == 0.0 {
            Ok(NoiseModel::None)
        } else {
            NoiseModel::gaussian(self.noise).map_err(|e| Error::Config(e.to_string()))
        }
    }

    /// Checks that inputs exist and that values are in range.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !self.graph.is_file() {
            return bad(format!(
                "graph file {} does not exist",
                self.graph.display()
            ));
        }
        if let Some(w) = &self.weights {
            if !w.is_file() {
                return bad(format!("weight file {} does not exist", w.display()));
            }
        }
        if self.seeds.is_empty() {
            return bad("at least one seed is required".into());
        }
        self.noise_model()?;
        let eps = self.epsilon();
        if !(eps.is_finite() && eps > 0.0) {
            return bad(format!("epsilon must be positive, got {eps}"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return bad(format!("gamma must lie in (0, 1), got {}", self.gamma));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return bad(format!("lambda must be positive, got {}", self.lambda));
        }
        if !(self.r.is_finite() && self.r > 0.0) {
            return bad(format!("R must be positive, got {}", self.r));
        }
        if let Some(l) = self.l {
            if !(l.is_finite() && l >= 0.0) {
                return bad(format!("L must be nonnegative, got {l}"));
            }
        }
        if matches!(self.algorithm, Algorithm::DsLin | Algorithm::Naive) && self.k < 3 {
            return bad(format!("k must exceed 2, got {}", self.k));
        }
        if self.budget == Some(0) {
            return bad("budget must be positive".into());
        }
        Ok(())
    }

    /// Flat `key=value` lines, one per field, in a fixed order.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let seeds: Vec<String> = self.seeds.iter().map(u64::to_string).collect();
        let lines = [
            ("algorithm", self.algorithm.to_string()),
            ("graph", self.graph.display().to_string()),
            (
                "weights",
                opt(self.weights.as_ref().map(|p| p.display().to_string())),
            ),
            ("weight_seed", self.weight_seed.to_string()),
            ("seeds", seeds.join(",")),
            ("out", self.out.display().to_string()),
            ("noise", self.noise.to_string()),
            ("epsilon", opt(self.epsilon.map(|x| x.to_string()))),
            ("delta", self.delta.to_string()),
            ("lambda", self.lambda.to_string()),
            ("R", self.r.to_string()),
            ("L", opt(self.l.map(|x| x.to_string()))),
            ("k", self.k.to_string()),
            ("arms", opt(self.arms.map(|x| x.to_string()))),
            ("budget", opt(self.budget.map(|x| x.to_string()))),
            ("max_iters", opt(self.max_iters.map(|x| x.to_string()))),
            ("stop_mode", stop_mode_name(self.stop_mode).to_string()),
            ("gamma", self.gamma.to_string()),
            ("literal_intervals", self.literal_intervals.to_string()),
        ];
        lines.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// Parses the text form. Blank lines and `#` comments are ignored;
    /// `algorithm`, `graph` and `out` are required. Relative paths are
    /// resolved against `base` when given.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut entries = std::collections::BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected key=value, found {line:?}",
                    i + 1
                ))
            })?;
            if entries
                .insert(key.trim().to_string(), value.trim().to_string())
                .is_some()
            {
                return Err(Error::Config(format!(
                    "line {}: duplicate key {key:?}",
                    i + 1
                )));
            }
        }
        let mut take = |key: &str| entries.remove(key).filter(|v| !v.is_empty());
        let path = |v: String| {
            let p = PathBuf::from(v);
            match base {
                Some(b) if p.is_relative() => b.join(p),
                _ => p,
            }
        };
        let required = |v: Option<String>, key: &str| {
            v.ok_or_else(|| Error::Config(format!("missing required key {key:?}")))
        };

        let algorithm: Algorithm = required(take("algorithm"), "algorithm")?.parse()?;
        let graph = path(required(take("graph"), "graph")?);
        let out = path(required(take("out"), "out")?);
        let mut c = ExperimentConfig::new(algorithm, graph, out);
        c.weights = take("weights").map(path);
        if let Some(v) = take("weight_seed") {
            c.weight_seed = number("weight_seed", &v)?;
        }
        if let Some(v) = take("seeds") {
            c.seeds = parse_seeds(&v)?;
        }
        if let Some(v) = take("noise") {
            c.noise = parse_noise(&v)?;
        }
        c.epsilon = take("epsilon").map(|v| number("epsilon", &v)).transpose()?;
        if let Some(v) = take("delta") {
            c.delta = number("delta", &v)?;
        }
        if let Some(v) = take("lambda") {
            c.lambda = number("lambda", &v)?;
        }
        if let Some(v) = take("R") {
            c.r = number("R", &v)?;
        }
        c.l = take("L").map(|v| number("L", &v)).transpose()?;
        if let Some(v) = take("k") {
            c.k = number("k", &v)?;
        }
        c.arms = take("arms").map(|v| number("arms", &v)).transpose()?;
        c.budget = take("budget").map(|v| number("budget", &v)).transpose()?;
        c.max_iters = take("max_iters")
            .map(|v| number("max_iters", &v))
            .transpose()?;
        if let Some(v) = take("stop_mode") {
            c.stop_mode = parse_stop_mode(&v)?;
        }
        if let Some(v) = take("gamma") {
            c.gamma = number("gamma", &v)?;
        }
        if let Some(v) = take("literal_intervals") {
            c.literal_intervals = number("literal_intervals", &v)?;
        }
        if let Some(key) = entries.keys().next() {
            return Err(Error::Config(format!("unknown key {key:?}")));
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path.parent())
    }
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

/// `"none"` or a positive scale.
pub fn parse_noise(value: &str) -> Result<f64> {
    if value == "none" {
        Ok(0.0)
    } else {
        number("noise", value)
    }
}

pub fn parse_stop_mode(value: &str) -> Result<StopMode> {
    match value {
        "conservative" => Ok(StopMode::Conservative),
        "exact" => Ok(StopMode::ExactSecondBest),
        other => Err(Error::Config(format!(
            "stop_mode must be conservative or exact, got {other:?}"
        ))),
    }
}

pub fn stop_mode_name(mode: StopMode) -> &'static str {
    match mode {
        StopMode::Conservative => "conservative",
        StopMode::ExactSecondBest => "exact",
    }
}

/// Comma-separated seeds; `a..b` expands to `a, a+1, ..., b-1`.
pub fn parse_seeds(value: &str) -> Result<Vec<u64>> {
    let mut seeds = Vec::new();
    for part in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b): (u64, u64) = (number("seeds", a)?, number("seeds", b)?);
                seeds.extend(a..b);
            }
            None => seeds.push(number("seeds", part)?),
        }
    }
    Ok(seeds)
}
