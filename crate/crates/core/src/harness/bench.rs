//! Benchmark runs over generated instances, their CSV/JSON output, and the
//! profile and box-plot reports built from them.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use num_integer::binomial;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::metrics::{boxplot_stats, performance_profile, relative_gap_percent, BoxplotSummary, ProfilePoint};
use crate::instance::{generate, CoefficientPattern, GenerateOptions, Regime, Shape};
use crate::registry::{Problem, SolverRegistry};
use crate::solver::{SolveResult, SolverConfig};

pub const RUNS_FILE: &str = "runs.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
/// The oracle joins a benchmark when it has at most this many supports to try.
pub const BENCH_ORACLE_LIMIT: u128 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub label: String,
    pub algo: String,
    pub value: f64,
    /// Empty when the best value on the instance is zero.
    pub gap_pct: Option<f64>,
    pub elapsed_s: f64,
    pub lb_calls: u64,
    pub nodes: u64,
    pub stop_reason: String,
    pub seed: u64,
}

impl RunRecord {
    pub fn from_result(label: &str, algo: &str, seed: u64, res: &SolveResult) -> Self {
        Self {
            label: label.to_string(),
            algo: algo.to_string(),
            value: res.value,
            gap_pct: None,
            elapsed_s: res.elapsed.as_secs_f64(),
            lb_calls: res.lb_calls,
            nodes: res.nodes_created,
            stop_reason: res.stop_reason.to_string(),
            seed,
        }
    }

    /// Records of the same problem share this key.
    pub fn problem_key(&self) -> String {
        format!("{}#{}", self.label, self.seed)
    }
}

/// Sets `gap_pct` against the best value recorded on each problem.
pub fn fill_gaps(records: &mut [RunRecord]) {
    let mut best: BTreeMap<String, f64> = BTreeMap::new();
    for r in records.iter() {
        let e = best.entry(r.problem_key()).or_insert(f64::INFINITY);
        *e = e.min(r.value);
    }
    for r in records.iter_mut() {
        r.gap_pct = relative_gap_percent(r.value, best[&r.problem_key()]).ok();
    }
}

/// Deterministic output order.
pub fn sort_records(records: &mut [RunRecord]) {
    records
        .sort_by(|a, b| (a.label.as_str(), a.algo.as_str(), a.seed).cmp(&(b.label.as_str(), b.algo.as_str(), b.seed)));
}

#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub shapes: Vec<Shape>,
    pub examples: Vec<u8>,
    pub ks: Vec<usize>,
    pub snrs: Vec<f64>,
    pub seeds: Vec<u64>,
    pub algos: Vec<String>,
    pub config: SolverConfig,
    pub generate: GenerateOptions,
    /// Add the oracle on problems with at most this many supports.
    pub oracle_limit: u128,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
}

impl BenchSpec {
    pub fn new(suite: &str, regime: Regime) -> Result<Self> {
        Ok(Self {
            shapes: Shape::suite(suite, regime)?,
            examples: vec![1, 2, 3],
            ks: vec![5, 10],
            snrs: vec![0.05, 0.5, 1.0, 5.0],
            seeds: (1..=20).collect(),
            algos: vec!["ibb".into(), "bb".into(), "sfs".into()],
            config: SolverConfig::default(),
            generate: GenerateOptions::default(),
            oracle_limit: BENCH_ORACLE_LIMIT,
            jobs: None,
        })
    }

    pub fn manifest(&self) -> serde_json::Value {
        let c = &self.config;
        serde_json::json!({
            "shapes": self.shapes.iter().map(|s| serde_json::json!({
                "name": s.name, "case": s.regime, "p": s.p, "n": s.n,
            })).collect::<Vec<_>>(),
            "examples": self.examples,
            "k": self.ks,
            "snr": self.snrs,
            "seeds": self.seeds,
            "algos": self.algos,
            "oracle_limit": self.oracle_limit.to_string(),
            "k0": self.generate.k0,
            "rho": self.generate.rho,
            "tau": self.generate.tau,
            "solver": {
                "selection": c.selection,
                "max_iterations": c.max_iterations,
                "hard_time_limit_s": c.hard_time_limit.as_secs_f64(),
                "soft_no_improve_iters": c.soft_no_improve_iters,
                "soft_no_improve_time_s": c.soft_no_improve_time.as_secs_f64(),
                "qp_tol": c.qp_tol,
                "disable_bound_deletion": c.disable_bound_deletion,
                "sfs_every": c.sfs_every,
                "bb_in_level_ordering": c.bb_in_level_ordering,
            },
        })
    }
}

/// Runs every algorithm on every generated problem. Instances are solved in
/// parallel, each run on a single thread; the result is sorted and has gaps
/// filled in.
pub fn run_bench(spec: &BenchSpec, registry: &SolverRegistry) -> Result<Vec<RunRecord>> {
    spec.config.validate()?;
    let solvers = spec.algos.iter().map(|a| registry.get(a)).collect::<Result<Vec<_>>>()?;
    let oracle = registry.get("oracle").ok();
    let mut tasks = Vec::new();
    for shape in &spec.shapes {
        for &ex in &spec.examples {
            let pattern = CoefficientPattern::from_id(ex)?;
            for &snr in &spec.snrs {
                for &seed in &spec.seeds {
                    tasks.push((shape, pattern, snr, seed));
                }
            }
        }
    }

    let run_one = |&(shape, pattern, snr, seed): &(&Shape, CoefficientPattern, f64, u64)| -> Result<Vec<RunRecord>> {
        let inst = generate(shape, pattern, snr, seed, &spec.generate)?;
        let problem = Problem::new(inst.objective()?, inst.search_box.clone())?;
        let mut out = Vec::new();
        for &k in &spec.ks {
            let label = format!("{}/k{k}", inst.label);
            for s in &solvers {
                let res = s.solve(&problem, k, &spec.config)?;
                out.push(RunRecord::from_result(&label, s.name(), seed, &res));
            }
            let small = binomial(shape.p as u128, k as u128) <= spec.oracle_limit;
            if let (Some(o), true) = (&oracle, small && !spec.algos.iter().any(|a| a == "oracle")) {
                let res = o.solve(&problem, k, &spec.config)?;
                out.push(RunRecord::from_result(&label, o.name(), seed, &res));
            }
        }
        Ok(out)
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let chunks: Vec<Vec<RunRecord>> = pool.install(|| tasks.par_iter().map(run_one).collect::<Result<_>>())?;
    let mut records: Vec<RunRecord> = chunks.into_iter().flatten().collect();
    fill_gaps(&mut records);
    sort_records(&mut records);
    Ok(records)
}

pub fn write_runs(dir: &Path, records: &[RunRecord], manifest: &serde_json::Value) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join(RUNS_FILE))?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    fs::write(dir.join(MANIFEST_FILE), serde_json::to_string_pretty(manifest)?)?;
    Ok(())
}

/// Reads `runs.csv` from a directory, or the given CSV file directly.
pub fn read_runs(path: &Path) -> Result<Vec<RunRecord>> {
    let file = if path.is_dir() {
        path.join(RUNS_FILE)
    } else {
        path.to_path_buf()
    };
    let mut r = csv::Reader::from_path(file)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Objective values for profiles, relative gaps for box plots.
    Gap,
    /// Wall-clock seconds.
    Time,
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gap" => Ok(Metric::Gap),
            "time" => Ok(Metric::Time),
            other => Err(Error::InvalidConfig(format!(
                "unknown metric '{other}' (expected gap or time)"
            ))),
        }
    }
}

pub fn profile_from_runs(records: &[RunRecord], metric: Metric) -> Result<BTreeMap<String, Vec<ProfilePoint>>> {
    let mut table: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    for r in records {
        let t = match metric {
            Metric::Gap => r.value,
            Metric::Time => r.elapsed_s,
        };
        table.entry(r.problem_key()).or_default().insert(r.algo.clone(), t);
    }
    performance_profile(&table)
}

pub fn boxplots_from_runs(records: &[RunRecord], metric: Metric) -> Result<BTreeMap<String, BoxplotSummary>> {
    let mut samples: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in records {
        let v = match metric {
            Metric::Gap => r.gap_pct,
            Metric::Time => Some(r.elapsed_s),
        };
        let entry = samples.entry(r.algo.clone()).or_default();
        entry.extend(v);
    }
    samples
        .into_iter()
        .filter(|(_, s)| !s.is_empty())
        .map(|(algo, s)| Ok((algo, boxplot_stats(&s)?)))
        .collect()
}

pub fn write_profile_csv(path: &Path, profile: &BTreeMap<String, Vec<ProfilePoint>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["algo", "tau", "fraction"])?;
    for (algo, points) in profile {
        for pt in points {
            w.write_record([algo.clone(), pt.tau.to_string(), pt.fraction.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_boxplot_csv(path: &Path, boxes: &BTreeMap<String, BoxplotSummary>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["algo", "q25", "median", "q75", "lower", "upper", "outliers"])?;
    for (algo, b) in boxes {
        let outliers = b.outliers.iter().map(f64::to_string).collect::<Vec<_>>().join(";");
        w.write_record([
            algo.clone(),
            b.q25.to_string(),
            b.median.to_string(),
            b.q75.to_string(),
            b.lower.to_string(),
            b.upper.to_string(),
            outliers,
        ])?;
    }
    w.flush()?;
    Ok(())
}
