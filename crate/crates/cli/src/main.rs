use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use ccqo_core::harness::bench::{
    boxplots_from_runs, profile_from_runs, read_runs, run_bench, write_boxplot_csv, write_profile_csv, write_runs,
    BenchSpec, Metric, RunRecord,
};
use ccqo_core::instance::{generate, CoefficientPattern, GenerateOptions, Regime, RegressionInstance, Shape};
use ccqo_core::{NodeSelection, Problem, SolverConfig, SolverRegistry};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "ccqo",
    version,
    about = "Cardinality-constrained convex QP solvers and benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a regression instance and write it as JSON.
    Gen {
        /// Shape name, e.g. small-1 or medium-3.
        #[arg(long = "type")]
        shape: String,
        #[arg(long, default_value = "od")]
        case: Regime,
        #[arg(long, default_value_t = 1)]
        example: u8,
        #[arg(long, default_value_t = 1.0)]
        snr: f64,
        #[arg(long, default_value_t = 10)]
        k0: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Cardinality stored in the file and used by `solve` when --k is absent.
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve an instance file and print the run record as JSON.
    Solve {
        #[arg(long)]
        algo: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Run a benchmark suite and write runs.csv and manifest.json.
    Bench {
        /// small, medium, large, or a single shape name.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value = "od")]
        case: Regime,
        #[arg(long, default_value = "5,10", value_delimiter = ',')]
        k: Vec<usize>,
        #[arg(long, default_value = "0.05,0.5,1,5", value_delimiter = ',')]
        snr: Vec<f64>,
        #[arg(long, default_value = "1,2,3", value_delimiter = ',')]
        example: Vec<u8>,
        /// Inclusive range `a..b` or a comma list.
        #[arg(long, default_value = "1..20")]
        seeds: String,
        #[arg(long, default_value = "ibb,bb,sfs", value_delimiter = ',')]
        algos: Vec<String>,
        #[arg(long, default_value_t = 10)]
        k0: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Build profile and box-plot CSVs from a benchmark run.
    Report {
        /// Benchmark output directory or a runs.csv file.
        #[arg(long)]
        runs: PathBuf,
        #[arg(long, default_value = "gap")]
        metric: Metric,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long)]
        boxplot: Option<PathBuf>,
    },
    /// List the available algorithms.
    Algos,
}

#[derive(Args)]
struct Limits {
    #[arg(long, default_value = "bfs")]
    select: NodeSelection,
    #[arg(long)]
    max_iter: Option<u64>,
    /// Hard wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    soft_iters: Option<u64>,
    /// Seconds without improvement before stopping.
    #[arg(long)]
    soft_time: Option<f64>,
    #[arg(long)]
    no_bound_deletion: bool,
    #[arg(long)]
    trace: bool,
}

impl Limits {
    fn config(&self) -> Result<SolverConfig> {
        let d = SolverConfig::default();
        let secs = |s: Option<f64>, default: Duration| -> Result<Duration> {
            match s {
                None => Ok(default),
                Some(v) => Duration::try_from_secs_f64(v).with_context(|| format!("invalid duration {v}")),
            }
        };
        let cfg = SolverConfig {
            selection: self.select,
            max_iterations: self.max_iter.unwrap_or(d.max_iterations),
            hard_time_limit: secs(self.time_limit, d.hard_time_limit)?,
            soft_no_improve_iters: self.soft_iters.unwrap_or(d.soft_no_improve_iters),
            soft_no_improve_time: secs(self.soft_time, d.soft_no_improve_time)?,
            disable_bound_deletion: self.no_bound_deletion,
            trace: self.trace,
            ..d
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
        if a > b {
            bail!("empty seed range {s}");
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| Ok(t.trim().parse()?)).collect()
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let registry = SolverRegistry::with_builtin();
    match cli.command {
        Command::Gen {
            shape,
            case,
            example,
            snr,
            k0,
            seed,
            k,
            out,
        } => {
            let shape = Shape::named(&shape, case)?;
            let opts = GenerateOptions {
                k,
                k0,
                ..GenerateOptions::default()
            };
            let inst = generate(&shape, CoefficientPattern::from_id(example)?, snr, seed, &opts)?;
            inst.save(&out).with_context(|| format!("writing {}", out.display()))?;
            eprintln!("wrote {} to {}", inst.label, out.display());
        }
        Command::Solve {
            algo,
            k,
            instance,
            limits,
        } => {
            let solver = registry.get(&algo)?;
            let inst =
                RegressionInstance::load(&instance).with_context(|| format!("reading {}", instance.display()))?;
            let k = k.unwrap_or(inst.k);
            let problem = Problem::new(inst.objective()?, inst.search_box.clone())?;
            let res = solver.solve(&problem, k, &limits.config()?)?;
            let record = RunRecord::from_result(&format!("{}/k{k}", inst.label), solver.name(), inst.seed, &res);
            let mut json = serde_json::to_value(&record)?;
            json["support"] = serde_json::to_value(res.support.as_slice())?;
            println!("{}", serde_json::to_string_pretty(&json)?);
        }
        Command::Bench {
            suite,
            case,
            k,
            snr,
            example,
            seeds,
            algos,
            k0,
            jobs,
            out,
            limits,
        } => {
            let mut spec = if suite.contains('-') {
                BenchSpec {
                    shapes: vec![Shape::named(&suite, case)?],
                    ..BenchSpec::new("small", case)?
                }
            } else {
                BenchSpec::new(&suite, case)?
            };
            spec.ks = k;
            spec.snrs = snr;
            spec.examples = example;
            spec.seeds = parse_seeds(&seeds)?;
            spec.algos = algos;
            spec.generate.k0 = k0;
            spec.jobs = jobs;
            spec.config = limits.config()?;
            let records = run_bench(&spec, &registry)?;
            write_runs(&out, &records, &spec.manifest())?;
            eprintln!("wrote {} runs to {}", records.len(), out.display());
        }
        Command::Report {
            runs,
            metric,
            profile,
            boxplot,
        } => {
            let records = read_runs(&runs).with_context(|| format!("reading {}", runs.display()))?;
            if profile.is_none() && boxplot.is_none() {
                bail!("nothing to do: pass --profile and/or --boxplot");
            }
            if let Some(path) = profile {
                write_profile_csv(&path, &profile_from_runs(&records, metric)?)?;
            }
            if let Some(path) = boxplot {
                write_boxplot_csv(&path, &boxplots_from_runs(&records, metric)?)?;
            }
        }
        Command::Algos => {
            for name in registry.names() {
                println!("{name}\t{}", registry.get(name)?.summary());
            }
        }
    }
    Ok(())
}
