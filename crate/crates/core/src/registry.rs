//! Named solvers behind a common trait, selected at run time.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::classic_bb::solve_bb;
use crate::error::{Error, Result};
use crate::harness::oracle::brute_force_oracle_with;
use crate::harness::ORACLE_LIMIT;
use crate::ibb;
use crate::qp::{QuadraticObjective, SearchBox};
use crate::sfs::solve_sfs;
use crate::solver::{SolveResult, SolverConfig};

/// An objective together with its search box.
#[derive(Debug, Clone)]
pub struct Problem {
    pub objective: QuadraticObjective,
    pub search_box: SearchBox,
}

impl Problem {
    pub fn new(objective: QuadraticObjective, search_box: SearchBox) -> Result<Self> {
        if objective.dim() != search_box.dim() {
            return Err(Error::InvalidBox(format!(
                "box has dimension {} but objective has {}",
                search_box.dim(),
                objective.dim()
            )));
        }
        Ok(Self { objective, search_box })
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }
}

pub trait CcqoSolver: Send + Sync {
    fn name(&self) -> &str;
    fn summary(&self) -> &str;
    fn solve(&self, problem: &Problem, k: usize, cfg: &SolverConfig) -> Result<SolveResult>;
}

pub struct IbbPlus;
pub struct ClassicBb;
pub struct SfsHeuristic;
pub struct BruteForce;

impl CcqoSolver for IbbPlus {
    fn name(&self) -> &str {
        "ibb"
    }
    fn summary(&self) -> &str {
        "interval branch-and-bound over flag boxes"
    }
    fn solve(&self, problem: &Problem, k: usize, cfg: &SolverConfig) -> Result<SolveResult> {
        ibb::solve(&problem.objective, &problem.search_box, k, cfg)
    }
}

impl CcqoSolver for ClassicBb {
    fn name(&self) -> &str {
        "bb"
    }
    fn summary(&self) -> &str {
        "feature-deletion branch-and-bound"
    }
    fn solve(&self, problem: &Problem, k: usize, cfg: &SolverConfig) -> Result<SolveResult> {
        solve_bb(&problem.objective, &problem.search_box, k, cfg)
    }
}

impl CcqoSolver for SfsHeuristic {
    fn name(&self) -> &str {
        "sfs"
    }
    fn summary(&self) -> &str {
        "sequential feature swapping local search"
    }
    fn solve(&self, problem: &Problem, k: usize, cfg: &SolverConfig) -> Result<SolveResult> {
        solve_sfs(&problem.objective, &problem.search_box, k, cfg)
    }
}

impl CcqoSolver for BruteForce {
    fn name(&self) -> &str {
        "oracle"
    }
    fn summary(&self) -> &str {
        "exhaustive enumeration of size-k supports"
    }
    fn solve(&self, problem: &Problem, k: usize, cfg: &SolverConfig) -> Result<SolveResult> {
        brute_force_oracle_with(
            &problem.objective,
            &problem.search_box,
            k,
            cfg.qp_tol,
            ORACLE_LIMIT,
            cfg.audit,
        )
    }
}

#[derive(Clone, Default)]
pub struct SolverRegistry {
    solvers: BTreeMap<String, Arc<dyn CcqoSolver>>,
}

impl SolverRegistry {
    pub fn with_builtin() -> Self {
        let mut r = Self::default();
        r.register(Arc::new(IbbPlus));
        r.register(Arc::new(ClassicBb));
        r.register(Arc::new(SfsHeuristic));
        r.register(Arc::new(BruteForce));
        r
    }

    /// Adds a solver, replacing any previous one with the same name.
    pub fn register(&mut self, solver: Arc<dyn CcqoSolver>) {
        self.solvers.insert(solver.name().to_string(), solver);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn CcqoSolver>> {
        self.solvers
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownSolver(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.solvers.keys().map(String::as_str)
    }
}
