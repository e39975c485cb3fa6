//! Configuration, telemetry and incumbent bookkeeping shared by the solvers.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flagbox::FlagBox;
use crate::qp::{IndexSet, QpRecord, DEFAULT_QP_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeSelection {
    /// Smallest lower bound first.
    Bfs,
    /// Most nonzero-forced coordinates first.
    Dfs,
}

impl FromStr for NodeSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bfs" => Ok(NodeSelection::Bfs),
            "dfs" => Ok(NodeSelection::Dfs),
            other => Err(Error::InvalidConfig(format!("unknown node selection '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub selection: NodeSelection,
    pub max_iterations: u64,
    pub hard_time_limit: Duration,
    /// Interval search only: stop after this many iterations without improvement.
    pub soft_no_improve_iters: u64,
    /// Interval search only: stop after this long without improvement.
    pub soft_no_improve_time: Duration,
    pub qp_tol: f64,
    /// Never discard nodes by bound (for counting experiments).
    pub disable_bound_deletion: bool,
    /// Run a full swap search on every n-th non-terminal child (the root always
    /// gets one). `None` restricts it to the root.
    pub sfs_every: Option<u64>,
    /// Classic branch-and-bound: order candidate deletions by ascending gain.
    pub bb_in_level_ordering: bool,
    /// Per-iteration trace lines on stderr.
    pub trace: bool,
    /// Record every QP solve and search event in [`SolveResult::audit`].
    pub audit: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            selection: NodeSelection::Bfs,
            max_iterations: 1_000_000,
            hard_time_limit: Duration::from_secs(600),
            soft_no_improve_iters: 500,
            soft_no_improve_time: Duration::from_secs(300),
            qp_tol: DEFAULT_QP_TOL,
            disable_bound_deletion: false,
            sfs_every: Some(100),
            bb_in_level_ordering: true,
            trace: false,
            audit: false,
        }
    }
}

impl SolverConfig {
    /// Default settings with every stopping rule lifted, so runs end only when
    /// the node list is exhausted.
    pub fn exhaustive() -> Self {
        Self {
            max_iterations: u64::MAX,
            hard_time_limit: Duration::MAX,
            soft_no_improve_iters: u64::MAX,
            soft_no_improve_time: Duration::MAX,
            ..Self::default()
        }
    }

    /// Exhaustive settings for tree-counting runs: no bound deletion, no
    /// in-level ordering.
    pub fn counting() -> Self {
        Self {
            disable_bound_deletion: true,
            bb_in_level_ordering: false,
            sfs_every: None,
            ..Self::exhaustive()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || self.soft_no_improve_iters == 0 {
            return Err(Error::InvalidConfig("iteration limits must be positive".into()));
        }
        if self.hard_time_limit.is_zero() || self.soft_no_improve_time.is_zero() {
            return Err(Error::InvalidConfig("time limits must be positive".into()));
        }
        if self.qp_tol.is_nan() || self.qp_tol <= 0.0 {
            return Err(Error::InvalidConfig("qp_tol must be positive".into()));
        }
        if self.sfs_every == Some(0) {
            return Err(Error::InvalidConfig("sfs_every must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StopReason {
    Exhausted,
    HardTime,
    HardIter,
    SoftNoImproveIters,
    SoftNoImproveTime,
    /// A local search finished at a point it cannot improve.
    LocalOptimum,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StopReason::Exhausted => "Exhausted",
            StopReason::HardTime => "HardTime",
            StopReason::HardIter => "HardIter",
            StopReason::SoftNoImproveIters => "SoftNoImproveIters",
            StopReason::SoftNoImproveTime => "SoftNoImproveTime",
            StopReason::LocalOptimum => "LocalOptimum",
        };
        f.write_str(s)
    }
}

/// Parent/child lower-bound pair recorded when a child is bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundLink {
    pub parent: f64,
    pub child: f64,
    pub inherited: bool,
}

/// Search events recorded when [`SolverConfig::audit`] is set.
#[derive(Debug, Clone, Default)]
pub struct SolveAudit {
    pub qp_records: Vec<QpRecord>,
    /// `(iteration, value)` at every incumbent change, starting with the first.
    pub incumbent_history: Vec<(u64, f64)>,
    /// Regions discarded because their lower bound exceeded the incumbent.
    pub bound_deleted: Vec<FlagBox>,
    /// Every created node in creation order; terminal nodes in collapsed form.
    pub created: Vec<FlagBox>,
    pub bound_links: Vec<BoundLink>,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub support: IndexSet,
    pub iterations: u64,
    /// Bounding QP solves (inherited bounds and sampling solves excluded).
    pub lb_calls: u64,
    /// All QP solves, sampling included.
    pub qp_solves: u64,
    pub nodes_created: u64,
    pub elapsed: Duration,
    pub stop_reason: StopReason,
    pub audit: Option<SolveAudit>,
}

/// Best feasible point found so far.
#[derive(Debug, Clone, PartialEq)]
pub struct Incumbent {
    pub point: Vec<f64>,
    pub value: f64,
}

pub fn nonzeros(x: &[f64]) -> usize {
    x.iter().filter(|v| **v != 0.0).count()
}

/// Returns the candidate if it strictly improves on `inc`, `inc` otherwise.
pub fn update_incumbent(inc: Incumbent, point: Vec<f64>, value: f64, k: usize) -> Result<Incumbent> {
    let nnz = nonzeros(&point);
    if nnz > k {
        return Err(Error::InfeasibleCandidate { nonzeros: nnz, k });
    }
    Ok(if value < inc.value {
        Incumbent { point, value }
    } else {
        inc
    })
}

impl Incumbent {
    /// In-place form of [`update_incumbent`]; returns whether it improved.
    pub fn offer(&mut self, point: &[f64], value: f64, k: usize) -> Result<bool> {
        let nnz = nonzeros(point);
        if nnz > k {
            return Err(Error::InfeasibleCandidate { nonzeros: nnz, k });
        }
        if value < self.value {
            self.point.clear();
            self.point.extend_from_slice(point);
            self.value = value;
            Ok(true)
        } else {
            Ok(false)
        }
    }
}

/// Tracks the hard and soft stopping rules of one run.
pub(crate) struct StopClock {
    start: Instant,
    last_improve_at: Instant,
    last_improve_iter: u64,
    soft_rules: bool,
}

impl StopClock {
    pub(crate) fn start(soft_rules: bool) -> Self {
        let now = Instant::now();
        Self {
            start: now,
            last_improve_at: now,
            last_improve_iter: 0,
            soft_rules,
        }
    }

    pub(crate) fn improved(&mut self, iteration: u64) {
        self.last_improve_at = Instant::now();
        self.last_improve_iter = iteration;
    }

    pub(crate) fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    pub(crate) fn check(&self, cfg: &SolverConfig, iterations: u64) -> Option<StopReason> {
        if iterations >= cfg.max_iterations {
            return Some(StopReason::HardIter);
        }
        let now = Instant::now();
        if now.duration_since(self.start) >= cfg.hard_time_limit {
            return Some(StopReason::HardTime);
        }
        if self.soft_rules {
            if iterations - self.last_improve_iter >= cfg.soft_no_improve_iters {
                return Some(StopReason::SoftNoImproveIters);
            }
            if now.duration_since(self.last_improve_at) >= cfg.soft_no_improve_time {
                return Some(StopReason::SoftNoImproveTime);
            }
        }
        None
    }
}

pub(crate) fn check_k(k: usize, p: usize) -> Result<()> {
    if k == 0 || k >= p {
        Err(Error::InvalidK { k, p })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inc(v: f64) -> Incumbent {
        Incumbent {
            point: vec![1.0, 0.0, 0.0],
            value: v,
        }
    }

    #[test]
    fn strict_improvement_only() {
        let got = update_incumbent(inc(10.0), vec![0.0, 2.0, 0.0], 8.0, 1).unwrap();
        assert_eq!(got.value, 8.0);
        let got = update_incumbent(inc(8.0), vec![0.0, 2.0, 0.0], 8.0, 1).unwrap();
        assert_eq!(got, inc(8.0));
    }

    #[test]
    fn infeasible_candidate_is_an_error() {
        let err = update_incumbent(inc(8.0), vec![1.0, 2.0, 0.0], 1.0, 1);
        assert!(matches!(err, Err(Error::InfeasibleCandidate { nonzeros: 2, k: 1 })));
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        assert!(SolverConfig::exhaustive().validate().is_ok());
        let bad = SolverConfig {
            max_iterations: 0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            sfs_every: Some(0),
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
        assert_eq!("DFS".parse::<NodeSelection>().unwrap(), NodeSelection::Dfs);
    }
}
