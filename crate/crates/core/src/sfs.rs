//! Sequential feature swapping: a drop/pick local search over size-`k`
//! supports, used both as a standalone heuristic and as the feasibility
//! sampler inside the interval search.

use std::collections::HashMap;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::qp::{IndexSet, QpSolution, QuadraticObjective, SearchBox, SubsetEvaluator};
use crate::solver::{check_k, SolveAudit, SolveResult, SolverConfig, StopReason};

/// `q(S \ {s}) - q(S)` for `s` in `S`.
pub fn gain(eval: &mut SubsetEvaluator<'_>, support: &IndexSet, s: usize) -> Result<f64> {
    if !support.contains(s) {
        return Err(Error::InvalidIndexSet(format!("{s} is not in the support")));
    }
    let full = eval.evaluate(support, None)?;
    let dropped = eval.evaluate(&support.without(s), Some(&full.point))?;
    Ok(dropped.value - full.value)
}

/// `q(S) - q(S ∪ {s})` for `s` outside `S`.
pub fn reduction(eval: &mut SubsetEvaluator<'_>, support: &IndexSet, s: usize) -> Result<f64> {
    if support.contains(s) || s >= eval.dim() {
        return Err(Error::InvalidIndexSet(format!(
            "{s} is not a candidate outside the support"
        )));
    }
    let base = eval.evaluate(support, None)?;
    let grown = eval.evaluate(&support.with(s), Some(&base.point))?;
    Ok(base.value - grown.value)
}

#[derive(Debug, Clone)]
pub struct SfsOutcome {
    pub support: IndexSet,
    pub point: Vec<f64>,
    pub value: f64,
    /// Drop/pick rounds performed, including the final non-switching one.
    pub iterations: usize,
    /// `q(S)` of the initial support followed by the value after each switch.
    pub values: Vec<f64>,
}

/// Indices of the `k` largest `|x_i|`, ties to the lower index.
pub fn top_k_support(x: &[f64], k: usize) -> IndexSet {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()).then(a.cmp(&b)));
    order.truncate(k);
    IndexSet::from_unsorted(order)
}

struct Memo {
    cache: HashMap<IndexSet, QpSolution>,
}

impl Memo {
    fn q(&mut self, eval: &mut SubsetEvaluator<'_>, support: IndexSet, warm: Option<&[f64]>) -> Result<QpSolution> {
        if let Some(sol) = self.cache.get(&support) {
            return Ok(sol.clone());
        }
        let sol = eval.evaluate(&support, warm)?;
        self.cache.insert(support, sol.clone());
        Ok(sol)
    }
}

/// Runs the swap search from `initial`, which must hold exactly `k` indices.
pub fn run_sfs_with(eval: &mut SubsetEvaluator<'_>, k: usize, initial: &IndexSet) -> Result<SfsOutcome> {
    let p = eval.dim();
    if k == 0 || k >= p {
        return Err(Error::InvalidK { k, p });
    }
    if initial.len() != k {
        return Err(Error::InvalidInitialSupport(format!(
            "expected {k} indices, got {}",
            initial.len()
        )));
    }
    initial
        .check_bound(p)
        .map_err(|e| Error::InvalidInitialSupport(e.to_string()))?;

    let mut memo = Memo { cache: HashMap::new() };
    let mut support = initial.clone();
    let mut current = memo.q(eval, support.clone(), None)?;
    let mut values = vec![current.value];
    let mut iterations = 0;

    loop {
        iterations += 1;

        // Drop: smallest gain, i.e. smallest q(S \ s).
        let mut drop: Option<(usize, f64)> = None;
        for s in support.iter() {
            let v = memo.q(eval, support.without(s), Some(&current.point))?.value;
            if drop.is_none_or(|(_, best)| v < best) {
                drop = Some((s, v));
            }
        }
        let (j, _) = drop.expect("support is non-empty");

        // Pick: largest reduction, i.e. smallest q(S ∪ s).
        let mut pick: Option<(usize, f64)> = None;
        for s in (0..p).filter(|&s| !support.contains(s)) {
            let v = memo.q(eval, support.with(s), Some(&current.point))?.value;
            if pick.is_none_or(|(_, best)| v < best) {
                pick = Some((s, v));
            }
        }
        let (i, _) = pick.expect("k < p leaves a candidate");

        let swapped = support.without(j).with(i);
        let candidate = memo.q(eval, swapped.clone(), Some(&current.point))?;
        if candidate.value < current.value {
            support = swapped;
            current = candidate;
            values.push(current.value);
        } else {
            return Ok(SfsOutcome {
                support,
                point: current.point,
                value: current.value,
                iterations,
                values,
            });
        }
    }
}

/// Standalone heuristic: start from the `k` largest entries of the full box-QP
/// minimiser and swap until no drop/pick move improves.
pub fn solve_sfs(obj: &QuadraticObjective, bx: &SearchBox, k: usize, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let p = obj.dim();
    check_k(k, p)?;
    let start = Instant::now();
    let mut eval = SubsetEvaluator::new(obj, bx, cfg.qp_tol)?.recording(cfg.audit);
    let root = eval.evaluate(&IndexSet::full(p), None)?;
    let out = run_sfs_with(&mut eval, k, &top_k_support(&root.point, k))?;
    let elapsed = start.elapsed();
    let audit = cfg.audit.then(|| SolveAudit {
        qp_records: eval.take_records(),
        incumbent_history: out.values.iter().enumerate().map(|(i, v)| (i as u64, *v)).collect(),
        ..SolveAudit::default()
    });
    let support = IndexSet::from_unsorted((0..p).filter(|&i| out.point[i] != 0.0).collect());
    Ok(SolveResult {
        point: out.point,
        value: out.value,
        support,
        iterations: out.iterations as u64,
        lb_calls: eval.solves() as u64,
        qp_solves: eval.solves() as u64,
        nodes_created: 0,
        elapsed,
        stop_reason: StopReason::LocalOptimum,
        audit,
    })
}
