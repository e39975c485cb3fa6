//! Classic feature-selection branch-and-bound over the deletion tree.
//!
//! Each node removes one more feature from the full set until `p - k` have
//! been removed. The restricted QP minimum `q(S)` can only grow as features
//! are removed, so a node whose value reaches the incumbent is pruned with
//! its whole subtree. Nodes whose subtree is a single chain are never
//! evaluated; the search jumps straight to the chain's leaf (the
//! minimum-solution-tree rule).
//!
//! Child `i` deletes candidate `i` and may only delete later candidates, so
//! earlier children root larger subtrees. With in-level ordering the
//! candidates are sorted by descending gain: the deletions that hurt most
//! root the large subtrees, where they are most likely to be pruned. Siblings
//! are visited last to first, so good leaves are reached early.

use crate::error::Result;
use crate::qp::{IndexSet, QuadraticObjective, SearchBox, SubsetEvaluator};
use crate::solver::{check_k, Incumbent, SolveAudit, SolveResult, SolverConfig, StopClock, StopReason};

/// A node of the deletion tree.
#[derive(Debug, Clone)]
pub struct BbNode {
    pub retained: IndexSet,
    /// Number of features deleted so far.
    pub level: usize,
    pub value: f64,
    point: Vec<f64>,
    /// Features this subtree may still delete, in enumeration order.
    candidates: Vec<usize>,
}

struct Bb<'a, 'e> {
    eval: &'e mut SubsetEvaluator<'a>,
    cfg: &'a SolverConfig,
    k: usize,
    incumbent: Option<Incumbent>,
    clock: StopClock,
    iterations: u64,
    lb_calls: u64,
    nodes_created: u64,
    audit: Option<SolveAudit>,
    stopped: Option<StopReason>,
}

impl Bb<'_, '_> {
    fn q(&mut self, support: &IndexSet, warm: &[f64]) -> Result<(f64, Vec<f64>)> {
        let sol = self.eval.evaluate(support, Some(warm))?;
        self.lb_calls += 1;
        Ok((sol.value, sol.point))
    }

    fn pruned(&self, value: f64) -> bool {
        !self.cfg.disable_bound_deletion && self.incumbent.as_ref().is_some_and(|inc| value >= inc.value)
    }

    fn leaf(&mut self, point: Vec<f64>, value: f64) -> Result<()> {
        let improved = match self.incumbent.as_mut() {
            Some(inc) => inc.offer(&point, value, self.k)?,
            None => {
                self.incumbent = Some(Incumbent { point, value });
                true
            }
        };
        if improved {
            self.clock.improved(self.iterations);
            if let Some(a) = self.audit.as_mut() {
                a.incumbent_history.push((self.iterations, value));
            }
        }
        Ok(())
    }

    fn expand(&mut self, node: BbNode) -> Result<()> {
        if self.stopped.is_some() {
            return Ok(());
        }
        if let Some(reason) = self.clock.check(self.cfg, self.iterations) {
            self.stopped = Some(reason);
            return Ok(());
        }
        self.iterations += 1;
        if self.cfg.trace {
            eprintln!(
                "iter={} level={} retained={} value={:.12e} incumbent={:?}",
                self.iterations,
                node.level,
                node.retained.len(),
                node.value,
                self.incumbent.as_ref().map(|i| i.value)
            );
        }

        let remaining = node.retained.len() - self.k;
        let mut candidates = node.candidates.clone();
        // Values of each one-feature deletion, known up front when ordering.
        let mut known: Vec<Option<(f64, Vec<f64>)>> = vec![None; candidates.len()];
        if self.cfg.bb_in_level_ordering {
            let mut scored = Vec::with_capacity(candidates.len());
            for &c in &candidates {
                let (v, x) = self.q(&node.retained.without(c), &node.point)?;
                scored.push((c, v, x));
            }
            // Descending gain q(S \ c) - q(S); ties keep the lower index first.
            scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            candidates = scored.iter().map(|s| s.0).collect();
            known = scored.into_iter().map(|(_, v, x)| Some((v, x))).collect();
        }

        let n_children = candidates.len() + 1 - remaining;
        known.truncate(n_children);
        for (i, cached) in known.into_iter().enumerate().rev() {
            if self.stopped.is_some() {
                return Ok(());
            }
            let removed = candidates[i];
            let child_candidates = candidates[i + 1..].to_vec();
            let child_remaining = remaining - 1;
            let retained = node.retained.without(removed);
            self.nodes_created += 1;

            if child_remaining > 0 && child_candidates.len() == child_remaining {
                // Single chain: only its leaf matters.
                let leaf = child_candidates.iter().fold(retained, |s, &c| s.without(c));
                let (v, x) = self.q(&leaf, &node.point)?;
                self.leaf(x, v)?;
                continue;
            }

            let (value, point) = match cached {
                Some(vx) => vx,
                None => self.q(&retained, &node.point)?,
            };
            if self.pruned(value) {
                continue;
            }
            if child_remaining == 0 {
                self.leaf(point, value)?;
            } else {
                self.expand(BbNode {
                    retained,
                    level: node.level + 1,
                    value,
                    point,
                    candidates: child_candidates,
                })?;
            }
        }
        Ok(())
    }
}

/// Best-subset search over the deletion tree, with the same result type and
/// hard limits as the interval search. Soft stopping rules do not apply.
pub fn solve_bb(obj: &QuadraticObjective, bx: &SearchBox, k: usize, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let p = obj.dim();
    check_k(k, p)?;
    let mut eval = SubsetEvaluator::new(obj, bx, cfg.qp_tol)?.recording(cfg.audit);
    let mut bb = Bb {
        eval: &mut eval,
        cfg,
        k,
        incumbent: None,
        clock: StopClock::start(false),
        iterations: 0,
        lb_calls: 0,
        nodes_created: 1,
        audit: cfg.audit.then(SolveAudit::default),
        stopped: None,
    };
    let full = IndexSet::full(p);
    let (value, point) = bb.q(&full, &vec![0.0; p])?;
    bb.expand(BbNode {
        retained: full,
        level: 0,
        value,
        point,
        candidates: (0..p).collect(),
    })?;

    let elapsed = bb.clock.elapsed();
    let stop_reason = bb.stopped.unwrap_or(StopReason::Exhausted);
    let (iterations, lb_calls, nodes_created) = (bb.iterations, bb.lb_calls, bb.nodes_created);
    let mut audit = bb.audit.take();
    // Stopped before any leaf: the origin is always feasible.
    let Incumbent { point, value } = bb.incumbent.take().unwrap_or(Incumbent {
        point: vec![0.0; p],
        value: obj.constant(),
    });
    if let Some(a) = audit.as_mut() {
        a.qp_records = eval.take_records();
    }
    let support = IndexSet::from_unsorted((0..p).filter(|&i| point[i] != 0.0).collect());
    Ok(SolveResult {
        point,
        value,
        support,
        iterations,
        lb_calls,
        qp_solves: eval.solves() as u64,
        nodes_created,
        elapsed,
        stop_reason,
        audit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_problem(p: usize, seed: u64) -> (QuadraticObjective, SearchBox) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(2 * p, p, |_, _| rng.random_range(-1.0..1.0));
        let h = a.transpose() * &a;
        let h = (&h + h.transpose()) * 0.5;
        let q = (0..p).map(|_| rng.random_range(-3.0..3.0)).collect();
        (
            QuadraticObjective::new(h, q, 10.0).unwrap(),
            SearchBox::symmetric(p, 4.0).unwrap(),
        )
    }

    #[test]
    fn counting_run_matches_small_tree() {
        let (obj, bx) = random_problem(5, 1);
        let res = solve_bb(&obj, &bx, 2, &SolverConfig::counting()).unwrap();
        // 20 tree nodes, four of them skipped.
        assert_eq!(res.lb_calls, 16);
        assert_eq!(res.stop_reason, StopReason::Exhausted);
    }

    #[test]
    fn single_level_tree_for_k_p_minus_one() {
        let (obj, bx) = random_problem(6, 2);
        let res = solve_bb(&obj, &bx, 5, &SolverConfig::counting()).unwrap();
        assert_eq!(res.lb_calls, 7);
        // The best single-deletion model.
        let mut best = f64::INFINITY;
        for drop in 0..6 {
            let s = IndexSet::full(6).without(drop);
            best = best.min(crate::qp::lower_bound(&obj, &bx, &s, 1e-9).unwrap().value);
        }
        assert!((res.value - best).abs() < 1e-9);
    }

    #[test]
    fn ordering_and_pruning_keep_the_optimum() {
        for seed in 0..6 {
            let (obj, bx) = random_problem(9, 20 + seed);
            let plain = solve_bb(&obj, &bx, 3, &SolverConfig::counting()).unwrap();
            let fast = solve_bb(&obj, &bx, 3, &SolverConfig::exhaustive()).unwrap();
            assert!((plain.value - fast.value).abs() <= 1e-9 * (1.0 + plain.value.abs()));
            assert_eq!(fast.support.len(), 3);
        }
    }

    #[test]
    fn hard_iteration_limit() {
        let (obj, bx) = random_problem(10, 3);
        let cfg = SolverConfig {
            max_iterations: 2,
            ..SolverConfig::exhaustive()
        };
        let res = solve_bb(&obj, &bx, 3, &cfg).unwrap();
        assert_eq!(res.stop_reason, StopReason::HardIter);
        assert!(res.support.len() <= 3);
    }

    #[test]
    fn invalid_k() {
        let (obj, bx) = random_problem(4, 1);
        assert!(matches!(
            solve_bb(&obj, &bx, 4, &SolverConfig::default()),
            Err(Error::InvalidK { .. })
        ));
    }
}
