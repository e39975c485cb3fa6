//! Exhaustive search over supports of size `k`.
//!
//! Every box contains the origin, so a support smaller than `k` is a face of
//! some size-`k` restriction and never needs to be enumerated on its own.

use std::time::Instant;

use itertools::Itertools;
use num_integer::binomial;

use crate::error::{Error, Result};
use crate::qp::{IndexSet, QuadraticObjective, SearchBox, SubsetEvaluator, DEFAULT_QP_TOL};
use crate::solver::{SolveAudit, SolveResult, StopReason};

/// Largest number of supports the oracle will enumerate.
pub const ORACLE_LIMIT: u128 = 1_000_000;

pub fn brute_force_oracle(obj: &QuadraticObjective, bx: &SearchBox, k: usize) -> Result<SolveResult> {
    brute_force_oracle_with(obj, bx, k, DEFAULT_QP_TOL, ORACLE_LIMIT, false)
}

/// Like [`brute_force_oracle`] with explicit tolerance, enumeration limit and
/// optional recording of every solve. Ties keep the lexicographically first
/// support.
pub fn brute_force_oracle_with(
    obj: &QuadraticObjective,
    bx: &SearchBox,
    k: usize,
    tol: f64,
    limit: u128,
    audit: bool,
) -> Result<SolveResult> {
    let p = obj.dim();
    if k > p {
        return Err(Error::InvalidK { k, p });
    }
    let count = binomial(p as u128, k as u128);
    if count > limit {
        return Err(Error::TooLarge { count, limit });
    }
    let start = Instant::now();
    let mut eval = SubsetEvaluator::new(obj, bx, tol)?.recording(audit);
    let mut best = eval.evaluate(&IndexSet::empty(), None)?;
    let mut iterations = 0;
    for combo in (0..p).combinations(k) {
        iterations += 1;
        let sol = eval.evaluate(&IndexSet::new(combo, p)?, None)?;
        if sol.value < best.value {
            best = sol;
        }
    }
    let elapsed = start.elapsed();
    let support = IndexSet::from_unsorted((0..p).filter(|&i| best.point[i] != 0.0).collect());
    Ok(SolveResult {
        point: best.point,
        value: best.value,
        support,
        iterations,
        lb_calls: eval.solves() as u64,
        qp_solves: eval.solves() as u64,
        nodes_created: 0,
        elapsed,
        stop_reason: StopReason::Exhausted,
        audit: audit.then(|| SolveAudit {
            qp_records: eval.take_records(),
            ..SolveAudit::default()
        }),
    })
}
