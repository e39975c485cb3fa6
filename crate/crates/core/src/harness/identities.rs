//! Closed-form node and bound counts of the full (deletion-free) search
//! trees, and an instrumented check of the tree-size recurrence.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_integer::binomial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::ibb;
use crate::qp::{QuadraticObjective, SearchBox};
use crate::solver::SolverConfig;

/// `C(p+1, k+1) - C(p-1, k+1)`: bound evaluations of either full tree.
pub fn expected_lb_calls(p: usize, k: usize) -> u128 {
    let (p, k) = (p as u128, k as u128);
    binomial(p + 1, k + 1) - binomial(p - 1, k + 1)
}

/// `2·C(p, k) - 1`: nodes of the full interval tree.
pub fn expected_tree_size(p: usize, k: usize) -> u128 {
    2 * binomial(p as u128, k as u128) - 1
}

/// A small well-conditioned problem; node counts of the full tree do not
/// depend on the data.
pub fn tiny_problem(p: usize, seed: u64) -> Result<(QuadraticObjective, SearchBox)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(2 * p, p, |_, _| rng.random_range(-1.0..1.0));
    let h = a.transpose() * &a + DMatrix::identity(p, p);
    let h = (&h + h.transpose()) * 0.5;
    let q = (0..p).map(|_| rng.random_range(-2.0..2.0)).collect();
    Ok((QuadraticObjective::new(h, q, 5.0)?, SearchBox::symmetric(p, 3.0)?))
}

#[derive(Debug, Clone, Default)]
pub struct TreeSizeReport {
    /// `nodes_created` of the deletion-free interval search, keyed by `(p, k)`.
    pub sizes: BTreeMap<(usize, usize), u64>,
    /// Number of `(p, k)` pairs the recurrence was checked on.
    pub checked: usize,
    pub violations: Vec<String>,
}

impl TreeSizeReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs the deletion-free interval search for all `1 <= k < p <= p_max` and
/// checks `T(p,k) = T(p-1,k) + T(p-1,k-1) + 1` wherever both terms exist,
/// along with `T(5,2) = 19`.
pub fn tree_size_recurrence_check(p_max: usize) -> Result<TreeSizeReport> {
    let mut report = TreeSizeReport::default();
    for p in 2..=p_max {
        let (obj, bx) = tiny_problem(p, 17)?;
        for k in 1..p {
            let res = ibb::solve(&obj, &bx, k, &SolverConfig::counting())?;
            report.sizes.insert((p, k), res.nodes_created);
        }
    }
    for (&(p, k), &t) in &report.sizes {
        let (Some(a), Some(b)) = (
            report.sizes.get(&(p.wrapping_sub(1), k)),
            report.sizes.get(&(p.wrapping_sub(1), k.wrapping_sub(1))),
        ) else {
            continue;
        };
        report.checked += 1;
        if t != a + b + 1 {
            report.violations.push(format!(
                "T({p},{k}) = {t} but T({},{k}) + T({},{}) + 1 = {}",
                p - 1,
                p - 1,
                k - 1,
                a + b + 1
            ));
        }
    }
    if p_max >= 5 && report.sizes.get(&(5, 2)) != Some(&19) {
        report
            .violations
            .push(format!("T(5,2) = {:?}, expected 19", report.sizes.get(&(5, 2))));
    }
    Ok(report)
}
