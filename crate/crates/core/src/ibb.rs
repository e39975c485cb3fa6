//! Interval branch-and-bound with branching at zero.
//!
//! Boxes are flag vectors ([`FlagBox`]); each iteration takes one node off
//! the list, splits one undecided coordinate into a zero-fixed and a
//! nonzero-forced child, and bounds each child by the exact restricted box-QP
//! minimum. The nonzero-forced child has the same closed relaxation as its
//! parent, so it inherits the parent's bound without a solve.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::flagbox::{initial_flagbox, DeletionVerdict, Flag, FlagBox};
use crate::qp::{IndexSet, QuadraticObjective, SearchBox, SubsetEvaluator};
use crate::sfs::{run_sfs_with, top_k_support};
use crate::solver::{
    check_k, BoundLink, Incumbent, NodeSelection, SolveAudit, SolveResult, SolverConfig, StopClock, StopReason,
};

#[derive(Debug, Clone)]
pub struct Node {
    pub fb: FlagBox,
    pub feasible_point: Vec<f64>,
    pub feasible_value: f64,
    pub lower_bound_value: f64,
    pub lb_inherited: bool,
    /// Minimizer attaining `lower_bound_value`.
    pub lb_minimizer: Vec<f64>,
}

struct Queued {
    seq: u64,
    twos: usize,
    node: Node,
    selection: NodeSelection,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    // BinaryHeap pops the greatest element; earlier insertion wins ties.
    fn cmp(&self, other: &Self) -> Ordering {
        let primary = match self.selection {
            NodeSelection::Bfs => other.node.lower_bound_value.total_cmp(&self.node.lower_bound_value),
            NodeSelection::Dfs => self.twos.cmp(&other.twos),
        };
        primary.then_with(|| other.seq.cmp(&self.seq))
    }
}

/// The live node list, ordered by the configured selection rule.
pub struct NodeQueue {
    heap: BinaryHeap<Queued>,
    selection: NodeSelection,
    next_seq: u64,
}

impl NodeQueue {
    pub fn new(selection: NodeSelection) -> Self {
        Self {
            heap: BinaryHeap::new(),
            selection,
            next_seq: 0,
        }
    }

    pub fn push(&mut self, node: Node) {
        let twos = node.fb.count(Flag::NonZero);
        self.heap.push(Queued {
            seq: self.next_seq,
            twos,
            node,
            selection: self.selection,
        });
        self.next_seq += 1;
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

/// Removes and returns the next node: smallest bound (BFS) or most
/// nonzero-forced coordinates (DFS), earliest insertion on ties.
pub fn select_node(queue: &mut NodeQueue) -> Result<Node> {
    queue.heap.pop().map(|q| q.node).ok_or(Error::EmptyList)
}

/// The undecided coordinate with the largest `|x_i|` of the bound minimizer;
/// the lowest such index on ties (including an all-zero minimizer).
pub fn choose_branch_coordinate(fb: &FlagBox, lb_minimizer: &[f64]) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &flag) in fb.flags().iter().enumerate() {
        if flag != Flag::Free {
            continue;
        }
        let a = lb_minimizer[i].abs();
        if best.is_none_or(|(_, b)| a > b) {
            best = Some((i, a));
        }
    }
    best.map(|(i, _)| i).ok_or(Error::NoBranchableCoordinate)
}

/// Cheap feasible point in a box: the bound minimizer keeping the forced
/// coordinates and the largest free ones, zero elsewhere.
fn truncated_point(fb: &FlagBox, x: &[f64], k: usize) -> Vec<f64> {
    let forced = fb.nonzero_forced();
    let room = k.saturating_sub(forced.len());
    let free: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(i, &v)| if fb.flag(i) == Flag::Free { v } else { 0.0 })
        .collect();
    let keep = top_k_support(&free, room);
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            if forced.contains(i) || (keep.contains(i) && free[i] != 0.0) {
                v
            } else {
                0.0
            }
        })
        .collect()
}

/// Warm-start support for the swap search inside a box: forced coordinates
/// padded with the largest free coordinates of the bound minimizer.
fn sampling_support(fb: &FlagBox, x: &[f64], k: usize) -> IndexSet {
    let forced = fb.nonzero_forced();
    let mut support: Vec<usize> = forced.as_slice().to_vec();
    let mut free: Vec<usize> = (0..fb.dim()).filter(|&i| fb.flag(i) == Flag::Free).collect();
    free.sort_by(|&a, &b| x[b].abs().total_cmp(&x[a].abs()).then(a.cmp(&b)));
    support.extend(free.into_iter().take(k.saturating_sub(forced.len())));
    if support.len() < k {
        // Zero-fixed coordinates fill any remaining slots; the search is global.
        let extra: Vec<usize> = (0..fb.dim()).filter(|i| !support.contains(i)).collect();
        support.extend(extra.into_iter().take(k - support.len()));
    }
    IndexSet::from_unsorted(support)
}

struct Search<'a, 'e> {
    eval: &'e mut SubsetEvaluator<'a>,
    cfg: &'a SolverConfig,
    k: usize,
    incumbent: Incumbent,
    clock: StopClock,
    iterations: u64,
    lb_calls: u64,
    nodes_created: u64,
    children_bounded: u64,
    audit: Option<SolveAudit>,
}

impl Search<'_, '_> {
    fn offer(&mut self, point: &[f64], value: f64) -> Result<()> {
        if self.incumbent.offer(point, value, self.k)? {
            self.clock.improved(self.iterations);
            if let Some(a) = self.audit.as_mut() {
                a.incumbent_history.push((self.iterations, value));
            }
        }
        Ok(())
    }

    fn sample_sfs(&mut self, fb: &FlagBox, x: &[f64]) -> Result<()> {
        let start = sampling_support(fb, x, self.k);
        let out = run_sfs_with(self.eval, self.k, &start)?;
        self.offer(&out.point, out.value)
    }

    fn note_created(&mut self, fb: &FlagBox, verdict: &DeletionVerdict) {
        self.nodes_created += 1;
        if let Some(a) = self.audit.as_mut() {
            a.created.push(fb.collapsed(verdict));
        }
    }

    fn note_deleted(&mut self, fb: &FlagBox) {
        if let Some(a) = self.audit.as_mut() {
            a.bound_deleted.push(fb.clone());
        }
    }

    /// Handles one child; returns the node to store, if any.
    fn process_child(&mut self, parent: &Node, child: FlagBox, inherits: bool) -> Result<Option<Node>> {
        let verdict = child.check_deletion(self.k);
        self.note_created(&child, &verdict);
        match verdict {
            DeletionVerdict::Infeasible => Ok(None),
            DeletionVerdict::TerminalFixedSupport(ref s) | DeletionVerdict::TerminalFreeSupport(ref s) => {
                let sol = self.eval.evaluate(s, Some(&parent.lb_minimizer))?;
                self.lb_calls += 1;
                self.offer(&sol.point, sol.value)?;
                Ok(None)
            }
            DeletionVerdict::Continue => {
                let (lb, minimizer) = if inherits {
                    (parent.lower_bound_value, parent.lb_minimizer.clone())
                } else {
                    let sol = self.eval.evaluate(&child.support(), Some(&parent.lb_minimizer))?;
                    self.lb_calls += 1;
                    (sol.value, sol.point)
                };
                if let Some(a) = self.audit.as_mut() {
                    a.bound_links.push(BoundLink {
                        parent: parent.lower_bound_value,
                        child: lb,
                        inherited: inherits,
                    });
                }

                // Feasibility sampling.
                let feasible_point = truncated_point(&child, &minimizer, self.k);
                let feasible_value = self.eval.objective().value(&feasible_point);
                self.offer(&feasible_point, feasible_value)?;
                self.children_bounded += 1;
                if self
                    .cfg
                    .sfs_every
                    .is_some_and(|n| self.children_bounded.is_multiple_of(n))
                {
                    self.sample_sfs(&child, &minimizer)?;
                }

                if !self.cfg.disable_bound_deletion && self.incumbent.value < lb {
                    self.note_deleted(&child);
                    return Ok(None);
                }
                Ok(Some(Node {
                    fb: child,
                    feasible_point,
                    feasible_value,
                    lower_bound_value: lb,
                    lb_inherited: inherits,
                    lb_minimizer: minimizer,
                }))
            }
        }
    }
}

/// Solves `min f(x)` over `bx` subject to `‖x‖₀ <= k`.
pub fn solve(obj: &QuadraticObjective, bx: &SearchBox, k: usize, cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let p = obj.dim();
    check_k(k, p)?;
    let mut eval = SubsetEvaluator::new(obj, bx, cfg.qp_tol)?.recording(cfg.audit);
    let mut search = Search {
        eval: &mut eval,
        cfg,
        k,
        incumbent: Incumbent {
            point: vec![0.0; p],
            value: obj.constant(),
        },
        clock: StopClock::start(true),
        iterations: 0,
        lb_calls: 0,
        nodes_created: 0,
        children_bounded: 0,
        audit: cfg.audit.then(SolveAudit::default),
    };
    if let Some(a) = search.audit.as_mut() {
        a.incumbent_history.push((0, obj.constant()));
    }

    let root_fb = initial_flagbox(p);
    search.note_created(&root_fb, &DeletionVerdict::Continue);
    let root = search.eval.evaluate(&IndexSet::full(p), None)?;
    search.lb_calls += 1;
    let root_start = top_k_support(&root.point, k);
    let sfs = run_sfs_with(search.eval, k, &root_start)?;
    search.offer(&sfs.point, sfs.value)?;

    let mut queue = NodeQueue::new(cfg.selection);
    queue.push(Node {
        fb: root_fb,
        feasible_point: sfs.point,
        feasible_value: sfs.value,
        lower_bound_value: root.value,
        lb_inherited: false,
        lb_minimizer: root.point,
    });

    let stop_reason = loop {
        if queue.is_empty() {
            break StopReason::Exhausted;
        }
        if let Some(reason) = search.clock.check(cfg, search.iterations) {
            break reason;
        }
        let node = select_node(&mut queue)?;
        if !cfg.disable_bound_deletion && search.incumbent.value < node.lower_bound_value {
            search.note_deleted(&node.fb);
            continue;
        }
        let eta = match choose_branch_coordinate(&node.fb, &node.lb_minimizer) {
            Ok(eta) => eta,
            Err(Error::NoBranchableCoordinate) => continue,
            Err(e) => return Err(e),
        };
        search.iterations += 1;
        if cfg.trace {
            eprintln!(
                "iter={} list={} incumbent={:.12e} node={}",
                search.iterations,
                queue.len(),
                search.incumbent.value,
                node.fb
            );
        }
        let (zero, two) = node.fb.branch(eta)?;
        for (child, inherits) in [(zero, false), (two, true)] {
            if let Some(stored) = search.process_child(&node, child, inherits)? {
                queue.push(stored);
            }
        }
    };

    let elapsed = search.clock.elapsed();
    let qp_solves = search.eval.solves() as u64;
    let mut audit = search.audit.take();
    if let Some(a) = audit.as_mut() {
        a.qp_records = search.eval.take_records();
    }
    let Incumbent { point, value } = search.incumbent;
    let support = IndexSet::from_unsorted((0..p).filter(|&i| point[i] != 0.0).collect());
    Ok(SolveResult {
        point,
        value,
        support,
        iterations: search.iterations,
        lb_calls: search.lb_calls,
        qp_solves,
        nodes_created: search.nodes_created,
        elapsed,
        stop_reason,
        audit,
    })
}
