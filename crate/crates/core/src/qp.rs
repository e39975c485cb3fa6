//! Convex quadratic objectives, search boxes and the box-constrained QP
//! solver behind every lower bound in the crate.
//!
//! The solver alternates a projected-gradient (Cauchy) step with an exact
//! line search along the projection arc and a conjugate-gradient step on the
//! face the Cauchy step lands on. Each outer iteration is monotone, so the
//! method inherits global convergence from projected gradient while the CG
//! phase gives finite termination once the active face is identified. It
//! only needs `Q` positive semi-definite; the box keeps the minimum finite.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance on the projected-gradient residual for bound solves.
pub const DEFAULT_QP_TOL: f64 = 1e-9;

const SYMMETRY_TOL: f64 = 1e-12;
const PSD_REL_TOL: f64 = 1e-8;
const PSD_CHECK_MAX_DIM: usize = 500;

/// `f(x) = ½ xᵀQx + qᵀx + c` with `Q` symmetric positive semi-definite.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObjective {
    hessian: DMatrix<f64>,
    linear: Vec<f64>,
    constant: f64,
}

impl QuadraticObjective {
    /// Validates symmetry always and positive semi-definiteness for `p <= 500`.
    pub fn new(hessian: DMatrix<f64>, linear: Vec<f64>, constant: f64) -> Result<Self> {
        let p = linear.len();
        if p == 0 {
            return Err(Error::InvalidObjective("dimension must be positive".into()));
        }
        if hessian.nrows() != p || hessian.ncols() != p {
            return Err(Error::InvalidObjective(format!(
                "hessian is {}x{} but the linear term has length {p}",
                hessian.nrows(),
                hessian.ncols()
            )));
        }
        if hessian.iter().chain(linear.iter()).any(|v| !v.is_finite()) || !constant.is_finite() {
            return Err(Error::InvalidObjective("non-finite coefficient".into()));
        }
        let mut asym = 0.0_f64;
        for j in 0..p {
            for i in (j + 1)..p {
                asym = asym.max((hessian[(i, j)] - hessian[(j, i)]).abs());
            }
        }
        if asym > SYMMETRY_TOL {
            return Err(Error::InvalidObjective(format!(
                "hessian is not symmetric (max asymmetry {asym:e})"
            )));
        }
        if p <= PSD_CHECK_MAX_DIM {
            let eig = hessian.clone().symmetric_eigenvalues();
            let largest = eig.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let smallest = eig.iter().cloned().fold(f64::INFINITY, f64::min);
            if smallest < -PSD_REL_TOL * largest {
                return Err(Error::InvalidObjective(format!(
                    "hessian is not positive semi-definite (smallest eigenvalue {smallest:e})"
                )));
            }
        }
        Ok(Self {
            hessian,
            linear,
            constant,
        })
    }

    /// Skips validation; callers guarantee the parts came from a valid objective.
    pub(crate) fn from_parts_unchecked(hessian: DMatrix<f64>, linear: Vec<f64>, constant: f64) -> Self {
        Self {
            hessian,
            linear,
            constant,
        }
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn hessian(&self) -> &DMatrix<f64> {
        &self.hessian
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// Column `j` of the hessian, which by symmetry is also row `j`.
    #[inline]
    pub(crate) fn column(&self, j: usize) -> &[f64] {
        let p = self.dim();
        &self.hessian.as_slice()[j * p..(j + 1) * p]
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim(), "point has wrong dimension");
        let mut quad = 0.0;
        let mut lin = 0.0;
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0.0 {
                continue;
            }
            let col = self.column(j);
            let dot: f64 = col.iter().zip(x).map(|(a, b)| a * b).sum();
            quad += xj * dot;
            lin += self.linear[j] * xj;
        }
        0.5 * quad + lin + self.constant
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.linear.clone();
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                axpy(xj, self.column(j), &mut g);
            }
        }
        g
    }

    /// The objective over the coordinates in `support`, the rest fixed at zero.
    pub fn restrict(&self, support: &IndexSet) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        support.check_bound(self.dim())?;
        let idx = support.as_slice();
        let m = idx.len();
        let hessian = DMatrix::from_fn(m, m, |r, c| self.hessian[(idx[r], idx[c])]);
        let linear = idx.iter().map(|&i| self.linear[i]).collect();
        Ok(Self::from_parts_unchecked(hessian, linear, self.constant))
    }
}

/// Free-function form of [`QuadraticObjective::restrict`].
pub fn restrict(obj: &QuadraticObjective, support: &IndexSet) -> Result<QuadraticObjective> {
    obj.restrict(support)
}

/// Per-coordinate bounds `[lower_i, upper_i]`, each straddling zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::InvalidBox(format!(
                "lower has length {} but upper has length {}",
                lower.len(),
                upper.len()
            )));
        }
        if lower.is_empty() {
            return Err(Error::InvalidBox("dimension must be positive".into()));
        }
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidBox(format!("coordinate {i} has a non-finite bound")));
            }
            if lo > 0.0 || hi < 0.0 {
                return Err(Error::InvalidBox(format!(
                    "coordinate {i}: [{lo}, {hi}] does not contain 0"
                )));
            }
            if lo >= hi {
                return Err(Error::InvalidBox(format!("coordinate {i}: [{lo}, {hi}] is degenerate")));
            }
        }
        Ok(Self { lower, upper })
    }

    /// `[-radius, radius]^p`.
    pub fn symmetric(p: usize, radius: f64) -> Result<Self> {
        Self::new(vec![-radius; p], vec![radius; p])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| v >= lo - 1e-12 && v <= hi + 1e-12)
    }

    pub fn restrict(&self, support: &IndexSet) -> Result<SearchBox> {
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        support.check_bound(self.dim())?;
        Ok(Self {
            lower: support.iter().map(|i| self.lower[i]).collect(),
            upper: support.iter().map(|i| self.upper[i]).collect(),
        })
    }
}

/// A strictly increasing list of zero-based coordinate indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Requires strictly increasing indices, each below `p`.
    pub fn new(indices: Vec<usize>, p: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndexSet(format!(
                "{indices:?} is not strictly increasing"
            )));
        }
        let set = Self(indices);
        set.check_bound(p)?;
        Ok(set)
    }

    /// Sorts and deduplicates.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self(indices)
    }

    pub fn full(p: usize) -> Self {
        Self((0..p).collect())
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn with(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&i) {
            v.insert(pos, i);
        }
        Self(v)
    }

    pub fn without(&self, i: usize) -> Self {
        Self(self.0.iter().copied().filter(|&j| j != i).collect())
    }

    pub(crate) fn check_bound(&self, p: usize) -> Result<()> {
        match self.0.last() {
            Some(&last) if last >= p => Err(Error::InvalidIndexSet(format!(
                "index {last} out of range for dimension {p}"
            ))),
            _ => Ok(()),
        }
    }

    /// Scatters `values` (one per member) into a length-`p` vector.
    pub fn scatter(&self, values: &[f64], p: usize) -> Vec<f64> {
        debug_assert_eq!(values.len(), self.len());
        let mut full = vec![0.0; p];
        for (&i, &v) in self.0.iter().zip(values) {
            full[i] = v;
        }
        full
    }

    pub fn gather(&self, full: &[f64]) -> Vec<f64> {
        self.0.iter().map(|&i| full[i]).collect()
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(s: IndexSet) -> Self {
        s.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QpSolution {
    pub point: Vec<f64>,
    pub value: f64,
    pub kkt_residual: f64,
    pub iterations: usize,
}

/// Largest violation of the box KKT conditions at `x` given gradient `g`.
fn projected_gradient_norm(x: &[f64], g: &[f64], lower: &[f64], upper: &[f64]) -> f64 {
    let mut r = 0.0_f64;
    for i in 0..x.len() {
        let v = if x[i] <= lower[i] {
            (-g[i]).max(0.0)
        } else if x[i] >= upper[i] {
            g[i].max(0.0)
        } else {
            g[i].abs()
        };
        r = r.max(v);
    }
    r
}

/// KKT residual of `x` for the box QP `(obj, bx)`, recomputing the gradient.
pub fn kkt_residual(obj: &QuadraticObjective, bx: &SearchBox, x: &[f64]) -> f64 {
    let g = obj.gradient(x);
    projected_gradient_norm(x, &g, bx.lower(), bx.upper())
}

#[inline]
fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct BoxQp<'a> {
    obj: &'a QuadraticObjective,
    lower: &'a [f64],
    upper: &'a [f64],
}

impl BoxQp<'_> {
    fn n(&self) -> usize {
        self.obj.dim()
    }

    fn hess_times(&self, d: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (j, &dj) in d.iter().enumerate() {
            if dj != 0.0 {
                axpy(dj, self.obj.column(j), out);
            }
        }
    }

    /// Moves `x` to the first local minimizer of `t -> f(P[x + t d])`, `t >= 0`,
    /// keeping `g` equal to the gradient at `x`. Returns the step taken.
    fn projected_search(&self, x: &mut [f64], g: &mut [f64], d: &mut [f64], hd: &mut [f64]) -> f64 {
        let n = self.n();
        let mut breaks: Vec<(f64, usize)> = Vec::with_capacity(n);
        for i in 0..n {
            let t = if d[i] > 0.0 {
                (self.upper[i] - x[i]) / d[i]
            } else if d[i] < 0.0 {
                (self.lower[i] - x[i]) / d[i]
            } else {
                continue;
            };
            if t <= 0.0 {
                d[i] = 0.0;
            } else {
                breaks.push((t, i));
            }
        }
        if breaks.is_empty() {
            return 0.0;
        }
        breaks.sort_by(|a, b| a.0.total_cmp(&b.0));
        self.hess_times(d, hd);

        let mut t_now = 0.0;
        let mut next = 0;
        loop {
            let slope = dot(g, d);
            if slope >= 0.0 {
                break;
            }
            let curv = dot(d, hd);
            let seg_end = breaks.get(next).map_or(f64::INFINITY, |b| b.0);
            let seg_len = seg_end - t_now;
            if curv > 0.0 {
                let step = -slope / curv;
                if step < seg_len {
                    self.advance(x, g, d, hd, step);
                    t_now += step;
                    break;
                }
            }
            if !seg_len.is_finite() {
                // Zero curvature with no breakpoint left cannot occur on a bounded box.
                break;
            }
            self.advance(x, g, d, hd, seg_len);
            t_now = seg_end;
            while next < breaks.len() && breaks[next].0 <= seg_end {
                let i = breaks[next].1;
                x[i] = if d[i] > 0.0 { self.upper[i] } else { self.lower[i] };
                axpy(-d[i], self.obj.column(i), hd);
                d[i] = 0.0;
                next += 1;
            }
            if next >= breaks.len() && d.iter().all(|&v| v == 0.0) {
                break;
            }
        }
        t_now
    }

    fn advance(&self, x: &mut [f64], g: &mut [f64], d: &[f64], hd: &[f64], step: f64) {
        for i in 0..x.len() {
            if d[i] != 0.0 {
                x[i] = (x[i] + step * d[i]).clamp(self.lower[i], self.upper[i]);
            }
        }
        axpy(step, hd, g);
    }

    /// Approximately solves `Q_FF s = -g_F` on the free set by conjugate
    /// gradients, writing `s` into `d` (zero off the free set).
    fn face_direction(&self, free: &[usize], g: &[f64], d: &mut [f64], tol: f64) {
        let m = free.len();
        d.iter_mut().for_each(|v| *v = 0.0);
        let mut s = vec![0.0; m];
        let mut r: Vec<f64> = free.iter().map(|&i| -g[i]).collect();
        let mut p = r.clone();
        let mut rr = dot(&r, &r);
        let mut ap = vec![0.0; m];
        let diag_scale = free
            .iter()
            .map(|&i| self.obj.hessian[(i, i)].abs())
            .fold(0.0_f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let max_cg = 2 * m + 10;
        for it in 0..max_cg {
            if rr.sqrt() <= 0.1 * tol {
                break;
            }
            for (a, &i) in ap.iter_mut().zip(free) {
                let col = self.obj.column(i);
                *a = free.iter().zip(&p).map(|(&j, &pj)| col[j] * pj).sum();
            }
            let pap = dot(&p, &ap);
            if pap <= 1e-14 * diag_scale * dot(&p, &p) {
                // Flat direction: follow it to the boundary if nothing better exists yet.
                if it == 0 {
                    s.copy_from_slice(&p);
                }
                break;
            }
            let alpha = rr / pap;
            axpy(alpha, &p, &mut s);
            axpy(-alpha, &ap, &mut r);
            let rr_new = dot(&r, &r);
            let beta = rr_new / rr;
            rr = rr_new;
            for (pi, ri) in p.iter_mut().zip(&r) {
                *pi = ri + beta * *pi;
            }
        }
        for (&i, &si) in free.iter().zip(&s) {
            d[i] = si;
        }
    }

    fn solve(&self, start: Option<&[f64]>, tol: f64, max_iter: usize) -> Result<QpSolution> {
        let n = self.n();
        let mut x: Vec<f64> = match start {
            Some(s) => s
                .iter()
                .zip(self.lower.iter().zip(self.upper))
                .map(|(&v, (&lo, &hi))| v.clamp(lo, hi))
                .collect(),
            None => vec![0.0; n],
        };
        let mut d = vec![0.0; n];
        let mut hd = vec![0.0; n];
        let lin_scale = self.obj.linear.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let hess_scale = self.obj.hessian.iter().fold(0.0_f64, |m, v| m.max(v.abs()));

        let mut residual = f64::INFINITY;
        for iter in 0..=max_iter {
            let g_fresh = self.obj.gradient(&x);
            let mut g = g_fresh;
            residual = projected_gradient_norm(&x, &g, self.lower, self.upper);
            let x_scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            // Floating-point floor of the gradient evaluation itself.
            let floor = 16.0 * f64::EPSILON * (hess_scale * x_scale * n as f64 + lin_scale);
            if residual <= tol.max(floor) {
                return Ok(QpSolution {
                    value: self.obj.value(&x),
                    point: x,
                    kkt_residual: residual,
                    iterations: iter,
                });
            }
            if iter == max_iter {
                break;
            }

            // Cauchy step along the negative gradient.
            for i in 0..n {
                d[i] = -g[i];
            }
            self.projected_search(&mut x, &mut g, &mut d, &mut hd);

            // Newton-like step on the face the Cauchy point landed on.
            let free: Vec<usize> = (0..n)
                .filter(|&i| x[i] > self.lower[i] && x[i] < self.upper[i])
                .collect();
            if !free.is_empty() {
                self.face_direction(&free, &g, &mut d, tol);
                self.projected_search(&mut x, &mut g, &mut d, &mut hd);
            }
        }
        Err(Error::NonConvergence {
            iterations: max_iter,
            residual,
        })
    }
}

/// Iteration cap for a QP of dimension `p`.
pub fn default_max_iterations(p: usize) -> usize {
    50 * p.max(1)
}

/// Global minimum of a convex QP over a box, certified by the KKT residual.
pub fn minimize_box_qp(obj: &QuadraticObjective, bx: &SearchBox, tol: f64) -> Result<QpSolution> {
    minimize_box_qp_from(obj, bx, None, tol)
}

/// As [`minimize_box_qp`], starting from the projection of `start` onto the box.
pub fn minimize_box_qp_from(
    obj: &QuadraticObjective,
    bx: &SearchBox,
    start: Option<&[f64]>,
    tol: f64,
) -> Result<QpSolution> {
    if obj.dim() != bx.dim() {
        return Err(Error::InvalidBox(format!(
            "box has dimension {} but objective has {}",
            bx.dim(),
            obj.dim()
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "QP tolerance must be positive, got {tol}"
        )));
    }
    if let Some(s) = start {
        if s.len() != obj.dim() {
            return Err(Error::InvalidConfig("warm start has wrong dimension".into()));
        }
    }
    let qp = BoxQp {
        obj,
        lower: bx.lower(),
        upper: bx.upper(),
    };
    qp.solve(start, tol, default_max_iterations(obj.dim()))
}

/// Minimum of the objective with every coordinate outside `support` fixed at
/// zero and the rest ranging over their original closed intervals. The
/// returned point is a full `p`-vector.
pub fn lower_bound(obj: &QuadraticObjective, bx: &SearchBox, support: &IndexSet, tol: f64) -> Result<QpSolution> {
    lower_bound_from(obj, bx, support, None, tol)
}

/// As [`lower_bound`], warm-started from a full-length point.
pub fn lower_bound_from(
    obj: &QuadraticObjective,
    bx: &SearchBox,
    support: &IndexSet,
    warm: Option<&[f64]>,
    tol: f64,
) -> Result<QpSolution> {
    let p = obj.dim();
    if bx.dim() != p {
        return Err(Error::InvalidBox(format!(
            "box has dimension {} but objective has {p}",
            bx.dim()
        )));
    }
    if support.is_empty() {
        return Ok(QpSolution {
            point: vec![0.0; p],
            value: obj.constant(),
            kkt_residual: 0.0,
            iterations: 0,
        });
    }
    if support.len() == p {
        return minimize_box_qp_from(obj, bx, warm, tol);
    }
    let sub_obj = obj.restrict(support)?;
    let sub_box = bx.restrict(support)?;
    let start = warm.map(|w| support.gather(w));
    let sol = minimize_box_qp_from(&sub_obj, &sub_box, start.as_deref(), tol)?;
    Ok(QpSolution {
        point: support.scatter(&sol.point, p),
        ..sol
    })
}

/// One recorded restricted solve, kept for after-the-fact certificate checks.
#[derive(Debug, Clone, PartialEq)]
pub struct QpRecord {
    pub support: IndexSet,
    pub point: Vec<f64>,
    pub value: f64,
}

/// Evaluates `q(S)`, the restricted box-QP minimum, for supports of one
/// problem while counting solves and optionally recording each solution.
pub struct SubsetEvaluator<'a> {
    obj: &'a QuadraticObjective,
    bx: &'a SearchBox,
    tol: f64,
    solves: usize,
    records: Option<Vec<QpRecord>>,
}

impl<'a> SubsetEvaluator<'a> {
    pub fn new(obj: &'a QuadraticObjective, bx: &'a SearchBox, tol: f64) -> Result<Self> {
        if obj.dim() != bx.dim() {
            return Err(Error::InvalidBox(format!(
                "box has dimension {} but objective has {}",
                bx.dim(),
                obj.dim()
            )));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "QP tolerance must be positive, got {tol}"
            )));
        }
        Ok(Self {
            obj,
            bx,
            tol,
            solves: 0,
            records: None,
        })
    }

    pub fn recording(mut self, on: bool) -> Self {
        self.records = on.then(Vec::new);
        self
    }

    pub fn objective(&self) -> &'a QuadraticObjective {
        self.obj
    }

    pub fn search_box(&self) -> &'a SearchBox {
        self.bx
    }

    pub fn dim(&self) -> usize {
        self.obj.dim()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Number of QP solves performed (empty supports are free and not counted).
    pub fn solves(&self) -> usize {
        self.solves
    }

    pub fn evaluate(&mut self, support: &IndexSet, warm: Option<&[f64]>) -> Result<QpSolution> {
        let sol = lower_bound_from(self.obj, self.bx, support, warm, self.tol)?;
        if !support.is_empty() {
            self.solves += 1;
        }
        if let Some(records) = self.records.as_mut() {
            records.push(QpRecord {
                support: support.clone(),
                point: sol.point.clone(),
                value: sol.value,
            });
        }
        Ok(sol)
    }

    pub fn take_records(&mut self) -> Vec<QpRecord> {
        self.records.as_mut().map(std::mem::take).unwrap_or_default()
    }
}
