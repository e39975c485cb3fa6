//! Comparison metrics: relative gap, performance profiles and box-plot
//! summaries.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};

/// `100·(f̃ - f*)/|f*|`. For the nonnegative objectives produced by the
/// regression reduction this is the usual relative gap.
pub fn relative_gap_percent(f_tilde: f64, f_star: f64) -> Result<f64> {
    if f_star == 0.0 {
        return Err(Error::ZeroBest);
    }
    Ok(100.0 * (f_tilde - f_star) / f_star.abs())
}

/// One step of a solver's empirical CDF: the fraction of problems whose
/// ratio to the best solver is at most `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub tau: f64,
    pub fraction: f64,
}

/// `measures[problem][solver] = t`. Returns, per solver, one point at each
/// distinct ratio `t / min_s t` that solver attains, in increasing order.
pub fn performance_profile(
    measures: &BTreeMap<String, BTreeMap<String, f64>>,
) -> Result<BTreeMap<String, Vec<ProfilePoint>>> {
    let solvers: BTreeSet<&String> = measures.values().flat_map(|m| m.keys()).collect();
    let mut ratios: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (problem, row) in measures {
        for solver in &solvers {
            let t = *row.get(*solver).ok_or_else(|| Error::MissingCell {
                problem: problem.clone(),
                solver: (*solver).clone(),
            })?;
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::NonPositiveMeasure {
                    problem: problem.clone(),
                    solver: (*solver).clone(),
                    value: t,
                });
            }
        }
        let best = row.values().copied().fold(f64::INFINITY, f64::min);
        for (solver, t) in row {
            ratios.entry(solver.clone()).or_default().push(t / best);
        }
    }
    let n = measures.len() as f64;
    Ok(ratios
        .into_iter()
        .map(|(solver, mut r)| {
            r.sort_by(f64::total_cmp);
            let mut points: Vec<ProfilePoint> = Vec::new();
            for (i, tau) in r.iter().enumerate() {
                let fraction = (i + 1) as f64 / n;
                match points.last_mut() {
                    Some(last) if last.tau == *tau => last.fraction = fraction,
                    _ => points.push(ProfilePoint { tau: *tau, fraction }),
                }
            }
            (solver, points)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxplotSummary {
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    /// Smallest point within 1.5·IQR below the box.
    pub lower: f64,
    /// Largest point within 1.5·IQR above the box.
    pub upper: f64,
    pub outliers: Vec<f64>,
}

/// Percentile of sorted data by linear interpolation between order
/// statistics: position `(n - 1)·f`.
pub fn percentile(sorted: &[f64], f: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * f;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn boxplot_stats(sample: &[f64]) -> Result<BoxplotSummary> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let (q25, median, q75) = (percentile(&x, 0.25), percentile(&x, 0.5), percentile(&x, 0.75));
    let iqr = q75 - q25;
    let (lo_fence, hi_fence) = (q25 - 1.5 * iqr, q75 + 1.5 * iqr);
    let inside = || x.iter().copied().filter(|v| (lo_fence..=hi_fence).contains(v));
    Ok(BoxplotSummary {
        q25,
        median,
        q75,
        lower: inside().fold(f64::INFINITY, f64::min),
        upper: inside().fold(f64::NEG_INFINITY, f64::max),
        outliers: x
            .iter()
            .copied()
            .filter(|v| !(lo_fence..=hi_fence).contains(v))
            .collect(),
    })
}
