//! Synthetic best-subset regression instances and their reduction to a
//! cardinality-constrained QP.
//!
//! Rows of `X` are drawn from an equicorrelated Gaussian, columns are
//! centred and scaled to unit norm, and the noise variance is set from the
//! requested signal-to-noise ratio `‖Xβ⁰‖² / σ²`. Generation is
//! deterministic per seed on a given platform; bit-identical output across
//! platforms is not guaranteed, but the normalisation and SNR invariants
//! always hold.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::de::Error as _;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::qp::{minimize_box_qp, QuadraticObjective, SearchBox};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_K0: usize = 10;
pub const DEFAULT_RHO: f64 = 0.8;
pub const DEFAULT_TAU: f64 = 1.0;
/// Half-width of the box used for the unrestricted least-squares fit.
pub const OLS_BOX_RADIUS: f64 = 1e6;

const STREAM_DESIGN: u64 = 0;
const STREAM_BETA: u64 = 1;
const STREAM_NOISE: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// Overdetermined, `p < n`.
    #[serde(rename = "OD")]
    Od,
    /// Underdetermined, `p > n`.
    #[serde(rename = "UD")]
    Ud,
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "od" => Ok(Regime::Od),
            "ud" => Ok(Regime::Ud),
            other => Err(Error::InvalidShape(format!(
                "unknown case '{other}' (expected od or ud)"
            ))),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Od => "OD",
            Regime::Ud => "UD",
        })
    }
}

/// One row of the dimension table: `(name, p, n for OD, n for UD)`.
pub const SHAPES: [(&str, usize, usize, usize); 12] = [
    ("small-1", 20, 100, 10),
    ("small-2", 40, 200, 20),
    ("small-3", 60, 300, 30),
    ("small-4", 80, 400, 40),
    ("medium-1", 200, 1000, 100),
    ("medium-2", 300, 1000, 100),
    ("medium-3", 400, 2000, 100),
    ("medium-4", 500, 2000, 100),
    ("large-1", 800, 4000, 200),
    ("large-2", 1000, 4000, 200),
    ("large-3", 1500, 8000, 300),
    ("large-4", 2000, 8000, 300),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub name: String,
    pub regime: Regime,
    pub p: usize,
    pub n: usize,
}

impl Shape {
    pub fn named(name: &str, regime: Regime) -> Result<Self> {
        let (name, p, n_od, n_ud) = SHAPES
            .iter()
            .find(|s| s.0 == name)
            .ok_or_else(|| Error::InvalidShape(format!("unknown shape '{name}'")))?;
        Ok(Self {
            name: name.to_string(),
            regime,
            p: *p,
            n: if regime == Regime::Od { *n_od } else { *n_ud },
        })
    }

    /// A shape outside the table, for tests and small experiments.
    pub fn custom(name: &str, regime: Regime, p: usize, n: usize) -> Result<Self> {
        if p == 0 || n < 2 {
            return Err(Error::InvalidShape(format!("p={p}, n={n} is too small")));
        }
        Ok(Self {
            name: name.to_string(),
            regime,
            p,
            n,
        })
    }

    /// All table shapes in a suite (`small`, `medium` or `large`).
    pub fn suite(suite: &str, regime: Regime) -> Result<Vec<Self>> {
        let prefix = format!("{suite}-");
        let shapes: Vec<Self> = SHAPES
            .iter()
            .filter(|s| s.0.starts_with(&prefix))
            .map(|s| Self::named(s.0, regime))
            .collect::<Result<_>>()?;
        if shapes.is_empty() {
            return Err(Error::InvalidShape(format!("unknown suite '{suite}'")));
        }
        Ok(shapes)
    }
}

/// Equicorrelation covariance: unit diagonal, `rho` off the diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceSpec {
    pub rho: f64,
    pub p: usize,
}

impl CovarianceSpec {
    pub fn new(rho: f64, p: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::InvalidShape(format!("rho={rho} must lie in [0, 1)")));
        }
        Ok(Self { rho, p })
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.p, self.p, |i, j| if i == j { 1.0 } else { self.rho })
    }

    /// One draw from `N(0, Σ)` using the one-factor form
    /// `x_i = √ρ·w + √(1-ρ)·z_i`, which has exactly this covariance.
    pub fn sample_row<R: Rng>(&self, rng: &mut R, out: &mut [f64]) {
        let common: f64 = rng.sample(StandardNormal);
        let a = self.rho.sqrt() * common;
        let b = (1.0 - self.rho).sqrt();
        for v in out.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *v = a + b * z;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientPattern {
    /// Ones at `k0` equally spaced indices.
    EquallySpaced = 1,
    /// Ones at the first `k0` indices.
    Leading = 2,
    /// Random `k0` indices with integer values in `1..=5`.
    RandomIntegers = 3,
}

impl CoefficientPattern {
    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Self::EquallySpaced),
            2 => Ok(Self::Leading),
            3 => Ok(Self::RandomIntegers),
            _ => Err(Error::InvalidShape(format!("example id {id} must be 1, 2 or 3"))),
        }
    }

    pub fn id(self) -> u8 {
        self as u8
    }
}

/// Zero-based positions `floor((j - 1)·p / k0)` for `j = 1..=k0`; the first
/// is always index 0 and spacing is at least one since `k0 <= p`.
pub fn equally_spaced_indices(p: usize, k0: usize) -> Vec<usize> {
    (0..k0).map(|j| j * p / k0).collect()
}

pub fn true_coefficients<R: Rng>(pattern: CoefficientPattern, p: usize, k0: usize, rng: &mut R) -> Result<Vec<f64>> {
    if k0 > p {
        return Err(Error::InvalidK0 { k0, p });
    }
    let mut beta = vec![0.0; p];
    match pattern {
        CoefficientPattern::EquallySpaced => {
            for i in equally_spaced_indices(p, k0) {
                beta[i] = 1.0;
            }
        }
        CoefficientPattern::Leading => beta[..k0].iter_mut().for_each(|b| *b = 1.0),
        CoefficientPattern::RandomIntegers => {
            let mut idx = sample(rng, p, k0).into_vec();
            idx.sort_unstable();
            for i in idx {
                beta[i] = rng.random_range(1..=5) as f64;
            }
        }
    }
    Ok(beta)
}

/// Centre each column, then scale it to unit Euclidean norm.
pub fn standardize_columns(x: &mut DMatrix<f64>) {
    for mut col in x.column_iter_mut() {
        let mean = col.mean();
        col.add_scalar_mut(-mean);
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        }
    }
}

/// `Q = 2XᵀX`, `q = -2Xᵀy`, `c = yᵀy`, so that `f(β) = ‖y - Xβ‖²`.
pub fn build_ccqo(x: &DMatrix<f64>, y: &[f64]) -> Result<QuadraticObjective> {
    if x.nrows() != y.len() {
        return Err(Error::InvalidShape(format!(
            "X has {} rows but y has length {}",
            x.nrows(),
            y.len()
        )));
    }
    let yv = DVector::from_column_slice(y);
    let gram = x.tr_mul(x);
    let hessian = (&gram + gram.transpose()) * 1.0;
    let linear = (x.tr_mul(&yv) * -2.0).as_slice().to_vec();
    QuadraticObjective::new(hessian, linear, yv.dot(&yv))
}

/// Least squares over `bx`; with `None`, over the wide default box.
pub fn ols_fit(x: &DMatrix<f64>, y: &[f64], bx: Option<&SearchBox>, tol: f64) -> Result<Vec<f64>> {
    let obj = build_ccqo(x, y)?;
    let wide;
    let bx = match bx {
        Some(b) => b,
        None => {
            wide = SearchBox::symmetric(x.ncols(), OLS_BOX_RADIUS)?;
            &wide
        }
    };
    Ok(minimize_box_qp(&obj, bx, tol)?.point)
}

/// `[-τm - |β̂_i|, |β̂_i| + τm]` with `m = max_i |β̂_i|`.
pub fn initial_box(beta_hat: &[f64], tau: f64) -> Result<SearchBox> {
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::InvalidConfig(format!("tau must be positive, got {tau}")));
    }
    let m = beta_hat.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if m == 0.0 {
        return Err(Error::DegenerateBox);
    }
    let lower = beta_hat.iter().map(|b| -tau * m - b.abs()).collect();
    let upper = beta_hat.iter().map(|b| b.abs() + tau * m).collect();
    SearchBox::new(lower, upper)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerateOptions {
    pub k: usize,
    pub k0: usize,
    pub rho: f64,
    pub tau: f64,
    pub qp_tol: f64,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        Self {
            k: 5,
            k0: DEFAULT_K0,
            rho: DEFAULT_RHO,
            tau: DEFAULT_TAU,
            qp_tol: crate::qp::DEFAULT_QP_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionInstance {
    pub label: String,
    pub x: DMatrix<f64>,
    pub y: Vec<f64>,
    pub k: usize,
    pub k0: usize,
    pub beta0: Vec<f64>,
    pub snr: f64,
    pub sigma2: f64,
    pub seed: u64,
    pub search_box: SearchBox,
}

impl RegressionInstance {
    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn objective(&self) -> Result<QuadraticObjective> {
        build_ccqo(&self.x, &self.y)
    }

    /// Residual sum of squares `‖y - Xβ‖²`.
    pub fn rss(&self, beta: &[f64]) -> f64 {
        let r = DVector::from_column_slice(&self.y) - &self.x * DVector::from_column_slice(beta);
        r.norm_squared()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer(std::io::BufWriter::new(file), &InstanceFile::from(self))?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&InstanceFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

/// Draws one instance and builds its search box from the least-squares fit.
pub fn generate(
    shape: &Shape,
    pattern: CoefficientPattern,
    snr: f64,
    seed: u64,
    opts: &GenerateOptions,
) -> Result<RegressionInstance> {
    let (p, n) = (shape.p, shape.n);
    if !(snr.is_finite() && snr > 0.0) {
        return Err(Error::InvalidShape(format!("snr={snr} must be positive and finite")));
    }
    if opts.k0 > p {
        return Err(Error::InvalidK0 { k0: opts.k0, p });
    }
    let cov = CovarianceSpec::new(opts.rho, p)?;

    let mut design_rng = ChaCha8Rng::seed_from_u64(seed);
    design_rng.set_stream(STREAM_DESIGN);
    let mut x = DMatrix::zeros(n, p);
    let mut row = vec![0.0; p];
    for r in 0..n {
        cov.sample_row(&mut design_rng, &mut row);
        for (c, v) in row.iter().enumerate() {
            x[(r, c)] = *v;
        }
    }
    standardize_columns(&mut x);

    let mut beta_rng = ChaCha8Rng::seed_from_u64(seed);
    beta_rng.set_stream(STREAM_BETA);
    let beta0 = true_coefficients(pattern, p, opts.k0, &mut beta_rng)?;

    let signal = &x * DVector::from_column_slice(&beta0);
    let sigma2 = signal.norm_squared() / snr;
    let sigma = sigma2.sqrt();
    let mut noise_rng = ChaCha8Rng::seed_from_u64(seed);
    noise_rng.set_stream(STREAM_NOISE);
    let y: Vec<f64> = signal
        .iter()
        .map(|s| {
            let e: f64 = noise_rng.sample(StandardNormal);
            s + sigma * e
        })
        .collect();

    let beta_hat = ols_fit(&x, &y, None, opts.qp_tol)?;
    let search_box = match initial_box(&beta_hat, opts.tau) {
        Ok(b) => b,
        Err(Error::DegenerateBox) => SearchBox::symmetric(p, 1.0)?,
        Err(e) => return Err(e),
    };
    Ok(RegressionInstance {
        label: format!("{}/{}/ex{}/snr{}", shape.name, shape.regime, pattern.id(), snr),
        x,
        y,
        k: opts.k,
        k0: opts.k0,
        beta0,
        snr,
        sigma2,
        seed,
        search_box,
    })
}

fn fmt_f64(v: f64) -> std::result::Result<Box<RawValue>, serde_json::Error> {
    if !v.is_finite() {
        return Err(serde_json::Error::custom(format!("non-finite number {v}")));
    }
    RawValue::from_string(format!("{v:.16e}"))
}

fn ser_f64<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    fmt_f64(*v).map_err(serde::ser::Error::custom)?.serialize(s)
}

fn ser_f64_vec<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let raw = v
        .iter()
        .map(|x| fmt_f64(*x))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(serde::ser::Error::custom)?;
    s.collect_seq(raw)
}

/// On-disk layout; every number is written with 17 significant digits.
#[derive(Serialize, Deserialize)]
struct InstanceFile {
    schema_version: u32,
    label: String,
    n: usize,
    p: usize,
    k: usize,
    k0: usize,
    #[serde(serialize_with = "ser_f64")]
    snr: f64,
    #[serde(serialize_with = "ser_f64")]
    sigma2: f64,
    seed: u64,
    /// Row-major `n·p` values.
    #[serde(rename = "X", serialize_with = "ser_f64_vec")]
    x: Vec<f64>,
    #[serde(serialize_with = "ser_f64_vec")]
    y: Vec<f64>,
    #[serde(serialize_with = "ser_f64_vec")]
    beta0: Vec<f64>,
    #[serde(serialize_with = "ser_f64_vec")]
    box_lower: Vec<f64>,
    #[serde(serialize_with = "ser_f64_vec")]
    box_upper: Vec<f64>,
}

impl From<&RegressionInstance> for InstanceFile {
    fn from(inst: &RegressionInstance) -> Self {
        let (n, p) = (inst.n(), inst.p());
        let mut x = Vec::with_capacity(n * p);
        for r in 0..n {
            x.extend(inst.x.row(r).iter());
        }
        Self {
            schema_version: SCHEMA_VERSION,
            label: inst.label.clone(),
            n,
            p,
            k: inst.k,
            k0: inst.k0,
            snr: inst.snr,
            sigma2: inst.sigma2,
            seed: inst.seed,
            x,
            y: inst.y.clone(),
            beta0: inst.beta0.clone(),
            box_lower: inst.search_box.lower().to_vec(),
            box_upper: inst.search_box.upper().to_vec(),
        }
    }
}

impl TryFrom<InstanceFile> for RegressionInstance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        if f.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidShape(format!(
                "unsupported schema_version {}",
                f.schema_version
            )));
        }
        let lens_ok = f.x.len() == f.n * f.p
            && f.y.len() == f.n
            && f.beta0.len() == f.p
            && f.box_lower.len() == f.p
            && f.box_upper.len() == f.p;
        if !lens_ok {
            return Err(Error::InvalidShape("array lengths do not match n and p".into()));
        }
        Ok(Self {
            label: f.label,
            x: DMatrix::from_row_slice(f.n, f.p, &f.x),
            y: f.y,
            k: f.k,
            k0: f.k0,
            beta0: f.beta0,
            snr: f.snr,
            sigma2: f.sigma2,
            seed: f.seed,
            search_box: SearchBox::new(f.box_lower, f.box_upper)?,
        })
    }
}
