//! Risk-averse empirical risk minimisation.
//!
//! A spectral risk of per-datum losses is `(1/n) Σ wᵢ ℓᵢ` with rank weights
//! `wᵢ = n (φ(i/n) − φ((i−1)/n))` assigned by descending loss. Holding the
//! weights fixed at the current losses gives a subgradient, so plain
//! full-batch gradient descent applies. Tied losses share the average weight
//! of their block; the choice of subgradient at ties is ours.
//!
//! The reference experiments in the literature use an adaptive optimiser;
//! this module uses plain gradient descent so that runs are deterministic and
//! easy to audit.

use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::distortion::Distortion;
use crate::empirical::LossSample;
use crate::error::{Result, RiskError};
use crate::evaluation::{breakpoint_levels, cvar_curve, lorenz_curve};
use crate::io;
use crate::risk::{evaluate, RiskSpec};

/// Real matrix with one datum per row.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl DataMatrix {
    /// `entries` are read row by row.
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(RiskError::invalid("data matrix needs at least one row and column"));
        }
        if entries.len() != rows * cols {
            return Err(RiskError::invalid(format!(
                "{} entries do not fill a {rows}×{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(RiskError::invalid("data matrix has non-finite entries"));
        }
        Ok(DataMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != m) {
            return Err(RiskError::invalid("rows have different lengths"));
        }
        DataMatrix::new(n, m, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks_exact(self.cols)
    }

    pub fn column_means(&self) -> Vec<f64> {
        let mut means = vec![0.0; self.cols];
        for row in self.iter_rows() {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        means.iter_mut().for_each(|m| *m /= self.rows as f64);
        means
    }

    /// Subtracts `means` from every row.
    pub fn centered(&self, means: &[f64]) -> Result<Self> {
        if means.len() != self.cols {
            return Err(RiskError::invalid("centering vector has the wrong length"));
        }
        let entries = self
            .iter_rows()
            .flat_map(|row| row.iter().zip(means).map(|(v, m)| v - m))
            .collect();
        DataMatrix::new(self.rows, self.cols, entries)
    }
}

/// Trained parameters with their shape, e.g. `[k, m]` for a projection or
/// `[m + 1]` for weights followed by a bias.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelState {
    pub params: Vec<f64>,
    pub shape: Vec<usize>,
    pub rng_seed: u64,
    pub step_count: usize,
}

/// Group label `0..G` for every datum; no group is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAssignment {
    ids: Vec<usize>,
    counts: Vec<usize>,
}

impl GroupAssignment {
    pub fn new(ids: Vec<usize>) -> Result<Self> {
        let groups = ids.iter().max().map_or(0, |g| g + 1);
        let mut counts = vec![0; groups];
        for &g in &ids {
            counts[g] += 1;
        }
        if ids.is_empty() {
            return Err(RiskError::invalid("no group labels"));
        }
        if let Some(g) = counts.iter().position(|&c| c == 0) {
            return Err(RiskError::invalid(format!("group {g} is empty")));
        }
        Ok(GroupAssignment { ids, counts })
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn groups(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Mean of `values` within each group.
    pub fn group_means(&self, values: &[f64]) -> Result<Vec<f64>> {
        if values.len() != self.ids.len() {
            return Err(RiskError::invalid(format!(
                "{} losses for {} group labels",
                values.len(),
                self.ids.len()
            )));
        }
        let mut sums = vec![0.0; self.groups()];
        for (&g, v) in self.ids.iter().zip(values) {
            sums[g] += v;
        }
        Ok(sums
            .into_iter()
            .zip(&self.counts)
            .map(|(s, &c)| s / c as f64)
            .collect())
    }
}

/// Rank weights `n (φ(i/n) − φ((i−1)/n))` in the original order of
/// `losses`, with tied losses sharing the average weight of their block.
pub fn spectral_weights(losses: &[f64], phi: &Distortion) -> Vec<f64> {
    let n = losses.len();
    let nf = n as f64;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| losses[b].total_cmp(&losses[a]));
    let mut weights = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && losses[order[end]] == losses[order[start]] {
            end += 1;
        }
        let block = phi.increment(start as f64 / nf, end as f64 / nf) * nf;
        let w = block / (end - start) as f64;
        for &i in &order[start..end] {
            weights[i] = w;
        }
        start = end;
    }
    weights
}

/// Per-datum losses and their weighted gradients as functions of a flat
/// parameter vector.
pub trait Objective {
    fn dim(&self) -> usize;

    fn losses(&self, params: &[f64]) -> Vec<f64>;

    /// `Σᵢ cᵢ ∇ℓᵢ(params)`.
    fn weighted_gradient(&self, params: &[f64], coeffs: &[f64]) -> Vec<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentConfig {
    pub steps: usize,
    pub lr: f64,
    pub seed: u64,
}

/// Outcome of [`minimize`]. `trace[s]` is the risk before step `s`; the last
/// entry is the risk at the returned parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    pub state: ModelState,
    pub trace: Vec<f64>,
}

/// Distortion driving the weights; only spectral risks are supported.
fn training_distortion(risk: &RiskSpec) -> Result<Distortion> {
    risk.as_distortion()?
        .ok_or_else(|| RiskError::invalid("training supports mean, cvar, rim, maxvar and spectral risks"))
}

/// Full-batch subgradient descent on the spectral risk of the objective's
/// losses, starting from `init`.
pub fn minimize<O: Objective>(
    objective: &O,
    init: Vec<f64>,
    shape: Vec<usize>,
    risk: &RiskSpec,
    config: DescentConfig,
) -> Result<Fit> {
    let phi = training_distortion(risk)?;
    if !(config.lr.is_finite() && config.lr >= 0.0) {
        return Err(RiskError::Domain {
            name: "lr",
            value: config.lr,
            domain: "[0, ∞)",
        });
    }
    if init.len() != objective.dim() {
        return Err(RiskError::invalid(format!(
            "initial parameters have length {}, objective expects {}",
            init.len(),
            objective.dim()
        )));
    }
    let mut params = init;
    let mut trace = Vec::with_capacity(config.steps + 1);
    for step in 0..=config.steps {
        let losses = objective.losses(&params);
        if losses.is_empty() || losses.iter().any(|l| !l.is_finite()) {
            return Err(RiskError::NonFinite { step });
        }
        let n = losses.len() as f64;
        let weights = spectral_weights(&losses, &phi);
        trace.push(weights.iter().zip(&losses).map(|(w, l)| w * l).sum::<f64>() / n);
        if step == config.steps {
            break;
        }
        let coeffs: Vec<f64> = weights.iter().map(|w| w / n).collect();
        let grad = objective.weighted_gradient(&params, &coeffs);
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(RiskError::NonFinite { step });
        }
        for (p, g) in params.iter_mut().zip(&grad) {
            *p -= config.lr * g;
        }
    }
    Ok(Fit {
        state: ModelState {
            params,
            shape,
            rng_seed: config.seed,
            step_count: config.steps,
        },
        trace,
    })
}

/// One scalar parameter with losses `(θ − aᵢ)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    pub targets: Vec<f64>,
}

impl Objective for Quadratic {
    fn dim(&self) -> usize {
        1
    }

    fn losses(&self, params: &[f64]) -> Vec<f64> {
        self.targets.iter().map(|a| (params[0] - a).powi(2)).collect()
    }

    fn weighted_gradient(&self, params: &[f64], coeffs: &[f64]) -> Vec<f64> {
        vec![self
            .targets
            .iter()
            .zip(coeffs)
            .map(|(a, c)| c * 2.0 * (params[0] - a))
            .sum()]
    }
}

/// Linear autoencoder `x ↦ VᵀV x` with `V ∈ ℝ^{k×m}` stored row-major and
/// per-datum losses `‖x − VᵀV x‖²` on centred data.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaStar {
    data: DataMatrix,
    mean: Vec<f64>,
    k: usize,
}

impl PcaStar {
    /// Centres `data` by its column means.
    pub fn new(data: &DataMatrix, k: usize) -> Result<Self> {
        if k < 1 || k > data.cols() {
            return Err(RiskError::Domain {
                name: "k",
                value: k as f64,
                domain: "[1, number of columns]",
            });
        }
        let mean = data.column_means();
        Ok(PcaStar {
            data: data.centered(&mean)?,
            mean,
            k,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn centered_data(&self) -> &DataMatrix {
        &self.data
    }

    /// Top-`k` eigenvectors of the covariance as the rows of `V`.
    pub fn pca_init(&self) -> Vec<f64> {
        pca_directions(&self.data, self.k)
    }

    /// Losses on new data, centred with the training mean.
    pub fn losses_on(&self, params: &[f64], data: &DataMatrix) -> Result<Vec<f64>> {
        let c = data.centered(&self.mean)?;
        Ok(reconstruction_losses(params, self.k, &c))
    }
}

fn project(v: &[f64], k: usize, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let m = x.len();
    let z: Vec<f64> = (0..k)
        .map(|j| v[j * m..(j + 1) * m].iter().zip(x).map(|(a, b)| a * b).sum())
        .collect();
    let r: Vec<f64> = (0..m)
        .map(|c| x[c] - (0..k).map(|j| v[j * m + c] * z[j]).sum::<f64>())
        .collect();
    (z, r)
}

fn reconstruction_losses(v: &[f64], k: usize, data: &DataMatrix) -> Vec<f64> {
    data.iter_rows()
        .map(|x| project(v, k, x).1.iter().map(|r| r * r).sum())
        .collect()
}

/// Eigenvectors of `XᵀX / n` for the `k` largest eigenvalues, each with its
/// first non-negligible component positive, stacked row-major.
pub fn pca_directions(centered: &DataMatrix, k: usize) -> Vec<f64> {
    let (n, m) = (centered.rows(), centered.cols());
    let x = DMatrix::from_row_slice(n, m, &centered.entries);
    let cov = x.transpose() * &x / n as f64;
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let mut v = Vec::with_capacity(k * m);
    for &j in order.iter().take(k) {
        let col: Vec<f64> = eig.eigenvectors.column(j).iter().copied().collect();
        let sign = col
            .iter()
            .find(|c| c.abs() > 1e-12)
            .map_or(1.0, |c| c.signum());
        v.extend(col.iter().map(|c| c * sign));
    }
    v
}

impl Objective for PcaStar {
    fn dim(&self) -> usize {
        self.k * self.data.cols()
    }

    fn losses(&self, params: &[f64]) -> Vec<f64> {
        reconstruction_losses(params, self.k, &self.data)
    }

    /// `∇_V ‖x − VᵀVx‖² = −2 (z rᵀ + (V r) xᵀ)` with `z = Vx`, `r = x − Vᵀz`.
    fn weighted_gradient(&self, params: &[f64], coeffs: &[f64]) -> Vec<f64> {
        let (k, m) = (self.k, self.data.cols());
        let mut grad = vec![0.0; k * m];
        for (x, &c) in self.data.iter_rows().zip(coeffs) {
            if c == 0.0 {
                continue;
            }
            let (z, r) = project(params, k, x);
            for j in 0..k {
                let vr: f64 = params[j * m..(j + 1) * m].iter().zip(&r).map(|(a, b)| a * b).sum();
                for col in 0..m {
                    grad[j * m + col] -= 2.0 * c * (z[j] * r[col] + vr * x[col]);
                }
            }
        }
        grad
    }
}

/// Trained autoencoder together with its final training losses.
#[derive(Debug, Clone)]
pub struct PcaFit {
    pub model: PcaStar,
    pub fit: Fit,
    pub losses: LossSample,
}

/// Trains a linear autoencoder from the classical PCA solution.
pub fn pca_star(
    data: &DataMatrix,
    k: usize,
    risk: &RiskSpec,
    steps: usize,
    lr: f64,
    seed: u64,
) -> Result<PcaFit> {
    let model = PcaStar::new(data, k)?;
    let init = model.pca_init();
    let fit = minimize(
        &model,
        init,
        vec![k, data.cols()],
        risk,
        DescentConfig { steps, lr, seed },
    )?;
    let losses = LossSample::uniform(model.losses(&fit.state.params))?;
    Ok(PcaFit { model, fit, losses })
}

/// Linear model with ℓ1 loss whose training losses are the per-group mean
/// absolute errors. Parameters are the weights followed by the bias.
#[derive(Debug, Clone, PartialEq)]
pub struct SubgroupRegression {
    pub features: DataMatrix,
    pub targets: Vec<f64>,
    pub groups: GroupAssignment,
}

impl SubgroupRegression {
    pub fn new(features: DataMatrix, targets: Vec<f64>, groups: GroupAssignment) -> Result<Self> {
        if targets.len() != features.rows() || groups.ids().len() != features.rows() {
            return Err(RiskError::invalid("features, targets and groups differ in length"));
        }
        Ok(SubgroupRegression {
            features,
            targets,
            groups,
        })
    }

    fn residuals(&self, params: &[f64]) -> Vec<f64> {
        let m = self.features.cols();
        self.features
            .iter_rows()
            .zip(&self.targets)
            .map(|(x, y)| x.iter().zip(&params[..m]).map(|(a, w)| a * w).sum::<f64>() + params[m] - y)
            .collect()
    }

    /// Absolute error of every datum.
    pub fn datum_losses(&self, params: &[f64]) -> Vec<f64> {
        self.residuals(params).into_iter().map(f64::abs).collect()
    }
}

impl Objective for SubgroupRegression {
    fn dim(&self) -> usize {
        self.features.cols() + 1
    }

    fn losses(&self, params: &[f64]) -> Vec<f64> {
        self.groups
            .group_means(&self.datum_losses(params))
            .expect("lengths checked at construction")
    }

    fn weighted_gradient(&self, params: &[f64], coeffs: &[f64]) -> Vec<f64> {
        let m = self.features.cols();
        let mut grad = vec![0.0; m + 1];
        let counts = self.groups.counts();
        for ((x, r), &g) in self
            .features
            .iter_rows()
            .zip(self.residuals(params))
            .zip(self.groups.ids())
        {
            let c = coeffs[g] / counts[g] as f64 * sign(r);
            for (gj, xj) in grad.iter_mut().zip(x) {
                *gj += c * xj;
            }
            grad[m] += c;
        }
        grad
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `risk` applied to the equally likely per-group mean losses.
pub fn subgroup_risk(losses: &[f64], groups: &GroupAssignment, risk: &RiskSpec) -> Result<f64> {
    let means = groups.group_means(losses)?;
    evaluate(risk, &LossSample::uniform(means)?)
}

/// Majority rows spread along the first axis (standard deviation 2), minority
/// rows spread along the second (standard deviation 4), all other
/// coordinates with standard deviation 0.3. The majority carries more total
/// variance, so classical PCA with one component follows the first axis and
/// reconstructs the minority poorly. Returns the data and the cluster labels
/// (`1` = minority).
pub fn two_cluster(n: usize, m: usize, minority: f64, seed: u64) -> Result<(DataMatrix, GroupAssignment)> {
    if m < 2 || n < 2 {
        return Err(RiskError::invalid("two_cluster needs n ≥ 2 and m ≥ 2"));
    }
    if !(minority > 0.0 && minority < 1.0) {
        return Err(RiskError::Domain {
            name: "minority",
            value: minority,
            domain: "(0, 1)",
        });
    }
    let n_min = ((n as f64 * minority).round() as usize).clamp(1, n - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(n * m);
    let mut ids = Vec::with_capacity(n);
    for i in 0..n {
        let is_minority = i >= n - n_min;
        for c in 0..m {
            let z: f64 = StandardNormal.sample(&mut rng);
            let v = match (is_minority, c) {
                (false, 0) => 2.0 * z,
                (true, 1) => 4.0 * z,
                _ => 0.3 * z,
            };
            entries.push(v);
        }
        ids.push(usize::from(is_minority));
    }
    Ok((DataMatrix::new(n, m, entries)?, GroupAssignment::new(ids)?))
}

/// Features `N(0, 1)`; the majority group (label 0) follows `y = Σ xⱼ` with
/// small noise, the minority group (label 1) `y = Σ (−1)ʲ xⱼ + 1` with
/// larger noise.
pub fn grouped_regression(
    n: usize,
    m: usize,
    minority: f64,
    seed: u64,
) -> Result<(DataMatrix, Vec<f64>, GroupAssignment)> {
    if m < 1 || n < 2 {
        return Err(RiskError::invalid("grouped_regression needs n ≥ 2 and m ≥ 1"));
    }
    if !(minority > 0.0 && minority < 1.0) {
        return Err(RiskError::Domain {
            name: "minority",
            value: minority,
            domain: "(0, 1)",
        });
    }
    let n_min = ((n as f64 * minority).round() as usize).clamp(1, n - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::with_capacity(n * m);
    let mut targets = Vec::with_capacity(n);
    let mut ids = Vec::with_capacity(n);
    for i in 0..n {
        let is_minority = i >= n - n_min;
        let x: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut rng)).collect();
        let noise: f64 = StandardNormal.sample(&mut rng);
        let y = if is_minority {
            x.iter()
                .enumerate()
                .map(|(j, v)| if j % 2 == 0 { *v } else { -v })
                .sum::<f64>()
                + 1.0
                + 0.5 * noise
        } else {
            x.iter().sum::<f64>() + 0.1 * noise
        };
        entries.extend(x);
        targets.push(y);
        ids.push(usize::from(is_minority));
    }
    Ok((DataMatrix::new(n, m, entries)?, targets, GroupAssignment::new(ids)?))
}

/// Skew-normal draws `ξ + ω (δ|U₀| + √(1−δ²) U₁)` with `δ = a/√(1+a²)`.
pub fn skew_normal(n: usize, location: f64, scale: f64, shape: f64, seed: u64) -> Result<Vec<f64>> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(RiskError::Domain {
            name: "scale",
            value: scale,
            domain: "(0, ∞)",
        });
    }
    let delta = shape / (1.0 + shape * shape).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| {
            let u0: f64 = StandardNormal.sample(&mut rng);
            let u1: f64 = StandardNormal.sample(&mut rng);
            location + scale * (delta * u0.abs() + (1.0 - delta * delta).sqrt() * u1)
        })
        .collect())
}

/// `n` draws of `|N(0, 1)|` and `n` draws of `|t₂|`.
pub fn abs_normal_and_student(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::<f64>::new(0.0, 1.0).expect("unit normal");
    let student = StudentT::<f64>::new(2.0).expect("two degrees of freedom");
    let a = (0..n).map(|_| normal.sample(&mut rng).abs()).collect();
    let b = (0..n).map(|_| student.sample(&mut rng).abs()).collect();
    (a, b)
}

/// Random seed derived from `seed`, for splitting a run into streams.
pub fn derived_seed(seed: u64, stream: u64) -> u64 {
    ChaCha8Rng::seed_from_u64(seed ^ stream.rotate_left(32)).gen()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    PcaStar,
    Quadratic,
    SubgroupRegression,
}

/// Where the training data comes from: a CSV path or a generator.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum DataSource {
    Path(PathBuf),
    Generator(GeneratorSpec),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    TwoCluster {
        n: usize,
        m: usize,
        #[serde(default = "default_minority")]
        minority: f64,
    },
    GroupedRegression {
        n: usize,
        m: usize,
        #[serde(default = "default_minority")]
        minority: f64,
    },
    Points {
        values: Vec<f64>,
    },
}

fn default_minority() -> f64 {
    0.1
}

/// Experiment description read by the `optimize` command.
///
/// CSV inputs: `quadratic` reads one column of targets, `pca_star` a numeric
/// matrix, `subgroup_regression` feature columns followed by the target and
/// an integer group label.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub objective: ObjectiveKind,
    pub risk: RiskSpec,
    pub steps: usize,
    pub lr: f64,
    pub seed: u64,
    pub data: DataSource,
    /// Number of components for `pca_star`.
    #[serde(default)]
    pub k: Option<usize>,
    /// Starting parameters; objective defaults otherwise.
    #[serde(default)]
    pub init: Option<Vec<f64>>,
}

/// Result of [`run_experiment`]. Test losses are present when the data came
/// from a generator, which is then re-run with a derived seed.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub state: ModelState,
    pub trace: Vec<f64>,
    pub train_losses: Vec<f64>,
    pub test_losses: Option<Vec<f64>>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Resolves relative data paths against `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        if let DataSource::Path(p) = &mut self.data {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
}

fn matrix_with_labels(rows: Vec<Vec<f64>>) -> Result<(DataMatrix, Vec<f64>, GroupAssignment)> {
    let width = rows[0].len();
    if width < 3 {
        return Err(RiskError::invalid(
            "subgroup regression CSV needs features, a target and a group column",
        ));
    }
    let mut feats = Vec::with_capacity(rows.len());
    let mut ys = Vec::with_capacity(rows.len());
    let mut ids = Vec::with_capacity(rows.len());
    for row in rows {
        let g = row[width - 1];
        if g < 0.0 || g.fract() != 0.0 {
            return Err(RiskError::invalid(format!("group label {g} is not a non-negative integer")));
        }
        ids.push(g as usize);
        ys.push(row[width - 2]);
        feats.push(row[..width - 2].to_vec());
    }
    Ok((DataMatrix::from_rows(feats)?, ys, GroupAssignment::new(ids)?))
}

fn descent(config: &ExperimentConfig) -> DescentConfig {
    DescentConfig {
        steps: config.steps,
        lr: config.lr,
        seed: config.seed,
    }
}

fn init_or(config: &ExperimentConfig, default: Vec<f64>) -> Vec<f64> {
    config.init.clone().unwrap_or(default)
}

fn wrong_generator(objective: ObjectiveKind) -> RiskError {
    RiskError::invalid(format!("generator does not fit objective {objective:?}"))
}

/// Loads or generates the data, trains and reports losses.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let train_seed = derived_seed(config.seed, 0);
    let test_seed = derived_seed(config.seed, 1);
    match config.objective {
        ObjectiveKind::Quadratic => {
            let targets = match &config.data {
                DataSource::Path(p) => io::read_sample(p)?.values().to_vec(),
                DataSource::Generator(GeneratorSpec::Points { values }) => values.clone(),
                DataSource::Generator(_) => return Err(wrong_generator(config.objective)),
            };
            if targets.is_empty() {
                return Err(RiskError::invalid("no targets"));
            }
            let obj = Quadratic { targets };
            let fit = minimize(&obj, init_or(config, vec![0.0]), vec![1], &config.risk, descent(config))?;
            let train_losses = obj.losses(&fit.state.params);
            Ok(ExperimentOutput {
                state: fit.state,
                trace: fit.trace,
                train_losses,
                test_losses: None,
            })
        }
        ObjectiveKind::PcaStar => {
            let (train, test) = match &config.data {
                DataSource::Path(p) => (DataMatrix::from_rows(io::read_matrix(p)?)?, None),
                DataSource::Generator(GeneratorSpec::TwoCluster { n, m, minority }) => (
                    two_cluster(*n, *m, *minority, train_seed)?.0,
                    Some(two_cluster(*n, *m, *minority, test_seed)?.0),
                ),
                DataSource::Generator(_) => return Err(wrong_generator(config.objective)),
            };
            let k = config
                .k
                .ok_or_else(|| RiskError::invalid("pca_star needs the number of components k"))?;
            let model = PcaStar::new(&train, k)?;
            let init = init_or(config, model.pca_init());
            let fit = minimize(&model, init, vec![k, train.cols()], &config.risk, descent(config))?;
            let train_losses = model.losses(&fit.state.params);
            let test_losses = test
                .map(|t| model.losses_on(&fit.state.params, &t))
                .transpose()?;
            Ok(ExperimentOutput {
                state: fit.state,
                trace: fit.trace,
                train_losses,
                test_losses,
            })
        }
        ObjectiveKind::SubgroupRegression => {
            let (train, test) = match &config.data {
                DataSource::Path(p) => (matrix_with_labels(io::read_matrix(p)?)?, None),
                DataSource::Generator(GeneratorSpec::GroupedRegression { n, m, minority }) => (
                    grouped_regression(*n, *m, *minority, train_seed)?,
                    Some(grouped_regression(*n, *m, *minority, test_seed)?),
                ),
                DataSource::Generator(_) => return Err(wrong_generator(config.objective)),
            };
            let obj = SubgroupRegression::new(train.0, train.1, train.2)?;
            let dim = obj.dim();
            let fit = minimize(&obj, init_or(config, vec![0.0; dim]), vec![dim], &config.risk, descent(config))?;
            let train_losses = obj.losses(&fit.state.params);
            let test_losses = match test {
                Some((x, y, g)) => Some(SubgroupRegression::new(x, y, g)?.losses(&fit.state.params)),
                None => None,
            };
            Ok(ExperimentOutput {
                state: fit.state,
                trace: fit.trace,
                train_losses,
                test_losses,
            })
        }
    }
}

impl ExperimentOutput {
    /// Test losses when available, training losses otherwise.
    pub fn reported_losses(&self) -> &[f64] {
        self.test_losses.as_deref().unwrap_or(&self.train_losses)
    }

    /// Writes `params.json`, `trace.csv`, `losses.csv`, `cvar_curve.csv` and,
    /// when the losses have positive mean, `lorenz.csv` into `dir`. The CVaR
    /// curve stops at `cutoff`.
    pub fn write_to(&self, dir: &Path, cutoff: f64) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        io::write_json(dir.join("params.json"), &self.state)?;
        io::write_series(dir.join("trace.csv"), ["step", "risk"], &self.trace)?;
        let losses = self.reported_losses();
        io::write_series(dir.join("losses.csv"), ["index", "loss"], losses)?;
        let sample = LossSample::uniform(losses.to_vec())?;
        let levels = breakpoint_levels(&[&sample], cutoff);
        cvar_curve(&sample, &levels)?.write_csv(std::fs::File::create(dir.join("cvar_curve.csv"))?)?;
        if sample.mean() > 0.0 {
            let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
            lorenz_curve(&sample, &grid)?.write_csv(std::fs::File::create(dir.join("lorenz.csv"))?)?;
        }
        Ok(())
    }
}
