//! Tail-risk and inequality diagnostics for loss samples.
//!
//! CVaR curves summarise the whole upper tail at once. Lorenz curves and the
//! Gini coefficient describe how unevenly a non-negative quantity is spread.
//! Second-order dominance compares two samples through their CVaR curves.

use std::cmp::Ordering;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::empirical::LossSample;
use crate::error::{Result, RiskError};
use crate::risk::cvar;

/// Slack used when comparing CVaR values for dominance.
pub const DOMINANCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    CvarCurve,
    Lorenz,
    Fundamental,
}

impl CurveKind {
    fn headers(self) -> [&'static str; 2] {
        match self {
            CurveKind::CvarCurve => ["alpha", "cvar"],
            CurveKind::Lorenz => ["q", "lorenz"],
            CurveKind::Fundamental => ["t", "phi"],
        }
    }
}

/// Sampled curve with strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    kind: CurveKind,
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl Curve {
    pub fn new(kind: CurveKind, grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(RiskError::invalid(format!(
                "curve has {} abscissae but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less)) {
            return Err(RiskError::invalid("curve grid must be strictly increasing"));
        }
        Ok(Curve { kind, grid, values })
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.iter().copied().zip(self.values.iter().copied())
    }

    /// Two-column CSV with a header row.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(self.kind.headers())?;
        for (x, y) in self.points() {
            w.write_record([x.to_string(), y.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Sorted, de-duplicated copy of `grid`, rejecting non-finite points.
fn normalise_grid(grid: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = grid.iter().find(|v| !v.is_finite()) {
        return Err(RiskError::invalid(format!("non-finite grid point {bad}")));
    }
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    g.dedup();
    Ok(g)
}

/// Levels `α = 1 − c` for every cumulative probability `c` of the decreasing
/// rearrangement, together with `α = 0`, truncated at `cutoff`. These are
/// the kinks of the empirical CVaR curve.
pub fn breakpoint_levels(samples: &[&LossSample], cutoff: f64) -> Vec<f64> {
    let mut levels = vec![0.0];
    for s in samples {
        levels.extend(s.rearrange(true).breakpoints().iter().map(|c| 1.0 - c));
    }
    levels.retain(|a| *a >= 0.0 && *a < 1.0 && *a <= cutoff);
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    levels
}

/// `α ↦ CVaR_α` on `alpha_grid ⊂ [0, 1)`.
pub fn cvar_curve(sample: &LossSample, alpha_grid: &[f64]) -> Result<Curve> {
    let grid = normalise_grid(alpha_grid)?;
    let values = grid
        .iter()
        .map(|&a| cvar(sample, a))
        .collect::<Result<Vec<_>>>()?;
    Curve::new(CurveKind::CvarCurve, grid, values)
}

/// Ascending blocks `(value, mass)` of a non-negative sample with positive
/// mean, plus the mean.
fn ascending_blocks(sample: &LossSample) -> Result<(Vec<(f64, f64)>, f64)> {
    if sample.min() < 0.0 {
        return Err(RiskError::invalid("Lorenz curves need non-negative values"));
    }
    let mean = sample.mean();
    if mean.partial_cmp(&0.0) != Some(Ordering::Greater) {
        return Err(RiskError::Degenerate("sample mean is zero".into()));
    }
    let r = sample.rearrange(true);
    let mut blocks: Vec<(f64, f64)> = r.blocks().map(|b| (b.value, b.mass())).collect();
    blocks.reverse();
    Ok((blocks, mean))
}

/// `L(q) = (1/E X) ∫₀^q F⁻¹(p) dp`, integrated exactly over the ascending
/// step quantile.
pub fn lorenz_curve(sample: &LossSample, q_grid: &[f64]) -> Result<Curve> {
    let grid = normalise_grid(q_grid)?;
    if let Some(bad) = grid.iter().find(|q| !(0.0..=1.0).contains(*q)) {
        return Err(RiskError::Domain {
            name: "q",
            value: *bad,
            domain: "[0, 1]",
        });
    }
    let (blocks, mean) = ascending_blocks(sample)?;
    let values = grid
        .iter()
        .map(|&q| {
            let mut left = q;
            let mut acc = 0.0;
            for &(v, m) in &blocks {
                if left <= 0.0 {
                    break;
                }
                let take = left.min(m);
                acc += take * v;
                left -= take;
            }
            (acc / mean).min(1.0)
        })
        .collect();
    Curve::new(CurveKind::Lorenz, grid, values)
}

/// Gini coefficient `1 − 2 ∫₀¹ L(q) dq`, with the Lorenz area computed
/// exactly from its linear pieces.
pub fn gini(sample: &LossSample) -> Result<f64> {
    let (blocks, mean) = ascending_blocks(sample)?;
    let mut area = 0.0;
    let mut level = 0.0;
    for (v, m) in blocks {
        let next = level + m * v / mean;
        area += m * (level + next) / 2.0;
        level = next;
    }
    Ok((1.0 - 2.0 * area).max(0.0))
}

/// Closed form `2 Σ i x₍ᵢ₎ / (n Σ x) − (n + 1)/n` for equally likely values
/// sorted ascending.
pub fn gini_uniform(values: &[f64]) -> Result<f64> {
    let mut xs = values.to_vec();
    if xs.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(RiskError::invalid("Gini needs finite non-negative values"));
    }
    let total: f64 = xs.iter().sum();
    if total.partial_cmp(&0.0) != Some(Ordering::Greater) {
        return Err(RiskError::Degenerate("sample mean is zero".into()));
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let weighted: f64 = xs.iter().enumerate().map(|(i, x)| (i + 1) as f64 * x).sum();
    Ok(2.0 * weighted / (n * total) - (n + 1.0) / n)
}

/// True when `CVaR_α(a) ≤ CVaR_α(b)` at every level of `alpha_grid` and at
/// every CVaR kink of either sample. Between kinks both curves are ratios
/// of piecewise-linear integrals with a common denominator, so these checks
/// decide dominance for empirical laws.
pub fn second_order_dominates(a: &LossSample, b: &LossSample, alpha_grid: &[f64]) -> bool {
    let mut levels = breakpoint_levels(&[a, b], 1.0);
    levels.extend(alpha_grid.iter().copied().filter(|x| (0.0..1.0).contains(x)));
    levels.iter().all(|&alpha| match (cvar(a, alpha), cvar(b, alpha)) {
        (Ok(x), Ok(y)) => x <= y + DOMINANCE_TOLERANCE,
        _ => false,
    })
}
