//! Quasiconcave functions on `[0, ∞)`.
//!
//! Here a function `f ≥ 0` is quasiconcave when it is non-decreasing and
//! `t ↦ f(t)/t` is non-increasing. The class is closed under pointwise
//! min/max, under `f ↦ t/f(t)` and under the Csiszár conjugate
//! `f ↦ t f(1/t)`; combining two members through the perspective of a third
//! stays in the class. These are the building blocks of the interpolation
//! calculus in [`crate::combination`].

use crate::distortion::{Distortion, PiecewiseLinear};
use crate::error::{Result, RiskError};

/// Grid size for quasiconcavity checks.
pub const QUASICONCAVITY_GRID: usize = 1024;
/// Slack for quasiconcavity checks.
pub const QUASICONCAVITY_TOLERANCE: f64 = 1e-10;

/// Large argument used when a limit at infinity has no closed form.
const FAR: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub enum QuasiconcaveFn {
    /// `t`
    Identity,
    /// `min(t, 1)`
    Min,
    /// `max(t, 1)`
    Max,
    /// `1` for `t > 0`, `0` at the origin.
    Indicator,
    /// `t^e` with `e ∈ [0, 1]` (`t^0` read as the indicator).
    Power(f64),
    /// A distortion on `[0, 1]`, extended by `1` beyond.
    Distortion(Distortion),
    /// Piecewise-linear knots starting at `t = 0`, extended constantly past
    /// the last knot.
    Knots(PiecewiseLinear),
    /// `t ↦ t / f(t)`, set to `0` at the origin.
    Dual(Box<QuasiconcaveFn>),
    /// Csiszár conjugate `t ↦ t f(1/t)`.
    Conjugate(Box<QuasiconcaveFn>),
    /// `f` on `[0, 1]` and `t f(1/t)` on `(1, ∞)`.
    SymmetricExtension(Box<QuasiconcaveFn>),
    /// `t ↦ ψ̆(f₀(t), f₁(t))`, the perspective of `psi` applied to two
    /// functions.
    Perspective {
        psi: Box<QuasiconcaveFn>,
        first: Box<QuasiconcaveFn>,
        second: Box<QuasiconcaveFn>,
    },
    PointwiseMin(Box<QuasiconcaveFn>, Box<QuasiconcaveFn>),
    PointwiseMax(Box<QuasiconcaveFn>, Box<QuasiconcaveFn>),
}

impl QuasiconcaveFn {
    pub fn power(exponent: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&exponent) {
            return Err(RiskError::Domain {
                name: "exponent",
                value: exponent,
                domain: "[0, 1]",
            });
        }
        Ok(QuasiconcaveFn::Power(exponent))
    }

    /// Piecewise-linear function through `knots`, which must start at
    /// `t = 0` with a non-negative value.
    pub fn knots(knots: impl Into<Vec<(f64, f64)>>) -> Result<Self> {
        let pl = PiecewiseLinear::new(knots.into())?;
        let (x0, y0) = pl.knots()[0];
        if x0 != 0.0 || y0 < 0.0 {
            return Err(RiskError::invalid("knots must start at t = 0 with a non-negative value"));
        }
        Ok(QuasiconcaveFn::Knots(pl))
    }

    pub fn dual(self) -> Self {
        QuasiconcaveFn::Dual(Box::new(self))
    }

    pub fn conjugate(self) -> Self {
        QuasiconcaveFn::Conjugate(Box::new(self))
    }

    pub fn symmetric_extension(self) -> Self {
        QuasiconcaveFn::SymmetricExtension(Box::new(self))
    }

    pub fn min(self, other: QuasiconcaveFn) -> Self {
        QuasiconcaveFn::PointwiseMin(Box::new(self), Box::new(other))
    }

    pub fn max(self, other: QuasiconcaveFn) -> Self {
        QuasiconcaveFn::PointwiseMax(Box::new(self), Box::new(other))
    }

    /// `f(t)` for `t ≥ 0`. Negative arguments are treated as `0`.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        match self {
            QuasiconcaveFn::Identity => t,
            QuasiconcaveFn::Min => t.min(1.0),
            QuasiconcaveFn::Max => t.max(1.0),
            QuasiconcaveFn::Indicator => indicator(t),
            QuasiconcaveFn::Power(e) => {
                if *e == 0.0 {
                    indicator(t)
                } else {
                    t.powf(*e)
                }
            }
            QuasiconcaveFn::Distortion(d) => d.value(t.min(1.0)),
            QuasiconcaveFn::Knots(pl) => pl.value(t),
            QuasiconcaveFn::Dual(f) => {
                if t == 0.0 {
                    0.0
                } else {
                    t / f.eval(t)
                }
            }
            QuasiconcaveFn::Conjugate(f) => {
                if t == 0.0 {
                    f.asymptotic_slope()
                } else {
                    t * f.eval(1.0 / t)
                }
            }
            QuasiconcaveFn::SymmetricExtension(f) => {
                if t <= 1.0 {
                    f.eval(t)
                } else {
                    t * f.eval(1.0 / t)
                }
            }
            QuasiconcaveFn::Perspective { psi, first, second } => {
                psi.perspective_unchecked(first.eval(t), second.eval(t))
            }
            QuasiconcaveFn::PointwiseMin(a, b) => a.eval(t).min(b.eval(t)),
            QuasiconcaveFn::PointwiseMax(a, b) => a.eval(t).max(b.eval(t)),
        }
    }

    /// `lim_{s→0+} f(s)`.
    pub fn limit_at_zero(&self) -> f64 {
        match self {
            QuasiconcaveFn::Identity | QuasiconcaveFn::Min | QuasiconcaveFn::Distortion(_) => 0.0,
            QuasiconcaveFn::Max | QuasiconcaveFn::Indicator => 1.0,
            QuasiconcaveFn::Power(e) => {
                if *e == 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            QuasiconcaveFn::Knots(pl) => pl.knots()[0].1,
            QuasiconcaveFn::Conjugate(f) => f.asymptotic_slope(),
            QuasiconcaveFn::SymmetricExtension(f) => f.limit_at_zero(),
            QuasiconcaveFn::PointwiseMin(a, b) => a.limit_at_zero().min(b.limit_at_zero()),
            QuasiconcaveFn::PointwiseMax(a, b) => a.limit_at_zero().max(b.limit_at_zero()),
            QuasiconcaveFn::Dual(_) | QuasiconcaveFn::Perspective { .. } => self.eval(1.0 / FAR),
        }
    }

    /// `lim_{s→∞} f(s)/s`, the asymptotic slope.
    pub fn asymptotic_slope(&self) -> f64 {
        match self {
            QuasiconcaveFn::Identity | QuasiconcaveFn::Max => 1.0,
            QuasiconcaveFn::Min
            | QuasiconcaveFn::Indicator
            | QuasiconcaveFn::Distortion(_)
            | QuasiconcaveFn::Knots(_) => 0.0,
            QuasiconcaveFn::Power(e) => {
                if *e == 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            QuasiconcaveFn::Conjugate(f) | QuasiconcaveFn::SymmetricExtension(f) => {
                f.limit_at_zero()
            }
            QuasiconcaveFn::PointwiseMin(a, b) => a.asymptotic_slope().min(b.asymptotic_slope()),
            QuasiconcaveFn::PointwiseMax(a, b) => a.asymptotic_slope().max(b.asymptotic_slope()),
            QuasiconcaveFn::Dual(_) | QuasiconcaveFn::Perspective { .. } => self.eval(FAR) / FAR,
        }
    }

    /// Perspective `ψ̆(x, y) = y ψ(x / y)` of this function, extended to
    /// `y = 0` by continuity: `x · lim_{s→∞} ψ(s)/s`.
    pub fn perspective(&self, x: f64, y: f64) -> Result<f64> {
        for (name, v) in [("x", x), ("y", y)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(RiskError::Domain {
                    name,
                    value: v,
                    domain: "[0, ∞)",
                });
            }
        }
        Ok(self.perspective_unchecked(x, y))
    }

    pub(crate) fn perspective_unchecked(&self, x: f64, y: f64) -> f64 {
        if y == 0.0 {
            if x == 0.0 {
                0.0
            } else {
                x * self.asymptotic_slope()
            }
        } else {
            y * self.eval(x / y)
        }
    }

    /// Grid test of quasiconcavity on `(0, 1]` and on the reciprocal points
    /// `[1, n]`.
    pub fn is_quasiconcave(&self, grid: usize, tol: f64) -> bool {
        is_quasiconcave_on(|t| self.eval(t), &default_grid(grid), tol)
    }
}

fn indicator(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// `{i/n : 1 ≤ i ≤ n} ∪ {n/i : 1 ≤ i < n}`, increasing.
pub fn default_grid(n: usize) -> Vec<f64> {
    let n = n.max(1);
    let mut grid: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
    grid.extend((1..n).rev().map(|i| n as f64 / i as f64));
    grid
}

/// Checks on an increasing grid of positive points that `f` is
/// non-decreasing and `f(t)/t` is non-increasing, each within `tol`.
pub fn is_quasiconcave_on(f: impl Fn(f64) -> f64, grid: &[f64], tol: f64) -> bool {
    let vals: Vec<(f64, f64)> = grid.iter().map(|&t| (t, f(t))).collect();
    if vals.iter().any(|(_, v)| !v.is_finite() || *v < 0.0) {
        return false;
    }
    vals.windows(2).all(|w| {
        let (t0, f0) = w[0];
        let (t1, f1) = w[1];
        f1 >= f0 - tol && f1 / t1 <= f0 / t0 + tol
    })
}
