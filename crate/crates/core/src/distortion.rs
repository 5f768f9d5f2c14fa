//! Concave distortion functions (fundamental functions).
//!
//! A distortion `φ: [0, 1] → [0, 1]` is concave and non-decreasing with
//! `φ(0) = 0` and `φ(1) = 1`; only distortions continuous at zero are
//! representable. Closed forms carry exact interval increments
//! `φ(b) − φ(a)` so that integrals of step functions against `dφ` never need
//! quadrature.
//!
//! JSON form (`type`-tagged):
//!
//! ```json
//! {"type":"cvar","alpha":0.7}
//! {"type":"rim","alpha":0.7,"beta":0.4}
//! {"type":"power_complement","n":2}
//! {"type":"proportional_power","p":0.5}
//! {"type":"piecewise","knots":[[0,0],[0.25,0.6],[1,1]]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Result, RiskError};
use crate::quasiconcave::QuasiconcaveFn;

/// Default slack on slope comparisons in concavity checks.
pub const CONCAVITY_TOLERANCE: f64 = 1e-10;

/// Tolerance on the `φ(0) = 0`, `φ(1) = 1` endpoint conditions.
const ENDPOINT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum DistortionKind {
    /// `min(t / (1 − α), 1)`.
    Cvar { alpha: f64 },
    /// `β t + (1 − β) min(1, t / (1 − α))`.
    Rim { alpha: f64, beta: f64 },
    /// `1 − (1 − t)^n`; for integer `n` the law of the maximum of `n` copies.
    PowerComplement { n: f64 },
    /// `t^p`.
    ProportionalPower { p: f64 },
    Piecewise(PiecewiseLinear),
}

/// A validated concave distortion. Construct through the named constructors
/// or by deserializing the JSON form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistortionSpec", into = "DistortionSpec")]
pub struct Distortion {
    kind: DistortionKind,
}

impl Distortion {
    pub fn identity() -> Self {
        Distortion {
            kind: DistortionKind::Cvar { alpha: 0.0 },
        }
    }

    pub fn cvar(alpha: f64) -> Result<Self> {
        check_range("alpha", alpha, (0.0..1.0).contains(&alpha), "[0, 1)")?;
        Ok(Distortion {
            kind: DistortionKind::Cvar { alpha },
        })
    }

    /// `β = 1` gives the identity (mean), `β = 0` gives `cvar(α)`.
    pub fn rim(alpha: f64, beta: f64) -> Result<Self> {
        check_range("alpha", alpha, (0.0..1.0).contains(&alpha), "[0, 1)")?;
        check_range("beta", beta, (0.0..=1.0).contains(&beta), "[0, 1]")?;
        Ok(Distortion {
            kind: DistortionKind::Rim { alpha, beta },
        })
    }

    pub fn power_complement(n: f64) -> Result<Self> {
        check_range("n", n, n >= 1.0, "[1, ∞)")?;
        Ok(Distortion {
            kind: DistortionKind::PowerComplement { n },
        })
    }

    pub fn proportional_power(p: f64) -> Result<Self> {
        check_range("p", p, p > 0.0 && p <= 1.0, "(0, 1]")?;
        Ok(Distortion {
            kind: DistortionKind::ProportionalPower { p },
        })
    }

    /// Piecewise-linear distortion through `knots`. The knots must start at
    /// `(0, 0)`, end at `(1, 1)`, have strictly increasing abscissae and
    /// non-increasing, non-negative slopes.
    pub fn piecewise(knots: impl Into<Vec<(f64, f64)>>) -> Result<Self> {
        let pl = PiecewiseLinear::new(knots.into())?;
        let (x0, y0) = pl.knots[0];
        let (x1, y1) = pl.knots[pl.knots.len() - 1];
        if x0 != 0.0 || y0.abs() > ENDPOINT_TOLERANCE {
            return Err(RiskError::invalid("piecewise distortion must start at (0, 0)"));
        }
        if x1 != 1.0 || (y1 - 1.0).abs() > ENDPOINT_TOLERANCE {
            return Err(RiskError::invalid("piecewise distortion must end at (1, 1)"));
        }
        if !pl.is_concave(CONCAVITY_TOLERANCE) {
            return Err(RiskError::invalid("piecewise distortion is not concave"));
        }
        if pl.slopes().any(|s| s < -CONCAVITY_TOLERANCE) {
            return Err(RiskError::invalid("piecewise distortion is decreasing"));
        }
        Ok(Distortion {
            kind: DistortionKind::Piecewise(pl),
        })
    }

    pub fn kind(&self) -> &DistortionKind {
        &self.kind
    }

    /// `φ(t)`, with `t` checked to lie in `[0, 1]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        check_range("t", t, (0.0..=1.0).contains(&t), "[0, 1]")?;
        Ok(self.value(t))
    }

    /// `φ(t)` for `t` already known to be in `[0, 1]`; arguments outside are
    /// clamped.
    pub fn value(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        match &self.kind {
            DistortionKind::Cvar { alpha } => (t / (1.0 - alpha)).min(1.0),
            DistortionKind::Rim { alpha, beta } => {
                beta * t + (1.0 - beta) * (t / (1.0 - alpha)).min(1.0)
            }
            DistortionKind::PowerComplement { n } => 1.0 - (1.0 - t).powf(*n),
            DistortionKind::ProportionalPower { p } => t.powf(*p),
            DistortionKind::Piecewise(pl) => pl.value(t),
        }
    }

    /// `φ(b) − φ(a)` for `0 ≤ a ≤ b ≤ 1`, evaluated in a form that avoids
    /// cancellation where the closed form allows it.
    pub fn increment(&self, a: f64, b: f64) -> f64 {
        match &self.kind {
            DistortionKind::Cvar { alpha } => cvar_increment(*alpha, a, b),
            DistortionKind::Rim { alpha, beta } => {
                beta * (b - a) + (1.0 - beta) * cvar_increment(*alpha, a, b)
            }
            DistortionKind::PowerComplement { n } => {
                let a = a.clamp(0.0, 1.0);
                let b = b.clamp(0.0, 1.0);
                (1.0 - a).powf(*n) - (1.0 - b).powf(*n)
            }
            _ => self.value(b) - self.value(a),
        }
    }

    /// `φ'(0) = lim_{t→0} φ(t)/t`, possibly `+∞`.
    pub fn derivative_at_zero(&self) -> f64 {
        match &self.kind {
            DistortionKind::Cvar { alpha } => 1.0 / (1.0 - alpha),
            DistortionKind::Rim { alpha, beta } => beta + (1.0 - beta) / (1.0 - alpha),
            DistortionKind::PowerComplement { n } => *n,
            DistortionKind::ProportionalPower { p } => {
                if *p < 1.0 {
                    f64::INFINITY
                } else {
                    1.0
                }
            }
            DistortionKind::Piecewise(pl) => pl.slopes().next().unwrap_or(1.0),
        }
    }

    /// The dual fundamental function `t ↦ t / φ(t)` (zero at the origin).
    pub fn dual(&self) -> QuasiconcaveFn {
        QuasiconcaveFn::Distortion(self.clone()).dual()
    }

    /// Points in `(0, 1)` where the slope of `φ` jumps. Empty for smooth
    /// closed forms.
    pub fn kinks(&self) -> Vec<f64> {
        match &self.kind {
            DistortionKind::Cvar { alpha } if *alpha > 0.0 => vec![1.0 - alpha],
            DistortionKind::Rim { alpha, beta } if *alpha > 0.0 && *beta < 1.0 => {
                vec![1.0 - alpha]
            }
            DistortionKind::Piecewise(pl) => pl.knots[1..pl.knots.len() - 1]
                .iter()
                .map(|k| k.0)
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Samples the distortion at `resolution + 1` equispaced points plus its
    /// kinks.
    pub fn sample_knots(&self, resolution: usize) -> Vec<(f64, f64)> {
        let resolution = resolution.max(1);
        let mut ts: Vec<f64> = (0..=resolution)
            .map(|i| i as f64 / resolution as f64)
            .chain(self.kinks())
            .collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        ts.into_iter().map(|t| (t, self.value(t))).collect()
    }

    /// Piecewise-linear form: exact for `cvar`, `rim` and piecewise kinds,
    /// a sampled interpolant with `resolution` cells otherwise.
    pub fn to_piecewise(&self, resolution: usize) -> Distortion {
        match &self.kind {
            DistortionKind::Piecewise(_) => self.clone(),
            DistortionKind::Cvar { .. } | DistortionKind::Rim { .. } => {
                let mut knots = vec![(0.0, 0.0)];
                knots.extend(self.kinks().into_iter().map(|t| (t, self.value(t))));
                knots.push((1.0, 1.0));
                Distortion {
                    kind: DistortionKind::Piecewise(PiecewiseLinear { knots }),
                }
            }
            _ => {
                let mut knots = self.sample_knots(resolution);
                let last = knots.len() - 1;
                knots[last].1 = 1.0;
                Distortion {
                    kind: DistortionKind::Piecewise(PiecewiseLinear { knots }),
                }
            }
        }
    }
}

fn cvar_increment(alpha: f64, a: f64, b: f64) -> f64 {
    let c = 1.0 - alpha;
    (b.min(c) - a.min(c)).max(0.0) / c
}

/// Continuous piecewise-linear function on `[knots[0].0, knots[last].0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(RiskError::invalid("need at least two knots"));
        }
        if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(RiskError::invalid("knots must be finite"));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(RiskError::invalid("knot abscissae must be strictly increasing"));
        }
        Ok(PiecewiseLinear { knots })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn slopes(&self) -> impl Iterator<Item = f64> + '_ {
        self.knots
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
    }

    pub fn is_concave(&self, tol: f64) -> bool {
        check_concave(&self.knots, tol)
    }

    /// Linear interpolation; constant extrapolation outside the knot range.
    pub fn value(&self, x: f64) -> f64 {
        let k = &self.knots;
        if x <= k[0].0 {
            return k[0].1;
        }
        if x >= k[k.len() - 1].0 {
            return k[k.len() - 1].1;
        }
        let j = k.partition_point(|p| p.0 <= x);
        let (x0, y0) = k[j - 1];
        let (x1, y1) = k[j];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// True iff successive slopes of the polyline through `points` are
/// non-increasing within `tol`.
pub fn check_concave(points: &[(f64, f64)], tol: f64) -> bool {
    let slopes: Vec<f64> = points
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .collect();
    slopes.windows(2).all(|s| s[1] <= s[0] + tol)
}

/// Smallest concave function lying above `f` on the grid `{i / resolution}`
/// (the upper hull of the sampled graph), returned as a piecewise-linear
/// distortion. `f` must satisfy `f(0) = 0`, `f(1) = 1` and be non-decreasing.
pub fn least_concave_majorant(f: impl Fn(f64) -> f64, resolution: usize) -> Result<Distortion> {
    let resolution = resolution.max(1);
    let points: Vec<(f64, f64)> = (0..=resolution)
        .map(|i| {
            let t = i as f64 / resolution as f64;
            (t, f(t))
        })
        .collect();
    if let Some((t, y)) = points.iter().find(|(_, y)| !y.is_finite()) {
        return Err(RiskError::invalid(format!("f({t}) = {y} is not finite")));
    }
    let (f0, f1) = (points[0].1, points[resolution].1);
    if f0.abs() > 1e-9 || (f1 - 1.0).abs() > 1e-9 {
        return Err(RiskError::invalid(format!(
            "least concave majorant needs f(0) = 0 and f(1) = 1, got {f0} and {f1}"
        )));
    }
    let mut hull = upper_hull(&points);
    hull[0].1 = 0.0;
    let last = hull.len() - 1;
    hull[last].1 = 1.0;
    Distortion::piecewise(hull)
}

/// Upper convex hull (monotone chain) of points sorted by abscissa, with
/// collinear interior points dropped.
fn upper_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // Drop b unless it lies strictly above the chord a → p.
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub(crate) enum DistortionSpec {
    Cvar { alpha: f64 },
    Rim { alpha: f64, beta: f64 },
    PowerComplement { n: f64 },
    ProportionalPower { p: f64 },
    Piecewise { knots: Vec<(f64, f64)> },
}

impl TryFrom<DistortionSpec> for Distortion {
    type Error = RiskError;

    fn try_from(spec: DistortionSpec) -> Result<Self> {
        match spec {
            DistortionSpec::Cvar { alpha } => Distortion::cvar(alpha),
            DistortionSpec::Rim { alpha, beta } => Distortion::rim(alpha, beta),
            DistortionSpec::PowerComplement { n } => Distortion::power_complement(n),
            DistortionSpec::ProportionalPower { p } => Distortion::proportional_power(p),
            DistortionSpec::Piecewise { knots } => Distortion::piecewise(knots),
        }
    }
}

impl From<Distortion> for DistortionSpec {
    fn from(d: Distortion) -> Self {
        match d.kind {
            DistortionKind::Cvar { alpha } => DistortionSpec::Cvar { alpha },
            DistortionKind::Rim { alpha, beta } => DistortionSpec::Rim { alpha, beta },
            DistortionKind::PowerComplement { n } => DistortionSpec::PowerComplement { n },
            DistortionKind::ProportionalPower { p } => DistortionSpec::ProportionalPower { p },
            DistortionKind::Piecewise(pl) => DistortionSpec::Piecewise { knots: pl.knots },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn zoo() -> Vec<Distortion> {
        vec![
            Distortion::identity(),
            Distortion::cvar(0.5).unwrap(),
            Distortion::cvar(0.9).unwrap(),
            Distortion::rim(0.7, 0.4).unwrap(),
            Distortion::rim(0.3, 1.0).unwrap(),
            Distortion::power_complement(2.0).unwrap(),
            Distortion::power_complement(3.5).unwrap(),
            Distortion::proportional_power(0.5).unwrap(),
            Distortion::piecewise(vec![(0.0, 0.0), (0.25, 0.6), (1.0, 1.0)]).unwrap(),
        ]
    }

    #[test]
    fn eval_examples() {
        assert!(close(Distortion::cvar(0.5).unwrap().eval(0.25).unwrap(), 0.5, 1e-15));
        assert!(close(Distortion::power_complement(2.0).unwrap().eval(0.5).unwrap(), 0.75, 1e-15));
        assert!(close(Distortion::rim(0.6, 1.0).unwrap().eval(0.3).unwrap(), 0.3, 1e-15));
        assert!(Distortion::identity().eval(1.5).is_err());
        assert!(Distortion::identity().eval(-0.1).is_err());
    }

    #[test]
    fn endpoints_and_lemma_bounds() {
        for d in zoo() {
            assert_eq!(d.eval(0.0).unwrap(), 0.0, "{d:?}");
            assert!(close(d.eval(1.0).unwrap(), 1.0, 1e-15), "{d:?}");
            for i in 0..=1000 {
                let t = i as f64 / 1000.0;
                let v = d.value(t);
                assert!(t - 1e-12 <= v && v <= 1.0 + 1e-12, "{d:?} at {t}: {v}");
            }
        }
    }

    #[test]
    fn increments_match_differences() {
        for d in zoo() {
            for (a, b) in [(0.0, 0.1), (0.2, 0.45), (0.3, 1.0), (0.5, 0.5)] {
                assert!(close(d.increment(a, b), d.value(b) - d.value(a), 1e-14), "{d:?}");
            }
        }
    }

    #[test]
    fn derivative_at_zero_examples() {
        assert_eq!(Distortion::power_complement(2.0).unwrap().derivative_at_zero(), 2.0);
        assert_eq!(Distortion::cvar(0.0).unwrap().derivative_at_zero(), 1.0);
        assert_eq!(
            Distortion::proportional_power(0.5).unwrap().derivative_at_zero(),
            f64::INFINITY
        );
        assert!(close(Distortion::rim(0.5, 0.2).unwrap().derivative_at_zero(), 0.2 + 0.8 / 0.5, 1e-15));
        let pl = Distortion::piecewise(vec![(0.0, 0.0), (0.25, 0.6), (1.0, 1.0)]).unwrap();
        assert!(close(pl.derivative_at_zero(), 2.4, 1e-15));
        for i in 0..100 {
            let alpha = i as f64 / 100.0;
            let d = Distortion::cvar(alpha).unwrap();
            assert!(close(d.derivative_at_zero() * (1.0 - alpha), 1.0, 1e-12));
        }
    }

    #[test]
    fn derivative_at_zero_matches_finite_difference() {
        for d in zoo() {
            let phi0 = d.derivative_at_zero();
            if phi0.is_finite() {
                let h = 1e-9;
                assert!(close(d.value(h) / h, phi0, 1e-5), "{d:?}");
            }
        }
    }

    #[test]
    fn dual_examples() {
        let id = Distortion::identity().dual();
        assert_eq!(id.eval(0.0), 0.0);
        assert!(close(id.eval(0.4), 1.0, 1e-15));
        assert!(close(Distortion::cvar(0.5).unwrap().dual().eval(0.25), 0.5, 1e-15));
        assert!(close(Distortion::power_complement(2.0).unwrap().dual().eval(0.5), 2.0 / 3.0, 1e-15));
    }

    #[test]
    fn double_dual_recovers_distortion() {
        for d in zoo() {
            let dd = d.dual().dual();
            for i in 1..=512 {
                let t = i as f64 / 512.0;
                assert!(close(dd.eval(t), d.value(t), 1e-12), "{d:?} at {t}");
            }
        }
    }

    #[test]
    fn concavity_checks() {
        let cvar = Distortion::cvar(0.4).unwrap().to_piecewise(0);
        if let DistortionKind::Piecewise(pl) = cvar.kind() {
            assert!(check_concave(pl.knots(), CONCAVITY_TOLERANCE));
        } else {
            panic!("cvar should convert exactly");
        }
        let square: Vec<(f64, f64)> = (0..=50).map(|i| i as f64 / 50.0).map(|t| (t, t * t)).collect();
        assert!(!check_concave(&square, CONCAVITY_TOLERANCE));
        let pc3 = Distortion::power_complement(3.0).unwrap().sample_knots(99);
        assert_eq!(pc3.len(), 100);
        assert!(check_concave(&pc3, CONCAVITY_TOLERANCE));
    }

    #[test]
    fn piecewise_validation() {
        assert!(Distortion::piecewise(vec![(0.0, 0.0), (0.5, 0.2), (1.0, 1.0)]).is_err());
        assert!(Distortion::piecewise(vec![(0.0, 0.1), (1.0, 1.0)]).is_err());
        assert!(Distortion::piecewise(vec![(0.0, 0.0), (0.9, 0.9)]).is_err());
        assert!(Distortion::piecewise(vec![(0.0, 0.0), (0.5, 0.5), (0.5, 0.7), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn lcm_is_idempotent_on_concave_inputs() {
        let d = Distortion::cvar(0.5).unwrap();
        let lcm = least_concave_majorant(|t| d.value(t), 64).unwrap();
        for i in 0..=64 {
            let t = i as f64 / 64.0;
            assert!(close(lcm.value(t), d.value(t), 1e-15));
        }
        let pc = Distortion::power_complement(2.0).unwrap();
        let lcm = least_concave_majorant(|t| pc.value(t), 128).unwrap();
        for i in 0..=128 {
            let t = i as f64 / 128.0;
            assert!(close(lcm.value(t), pc.value(t), 1e-15));
        }
    }

    #[test]
    fn lcm_of_convex_is_chord() {
        let lcm = least_concave_majorant(|t| t * t, 100).unwrap();
        match lcm.kind() {
            DistortionKind::Piecewise(pl) => assert_eq!(pl.knots(), &[(0.0, 0.0), (1.0, 1.0)]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(least_concave_majorant(|t| 0.5 * t, 10).is_err());
    }

    #[test]
    fn lcm_dominates_and_is_concave() {
        let f = |t: f64| (2.0 * t).min(1.0).max(t.sqrt()).max(if t > 0.1 { 0.8 } else { 0.0 });
        let lcm = least_concave_majorant(f, 1024).unwrap();
        for i in 0..=1024 {
            let t = i as f64 / 1024.0;
            assert!(lcm.value(t) >= f(t) - 1e-15);
        }
    }

    #[test]
    fn json_round_trip() {
        let json = r#"{"type":"piecewise","knots":[[0,0],[0.25,0.6],[1,1]]}"#;
        let d: Distortion = serde_json::from_str(json).unwrap();
        assert!(close(d.value(0.125), 0.3, 1e-15));
        let d: Distortion = serde_json::from_str(r#"{"type":"rim","alpha":0.7,"beta":0.4}"#).unwrap();
        assert_eq!(d, Distortion::rim(0.7, 0.4).unwrap());
        assert_eq!(
            serde_json::to_string(&Distortion::cvar(0.7).unwrap()).unwrap(),
            r#"{"type":"cvar","alpha":0.7}"#
        );
        assert!(serde_json::from_str::<Distortion>(r#"{"type":"cvar","alpha":1.0}"#).is_err());
        assert!(serde_json::from_str::<Distortion>(r#"{"type":"power_complement","n":0.5}"#).is_err());
    }
}
