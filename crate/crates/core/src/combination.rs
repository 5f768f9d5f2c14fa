//! Interpolation between fundamental functions.
//!
//! Given a quasiconcave `ψ` on `[0, ∞)` with `ψ(1) = 1`, its perspective
//! `ψ̆(x, y) = y ψ(x/y)` combines two distortions pointwise:
//! `f(t) = ψ̆(φ₀(t), φ₁(t))`. The result is quasiconcave, equals `φ` when
//! both inputs are `φ`, and is symmetric in its inputs exactly when `ψ`
//! coincides with its Csiszár conjugate `t ψ(1/t)` on `(0, 1]`.
//!
//! Combined functions are returned as [`QuasiconcaveFn`] and are not
//! concavified; [`combine_to_distortion`] takes the least concave majorant
//! when a usable [`Distortion`] is needed. Whether the resulting spectral
//! risk measure coincides with the abstract interpolation space built from
//! the two Lorentz spaces is an open conjecture and is not addressed here.

use serde::Deserialize;

use crate::distortion::{least_concave_majorant, Distortion};
use crate::error::{Result, RiskError};
use crate::quasiconcave::{QuasiconcaveFn, QUASICONCAVITY_GRID, QUASICONCAVITY_TOLERANCE};

/// Resolution of the concave hull taken by [`combine_to_distortion`].
pub const HULL_RESOLUTION: usize = 1024;

const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// A normalised quasiconcave `ψ` whose perspective combines two functions.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "CombinerSpec")]
pub struct Combiner {
    psi: QuasiconcaveFn,
}

/// JSON form of a combiner.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum CombinerSpec {
    /// `t^{1/a}` on `[0, 1]`, extended symmetrically.
    Power { a: f64 },
    Min,
    Max,
    /// Piecewise-linear `ψ` on `[0, 1]`, extended symmetrically.
    CustomHalf { knots: Vec<(f64, f64)> },
}

impl TryFrom<CombinerSpec> for Combiner {
    type Error = RiskError;

    fn try_from(spec: CombinerSpec) -> Result<Self> {
        match spec {
            CombinerSpec::Power { a } => Combiner::power(a),
            CombinerSpec::Min => Ok(Combiner::min()),
            CombinerSpec::Max => Ok(Combiner::max()),
            CombinerSpec::CustomHalf { knots } => {
                let last = knots.last().map(|k| k.0);
                if last != Some(1.0) {
                    return Err(RiskError::invalid("custom_half knots must end at t = 1"));
                }
                symmetrize(QuasiconcaveFn::knots(knots)?)
            }
        }
    }
}

impl Combiner {
    /// Validates `ψ(1) = 1` and the quasiconcavity grid test.
    pub fn new(psi: QuasiconcaveFn) -> Result<Self> {
        let at_one = psi.eval(1.0);
        if (at_one - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(RiskError::invalid(format!("combiner needs ψ(1) = 1, got {at_one}")));
        }
        if !psi.is_quasiconcave(QUASICONCAVITY_GRID, QUASICONCAVITY_TOLERANCE) {
            return Err(RiskError::invalid("combiner ψ is not quasiconcave"));
        }
        Ok(Combiner { psi })
    }

    /// `ψ = min(t, 1)`, whose perspective is `min(x, y)`.
    pub fn min() -> Self {
        Combiner {
            psi: QuasiconcaveFn::Min,
        }
    }

    /// `ψ = max(t, 1)`, whose perspective is `max(x, y)`.
    pub fn max() -> Self {
        Combiner {
            psi: QuasiconcaveFn::Max,
        }
    }

    /// Symmetric extension of `t^{1/a}` for `a ≥ 1`.
    pub fn power(a: f64) -> Result<Self> {
        symmetrize(power_half(a)?)
    }

    /// `ψ(t) = t^{1/a}` on all of `[0, ∞)`, not symmetrised.
    pub fn plain_power(a: f64) -> Result<Self> {
        Combiner::new(power_half(a)?)
    }

    pub fn psi(&self) -> &QuasiconcaveFn {
        &self.psi
    }

    /// `y ψ(x/y)`, continuous at `y = 0`.
    pub fn perspective(&self, x: f64, y: f64) -> Result<f64> {
        self.psi.perspective(x, y)
    }
}

fn power_half(a: f64) -> Result<QuasiconcaveFn> {
    if !(a.is_finite() && a >= 1.0) {
        return Err(RiskError::Domain {
            name: "a",
            value: a,
            domain: "[1, ∞)",
        });
    }
    QuasiconcaveFn::power(1.0 / a)
}

/// `t ↦ ψ̆(φ₀(t), φ₁(t))` on `[0, 1]`.
pub fn combine(phi0: &Distortion, phi1: &Distortion, c: &Combiner) -> QuasiconcaveFn {
    QuasiconcaveFn::Perspective {
        psi: Box::new(c.psi.clone()),
        first: Box::new(QuasiconcaveFn::Distortion(phi0.clone())),
        second: Box::new(QuasiconcaveFn::Distortion(phi1.clone())),
    }
}

/// `ψ⋄(t) = t ψ(1/t)`.
pub fn csiszar_conjugate(c: &Combiner) -> QuasiconcaveFn {
    c.psi.clone().conjugate()
}

/// Extends `ψ_half` from `[0, 1]` by `t ψ_half(1/t)`, giving a combiner
/// with a symmetric perspective.
pub fn symmetrize(psi_half: QuasiconcaveFn) -> Result<Combiner> {
    Combiner::new(psi_half.symmetric_extension())
}

/// Least concave majorant of `f` on `[0, 1]`, sampled at
/// [`HULL_RESOLUTION`] cells.
pub fn combine_to_distortion(f: &QuasiconcaveFn) -> Result<Distortion> {
    let grid: Vec<f64> = (1..=HULL_RESOLUTION)
        .map(|i| i as f64 / HULL_RESOLUTION as f64)
        .collect();
    if !crate::quasiconcave::is_quasiconcave_on(|t| f.eval(t), &grid, QUASICONCAVITY_TOLERANCE) {
        return Err(RiskError::invalid("function is not quasiconcave on [0, 1]"));
    }
    least_concave_majorant(|t| f.eval(t), HULL_RESOLUTION)
}

/// The illustrative pair `t^{1/4}` and `min(3t, 1)`.
pub fn figure_pair() -> (Distortion, Distortion) {
    (
        Distortion::proportional_power(0.25).expect("valid exponent"),
        Distortion::cvar(2.0 / 3.0).expect("valid level"),
    )
}

/// Exponents `a = α^{1/4}` for `α = 2, 12, …, 392`.
pub fn figure_exponents() -> Vec<f64> {
    (0..40).map(|k| (2.0 + 10.0 * k as f64).powf(0.25)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn grid() -> Vec<f64> {
        (0..=1024).map(|i| i as f64 / 1024.0).collect()
    }

    #[test]
    fn perspective_examples() {
        let mn = Combiner::min();
        let mx = Combiner::max();
        for (x, y) in [(0.2, 0.7), (0.9, 0.1), (0.0, 0.4), (0.5, 0.0), (0.3, 0.3)] {
            assert!(close(mn.perspective(x, y).unwrap(), x.min(y), 1e-15));
            assert!(close(mx.perspective(x, y).unwrap(), x.max(y), 1e-15));
        }
        let p = Combiner::power(2.0).unwrap();
        for t in [0.0, 0.1, 0.5, 1.0, 3.0] {
            assert!(close(p.perspective(t, t).unwrap(), t, 1e-15));
        }
        assert!(p.perspective(-1.0, 0.5).is_err());
        assert!(p.perspective(0.5, -1.0).is_err());
    }

    #[test]
    fn perspective_is_homogeneous_and_monotone() {
        let p = Combiner::power(3.0).unwrap();
        for (x, y) in [(0.2, 0.7), (0.9, 0.1), (1.0, 2.0)] {
            let v = p.perspective(x, y).unwrap();
            assert!(close(p.perspective(2.5 * x, 2.5 * y).unwrap(), 2.5 * v, 1e-12));
            assert!(p.perspective(x + 0.1, y).unwrap() >= v);
            assert!(p.perspective(x, y + 0.1).unwrap() >= v);
        }
    }

    #[test]
    fn conjugates() {
        let sqrt = Combiner::new(QuasiconcaveFn::power(0.5).unwrap()).unwrap();
        let id = Combiner::new(QuasiconcaveFn::Identity).unwrap();
        let sc = csiszar_conjugate(&sqrt);
        let mc = csiszar_conjugate(&Combiner::min());
        let ic = csiszar_conjugate(&id);
        for t in [0.01, 0.3, 0.75, 1.0, 2.0, 9.0] {
            assert!(close(sc.eval(t), t.sqrt(), 1e-12));
            assert!(close(mc.eval(t), t.min(1.0), 1e-12));
            assert!(close(ic.eval(t), 1.0, 1e-12));
        }
    }

    #[test]
    fn symmetrize_examples() {
        let from_id = symmetrize(QuasiconcaveFn::Identity).unwrap();
        let from_sqrt = symmetrize(QuasiconcaveFn::power(0.5).unwrap()).unwrap();
        let from_one = symmetrize(QuasiconcaveFn::Indicator).unwrap();
        for t in [0.05, 0.5, 1.0, 1.5, 4.0, 100.0] {
            assert!(close(from_id.psi().eval(t), t.min(1.0), 1e-12));
            assert!(close(from_sqrt.psi().eval(t), t.sqrt(), 1e-12));
            assert!(close(from_one.psi().eval(t), t.max(1.0), 1e-12));
        }
        assert!(symmetrize(QuasiconcaveFn::power(0.5).unwrap().max(QuasiconcaveFn::Identity)).is_ok());
        let unnormalised = QuasiconcaveFn::knots(vec![(0.0, 0.0), (1.0, 0.5)]).unwrap();
        assert!(symmetrize(unnormalised).is_err());
    }

    #[test]
    fn rejects_non_quasiconcave_psi() {
        // Decreasing after t = 0.5.
        let bumpy = QuasiconcaveFn::knots(vec![(0.0, 0.0), (0.5, 1.5), (1.0, 1.0)]).unwrap();
        assert!(Combiner::new(bumpy).is_err());
        // t² fails the f(t)/t test.
        let convex = QuasiconcaveFn::knots(vec![(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)]).unwrap();
        assert!(symmetrize(convex).is_err());
        assert!(Combiner::power(0.5).is_err());
    }

    #[test]
    fn identical_inputs_are_fixed() {
        let phis = [
            Distortion::cvar(0.4).unwrap(),
            Distortion::power_complement(3.0).unwrap(),
            Distortion::rim(0.8, 0.3).unwrap(),
        ];
        let combiners = [Combiner::min(), Combiner::max(), Combiner::power(2.5).unwrap()];
        for phi in &phis {
            for c in &combiners {
                let f = combine(phi, phi, c);
                for t in grid() {
                    assert!(close(f.eval(t), phi.value(t), 1e-12));
                }
            }
        }
    }

    #[test]
    fn min_max_endpoints_and_sandwich() {
        let a = Distortion::cvar(0.5).unwrap();
        let b = Distortion::proportional_power(0.3).unwrap();
        let lo = combine(&a, &b, &Combiner::min());
        let hi = combine(&a, &b, &Combiner::max());
        let mid = combine(&a, &b, &Combiner::power(2.0).unwrap());
        for t in grid() {
            let (x, y) = (a.value(t), b.value(t));
            assert!(close(lo.eval(t), x.min(y), 1e-15));
            assert!(close(hi.eval(t), x.max(y), 1e-15));
            assert!(lo.eval(t) <= mid.eval(t) + 1e-12 && mid.eval(t) <= hi.eval(t) + 1e-12);
        }
    }

    #[test]
    fn symmetric_combiners_commute() {
        let a = Distortion::cvar(0.7).unwrap();
        let b = Distortion::power_complement(2.0).unwrap();
        for c in [Combiner::power(1.7).unwrap(), symmetrize(QuasiconcaveFn::Identity).unwrap()] {
            let ab = combine(&a, &b, &c);
            let ba = combine(&b, &a, &c);
            for t in grid() {
                assert!(close(ab.eval(t), ba.eval(t), 1e-12));
            }
        }
        // The unsymmetrised t ↦ t is not symmetric: ψ̆(x, y) = x.
        let id = Combiner::new(QuasiconcaveFn::Identity).unwrap();
        assert!(!close(combine(&a, &b, &id).eval(0.1), combine(&b, &a, &id).eval(0.1), 1e-3));
    }

    #[test]
    fn figure_family_meets_inputs_at_crossings() {
        let (red, blue) = figure_pair();
        let crossings = [0.0, 3f64.powf(-4.0 / 3.0), 1.0];
        for t in crossings {
            assert!(close(red.value(t), blue.value(t), 1e-12));
        }
        for a in figure_exponents() {
            let c = Combiner::plain_power(a).unwrap();
            let f = combine(&red, &blue, &c);
            assert!(f.is_quasiconcave(1024, 1e-10));
            for t in crossings {
                assert!(close(f.eval(t), red.value(t), 1e-9));
            }
        }
    }

    #[test]
    fn concavification() {
        let a = Distortion::cvar(0.5).unwrap();
        let b = Distortion::cvar(0.2).unwrap();
        let lo = combine(&a, &b, &Combiner::min());
        let d = combine_to_distortion(&lo).unwrap();
        for t in grid() {
            assert!(close(d.value(t), b.value(t), 1e-12));
        }

        // max(min(2t, 1), √t) crosses at t = 1/4; the hull is above both.
        let c = Distortion::cvar(0.5).unwrap();
        let s = Distortion::proportional_power(0.5).unwrap();
        let hi = combine(&c, &s, &Combiner::max());
        let hull = combine_to_distortion(&hi).unwrap();
        let pts: Vec<(f64, f64)> = grid().into_iter().map(|t| (t, hi.eval(t))).collect();
        for (t, v) in &pts {
            assert!(hull.value(*t) >= v - 1e-12);
        }
        // Oracle: the majorant at each grid point is the best chord through
        // a pair of grid points bracketing it.
        for i in (0..pts.len()).step_by(37) {
            let t = pts[i].0;
            let mut best = pts[i].1;
            for j in 0..=i {
                for k in i..pts.len() {
                    if k == j {
                        continue;
                    }
                    let (x0, y0) = pts[j];
                    let (x1, y1) = pts[k];
                    best = best.max(y0 + (y1 - y0) * (t - x0) / (x1 - x0));
                }
            }
            assert!(close(hull.value(t), best, 1e-12));
        }
    }

    #[test]
    fn json_specs() {
        let p: Combiner = serde_json::from_str(r#"{"type":"power","a":2.0}"#).unwrap();
        assert_eq!(p, Combiner::power(2.0).unwrap());
        let m: Combiner = serde_json::from_str(r#"{"type":"min"}"#).unwrap();
        assert_eq!(m, Combiner::min());
        let h: Combiner =
            serde_json::from_str(r#"{"type":"custom_half","knots":[[0,0],[0.5,0.8],[1,1]]}"#).unwrap();
        assert!(close(h.psi().eval(2.0), 2.0 * 0.8, 1e-12));
        assert!(serde_json::from_str::<Combiner>(r#"{"type":"power","a":0.5}"#).is_err());
        assert!(serde_json::from_str::<Combiner>(r#"{"type":"custom_half","knots":[[0,0],[0.5,1]]}"#).is_err());
    }
}
