//! Property tests for the risk functionals, curves and combiners.

use coherent_risk::combination::{combine, Combiner};
use coherent_risk::evaluation::{cvar_curve, gini, second_order_dominates};
use coherent_risk::optimizer::spectral_weights;
use coherent_risk::risk::{
    cvar, cvar_regret, dutch, dutch_via_rim_family, marcinkiewicz_norm, maxvar, spectral_risk,
    tm_norm, DEFAULT_REFINEMENT,
};
use coherent_risk::{Distortion, LossSample};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0..50.0f64, 1..25)
}

fn distortion() -> impl Strategy<Value = Distortion> {
    prop_oneof![
        (0.0..0.99f64).prop_map(|a| Distortion::cvar(a).unwrap()),
        (0.0..0.99f64, 0.0..1.0f64).prop_map(|(a, b)| Distortion::rim(a, b).unwrap()),
        (1.0..5.0f64).prop_map(|n| Distortion::power_complement(n).unwrap()),
        (0.1..1.0f64).prop_map(|p| Distortion::proportional_power(p).unwrap()),
    ]
}

proptest! {
    #[test]
    fn spectral_risk_is_coherent(
        xs in values(),
        noise in prop::collection::vec(-10.0..10.0f64, 25),
        c in -20.0..20.0f64,
        lam in 0.0..5.0f64,
        phi in distortion(),
    ) {
        let x = LossSample::uniform(xs.clone()).unwrap();
        let y = LossSample::uniform(xs.iter().zip(&noise).map(|(a, b)| a + b).collect::<Vec<_>>()).unwrap();
        let r = |s: &LossSample| spectral_risk(s, &phi, true);
        let scale = 1.0 + xs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!((r(&x.shifted(c).unwrap()) - r(&x) - c).abs() < TOL * scale);
        prop_assert!((r(&x.scaled(lam).unwrap()) - lam * r(&x)).abs() < TOL * scale * (1.0 + lam));
        let sum = x.zip_with(&y, |a, b| a + b).unwrap();
        prop_assert!(r(&sum) <= r(&x) + r(&y) + TOL * scale * 4.0);
        let above = x.zip_with(&y, |a, b| a + b.abs()).unwrap();
        prop_assert!(r(&x) <= r(&above) + TOL * scale * 4.0);
        prop_assert!(r(&x) >= x.mean() - TOL * scale);
    }

    #[test]
    fn cvar_routes_agree(xs in values(), alpha in 0.0..0.999f64) {
        let x = LossSample::uniform(xs).unwrap();
        let a = cvar(&x, alpha).unwrap();
        let b = cvar_regret(&x, alpha).unwrap();
        prop_assert!((a - b).abs() < 1e-8 * (1.0 + a.abs()));
    }

    #[test]
    fn norm_sandwich(xs in values(), n in 1.5..4.0f64) {
        let x = LossSample::uniform(xs).unwrap();
        let phi = Distortion::power_complement(n).unwrap();
        let m = marcinkiewicz_norm(&x, &phi, DEFAULT_REFINEMENT);
        let t = tm_norm(&x, &phi, DEFAULT_REFINEMENT);
        let l = maxvar(&x, n).unwrap();
        let scale = 1e-8 * (1.0 + l);
        prop_assert!(m <= t + scale);
        prop_assert!(t <= l + scale);
    }

    #[test]
    fn dutch_matches_rim_family(xs in values()) {
        let x = LossSample::uniform(xs).unwrap();
        let d = dutch(&x);
        let sup = dutch_via_rim_family(&x, 512);
        prop_assert!(sup <= d + 1e-9 * (1.0 + d.abs()));
        prop_assert!(d - sup < 1e-3 * (1.0 + d.abs()));
    }

    #[test]
    fn dominance_orders_every_spectral_risk(
        xs in prop::collection::vec(0.0..10.0f64, 1..15),
        bump in prop::collection::vec(0.0..3.0f64, 15),
        phi in distortion(),
    ) {
        let a = LossSample::uniform(xs.clone()).unwrap();
        let b = LossSample::uniform(xs.iter().zip(&bump).map(|(x, d)| x + d).collect::<Vec<_>>()).unwrap();
        prop_assert!(second_order_dominates(&a, &b, &[]));
        prop_assert!(spectral_risk(&a, &phi, true) <= spectral_risk(&b, &phi, true) + 1e-9);
        let alphas = [0.0, 0.3, 0.6, 0.9];
        let ca = cvar_curve(&a, &alphas).unwrap();
        let cb = cvar_curve(&b, &alphas).unwrap();
        for (u, v) in ca.values().iter().zip(cb.values()) {
            prop_assert!(*u <= v + 1e-9);
        }
    }

    #[test]
    fn gini_in_unit_interval(xs in prop::collection::vec(0.01..100.0f64, 1..30)) {
        let g = gini(&LossSample::uniform(xs).unwrap()).unwrap();
        prop_assert!((-1e-12..1.0).contains(&g));
    }

    #[test]
    fn spectral_weights_average_to_one(
        xs in prop::collection::vec(prop_oneof![Just(1.0), Just(2.0), -5.0..5.0f64], 1..30),
        phi in distortion(),
    ) {
        let w = spectral_weights(&xs, &phi);
        let n = xs.len() as f64;
        prop_assert!((w.iter().sum::<f64>() - n).abs() < 1e-9 * n);
        prop_assert!(w.iter().all(|v| *v >= -1e-15));
        for i in 0..xs.len() {
            for j in 0..xs.len() {
                if xs[i] == xs[j] {
                    prop_assert!((w[i] - w[j]).abs() < 1e-12);
                }
                if xs[i] > xs[j] {
                    prop_assert!(w[i] + 1e-12 >= w[j]);
                }
            }
        }
        let dot = w.iter().zip(&xs).map(|(a, b)| a * b).sum::<f64>() / n;
        let r = spectral_risk(&LossSample::uniform(xs.clone()).unwrap(), &phi, true);
        prop_assert!((dot - r).abs() < 1e-9 * (1.0 + r.abs()));
    }

    #[test]
    fn combination_is_quasiconcave_and_bounded(a in 1.0..6.0f64, t in 0.0..1.0f64, s in 0.0..1.0f64) {
        let (p0, p1) = (Distortion::proportional_power(0.25).unwrap(), Distortion::cvar(2.0 / 3.0).unwrap());
        let c = Combiner::power(a).unwrap();
        let f = combine(&p0, &p1, &c);
        let g = combine(&p1, &p0, &c);
        // A symmetric combiner makes the combination symmetric in its inputs.
        prop_assert!((f.eval(t) - g.eval(t)).abs() < 1e-12);
        let (lo, hi) = (p0.value(t).min(p1.value(t)), p0.value(t).max(p1.value(t)));
        prop_assert!(f.eval(t) >= lo - 1e-12 && f.eval(t) <= hi + 1e-12);
        let m = 0.5 * (t + s);
        prop_assert!(f.eval(m) >= f.eval(t).min(f.eval(s)) - 1e-12);
    }
}
