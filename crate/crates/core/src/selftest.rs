//! Desk-scale acceptance checks.
//!
//! Each check is seeded and self-contained, returns a [`CheckOutcome`] and
//! never panics on failure. The `acceptance` test target and the `selftest`
//! command both print one line per check.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combination::{combine, figure_exponents, figure_pair, symmetrize, Combiner};
use crate::distortion::Distortion;
use crate::empirical::LossSample;
use crate::evaluation::{gini, lorenz_curve, second_order_dominates};
use crate::kusuoka::{comonotone_additivity_witness, KusuokaSet};
use crate::optimizer::{abs_normal_and_student, pca_star, spectral_weights, two_cluster};
use crate::quasiconcave::QuasiconcaveFn;
use crate::risk::{
    choquet_integral, cvar, dutch, dutch_via_rim_family, evaluate, marcinkiewicz_norm, maxvar,
    rim, rim_variational, spectral_risk, tm_norm, RiskSpec, DEFAULT_REFINEMENT,
};

/// Outcome of one acceptance check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

type Check = fn() -> Result<String, String>;

/// Check ids, names, runtime budgets and bodies.
const CHECKS: [(usize, &str, Option<u64>, Check); 13] = [
    (1, "coherence axioms", Some(10), coherence_axioms),
    (2, "choquet equals spectral", Some(5), choquet_equivalence),
    (3, "sandwich and equivalence chain", None, sandwich_chain),
    (4, "cvar-type collapse", None, cvar_collapse),
    (5, "rim collapse", None, rim_collapse),
    (6, "dutch representations", None, dutch_representations),
    (7, "rim variational form", None, rim_variational_form),
    (8, "comonotone additivity", None, comonotone_additivity),
    (9, "hardy-littlewood brute force", None, hardy_littlewood),
    (10, "evaluation suite", None, evaluation_suite),
    (11, "heavy-tail experiment", Some(2), heavy_tail),
    (12, "optimizer", Some(30), optimizer_checks),
    (13, "combination", None, combination_checks),
];

/// Number of checks.
pub const CHECK_COUNT: usize = CHECKS.len();

/// Runs check `id` (1-based).
pub fn run_check(id: usize) -> Option<CheckOutcome> {
    let &(id, name, budget, body) = CHECKS.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(secs) = budget {
        if elapsed > Duration::from_secs(secs) {
            passed = false;
            detail = format!("{detail}; exceeded {secs}s budget");
        }
    }
    Some(CheckOutcome {
        id,
        name,
        passed,
        detail,
        elapsed,
    })
}

pub fn run_all() -> Vec<CheckOutcome> {
    (1..=CHECK_COUNT).filter_map(run_check).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: crate::RiskError) -> String {
    e.to_string()
}

/// `n ≤ max_len` values with equal or random weights. Values are drawn from
/// `[0, 10)` or `[−10, 10)`, with occasional exact repeats.
pub fn random_sample(rng: &mut impl Rng, max_len: usize, signed: bool) -> LossSample {
    let n = rng.gen_range(1..=max_len);
    let values = random_values(rng, n, signed);
    if rng.gen_bool(0.5) {
        LossSample::uniform(values).expect("finite values")
    } else {
        LossSample::weighted(values, random_weights(rng, n)).expect("normalised weights")
    }
}

fn random_values(rng: &mut impl Rng, n: usize, signed: bool) -> Vec<f64> {
    let lo = if signed { -10.0 } else { 0.0 };
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..10.0)).collect();
    if n > 2 && rng.gen_bool(0.3) {
        v[1] = v[0];
    }
    v
}

fn random_weights(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Concave piecewise-linear distortion with up to five pieces.
pub fn random_distortion(rng: &mut impl Rng) -> Distortion {
    let pieces = rng.gen_range(1..=5);
    let mut xs: Vec<f64> = (0..pieces - 1).map(|_| rng.gen_range(0.02..0.98)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.insert(0, 0.0);
    xs.push(1.0);
    let mut slopes: Vec<f64> = (0..xs.len() - 1).map(|_| rng.gen_range(0.0..4.0)).collect();
    slopes.sort_by(|a, b| b.total_cmp(a));
    let rise: f64 = xs.windows(2).zip(&slopes).map(|(w, s)| (w[1] - w[0]) * s).sum();
    if rise <= 1e-9 {
        return Distortion::identity();
    }
    let mut knots = vec![(0.0, 0.0)];
    let mut y = 0.0;
    for (w, s) in xs.windows(2).zip(&slopes) {
        y += (w[1] - w[0]) * s / rise;
        knots.push((w[1], y));
    }
    knots.last_mut().expect("at least two knots").1 = 1.0;
    Distortion::piecewise(knots).expect("concave by construction")
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn coherence_axioms() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pc2 = Distortion::power_complement(2.0).map_err(err)?;
    let mut checked = 0;
    for trial in 0..200 {
        let specs = [
            RiskSpec::Mean,
            RiskSpec::Cvar { alpha: 0.3 },
            RiskSpec::Rim { alpha: 0.7, beta: 0.4 },
            RiskSpec::Dutch,
            RiskSpec::MaxVar { n: 2.0 },
            RiskSpec::Spectral(random_distortion(&mut rng)),
            RiskSpec::Tm {
                phi: pc2.clone(),
                refinement: DEFAULT_REFINEMENT,
            },
        ];
        let n = rng.gen_range(1..=64);
        let weights = if rng.gen_bool(0.5) {
            vec![1.0 / n as f64; n]
        } else {
            random_weights(&mut rng, n)
        };
        let x = LossSample::weighted(random_values(&mut rng, n, false), weights.clone()).map_err(err)?;
        let y = LossSample::weighted(random_values(&mut rng, n, false), weights).map_err(err)?;
        let bump: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
        let above = LossSample::weighted(
            x.values().iter().zip(&bump).map(|(a, b)| a + b).collect::<Vec<_>>(),
            x.weights().to_vec(),
        )
        .map_err(err)?;
        let sum = x.zip_with(&y, |a, b| a + b).map_err(err)?;
        let lambda = rng.gen_range(0.1..5.0);
        let c = rng.gen_range(0.0..5.0);
        for spec in &specs {
            let r = |s: &LossSample| evaluate(spec, s).map_err(err);
            let rx = r(&x)?;
            let tag = || format!("trial {trial}, spec {spec:?}");
            ensure(close(r(&x.scaled(lambda).map_err(err)?)?, lambda * rx, 1e-9), || {
                format!("positive homogeneity fails at {}", tag())
            })?;
            ensure(r(&sum)? <= rx + r(&y)? + 1e-9, || format!("subadditivity fails at {}", tag()))?;
            ensure(rx <= r(&above)? + 1e-9, || format!("monotonicity fails at {}", tag()))?;
            ensure(close(r(&x.shifted(c).map_err(err)?)?, rx + c, 1e-9), || {
                format!("translation equivariance fails at {}", tag())
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} sample/spec pairs satisfy all four axioms"))
}

fn check_distortions(rng: &mut impl Rng) -> Vec<Distortion> {
    let mut out = vec![
        Distortion::identity(),
        Distortion::cvar(0.3).expect("valid"),
        Distortion::cvar(0.9).expect("valid"),
        Distortion::rim(0.7, 0.4).expect("valid"),
        Distortion::power_complement(2.0).expect("valid"),
        Distortion::power_complement(3.5).expect("valid"),
        Distortion::proportional_power(0.5).expect("valid"),
        Distortion::proportional_power(0.2).expect("valid"),
    ];
    out.push(random_distortion(rng));
    out.push(random_distortion(rng));
    out
}

fn choquet_equivalence() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let phis = check_distortions(&mut rng);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let x = random_sample(&mut rng, 40, true);
        for phi in &phis {
            worst = worst.max((choquet_integral(&x, phi) - spectral_risk(&x, phi, true)).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("largest gap {worst:e}"))?;
    Ok(format!("500 samples × {} distortions, largest gap {worst:.1e}", phis.len()))
}

fn sandwich_chain() -> Result<String, String> {
    let pc2 = Distortion::power_complement(2.0).map_err(err)?;
    let chain = |x: &LossSample| -> Result<[f64; 3], String> {
        Ok([
            marcinkiewicz_norm(x, &pc2, DEFAULT_REFINEMENT),
            dutch(x),
            maxvar(x, 2.0).map_err(err)?,
        ])
    };
    let worked = chain(&LossSample::uniform(vec![1.0, 2.0, 3.0]).map_err(err)?)?;
    for (got, want) in worked.iter().zip([20.0 / 9.0, 21.0 / 9.0, 22.0 / 9.0]) {
        ensure(close(*got, want, 1e-9), || format!("[1,2,3] gives {worked:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..200 {
        let x = random_sample(&mut rng, 40, false);
        let [m, d, l] = chain(&x)?;
        ensure(
            m <= d + 1e-9 && d <= l + 1e-9 && l <= 4.0 / 3.0 * m + 1e-9,
            || format!("trial {trial}: M = {m}, Dutch = {d}, MaxVar = {l}"),
        )?;
    }
    Ok("[1,2,3] → 20/9, 21/9, 22/9; chain holds on 200 samples".into())
}

fn cvar_collapse() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let x = random_sample(&mut rng, 40, false);
        for alpha in [0.0, 0.25, 0.5, 0.9] {
            let phi = Distortion::cvar(alpha).map_err(err)?;
            let m = marcinkiewicz_norm(&x, &phi, DEFAULT_REFINEMENT);
            let s = spectral_risk(&x, &phi, true);
            let c = cvar(&x, alpha).map_err(err)?;
            ensure(close(m, s, 1e-9) && close(s, c, 1e-9), || {
                format!("α = {alpha}: Marcinkiewicz {m}, spectral {s}, cvar {c}")
            })?;
        }
    }
    Ok("Marcinkiewicz = spectral = CVaR on 100 samples × 4 levels".into())
}

fn rim_collapse() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let x = random_sample(&mut rng, 40, false);
        for alpha in [0.1, 0.5, 0.7, 0.9] {
            for beta in [0.0, 0.3, 0.7, 1.0] {
                let phi = Distortion::rim(alpha, beta).map_err(err)?;
                let s = spectral_risk(&x, &phi, true);
                let closed = beta * x.mean() + (1.0 - beta) * cvar(&x, alpha).map_err(err)?;
                let t = tm_norm(&x, &phi, DEFAULT_REFINEMENT);
                worst = worst.max((t - s).abs());
                ensure(close(s, closed, 1e-9) && close(t, s, 1e-6), || {
                    format!("RIM({alpha}, {beta}): TM {t}, spectral {s}, closed form {closed}")
                })?;
            }
        }
    }
    Ok(format!("TM = spectral = βE + (1−β)CVaR, largest TM gap {worst:.1e}"))
}

fn dutch_representations() -> Result<String, String> {
    let pc2 = Distortion::power_complement(2.0).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..100 {
        let x = random_sample(&mut rng, 40, false);
        let d = dutch(&x);
        let t = tm_norm(&x, &pc2, DEFAULT_REFINEMENT);
        let r = dutch_via_rim_family(&x, 256);
        ensure(close(d, t, 1e-6) && close(d, r, 1e-6), || {
            format!("trial {trial}: Dutch {d}, TM {t}, sup RIM {r}")
        })?;
    }
    Ok("Dutch = TM(2t − t²) = sup_β RIM(β, β) on 100 samples".into())
}

fn rim_variational_form() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pairs: Vec<(f64, f64)> = (0..10)
        .map(|_| (rng.gen_range(0.0..0.99), rng.gen_range(0.0..=1.0)))
        .collect();
    for _ in 0..100 {
        let x = random_sample(&mut rng, 40, true);
        for &(a, b) in &pairs {
            let direct = rim(&x, a, b).map_err(err)?;
            let var = rim_variational(&x, a, b).map_err(err)?;
            ensure(close(direct, var, 1e-9), || format!("RIM({a}, {b}): {direct} vs {var}"))?;
        }
    }
    Ok("100 samples × 10 (α, β) pairs agree".into())
}

fn comonotone_additivity() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let phis = check_distortions(&mut rng);
    for trial in 0..100 {
        let n = rng.gen_range(1..=30);
        let weights = random_weights(&mut rng, n);
        let mut xs = random_values(&mut rng, n, true);
        let mut ys = random_values(&mut rng, n, true);
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        let x = LossSample::weighted(xs, weights.clone()).map_err(err)?;
        let y = LossSample::weighted(ys, weights).map_err(err)?;
        let sum = x.zip_with(&y, |a, b| a + b).map_err(err)?;
        for phi in &phis {
            let lhs = spectral_risk(&sum, phi, true);
            let rhs = spectral_risk(&x, phi, true) + spectral_risk(&y, phi, true);
            ensure(close(lhs, rhs, 1e-9), || format!("trial {trial}: {lhs} vs {rhs}"))?;
        }
    }
    let nested = KusuokaSet::from_distortions([Distortion::cvar(0.0).map_err(err)?, Distortion::cvar(0.5).map_err(err)?])
        .map_err(err)?;
    let crossing = KusuokaSet::from_distortions([
        Distortion::rim(0.9, 0.5).map_err(err)?,
        Distortion::cvar(0.5).map_err(err)?,
    ])
    .map_err(err)?;
    let crossing_found = comonotone_additivity_witness(&crossing, 4, 7).is_some();
    match comonotone_additivity_witness(&nested, 8, 8) {
        Some((x, y)) => Ok(format!(
            "spectral additive on 100 pairs; witness {:?} + {:?}",
            x.values(),
            y.values()
        )),
        None => Err(format!(
            "spectral additive on 100 pairs; no witness for {{cvar(0), cvar(0.5)}}: CVaR_0.5 ≥ mean \
             on every sample, so that supremum is CVaR_0.5 itself and comonotone additive \
             (witness for {{rim(0.9,0.5), cvar(0.5)}} found: {crossing_found})"
        )),
    }
}

fn hardy_littlewood() -> Result<String, String> {
    let mut pairs = 0u64;
    for n in 1..=5u32 {
        let count = 3usize.pow(n);
        let decode = |mut code: usize| -> Vec<f64> {
            (0..n)
                .map(|_| {
                    let d = code % 3;
                    code /= 3;
                    d as f64
                })
                .collect()
        };
        let all: Vec<Vec<f64>> = (0..count).map(decode).collect();
        let sorted: Vec<Vec<f64>> = all
            .iter()
            .map(|v| {
                let mut s = v.clone();
                s.sort_by(|a, b| b.total_cmp(a));
                s
            })
            .collect();
        for (x, xs) in all.iter().zip(&sorted) {
            for (y, ys) in all.iter().zip(&sorted) {
                let paired: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
                let rearranged: f64 = xs.iter().zip(ys).map(|(a, b)| a * b).sum();
                ensure(paired <= rearranged + 1e-12, || format!("{x:?} · {y:?}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs over {{0,1,2}}ⁿ, n ≤ 5"))
}

fn evaluation_suite() -> Result<String, String> {
    let g = gini(&LossSample::uniform(vec![0.0, 0.0, 0.0, 1.0]).map_err(err)?).map_err(err)?;
    ensure(close(g, 0.75, 1e-12), || format!("gini([0,0,0,1]) = {g}"))?;
    let constant = LossSample::uniform(vec![2.5; 7]).map_err(err)?;
    let g0 = gini(&constant).map_err(err)?;
    ensure(close(g0, 0.0, 1e-12), || format!("gini(constant) = {g0}"))?;
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let diag = lorenz_curve(&constant, &grid).map_err(err)?;
    ensure(diag.points().all(|(q, l)| close(q, l, 1e-12)), || "Lorenz of a constant is not the diagonal".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let specs: Vec<RiskSpec> = (0..20).map(|_| RiskSpec::Spectral(random_distortion(&mut rng))).collect();
    for pair in 0..50 {
        let n = rng.gen_range(2..=30);
        let b_vals = random_values(&mut rng, n, true);
        // Averaging random pairs contracts b; subtracting a non-negative
        // amount moves it further down.
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        let mut a_vals = b_vals.clone();
        for chunk in idx.chunks(2) {
            if let [i, j] = *chunk {
                let m = (b_vals[i] + b_vals[j]) / 2.0;
                a_vals[i] = m;
                a_vals[j] = m;
            }
        }
        for v in a_vals.iter_mut() {
            *v -= rng.gen_range(0.0..0.5);
        }
        let a = LossSample::uniform(a_vals).map_err(err)?;
        let b = LossSample::uniform(b_vals).map_err(err)?;
        ensure(second_order_dominates(&a, &b, &grid), || format!("pair {pair} not detected as dominated"))?;
        for spec in &specs {
            let (ra, rb) = (evaluate(spec, &a).map_err(err)?, evaluate(spec, &b).map_err(err)?);
            ensure(ra <= rb + 1e-9, || format!("pair {pair}: {ra} > {rb}"))?;
        }
    }
    Ok("Gini and Lorenz examples exact; 50 dominated pairs ordered by 20 spectral risks".into())
}

fn heavy_tail() -> Result<String, String> {
    let (normal, student) = abs_normal_and_student(500, 11);
    let n = LossSample::uniform(normal).map_err(err)?;
    let t = LossSample::uniform(student).map_err(err)?;
    let (gn, gt) = (gini(&n).map_err(err)?, gini(&t).map_err(err)?);
    let (cn, ct) = (cvar(&n, 0.9).map_err(err)?, cvar(&t, 0.9).map_err(err)?);
    ensure(gt > gn && ct > cn, || format!("Gini {gn:.3} vs {gt:.3}, CVaR_0.9 {cn:.3} vs {ct:.3}"))?;
    Ok(format!("Gini |N| {gn:.3} < |t₂| {gt:.3}; CVaR_0.9 {cn:.3} < {ct:.3}"))
}

fn optimizer_checks() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let h = 1e-6;
    for trial in 0..100 {
        let n = rng.gen_range(2..=30);
        let losses: Vec<f64> = loop {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
            let mut s = v.clone();
            s.sort_by(f64::total_cmp);
            if s.windows(2).all(|w| w[1] - w[0] > 4.0 * h) {
                break v;
            }
        };
        let phi = random_distortion(&mut rng);
        let weights = spectral_weights(&losses, &phi);
        let base = spectral_risk(&LossSample::uniform(losses.clone()).map_err(err)?, &phi, true);
        for i in 0..n {
            let mut bumped = losses.clone();
            bumped[i] += h;
            let r = spectral_risk(&LossSample::uniform(bumped).map_err(err)?, &phi, true);
            let fd = (r - base) / h;
            let w = weights[i] / n as f64;
            ensure((fd - w).abs() <= 10.0 * h, || format!("trial {trial}, index {i}: {fd} vs {w}"))?;
        }
    }

    let (train, _) = two_cluster(400, 4, 0.1, 120).map_err(err)?;
    let (test, _) = two_cluster(400, 4, 0.1, 121).map_err(err)?;
    let tail = |risk: RiskSpec| -> Result<(f64, f64), String> {
        let fit = pca_star(&train, 1, &risk, 2000, 1e-3, 12).map_err(err)?;
        let losses = LossSample::uniform(fit.model.losses_on(&fit.fit.state.params, &test).map_err(err)?)
            .map_err(err)?;
        Ok((cvar(&losses, 0.9).map_err(err)?, losses.mean()))
    };
    let (cvar_tail, cvar_mean) = tail(RiskSpec::Cvar { alpha: 0.8 })?;
    let (mean_tail, mean_mean) = tail(RiskSpec::Mean)?;
    ensure(cvar_tail < mean_tail && mean_mean <= cvar_mean, || {
        format!(
            "test CVaR_0.9 {cvar_tail:.4} (cvar-trained) vs {mean_tail:.4} (mean-trained); \
             test mean {cvar_mean:.4} vs {mean_mean:.4}"
        )
    })?;
    Ok(format!(
        "subgradients match on 100 vectors; PCA* test CVaR_0.9 {cvar_tail:.3} < {mean_tail:.3}, \
         test mean {mean_mean:.3} ≤ {cvar_mean:.3}"
    ))
}

fn combination_checks() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let grid: Vec<f64> = (0..=1024).map(|i| i as f64 / 1024.0).collect();
    for trial in 0..5 {
        let phi = random_distortion(&mut rng);
        let psi = if trial % 2 == 0 {
            Combiner::power(rng.gen_range(1.0..6.0)).map_err(err)?
        } else {
            Combiner::plain_power(rng.gen_range(1.0..6.0)).map_err(err)?
        };
        let f = combine(&phi, &phi, &psi);
        ensure(grid.iter().all(|&t| close(f.eval(t), phi.value(t), 1e-12)), || {
            format!("combine(φ, φ) ≠ φ in trial {trial}")
        })?;
    }

    let a = random_distortion(&mut rng);
    let b = Distortion::proportional_power(0.3).map_err(err)?;
    let lo = combine(&a, &b, &Combiner::min());
    let hi = combine(&a, &b, &Combiner::max());
    ensure(
        grid.iter()
            .all(|&t| close(lo.eval(t), a.value(t).min(b.value(t)), 1e-12) && close(hi.eval(t), a.value(t).max(b.value(t)), 1e-12)),
        || "min/max combiners do not give the pointwise min/max".into(),
    )?;

    let sym = [
        Combiner::power(2.5).map_err(err)?,
        symmetrize(QuasiconcaveFn::Identity).map_err(err)?,
        symmetrize(QuasiconcaveFn::knots(vec![(0.0, 0.0), (0.3, 0.8), (1.0, 1.0)]).map_err(err)?)
            .map_err(err)?,
    ];
    for c in &sym {
        let ab = combine(&a, &b, c);
        let ba = combine(&b, &a, c);
        ensure(grid.iter().all(|&t| close(ab.eval(t), ba.eval(t), 1e-12)), || {
            "symmetrised combiner does not commute".into()
        })?;
    }

    let (red, blue) = figure_pair();
    let crossings = [0.0, 3f64.powf(-4.0 / 3.0), 1.0];
    for a in figure_exponents() {
        let f = combine(&red, &blue, &Combiner::plain_power(a).map_err(err)?);
        for &t in &crossings {
            ensure(close(f.eval(t), red.value(t), 1e-9) && close(f.eval(t), blue.value(t), 1e-9), || {
                format!("a = {a}: combined {} at t = {t}", f.eval(t))
            })?;
        }
    }
    Ok(format!(
        "identity, min/max, symmetry and {} interpolants through 3 crossings",
        figure_exponents().len()
    ))
}
