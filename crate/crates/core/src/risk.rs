//! Risk functionals on empirical loss samples.
//!
//! Spectral risk measures (Lorentz norms) are integrals of the decreasing
//! rearrangement against `dφ` and are evaluated exactly block by block. The
//! Marcinkiewicz and translation-equivariant Marcinkiewicz (TM) norms are
//! suprema over `t ∈ (0, 1]`; those are resolved on a candidate grid made of
//! the rearrangement breakpoints, the kinks of `φ` and `refinement`
//! equispaced points per cell, followed by a golden-section polish around the
//! best point of every cell. Every candidate is a feasible `t`, so the result
//! approximates the supremum from below; on a cell of width `h` the error is
//! at most `h · L / refinement` with `L` the Lipschitz constant of the
//! objective on that cell.
//!
//! Functionals that are translation equivariant (mean, CVaR, RIM, Dutch,
//! MaxVar, spectral, TM) act on the signed sample when dispatched through
//! [`evaluate`]; norm-type functionals (Marcinkiewicz, non-PTE Kusuoka sets)
//! act on `|X|`.

use serde::{Deserialize, Serialize};

use crate::distortion::Distortion;
use crate::empirical::{LossSample, Rearrangement};
use crate::error::{check_range, Result, RiskError};
use crate::kusuoka::{kusuoka_risk, KusuokaSet};

/// Default number of equispaced candidates per cell for sup-type norms.
pub const DEFAULT_REFINEMENT: usize = 64;

const GOLDEN_ITERATIONS: usize = 48;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RiskSpecJson", into = "RiskSpecJson")]
pub enum RiskSpec {
    Mean,
    /// Essential supremum; the limit of `CVaR_α` as `α → 1`.
    WorstCase,
    Cvar {
        alpha: f64,
    },
    Rim {
        alpha: f64,
        beta: f64,
    },
    Dutch,
    MaxVar {
        n: f64,
    },
    Spectral(Distortion),
    Marcinkiewicz {
        phi: Distortion,
        refinement: usize,
    },
    Tm {
        phi: Distortion,
        refinement: usize,
    },
    Kusuoka(KusuokaSet),
}

impl RiskSpec {
    /// Whether the functional satisfies `R(X + c) = R(X) + c`.
    pub fn is_pte(&self) -> bool {
        match self {
            RiskSpec::Marcinkiewicz { .. } => false,
            RiskSpec::Kusuoka(set) => set.is_pte(),
            _ => true,
        }
    }

    /// The distortion of a spectral functional, `None` for the others.
    pub fn as_distortion(&self) -> Result<Option<Distortion>> {
        Ok(match self {
            RiskSpec::Mean => Some(Distortion::identity()),
            RiskSpec::Cvar { alpha } => Some(Distortion::cvar(*alpha)?),
            RiskSpec::Rim { alpha, beta } => Some(Distortion::rim(*alpha, *beta)?),
            RiskSpec::MaxVar { n } => Some(Distortion::power_complement(*n)?),
            RiskSpec::Spectral(phi) => Some(phi.clone()),
            _ => None,
        })
    }
}

/// Routes `spec` to the matching functional.
pub fn evaluate(spec: &RiskSpec, sample: &LossSample) -> Result<f64> {
    match spec {
        RiskSpec::Mean => Ok(sample.mean()),
        RiskSpec::WorstCase => Ok(worst_case(sample)),
        RiskSpec::Cvar { alpha } => cvar(sample, *alpha),
        RiskSpec::Rim { alpha, beta } => rim(sample, *alpha, *beta),
        RiskSpec::Dutch => Ok(dutch(sample)),
        RiskSpec::MaxVar { n } => Ok(spectral_risk(sample, &Distortion::power_complement(*n)?, true)),
        RiskSpec::Spectral(phi) => Ok(spectral_risk(sample, phi, true)),
        RiskSpec::Marcinkiewicz { phi, refinement } => {
            Ok(marcinkiewicz_norm(sample, phi, *refinement))
        }
        RiskSpec::Tm { phi, refinement } => {
            Ok(tm_from_rearrangement(&sample.rearrange(true), phi, *refinement))
        }
        RiskSpec::Kusuoka(set) => Ok(kusuoka_risk(sample, set)),
    }
}

pub fn worst_case(sample: &LossSample) -> f64 {
    sample.max()
}

/// `CVaR_α(X) = (1/(1−α)) ∫_α^1 F⁻¹(q) dq`, computed from the signed
/// rearrangement with fractional weighting of the atom straddling `α`.
pub fn cvar(sample: &LossSample, alpha: f64) -> Result<f64> {
    check_range("alpha", alpha, (0.0..1.0).contains(&alpha), "[0, 1)")?;
    let tail = 1.0 - alpha;
    Ok(sample.rearrange(true).integral_to(tail) / tail)
}

/// `min_c { c + E(X − c)⁺ / (1 − α) }`. The objective is piecewise linear
/// and convex in `c` with kinks at the atoms, so the minimum is attained on
/// the sample values.
pub fn cvar_regret(sample: &LossSample, alpha: f64) -> Result<f64> {
    check_range("alpha", alpha, (0.0..1.0).contains(&alpha), "[0, 1)")?;
    let objective = |c: f64| {
        let excess: f64 = sample
            .values()
            .iter()
            .zip(sample.weights())
            .map(|(x, w)| w * (x - c).max(0.0))
            .sum();
        c + excess / (1.0 - alpha)
    };
    Ok(sample
        .values()
        .iter()
        .map(|&c| objective(c))
        .fold(f64::INFINITY, f64::min))
}

/// Average of the `(1 − α) n` largest losses of a uniform sample. Defined
/// only when `(1 − α) n` is a whole number; a cross-check for [`cvar`].
pub fn cvar_top_k(sample: &LossSample, alpha: f64) -> Option<f64> {
    let n = sample.len();
    let k = (1.0 - alpha) * n as f64;
    let uniform = sample.weights().iter().all(|w| (w * n as f64 - 1.0).abs() < 1e-12);
    if !uniform || !(0.0..1.0).contains(&alpha) || (k - k.round()).abs() > 1e-9 || k < 0.5 {
        return None;
    }
    let k = k.round() as usize;
    let mut v = sample.values().to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    Some(v[..k].iter().sum::<f64>() / k as f64)
}

/// Lorentz norm / spectral risk `∫₀¹ X*(ω) dφ(ω)`. With `signed = false`
/// the rearrangement of `|X|` is used.
pub fn spectral_risk(sample: &LossSample, phi: &Distortion, signed: bool) -> f64 {
    spectral_from_rearrangement(&sample.rearrange(signed), phi)
}

pub(crate) fn spectral_from_rearrangement(r: &Rearrangement, phi: &Distortion) -> f64 {
    r.integrate_increments(|a, b| phi.increment(a, b))
}

/// Choquet integral `∫_{−∞}^0 [φ(S_X) − 1] dx + ∫_0^∞ φ(S_X) dx`, summed
/// over the lattice of sample values. Independent of the rearrangement
/// machinery.
pub fn choquet_integral(sample: &LossSample, phi: &Distortion) -> f64 {
    // Distinct support points ascending, with the survival P(X > v) at each.
    let mut atoms: Vec<(f64, f64)> = sample
        .values()
        .iter()
        .zip(sample.weights())
        .filter(|(_, w)| **w > 0.0)
        .map(|(&x, &w)| (x, w))
        .collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut points: Vec<f64> = atoms.iter().map(|a| a.0).collect();
    points.push(0.0);
    points.sort_by(f64::total_cmp);
    points.dedup();

    let total: f64 = atoms.iter().map(|a| a.1).sum();
    let mut below = 0.0; // P(X <= current point)
    let mut k = 0;
    let mut integral = 0.0;
    for pair in points.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        while k < atoms.len() && atoms[k].0 <= a {
            below += atoms[k].1;
            k += 1;
        }
        let survival = ((total - below) / total).clamp(0.0, 1.0);
        let weight = phi.value(survival);
        if a >= 0.0 {
            integral += weight * (b - a);
        } else {
            integral += (weight - 1.0) * (b - a);
        }
    }
    integral
}

/// `RIM_{α,β}(X) = β E[X] + (1 − β) CVaR_α(X)`.
pub fn rim(sample: &LossSample, alpha: f64, beta: f64) -> Result<f64> {
    check_range("beta", beta, (0.0..=1.0).contains(&beta), "[0, 1]")?;
    Ok(beta * sample.mean() + (1.0 - beta) * cvar(sample, alpha)?)
}

/// `inf_μ { μ + E v(X − μ) }` with the piecewise-linear regret
/// `v(t) = β t` for `t ≤ 0` and `v(t) = ((βα − 1)/(α − 1)) t` for `t > 0`.
/// The infimum is attained at an atom.
pub fn rim_variational(sample: &LossSample, alpha: f64, beta: f64) -> Result<f64> {
    check_range("alpha", alpha, (0.0..1.0).contains(&alpha), "[0, 1)")?;
    check_range("beta", beta, (0.0..=1.0).contains(&beta), "[0, 1]")?;
    let upper = (beta * alpha - 1.0) / (alpha - 1.0);
    let regret = |t: f64| if t <= 0.0 { beta * t } else { upper * t };
    let objective = |mu: f64| {
        mu + sample
            .values()
            .iter()
            .zip(sample.weights())
            .map(|(x, w)| w * regret(x - mu))
            .sum::<f64>()
    };
    Ok(sample
        .values()
        .iter()
        .map(|&mu| objective(mu))
        .fold(f64::INFINITY, f64::min))
}

/// Dutch risk measure `E[max(X, E[X])]`.
pub fn dutch(sample: &LossSample) -> f64 {
    let m = sample.mean();
    sample
        .values()
        .iter()
        .zip(sample.weights())
        .map(|(x, w)| w * x.max(m))
        .sum()
}

/// `sup_β RIM_{β,β}(X)` over `β ∈ {i/grid} ∪ {sample breakpoints}` inside
/// `(0, 1)`. Recovers [`dutch`] since the supremum sits at a breakpoint.
pub fn dutch_via_rim_family(sample: &LossSample, grid: usize) -> f64 {
    let r = sample.rearrange(true);
    let mut levels: Vec<f64> = (1..grid).map(|i| i as f64 / grid as f64).collect();
    levels.extend(r.breakpoints().iter().map(|t| 1.0 - t));
    levels
        .into_iter()
        .filter(|b| *b > 0.0 && *b < 1.0)
        .map(|b| rim(sample, b, b).unwrap_or(f64::NEG_INFINITY))
        .fold(sample.mean(), f64::max)
}

/// MaxVar `E[max(X₁, …, X_n)]` for i.i.d. copies of `|X|`: the Lorentz norm
/// with `φ(t) = 1 − (1 − t)^n`.
pub fn maxvar(sample: &LossSample, n: f64) -> Result<f64> {
    Ok(spectral_risk(sample, &Distortion::power_complement(n)?, false))
}

/// Marcinkiewicz norm `sup_{0<t≤1} φ(t) X**(t)` of `|X|`.
pub fn marcinkiewicz_norm(sample: &LossSample, phi: &Distortion, refinement: usize) -> f64 {
    marcinkiewicz_from_rearrangement(&sample.rearrange(false), phi, refinement)
}

pub(crate) fn marcinkiewicz_from_rearrangement(
    r: &Rearrangement,
    phi: &Distortion,
    refinement: usize,
) -> f64 {
    let g = |t: f64| phi.value(t) * r.integral_to(t) / t;
    sup_over_levels(r, phi, refinement, true, g)
}

/// TM norm (smallest translation-equivariant rearrangement-invariant norm
/// with fundamental function `φ`) of `|X|`:
/// `sup_{0<t<1} (φ(t)/t) ∫₀ᵗ X* + ((1 − φ(t))/(1 − t)) ∫ₜ¹ X*`.
pub fn tm_norm(sample: &LossSample, phi: &Distortion, refinement: usize) -> f64 {
    tm_from_rearrangement(&sample.rearrange(false), phi, refinement)
}

pub(crate) fn tm_from_rearrangement(r: &Rearrangement, phi: &Distortion, refinement: usize) -> f64 {
    let total = r.total();
    if r.len() == 1 {
        // Every t gives φ(t)c + (1 − φ(t))c.
        return r.values()[0];
    }
    let g = |t: f64| {
        let head = r.integral_to(t);
        let p = phi.value(t);
        p / t * head + (1.0 - p) / (1.0 - t) * (total - head)
    };
    sup_over_levels(r, phi, refinement, false, g)
}

/// Maximizes `g` over `(0, 1]` (or `(0, 1)` when `include_one` is false).
fn sup_over_levels(
    r: &Rearrangement,
    phi: &Distortion,
    refinement: usize,
    include_one: bool,
    g: impl Fn(f64) -> f64,
) -> f64 {
    let refinement = refinement.max(1);
    let mut anchors: Vec<f64> = vec![0.0, 1.0];
    anchors.extend_from_slice(r.breakpoints());
    anchors.extend(phi.kinks());
    anchors.sort_by(f64::total_cmp);
    anchors.dedup();

    let admissible = |t: f64| t > 0.0 && (include_one || t < 1.0);
    let mut best = f64::NEG_INFINITY;
    for cell in anchors.windows(2) {
        let (a, b) = (cell[0], cell[1]);
        let h = (b - a) / refinement as f64;
        let mut cell_best = (f64::NEG_INFINITY, a);
        for j in 0..=refinement {
            let t = if j == refinement { b } else { a + h * j as f64 };
            if admissible(t) {
                let v = g(t);
                if v > cell_best.0 {
                    cell_best = (v, t);
                }
            }
        }
        let (v, t) = cell_best;
        let lo = (t - h).max(a);
        let hi = (t + h).min(b);
        let polished = golden_max(&g, lo, hi, &admissible);
        best = best.max(v).max(polished);
    }
    best
}

/// Golden-section search for a maximum of `g` on `[lo, hi]`, returning the
/// best admissible value seen.
fn golden_max(
    g: &impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    admissible: &impl Fn(f64) -> bool,
) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let eval = |t: f64| if admissible(t) { g(t) } else { f64::NEG_INFINITY };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (eval(x1), eval(x2));
    let mut best = f1.max(f2);
    for _ in 0..GOLDEN_ITERATIONS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1);
        }
        best = best.max(f1).max(f2);
    }
    best
}

/// Feasible constant `K = 1/φ(1/φ'(0))` with
/// `‖X‖_Λφ ≤ K ‖X‖_Mφ`; `+∞` when `φ'(0) = ∞`, where the two norms are not
/// equivalent.
pub fn equivalence_constant(phi: &Distortion) -> f64 {
    let slope = phi.derivative_at_zero();
    if !slope.is_finite() {
        return f64::INFINITY;
    }
    1.0 / phi.value(1.0 / slope)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum RiskSpecJson {
    Mean,
    WorstCase,
    Cvar {
        alpha: f64,
    },
    Rim {
        alpha: f64,
        beta: f64,
    },
    Dutch,
    Maxvar {
        n: f64,
    },
    Spectral {
        phi: Distortion,
    },
    PowerComplement {
        n: f64,
    },
    ProportionalPower {
        p: f64,
    },
    Piecewise {
        knots: Vec<(f64, f64)>,
    },
    Marcinkiewicz {
        phi: Distortion,
        #[serde(default = "default_refinement")]
        refinement: usize,
    },
    Tm {
        phi: Distortion,
        #[serde(default = "default_refinement")]
        refinement: usize,
    },
    Kusuoka(KusuokaSet),
}

fn default_refinement() -> usize {
    DEFAULT_REFINEMENT
}

impl TryFrom<RiskSpecJson> for RiskSpec {
    type Error = RiskError;

    fn try_from(j: RiskSpecJson) -> Result<Self> {
        Ok(match j {
            RiskSpecJson::Mean => RiskSpec::Mean,
            RiskSpecJson::WorstCase => RiskSpec::WorstCase,
            RiskSpecJson::Cvar { alpha } => {
                Distortion::cvar(alpha)?;
                RiskSpec::Cvar { alpha }
            }
            RiskSpecJson::Rim { alpha, beta } => {
                Distortion::rim(alpha, beta)?;
                RiskSpec::Rim { alpha, beta }
            }
            RiskSpecJson::Dutch => RiskSpec::Dutch,
            RiskSpecJson::Maxvar { n } => {
                Distortion::power_complement(n)?;
                RiskSpec::MaxVar { n }
            }
            RiskSpecJson::Spectral { phi } => RiskSpec::Spectral(phi),
            RiskSpecJson::PowerComplement { n } => {
                RiskSpec::Spectral(Distortion::power_complement(n)?)
            }
            RiskSpecJson::ProportionalPower { p } => {
                RiskSpec::Spectral(Distortion::proportional_power(p)?)
            }
            RiskSpecJson::Piecewise { knots } => RiskSpec::Spectral(Distortion::piecewise(knots)?),
            RiskSpecJson::Marcinkiewicz { phi, refinement } => {
                RiskSpec::Marcinkiewicz { phi, refinement }
            }
            RiskSpecJson::Tm { phi, refinement } => RiskSpec::Tm { phi, refinement },
            RiskSpecJson::Kusuoka(set) => RiskSpec::Kusuoka(set),
        })
    }
}

impl From<RiskSpec> for RiskSpecJson {
    fn from(s: RiskSpec) -> Self {
        match s {
            RiskSpec::Mean => RiskSpecJson::Mean,
            RiskSpec::WorstCase => RiskSpecJson::WorstCase,
            RiskSpec::Cvar { alpha } => RiskSpecJson::Cvar { alpha },
            RiskSpec::Rim { alpha, beta } => RiskSpecJson::Rim { alpha, beta },
            RiskSpec::Dutch => RiskSpecJson::Dutch,
            RiskSpec::MaxVar { n } => RiskSpecJson::Maxvar { n },
            RiskSpec::Spectral(phi) => RiskSpecJson::Spectral { phi },
            RiskSpec::Marcinkiewicz { phi, refinement } => {
                RiskSpecJson::Marcinkiewicz { phi, refinement }
            }
            RiskSpec::Tm { phi, refinement } => RiskSpecJson::Tm { phi, refinement },
            RiskSpec::Kusuoka(set) => RiskSpecJson::Kusuoka(set),
        }
    }
}
