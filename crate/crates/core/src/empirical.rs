//! Finite weighted loss samples and their rearrangements.
//!
//! A [`LossSample`] is a discrete law on the real line. Everything downstream
//! works on its decreasing rearrangement, a step function on `[0, 1]` whose
//! blocks are the distinct values of the sample in non-increasing order. The
//! rearrangement of `|X|` is the classical `X*`; the signed variant `X*⁻`
//! keeps the sign and is what translation-equivariant functionals use.
//!
//! Step integrals are computed block by block, so every quantity here is
//! exact up to floating-point rounding.

use crate::error::{check_range, Result, RiskError};

/// Tolerance on the total mass of user-supplied weights.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// Slack used when comparing probability levels against cumulative
/// breakpoints, so that e.g. `q = 0.5` hits the atom ending at `0.5` even when
/// the breakpoint was accumulated as `0.49999999999999994`.
const LEVEL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LossSample {
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl LossSample {
    /// Empirical law putting mass `1/n` on each value.
    pub fn uniform(values: impl Into<Vec<f64>>) -> Result<Self> {
        let values = values.into();
        let n = values.len();
        if n == 0 {
            return Err(RiskError::invalid("a loss sample needs at least one value"));
        }
        let weights = vec![1.0 / n as f64; n];
        Self::validated(values, weights)
    }

    /// Weighted law. Weights must be non-negative and sum to one within
    /// [`WEIGHT_TOLERANCE`].
    pub fn weighted(values: impl Into<Vec<f64>>, weights: impl Into<Vec<f64>>) -> Result<Self> {
        let values = values.into();
        let weights = weights.into();
        if values.len() != weights.len() {
            return Err(RiskError::invalid(format!(
                "{} values but {} weights",
                values.len(),
                weights.len()
            )));
        }
        if values.is_empty() {
            return Err(RiskError::invalid("a loss sample needs at least one value"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(RiskError::invalid(format!("weight {w} is negative or not finite")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(RiskError::invalid(format!("weights sum to {total}, expected 1")));
        }
        Self::validated(values, weights)
    }

    fn validated(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(RiskError::invalid(format!("loss value {v} is not finite")));
        }
        Ok(LossSample { values, weights })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().zip(&self.weights).map(|(x, w)| x * w).sum()
    }

    /// Largest value carrying positive probability (the essential supremum).
    pub fn max(&self) -> f64 {
        self.support().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest value carrying positive probability.
    pub fn min(&self) -> f64 {
        self.support().fold(f64::INFINITY, f64::min)
    }

    fn support(&self) -> impl Iterator<Item = f64> + '_ {
        self.values
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w > 0.0)
            .map(|(x, _)| *x)
    }

    /// Applies `f` to every value, keeping the weights (same underlying
    /// probability space).
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::validated(self.values.iter().map(|&x| f(x)).collect(), self.weights.clone())
    }

    pub fn abs(&self) -> Self {
        LossSample {
            values: self.values.iter().map(|x| x.abs()).collect(),
            weights: self.weights.clone(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        self.map(|x| factor * x)
    }

    pub fn shifted(&self, c: f64) -> Result<Self> {
        self.map(|x| x + c)
    }

    /// Pointwise combination of two random variables living on the same
    /// finite probability space (same length, identical weights).
    pub fn zip_with(&self, other: &LossSample, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.len() != other.len() || self.weights != other.weights {
            return Err(RiskError::invalid(
                "samples are not defined on the same probability space",
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| f(x, y))
            .collect();
        Self::validated(values, self.weights.clone())
    }

    /// Decreasing rearrangement: `X*` of `|X|` when `signed` is false, the
    /// generalized rearrangement `X*⁻` of the raw values otherwise.
    pub fn rearrange(&self, signed: bool) -> Rearrangement {
        let mut atoms: Vec<(f64, f64)> = self
            .values
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w > 0.0)
            .map(|(&x, &w)| (if signed { x } else { x.abs() }, w))
            .collect();
        atoms.sort_by(|a, b| b.0.total_cmp(&a.0));

        let mut values: Vec<f64> = Vec::with_capacity(atoms.len());
        let mut masses: Vec<f64> = Vec::with_capacity(atoms.len());
        for (x, w) in atoms {
            match values.last() {
                Some(&last) if last == x => *masses.last_mut().unwrap() += w,
                _ => {
                    values.push(x);
                    masses.push(w);
                }
            }
        }
        Rearrangement::from_blocks(values, &masses)
    }

    /// Lower quantile `F⁻¹(q) = sup{λ : F(λ) < q}` of the signed law.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        check_range("q", q, q > 0.0 && q <= 1.0, "(0, 1]")?;
        let r = self.rearrange(true);
        // Blocks are descending; F(x_i) = 1 - t_{i-1}. The lower quantile is
        // the smallest x_i with F(x_i) >= q, i.e. the last block starting at
        // or before 1 - q.
        let level = 1.0 - q + LEVEL_SLACK;
        let idx = r.starts().take_while(|&s| s <= level).count() - 1;
        Ok(r.values[idx])
    }

    /// Maximal function `X**(t) = (1/t) ∫₀ᵗ X*`, the running average of the
    /// largest absolute losses. Equals `CVaR_{1-t}(|X|)`.
    pub fn maximal_function(&self, t: f64) -> Result<f64> {
        check_range("t", t, t > 0.0 && t <= 1.0, "(0, 1]")?;
        let r = self.rearrange(false);
        Ok(r.integral_to(t) / t)
    }

    /// `P(X > λ)` under the sample's law.
    pub fn survival(&self, lambda: f64) -> f64 {
        let s: f64 = self
            .values
            .iter()
            .zip(&self.weights)
            .filter(|(x, _)| **x > lambda)
            .map(|(_, w)| w)
            .sum();
        s.min(1.0)
    }
}

/// One constant piece of a rearrangement: `value` on `(start, end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub value: f64,
    pub start: f64,
    pub end: f64,
}

impl Block {
    pub fn mass(&self) -> f64 {
        self.end - self.start
    }
}

/// Step function on `[0, 1]` with non-increasing values.
///
/// `values[i]` is taken on the cell `(t_i, t_{i+1}]` where `t_0 = 0` and
/// `t_{i+1} = cum_probs[i]`. Equal values are merged, so consecutive values
/// are strictly decreasing, and the final breakpoint is exactly `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rearrangement {
    values: Vec<f64>,
    cum_probs: Vec<f64>,
    /// `∫₀^{cum_probs[i]} X*`.
    prefix: Vec<f64>,
}

impl Rearrangement {
    fn from_blocks(values: Vec<f64>, masses: &[f64]) -> Self {
        let mut cum_probs = Vec::with_capacity(masses.len());
        let mut prefix = Vec::with_capacity(masses.len());
        let (mut t, mut acc) = (0.0, 0.0);
        for (x, m) in values.iter().zip(masses) {
            t += m;
            acc += x * m;
            cum_probs.push(t);
            prefix.push(acc);
        }
        // Pin the right end; the last block absorbs the rounding.
        if let (Some(last_t), Some(last_acc)) = (cum_probs.last_mut(), prefix.last_mut()) {
            *last_acc += values[values.len() - 1] * (1.0 - *last_t);
            *last_t = 1.0;
        }
        Rearrangement {
            values,
            cum_probs,
            prefix,
        }
    }

    /// Block values, strictly decreasing.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Right ends `t_1 < … < t_m = 1` of the blocks.
    pub fn cum_probs(&self) -> &[f64] {
        &self.cum_probs
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn starts(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(0.0).chain(self.cum_probs[..self.cum_probs.len() - 1].iter().copied())
    }

    pub fn blocks(&self) -> impl Iterator<Item = Block> + '_ {
        self.values
            .iter()
            .zip(self.starts().zip(&self.cum_probs))
            .map(|(&value, (start, &end))| Block { value, start, end })
    }

    /// Interior breakpoints, all in `(0, 1)`.
    pub fn breakpoints(&self) -> &[f64] {
        &self.cum_probs[..self.cum_probs.len() - 1]
    }

    /// `X*(ω)`, right-continuous. At `ω = 1` the final block's value is
    /// returned.
    pub fn eval(&self, omega: f64) -> f64 {
        let idx = self.cum_probs.partition_point(|&t| t <= omega);
        self.values[idx.min(self.values.len() - 1)]
    }

    /// `∫₀ᵗ X*(ω) dω` for `t ∈ [0, 1]`, exact on the steps.
    pub fn integral_to(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return self.total();
        }
        let idx = self.cum_probs.partition_point(|&c| c <= t);
        let (base_t, base) = if idx == 0 {
            (0.0, 0.0)
        } else {
            (self.cum_probs[idx - 1], self.prefix[idx - 1])
        };
        base + self.values[idx] * (t - base_t)
    }

    /// `∫₀¹ X*`, the mean of the rearranged variable.
    pub fn total(&self) -> f64 {
        self.prefix[self.prefix.len() - 1]
    }

    /// `Σᵢ xᵢ · inc(t_{i-1}, tᵢ)`: the Stieltjes integral of the step function
    /// against a measure given by its interval increments.
    pub fn integrate_increments(&self, increment: impl Fn(f64, f64) -> f64) -> f64 {
        self.blocks()
            .map(|b| b.value * increment(b.start, b.end))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(v: &[f64]) -> LossSample {
        LossSample::uniform(v.to_vec()).unwrap()
    }

    fn blocks(r: &Rearrangement) -> Vec<(f64, f64)> {
        r.blocks().map(|b| (b.value, b.mass())).collect()
    }

    fn assert_blocks(r: &Rearrangement, expected: &[(f64, f64)]) {
        let got = blocks(r);
        assert_eq!(got.len(), expected.len(), "{got:?}");
        for ((v, m), (ev, em)) in got.iter().zip(expected) {
            assert!((v - ev).abs() < 1e-12 && (m - em).abs() < 1e-12, "{got:?}");
        }
    }

    /// Lower quantile straight from its definition: the supremum of the
    /// support points λ with F(λ) < q, scanned over the sorted support.
    fn quantile_oracle(s: &LossSample, q: f64) -> f64 {
        let mut support: Vec<f64> = s.values().to_vec();
        support.sort_by(f64::total_cmp);
        support.dedup();
        let cdf = |lambda: f64| -> f64 {
            s.values()
                .iter()
                .zip(s.weights())
                .filter(|(x, _)| **x <= lambda)
                .map(|(_, w)| w)
                .sum()
        };
        // F jumps only at support points, so sup{λ : F(λ) < q} is the first
        // support point where F reaches q.
        *support.iter().find(|&&x| cdf(x) >= q - 1e-12).unwrap()
    }

    #[test]
    fn rearrange_sorts_descending() {
        let s = uniform(&[1.0, 3.0, 2.0]);
        let third = 1.0 / 3.0;
        assert_blocks(&s.rearrange(false), &[(3.0, third), (2.0, third), (1.0, third)]);
    }

    #[test]
    fn rearrange_absolute_vs_signed() {
        let s = uniform(&[-1.0, 2.0]);
        assert_blocks(&s.rearrange(false), &[(2.0, 0.5), (1.0, 0.5)]);
        assert_blocks(&s.rearrange(true), &[(2.0, 0.5), (-1.0, 0.5)]);
    }

    #[test]
    fn rearrange_merges_ties() {
        let s = uniform(&[2.0, 2.0, 1.0]);
        assert_blocks(&s.rearrange(false), &[(2.0, 2.0 / 3.0), (1.0, 1.0 / 3.0)]);
        assert_eq!(*s.rearrange(false).cum_probs().last().unwrap(), 1.0);
    }

    #[test]
    fn quantile_examples() {
        let s = uniform(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.quantile(0.5).unwrap(), 2.0);
        assert_eq!(s.quantile(0.51).unwrap(), 3.0);
        assert_eq!(s.quantile(1.0).unwrap(), 4.0);
        assert_eq!(quantile_oracle(&s, 0.5), 2.0);
        assert_eq!(quantile_oracle(&s, 0.51), 3.0);
        let c = uniform(&[7.5]);
        for q in [0.01, 0.3, 1.0] {
            assert_eq!(c.quantile(q).unwrap(), 7.5);
        }
    }

    #[test]
    fn quantile_rejects_bad_levels() {
        let s = uniform(&[1.0, 2.0]);
        assert!(matches!(s.quantile(0.0), Err(RiskError::Domain { .. })));
        assert!(s.quantile(1.2).is_err());
        assert!(s.quantile(f64::NAN).is_err());
    }

    #[test]
    fn quantile_matches_definition_on_weighted_sample() {
        let s = LossSample::weighted(vec![5.0, -1.0, 2.0, 2.0, 0.5], vec![0.1, 0.2, 0.3, 0.15, 0.25])
            .unwrap();
        for i in 1..=200 {
            let q = i as f64 / 200.0;
            assert_eq!(s.quantile(q).unwrap(), quantile_oracle(&s, q), "q = {q}");
        }
    }

    #[test]
    fn maximal_function_examples() {
        let s = uniform(&[1.0, 2.0, 3.0]);
        assert!((s.maximal_function(1.0 / 3.0).unwrap() - 3.0).abs() < 1e-12);
        assert!((s.maximal_function(1.0).unwrap() - 2.0).abs() < 1e-12);
        assert!((s.maximal_function(2.0 / 3.0).unwrap() - 2.5).abs() < 1e-12);
        assert!(s.maximal_function(0.0).is_err());
    }

    #[test]
    fn survival_counts_mass_above() {
        let s = uniform(&[1.0, 2.0, 3.0]);
        assert!((s.survival(1.5) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.survival(0.0), 1.0);
        assert_eq!(s.survival(3.0), 0.0);
        assert_eq!(s.survival(10.0), 0.0);
        // right-continuous: at an atom the atom itself is excluded
        assert!((s.survival(2.0) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn weighted_constructor_validation() {
        assert!(LossSample::weighted(vec![1.0], vec![0.5]).is_err());
        assert!(LossSample::weighted(vec![1.0, 2.0], vec![1.5, -0.5]).is_err());
        assert!(LossSample::weighted(vec![1.0], vec![1.0, 0.0]).is_err());
        assert!(LossSample::uniform(Vec::<f64>::new()).is_err());
        assert!(LossSample::uniform(vec![f64::INFINITY]).is_err());
        // zero-weight atoms are dropped from the rearrangement
        let s = LossSample::weighted(vec![9.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(s.rearrange(false).values(), &[1.0]);
        assert_eq!(s.max(), 1.0);
    }

    #[test]
    fn eval_and_integral_agree_with_blocks() {
        let s = uniform(&[4.0, 1.0, 2.0, 2.0]);
        let r = s.rearrange(false);
        assert_eq!(r.eval(0.0), 4.0);
        assert_eq!(r.eval(0.25), 2.0);
        assert_eq!(r.eval(0.8), 1.0);
        assert_eq!(r.eval(1.0), 1.0);
        assert!((r.integral_to(0.5) - (4.0 * 0.25 + 2.0 * 0.25)).abs() < 1e-15);
        assert!((r.integral_to(0.6) - (1.5 + 2.0 * 0.1)).abs() < 1e-15);
        assert!((r.total() - 2.25).abs() < 1e-15);
    }

    #[test]
    fn signed_rearrangement_is_reversed_quantile() {
        let s = LossSample::weighted(vec![3.0, -2.0, 0.5, 3.0], vec![0.1, 0.4, 0.3, 0.2]).unwrap();
        let r = s.rearrange(true);
        for &t in std::iter::once(&0.0).chain(r.breakpoints()) {
            let omega = t + 1e-9;
            assert_eq!(r.eval(omega), s.quantile(1.0 - omega).unwrap());
        }
    }
}
