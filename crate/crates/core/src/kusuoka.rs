//! Suprema of spectral risk measures over families of concave distortions.
//!
//! Every rearrangement-invariant coherent risk measure is the supremum of
//! Lorentz norms over some family of concave profiles `Z` with `Z(0) = 0`.
//! The family is translation equivariant exactly when every member reaches
//! `Z(1) = 1`. Members with `Z(1) < 1` are represented as a distortion
//! scaled by `Z(1)`.
//!
//! The map from a spectrum `w` to a mixing measure on `[0, 1]` is not
//! modelled; distortions are the canonical representation throughout.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distortion::Distortion;
use crate::empirical::{LossSample, Rearrangement};
use crate::error::{Result, RiskError};
use crate::risk::spectral_from_rearrangement;

/// Default family resolution: members at `i/256`.
pub const DEFAULT_FAMILY_GRID: usize = 256;

/// Number of random comonotone pairs tried by the witness search.
pub const WITNESS_BUDGET: usize = 10_000;

const MAX_WITNESS_ATOMS: usize = 8;
const PTE_TOLERANCE: f64 = 1e-12;

/// A concave profile `x ↦ scale · φ(x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum KusuokaMember {
    Spectral(Distortion),
    Scaled { scale: f64, phi: Distortion },
}

impl KusuokaMember {
    pub fn scale(&self) -> f64 {
        match self {
            KusuokaMember::Spectral(_) => 1.0,
            KusuokaMember::Scaled { scale, .. } => *scale,
        }
    }

    pub fn distortion(&self) -> &Distortion {
        match self {
            KusuokaMember::Spectral(phi) | KusuokaMember::Scaled { phi, .. } => phi,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.scale() * self.distortion().value(x)
    }

    fn risk(&self, r: &Rearrangement) -> f64 {
        self.scale() * spectral_from_rearrangement(r, self.distortion())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KusuokaSetJson", into = "KusuokaSetJson")]
pub struct KusuokaSet {
    members: Vec<KusuokaMember>,
    pte: bool,
}

impl KusuokaSet {
    pub fn new(members: Vec<KusuokaMember>) -> Result<Self> {
        if members.is_empty() {
            return Err(RiskError::invalid("a Kusuoka set needs at least one member"));
        }
        for m in &members {
            let s = m.scale();
            if !(s.is_finite() && s > 0.0 && s <= 1.0 + PTE_TOLERANCE) {
                return Err(RiskError::invalid(format!("member scale {s} outside (0, 1]")));
            }
        }
        let pte = members
            .iter()
            .all(|m| (m.scale() - 1.0).abs() <= PTE_TOLERANCE);
        Ok(KusuokaSet { members, pte })
    }

    pub fn from_distortions(members: impl IntoIterator<Item = Distortion>) -> Result<Self> {
        Self::new(members.into_iter().map(KusuokaMember::Spectral).collect())
    }

    pub fn members(&self) -> &[KusuokaMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// True when every member reaches one at `x = 1`.
    pub fn is_pte(&self) -> bool {
        self.pte
    }

    /// Pointwise supremum of the member profiles at `x`.
    pub fn envelope(&self, x: f64) -> f64 {
        self.members
            .iter()
            .map(|m| m.value(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `max_Z ∫ X* dZ` over the set. Translation-equivariant sets act on the
/// signed sample, the others on `|X|`.
pub fn kusuoka_risk(sample: &LossSample, set: &KusuokaSet) -> f64 {
    let r = sample.rearrange(set.is_pte());
    set.members
        .iter()
        .map(|m| m.risk(&r))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `{i/m : 1 ≤ i < m}` merged with `extra` points from `(0, 1)`.
pub fn family_grid(m: usize, extra: &[f64]) -> Vec<f64> {
    let mut grid: Vec<f64> = (1..m).map(|i| i as f64 / m as f64).collect();
    grid.extend(extra.iter().copied().filter(|t| *t > 0.0 && *t < 1.0));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Members `Z_t(x) = φ(t) min(x/t, 1)`, linear up to `t` then flat. Their
/// supremum is the Marcinkiewicz norm of `φ`.
pub fn marcinkiewicz_family(phi: &Distortion, grid: &[f64]) -> Result<KusuokaSet> {
    if grid.is_empty() {
        return Err(RiskError::invalid("empty grid"));
    }
    let members = grid
        .iter()
        .map(|&t| {
            if !(t > 0.0 && t <= 1.0) {
                return Err(RiskError::Domain {
                    name: "t",
                    value: t,
                    domain: "(0, 1]",
                });
            }
            Ok(KusuokaMember::Scaled {
                scale: phi.value(t),
                phi: Distortion::cvar(1.0 - t)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    KusuokaSet::new(members)
}

/// The TM member at `t`: `φ(t) x/t` up to `t`, then the chord to `(1, 1)`.
pub fn tm_member(phi: &Distortion, t: f64) -> Result<Distortion> {
    if !(t > 0.0 && t < 1.0) {
        return Err(RiskError::Domain {
            name: "t",
            value: t,
            domain: "(0, 1)",
        });
    }
    Distortion::piecewise(vec![(0.0, 0.0), (t, phi.value(t)), (1.0, 1.0)])
}

/// The same member written as `RIM_{1−t, β}` with `β = (1 − φ(t)) / (1 − t)`.
pub fn tm_member_as_rim(phi: &Distortion, t: f64) -> Result<Distortion> {
    tm_member(phi, t)?;
    let beta = ((1.0 - phi.value(t)) / (1.0 - t)).clamp(0.0, 1.0);
    Distortion::rim(1.0 - t, beta)
}

/// Translation-equivariant family whose supremum is the TM norm of `φ`.
pub fn tm_family(phi: &Distortion, grid: &[f64]) -> Result<KusuokaSet> {
    if grid.is_empty() {
        return Err(RiskError::invalid("empty grid"));
    }
    KusuokaSet::from_distortions(
        grid.iter()
            .map(|&t| tm_member(phi, t))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Searches seeded random comonotone pairs `(X, Y)` on `n` equally likely
/// atoms (integer values in `0..=9`) for a strict violation of additivity,
/// `R(X + Y) < R(X) + R(Y) − 1e-9`. Singleton sets are comonotone additive
/// and return `None` immediately; `n` is clamped to `2..=8`.
pub fn comonotone_additivity_witness(
    set: &KusuokaSet,
    n: usize,
    seed: u64,
) -> Option<(LossSample, LossSample)> {
    if set.len() < 2 {
        return None;
    }
    let n = n.clamp(2, MAX_WITNESS_ATOMS);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..WITNESS_BUDGET {
        let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=9) as f64).collect();
        let mut ys: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=9) as f64).collect();
        // Sorting both coordinates the same way makes the pair comonotone.
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        let x = LossSample::uniform(xs).ok()?;
        let y = LossSample::uniform(ys).ok()?;
        let sum = x.zip_with(&y, |a, b| a + b).ok()?;
        let gap = kusuoka_risk(&x, set) + kusuoka_risk(&y, set) - kusuoka_risk(&sum, set);
        if gap > 1e-9 {
            return Some((x, y));
        }
    }
    None
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct KusuokaSetJson {
    members: Vec<MemberJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum MemberJson {
    Scaled(ScaledJson),
    Spectral(Distortion),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScaledJson {
    #[serde(rename = "type")]
    kind: String,
    scale: f64,
    phi: Distortion,
}

impl TryFrom<KusuokaSetJson> for KusuokaSet {
    type Error = RiskError;

    fn try_from(j: KusuokaSetJson) -> Result<Self> {
        let members = j
            .members
            .into_iter()
            .map(|m| match m {
                MemberJson::Spectral(phi) => Ok(KusuokaMember::Spectral(phi)),
                MemberJson::Scaled(s) if s.kind == "scaled" => Ok(KusuokaMember::Scaled {
                    scale: s.scale,
                    phi: s.phi,
                }),
                MemberJson::Scaled(s) => Err(RiskError::invalid(format!(
                    "unknown Kusuoka member type {:?}",
                    s.kind
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        KusuokaSet::new(members)
    }
}

impl From<KusuokaSet> for KusuokaSetJson {
    fn from(set: KusuokaSet) -> Self {
        KusuokaSetJson {
            members: set
                .members
                .into_iter()
                .map(|m| match m {
                    KusuokaMember::Spectral(phi) => MemberJson::Spectral(phi),
                    KusuokaMember::Scaled { scale, phi } => MemberJson::Scaled(ScaledJson {
                        kind: "scaled".into(),
                        scale,
                        phi,
                    }),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::risk::{cvar, marcinkiewicz_norm, spectral_risk, tm_norm, DEFAULT_REFINEMENT};

    fn s(v: &[f64]) -> LossSample {
        LossSample::uniform(v.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn singleton_and_pair_of_cvars() {
        let x = s(&[1.0, 2.0, 3.0, 4.0]);
        let single = KusuokaSet::from_distortions([Distortion::cvar(0.3).unwrap()]).unwrap();
        assert!(close(kusuoka_risk(&x, &single), cvar(&x, 0.3).unwrap(), 1e-12));
        let pair = KusuokaSet::from_distortions([
            Distortion::cvar(0.2).unwrap(),
            Distortion::cvar(0.6).unwrap(),
        ])
        .unwrap();
        let expected = cvar(&x, 0.2).unwrap().max(cvar(&x, 0.6).unwrap());
        assert!(close(kusuoka_risk(&x, &pair), expected, 1e-12));
        assert!(KusuokaSet::new(vec![]).is_err());
    }

    #[test]
    fn tm_family_matches_tm_norm() {
        let pc2 = Distortion::power_complement(2.0).unwrap();
        let x = s(&[1.0, 2.0, 3.0]);
        let grid = family_grid(DEFAULT_FAMILY_GRID, x.rearrange(false).breakpoints());
        let fam = tm_family(&pc2, &grid).unwrap();
        assert!(fam.is_pte());
        assert!(close(kusuoka_risk(&x, &fam), 21.0 / 9.0, 1e-12));
        assert!(close(kusuoka_risk(&x, &fam), tm_norm(&x, &pc2, DEFAULT_REFINEMENT), 1e-12));
    }

    #[test]
    fn marcinkiewicz_family_members() {
        let c = Distortion::cvar(0.4).unwrap();
        let fam = marcinkiewicz_family(&c, &[0.3, 0.6, 0.9]).unwrap();
        assert!(!fam.is_pte());
        // The member at t = 1 − α coincides with φ.
        let m = &fam.members()[1];
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!(close(m.value(x), c.value(x), 1e-12));
        }
        let id = marcinkiewicz_family(&Distortion::identity(), &[1.0]).unwrap();
        assert!(id.is_pte());
        assert!(close(id.members()[0].value(0.37), 0.37, 1e-15));
        let idf = marcinkiewicz_family(&Distortion::identity(), &[0.5]).unwrap();
        assert!(close(idf.envelope(0.25), 0.25, 1e-15));
        assert!(close(idf.envelope(0.75), 0.5, 1e-15));
        assert!(marcinkiewicz_family(&c, &[]).is_err());
        assert!(marcinkiewicz_family(&c, &[0.0]).is_err());
    }

    #[test]
    fn marcinkiewicz_family_matches_norm() {
        let pc2 = Distortion::power_complement(2.0).unwrap();
        let x = s(&[0.5, 4.0, 2.0, 1.0, 3.0]);
        let grid = family_grid(4096, x.rearrange(false).breakpoints());
        let fam = marcinkiewicz_family(&pc2, &grid).unwrap();
        let norm = marcinkiewicz_norm(&x, &pc2, DEFAULT_REFINEMENT);
        let via_family = kusuoka_risk(&x, &fam);
        assert!(via_family <= norm + 1e-12);
        assert!(norm - via_family < 1e-5);
    }

    #[test]
    fn tm_members_examples() {
        let pc2 = Distortion::power_complement(2.0).unwrap();
        let m = tm_member(&pc2, 2.0 / 3.0).unwrap();
        let slopes: Vec<f64> = match m.kind() {
            crate::DistortionKind::Piecewise(pl) => pl.slopes().collect(),
            _ => unreachable!(),
        };
        assert!(close(slopes[0], 4.0 / 3.0, 1e-12) && close(slopes[1], 1.0 / 3.0, 1e-12));

        // For φ = 2t − t² every member is RIM_{1−t, 1−t}.
        for t in [0.1, 0.35, 0.5, 0.8] {
            let as_rim = tm_member_as_rim(&pc2, t).unwrap();
            match as_rim.kind() {
                crate::DistortionKind::Rim { alpha, beta } => {
                    assert!(close(*alpha, 1.0 - t, 1e-12) && close(*beta, 1.0 - t, 1e-12))
                }
                _ => unreachable!(),
            }
            let member = tm_member(&pc2, t).unwrap();
            for i in 0..=64 {
                let x = i as f64 / 64.0;
                assert!(close(member.value(x), as_rim.value(x), 1e-12));
            }
        }

        // A RIM distortion is its own member at its kink.
        let r = Distortion::rim(0.7, 0.4).unwrap();
        let m = tm_member(&r, 0.3).unwrap();
        for i in 0..=64 {
            let x = i as f64 / 64.0;
            assert!(close(m.value(x), r.value(x), 1e-12));
        }
    }

    #[test]
    fn families_recover_phi() {
        let phi = Distortion::power_complement(2.0).unwrap();
        let m = 512;
        let grid = family_grid(m, &[]);
        let mf = marcinkiewicz_family(&phi, &grid).unwrap();
        let tf = tm_family(&phi, &grid).unwrap();
        // Lipschitz constant of φ is 2, so members at spacing 1/m recover φ to 2/m.
        for i in 1..m {
            let x = i as f64 / m as f64;
            assert!(close(mf.envelope(x), phi.value(x), 1e-12));
            assert!(close(tf.envelope(x), phi.value(x), 1e-12));
        }
        for i in 0..1000 {
            let x = (i as f64 + 0.5) / 1000.0;
            assert!(mf.envelope(x) <= phi.value(x) + 1e-12);
            assert!(phi.value(x) - mf.envelope(x) <= 2.0 / m as f64);
            assert!(phi.value(x) - tf.envelope(x) <= 2.0 / m as f64);
        }
    }

    #[test]
    fn witness_search() {
        let single = KusuokaSet::from_distortions([Distortion::cvar(0.5).unwrap()]).unwrap();
        assert!(comonotone_additivity_witness(&single, 6, 1).is_none());
        let same = KusuokaSet::from_distortions([
            Distortion::cvar(0.5).unwrap(),
            Distortion::cvar(0.5).unwrap(),
        ])
        .unwrap();
        assert!(comonotone_additivity_witness(&same, 6, 1).is_none());
        // Crossing profiles: RIM(0.9, 0.5) is steeper near 0, CVaR(0.5) higher near 1.
        let crossing = KusuokaSet::from_distortions([
            Distortion::rim(0.9, 0.5).unwrap(),
            Distortion::cvar(0.5).unwrap(),
        ])
        .unwrap();
        let (x, y) = comonotone_additivity_witness(&crossing, 4, 7).expect("witness");
        let sum = x.zip_with(&y, |a, b| a + b).unwrap();
        assert!(kusuoka_risk(&sum, &crossing) < kusuoka_risk(&x, &crossing) + kusuoka_risk(&y, &crossing) - 1e-9);
    }

    #[test]
    fn nested_cvars_are_comonotone_additive() {
        // CVaR_0.5 dominates the mean pointwise, so the supremum is CVaR_0.5
        // itself and no witness can exist.
        let set = KusuokaSet::from_distortions([
            Distortion::cvar(0.0).unwrap(),
            Distortion::cvar(0.5).unwrap(),
        ])
        .unwrap();
        let x = s(&[0.0, 1.0, 5.0, 9.0]);
        assert!(close(kusuoka_risk(&x, &set), spectral_risk(&x, &Distortion::cvar(0.5).unwrap(), true), 1e-12));
    }

    #[test]
    fn json_members() {
        let set: KusuokaSet = serde_json::from_str(
            r#"{"members":[{"type":"cvar","alpha":0.5},{"type":"scaled","scale":0.5,"phi":{"type":"cvar","alpha":0.2}}]}"#,
        )
        .unwrap();
        assert_eq!(set.len(), 2);
        assert!(!set.is_pte());
        let back = serde_json::to_string(&set).unwrap();
        let again: KusuokaSet = serde_json::from_str(&back).unwrap();
        assert_eq!(again, set);
        assert!(serde_json::from_str::<KusuokaSet>(r#"{"members":[]}"#).is_err());
    }
}
