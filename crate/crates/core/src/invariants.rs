//! Exponents, leading Ulm-Kaplansky invariants and the decision criteria
//! for bounded groups.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{pow_p, Cardinality, ComponentKind, GroupSpec, Order};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecisionError {
    #[error("the group {0} is unbounded")]
    Unbounded(String),
    #[error("the group {0} is finite")]
    Finite(String),
    #[error("N must be at least 2, got {0}")]
    InvalidN(u64),
    #[error("H is not torsion")]
    NotTorsion,
    #[error("H must be countable")]
    Uncountable,
    #[error("H does not embed in G: G has too few independent elements of order ≥ {p}^{exponent}")]
    NotEmbeddable { p: u64, exponent: u32 },
    #[error("inconsistent flags: {0}")]
    InconsistentFlags(String),
    #[error("no Hausdorff group topology has radical H: {0}")]
    NotRealizable(Box<ObstructionCertificate>),
}

/// Per prime, the exponents `a_i` (ascending) with multiplicities `k_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UlmProfile {
    pub primes: BTreeMap<u64, Vec<(u32, Cardinality)>>,
}

impl UlmProfile {
    /// Merges equal `(p, a)` summands; fails on unbounded specs.
    pub fn of(spec: &GroupSpec) -> Result<Self, DecisionError> {
        let mut merged: BTreeMap<u64, BTreeMap<u32, Cardinality>> = BTreeMap::new();
        for c in spec.components() {
            match c.kind {
                ComponentKind::Cyclic { p, a } => {
                    let slot = merged.entry(p).or_default().entry(a).or_insert(Cardinality::Finite(0));
                    *slot = slot.plus(c.multiplicity);
                }
                _ => return Err(DecisionError::Unbounded(spec.to_string())),
            }
        }
        let primes = merged.into_iter().map(|(p, m)| (p, m.into_iter().collect())).collect();
        Ok(UlmProfile { primes })
    }

    /// Largest exponent `n_p` at `p`.
    pub fn top_exponent(&self, p: u64) -> Option<u32> {
        self.primes.get(&p).and_then(|v| v.last()).map(|(a, _)| *a)
    }

    /// Total multiplicity of summands at `p` with exponent `≥ b`.
    pub fn rank_at_least(&self, p: u64, b: u32) -> Cardinality {
        self.primes
            .get(&p)
            .into_iter()
            .flatten()
            .filter(|(a, _)| *a >= b)
            .fold(Cardinality::Finite(0), |acc, (_, k)| acc.plus(*k))
    }
}

/// `exp G`: lcm of the summand orders, infinite with a ℤ or ℤ(p^∞) summand.
pub fn exponent(spec: &GroupSpec) -> Order {
    let mut acc = BigUint::one();
    for c in spec.components() {
        match c.kind {
            ComponentKind::Cyclic { p, a } => acc = acc.lcm(&pow_p(p, a)),
            _ => return Order::Infinite,
        }
    }
    Order::Finite(acc)
}

/// Multiplicity of the largest exponent, per prime.
pub fn leading_ulm_kaplansky(spec: &GroupSpec) -> Result<BTreeMap<u64, Cardinality>, DecisionError> {
    let profile = UlmProfile::of(spec)?;
    Ok(profile.primes.iter().map(|(p, v)| (*p, v.last().unwrap().1)).collect())
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Evidence for a negative answer: the map `π(g) = m·g` has finite image
/// not containing H, so `Ker π` is an open and closed subgroup in every
/// Hausdorff group topology and bounds the radical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionCertificate {
    pub prime: u64,
    /// Exponent `b` of the p-part of `exp H`.
    pub h_exponent: u32,
    /// Exponent `n` of the p-part of `exp G`.
    pub g_exponent: u32,
    #[serde(with = "decimal")]
    pub multiplier: BigUint,
    /// `|π(G)|`.
    #[serde(with = "decimal")]
    pub image_order: BigUint,
}

impl std::fmt::Display for ObstructionCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "p = {}: π(g) = {}·g has finite image of order {} and does not kill H",
            self.prime, self.multiplier, self.image_order
        )
    }
}

/// Order of `m·G` for bounded `G`; `None` when infinite.
pub fn image_order(spec: &GroupSpec, m: &BigUint) -> Result<Option<BigUint>, DecisionError> {
    let mut total = BigUint::one();
    for c in spec.components() {
        let q = match c.kind {
            ComponentKind::Cyclic { p, a } => pow_p(p, a),
            _ => return Err(DecisionError::Unbounded(spec.to_string())),
        };
        let o = &q / m.gcd(&q);
        if o.is_one() {
            continue;
        }
        match c.multiplicity.finite() {
            Some(k) => total *= num_traits::pow(o, k as usize),
            None => return Ok(None),
        }
    }
    Ok(Some(total))
}

fn certificate(g: &GroupSpec, p: u64, b: u32) -> Result<ObstructionCertificate, DecisionError> {
    let profile = UlmProfile::of(g)?;
    let n = profile.top_exponent(p).unwrap_or(0);
    let exp = match exponent(g) {
        Order::Finite(e) => e,
        Order::Infinite => return Err(DecisionError::Unbounded(g.to_string())),
    };
    let multiplier = exp / pow_p(p, n - b + 1);
    let image_order = image_order(g, &multiplier)?.expect("finitely many summands of exponent ≥ b at p");
    Ok(ObstructionCertificate { prime: p, h_exponent: b, g_exponent: n, multiplier, image_order })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinapDecision {
    pub admits: bool,
    pub leading: BTreeMap<u64, Cardinality>,
    pub certificate: Option<ObstructionCertificate>,
}

fn require_infinite_bounded(spec: &GroupSpec) -> Result<(), DecisionError> {
    if !spec.is_bounded() {
        return Err(DecisionError::Unbounded(spec.to_string()));
    }
    if spec.is_finite() {
        return Err(DecisionError::Finite(spec.to_string()));
    }
    Ok(())
}

/// Whether an infinite bounded group admits a MinAP group topology: exactly
/// when every leading Ulm-Kaplansky invariant is infinite.
pub fn admits_minap(spec: &GroupSpec) -> Result<MinapDecision, DecisionError> {
    require_infinite_bounded(spec)?;
    let leading = leading_ulm_kaplansky(spec)?;
    let profile = UlmProfile::of(spec)?;
    let offending = leading.iter().find(|(_, k)| !k.is_infinite()).map(|(p, _)| *p);
    let certificate = match offending {
        Some(p) => Some(certificate(spec, p, profile.top_exponent(p).unwrap())?),
        None => None,
    };
    Ok(MinapDecision { admits: certificate.is_none(), leading, certificate })
}

/// Factorization of `n` as ascending `(p, b)` pairs.
pub(crate) fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        let mut b = 0;
        while n.is_multiple_of(d) {
            n /= d;
            b += 1;
        }
        if b > 0 {
            out.push((d, b));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn zn_rank(spec: &GroupSpec, p: u64, b: u32) -> Cardinality {
    spec.components()
        .iter()
        .filter(|c| match c.kind {
            ComponentKind::Cyclic { p: q, a } => q == p && a >= b,
            ComponentKind::Prufer { p: q } => q == p,
            ComponentKind::IntegerZ => false,
        })
        .fold(Cardinality::Finite(0), |acc, c| acc.plus(c.multiplicity))
}

/// Whether `spec` contains `ℤ(N)^(ω)`: for every `p^b ∥ N`, infinitely many
/// independent elements of order `≥ p^b` in the p-part.
pub fn contains_zn_omega(spec: &GroupSpec, n: u64) -> Result<bool, DecisionError> {
    if n < 2 {
        return Err(DecisionError::InvalidN(n));
    }
    Ok(factor(n).into_iter().all(|(p, b)| zn_rank(spec, p, b).is_infinite()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NrDecision {
    pub member: bool,
    #[serde(with = "decimal")]
    pub h_exponent: BigUint,
    pub certificate: Option<ObstructionCertificate>,
}

/// Checks `H ↪ G` for bounded groups: at every prime and every `b`, H has
/// no more summands of exponent `≥ b` than G.
pub fn check_embeddable(g: &GroupSpec, h: &GroupSpec) -> Result<(), DecisionError> {
    let gp = UlmProfile::of(g)?;
    let hp = UlmProfile::of(h)?;
    for (p, parts) in &hp.primes {
        for (b, _) in parts {
            let need = hp.rank_at_least(*p, *b);
            let have = gp.rank_at_least(*p, *b);
            let fits = match (need, have) {
                (_, Cardinality::SymbolicInfinite) => true,
                (Cardinality::SymbolicInfinite, _) => false,
                (_, Cardinality::CountableInfinite) => true,
                (Cardinality::CountableInfinite, Cardinality::Finite(_)) => false,
                (Cardinality::Finite(x), Cardinality::Finite(y)) => x <= y,
            };
            if !fits {
                return Err(DecisionError::NotEmbeddable { p: *p, exponent: *b });
            }
        }
    }
    Ok(())
}

/// `H ∈ NR(G)` (equivalently `NRC(G)`) for infinite bounded `G` and
/// countable `H ≤ G`: holds iff `G ⊇ ℤ(exp H)^(ω)`.
pub fn nr_membership_bounded(g: &GroupSpec, h: &GroupSpec) -> Result<NrDecision, DecisionError> {
    require_infinite_bounded(g)?;
    if h.components().iter().any(|c| c.multiplicity == Cardinality::SymbolicInfinite) {
        return Err(DecisionError::Uncountable);
    }
    check_embeddable(g, h)?;
    let n = match exponent(h) {
        Order::Finite(n) => n,
        Order::Infinite => return Err(DecisionError::Unbounded(h.to_string())),
    };
    let hp = UlmProfile::of(h)?;
    for (p, parts) in &hp.primes {
        let b = parts.last().unwrap().0;
        if !zn_rank(g, *p, b).is_infinite() {
            let certificate = certificate(g, *p, b)?;
            return Ok(NrDecision { member: false, h_exponent: n, certificate: Some(certificate) });
        }
    }
    Ok(NrDecision { member: true, h_exponent: n, certificate: None })
}
