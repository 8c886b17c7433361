//! Explicit T-sequences `d_n` and their numeric ingredients.
//!
//! The constructions live in [`recipe`]; this module holds the number
//! theory they share: triangular numbers `S_n`, the index `t(n)`, the
//! sparse integers `f_n`, their ℤ(p^∞) analogues `f̃_n`, and the partial
//! sums `β_n` of `f̃` at even indices.

mod bound;
mod enumerate;
mod recipe;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{pow_p, GroupError, PruferValue};

pub use bound::m_bound;
pub use enumerate::{EnumeratedH, HEnumeration};
pub use recipe::{
    term, ConstantParams, D5Rule, EpsilonRule, Lemma2Params, Lemma3Params, Lemma4Params, Lemma5Params, Lemma5Variant,
    OrderTail, OrderTarget, ResidueZero, Sequence, SequenceRecipe,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecipeError {
    #[error("t(n) is undefined for n = 0")]
    TOfZero,
    #[error("index {index} is outside the recipe range (first index {first})")]
    OutOfRange { index: u64, first: u64 },
    #[error("enumeration index {0} is unavailable")]
    EnumerationUnavailable(u64),
    #[error("invalid recipe: {0}")]
    Invalid(String),
    #[error("element cannot be decomposed for this bound: {0}")]
    NotDecomposable(String),
    #[error("the target must be nonzero")]
    ZeroTarget,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `S_n = n(n+1)/2`.
pub fn triangular(n: u64) -> u64 {
    n * (n + 1) / 2
}

/// `t(n) = max{t : n ≥ S_t}` for `n ≥ 1`.
pub fn t_of(n: u64) -> Result<u64, RecipeError> {
    if n == 0 {
        return Err(RecipeError::TOfZero);
    }
    // start from the float estimate and correct
    let mut t = (((8.0 * n as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while triangular(t + 1) <= n {
        t += 1;
    }
    while triangular(t) > n {
        t -= 1;
    }
    Ok(t)
}

/// `f_n = p^{n³−n²} + … + p^{n³−n} + p^{n³}`.
pub fn f(p: u64, n: u32) -> BigUint {
    let n3 = n.pow(3);
    let mut acc = BigUint::zero();
    if p == 2 {
        for j in 0..=n {
            acc.set_bit((n3 - j * n) as u64, true);
        }
        return acc;
    }
    let step = pow_p(p, n);
    let mut power = pow_p(p, n3 - n * n);
    for _ in 0..=n {
        acc += &power;
        power *= &step;
    }
    acc
}

/// `f̃_n = 1/p^{n³−n²} + … + 1/p^{n³}` as an element of ℤ(p^∞).
pub fn f_tilde(p: u64, n: u32) -> PruferValue {
    // (1 + p^n + … + p^{n²}) / p^{n³}
    let step = pow_p(p, n);
    let mut num = BigUint::zero();
    let mut power = BigUint::one();
    for _ in 0..=n {
        num += &power;
        power *= &step;
    }
    PruferValue::new(p, BigInt::from(num), n.pow(3))
}

/// Rule producing the strictly increasing positive indices `j_1 < j_2 < …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum JRule {
    /// `j_i = i`.
    #[default]
    Identity,
    /// `j_i = slope·i + offset`.
    Affine { slope: u64, offset: u64 },
    /// Explicit finite list; indices past its end are unavailable.
    Explicit { values: Vec<u64> },
}

impl JRule {
    pub fn validate(&self) -> Result<(), RecipeError> {
        match self {
            JRule::Identity => Ok(()),
            JRule::Affine { slope, .. } if *slope >= 1 => Ok(()),
            JRule::Affine { .. } => Err(RecipeError::Invalid("affine j-rule needs slope ≥ 1".into())),
            JRule::Explicit { values } => {
                if values.first() == Some(&0) || values.windows(2).any(|w| w[0] >= w[1]) {
                    Err(RecipeError::Invalid("explicit j-rule must be strictly increasing and positive".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// `j_i` for `i ≥ 1`.
    pub fn j(&self, i: u64) -> Result<u64, RecipeError> {
        if i == 0 {
            return Err(RecipeError::Invalid("j-rule indices start at 1".into()));
        }
        match self {
            JRule::Identity => Ok(i),
            JRule::Affine { slope, offset } => Ok(slope * i + offset),
            JRule::Explicit { values } => {
                values.get((i - 1) as usize).copied().ok_or(RecipeError::EnumerationUnavailable(i))
            }
        }
    }
}

/// `β_n = f̃_{2j_1} + … + f̃_{2j_n}`.
pub fn beta_prefix(p: u64, rule: &JRule, n: u64) -> Result<PruferValue, RecipeError> {
    rule.validate()?;
    let mut acc = PruferValue::zero(p);
    for i in 1..=n {
        let j = rule.j(i)?;
        acc = acc.add(&f_tilde(p, exp_index(2 * j)?));
    }
    Ok(acc)
}

pub(crate) fn exp_index(n: u64) -> Result<u32, RecipeError> {
    u32::try_from(n)
        .ok()
        .filter(|n| n.checked_pow(3).is_some())
        .ok_or_else(|| RecipeError::Invalid(format!("index {n} too large for f̃")))
}
