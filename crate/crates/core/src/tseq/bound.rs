//! Witness indices `m` with `g ∉ A(k, m)` taken from the exclusion proofs.

use num_traits::{Signed, ToPrimitive};

use super::recipe::{Lemma5Variant, Sequence, SequenceRecipe};
use super::RecipeError;
use crate::group::{ComponentValue, Coordinate, Element};

const LEAD: Coordinate = Coordinate { component: 0, copy: 0 };

fn overflow() -> RecipeError {
    RecipeError::Invalid("bound does not fit in 64 bits".into())
}

fn product(factors: &[u64]) -> Result<u64, RecipeError> {
    factors.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x)).ok_or_else(overflow)
}

/// The proof's `m` for `g` and weight budget `k + 1`.
///
/// * ℤ ⊕ H: `20(|b|+1)(k+1)` with `b` the ℤ coefficient of `g`.
/// * ℤ(p^∞) ⊕ H: `30p(k+1)(z+1)` with `b/p^z` the ℤ(p^∞) part of `g`,
///   plus `δ` (where `o(e_0) = p^δ`) for the construction carrying `e_0`.
/// * cyclic sums: `2·m_0`.
pub fn m_bound(recipe: &SequenceRecipe, g: &Element, k: u64) -> Result<u64, RecipeError> {
    Sequence::new(recipe.clone())?.m_bound(g, k)
}

impl Sequence {
    /// See [`m_bound`].
    pub fn m_bound(&self, g: &Element, k: u64) -> Result<u64, RecipeError> {
        if g.is_zero() {
            return Err(RecipeError::ZeroTarget);
        }
        if g.spec() != &**self.ambient() {
            return Err(RecipeError::NotDecomposable(format!("{g} is not in the ambient group {}", self.ambient())));
        }
        let k1 = k.checked_add(1).ok_or_else(overflow)?;
        match self.recipe() {
            SequenceRecipe::Lemma2(_) => {
                let b = g.integer_at(LEAD).abs().to_u64().ok_or_else(overflow)?;
                product(&[20, b.checked_add(1).ok_or_else(overflow)?, k1])
            }
            SequenceRecipe::Lemma3(_) | SequenceRecipe::Lemma4(_) => {
                let z = match g.value(LEAD) {
                    Some(ComponentValue::Prufer(v)) => v.exponent() as u64,
                    _ => 0,
                };
                let p = self.prime().expect("prime-based construction");
                let base = product(&[30, p, k1, z + 1])?;
                let delta = self.lead_exponent().unwrap_or(0) as u64;
                base.checked_add(delta).ok_or_else(overflow)
            }
            SequenceRecipe::Lemma5(_) => self.lemma5_bound(g, k1),
            SequenceRecipe::Constant(_) => {
                Err(RecipeError::Invalid("constant fixtures are not T-sequences and carry no bound".into()))
            }
        }
    }

    fn lemma5_bound(&self, g: &Element, k1: u64) -> Result<u64, RecipeError> {
        let layout = self.lemma5()?;
        let mut v_q = 0u64;
        for c in g.support().keys() {
            let j = layout
                .generator_index(*c)
                .ok_or_else(|| RecipeError::NotDecomposable(format!("coordinate {c:?} is not a generator")))?;
            v_q = v_q.max(j);
        }
        // m' > 3 with d_{2n} ∈ ⟨e_r⟩, r > max(v_q, 3), for every n > m'
        let top = v_q.max(3);
        let mut span = 0u64;
        for j in 0..=top {
            span = span.checked_add(layout.generator_order(j) - 1).ok_or_else(overflow)?;
        }
        let m_prime = (span - 1).max(4);
        let m0 = match layout.variant() {
            Lemma5Variant::A { j0 } => product(&[4, m_prime, j0 + 2, k1])?,
            Lemma5Variant::B => {
                // b_j = e_{L+j} has order p^{j+1}; need p^{j+1} > 2(k+1) past j'
                let p = layout.ladder_prime().expect("variant b has a ladder tail");
                let need = 2u128 * k1 as u128;
                let mut j = 0u64;
                while (p as u128).checked_pow((j + 2) as u32).is_some_and(|v| v <= need) {
                    j += 1;
                }
                let j_prime = j.max(m_prime + 1);
                product(&[4, j_prime, k1])?
            }
        };
        m0.checked_mul(2).ok_or_else(overflow)
    }
}
