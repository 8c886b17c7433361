//! Windowed enumeration of `A(k, m)` and the exclusion check `g ∉ A(k, m)`.
//!
//! `A(k, m)` is the set of sums `n_1 d_{r_1} + … + n_s d_{r_s}` with
//! `m ≤ r_1 < … < r_s` and `Σ|n_i| ≤ k + 1`, together with 0. It is
//! infinite; every verdict here is scoped to indices in `[m, cap]`.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{pow_p, Element, GroupError};
use crate::tseq::{f, RecipeError, Sequence, SequenceRecipe};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AkmError {
    #[error("the target must be nonzero")]
    ZeroTarget,
    #[error("window [{m}, {cap}] is empty")]
    EmptyWindow { m: u64, cap: u64 },
    #[error("k + 1 overflows")]
    Budget,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Recipe(#[from] RecipeError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AkmQuery {
    pub k: u64,
    pub m: u64,
    /// Largest index `M` taking part in the window.
    pub cap: u64,
    pub recipe: SequenceRecipe,
}

impl AkmQuery {
    pub fn new(recipe: SequenceRecipe, k: u64, m: u64, cap: u64) -> Result<Self, AkmError> {
        let q = AkmQuery { k, m, cap, recipe };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<(), AkmError> {
        if self.m > self.cap {
            return Err(AkmError::EmptyWindow { m: self.m, cap: self.cap });
        }
        self.k.checked_add(1).ok_or(AkmError::Budget)?;
        Ok(())
    }

    /// `k + 1`.
    pub fn budget(&self) -> u64 {
        self.k + 1
    }

    /// Closed-form size of the windowed set without 0:
    /// `Σ_s C(W, s)·C(k+1, s)·2^s`, `W = cap − m + 1`.
    pub fn combination_count(&self) -> BigUint {
        let w = self.cap - self.m + 1;
        let budget = self.budget();
        let mut total = BigUint::zero();
        for s in 1..=w.min(budget) {
            total += (binomial(w, s) * binomial(budget, s)) << s;
        }
        total
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A nonempty signed combination `Σ n_i d_{r_i}` with increasing indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Combination {
    pub terms: Vec<(u64, i64)>,
}

impl Combination {
    pub fn weight(&self) -> u64 {
        self.terms.iter().map(|(_, c)| c.unsigned_abs()).sum()
    }

    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.iter().map(|(r, _)| *r)
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (r, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c:+}*d({r})")?;
        }
        Ok(())
    }
}

/// Combinations in `[m, cap]` of weight `≤ budget`, ordered by index set
/// (lexicographically), then by coefficient vector.
#[derive(Debug, Clone)]
pub struct Combinations {
    cap: u64,
    budget: u64,
    first_hi: u64,
    indices: Vec<u64>,
    coeffs: Vec<i64>,
    done: bool,
}

impl Combinations {
    fn new(first_lo: u64, first_hi: u64, cap: u64, budget: u64) -> Self {
        let mut c = Combinations { cap, budget, first_hi, indices: vec![first_lo], coeffs: Vec::new(), done: false };
        c.done = first_lo > first_hi || budget == 0;
        c.reset_coeffs(0);
        c
    }

    /// Budget left for position `i` once earlier positions are fixed and one
    /// unit is reserved for each later position.
    fn room(&self, i: usize) -> i64 {
        let used: u64 = self.coeffs[..i].iter().map(|c| c.unsigned_abs()).sum();
        let later = (self.indices.len() - i - 1) as u64;
        (self.budget - used - later) as i64
    }

    /// Sets positions `from..` to their smallest admissible values.
    fn reset_coeffs(&mut self, from: usize) {
        self.coeffs.truncate(from);
        while self.coeffs.len() < self.indices.len() {
            let i = self.coeffs.len();
            self.coeffs.push(0);
            self.coeffs[i] = -self.room(i);
        }
    }

    fn advance_coeffs(&mut self) -> bool {
        for i in (0..self.coeffs.len()).rev() {
            let room = self.room(i);
            let mut next = self.coeffs[i] + 1;
            if next == 0 {
                next = 1;
            }
            if next <= room {
                self.coeffs[i] = next;
                self.reset_coeffs(i + 1);
                return true;
            }
        }
        false
    }

    fn advance_indices(&mut self) -> bool {
        let last = *self.indices.last().expect("nonempty");
        if (self.indices.len() as u64) < self.budget && last < self.cap {
            self.indices.push(last + 1);
            return true;
        }
        while let Some(last) = self.indices.pop() {
            let limit = if self.indices.is_empty() { self.first_hi } else { self.cap };
            if last < limit {
                self.indices.push(last + 1);
                return true;
            }
        }
        false
    }
}

impl Iterator for Combinations {
    type Item = Combination;

    fn next(&mut self) -> Option<Combination> {
        if self.done {
            return None;
        }
        let out = Combination { terms: self.indices.iter().copied().zip(self.coeffs.iter().copied()).collect() };
        if !self.advance_coeffs() {
            if self.advance_indices() {
                self.reset_coeffs(0);
            } else {
                self.done = true;
            }
        }
        Some(out)
    }
}

/// Every nonempty combination of the window, each exactly once.
pub fn enumerate_combinations(query: &AkmQuery) -> Combinations {
    Combinations::new(query.m, query.cap, query.cap, query.budget())
}

/// `Σ n_i d_{r_i}`; the empty combination gives 0.
pub fn evaluate(c: &Combination, recipe: &SequenceRecipe) -> Result<Element, AkmError> {
    let seq = Sequence::new(recipe.clone())?;
    let mut acc = Element::zero(seq.ambient().clone());
    for (r, n) in &c.terms {
        acc = acc.add(&seq.term(*r)?.scalar_mul(&BigInt::from(*n)))?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// No combination in the window hits the target.
    ExcludedInWindow,
    CollisionFound,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExclusionReport {
    pub target: String,
    pub recipe: String,
    pub k: u64,
    pub m: u64,
    pub cap: u64,
    pub verdict: Verdict,
    pub combinations_checked: u64,
    /// The first colliding combination in enumeration order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Combination>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PartialEq for ExclusionReport {
    fn eq(&self, o: &Self) -> bool {
        (&self.target, &self.recipe, self.k, self.m, self.cap, self.verdict, self.combinations_checked, &self.witness)
            == (&o.target, &o.recipe, o.k, o.m, o.cap, o.verdict, o.combinations_checked, &o.witness)
    }
}

impl Eq for ExclusionReport {}

impl ExclusionReport {
    pub fn excluded(&self) -> bool {
        self.verdict == Verdict::ExcludedInWindow
    }
}

impl fmt::Display for ExclusionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "target {} | k = {}, window [{}, {}] | {} combinations | ",
            self.target, self.k, self.m, self.cap, self.combinations_checked
        )?;
        match &self.witness {
            None => f.write_str("excluded in window"),
            Some(w) => write!(f, "collision: {w}"),
        }
    }
}

/// Scans the window for a combination equal to `g`. Terms are computed once;
/// the scan is split by leading index and run in parallel, and each part
/// stops at its own first hit so the count does not depend on scheduling.
pub fn excludes(g: &Element, query: &AkmQuery) -> Result<ExclusionReport, AkmError> {
    query.validate()?;
    if g.is_zero() {
        return Err(AkmError::ZeroTarget);
    }
    let start = Instant::now();
    let seq = Sequence::new(query.recipe.clone())?;
    if g.spec() != &**seq.ambient() {
        return Err(GroupError::SpecMismatch.into());
    }
    let terms: Vec<Element> = (query.m..=query.cap).into_par_iter().map(|r| seq.term(r)).collect::<Result<_, _>>()?;
    let term = |r: u64| &terms[(r - query.m) as usize];

    let parts: Vec<(u64, Option<Combination>)> = (query.m..=query.cap)
        .into_par_iter()
        .map(|lead| {
            let mut checked = 0u64;
            for c in Combinations::new(lead, lead, query.cap, query.budget()) {
                checked += 1;
                let mut acc = term(c.terms[0].0).scale(c.terms[0].1);
                for (r, n) in &c.terms[1..] {
                    acc = acc.add(&term(*r).scale(*n)).expect("terms share the ambient group");
                }
                if &acc == g {
                    return (checked, Some(c));
                }
            }
            (checked, None)
        })
        .collect();

    let combinations_checked = parts.iter().map(|(n, _)| n).sum();
    let witness = parts.into_iter().find_map(|(_, w)| w);
    Ok(ExclusionReport {
        target: g.to_string(),
        recipe: query.recipe.tag().to_string(),
        k: query.k,
        m: query.m,
        cap: query.cap,
        verdict: if witness.is_some() { Verdict::CollisionFound } else { Verdict::ExcludedInWindow },
        combinations_checked,
        witness,
        elapsed: start.elapsed(),
    })
}

/// Exact values behind the estimate `|Σ l_i f_{r_i}| < (k+1) f_{r_v} ≤ (k+1) p^{r_v³+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eq1Evaluation {
    pub abs_sum: BigUint,
    /// `|Σ l_i f_{r_i}| < (k+1) f_{r_v}`.
    pub inner: bool,
    /// `(k+1) f_{r_v} ≤ (k+1) p^{r_v³+1}`.
    pub middle: bool,
    /// `|Σ l_i f_{r_i}| < (k+1) p^{r_v³+1}`.
    pub outer: bool,
}

pub fn eq1_evaluate(p: u64, k: u64, indices: &[u32], coefficients: &[i64]) -> Result<Eq1Evaluation, AkmError> {
    if indices.is_empty() || indices.len() != coefficients.len() {
        return Err(AkmError::Precondition("indices and coefficients must be nonempty and of equal length".into()));
    }
    if indices[0] == 0 || indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AkmError::Precondition("indices must satisfy 0 < r_1 < … < r_v".into()));
    }
    let weight: u64 = coefficients.iter().map(|c| c.unsigned_abs()).sum();
    if weight > k.saturating_add(1) {
        return Err(AkmError::Precondition(format!("Σ|l_i| = {weight} exceeds k + 1 = {}", k + 1)));
    }
    let mut sum = BigInt::zero();
    for (&r, &l) in indices.iter().zip(coefficients) {
        sum += BigInt::from(f(p, r)) * l;
    }
    let abs_sum = sum.abs().to_biguint().expect("nonnegative");
    let rv = *indices.last().unwrap();
    let k1 = BigUint::from(k + 1);
    let top = &k1 * f(p, rv);
    let ceiling = &k1 * pow_p(p, rv.pow(3) + 1);
    Ok(Eq1Evaluation { inner: abs_sum < top, middle: top <= ceiling, outer: abs_sum < ceiling, abs_sum })
}

/// Both inequalities of the estimate, checked exactly.
pub fn eq1_bound_check(p: u64, k: u64, indices: &[u32], coefficients: &[i64]) -> Result<bool, AkmError> {
    let e = eq1_evaluate(p, k, indices, coefficients)?;
    Ok(e.inner && e.middle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Coordinate, GroupSpec};
    use std::sync::Arc;

    fn lemma2() -> SequenceRecipe {
        SequenceRecipe::lemma2(2, GroupSpec::parse("Z(3)").unwrap())
    }

    fn combos(k: u64, m: u64, cap: u64) -> Vec<Combination> {
        enumerate_combinations(&AkmQuery::new(lemma2(), k, m, cap).unwrap()).collect()
    }

    #[test]
    fn enumeration_examples() {
        let c = combos(0, 5, 5);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].terms, vec![(5, -1)]);
        assert_eq!(c[1].terms, vec![(5, 1)]);
        assert_eq!(combos(0, 5, 6).len(), 4);
        let c = combos(1, 5, 5);
        assert_eq!(c.iter().map(|c| c.terms[0].1).collect::<Vec<_>>(), vec![-2, -1, 1, 2]);
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let c = combos(2, 5, 9);
        let q = AkmQuery::new(lemma2(), 2, 5, 9).unwrap();
        assert_eq!(BigUint::from(c.len()), q.combination_count());
        let keys: Vec<(Vec<u64>, Vec<i64>)> =
            c.iter().map(|c| (c.indices().collect(), c.terms.iter().map(|t| t.1).collect())).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(c.iter().all(|c| c.weight() <= 3));
    }

    #[test]
    fn count_matches_brute_force() {
        // independent count: all vectors in [-K, K]^W with weight ≤ K, minus 0
        for (k, w) in [(0u64, 3u64), (1, 3), (2, 4), (3, 2)] {
            let budget = (k + 1) as i64;
            let mut count = 0u64;
            let mut v = vec![-budget; w as usize];
            loop {
                let wt: i64 = v.iter().map(|x: &i64| x.abs()).sum();
                if wt > 0 && wt <= budget {
                    count += 1;
                }
                let mut i = 0;
                while i < v.len() && v[i] == budget {
                    v[i] = -budget;
                    i += 1;
                }
                if i == v.len() {
                    break;
                }
                v[i] += 1;
            }
            let q = AkmQuery::new(lemma2(), k, 5, 5 + w - 1).unwrap();
            assert_eq!(q.combination_count(), BigUint::from(count), "k = {k}, W = {w}");
        }
    }

    #[test]
    fn evaluate_examples() {
        let r = lemma2();
        let amb = Sequence::new(r.clone()).unwrap().ambient().clone();
        assert!(evaluate(&Combination { terms: vec![] }, &r).unwrap().is_zero());
        let e0 = |n| Element::basis_multiple(amb.clone(), Coordinate::new(0, 0), n).unwrap();
        assert_eq!(evaluate(&Combination { terms: vec![(6, 1)] }, &r).unwrap(), e0(8));
        assert_eq!(evaluate(&Combination { terms: vec![(6, 1), (8, 1)] }, &r).unwrap(), e0(24));
    }

    #[test]
    fn lemma2_window_excludes_generator() {
        let r = lemma2();
        let amb = Sequence::new(r.clone()).unwrap().ambient().clone();
        let g = Element::basis_multiple(amb, Coordinate::new(0, 0), 1).unwrap();
        let report = excludes(&g, &AkmQuery::new(r, 0, 40, 52).unwrap()).unwrap();
        assert!(report.excluded());
        assert_eq!(report.combinations_checked, 26);
    }

    #[test]
    fn constant_sequence_collides() {
        let amb = Arc::new(GroupSpec::parse("Z").unwrap());
        let g = Element::basis_multiple(amb.clone(), Coordinate::new(0, 0), 1).unwrap();
        let r = SequenceRecipe::constant((*amb).clone(), &g, 1);
        let report = excludes(&g, &AkmQuery::new(r, 0, 1, 1).unwrap()).unwrap();
        assert_eq!(report.verdict, Verdict::CollisionFound);
        assert_eq!(report.witness, Some(Combination { terms: vec![(1, 1)] }));
    }

    #[test]
    fn witness_is_first_in_order() {
        let amb = Arc::new(GroupSpec::parse("Z").unwrap());
        let g = Element::basis_multiple(amb.clone(), Coordinate::new(0, 0), 1).unwrap();
        let r = SequenceRecipe::constant((*amb).clone(), &g, 1);
        let report = excludes(&g, &AkmQuery::new(r, 2, 1, 4).unwrap()).unwrap();
        // index set {1} comes before {1, 2}
        assert_eq!(report.witness, Some(Combination { terms: vec![(1, 1)] }));
    }

    #[test]
    fn zero_target_rejected() {
        let r = lemma2();
        let amb = Sequence::new(r.clone()).unwrap().ambient().clone();
        assert_eq!(excludes(&Element::zero(amb), &AkmQuery::new(r, 0, 5, 6).unwrap()), Err(AkmError::ZeroTarget));
    }

    #[test]
    fn eq1_examples() {
        assert!(eq1_bound_check(2, 1, &[2], &[1]).unwrap());
        assert!(eq1_bound_check(2, 1, &[1, 2], &[1, 1]).unwrap());
        let e = eq1_evaluate(2, 2, &[1, 2], &[-2, 1]).unwrap();
        assert_eq!(e.abs_sum, BigUint::from(330u32));
        assert!(e.inner && e.outer);
        // full weight on the last index meets the inner bound with equality
        let e = eq1_evaluate(2, 1, &[3], &[2]).unwrap();
        assert!(!e.inner && e.outer);
        assert!(eq1_bound_check(2, 0, &[2, 1], &[1, 1]).is_err());
        assert!(eq1_bound_check(2, 0, &[1, 2], &[1, 1]).is_err());
    }
}
