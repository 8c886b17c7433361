//! Exact duality on finite truncations `⊕ ℤ(n_i)`.
//!
//! A truncation keeps finitely many copies of each cyclic summand and
//! drops everything else; projecting onto it is a homomorphism. Characters
//! of `⊕ ℤ(n_i)` are identified with vectors `y` of the same group through
//! `(x, y) = Σ x_i y_i / n_i mod 1`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CharError, Character, DualValue};
use crate::group::{Cardinality, Component, ComponentKind, ComponentValue, Coordinate, Element, GroupSpec};
use crate::tseq::{Sequence, SequenceRecipe};

/// Largest group order enumerated exhaustively.
pub const CHARACTER_LIMIT: u64 = 1 << 16;

/// Number of leading copies kept from each summand of the ambient group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub copies: Vec<u64>,
}

impl Truncation {
    /// Keeps the first `copies` copies of every cyclic summand and drops ℤ
    /// and ℤ(p^∞) summands.
    pub fn leading(ambient: &GroupSpec, copies: u64) -> Self {
        let copies = ambient
            .components()
            .iter()
            .map(|c| match c.kind {
                ComponentKind::Cyclic { .. } => c.multiplicity.finite().map_or(copies, |m| m.min(copies)),
                _ => 0,
            })
            .collect();
        Truncation { copies }
    }
}

/// A finite truncation with its coordinates flattened.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    ambient: Arc<GroupSpec>,
    spec: Arc<GroupSpec>,
    /// Ambient coordinate of each flattened position.
    coords: Vec<Coordinate>,
    /// Truncated-spec coordinate of each flattened position.
    local: Vec<Coordinate>,
    moduli: Vec<u64>,
    order: u64,
    lcm: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl FiniteGroup {
    pub fn new(ambient: Arc<GroupSpec>, truncation: &Truncation) -> Result<Self, CharError> {
        let comps = ambient.components();
        if truncation.copies.len() != comps.len() {
            return Err(CharError::NotFinite(format!(
                "truncation lists {} summands but {ambient} has {}",
                truncation.copies.len(),
                comps.len()
            )));
        }
        let mut kept = Vec::new();
        let mut coords = Vec::new();
        let mut local = Vec::new();
        let mut moduli = Vec::new();
        let mut order: u128 = 1;
        for (i, (c, &n)) in comps.iter().zip(&truncation.copies).enumerate() {
            if n == 0 {
                continue;
            }
            let q = match c.kind {
                ComponentKind::Cyclic { .. } => c.kind.modulus().unwrap(),
                _ => return Err(CharError::NotFinite(format!("summand {i} of {ambient} is infinite"))),
            };
            if !c.multiplicity.admits(n - 1) {
                return Err(CharError::NotFinite(format!("summand {i} has fewer than {n} copies")));
            }
            let t = kept.len();
            kept.push(Component { kind: c.kind, multiplicity: Cardinality::Finite(n) });
            for copy in 0..n {
                coords.push(Coordinate::new(i, copy));
                local.push(Coordinate::new(t, copy));
                moduli.push(q);
                order = order.saturating_mul(q as u128);
                if order > CHARACTER_LIMIT as u128 {
                    return Err(CharError::TooLarge { order: too_large(comps, truncation), limit: CHARACTER_LIMIT });
                }
            }
        }
        let spec = if kept.is_empty() { GroupSpec::trivial() } else { GroupSpec::new(kept)? };
        let lcm = moduli.iter().fold(1u64, |l, &q| l / gcd(l, q) * q);
        Ok(FiniteGroup { ambient, spec: Arc::new(spec), coords, local, moduli, order: order as u64, lcm })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The truncated group as a spec of its own.
    pub fn spec(&self) -> &Arc<GroupSpec> {
        &self.spec
    }

    pub fn ambient(&self) -> &Arc<GroupSpec> {
        &self.ambient
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    /// Projection of an ambient element.
    pub fn project(&self, g: &Element) -> Result<Vec<u64>, CharError> {
        if **g.spec_arc() != *self.ambient {
            return Err(CharError::SpecMismatch);
        }
        Ok(self
            .coords
            .iter()
            .map(|c| match g.value(*c) {
                Some(ComponentValue::Residue(r)) => *r,
                _ => 0,
            })
            .collect())
    }

    /// Vector of an element of the truncated spec.
    pub fn vector(&self, e: &Element) -> Result<Vec<u64>, CharError> {
        if **e.spec_arc() != *self.spec {
            return Err(CharError::SpecMismatch);
        }
        Ok(self
            .local
            .iter()
            .map(|c| match e.value(*c) {
                Some(ComponentValue::Residue(r)) => *r,
                _ => 0,
            })
            .collect())
    }

    /// Element of the truncated spec.
    pub fn element(&self, v: &[u64]) -> Element {
        let terms = self.local.iter().zip(v).filter(|(_, r)| **r != 0).map(|(c, r)| (*c, ComponentValue::Residue(*r)));
        Element::from_terms(self.spec.clone(), terms).expect("residues are reduced")
    }

    /// Character of the truncated spec with dual vector `y`.
    pub fn character(&self, y: &[u64]) -> Character {
        let values = self.local.iter().zip(y).map(|(c, r)| (*c, DualValue::Residue(*r)));
        Character::from_values(self.spec.clone(), values).expect("residues are reduced")
    }

    /// Dual vector of a character of the truncated spec.
    pub fn dual_vector(&self, chi: &Character) -> Result<Vec<u64>, CharError> {
        if **chi.spec() != *self.spec {
            return Err(CharError::SpecMismatch);
        }
        self.local
            .iter()
            .map(|c| match chi.value(*c) {
                None => Ok(0),
                Some(DualValue::Residue(r)) => Ok(*r),
                Some(_) => Err(CharError::KindMismatch(*c)),
            })
            .collect()
    }

    pub fn decode(&self, mut index: u64) -> Vec<u64> {
        self.moduli
            .iter()
            .map(|&q| {
                let r = index % q;
                index /= q;
                r
            })
            .collect()
    }

    pub fn encode(&self, v: &[u64]) -> u64 {
        v.iter().zip(&self.moduli).rev().fold(0, |acc, (r, q)| acc * q + r)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), q)| (x + y) % q).collect()
    }

    /// Numerator of `(x, y)` over the common denominator `lcm(n_i)`.
    pub fn pairing(&self, x: &[u64], y: &[u64]) -> u64 {
        let l = self.lcm as u128;
        let s = x
            .iter()
            .zip(y)
            .zip(&self.moduli)
            .map(|((a, b), q)| (*a as u128 * *b as u128 % *q as u128) * (l / *q as u128))
            .sum::<u128>();
        (s % l) as u64
    }

    /// Elements (as encoded indices, ascending) orthogonal to every vector
    /// in `set`. Pairing is symmetric, so this serves both directions.
    pub fn perp(&self, set: &[Vec<u64>]) -> Vec<u64> {
        (0..self.order)
            .into_par_iter()
            .filter(|&i| {
                let x = self.decode(i);
                set.iter().all(|y| self.pairing(&x, y) == 0)
            })
            .collect()
    }

    /// Subgroup generated by `gens`, as sorted encoded indices.
    pub fn span(&self, gens: &[Vec<u64>]) -> Vec<u64> {
        let mut seen = vec![false; self.order as usize];
        seen[0] = true;
        let mut frontier = vec![vec![0; self.rank()]];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                let i = self.encode(&y) as usize;
                if !seen[i] {
                    seen[i] = true;
                    frontier.push(y);
                }
            }
        }
        (0..self.order).filter(|i| seen[*i as usize]).collect()
    }

    fn element_order(&self, v: &[u64]) -> u64 {
        v.iter().zip(&self.moduli).fold(1u64, |acc, (r, q)| {
            let o = q / gcd(*r, *q);
            acc / gcd(acc, o) * o
        })
    }

    /// Canonical generating set of a subgroup given by its members: scan
    /// members by decreasing order, then sparsest first, then by first
    /// nonzero position, keeping each one not yet generated.
    pub fn generators(&self, members: &[u64]) -> Vec<Vec<u64>> {
        let mut sorted: Vec<Vec<u64>> = members.iter().map(|&i| self.decode(i)).collect();
        sorted.sort_by_key(|v| {
            let weight = v.iter().filter(|r| **r != 0).count();
            let first = v.iter().position(|r| *r != 0).unwrap_or(v.len());
            (std::cmp::Reverse(self.element_order(v)), weight, first, v.clone())
        });
        let target = members.len();
        let mut gens: Vec<Vec<u64>> = Vec::new();
        let mut covered: BTreeSet<u64> = [0].into_iter().collect();
        for v in sorted {
            if covered.len() == target {
                break;
            }
            if covered.contains(&self.encode(&v)) {
                continue;
            }
            gens.push(v);
            covered = self.span(&gens).into_iter().collect();
        }
        gens
    }
}

fn too_large(comps: &[Component], t: &Truncation) -> String {
    let mut order = BigInt::from(1);
    for (c, n) in comps.iter().zip(&t.copies) {
        if let Some(q) = c.kind.modulus() {
            order *= num_traits::pow(BigInt::from(q), *n as usize);
        }
    }
    order.to_string()
}

/// A subgroup of a truncation: its size and canonical generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub members: Vec<u64>,
    pub generators: Vec<Vec<u64>>,
}

impl Subgroup {
    pub fn order(&self) -> u64 {
        self.members.len() as u64
    }
}

/// Characters kept by the window test, at `S` and at `2S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdFinite {
    /// Dual vectors (encoded) trivial on every projected `d_n`, `n ∈ [N, N+S]`.
    pub kept: Vec<u64>,
    /// Same for `n ∈ [N, N+2S]`.
    pub kept_doubled: Vec<u64>,
    /// Distinct projected terms seen in `[N, N+2S]`.
    pub distinct_terms: usize,
}

impl SdFinite {
    pub fn stable(&self) -> bool {
        self.kept == self.kept_doubled
    }
}

/// Characters of the truncation that are trivial on all projected terms
/// `d_n`, `n ∈ [tail_start, tail_start + stabilization]`, with the check
/// repeated on the doubled window.
pub fn sd_finite(
    group: &FiniteGroup,
    recipe: &SequenceRecipe,
    tail_start: u64,
    stabilization: u64,
) -> Result<SdFinite, CharError> {
    let seq = Sequence::new(recipe.clone())?;
    if seq.ambient() != group.ambient() {
        return Err(CharError::SpecMismatch);
    }
    let end = tail_start
        .checked_add(stabilization.checked_mul(2).ok_or_else(|| CharError::Window("window overflows".into()))?)
        .ok_or_else(|| CharError::Window("window overflows".into()))?;
    let projected: Vec<(u64, Vec<u64>)> = (tail_start..=end)
        .into_par_iter()
        .map(|n| Ok((n, group.project(&seq.term(n)?)?)))
        .collect::<Result<_, CharError>>()?;
    let distinct = |hi: u64| -> Vec<Vec<u64>> {
        let set: BTreeSet<&Vec<u64>> = projected.iter().filter(|(n, _)| *n <= hi).map(|(_, v)| v).collect();
        set.into_iter().filter(|v| v.iter().any(|r| *r != 0)).cloned().collect()
    };
    let first = distinct(tail_start + stabilization);
    let all = distinct(end);
    Ok(SdFinite { kept: group.perp(&first), kept_doubled: group.perp(&all), distinct_terms: all.len() })
}

/// Elements of the truncation killed by every character in `chars`.
pub fn annihilator(group: &FiniteGroup, chars: &[Character]) -> Result<Subgroup, CharError> {
    let dual: Vec<Vec<u64>> = chars.iter().map(|c| group.dual_vector(c)).collect::<Result<_, _>>()?;
    let members = group.perp(&dual);
    let generators = group.generators(&members);
    Ok(Subgroup { members, generators })
}

/// The radical one expects to find.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expected {
    Whole,
    Trivial,
    /// The projected targets `e'_j` of a cyclic-sum recipe.
    Targets,
    /// Generators written as elements of the truncated spec.
    Generators {
        elements: Vec<String>,
    },
}

impl Expected {
    /// `whole`, `0`, `targets`, or generators separated by `;`.
    pub fn parse(text: &str) -> Expected {
        match text.trim() {
            "whole" | "G" => Expected::Whole,
            "0" | "trivial" => Expected::Trivial,
            "targets" | "H" => Expected::Targets,
            t => Expected::Generators { elements: t.split(';').map(|s| s.trim().to_string()).collect() },
        }
    }

    fn members(&self, group: &FiniteGroup, seq: &Sequence) -> Result<Vec<u64>, CharError> {
        let gens: Vec<Vec<u64>> = match self {
            Expected::Whole => return Ok((0..group.order()).collect()),
            Expected::Trivial => Vec::new(),
            Expected::Targets => {
                let layout = seq.lemma5()?;
                group
                    .coords
                    .iter()
                    .map(|c| {
                        let j = layout
                            .generator_index(*c)
                            .ok_or_else(|| CharError::Window(format!("{c:?} is not a cyclic-sum generator")))?;
                        group.project(&seq.target_element(j)?)
                    })
                    .collect::<Result<_, CharError>>()?
            }
            Expected::Generators { elements } => elements
                .iter()
                .map(|t| group.vector(&Element::parse(group.spec().clone(), t)?))
                .collect::<Result<_, _>>()?,
        };
        Ok(group.span(&gens))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadicalVerdict {
    Match,
    Mismatch,
}

/// Outcome of the finite radical pipeline, in a stable field order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicalReport {
    pub recipe: String,
    pub truncated_spec: String,
    pub truncation_order: u64,
    /// Number of terms examined: indices `0..prefix_length` at most.
    pub prefix_length: u64,
    pub tail_start: u64,
    pub stabilization: u64,
    pub stable: bool,
    pub kept_characters: u64,
    pub kept_generators: Vec<String>,
    pub annihilator_order: u64,
    pub annihilator_generators: Vec<String>,
    pub expected_order: u64,
    pub verdict: RadicalVerdict,
    /// A generator of one side missing from the other.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

/// `s_d` on the truncation, its annihilator, and the comparison with the
/// expected radical.
pub fn radical_report(
    recipe: &SequenceRecipe,
    truncation: &Truncation,
    tail_start: u64,
    stabilization: u64,
    expected: &Expected,
) -> Result<RadicalReport, CharError> {
    let seq = Sequence::new(recipe.clone())?;
    let group = FiniteGroup::new(seq.ambient().clone(), truncation)?;
    let sd = sd_finite(&group, recipe, tail_start, stabilization)?;
    let kept_gens = group.generators(&sd.kept);
    let dual: Vec<Vec<u64>> = sd.kept.iter().map(|&i| group.decode(i)).collect();
    let ann = group.perp(&dual);
    let ann_gens = group.generators(&ann);
    let want = expected.members(&group, &seq)?;

    let counterexample = if ann == want {
        None
    } else {
        let want_set: BTreeSet<u64> = want.iter().copied().collect();
        let ann_set: BTreeSet<u64> = ann.iter().copied().collect();
        ann_gens
            .iter()
            .find(|g| !want_set.contains(&group.encode(g)))
            .cloned()
            .or_else(|| group.generators(&want).into_iter().find(|g| !ann_set.contains(&group.encode(g))))
            .map(|g| group.element(&g).to_string())
    };
    let show = |gs: &[Vec<u64>]| gs.iter().map(|g| group.element(g).to_string()).collect::<Vec<_>>();
    let show_dual = |gs: &[Vec<u64>]| gs.iter().map(|g| group.character(g).to_string()).collect::<Vec<_>>();
    Ok(RadicalReport {
        recipe: recipe.tag().into(),
        truncated_spec: group.spec().to_string(),
        truncation_order: group.order(),
        prefix_length: tail_start + 2 * stabilization + 1,
        tail_start,
        stabilization,
        stable: sd.stable(),
        kept_characters: sd.kept.len() as u64,
        kept_generators: show_dual(&kept_gens),
        annihilator_order: ann.len() as u64,
        annihilator_generators: show(&ann_gens),
        expected_order: want.len() as u64,
        verdict: if counterexample.is_none() { RadicalVerdict::Match } else { RadicalVerdict::Mismatch },
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(t: &str) -> FiniteGroup {
        let spec = Arc::new(GroupSpec::parse(t).unwrap());
        let copies = spec.components().iter().map(|c| c.multiplicity.finite().unwrap()).collect();
        FiniteGroup::new(spec, &Truncation { copies }).unwrap()
    }

    #[test]
    fn duality_basics() {
        let g = group("Z(4) + Z(2)^2 + Z(3)");
        assert_eq!(g.order(), 48);
        let all: Vec<Vec<u64>> = (0..g.order()).map(|i| g.decode(i)).collect();
        assert_eq!(g.perp(&all), vec![0]);
        assert_eq!(g.perp(&[vec![0; 4]]).len(), 48);
        for i in 0..g.order() {
            assert_eq!(g.encode(&g.decode(i)), i);
        }
    }

    #[test]
    fn constant_sequence_keeps_half() {
        let spec = GroupSpec::parse("Z(2)^2").unwrap();
        let amb = Arc::new(spec.clone());
        let e0 = Element::parse(amb.clone(), "1*e(0,0)").unwrap();
        let r = SequenceRecipe::constant(spec, &e0, 0);
        let g = FiniteGroup::new(amb, &Truncation { copies: vec![2] }).unwrap();
        let sd = sd_finite(&g, &r, 0, 5).unwrap();
        assert_eq!(sd.kept.len(), 2);
        assert!(sd.kept.iter().all(|&i| g.decode(i)[0] == 0));
        assert!(sd.stable());
    }

    #[test]
    fn zero_sequence_keeps_everything() {
        let spec = GroupSpec::parse("Z(2)^2").unwrap();
        let amb = Arc::new(spec.clone());
        let r = SequenceRecipe::constant(spec, &Element::zero(amb.clone()), 0);
        let g = FiniteGroup::new(amb, &Truncation { copies: vec![2] }).unwrap();
        assert_eq!(sd_finite(&g, &r, 0, 3).unwrap().kept.len(), 4);
        let rep = radical_report(&r, &Truncation { copies: vec![2] }, 0, 3, &Expected::Trivial).unwrap();
        assert_eq!(rep.verdict, RadicalVerdict::Match);
        assert_eq!(rep.annihilator_order, 1);
    }

    #[test]
    fn generators_are_canonical() {
        let g = group("Z(4)^3");
        let members = g.span(&[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]);
        assert_eq!(members.len(), 8);
        assert_eq!(g.generators(&members), vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]);
    }

    #[test]
    fn oversized_truncation_refused() {
        let spec = Arc::new(GroupSpec::parse("Z(4)^w").unwrap());
        let t = Truncation::leading(&spec, 9);
        assert!(matches!(FiniteGroup::new(spec, &t), Err(CharError::TooLarge { limit: 65536, .. })));
    }

    #[test]
    fn infinite_summand_refused() {
        let spec = Arc::new(GroupSpec::parse("Z + Z(2)").unwrap());
        assert!(matches!(FiniteGroup::new(spec, &Truncation { copies: vec![1, 1] }), Err(CharError::NotFinite(_))));
    }
}
