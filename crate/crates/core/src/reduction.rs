//! Case dispatch: pick a subgroup `Y ⊇ H` of `G` and the sequence
//! constructions whose radical on `Y` is `H`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::group::{Cardinality, Component, ComponentKind, GroupSpec, PruferValue};
use crate::invariants::{nr_membership_bounded, DecisionError, UlmProfile};
use crate::tseq::{Lemma5Params, Lemma5Variant, OrderTail, OrderTarget, Sequence, SequenceRecipe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "Case1-PruferSummand")]
    Case1PruferSummand,
    #[serde(rename = "Case2-UnboundedNoInfHeight")]
    Case2UnboundedNoInfHeight,
    #[serde(rename = "Case3-InfiniteOrderElement")]
    Case3InfiniteOrderElement,
    #[serde(rename = "Case4-BoundedWithPrufer")]
    Case4BoundedWithPrufer,
    #[serde(rename = "Case5a-UnboundedHeights")]
    Case5aUnboundedHeights,
    #[serde(rename = "Case5b-BoundedHeights")]
    Case5bBoundedHeights,
    #[serde(rename = "T2-Case1")]
    T2Case1,
    #[serde(rename = "T2-Case2a")]
    T2Case2a,
    #[serde(rename = "T2-Case2b")]
    T2Case2b,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::Case1PruferSummand => "Case1-PruferSummand",
            CaseTag::Case2UnboundedNoInfHeight => "Case2-UnboundedNoInfHeight",
            CaseTag::Case3InfiniteOrderElement => "Case3-InfiniteOrderElement",
            CaseTag::Case4BoundedWithPrufer => "Case4-BoundedWithPrufer",
            CaseTag::Case5aUnboundedHeights => "Case5a-UnboundedHeights",
            CaseTag::Case5bBoundedHeights => "Case5b-BoundedHeights",
            CaseTag::T2Case1 => "T2-Case1",
            CaseTag::T2Case2a => "T2-Case2a",
            CaseTag::T2Case2b => "T2-Case2b",
        };
        f.write_str(s)
    }
}

/// Which construction a slot uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecipeId {
    /// ℤ ⊕ H with `ε_n = 0` at `ν_k`.
    Lemma2ZeroAtNu,
    Lemma3,
    Lemma4,
    /// Cyclic sum with eventually constant orders.
    Lemma5a,
    /// Cyclic sum with unbounded orders.
    Lemma5b,
}

/// Embedding data that the structural descriptions of G and H do not
/// carry. Unbounded reduced groups cannot be written in the spec grammar,
/// so their presence is signalled here.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReductionFlags {
    /// H also contains an unbounded reduced p-group `⊕ ℤ(p^{u_j})`,
    /// `sup u_j = ∞`, besides its listed summands.
    pub h_unbounded_reduced: Option<u64>,
    /// G also contains an unbounded reduced p-group.
    pub g_unbounded_reduced: Option<u64>,
    /// `ℤ(p^∞) ∩ H = ℤ(p^k)` for the ℤ(p^∞) summand of G; `None` means zero.
    pub prufer_meets_h: Option<u32>,
    /// The heights of the generators of H in G are unbounded.
    pub heights_unbounded: bool,
    /// Per prime, the exponent `a_{i0}` of an ω-summand of H whose
    /// generators all have height `≥ a_n − a_{i0}` in G.
    pub tall_exponents: BTreeMap<u64, u32>,
}

/// One construction inside the chosen subgroup `Y`; `Y` is the direct sum
/// of the slot ambients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeSlot {
    pub prime: Option<u64>,
    pub tag: CaseTag,
    pub recipe_id: RecipeId,
    /// Ambient group of the recipe, or the part of H it must cover when no
    /// recipe can be built from the available data.
    pub ambient: GroupSpec,
    pub recipe: Option<SequenceRecipe>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCase {
    pub tag: CaseTag,
    pub slots: Vec<RecipeSlot>,
    /// `Y` when every slot carries a recipe.
    pub ambient: Option<GroupSpec>,
    pub note: String,
}

fn spec_of(components: Vec<Component>) -> GroupSpec {
    if components.is_empty() {
        GroupSpec::trivial()
    } else {
        GroupSpec::new(components).expect("components taken from a valid spec")
    }
}

/// `spec` with one copy of `kind` removed.
fn remove_one(spec: &GroupSpec, kind: ComponentKind) -> Option<GroupSpec> {
    let mut out = Vec::new();
    let mut removed = false;
    for c in spec.components() {
        if !removed && c.kind == kind {
            removed = true;
            match c.multiplicity {
                Cardinality::Finite(1) => continue,
                Cardinality::Finite(n) => {
                    out.push(Component { kind: c.kind, multiplicity: Cardinality::Finite(n - 1) });
                    continue;
                }
                _ => {}
            }
        }
        out.push(*c);
    }
    removed.then(|| spec_of(out))
}

fn slot(prime: Option<u64>, tag: CaseTag, id: RecipeId, recipe: SequenceRecipe) -> Result<RecipeSlot, DecisionError> {
    let seq = Sequence::new(recipe.clone()).map_err(|e| DecisionError::InconsistentFlags(e.to_string()))?;
    Ok(RecipeSlot { prime, tag, recipe_id: id, ambient: (**seq.ambient()).clone(), recipe: Some(recipe) })
}

/// Splits the cyclic summands of `h` into a finite list of orders (one per
/// copy) and the ω-multiplicity summands.
fn split_cyclic(h: &GroupSpec) -> (Vec<u64>, Vec<u64>) {
    let mut finite = Vec::new();
    let mut infinite = Vec::new();
    for c in h.components() {
        let Some(order) = c.kind.modulus() else { continue };
        match c.multiplicity.finite() {
            Some(n) => finite.extend(std::iter::repeat_n(order, n as usize)),
            None => infinite.push(order),
        }
    }
    (finite, infinite)
}

/// `ℤ(u)^(ω)` with a MinAP cyclic-sum recipe.
fn minap_slots(prime: Option<u64>, tag: CaseTag, orders: &[u64]) -> Result<Vec<RecipeSlot>, DecisionError> {
    orders.iter().map(|&u| slot(prime, tag, RecipeId::Lemma5a, SequenceRecipe::lemma5_uniform(u, 1))).collect()
}

fn lemma5(prefix: &[u64], prefix_target: u64, tail: OrderTail, variant: Lemma5Variant) -> SequenceRecipe {
    SequenceRecipe::Lemma5(Lemma5Params {
        prefix: prefix.iter().map(|&order| OrderTarget { order, target: prefix_target }).collect(),
        tail,
        variant,
        d5: Default::default(),
    })
}

fn finish(tag: CaseTag, slots: Vec<RecipeSlot>, note: String) -> ReductionCase {
    let ambient = slots.iter().try_fold(GroupSpec::trivial(), |acc, s| {
        s.recipe.as_ref().map(|_| if acc.is_trivial() { s.ambient.clone() } else { acc.direct_sum(&s.ambient) })
    });
    ReductionCase { tag, slots, ambient, note }
}

/// First applicable case for `H ≤ G`. Unbounded or mixed G go through
/// cases 1 to 5; bounded G split on the leading invariant of H.
pub fn classify_reduction(
    g: &GroupSpec,
    h: &GroupSpec,
    flags: &ReductionFlags,
) -> Result<ReductionCase, DecisionError> {
    if h.has_integer() {
        return Err(DecisionError::NotTorsion);
    }
    if h.components().iter().any(|c| c.multiplicity == Cardinality::SymbolicInfinite) {
        return Err(DecisionError::Uncountable);
    }
    for p in [flags.h_unbounded_reduced, flags.g_unbounded_reduced].into_iter().flatten() {
        if !crate::group::is_prime(p) {
            return Err(DecisionError::InconsistentFlags(format!("{p} is not prime")));
        }
    }
    if flags.heights_unbounded && flags.g_unbounded_reduced.is_none() {
        return Err(DecisionError::InconsistentFlags("height data only applies to unbounded reduced G".into()));
    }

    // (1) H has a ℤ(p^∞) summand: Y = H.
    if let Some(p) = h.components().iter().find_map(|c| match c.kind {
        ComponentKind::Prufer { p } => Some(p),
        _ => None,
    }) {
        let h1 = remove_one(h, ComponentKind::Prufer { p }).expect("summand present");
        let tag = CaseTag::Case1PruferSummand;
        let s = slot(Some(p), tag, RecipeId::Lemma3, SequenceRecipe::lemma3(p, h1))?;
        return Ok(finish(tag, vec![s], format!("Y = H = Z({p}^inf) + H1")));
    }

    // (2) H unbounded and reduced: cyclic sum with a ladder of orders.
    if let Some(p) = flags.h_unbounded_reduced {
        let tag = CaseTag::Case2UnboundedNoInfHeight;
        let (finite, infinite) = split_cyclic(h);
        let mut slots = vec![slot(
            Some(p),
            tag,
            RecipeId::Lemma5b,
            lemma5(&finite, 1, OrderTail::Ladder { p, target: 1 }, Lemma5Variant::B),
        )?];
        slots.extend(minap_slots(Some(p), tag, &infinite)?);
        return Ok(finish(tag, slots, format!("Y = H; unbounded {p}-part realized as a ladder of orders {p}^j")));
    }

    // (3) H bounded, G has an element of infinite order; it meets the
    // torsion group H trivially.
    if g.has_integer() {
        let tag = CaseTag::Case3InfiniteOrderElement;
        let mut recipe = SequenceRecipe::lemma2(2, h.clone());
        if let SequenceRecipe::Lemma2(r) = &mut recipe {
            r.epsilon = crate::tseq::EpsilonRule::ZeroAtNu;
        }
        let s = slot(None, tag, RecipeId::Lemma2ZeroAtNu, recipe)?;
        return Ok(finish(tag, vec![s], "Y = Z + H".into()));
    }

    // (4) H bounded, G has a ℤ(p^∞) summand.
    if let Some(p) = g.components().iter().find_map(|c| match c.kind {
        ComponentKind::Prufer { p } => Some(p),
        _ => None,
    }) {
        let tag = CaseTag::Case4BoundedWithPrufer;
        let (e0, h1, note) = match flags.prufer_meets_h {
            None => (PruferValue::zero(p), h.clone(), format!("Y = Z({p}^inf) + H")),
            Some(k) => {
                let h1 = remove_one(h, ComponentKind::Cyclic { p, a: k }).ok_or_else(|| {
                    DecisionError::InconsistentFlags(format!("H has no Z({p}^{k}) summand to share with Z({p}^inf)"))
                })?;
                (
                    PruferValue::unit_fraction(p, k),
                    h1,
                    format!("H = Z({p}^{k}) + H1 with Z({p}^{k}) inside Z({p}^inf); Y = Z({p}^inf) + H1"),
                )
            }
        };
        let s = slot(Some(p), tag, RecipeId::Lemma4, SequenceRecipe::lemma4(p, e0, h1))?;
        return Ok(finish(tag, vec![s], note));
    }
    if flags.prufer_meets_h.is_some() {
        return Err(DecisionError::InconsistentFlags("G has no Z(p^inf) summand".into()));
    }

    // (5) H bounded, G unbounded reduced.
    if let Some(p) = flags.g_unbounded_reduced {
        let (finite, infinite) = split_cyclic(h);
        if flags.heights_unbounded {
            let tag = CaseTag::Case5aUnboundedHeights;
            let s = RecipeSlot { prime: Some(p), tag, recipe_id: RecipeId::Lemma5b, ambient: h.clone(), recipe: None };
            return Ok(finish(
                tag,
                vec![s],
                "Y is generated by the roots e_j with p^{b_j} e_j = e'_j; the heights b_j are needed to build it"
                    .into(),
            ));
        }
        let tag = CaseTag::Case5bBoundedHeights;
        let mut slots = vec![slot(
            Some(p),
            tag,
            RecipeId::Lemma5b,
            lemma5(&finite, 1, OrderTail::Ladder { p, target: 0 }, Lemma5Variant::B),
        )?];
        slots.extend(minap_slots(Some(p), tag, &infinite)?);
        return Ok(finish(
            tag,
            slots,
            format!("Y = H + (independent elements of {p}-power orders tending to infinity)"),
        ));
    }

    bounded_case(g, h, flags)
}

fn bounded_case(g: &GroupSpec, h: &GroupSpec, flags: &ReductionFlags) -> Result<ReductionCase, DecisionError> {
    let decision = nr_membership_bounded(g, h)?;
    if let Some(cert) = decision.certificate {
        return Err(DecisionError::NotRealizable(Box::new(cert)));
    }
    let hp = UlmProfile::of(h)?;
    for p in flags.tall_exponents.keys() {
        if !hp.primes.contains_key(p) {
            return Err(DecisionError::InconsistentFlags(format!("H has no {p}-part")));
        }
    }

    if h.is_trivial() {
        // any ω-summand of G with e'_j = 0
        let order = g
            .components()
            .iter()
            .find(|c| c.multiplicity.is_infinite())
            .and_then(|c| c.kind.modulus())
            .expect("infinite bounded G has an ω-summand");
        let tag = CaseTag::T2Case2a;
        let s = slot(None, tag, RecipeId::Lemma5a, SequenceRecipe::lemma5_uniform(order, 0))?;
        return Ok(finish(tag, vec![s], format!("H = 0; Y = Z({order})^w with e'_j = 0")));
    }

    let mut slots = Vec::new();
    let mut notes = Vec::new();
    for (&p, parts) in &hp.primes {
        let &(a_n, k_n) = parts.last().expect("nonempty prime part");
        let top = p.pow(a_n);
        let finite: Vec<u64> = parts
            .iter()
            .filter_map(|(a, k)| k.finite().map(|k| std::iter::repeat_n(p.pow(*a), k as usize)))
            .flatten()
            .collect();
        let q = finite.len() as u64;
        let infinite: Vec<(u32, u64)> =
            parts.iter().filter(|(_, k)| k.is_infinite()).map(|(a, _)| (*a, p.pow(*a))).collect();

        if k_n.is_infinite() {
            let tag = CaseTag::T2Case1;
            let first = lemma5(&finite, 1, OrderTail::Constant { order: top, target: 1 }, Lemma5Variant::A { j0: q });
            slots.push(slot(Some(p), tag, RecipeId::Lemma5a, first)?);
            let rest: Vec<u64> = infinite.iter().filter(|(a, _)| *a != a_n).map(|(_, u)| *u).collect();
            slots.extend(minap_slots(Some(p), tag, &rest)?);
            notes.push(format!("p = {p}: Y_p = H_p, a finite sum of MinAP cyclic sums"));
            continue;
        }

        let (tag, target, skip) = match flags.tall_exponents.get(&p) {
            None => (CaseTag::T2Case2a, 0, None),
            Some(&a0) => {
                if a0 >= a_n || !infinite.iter().any(|(a, _)| *a == a0) {
                    return Err(DecisionError::InconsistentFlags(format!(
                        "{p}^{a0} must be the exponent of an ω-summand of H below {p}^{a_n}"
                    )));
                }
                (CaseTag::T2Case2b, p.pow(a_n - a0), Some(a0))
            }
        };
        let first = lemma5(&finite, 1, OrderTail::Constant { order: top, target }, Lemma5Variant::A { j0: q });
        slots.push(slot(Some(p), tag, RecipeId::Lemma5a, first)?);
        let rest: Vec<u64> = infinite.iter().filter(|(a, _)| Some(*a) != skip).map(|(_, u)| *u).collect();
        slots.extend(minap_slots(Some(p), tag, &rest)?);
        notes.push(match skip {
            None => format!("p = {p}: finite summands of H plus Z({top})^w from G with e'_m = 0"),
            Some(a0) => format!("p = {p}: Z({p}^{a0})^w of H sits as {target}·Z({top})^w"),
        });
    }
    let tag = slots.first().map(|s| s.tag).expect("H is nontrivial");
    Ok(finish(tag, slots, notes.join("; ")))
}
