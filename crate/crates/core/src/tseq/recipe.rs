//! Sequence recipes and the term generator `n ↦ d_n`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{exp_index, f, f_tilde, t_of, triangular, EnumeratedH, HEnumeration, JRule, RecipeError};
use crate::group::text::parse_value;
use crate::group::{
    is_prime, pow_p, Cardinality, Component, ComponentKind, ComponentValue, Coordinate, Element, GroupSpec, PruferValue,
};

/// Choice of `ε_n` in the ℤ ⊕ H construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonRule {
    /// `ε_n = 1` for every `n`.
    #[default]
    AllOnes,
    /// `ε_n = 0` exactly at the indices `ν_k`, `1` elsewhere.
    ZeroAtNu,
}

/// What `e_0` means when the H-index residue is 0 in the ℤ ⊕ H construction,
/// where `e_0` already names the generator of ℤ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ResidueZero {
    /// Use the zero element of H.
    #[default]
    ZeroElement,
    /// Use the generator of ℤ.
    IntegerGenerator,
    /// Treat the term as unavailable.
    Reject,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Params {
    pub p: u64,
    pub h: GroupSpec,
    #[serde(default)]
    pub enumeration: HEnumeration,
    #[serde(default)]
    pub epsilon: EpsilonRule,
    #[serde(default)]
    pub residue_zero: ResidueZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma3Params {
    pub p: u64,
    pub h: GroupSpec,
    #[serde(default)]
    pub enumeration: HEnumeration,
    #[serde(default)]
    pub j_rule: JRule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma4Params {
    pub p: u64,
    /// Element of ℤ(p^∞) in the form `c/p^t`, or `0`.
    #[serde(default = "zero_text")]
    pub e0: String,
    pub h: GroupSpec,
    #[serde(default)]
    pub enumeration: HEnumeration,
}

fn zero_text() -> String {
    "0".into()
}

/// Order `u_j` of `e_j` and the multiplier `c_j` with `e'_j = c_j·e_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderTarget {
    pub order: u64,
    pub target: u64,
}

/// Orders and targets past the explicit prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tail", rename_all = "snake_case")]
pub enum OrderTail {
    /// `u_j = order` from the prefix end on.
    Constant { order: u64, target: u64 },
    /// `u_j = p^{j−L+1}` where `L` is the prefix length, realized inside ℤ(p^∞).
    Ladder { p: u64, target: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Lemma5Variant {
    /// Eventually constant orders from `j0` on; `b_k = e_k`.
    A { j0: u64 },
    /// Unbounded orders; `b_k = e_{L+k}` along the ladder.
    B,
}

/// Which `d_5` to emit: the explicitly listed `e'_1 + b_2 + b_3`, or the
/// general odd formula at `n = 2`, giving `e'_0 + b_2 + b_3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum D5Rule {
    #[default]
    Explicit,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma5Params {
    #[serde(default)]
    pub prefix: Vec<OrderTarget>,
    pub tail: OrderTail,
    pub variant: Lemma5Variant,
    #[serde(default)]
    pub d5: D5Rule,
}

/// Test fixture `d_n = value` for every `n ≥ first`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantParams {
    pub ambient: GroupSpec,
    pub value: String,
    #[serde(default)]
    pub first: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "lemma", rename_all = "snake_case")]
pub enum SequenceRecipe {
    Lemma2(Lemma2Params),
    Lemma3(Lemma3Params),
    Lemma4(Lemma4Params),
    Lemma5(Lemma5Params),
    Constant(ConstantParams),
}

impl SequenceRecipe {
    /// ℤ ⊕ H construction with default enumeration and `ε_n = 1`.
    pub fn lemma2(p: u64, h: GroupSpec) -> Self {
        SequenceRecipe::Lemma2(Lemma2Params {
            p,
            h,
            enumeration: HEnumeration::Default,
            epsilon: EpsilonRule::AllOnes,
            residue_zero: ResidueZero::ZeroElement,
        })
    }

    /// ℤ(p^∞) ⊕ H construction with `β_n` built from `j_i = i`.
    pub fn lemma3(p: u64, h: GroupSpec) -> Self {
        SequenceRecipe::Lemma3(Lemma3Params { p, h, enumeration: HEnumeration::Default, j_rule: JRule::Identity })
    }

    pub fn lemma4(p: u64, e0: PruferValue, h: GroupSpec) -> Self {
        SequenceRecipe::Lemma4(Lemma4Params { p, e0: e0.to_string(), h, enumeration: HEnumeration::Default })
    }

    /// All `u_j = order`, `e'_j = target·e_j`, variant a with `j0 = 0`.
    pub fn lemma5_uniform(order: u64, target: u64) -> Self {
        SequenceRecipe::Lemma5(Lemma5Params {
            prefix: Vec::new(),
            tail: OrderTail::Constant { order, target },
            variant: Lemma5Variant::A { j0: 0 },
            d5: D5Rule::Explicit,
        })
    }

    pub fn constant(ambient: GroupSpec, value: &Element, first: u64) -> Self {
        SequenceRecipe::Constant(ConstantParams { ambient, value: value.to_string(), first })
    }

    /// Short tag naming the construction.
    pub fn tag(&self) -> &'static str {
        match self {
            SequenceRecipe::Lemma2(_) => "lemma2",
            SequenceRecipe::Lemma3(_) => "lemma3",
            SequenceRecipe::Lemma4(_) => "lemma4",
            SequenceRecipe::Lemma5(_) => "lemma5",
            SequenceRecipe::Constant(_) => "constant",
        }
    }
}

fn prime_power(u: u64) -> Option<(u64, u32)> {
    if u < 2 {
        return None;
    }
    let p = (2..=u).find(|d| u.is_multiple_of(*d) && is_prime(*d))?;
    let mut a = 0;
    let mut v = u;
    while v.is_multiple_of(p) {
        v /= p;
        a += 1;
    }
    (v == 1).then_some((p, a))
}

fn check_prime(p: u64) -> Result<(), RecipeError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(RecipeError::Invalid(format!("{p} is not prime")))
    }
}

/// Ambient `K ⊕ H` with `K` a single leading summand.
fn lead_plus(kind: ComponentKind, h: &GroupSpec) -> Result<Arc<GroupSpec>, RecipeError> {
    let lead = GroupSpec::new(vec![Component { kind, multiplicity: Cardinality::Finite(1) }])?;
    Ok(Arc::new(lead.direct_sum(h)))
}

const LEAD: Coordinate = Coordinate { component: 0, copy: 0 };

#[derive(Debug, Clone)]
struct HPart {
    listing: EnumeratedH,
    order: Option<u64>,
}

impl HPart {
    fn new(h: &GroupSpec, start: u64, config: &HEnumeration) -> Result<Self, RecipeError> {
        let spec = Arc::new(h.clone());
        let listing = EnumeratedH::from_config(spec, start, config)?;
        let order = if h.is_finite() { listing.len().map(|n| n + 1) } else { None };
        Ok(HPart { listing, order })
    }

    /// `n mod S_{t(n)}` for infinite H, `n mod modulus` otherwise.
    fn residue(&self, n: u64, finite_modulus: u64) -> Result<u64, RecipeError> {
        match self.order {
            Some(_) => Ok(n % finite_modulus),
            None => Ok(n % triangular(t_of(n)?)),
        }
    }

    /// `e_index` moved into the ambient group, H sitting after one summand.
    fn embedded(&self, ambient: &Arc<GroupSpec>, index: u64) -> Result<Element, RecipeError> {
        let e = self.listing.get(index)?;
        Ok(e.relabel(ambient.clone(), |c| Some(Coordinate::new(c.component + 1, c.copy)))?)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Lemma5Layout {
    prefix: Vec<OrderTarget>,
    prefix_coords: Vec<Coordinate>,
    coord_index: HashMap<Coordinate, u64>,
    tail: OrderTail,
    tail_component: usize,
    variant: Lemma5Variant,
    d5: D5Rule,
}

impl Lemma5Layout {
    fn build(params: &Lemma5Params) -> Result<(Self, Arc<GroupSpec>), RecipeError> {
        let mut components: Vec<Component> = Vec::new();
        let mut prefix_coords = Vec::new();
        for (j, ot) in params.prefix.iter().enumerate() {
            let (p, a) = prime_power(ot.order)
                .ok_or_else(|| RecipeError::Invalid(format!("order u_{j} = {} is not a prime power", ot.order)))?;
            let kind = ComponentKind::Cyclic { p, a };
            let last = components.len().wrapping_sub(1);
            match components.last_mut() {
                Some(c) if c.kind == kind => {
                    let n = c.multiplicity.finite().unwrap();
                    prefix_coords.push(Coordinate::new(last, n));
                    c.multiplicity = Cardinality::Finite(n + 1);
                }
                _ => {
                    prefix_coords.push(Coordinate::new(components.len(), 0));
                    components.push(Component { kind, multiplicity: Cardinality::Finite(1) });
                }
            }
        }
        let tail_kind = match params.tail {
            OrderTail::Constant { order, .. } => {
                let (p, a) = prime_power(order)
                    .ok_or_else(|| RecipeError::Invalid(format!("tail order {order} is not a prime power")))?;
                ComponentKind::Cyclic { p, a }
            }
            OrderTail::Ladder { p, .. } => {
                check_prime(p)?;
                ComponentKind::Prufer { p }
            }
        };
        let tail_component = components.len();
        components.push(Component { kind: tail_kind, multiplicity: Cardinality::CountableInfinite });
        let spec = Arc::new(GroupSpec::new(components)?);

        match (params.variant, params.tail) {
            (Lemma5Variant::A { j0 }, OrderTail::Constant { order, .. }) => {
                for (j, ot) in params.prefix.iter().enumerate() {
                    let j = j as u64;
                    if j >= j0 && ot.order != order {
                        return Err(RecipeError::Invalid(format!(
                            "variant a needs u_j = {order} for j ≥ {j0}, but u_{j} = {}",
                            ot.order
                        )));
                    }
                    if j < j0 && order % ot.order != 0 {
                        return Err(RecipeError::Invalid(format!("u_{j} = {} does not divide {order}", ot.order)));
                    }
                }
            }
            (Lemma5Variant::A { .. }, OrderTail::Ladder { .. }) => {
                return Err(RecipeError::Invalid("variant a needs eventually constant orders".into()))
            }
            (Lemma5Variant::B, OrderTail::Constant { .. }) => {
                return Err(RecipeError::Invalid("variant b needs unbounded orders (a ladder tail)".into()))
            }
            (Lemma5Variant::B, OrderTail::Ladder { .. }) => {}
        }
        let coord_index = prefix_coords.iter().enumerate().map(|(j, c)| (*c, j as u64)).collect();
        Ok((
            Lemma5Layout {
                prefix: params.prefix.clone(),
                prefix_coords,
                coord_index,
                tail: params.tail,
                tail_component,
                variant: params.variant,
                d5: params.d5,
            },
            spec,
        ))
    }

    fn prefix_len(&self) -> u64 {
        self.prefix.len() as u64
    }

    /// `u_j`, saturating for very deep ladder indices.
    fn order(&self, j: u64) -> u64 {
        if let Some(ot) = self.prefix.get(j as usize) {
            return ot.order;
        }
        match self.tail {
            OrderTail::Constant { order, .. } => order,
            OrderTail::Ladder { p, .. } => {
                let e = (j - self.prefix_len() + 1).min(u32::MAX as u64) as u32;
                p.checked_pow(e).unwrap_or(u64::MAX)
            }
        }
    }

    fn target(&self, j: u64) -> u64 {
        match self.prefix.get(j as usize) {
            Some(ot) => ot.target,
            None => match self.tail {
                OrderTail::Constant { target, .. } | OrderTail::Ladder { target, .. } => target,
            },
        }
    }

    fn coord(&self, j: u64) -> Coordinate {
        match self.prefix_coords.get(j as usize) {
            Some(c) => *c,
            None => Coordinate::new(self.tail_component, j - self.prefix_len()),
        }
    }

    /// Index `j` of the generator living at `coord`.
    fn index_of(&self, coord: Coordinate) -> Option<u64> {
        if coord.component == self.tail_component {
            Some(self.prefix_len() + coord.copy)
        } else {
            self.coord_index.get(&coord).copied()
        }
    }

    /// `(coordinate, value)` of `c·e_j`.
    fn multiple(&self, j: u64, c: u64) -> Result<(Coordinate, ComponentValue), RecipeError> {
        let coord = self.coord(j);
        let value = match self.tail {
            OrderTail::Ladder { p, .. } if j >= self.prefix_len() => {
                let e = u32::try_from(j - self.prefix_len() + 1)
                    .map_err(|_| RecipeError::Invalid("ladder index too large".into()))?;
                ComponentValue::Prufer(PruferValue::new(p, BigInt::from(c), e))
            }
            _ => ComponentValue::Residue(c % self.order(j)),
        };
        Ok((coord, value))
    }

    fn b_index(&self, k: u64) -> u64 {
        match self.variant {
            Lemma5Variant::A { .. } => k,
            Lemma5Variant::B => self.prefix_len() + k,
        }
    }

    fn even(&self, n: u64) -> Result<(Coordinate, ComponentValue), RecipeError> {
        let mut cum = 0u64;
        let mut j = 0u64;
        while j < self.prefix_len() {
            let span = self.order(j) - 1;
            if n < cum + span {
                return self.multiple(j, n - cum + 1);
            }
            cum += span;
            j += 1;
        }
        if let OrderTail::Constant { order, .. } = self.tail {
            let span = order - 1;
            let r = n - cum;
            return self.multiple(j + r / span, r % span + 1);
        }
        loop {
            let span = self.order(j).saturating_sub(1);
            if n < cum.saturating_add(span) {
                return self.multiple(j, n - cum + 1);
            }
            cum += span;
            j += 1;
        }
    }

    fn odd(&self, n: u64) -> Result<Vec<(Coordinate, ComponentValue)>, RecipeError> {
        let (e_index, b_range) = match n {
            0 => (0, 1..1),
            1 => (0, 1..2),
            2 => (if self.d5 == D5Rule::Explicit { 1 } else { 0 }, 2..4),
            _ => (n % triangular(t_of(n)?), triangular(n - 1) + 1..triangular(n) + 1),
        };
        let mut terms = vec![self.multiple(e_index, self.target(e_index))?];
        for k in b_range {
            terms.push(self.multiple(self.b_index(k), 1)?);
        }
        Ok(terms)
    }
}

#[derive(Debug, Clone)]
enum Built {
    Lemma2 { p: u64, h: HPart, epsilon: EpsilonRule, residue_zero: ResidueZero },
    Lemma3 { p: u64, h: HPart, j_rule: JRule },
    Lemma4 { p: u64, e0: PruferValue, h: HPart },
    Lemma5(Lemma5Layout),
    Constant { value: Element, first: u64 },
}

/// A validated recipe ready to produce terms.
#[derive(Debug, Clone)]
pub struct Sequence {
    recipe: SequenceRecipe,
    ambient: Arc<GroupSpec>,
    built: Built,
}

impl Sequence {
    pub fn new(recipe: SequenceRecipe) -> Result<Self, RecipeError> {
        let (ambient, built) = match &recipe {
            SequenceRecipe::Lemma2(r) => {
                check_prime(r.p)?;
                let h = HPart::new(&r.h, 1, &r.enumeration)?;
                (
                    lead_plus(ComponentKind::IntegerZ, &r.h)?,
                    Built::Lemma2 { p: r.p, h, epsilon: r.epsilon, residue_zero: r.residue_zero },
                )
            }
            SequenceRecipe::Lemma3(r) => {
                check_prime(r.p)?;
                r.j_rule.validate()?;
                let h = HPart::new(&r.h, 0, &r.enumeration)?;
                (
                    lead_plus(ComponentKind::Prufer { p: r.p }, &r.h)?,
                    Built::Lemma3 { p: r.p, h, j_rule: r.j_rule.clone() },
                )
            }
            SequenceRecipe::Lemma4(r) => {
                check_prime(r.p)?;
                let e0 = match parse_value(ComponentKind::Prufer { p: r.p }, r.e0.trim(), 0)
                    .map_err(crate::group::GroupError::from)?
                {
                    ComponentValue::Prufer(v) => v,
                    _ => unreachable!("Prufer kind parses to a Prufer value"),
                };
                let h = HPart::new(&r.h, 1, &r.enumeration)?;
                (lead_plus(ComponentKind::Prufer { p: r.p }, &r.h)?, Built::Lemma4 { p: r.p, e0, h })
            }
            SequenceRecipe::Lemma5(r) => {
                let (layout, spec) = Lemma5Layout::build(r)?;
                (spec, Built::Lemma5(layout))
            }
            SequenceRecipe::Constant(r) => {
                let spec = Arc::new(r.ambient.clone());
                let value = Element::parse(spec.clone(), &r.value)?;
                (spec, Built::Constant { value, first: r.first })
            }
        };
        Ok(Sequence { recipe, ambient, built })
    }

    pub fn recipe(&self) -> &SequenceRecipe {
        &self.recipe
    }

    /// The group the terms live in.
    pub fn ambient(&self) -> &Arc<GroupSpec> {
        &self.ambient
    }

    /// Smallest index with a defined term.
    pub fn first_index(&self) -> u64 {
        match &self.built {
            Built::Lemma2 { .. } | Built::Lemma4 { .. } => 5,
            Built::Lemma3 { .. } => 9,
            Built::Lemma5(_) => 0,
            Built::Constant { first, .. } => *first,
        }
    }

    /// `d_n`.
    pub fn term(&self, n: u64) -> Result<Element, RecipeError> {
        let first = self.first_index();
        if n < first {
            return Err(RecipeError::OutOfRange { index: n, first });
        }
        let amb = &self.ambient;
        match &self.built {
            Built::Lemma2 { p, h, epsilon, residue_zero } => {
                let i = n.div_ceil(2);
                if n.is_multiple_of(2) {
                    let v = BigInt::from(pow_p(*p, exp_index(i)?));
                    return Ok(Element::single(amb.clone(), LEAD, ComponentValue::Integer(v))?);
                }
                let mut coeff = BigInt::from(f(*p, exp_index(i)?));
                let nu = match h.order {
                    Some(order) => i.is_multiple_of(order),
                    None => triangular(t_of(i)?) == i,
                };
                let eps = !(*epsilon == EpsilonRule::ZeroAtNu && nu);
                let mut tail = Element::zero(amb.clone());
                if eps {
                    let r = h.residue(i, h.order.unwrap_or(1))?;
                    if r == 0 {
                        match residue_zero {
                            ResidueZero::ZeroElement => {}
                            ResidueZero::IntegerGenerator => coeff += 1,
                            ResidueZero::Reject => return Err(RecipeError::EnumerationUnavailable(0)),
                        }
                    } else {
                        tail = h.embedded(amb, r)?;
                    }
                }
                let lead = Element::single(amb.clone(), LEAD, ComponentValue::Integer(coeff))?;
                Ok(lead.add(&tail)?)
            }
            Built::Lemma3 { p, h, j_rule } => {
                let i = n / 3;
                let value = match n % 3 {
                    0 => PruferValue::unit_fraction(*p, exp_index(i)?),
                    1 => {
                        let v = f_tilde(*p, exp_index(2 * j_rule.j(i)? + 1)?);
                        let lead = Element::single(amb.clone(), LEAD, ComponentValue::Prufer(v))?;
                        if h.order == Some(1) {
                            // H = 0 has no elements to cycle through
                            return Ok(lead);
                        }
                        let r = h.residue(i, h.order.map_or(1, |o| o - 1))?;
                        return Ok(lead.add(&h.embedded(amb, r)?)?);
                    }
                    _ => super::beta_prefix(*p, j_rule, i)?,
                };
                Ok(Element::single(amb.clone(), LEAD, ComponentValue::Prufer(value))?)
            }
            Built::Lemma4 { p, e0, h } => {
                let i = n.div_ceil(2);
                if n.is_multiple_of(2) {
                    let v = PruferValue::unit_fraction(*p, exp_index(i)?);
                    return Ok(Element::single(amb.clone(), LEAD, ComponentValue::Prufer(v))?);
                }
                let mut lead = f_tilde(*p, exp_index(i)?);
                let r = h.residue(i, h.order.unwrap_or(1))?;
                let mut tail = Element::zero(amb.clone());
                if r == 0 {
                    lead = lead.add(e0);
                } else {
                    tail = h.embedded(amb, r)?;
                }
                let lead = Element::single(amb.clone(), LEAD, ComponentValue::Prufer(lead))?;
                Ok(lead.add(&tail)?)
            }
            Built::Lemma5(layout) => {
                let terms = if n.is_multiple_of(2) { vec![layout.even(n / 2)?] } else { layout.odd(n / 2)? };
                Ok(Element::from_terms(amb.clone(), terms)?)
            }
            Built::Constant { value, .. } => Ok(value.clone()),
        }
    }

    /// `(n, d_n)` for `n` in `range`, clipped below at the first index.
    pub fn dump(&self, range: std::ops::RangeInclusive<u64>) -> Result<Vec<(u64, Element)>, RecipeError> {
        let lo = (*range.start()).max(self.first_index());
        (lo..=*range.end()).map(|n| Ok((n, self.term(n)?))).collect()
    }

    /// The listed element `e_index` of H moved into the ambient group
    /// (constructions over K ⊕ H only).
    pub fn h_element(&self, index: u64) -> Result<Element, RecipeError> {
        match &self.built {
            Built::Lemma2 { h, .. } | Built::Lemma3 { h, .. } | Built::Lemma4 { h, .. } => {
                h.embedded(&self.ambient, index)
            }
            _ => Err(RecipeError::Invalid("this recipe has no H summand".into())),
        }
    }

    /// Moves an element of H into the ambient group.
    pub fn embed_h(&self, x: &Element) -> Result<Element, RecipeError> {
        match &self.built {
            Built::Lemma2 { h, .. } | Built::Lemma3 { h, .. } | Built::Lemma4 { h, .. } => {
                if x.spec() != &**h.listing.spec() {
                    return Err(RecipeError::Invalid("element is not in H".into()));
                }
                Ok(x.relabel(self.ambient.clone(), |c| Some(Coordinate::new(c.component + 1, c.copy)))?)
            }
            _ => Err(RecipeError::Invalid("this recipe has no H summand".into())),
        }
    }

    /// Generator `e_j` of the cyclic-sum construction.
    pub fn basis(&self, j: u64) -> Result<Element, RecipeError> {
        let layout = self.lemma5()?;
        Ok(Element::from_terms(self.ambient.clone(), [layout.multiple(j, 1)?])?)
    }

    /// `e'_j = c_j·e_j` of the cyclic-sum construction.
    pub fn target_element(&self, j: u64) -> Result<Element, RecipeError> {
        let layout = self.lemma5()?;
        Ok(Element::from_terms(self.ambient.clone(), [layout.multiple(j, layout.target(j))?])?)
    }

    /// `u_j` of the cyclic-sum construction.
    pub fn basis_order(&self, j: u64) -> Result<u64, RecipeError> {
        Ok(self.lemma5()?.order(j))
    }

    pub(crate) fn lemma5(&self) -> Result<&Lemma5Layout, RecipeError> {
        match &self.built {
            Built::Lemma5(l) => Ok(l),
            _ => Err(RecipeError::Invalid("not a cyclic-sum recipe".into())),
        }
    }

    pub(crate) fn lead_exponent(&self) -> Option<u32> {
        match &self.built {
            Built::Lemma4 { e0, .. } => Some(e0.exponent()),
            _ => None,
        }
    }

    pub(crate) fn prime(&self) -> Option<u64> {
        match &self.built {
            Built::Lemma2 { p, .. } | Built::Lemma3 { p, .. } | Built::Lemma4 { p, .. } => Some(*p),
            _ => None,
        }
    }
}

impl Lemma5Layout {
    pub(crate) fn generator_index(&self, coord: Coordinate) -> Option<u64> {
        self.index_of(coord)
    }

    pub(crate) fn variant(&self) -> Lemma5Variant {
        self.variant
    }

    pub(crate) fn generator_order(&self, j: u64) -> u64 {
        self.order(j)
    }

    pub(crate) fn ladder_prime(&self) -> Option<u64> {
        match self.tail {
            OrderTail::Ladder { p, .. } => Some(p),
            OrderTail::Constant { .. } => None,
        }
    }
}

/// `d_n` for a recipe.
pub fn term(recipe: &SequenceRecipe, n: u64) -> Result<Element, RecipeError> {
    Sequence::new(recipe.clone())?.term(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lemma2_z3() -> Sequence {
        Sequence::new(SequenceRecipe::lemma2(2, GroupSpec::parse("Z(3)").unwrap())).unwrap()
    }

    #[test]
    fn lemma2_even_terms_are_powers() {
        let s = lemma2_z3();
        assert_eq!(s.ambient().to_string(), "Z + Z(3)");
        assert_eq!(s.term(6).unwrap().to_string(), "8*e(0,0)");
        assert_eq!(s.term(8).unwrap().to_string(), "16*e(0,0)");
        assert!(matches!(s.term(4), Err(RecipeError::OutOfRange { index: 4, first: 5 })));
    }

    #[test]
    fn lemma2_odd_terms() {
        let s = lemma2_z3();
        // n = 3: residue 3 mod 3 = 0, zero element by default
        assert_eq!(s.term(5).unwrap().to_string(), format!("{}*e(0,0)", f(2, 3)));
        // n = 4: residue 1
        assert_eq!(s.term(7).unwrap().to_string(), format!("{}*e(0,0) + 1*e(1,0)", f(2, 4)));
        // n = 5: residue 2
        assert_eq!(s.term(9).unwrap().to_string(), format!("{}*e(0,0) + 2*e(1,0)", f(2, 5)));
    }

    #[test]
    fn lemma2_residue_zero_options() {
        let h = GroupSpec::parse("Z(3)").unwrap();
        let mut r = match SequenceRecipe::lemma2(2, h) {
            SequenceRecipe::Lemma2(r) => r,
            _ => unreachable!(),
        };
        r.residue_zero = ResidueZero::IntegerGenerator;
        let s = Sequence::new(SequenceRecipe::Lemma2(r.clone())).unwrap();
        assert_eq!(s.term(5).unwrap().to_string(), format!("{}*e(0,0)", f(2, 3) + 1u32));
        r.residue_zero = ResidueZero::Reject;
        let s = Sequence::new(SequenceRecipe::Lemma2(r.clone())).unwrap();
        assert!(s.term(5).is_err());
        assert!(s.term(7).is_ok());
        r.residue_zero = ResidueZero::IntegerGenerator;
        r.epsilon = EpsilonRule::ZeroAtNu;
        let s = Sequence::new(SequenceRecipe::Lemma2(r)).unwrap();
        assert_eq!(s.term(5).unwrap().to_string(), format!("{}*e(0,0)", f(2, 3)));
    }

    #[test]
    fn lemma2_infinite_h_uses_triangular_residues() {
        let s = Sequence::new(SequenceRecipe::lemma2(3, GroupSpec::parse("Z(2)^w").unwrap())).unwrap();
        // n = 7: S_3 = 6, residue 1
        let d13 = s.term(13).unwrap();
        assert_eq!(d13.sub(&s.h_element(1).unwrap()).unwrap().to_string(), format!("{}*e(0,0)", f(3, 7)));
        // n = 6 is triangular: residue 0
        assert_eq!(s.term(11).unwrap().to_string(), format!("{}*e(0,0)", f(3, 6)));
    }

    #[test]
    fn lemma3_terms() {
        let s = Sequence::new(SequenceRecipe::lemma3(2, GroupSpec::parse("Z(3)").unwrap())).unwrap();
        assert_eq!(s.first_index(), 9);
        assert_eq!(s.term(9).unwrap().to_string(), "1/2^3*e(0,0)");
        assert_eq!(
            s.term(11).unwrap(),
            Element::single(
                s.ambient().clone(),
                LEAD,
                ComponentValue::Prufer(super::super::beta_prefix(2, &JRule::Identity, 3).unwrap())
            )
            .unwrap()
        );
        // n = 3, |H| - 1 = 2: residue 1, j_3 = 3, f̃_7
        let d10 = s.term(10).unwrap();
        let expect = Element::single(s.ambient().clone(), LEAD, ComponentValue::Prufer(f_tilde(2, 7)))
            .unwrap()
            .add(&s.h_element(1).unwrap())
            .unwrap();
        assert_eq!(d10, expect);
    }

    #[test]
    fn lemma4_terms() {
        let e0 = PruferValue::new(2, 1.into(), 2);
        let s = Sequence::new(SequenceRecipe::lemma4(2, e0.clone(), GroupSpec::parse("Z(3)").unwrap())).unwrap();
        assert_eq!(s.term(6).unwrap().to_string(), "1/2^3*e(0,0)");
        let d5 = s.term(5).unwrap();
        assert_eq!(d5.to_string(), format!("{}*e(0,0)", f_tilde(2, 3).add(&e0)));
        let d7 = s.term(7).unwrap();
        assert_eq!(d7.to_string(), format!("{}*e(0,0) + 1*e(1,0)", f_tilde(2, 4)));
    }

    #[test]
    fn lemma4_zero_e0_matches_formula() {
        let s =
            Sequence::new(SequenceRecipe::lemma4(2, PruferValue::zero(2), GroupSpec::parse("Z(3)").unwrap())).unwrap();
        assert_eq!(s.term(5).unwrap().to_string(), format!("{}*e(0,0)", f_tilde(2, 3)));
    }

    #[test]
    fn lemma5_initial_terms() {
        let s = Sequence::new(SequenceRecipe::lemma5_uniform(4, 2)).unwrap();
        assert_eq!(s.ambient().to_string(), "Z(4)^w");
        assert_eq!(s.term(1).unwrap().to_string(), "2*e(0,0)");
        assert_eq!(s.term(3).unwrap().to_string(), "2*e(0,0) + 1*e(0,1)");
        assert_eq!(s.term(5).unwrap().to_string(), "2*e(0,1) + 1*e(0,2) + 1*e(0,3)");
        let even: Vec<String> = (0..5).map(|n| s.term(2 * n).unwrap().to_string()).collect();
        assert_eq!(even, ["1*e(0,0)", "2*e(0,0)", "3*e(0,0)", "1*e(0,1)", "2*e(0,1)"]);
        // n = 3: μ_3 = S_2 = 3, e'_0 + b_4 + b_5 + b_6
        assert_eq!(s.term(7).unwrap().to_string(), "2*e(0,0) + 1*e(0,4) + 1*e(0,5) + 1*e(0,6)");
    }

    #[test]
    fn lemma5_general_d5() {
        let mut r = match SequenceRecipe::lemma5_uniform(4, 2) {
            SequenceRecipe::Lemma5(r) => r,
            _ => unreachable!(),
        };
        r.d5 = D5Rule::General;
        let s = Sequence::new(SequenceRecipe::Lemma5(r)).unwrap();
        assert_eq!(s.term(5).unwrap().to_string(), "2*e(0,0) + 1*e(0,2) + 1*e(0,3)");
    }

    #[test]
    fn lemma5_prefix_and_ladder() {
        let params = Lemma5Params {
            prefix: vec![OrderTarget { order: 2, target: 1 }, OrderTarget { order: 3, target: 0 }],
            tail: OrderTail::Ladder { p: 2, target: 1 },
            variant: Lemma5Variant::B,
            d5: D5Rule::Explicit,
        };
        let s = Sequence::new(SequenceRecipe::Lemma5(params)).unwrap();
        assert_eq!(s.ambient().to_string(), "Z(2) + Z(3) + Z(2^inf)^w");
        assert_eq!(s.basis_order(4).unwrap(), 8);
        assert_eq!(s.basis(3).unwrap().to_string(), "1/2^2*e(2,1)");
        // even listing: e_0, e_1, 2e_1, e_2, e_3, 2e_3, 3e_3, ...
        let even: Vec<String> = (0..5).map(|n| s.term(2 * n).unwrap().to_string()).collect();
        assert_eq!(even, ["1*e(0,0)", "1*e(1,0)", "2*e(1,0)", "1/2^1*e(2,0)", "1/2^2*e(2,1)"]);
        // d_3 = e'_0 + b_1 with b_1 = e_3
        assert_eq!(s.term(3).unwrap().to_string(), "1*e(0,0) + 1/2^2*e(2,1)");
    }

    #[test]
    fn lemma5_validation() {
        let bad = Lemma5Params {
            prefix: vec![OrderTarget { order: 3, target: 1 }],
            tail: OrderTail::Constant { order: 4, target: 1 },
            variant: Lemma5Variant::A { j0: 1 },
            d5: D5Rule::Explicit,
        };
        assert!(Sequence::new(SequenceRecipe::Lemma5(bad)).is_err());
        let not_pp = SequenceRecipe::lemma5_uniform(6, 1);
        assert!(Sequence::new(not_pp).is_err());
    }

    #[test]
    fn recipe_json_roundtrip() {
        for r in [
            SequenceRecipe::lemma2(2, GroupSpec::parse("Z(3)").unwrap()),
            SequenceRecipe::lemma3(3, GroupSpec::parse("Z(2)^w").unwrap()),
            SequenceRecipe::lemma4(2, PruferValue::new(2, 3.into(), 3), GroupSpec::trivial()),
            SequenceRecipe::lemma5_uniform(4, 2),
        ] {
            let text = serde_json::to_string(&r).unwrap();
            let back: SequenceRecipe = serde_json::from_str(&text).unwrap();
            assert_eq!(back, r, "{text}");
        }
    }
}
