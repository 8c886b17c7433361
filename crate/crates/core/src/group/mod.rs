//! Countable direct sums of ℤ, ℤ(p^a) and ℤ(p^∞) and exact arithmetic on
//! their finitely supported elements.

mod prufer;
pub mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use prufer::{pow_p, PruferValue};
pub use text::ParseError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("elements belong to different group specs")]
    SpecMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cyclic exponent must be at least 1")]
    ZeroExponent,
    #[error("cyclic order {p}^{a} does not fit in 63 bits")]
    OrderTooLarge { p: u64, a: u32 },
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("component index {0} out of range")]
    InvalidComponent(usize),
    #[error("copy {copy} out of range for component {component} of multiplicity {multiplicity}")]
    InvalidCopy { component: usize, copy: u64, multiplicity: u64 },
    #[error("value kind does not match component {0}")]
    KindMismatch(usize),
    #[error("coordinate in component {component} is not {p}-primary")]
    NotPrimary { component: usize, p: u64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Kind of a single summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentKind {
    IntegerZ,
    Cyclic { p: u64, a: u32 },
    Prufer { p: u64 },
}

impl ComponentKind {
    pub fn prime(&self) -> Option<u64> {
        match *self {
            ComponentKind::IntegerZ => None,
            ComponentKind::Cyclic { p, .. } | ComponentKind::Prufer { p } => Some(p),
        }
    }

    /// `p^a` for cyclic kinds.
    pub fn modulus(&self) -> Option<u64> {
        match *self {
            ComponentKind::Cyclic { p, a } => Some(p.pow(a)),
            _ => None,
        }
    }
}

/// Multiplicity of a summand. Only finiteness matters to the decision
/// procedures; `SymbolicInfinite` stands for an arbitrary infinite cardinal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Cardinality {
    Finite(u64),
    CountableInfinite,
    SymbolicInfinite,
}

impl Cardinality {
    pub fn is_infinite(&self) -> bool {
        !matches!(self, Cardinality::Finite(_))
    }

    pub fn finite(&self) -> Option<u64> {
        match *self {
            Cardinality::Finite(n) => Some(n),
            _ => None,
        }
    }

    /// Cardinal sum; the larger infinite wins.
    pub fn plus(self, other: Cardinality) -> Cardinality {
        use Cardinality::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.saturating_add(b)),
            (SymbolicInfinite, _) | (_, SymbolicInfinite) => SymbolicInfinite,
            _ => CountableInfinite,
        }
    }

    /// Whether `index` is a valid copy index.
    pub fn admits(&self, index: u64) -> bool {
        match *self {
            Cardinality::Finite(n) => index < n,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub kind: ComponentKind,
    pub multiplicity: Cardinality,
}

/// Ordered list of summands `kind^(multiplicity)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    components: Vec<Component>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl GroupSpec {
    pub fn new(components: Vec<Component>) -> Result<Self, GroupError> {
        for c in &components {
            match c.kind {
                ComponentKind::IntegerZ => {}
                ComponentKind::Cyclic { p, a } => {
                    if !is_prime(p) {
                        return Err(GroupError::NotPrime(p));
                    }
                    if a == 0 {
                        return Err(GroupError::ZeroExponent);
                    }
                    match p.checked_pow(a) {
                        Some(q) if q < (1u64 << 63) => {}
                        _ => return Err(GroupError::OrderTooLarge { p, a }),
                    }
                }
                ComponentKind::Prufer { p } => {
                    if !is_prime(p) {
                        return Err(GroupError::NotPrime(p));
                    }
                }
            }
            if c.multiplicity == Cardinality::Finite(0) {
                return Err(GroupError::ZeroMultiplicity);
            }
        }
        Ok(GroupSpec { components })
    }

    /// The trivial group (empty sum).
    pub fn trivial() -> Self {
        GroupSpec { components: Vec::new() }
    }

    pub fn parse(text: &str) -> Result<Self, GroupError> {
        text::parse_spec(text)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, index: usize) -> Result<&Component, GroupError> {
        self.components.get(index).ok_or(GroupError::InvalidComponent(index))
    }

    pub fn kind(&self, index: usize) -> Result<ComponentKind, GroupError> {
        Ok(self.component(index)?.kind)
    }

    pub fn is_trivial(&self) -> bool {
        self.components.is_empty()
    }

    /// All components cyclic.
    pub fn is_bounded(&self) -> bool {
        self.components.iter().all(|c| matches!(c.kind, ComponentKind::Cyclic { .. }))
    }

    pub fn is_finite(&self) -> bool {
        self.is_bounded() && self.components.iter().all(|c| !c.multiplicity.is_infinite())
    }

    pub fn is_torsion(&self) -> bool {
        self.components.iter().all(|c| c.kind != ComponentKind::IntegerZ)
    }

    pub fn has_integer(&self) -> bool {
        self.components.iter().any(|c| c.kind == ComponentKind::IntegerZ)
    }

    pub fn has_prufer(&self) -> bool {
        self.components.iter().any(|c| matches!(c.kind, ComponentKind::Prufer { .. }))
    }

    /// Group order for finite specs.
    pub fn finite_order(&self) -> Option<BigUint> {
        if !self.is_finite() {
            return None;
        }
        let mut n = BigUint::one();
        for c in &self.components {
            let q = BigUint::from(c.kind.modulus().unwrap());
            n *= num_traits::pow(q, c.multiplicity.finite().unwrap() as usize);
        }
        Some(n)
    }

    /// Coordinates of a finite spec, component-major.
    pub fn finite_coordinates(&self) -> Option<Vec<Coordinate>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            for copy in 0..c.multiplicity.finite().unwrap() {
                out.push(Coordinate { component: i, copy });
            }
        }
        Some(out)
    }

    pub fn check_coordinate(&self, coord: Coordinate) -> Result<ComponentKind, GroupError> {
        let c = self.component(coord.component)?;
        if !c.multiplicity.admits(coord.copy) {
            return Err(GroupError::InvalidCopy {
                component: coord.component,
                copy: coord.copy,
                multiplicity: c.multiplicity.finite().unwrap_or(0),
            });
        }
        Ok(c.kind)
    }

    /// The direct sum `self ⊕ other`, with `other`'s components appended.
    pub fn direct_sum(&self, other: &GroupSpec) -> GroupSpec {
        let mut components = self.components.clone();
        components.extend_from_slice(&other.components);
        GroupSpec { components }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_spec(self, f)
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GroupSpec::parse(s)
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        GroupSpec::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Address of one copy of one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coordinate {
    pub component: usize,
    pub copy: u64,
}

impl Coordinate {
    pub fn new(component: usize, copy: u64) -> Self {
        Coordinate { component, copy }
    }
}

/// A nonzero coordinate value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ComponentValue {
    Integer(BigInt),
    Residue(u64),
    Prufer(PruferValue),
}

impl ComponentValue {
    pub fn is_zero(&self) -> bool {
        match self {
            ComponentValue::Integer(n) => n.is_zero(),
            ComponentValue::Residue(r) => *r == 0,
            ComponentValue::Prufer(v) => v.is_zero(),
        }
    }

    fn matches(&self, kind: ComponentKind) -> bool {
        matches!(
            (self, kind),
            (ComponentValue::Integer(_), ComponentKind::IntegerZ)
                | (ComponentValue::Residue(_), ComponentKind::Cyclic { .. })
        ) || matches!((self, kind), (ComponentValue::Prufer(v), ComponentKind::Prufer { p }) if v.prime() == p)
    }

    /// Brings the value into canonical form for `kind`.
    fn normalize(self, kind: ComponentKind) -> ComponentValue {
        match (self, kind) {
            (ComponentValue::Residue(r), ComponentKind::Cyclic { p, a }) => ComponentValue::Residue(r % p.pow(a)),
            (v, _) => v,
        }
    }

    fn add(&self, other: &ComponentValue, kind: ComponentKind) -> ComponentValue {
        match (self, other, kind) {
            (ComponentValue::Integer(a), ComponentValue::Integer(b), _) => ComponentValue::Integer(a + b),
            (ComponentValue::Residue(a), ComponentValue::Residue(b), ComponentKind::Cyclic { p, a: e }) => {
                let q = p.pow(e) as u128;
                ComponentValue::Residue(((*a as u128 + *b as u128) % q) as u64)
            }
            (ComponentValue::Prufer(a), ComponentValue::Prufer(b), _) => ComponentValue::Prufer(a.add(b)),
            _ => unreachable!("kinds checked on construction"),
        }
    }

    fn neg(&self, kind: ComponentKind) -> ComponentValue {
        match (self, kind) {
            (ComponentValue::Integer(a), _) => ComponentValue::Integer(-a),
            (ComponentValue::Residue(a), ComponentKind::Cyclic { p, a: e }) => {
                let q = p.pow(e);
                ComponentValue::Residue((q - a % q) % q)
            }
            (ComponentValue::Prufer(v), _) => ComponentValue::Prufer(v.neg()),
            _ => unreachable!("kinds checked on construction"),
        }
    }

    fn mul(&self, n: &BigInt, kind: ComponentKind) -> ComponentValue {
        match (self, kind) {
            (ComponentValue::Integer(a), _) => ComponentValue::Integer(a * n),
            (ComponentValue::Residue(a), ComponentKind::Cyclic { p, a: e }) => {
                let q = p.pow(e);
                let k = n.mod_floor(&BigInt::from(q)).to_u64().unwrap();
                ComponentValue::Residue(((*a as u128 * k as u128) % q as u128) as u64)
            }
            (ComponentValue::Prufer(v), _) => ComponentValue::Prufer(v.mul_int(n)),
            _ => unreachable!("kinds checked on construction"),
        }
    }

    /// Order of this coordinate value; `None` for nonzero integers.
    fn order(&self, kind: ComponentKind) -> Option<BigUint> {
        match (self, kind) {
            (ComponentValue::Integer(n), _) => n.is_zero().then(BigUint::one),
            (ComponentValue::Residue(r), ComponentKind::Cyclic { p, a }) => {
                let q = p.pow(a);
                Some(BigUint::from(q / r.gcd(&q)))
            }
            (ComponentValue::Prufer(v), _) => Some(v.order()),
            _ => unreachable!("kinds checked on construction"),
        }
    }
}

impl fmt::Display for ComponentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentValue::Integer(n) => write!(f, "{n}"),
            ComponentValue::Residue(r) => write!(f, "{r}"),
            ComponentValue::Prufer(v) => write!(f, "{v}"),
        }
    }
}

/// `Finite(n)` or `Infinite`, used for element orders and group exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    Finite(BigUint),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// p-height of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Height {
    Finite(u32),
    Infinite,
}

/// A finitely supported element of a [`GroupSpec`]. Zero has empty support.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    spec: Arc<GroupSpec>,
    support: BTreeMap<Coordinate, ComponentValue>,
}

impl Element {
    pub fn zero(spec: Arc<GroupSpec>) -> Self {
        Element { spec, support: BTreeMap::new() }
    }

    /// Builds an element, summing repeated coordinates and dropping zeros.
    pub fn from_terms<I>(spec: Arc<GroupSpec>, terms: I) -> Result<Self, GroupError>
    where
        I: IntoIterator<Item = (Coordinate, ComponentValue)>,
    {
        let mut e = Element::zero(spec);
        for (coord, value) in terms {
            let kind = e.spec.check_coordinate(coord)?;
            if !value.matches(kind) {
                return Err(GroupError::KindMismatch(coord.component));
            }
            let value = value.normalize(kind);
            e.accumulate(coord, &value, kind);
        }
        Ok(e)
    }

    pub fn single(spec: Arc<GroupSpec>, coord: Coordinate, value: ComponentValue) -> Result<Self, GroupError> {
        Self::from_terms(spec, [(coord, value)])
    }

    /// Integer `n` at a ℤ coordinate, residue `n` at a cyclic one.
    pub fn basis_multiple(spec: Arc<GroupSpec>, coord: Coordinate, n: i64) -> Result<Self, GroupError> {
        let kind = spec.check_coordinate(coord)?;
        let value = match kind {
            ComponentKind::IntegerZ => ComponentValue::Integer(BigInt::from(n)),
            ComponentKind::Cyclic { p, a } => ComponentValue::Residue(n.rem_euclid(p.pow(a) as i64) as u64),
            ComponentKind::Prufer { .. } => return Err(GroupError::KindMismatch(coord.component)),
        };
        Self::single(spec, coord, value)
    }

    fn accumulate(&mut self, coord: Coordinate, value: &ComponentValue, kind: ComponentKind) {
        if value.is_zero() {
            return;
        }
        match self.support.get(&coord) {
            Some(old) => {
                let sum = old.add(value, kind);
                if sum.is_zero() {
                    self.support.remove(&coord);
                } else {
                    self.support.insert(coord, sum);
                }
            }
            None => {
                self.support.insert(coord, value.clone());
            }
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn spec_arc(&self) -> &Arc<GroupSpec> {
        &self.spec
    }

    pub fn support(&self) -> &BTreeMap<Coordinate, ComponentValue> {
        &self.support
    }

    pub fn value(&self, coord: Coordinate) -> Option<&ComponentValue> {
        self.support.get(&coord)
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    fn same_spec(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec) || *self.spec == *other.spec
    }

    pub fn add(&self, other: &Element) -> Result<Element, GroupError> {
        if !self.same_spec(other) {
            return Err(GroupError::SpecMismatch);
        }
        let (mut acc, rest) =
            if self.support.len() >= other.support.len() { (self.clone(), other) } else { (other.clone(), self) };
        for (coord, value) in &rest.support {
            let kind = self.spec.components[coord.component].kind;
            acc.accumulate(*coord, value, kind);
        }
        Ok(acc)
    }

    pub fn neg(&self) -> Element {
        let support = self.support.iter().map(|(c, v)| (*c, v.neg(self.spec.components[c.component].kind))).collect();
        Element { spec: self.spec.clone(), support }
    }

    pub fn sub(&self, other: &Element) -> Result<Element, GroupError> {
        self.add(&other.neg())
    }

    /// `n · self`.
    pub fn scalar_mul(&self, n: &BigInt) -> Element {
        if n.is_zero() {
            return Element::zero(self.spec.clone());
        }
        if n.is_one() {
            return self.clone();
        }
        let mut out = Element::zero(self.spec.clone());
        for (c, v) in &self.support {
            let w = v.mul(n, self.spec.components[c.component].kind);
            if !w.is_zero() {
                out.support.insert(*c, w);
            }
        }
        out
    }

    pub fn scale(&self, n: i64) -> Element {
        self.scalar_mul(&BigInt::from(n))
    }

    /// Least `n ≥ 1` with `n · self = 0`.
    pub fn order(&self) -> Order {
        let mut acc = BigUint::one();
        for (c, v) in &self.support {
            match v.order(self.spec.components[c.component].kind) {
                Some(o) => acc = acc.lcm(&o),
                None => return Order::Infinite,
            }
        }
        Order::Finite(acc)
    }

    /// Largest `n` such that `self = p^n · h` is solvable. Every coordinate
    /// of the support must lie in a `p`-primary component.
    pub fn height(&self, p: u64) -> Result<Height, GroupError> {
        let mut h = Height::Infinite;
        for (c, v) in &self.support {
            let this = match (self.spec.components[c.component].kind, v) {
                (ComponentKind::Cyclic { p: q, .. }, ComponentValue::Residue(r)) if q == p => {
                    let mut r = *r;
                    let mut n = 0u32;
                    while r % p == 0 {
                        r /= p;
                        n += 1;
                    }
                    Height::Finite(n)
                }
                (ComponentKind::Prufer { p: q }, _) if q == p => Height::Infinite,
                _ => return Err(GroupError::NotPrimary { component: c.component, p }),
            };
            h = h.min(this);
        }
        Ok(h)
    }

    /// Restriction of the support to one component.
    pub fn project(&self, component: usize) -> Result<Element, GroupError> {
        self.spec.component(component)?;
        let support =
            self.support.iter().filter(|(c, _)| c.component == component).map(|(c, v)| (*c, v.clone())).collect();
        Ok(Element { spec: self.spec.clone(), support })
    }

    /// Moves the element to `target` by relabelling coordinates. Coordinates
    /// mapped to `None` are dropped, so the map must be a homomorphism
    /// (coordinate inclusion or projection).
    pub fn relabel<F>(&self, target: Arc<GroupSpec>, mut map: F) -> Result<Element, GroupError>
    where
        F: FnMut(Coordinate) -> Option<Coordinate>,
    {
        let mut terms = Vec::with_capacity(self.support.len());
        for (c, v) in &self.support {
            if let Some(d) = map(*c) {
                terms.push((d, v.clone()));
            }
        }
        Element::from_terms(target, terms)
    }

    /// Coefficient at a ℤ coordinate, zero when absent.
    pub fn integer_at(&self, coord: Coordinate) -> BigInt {
        match self.support.get(&coord) {
            Some(ComponentValue::Integer(n)) => n.clone(),
            _ => BigInt::zero(),
        }
    }

    pub fn parse(spec: Arc<GroupSpec>, text: &str) -> Result<Element, GroupError> {
        text::parse_element(spec, text)
    }

    /// Largest absolute integer coordinate, used by bounds.
    pub fn max_abs_integer(&self) -> BigInt {
        self.support
            .values()
            .filter_map(|v| match v {
                ComponentValue::Integer(n) => Some(n.abs()),
                _ => None,
            })
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_element(self, f)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[{}]({})", self.spec, self)
    }
}

/// Machine-readable form of an [`Element`], mirroring the support map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub spec: String,
    pub support: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub component: usize,
    pub copy: u64,
    pub value: String,
}

impl From<&Element> for ElementRecord {
    fn from(e: &Element) -> Self {
        ElementRecord {
            spec: e.spec.to_string(),
            support: e
                .support
                .iter()
                .map(|(c, v)| TermRecord { component: c.component, copy: c.copy, value: v.to_string() })
                .collect(),
        }
    }
}

impl ElementRecord {
    pub fn to_element(&self) -> Result<Element, GroupError> {
        let spec = Arc::new(GroupSpec::parse(&self.spec)?);
        let mut terms = Vec::new();
        for t in &self.support {
            let coord = Coordinate::new(t.component, t.copy);
            let kind = spec.check_coordinate(coord)?;
            terms.push((coord, text::parse_value(kind, &t.value, 0)?));
        }
        Element::from_terms(spec, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> Arc<GroupSpec> {
        Arc::new(GroupSpec::parse(s).unwrap())
    }

    #[test]
    fn cyclic_addition_reduces() {
        let g = spec("Z(8)");
        let a = Element::basis_multiple(g.clone(), Coordinate::new(0, 0), 5).unwrap();
        let b = Element::basis_multiple(g.clone(), Coordinate::new(0, 0), 6).unwrap();
        assert_eq!(a.add(&b).unwrap().to_string(), "3*e(0,0)");
    }

    #[test]
    fn prufer_thirds_sum_to_zero() {
        let g = spec("Z(3^inf)");
        let a = Element::parse(g.clone(), "1/3^1*e(0,0)").unwrap();
        let b = Element::parse(g, "2/3^1*e(0,0)").unwrap();
        let s = a.add(&b).unwrap();
        assert!(s.is_zero());
        assert!(s.support().is_empty());
    }

    #[test]
    fn mixed_sum_to_zero() {
        let g = spec("Z + Z(3)");
        let a = Element::parse(g.clone(), "2*e(0,0) + 1*e(1,0)").unwrap();
        let b = Element::parse(g, "-2*e(0,0) + 2*e(1,0)").unwrap();
        assert!(a.add(&b).unwrap().is_zero());
    }

    #[test]
    fn spec_mismatch_is_an_error() {
        let a = Element::basis_multiple(spec("Z(8)"), Coordinate::new(0, 0), 1).unwrap();
        let b = Element::basis_multiple(spec("Z(4)"), Coordinate::new(0, 0), 1).unwrap();
        assert_eq!(a.add(&b), Err(GroupError::SpecMismatch));
    }

    #[test]
    fn scalar_examples() {
        let g = spec("Z(4)");
        let two = Element::basis_multiple(g.clone(), Coordinate::new(0, 0), 2).unwrap();
        assert!(two.scale(0).is_zero());
        assert_eq!(two.scale(3).to_string(), "2*e(0,0)");
        let p = spec("Z(5^inf)");
        let x = Element::parse(p, "1/5^2*e(0,0)").unwrap();
        assert_eq!(x.scale(5).to_string(), "1/5^1*e(0,0)");
    }

    #[test]
    fn order_examples() {
        let g = spec("Z(8)");
        assert_eq!(Element::zero(g.clone()).order(), Order::Finite(1u32.into()));
        let two = Element::basis_multiple(g, Coordinate::new(0, 0), 2).unwrap();
        assert_eq!(two.order(), Order::Finite(4u32.into()));
        let h = spec("Z + Z(3^inf)");
        let x = Element::parse(h, "1*e(0,0) + 1/3^2*e(1,0)").unwrap();
        assert_eq!(x.order(), Order::Infinite);
    }

    #[test]
    fn height_examples() {
        let g = spec("Z(8) + Z(2)");
        let four = Element::basis_multiple(g.clone(), Coordinate::new(0, 0), 4).unwrap();
        assert_eq!(four.height(2), Ok(Height::Finite(2)));
        let mixed = Element::parse(g.clone(), "2*e(0,0) + 1*e(1,0)").unwrap();
        assert_eq!(mixed.height(2), Ok(Height::Finite(0)));
        assert_eq!(Element::zero(g.clone()).height(2), Ok(Height::Infinite));
        assert!(four.height(3).is_err());
        let p = spec("Z(7^inf)");
        let x = Element::parse(p, "3/7^4*e(0,0)").unwrap();
        assert_eq!(x.height(7), Ok(Height::Infinite));
    }

    #[test]
    fn project_examples() {
        let g = spec("Z + Z(2^inf)");
        let x = Element::parse(g.clone(), "3*e(0,0) + 1/2^2*e(1,0)").unwrap();
        assert_eq!(x.project(1).unwrap().to_string(), "1/2^2*e(1,0)");
        assert!(Element::zero(g.clone()).project(0).unwrap().is_zero());
        assert_eq!(x.project(5), Err(GroupError::InvalidComponent(5)));
        let h = spec("Z + Z(3)");
        let f2 = crate::tseq::f(2, 2);
        let y = Element::parse(h, &format!("{f2}*e(0,0) + 1*e(1,0)")).unwrap();
        assert_eq!(y.project(0).unwrap().to_string(), "336*e(0,0)");
    }

    #[test]
    fn invalid_copy_rejected() {
        let g = spec("Z(2)^3");
        assert!(Element::basis_multiple(g.clone(), Coordinate::new(0, 3), 1).is_err());
        let w = spec("Z(2)^w");
        assert!(Element::basis_multiple(w, Coordinate::new(0, 1_000_000), 1).is_ok());
    }

    #[test]
    fn record_roundtrip() {
        let g = spec("Z + Z(9) + Z(2^inf)^w");
        let x = Element::parse(g, "-7*e(0,0) + 4*e(1,0) + 5/2^3*e(2,17)").unwrap();
        let r = ElementRecord::from(&x);
        assert_eq!(r.to_element().unwrap(), x);
    }
}
