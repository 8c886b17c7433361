//! Indexed listings of the nonzero elements of a countable group `H`.
//!
//! Finite groups are listed in mixed-radix order over their coordinates
//! (first coordinate least significant). Infinite groups are listed shell by
//! shell: shell `L` holds the elements whose support copies and coordinate
//! ranks are all below `L`, and each shell contributes the elements not
//! already in the previous one.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::RecipeError;
use crate::group::{pow_p, ComponentKind, ComponentValue, Coordinate, Element, GroupSpec, PruferValue};

/// How the nonzero elements of `H` are listed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HEnumeration {
    #[default]
    Default,
    /// Element texts over `H`, in listing order. Finite `H` only.
    Explicit { elements: Vec<String> },
}

#[derive(Debug, Clone)]
enum Listing {
    Finite { coords: Vec<Coordinate>, radices: Vec<u64>, count: u64 },
    Shells,
    Explicit(Vec<Element>),
}

/// Bijective listing `index ↦ e_index` of `H \ {0}` starting at `start`.
#[derive(Debug, Clone)]
pub struct EnumeratedH {
    spec: Arc<GroupSpec>,
    start: u64,
    listing: Listing,
}

fn int_rank(n: &BigInt) -> Option<u64> {
    let v = n.to_i64()?;
    Some(if v > 0 { 2 * v as u64 - 1 } else { 2 * v.unsigned_abs() })
}

fn int_from_rank(r: u64) -> BigInt {
    if r % 2 == 1 {
        BigInt::from(r.div_ceil(2))
    } else {
        -BigInt::from(r / 2)
    }
}

fn prufer_rank(v: &PruferValue) -> Option<u64> {
    if v.is_zero() {
        return Some(0);
    }
    let p = v.prime();
    let base = pow_p(p, v.exponent() - 1).to_u64()?;
    let c = v.numerator().to_u64()?;
    Some(base + (c - c / p - 1))
}

fn prufer_from_rank(p: u64, r: u64) -> PruferValue {
    if r == 0 {
        return PruferValue::zero(p);
    }
    let mut tau = 1u32;
    let mut lo = 1u64; // p^{tau-1}
    while lo.saturating_mul(p) <= r {
        lo *= p;
        tau += 1;
    }
    let j = r - lo;
    let c = j + j / (p - 1) + 1;
    PruferValue::new(p, BigInt::from(c), tau)
}

fn value_rank(v: &ComponentValue) -> Option<u64> {
    match v {
        ComponentValue::Integer(n) => int_rank(n),
        ComponentValue::Residue(r) => Some(*r),
        ComponentValue::Prufer(x) => prufer_rank(x),
    }
}

fn value_from_rank(kind: ComponentKind, r: u64) -> ComponentValue {
    match kind {
        ComponentKind::IntegerZ => ComponentValue::Integer(int_from_rank(r)),
        ComponentKind::Cyclic { .. } => ComponentValue::Residue(r),
        ComponentKind::Prufer { p } => ComponentValue::Prufer(prufer_from_rank(p, r)),
    }
}

fn size_of(kind: ComponentKind) -> Option<u64> {
    kind.modulus()
}

/// Coordinates and radices of shell `level`.
fn shell_layout(spec: &GroupSpec, level: u64) -> (Vec<Coordinate>, Vec<u64>) {
    let mut coords = Vec::new();
    let mut radices = Vec::new();
    for (i, c) in spec.components().iter().enumerate() {
        let copies = c.multiplicity.finite().map_or(level, |m| m.min(level));
        let radix = size_of(c.kind).map_or(level, |s| s.min(level));
        for copy in 0..copies {
            coords.push(Coordinate::new(i, copy));
            radices.push(radix);
        }
    }
    (coords, radices)
}

fn shell_size(spec: &GroupSpec, level: u64) -> Option<u64> {
    let (_, radices) = shell_layout(spec, level);
    radices.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r))
}

impl EnumeratedH {
    /// Default listing of `H \ {0}` with indices starting at `start`.
    pub fn new(spec: Arc<GroupSpec>, start: u64) -> Result<Self, RecipeError> {
        let listing = if spec.is_finite() {
            let coords = spec.finite_coordinates().unwrap();
            let radices: Vec<u64> =
                coords.iter().map(|c| spec.components()[c.component].kind.modulus().unwrap()).collect();
            let order = spec
                .finite_order()
                .unwrap()
                .to_u64()
                .ok_or_else(|| RecipeError::Invalid("H too large to enumerate".into()))?;
            Listing::Finite { coords, radices, count: order - 1 }
        } else {
            Listing::Shells
        };
        Ok(EnumeratedH { spec, start, listing })
    }

    /// User-supplied listing; must cover `H \ {0}` exactly once.
    pub fn explicit(spec: Arc<GroupSpec>, start: u64, elements: Vec<Element>) -> Result<Self, RecipeError> {
        let order = spec
            .finite_order()
            .and_then(|o| o.to_u64())
            .ok_or_else(|| RecipeError::Invalid("explicit enumerations need a finite H".into()))?;
        if elements.len() as u64 != order - 1 {
            return Err(RecipeError::Invalid(format!(
                "explicit enumeration lists {} elements, H has {} nonzero elements",
                elements.len(),
                order - 1
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for e in &elements {
            if e.is_zero() {
                return Err(RecipeError::Invalid("explicit enumeration contains zero".into()));
            }
            if e.spec() != &*spec {
                return Err(RecipeError::Invalid("explicit enumeration element outside H".into()));
            }
            if !seen.insert(e.clone()) {
                return Err(RecipeError::Invalid(format!("explicit enumeration repeats {e}")));
            }
        }
        Ok(EnumeratedH { spec, start, listing: Listing::Explicit(elements) })
    }

    pub fn from_config(spec: Arc<GroupSpec>, start: u64, config: &HEnumeration) -> Result<Self, RecipeError> {
        match config {
            HEnumeration::Default => Self::new(spec, start),
            HEnumeration::Explicit { elements } => {
                let parsed = elements.iter().map(|t| Element::parse(spec.clone(), t)).collect::<Result<Vec<_>, _>>()?;
                Self::explicit(spec, start, parsed)
            }
        }
    }

    pub fn spec(&self) -> &Arc<GroupSpec> {
        &self.spec
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    /// Number of listed elements, `None` when `H` is infinite.
    pub fn len(&self) -> Option<u64> {
        match &self.listing {
            Listing::Finite { count, .. } => Some(*count),
            Listing::Explicit(v) => Some(v.len() as u64),
            Listing::Shells => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// `e_index`.
    pub fn get(&self, index: u64) -> Result<Element, RecipeError> {
        let pos = index.checked_sub(self.start).ok_or(RecipeError::EnumerationUnavailable(index))?;
        match &self.listing {
            Listing::Finite { coords, radices, count } => {
                if pos >= *count {
                    return Err(RecipeError::EnumerationUnavailable(index));
                }
                Ok(self.decode(coords, radices, pos + 1)?)
            }
            Listing::Explicit(v) => v.get(pos as usize).cloned().ok_or(RecipeError::EnumerationUnavailable(index)),
            Listing::Shells => self.shell_get(pos).ok_or(RecipeError::EnumerationUnavailable(index)),
        }
    }

    /// Inverse lookup: the index of a nonzero element of `H`.
    pub fn index_of(&self, element: &Element) -> Option<u64> {
        if element.is_zero() || element.spec() != &*self.spec {
            return None;
        }
        let pos = match &self.listing {
            Listing::Finite { coords, radices, .. } => {
                let mut acc = 0u64;
                for (c, r) in coords.iter().zip(radices).rev() {
                    let v = element.value(*c).map_or(Some(0), value_rank)?;
                    acc = acc * r + v;
                }
                acc - 1
            }
            Listing::Explicit(v) => v.iter().position(|e| e == element)? as u64,
            Listing::Shells => self.shell_index(element)?,
        };
        Some(pos + self.start)
    }

    fn decode(&self, coords: &[Coordinate], radices: &[u64], mut code: u64) -> Result<Element, RecipeError> {
        let mut terms = Vec::new();
        for (c, r) in coords.iter().zip(radices) {
            let digit = code % r;
            code /= r;
            if digit != 0 {
                let kind = self.spec.components()[c.component].kind;
                terms.push((*c, value_from_rank(kind, digit)));
            }
        }
        Ok(Element::from_terms(self.spec.clone(), terms)?)
    }

    fn in_shell(&self, element: &Element, level: u64) -> bool {
        element.support().iter().all(|(c, v)| c.copy < level && value_rank(v).is_some_and(|r| r < level))
    }

    /// Elements of shell `level` not in shell `level - 1`, in order.
    fn shell_new(&self, level: u64) -> impl Iterator<Item = Element> + '_ {
        let (coords, radices) = shell_layout(&self.spec, level);
        let total = radices.iter().product::<u64>();
        (0..total).filter_map(move |code| {
            let e = self.decode(&coords, &radices, code).ok()?;
            (!self.in_shell(&e, level - 1)).then_some(e)
        })
    }

    fn shell_new_count(&self, level: u64) -> Option<u64> {
        Some(shell_size(&self.spec, level)? - shell_size(&self.spec, level - 1)?)
    }

    fn shell_get(&self, mut pos: u64) -> Option<Element> {
        let mut level = 2;
        loop {
            let n = self.shell_new_count(level)?;
            if pos < n {
                return self.shell_new(level).nth(pos as usize);
            }
            pos -= n;
            level += 1;
        }
    }

    fn shell_index(&self, element: &Element) -> Option<u64> {
        let mut level = 1;
        for (c, v) in element.support() {
            level = level.max(c.copy + 1).max(value_rank(v)? + 1);
        }
        let mut before = 0u64;
        for l in 2..level {
            before += self.shell_new_count(l)?;
        }
        let within = self.shell_new(level).position(|e| &e == element)? as u64;
        Some(before + within)
    }
}

impl PartialEq for EnumeratedH {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.start == other.start
    }
}

/// The first `n` listed elements.
#[cfg(test)]
fn first_n(e: &EnumeratedH, n: u64) -> Vec<Element> {
    (e.start..e.start + n).map(|i| e.get(i).unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn spec(s: &str) -> Arc<GroupSpec> {
        Arc::new(GroupSpec::parse(s).unwrap())
    }

    #[test]
    fn finite_listing_is_mixed_radix() {
        let h = EnumeratedH::new(spec("Z(3)"), 1).unwrap();
        assert_eq!(h.len(), Some(2));
        assert_eq!(h.get(1).unwrap().to_string(), "1*e(0,0)");
        assert_eq!(h.get(2).unwrap().to_string(), "2*e(0,0)");
        assert!(h.get(0).is_err());
        assert!(h.get(3).is_err());
        let k = EnumeratedH::new(spec("Z(2)^2"), 1).unwrap();
        let names: Vec<String> = first_n(&k, 3).iter().map(|e| e.to_string()).collect();
        assert_eq!(names, ["1*e(0,0)", "1*e(0,1)", "1*e(0,0) + 1*e(0,1)"]);
    }

    #[test]
    fn finite_listing_bijective() {
        let s = spec("Z(4) + Z(3)^2");
        let h = EnumeratedH::new(s.clone(), 0).unwrap();
        let n = h.len().unwrap();
        assert_eq!(n, 35);
        let mut seen = HashSet::new();
        for i in 0..n {
            let e = h.get(i).unwrap();
            assert!(!e.is_zero());
            assert_eq!(h.index_of(&e), Some(i));
            assert!(seen.insert(e));
        }
    }

    #[test]
    fn shell_listing_bijective() {
        for text in ["Z(2)^w", "Z(3^inf)", "Z + Z(2)", "Z(2^inf) + Z(3)^w"] {
            let h = EnumeratedH::new(spec(text), 1).unwrap();
            assert_eq!(h.len(), None);
            let mut seen = HashSet::new();
            for i in 1..=120 {
                let e = h.get(i).unwrap();
                assert!(!e.is_zero(), "{text}");
                assert_eq!(h.index_of(&e), Some(i), "{text}: {e}");
                assert!(seen.insert(e), "{text}");
            }
        }
    }

    #[test]
    fn prufer_ranks_roundtrip() {
        for p in [2, 3, 5] {
            for r in 0..200 {
                let v = prufer_from_rank(p, r);
                assert_eq!(prufer_rank(&v), Some(r));
            }
        }
    }

    #[test]
    fn explicit_listing_validated() {
        let s = spec("Z(3)");
        let two = Element::basis_multiple(s.clone(), Coordinate::new(0, 0), 2).unwrap();
        let one = Element::basis_multiple(s.clone(), Coordinate::new(0, 0), 1).unwrap();
        let h = EnumeratedH::explicit(s.clone(), 1, vec![two.clone(), one.clone()]).unwrap();
        assert_eq!(h.get(1).unwrap(), two);
        assert_eq!(h.index_of(&one), Some(2));
        assert!(EnumeratedH::explicit(s.clone(), 1, vec![two.clone(), two]).is_err());
        assert!(EnumeratedH::explicit(s, 1, vec![one]).is_err());
    }
}
