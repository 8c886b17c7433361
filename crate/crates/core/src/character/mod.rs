//! Characters of countable direct sums and their pairing with elements.
//!
//! Dual values per component kind: a circle angle for ℤ, a residue for
//! ℤ(p^a), and a p-adic integer for ℤ(p^∞). Angles are written additively
//! in `[0, 1)`, so the pairing value `1` of the multiplicative picture is
//! the angle `0` here.

mod finite;
mod scan;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::group::{pow_p, ComponentKind, ComponentValue, Coordinate, Element, GroupError, GroupSpec};
use crate::tseq::RecipeError;

pub use finite::{
    annihilator, radical_report, sd_finite, Expected, FiniteGroup, RadicalReport, RadicalVerdict, SdFinite, Subgroup,
    Truncation, CHARACTER_LIMIT,
};
pub use scan::{convergence_scan, sd_membership, Membership, ScanPoint, ScanReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("p-adic precision {available} is too small: the pairing needs {required} digits")]
    Precision { required: u32, available: u32 },
    #[error("dual value at e({}, {}) does not match the component kind", .0.component, .0.copy)]
    KindMismatch(Coordinate),
    #[error("character and element live on different groups")]
    SpecMismatch,
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("the truncation has {order} elements, above the enumeration limit {limit}")]
    TooLarge { order: String, limit: u64 },
    #[error("truncation is not finite: {0}")]
    NotFinite(String),
    #[error("invalid window: {0}")]
    Window(String),
    #[error(transparent)]
    Recipe(#[from] RecipeError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn parse_err<T>(pos: usize, message: impl Into<String>) -> Result<T, CharError> {
    Err(CharError::Parse { pos, message: message.into() })
}

/// A point of the circle ℝ/ℤ written as an angle in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CircleValue {
    Exact(BigRational),
    /// Known only to lie within `radius` of `mid`; never treated as exact.
    Approx {
        mid: BigRational,
        radius: BigRational,
    },
}

fn frac(r: BigRational) -> BigRational {
    let f = r.floor();
    r - f
}

impl CircleValue {
    pub fn zero() -> Self {
        CircleValue::Exact(BigRational::zero())
    }

    pub fn exact(r: BigRational) -> Self {
        CircleValue::Exact(frac(r))
    }

    pub fn approx(mid: BigRational, radius: BigRational) -> Self {
        CircleValue::Approx { mid: frac(mid), radius: radius.abs() }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            CircleValue::Exact(r) => Some(r),
            CircleValue::Approx { .. } => None,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.as_exact().is_some_and(|r| r.is_zero())
    }

    pub fn add(&self, other: &CircleValue) -> CircleValue {
        use CircleValue::*;
        match (self, other) {
            (Exact(a), Exact(b)) => CircleValue::exact(a + b),
            (Exact(a), Approx { mid, radius }) | (Approx { mid, radius }, Exact(a)) => {
                CircleValue::approx(a + mid, radius.clone())
            }
            (Approx { mid: a, radius: r }, Approx { mid: b, radius: s }) => CircleValue::approx(a + b, r + s),
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> CircleValue {
        let n_r = BigRational::from_integer(n.clone());
        match self {
            CircleValue::Exact(a) => CircleValue::exact(a * &n_r),
            CircleValue::Approx { mid, radius } => CircleValue::approx(mid * &n_r, radius * n_r.abs()),
        }
    }

    pub fn neg(&self) -> CircleValue {
        self.mul_int(&BigInt::from(-1))
    }

    fn midpoint(&self) -> &BigRational {
        match self {
            CircleValue::Exact(r) | CircleValue::Approx { mid: r, .. } => r,
        }
    }

    /// `|1 − e^{2πiθ}| = 2|sin πθ|`, in floating point.
    pub fn deviation(&self) -> f64 {
        if self.is_exact_zero() {
            return 0.0;
        }
        let theta = self.midpoint().to_f64().unwrap_or(0.0);
        2.0 * (std::f64::consts::PI * theta).sin().abs()
    }

    /// Parses `a/b`, an integer, a decimal `0.25` (all exact), or `~0.1415`
    /// (approximate, radius one unit in the last place).
    pub fn parse(text: &str) -> Result<CircleValue, CharError> {
        let t = text.trim();
        let (approx, body) = match t.strip_prefix('~') {
            Some(rest) => (true, rest.trim()),
            None => (false, t),
        };
        let value = parse_rational(body)?;
        if approx {
            let digits = body.split_once('.').map_or(0, |(_, d)| d.len());
            let radius = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits));
            Ok(CircleValue::approx(value, radius))
        } else {
            Ok(CircleValue::exact(value))
        }
    }
}

fn parse_rational(t: &str) -> Result<BigRational, CharError> {
    let bad = || CharError::Parse { pos: 0, message: format!("`{t}` is not a rational number") };
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int, fr) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && fr.is_empty() || !int.bytes().chain(fr.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{fr}").parse().map_err(|_| bad())?;
    let r = BigRational::new(digits, num_traits::pow(BigInt::from(10), fr.len()));
    Ok(if neg { -r } else { r })
}

impl fmt::Display for CircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircleValue::Exact(r) if r.is_zero() => f.write_str("0"),
            CircleValue::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            CircleValue::Approx { mid, radius } => {
                // enough digits to show the radius
                let mut digits = 1usize;
                let mut scale = BigRational::new(BigInt::one(), BigInt::from(10));
                while &scale > radius && digits < 60 {
                    scale /= BigInt::from(10);
                    digits += 1;
                }
                write!(f, "~{}", decimal(mid, digits))
            }
        }
    }
}

/// `r` truncated to `digits` decimal places.
pub(crate) fn decimal(r: &BigRational, digits: usize) -> String {
    let scaled = (r * BigRational::from_integer(num_traits::pow(BigInt::from(10), digits))).floor().to_integer();
    let neg = scaled.is_negative();
    let s = scaled.abs().to_string();
    let s = format!("{s:0>width$}", width = digits + 1);
    let (int, fr) = s.split_at(s.len() - digits);
    format!("{}{int}.{fr}", if neg { "-" } else { "" })
}

/// `x mod p^N` for a p-adic integer `x`, as little-endian digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicTrunc {
    p: u64,
    digits: Vec<u64>,
}

impl PadicTrunc {
    pub fn new(p: u64, digits: Vec<u64>) -> Result<Self, CharError> {
        if !crate::group::is_prime(p) {
            return Err(CharError::Group(GroupError::NotPrime(p)));
        }
        if digits.is_empty() {
            return parse_err(0, "p-adic precision must be at least 1");
        }
        if let Some(d) = digits.iter().find(|d| **d >= p) {
            return parse_err(0, format!("digit {d} out of range for p = {p}"));
        }
        Ok(PadicTrunc { p, digits })
    }

    /// Digits of `m mod p^precision`.
    pub fn from_integer(p: u64, m: &BigInt, precision: u32) -> Self {
        let modulus = BigInt::from(pow_p(p, precision));
        let (_, mut v) = m.mod_floor(&modulus).into_parts();
        let bp = BigUint::from(p);
        let mut digits = Vec::with_capacity(precision as usize);
        for _ in 0..precision {
            let (q, r) = v.div_rem(&bp);
            digits.push(r.to_u64().unwrap());
            v = q;
        }
        PadicTrunc { p, digits }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.digits.len() as u32
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// `x mod p^τ` for `τ ≤ N`.
    pub fn residue(&self, tau: u32) -> Result<BigUint, CharError> {
        if tau > self.precision() {
            return Err(CharError::Precision { required: tau, available: self.precision() });
        }
        let bp = BigUint::from(self.p);
        Ok(self.digits[..tau as usize].iter().rev().fold(BigUint::zero(), |acc, d| acc * &bp + *d))
    }
}

impl fmt::Display for PadicTrunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join(if self.p > 10 { "." } else { "" }))
    }
}

/// A p-adic integer: truncated digits, or an exact rational integer `m·1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PadicValue {
    Trunc(PadicTrunc),
    Integer { p: u64, m: BigInt },
}

impl PadicValue {
    pub fn prime(&self) -> u64 {
        match self {
            PadicValue::Trunc(t) => t.p,
            PadicValue::Integer { p, .. } => *p,
        }
    }

    /// `None` for exact integers.
    pub fn precision(&self) -> Option<u32> {
        match self {
            PadicValue::Trunc(t) => Some(t.precision()),
            PadicValue::Integer { .. } => None,
        }
    }

    pub fn residue(&self, tau: u32) -> Result<BigUint, CharError> {
        match self {
            PadicValue::Trunc(t) => t.residue(tau),
            PadicValue::Integer { p, m } => {
                let (_, r) = m.mod_floor(&BigInt::from(pow_p(*p, tau))).into_parts();
                Ok(r)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            PadicValue::Trunc(t) => t.digits.iter().all(|d| *d == 0),
            PadicValue::Integer { m, .. } => m.is_zero(),
        }
    }

    /// Sum; truncated to the smaller precision when either side is truncated.
    pub fn add(&self, other: &PadicValue) -> PadicValue {
        let p = self.prime();
        match (self.precision(), other.precision()) {
            (None, None) => match (self, other) {
                (PadicValue::Integer { m: a, .. }, PadicValue::Integer { m: b, .. }) => {
                    PadicValue::Integer { p, m: a + b }
                }
                _ => unreachable!(),
            },
            (a, b) => {
                let n = a.into_iter().chain(b).min().unwrap();
                let s = BigInt::from(self.residue(n).unwrap()) + BigInt::from(other.residue(n).unwrap());
                PadicValue::Trunc(PadicTrunc::from_integer(p, &s, n))
            }
        }
    }
}

impl fmt::Display for PadicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicValue::Trunc(t) => write!(f, "{t}"),
            PadicValue::Integer { m, .. } => write!(f, "{m}*1"),
        }
    }
}

/// Value of a character at one coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DualValue {
    Circle(CircleValue),
    Residue(u64),
    Padic(PadicValue),
}

impl DualValue {
    fn matches(&self, kind: ComponentKind) -> bool {
        match (self, kind) {
            (DualValue::Circle(_), ComponentKind::IntegerZ) => true,
            (DualValue::Residue(r), ComponentKind::Cyclic { .. }) => *r < kind.modulus().unwrap(),
            (DualValue::Padic(x), ComponentKind::Prufer { p }) => x.prime() == p,
            _ => false,
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            DualValue::Circle(c) => c.is_exact_zero(),
            DualValue::Residue(r) => *r == 0,
            DualValue::Padic(x) => matches!(x, PadicValue::Integer { m, .. } if m.is_zero()),
        }
    }

    fn parse(kind: ComponentKind, text: &str, pos: usize) -> Result<DualValue, CharError> {
        let t = text.trim();
        let at = |e: CharError| match e {
            CharError::Parse { pos: p, message } => CharError::Parse { pos: p + pos, message },
            e => e,
        };
        match kind {
            ComponentKind::IntegerZ => CircleValue::parse(t).map(DualValue::Circle).map_err(at),
            ComponentKind::Cyclic { .. } => {
                let q = kind.modulus().unwrap() as i128;
                let v: i128 = t.parse().or_else(|_| parse_err(pos, format!("`{t}` is not a residue")))?;
                Ok(DualValue::Residue(v.rem_euclid(q) as u64))
            }
            ComponentKind::Prufer { p } => {
                if let Some(m) = t.strip_suffix("*1") {
                    let m: BigInt = m.trim().parse().or_else(|_| parse_err(pos, format!("`{m}` is not an integer")))?;
                    return Ok(DualValue::Padic(PadicValue::Integer { p, m }));
                }
                let digits: Option<Vec<u64>> = if p > 10 {
                    t.split('.').map(|d| d.parse().ok()).collect()
                } else {
                    t.chars().map(|c| c.to_digit(10).map(u64::from)).collect()
                };
                let Some(digits) = digits else {
                    return parse_err(pos, format!("`{t}` is not a little-endian digit string"));
                };
                PadicTrunc::new(p, digits).map(|x| DualValue::Padic(PadicValue::Trunc(x))).map_err(at)
            }
        }
    }
}

impl fmt::Display for DualValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualValue::Circle(c) => write!(f, "{c}"),
            DualValue::Residue(r) => write!(f, "{r}"),
            DualValue::Padic(x) => write!(f, "{x}"),
        }
    }
}

/// A character with finitely many nonzero coordinate values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    spec: Arc<GroupSpec>,
    assignment: BTreeMap<Coordinate, DualValue>,
}

impl Character {
    /// The trivial character.
    pub fn trivial(spec: Arc<GroupSpec>) -> Self {
        Character { spec, assignment: BTreeMap::new() }
    }

    pub fn from_values<I>(spec: Arc<GroupSpec>, values: I) -> Result<Self, CharError>
    where
        I: IntoIterator<Item = (Coordinate, DualValue)>,
    {
        let mut chi = Character::trivial(spec);
        for (c, v) in values {
            chi = chi.with(c, v)?;
        }
        Ok(chi)
    }

    /// Sets the value at one coordinate.
    pub fn with(mut self, coord: Coordinate, value: DualValue) -> Result<Self, CharError> {
        let kind = self.spec.check_coordinate(coord)?;
        if !value.matches(kind) {
            return Err(CharError::KindMismatch(coord));
        }
        if value.is_zero() {
            self.assignment.remove(&coord);
        } else {
            self.assignment.insert(coord, value);
        }
        Ok(self)
    }

    pub fn spec(&self) -> &Arc<GroupSpec> {
        &self.spec
    }

    pub fn value(&self, coord: Coordinate) -> Option<&DualValue> {
        self.assignment.get(&coord)
    }

    pub fn assignment(&self) -> &BTreeMap<Coordinate, DualValue> {
        &self.assignment
    }

    /// Pointwise sum in the dual group.
    pub fn add(&self, other: &Character) -> Result<Character, CharError> {
        if self.spec != other.spec {
            return Err(CharError::SpecMismatch);
        }
        let mut out = self.clone();
        for (c, v) in &other.assignment {
            let sum = match (out.assignment.get(c), v) {
                (None, v) => v.clone(),
                (Some(DualValue::Circle(a)), DualValue::Circle(b)) => DualValue::Circle(a.add(b)),
                (Some(DualValue::Residue(a)), DualValue::Residue(b)) => {
                    let q = self.spec.check_coordinate(*c)?.modulus().unwrap();
                    DualValue::Residue((a + b) % q)
                }
                (Some(DualValue::Padic(a)), DualValue::Padic(b)) => DualValue::Padic(a.add(b)),
                _ => return Err(CharError::KindMismatch(*c)),
            };
            out = out.with(*c, sum)?;
        }
        Ok(out)
    }

    /// The angle of `(g, χ)`.
    pub fn pair(&self, g: &Element) -> Result<CircleValue, CharError> {
        if **g.spec_arc() != *self.spec {
            return Err(CharError::SpecMismatch);
        }
        let mut angle = CircleValue::zero();
        for (coord, v) in g.support() {
            let Some(dual) = self.assignment.get(coord) else { continue };
            let term = match (v, dual) {
                (ComponentValue::Integer(n), DualValue::Circle(a)) => a.mul_int(n),
                (ComponentValue::Residue(c), DualValue::Residue(d)) => {
                    let q = self.spec.check_coordinate(*coord)?.modulus().unwrap();
                    CircleValue::exact(BigRational::new(BigInt::from(*c as u128 * *d as u128), BigInt::from(q)))
                }
                (ComponentValue::Prufer(x), DualValue::Padic(y)) => {
                    let tau = x.exponent();
                    let r = y.residue(tau)?;
                    CircleValue::exact(BigRational::new(
                        BigInt::from(x.numerator() * r),
                        BigInt::from(pow_p(x.prime(), tau)),
                    ))
                }
                _ => return Err(CharError::KindMismatch(*coord)),
            };
            angle = angle.add(&term);
        }
        Ok(angle)
    }

    /// Parses `x(c,i)=value` entries separated by `;`, or `0` for the
    /// trivial character. Values: an angle (`a/b`, `0.25`, `~0.1415`) on ℤ,
    /// a residue on ℤ(p^a), and on ℤ(p^∞) either little-endian digits
    /// (dot-separated when `p > 10`) or an exact integer `m*1`.
    pub fn parse(spec: Arc<GroupSpec>, text: &str) -> Result<Character, CharError> {
        let mut chi = Character::trivial(spec.clone());
        if text.trim() == "0" || text.trim().is_empty() {
            return Ok(chi);
        }
        let mut offset = 0usize;
        for entry in text.split(';') {
            let start = offset + (entry.len() - entry.trim_start().len());
            offset += entry.len() + 1;
            let e = entry.trim();
            let Some(rest) = e.strip_prefix("x(") else {
                return parse_err(start, "expected `x(c,i)=value`");
            };
            let Some((coord, value)) = rest.split_once(")=") else {
                return parse_err(start, "expected `)=` after the coordinate");
            };
            let Some((c, i)) = coord.split_once(',') else {
                return parse_err(start + 2, "expected `c,i`");
            };
            let c: usize = c.trim().parse().or_else(|_| parse_err(start + 2, "bad component index"))?;
            let i: u64 = i.trim().parse().or_else(|_| parse_err(start + 2, "bad copy index"))?;
            let coord = Coordinate::new(c, i);
            let kind = spec.check_coordinate(coord)?;
            let value_pos = start + e.find(")=").unwrap_or(0) + 2;
            chi = chi.with(coord, DualValue::parse(kind, value, value_pos)?)?;
        }
        Ok(chi)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.assignment.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, v)) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "x({},{})={v}", c.component, c.copy)?;
        }
        Ok(())
    }
}

/// `(g, χ)` as an angle.
pub fn pair(chi: &Character, g: &Element) -> Result<CircleValue, CharError> {
    chi.pair(g)
}

/// Whether `x ≡ m·1 (mod p^{N_2})` for some `|m| ≤ bound`, returning that
/// `m`. Agreement modulo `p^{N_2}` implies agreement at every level of the
/// window `[N_1, N_2]`. Two candidates suffice: `m = X` and `m = X − p^{N_2}`
/// with `X = x mod p^{N_2}`.
pub fn padic_multiple_check(x: &PadicTrunc, window: (u32, u32), bound: &BigUint) -> Result<Option<BigInt>, CharError> {
    let (lo, hi) = window;
    if lo > hi || hi == 0 {
        return Err(CharError::Window(format!("[{lo}, {hi}] is not a valid precision window")));
    }
    let r = x.residue(hi)?;
    if &r <= bound {
        return Ok(Some(BigInt::from(r)));
    }
    let modulus = pow_p(x.prime(), hi);
    let neg = &modulus - &r;
    Ok((&neg <= bound).then(|| -BigInt::from(neg)))
}
