//! Text forms for group specs and elements.
//!
//! Spec grammar:
//!
//! ```text
//! spec := term ('+' term)* | '0'
//! term := base ('^' mult)?
//! base := 'Z' | 'Z(' n ')' | 'Z(' p '^' a ')' | 'Z(' p '^inf)'
//! mult := nat | 'w' | 'W'
//! ```
//!
//! `Z(n)` with composite `n` expands into its primary parts in ascending
//! prime order. `W` marks an uncountable (symbolic) multiplicity and `0`
//! the trivial group.
//!
//! Element terms are `v*e(c,i)` joined by `+`, with `v` an integer or a
//! fraction `a/p^t` for ℤ(p^∞) coordinates.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::{
    Cardinality, Component, ComponentKind, ComponentValue, Coordinate, Element, GroupError, GroupSpec, PruferValue,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, message: message.into() })
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            err(self.pos, format!("expected `{s}`"))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn digits(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected digits");
        }
        Ok(&self.src[start..self.pos])
    }

    fn nat(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse::<u64>().or_else(|_| err(start, "number too large"))
    }

    fn bigint(&mut self) -> Result<BigInt, ParseError> {
        let neg = self.eat("-");
        let d = self.digits()?;
        let n: BigInt = d.parse().unwrap();
        Ok(if neg { -n } else { n })
    }
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut a = 0;
            while n.is_multiple_of(d) {
                n /= d;
                a += 1;
            }
            out.push((d, a));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn parse_spec(text: &str) -> Result<GroupSpec, GroupError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    if cur.eat("0") {
        cur.skip_ws();
        if !cur.at_end() {
            return Err(ParseError { pos: cur.pos, message: "trailing input".into() }.into());
        }
        return Ok(GroupSpec::trivial());
    }
    let mut components = Vec::new();
    loop {
        cur.skip_ws();
        let term_start = cur.pos;
        cur.expect("Z")?;
        let kinds: Vec<ComponentKind> = if cur.eat("(") {
            cur.skip_ws();
            let num_pos = cur.pos;
            let n = cur.nat()?;
            cur.skip_ws();
            let kinds = if cur.eat("^") {
                cur.skip_ws();
                if cur.eat("inf") {
                    if !super::is_prime(n) {
                        return Err(ParseError { pos: num_pos, message: format!("{n} is not prime") }.into());
                    }
                    vec![ComponentKind::Prufer { p: n }]
                } else {
                    let a_pos = cur.pos;
                    let a = cur.nat()?;
                    if !super::is_prime(n) {
                        return Err(ParseError { pos: num_pos, message: format!("{n} is not prime") }.into());
                    }
                    let a = u32::try_from(a).or_else(|_| err(a_pos, "exponent too large"))?;
                    vec![ComponentKind::Cyclic { p: n, a }]
                }
            } else {
                if n < 2 {
                    return Err(ParseError { pos: num_pos, message: "cyclic order must be at least 2".into() }.into());
                }
                factor(n).into_iter().map(|(p, a)| ComponentKind::Cyclic { p, a }).collect()
            };
            cur.skip_ws();
            cur.expect(")")?;
            kinds
        } else {
            vec![ComponentKind::IntegerZ]
        };
        cur.skip_ws();
        let multiplicity = if cur.eat("^") {
            cur.skip_ws();
            if cur.eat("w") {
                Cardinality::CountableInfinite
            } else if cur.eat("W") {
                Cardinality::SymbolicInfinite
            } else {
                let pos = cur.pos;
                let m = cur.nat()?;
                if m == 0 {
                    return Err(ParseError { pos, message: "multiplicity must be at least 1".into() }.into());
                }
                Cardinality::Finite(m)
            }
        } else {
            Cardinality::Finite(1)
        };
        for kind in kinds {
            components.push(Component { kind, multiplicity });
        }
        cur.skip_ws();
        if cur.at_end() {
            break;
        }
        if !cur.eat("+") {
            return Err(
                ParseError { pos: cur.pos, message: format!("expected `+` after term at byte {term_start}") }.into()
            );
        }
    }
    GroupSpec::new(components)
}

pub(crate) fn write_spec(spec: &GroupSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if spec.components.is_empty() {
        return write!(f, "0");
    }
    for (i, c) in spec.components.iter().enumerate() {
        if i > 0 {
            write!(f, " + ")?;
        }
        match c.kind {
            ComponentKind::IntegerZ => write!(f, "Z")?,
            ComponentKind::Cyclic { p, a } => write!(f, "Z({})", p.pow(a))?,
            ComponentKind::Prufer { p } => write!(f, "Z({p}^inf)")?,
        }
        match c.multiplicity {
            Cardinality::Finite(1) => {}
            Cardinality::Finite(n) => write!(f, "^{n}")?,
            Cardinality::CountableInfinite => write!(f, "^w")?,
            Cardinality::SymbolicInfinite => write!(f, "^W")?,
        }
    }
    Ok(())
}

/// Parses one coordinate value for a component of the given kind.
pub(crate) fn parse_value(kind: ComponentKind, text: &str, offset: usize) -> Result<ComponentValue, ParseError> {
    let mut cur = Cursor::new(text);
    let value = parse_value_at(kind, &mut cur).map_err(|e| ParseError { pos: e.pos + offset, ..e })?;
    if !cur.at_end() {
        return err(cur.pos + offset, "trailing input in value");
    }
    Ok(value)
}

fn parse_value_at(kind: ComponentKind, cur: &mut Cursor<'_>) -> Result<ComponentValue, ParseError> {
    let n = cur.bigint()?;
    match kind {
        ComponentKind::IntegerZ => Ok(ComponentValue::Integer(n)),
        ComponentKind::Cyclic { p, a } => {
            let q = BigInt::from(p.pow(a));
            let r = ((n % &q) + &q) % &q;
            Ok(ComponentValue::Residue(r.to_u64().unwrap()))
        }
        ComponentKind::Prufer { p } => {
            if !cur.eat("/") {
                if n.is_zero() {
                    return Ok(ComponentValue::Prufer(PruferValue::zero(p)));
                }
                return err(cur.pos, "expected fraction `a/p^t` for a Prufer coordinate");
            }
            let p_pos = cur.pos;
            let q = cur.nat()?;
            if q != p {
                return err(p_pos, format!("denominator base {q} does not match prime {p}"));
            }
            cur.expect("^")?;
            let t_pos = cur.pos;
            let t = cur.nat()?;
            let t = u32::try_from(t).or_else(|_| err(t_pos, "exponent too large"))?;
            Ok(ComponentValue::Prufer(PruferValue::new(p, n, t)))
        }
    }
}

pub fn parse_element(spec: Arc<GroupSpec>, text: &str) -> Result<Element, GroupError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    if cur.eat("0") {
        cur.skip_ws();
        if cur.at_end() {
            return Ok(Element::zero(spec));
        }
        cur.pos = 0;
        cur.skip_ws();
    }
    let mut terms = Vec::new();
    loop {
        cur.skip_ws();
        // The value needs the component kind, which follows it; scan ahead.
        let value_start = cur.pos;
        let star = match cur.src[value_start..].find('*') {
            Some(i) => value_start + i,
            None => return Err(ParseError { pos: value_start, message: "expected `v*e(c,i)`".into() }.into()),
        };
        cur.pos = star + 1;
        cur.expect("e(")?;
        cur.skip_ws();
        let comp = cur.nat()? as usize;
        cur.skip_ws();
        cur.expect(",")?;
        cur.skip_ws();
        let copy = cur.nat()?;
        cur.skip_ws();
        cur.expect(")")?;
        let coord = Coordinate::new(comp, copy);
        let kind = spec.check_coordinate(coord)?;
        let value_text = cur.src[value_start..star].trim_end();
        let value = parse_value(kind, value_text, value_start)?;
        terms.push((coord, value));
        cur.skip_ws();
        if cur.at_end() {
            break;
        }
        if !cur.eat("+") {
            return Err(ParseError { pos: cur.pos, message: "expected `+`".into() }.into());
        }
    }
    Element::from_terms(spec, terms)
}

pub(crate) fn write_element(e: &Element, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.support.is_empty() {
        return write!(f, "0");
    }
    for (i, (c, v)) in e.support.iter().enumerate() {
        if i > 0 {
            write!(f, " + ")?;
        }
        write!(f, "{}*e({},{})", v, c.component, c.copy)?;
    }
    Ok(())
}
