//! Elements of the quasicyclic group ℤ(p^∞), kept as reduced fractions
//! `c / p^τ` inside ℚ/ℤ.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `p^e` as a big integer.
pub fn pow_p(p: u64, e: u32) -> BigUint {
    if p == 2 {
        BigUint::one() << (e as usize)
    } else {
        num_traits::pow(BigUint::from(p), e as usize)
    }
}

/// A point `num / p^exp` of ℤ(p^∞) ⊂ ℚ/ℤ.
///
/// Invariants: `num < p^exp`; either `num == 0 && exp == 0` or `p ∤ num`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PruferValue {
    p: u64,
    num: BigUint,
    exp: u32,
}

impl PruferValue {
    pub fn zero(p: u64) -> Self {
        PruferValue { p, num: BigUint::zero(), exp: 0 }
    }

    /// `1 / p^n`.
    pub fn unit_fraction(p: u64, n: u32) -> Self {
        Self::new(p, BigInt::one(), n)
    }

    /// Builds `num / p^exp` reduced modulo 1. Negative numerators wrap.
    pub fn new(p: u64, num: BigInt, exp: u32) -> Self {
        let modulus = BigInt::from(pow_p(p, exp));
        let wrapped = num.mod_floor(&modulus);
        let (_, mag) = wrapped.into_parts();
        Self::reduced(p, mag, exp)
    }

    /// Reduces a nonnegative numerator already known to be `< p^exp`.
    fn reduced(p: u64, mut num: BigUint, mut exp: u32) -> Self {
        if num.is_zero() {
            return Self::zero(p);
        }
        if p == 2 {
            let tz = num.trailing_zeros().unwrap_or(0).min(exp as u64) as u32;
            num >>= tz as usize;
            exp -= tz;
        } else {
            let bp = BigUint::from(p);
            while exp > 0 {
                let (q, r) = num.div_rem(&bp);
                if !r.is_zero() {
                    break;
                }
                num = q;
                exp -= 1;
            }
        }
        if exp == 0 {
            return Self::zero(p);
        }
        PruferValue { p, num, exp }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    /// Exponent τ of the reduced denominator `p^τ`.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The element order, which is the reduced denominator `p^τ`.
    pub fn order(&self) -> BigUint {
        pow_p(self.p, self.exp)
    }

    pub fn add(&self, other: &PruferValue) -> PruferValue {
        debug_assert_eq!(self.p, other.p);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        let lifted = &lo.num * pow_p(self.p, hi.exp - lo.exp);
        let mut sum = &hi.num + lifted;
        let modulus = pow_p(self.p, hi.exp);
        if sum >= modulus {
            sum -= &modulus;
        }
        Self::reduced(self.p, sum, hi.exp)
    }

    pub fn neg(&self) -> PruferValue {
        if self.is_zero() {
            return self.clone();
        }
        PruferValue { p: self.p, num: pow_p(self.p, self.exp) - &self.num, exp: self.exp }
    }

    pub fn mul_int(&self, n: &BigInt) -> PruferValue {
        if self.is_zero() || n.is_zero() {
            return Self::zero(self.p);
        }
        let num = BigInt::from_biguint(Sign::Plus, self.num.clone()) * n;
        Self::new(self.p, num, self.exp)
    }

    /// Representative in `[0, 1)` as an exact rational.
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(
            BigInt::from_biguint(Sign::Plus, self.num.clone()),
            BigInt::from_biguint(Sign::Plus, pow_p(self.p, self.exp)),
        )
    }

    /// Compares representatives in `[0, 1)`.
    pub fn cmp_representative(&self, other: &PruferValue) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = &self.num * pow_p(self.p, e - self.exp);
        let b = &other.num * pow_p(other.p, e - other.exp);
        a.cmp(&b)
    }
}

impl fmt::Debug for PruferValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PruferValue({})", self)
    }
}

impl fmt::Display for PruferValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}^{}", self.num, self.p, self.exp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirds_cancel() {
        let a = PruferValue::new(3, 1.into(), 1);
        let b = PruferValue::new(3, 2.into(), 1);
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn reduces_common_factors() {
        let v = PruferValue::new(2, 12.into(), 5);
        assert_eq!(v.numerator(), &BigUint::from(3u32));
        assert_eq!(v.exponent(), 3);
        let w = PruferValue::new(5, 10.into(), 2);
        assert_eq!(w.to_string(), "2/5^1");
    }

    #[test]
    fn negative_numerators_wrap() {
        let v = PruferValue::new(2, (-1).into(), 2);
        assert_eq!(v.to_string(), "3/2^2");
        assert_eq!(v.neg().to_string(), "1/2^2");
    }

    #[test]
    fn scalar_multiple() {
        let v = PruferValue::new(5, 1.into(), 2);
        assert_eq!(v.mul_int(&5.into()).to_string(), "1/5^1");
        assert!(v.mul_int(&25.into()).is_zero());
    }
}
