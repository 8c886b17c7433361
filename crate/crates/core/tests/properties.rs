use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use tseq::akm::{enumerate_combinations, eq1_evaluate, evaluate, AkmQuery, Combination};
use tseq::character::{
    annihilator, Character, CircleValue, DualValue, FiniteGroup, PadicTrunc, PadicValue, Truncation,
};
use tseq::group::{ComponentKind, ComponentValue, Coordinate, Element, GroupSpec, Height, Order, PruferValue};
use tseq::invariants::{admits_minap, nr_membership_bounded, DecisionError};
use tseq::reduction::{classify_reduction, ReductionFlags};
use tseq::tseq::{beta_prefix, f, f_tilde, t_of, triangular, JRule, Sequence, SequenceRecipe};

const MIXED: &str = "Z + Z(4)^2 + Z(3^inf) + Z(5)";

fn mixed() -> Arc<GroupSpec> {
    Arc::new(GroupSpec::parse(MIXED).unwrap())
}

fn element() -> impl Strategy<Value = Element> {
    (-50i64..50, 0u64..4, 0u64..4, 0i64..300, 0u32..5, 0u64..5).prop_map(|(z, a, b, c, t, d)| {
        let terms = vec![
            (Coordinate::new(0, 0), ComponentValue::Integer(z.into())),
            (Coordinate::new(1, 0), ComponentValue::Residue(a)),
            (Coordinate::new(1, 1), ComponentValue::Residue(b)),
            (Coordinate::new(2, 0), ComponentValue::Prufer(PruferValue::new(3, c.into(), t))),
            (Coordinate::new(3, 0), ComponentValue::Residue(d)),
        ];
        Element::from_terms(mixed(), terms.into_iter().filter(|(_, v)| !v.is_zero())).unwrap()
    })
}

fn torsion_element() -> impl Strategy<Value = Element> {
    element().prop_map(|e| {
        let spec = Arc::new(GroupSpec::parse("Z(4)^2 + Z(3^inf) + Z(5)").unwrap());
        e.relabel(spec, |c| (c.component > 0).then(|| Coordinate::new(c.component - 1, c.copy))).unwrap()
    })
}

fn character() -> impl Strategy<Value = Character> {
    (0i64..60, 1i64..60, 0u64..4, 0u64..4, proptest::collection::vec(0u64..3, 6), 0u64..5).prop_map(
        |(n, d, a, b, digits, e)| {
            let values = vec![
                (Coordinate::new(0, 0), DualValue::Circle(CircleValue::exact(BigRational::new(n.into(), d.into())))),
                (Coordinate::new(1, 0), DualValue::Residue(a)),
                (Coordinate::new(1, 1), DualValue::Residue(b)),
                (Coordinate::new(2, 0), DualValue::Padic(PadicValue::Trunc(PadicTrunc::new(3, digits).unwrap()))),
                (Coordinate::new(3, 0), DualValue::Residue(e)),
            ];
            Character::from_values(mixed(), values).unwrap()
        },
    )
}

fn primes_of(n: &BigUint) -> Vec<u64> {
    let mut m = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while m > BigUint::from(1u32) {
        if (&m % d).is_zero() {
            out.push(d);
            while (&m % d).is_zero() {
                m /= d;
            }
        }
        d += 1;
    }
    out
}

/// Bounded spec built from `(p, a, multiplicity)` triples, `None` meaning ω.
fn bounded_spec(parts: &[(u64, u32, Option<u64>)]) -> GroupSpec {
    let text: Vec<String> = parts
        .iter()
        .map(|(p, a, m)| match m {
            Some(m) => format!("Z({p}^{a})^{m}"),
            None => format!("Z({p}^{a})^w"),
        })
        .collect();
    GroupSpec::parse(&text.join(" + ")).unwrap()
}

fn bounded_parts() -> impl Strategy<Value = Vec<(u64, u32, Option<u64>)>> {
    proptest::collection::vec(
        (prop_oneof![Just(2u64), Just(3)], 1u32..4, prop_oneof![(1u64..4).prop_map(Some), Just(None)]),
        1..4,
    )
    .prop_map(|mut v| {
        if v.iter().all(|(_, _, m)| m.is_some()) {
            v[0].2 = None;
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn add_is_associative_and_commutative(x in element(), y in element(), z in element()) {
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().add(&z).unwrap(), x.add(&y.add(&z).unwrap()).unwrap());
    }

    #[test]
    fn scalar_multiplication_distributes(g in element(), m in -40i64..40, n in -40i64..40) {
        let lhs = g.scalar_mul(&BigInt::from(m + n));
        prop_assert_eq!(lhs, g.scalar_mul(&m.into()).add(&g.scalar_mul(&n.into())).unwrap());
    }

    #[test]
    fn order_kills_and_is_minimal(g in torsion_element()) {
        let Order::Finite(o) = g.order() else { panic!("torsion element of infinite order") };
        prop_assert!(g.scalar_mul(&BigInt::from(o.clone())).is_zero());
        for q in primes_of(&o) {
            prop_assert!(!g.scalar_mul(&BigInt::from(&o / q)).is_zero());
        }
    }

    #[test]
    fn multiplying_by_p_raises_height(a in 0u64..8, b in 0u64..8, k in 0u32..4) {
        let spec = Arc::new(GroupSpec::parse("Z(8)^2").unwrap());
        let g = Element::from_terms(spec, [
            (Coordinate::new(0, 0), ComponentValue::Residue(a)),
            (Coordinate::new(0, 1), ComponentValue::Residue(b)),
        ].into_iter().filter(|(_, v)| !v.is_zero())).unwrap();
        let h = g.height(2).unwrap();
        let hk = g.scale(1 << k).height(2).unwrap();
        if let (Height::Finite(x), Height::Finite(y)) = (h, hk) {
            prop_assert!(y >= x + k);
        }
        if h == Height::Infinite {
            prop_assert_eq!(hk, Height::Infinite);
        }
    }

    #[test]
    fn prufer_values_stay_reduced(c in -500i64..500, t in 0u32..6, d in -500i64..500, s in 0u32..6, m in -30i64..30) {
        let x = PruferValue::new(3, c.into(), t);
        let y = PruferValue::new(3, d.into(), s);
        for v in [x.add(&y), x.neg(), x.mul_int(&m.into())] {
            if v.is_zero() {
                prop_assert_eq!(v.exponent(), 0);
            } else {
                prop_assert!(!(v.numerator() % 3u32).is_zero());
                prop_assert!(v.numerator() < &num_traits::pow(BigUint::from(3u32), v.exponent() as usize));
            }
        }
    }

    #[test]
    fn minap_agrees_with_self_membership(parts in bounded_parts()) {
        let g = bounded_spec(&parts);
        let minap = admits_minap(&g).unwrap();
        let nr = nr_membership_bounded(&g, &g).unwrap();
        prop_assert_eq!(minap.admits, nr.member);
    }

    #[test]
    fn membership_survives_smaller_exponents(parts in bounded_parts(), hparts in proptest::collection::vec((prop_oneof![Just(2u64), Just(3)], 1u32..4, 1u64..3), 1..3), drop in 0u32..3) {
        let g = bounded_spec(&parts);
        let h = bounded_spec(&hparts.iter().map(|(p, a, m)| (*p, *a, Some(*m))).collect::<Vec<_>>());
        let smaller = bounded_spec(&hparts.iter().map(|(p, a, m)| (*p, (*a).saturating_sub(drop).max(1), Some(*m))).collect::<Vec<_>>());
        match nr_membership_bounded(&g, &h) {
            Err(DecisionError::NotEmbeddable { .. }) => {}
            Err(e) => panic!("{e}"),
            Ok(d) => {
                if d.member {
                    prop_assert!(nr_membership_bounded(&g, &smaller).unwrap().member);
                    prop_assert!(classify_reduction(&g, &h, &ReductionFlags::default()).is_ok());
                }
            }
        }
    }

    #[test]
    fn t_brackets_n(n in 1u64..10_000_000) {
        let t = t_of(n).unwrap();
        prop_assert!(triangular(t) <= n && n < triangular(t + 1));
    }

    #[test]
    fn f_has_the_stated_digits(p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], n in 2u32..7) {
        let digits = f(p, n).to_radix_le(p as u32);
        let ones: BTreeSet<u32> = (0..=n).map(|j| n.pow(3) - j * n).collect();
        for (i, d) in digits.iter().enumerate() {
            prop_assert_eq!(*d, u8::from(ones.contains(&(i as u32))));
        }
        prop_assert!(f(p, n) < num_traits::pow(BigUint::from(p), (n.pow(3) + 1) as usize));
    }

    #[test]
    fn f_tilde_is_bounded(p in prop_oneof![Just(2u64), Just(3), Just(5)], n in 1u32..7) {
        let bound = BigRational::new(BigInt::from(n + 1), BigInt::from(num_traits::pow(BigUint::from(p), (n.pow(3) - n * n) as usize)));
        prop_assert!(f_tilde(p, n).to_rational() < bound);
    }

    #[test]
    fn signed_sums_respect_the_bound(p in prop_oneof![Just(2u64), Just(3), Just(5)], k in 0u64..4, picks in proptest::collection::vec((1u32..7, any::<bool>()), 1..5)) {
        let mut coeff = [0i64; 7];
        for (r, neg) in picks.iter().take(k as usize + 1) {
            coeff[*r as usize] += if *neg { -1 } else { 1 };
        }
        let (ri, li): (Vec<u32>, Vec<i64>) = (1..7u32).filter(|r| coeff[*r as usize] != 0).map(|r| (r, coeff[r as usize])).unzip();
        prop_assume!(!ri.is_empty());
        let rv = *ri.last().unwrap();
        let e = eq1_evaluate(p, k, &ri, &li).unwrap();
        let outer = BigUint::from(k + 1) * num_traits::pow(BigUint::from(p), (rv.pow(3) + 1) as usize);
        prop_assert!(e.abs_sum < outer);
        prop_assert!(e.outer);
    }

    #[test]
    fn beta_increases_by_f_tilde(p in prop_oneof![Just(2u64), Just(3)], n in 0u64..4) {
        let rule = JRule::Identity;
        let b0 = beta_prefix(p, &rule, n).unwrap().to_rational();
        let b1 = beta_prefix(p, &rule, n + 1).unwrap().to_rational();
        prop_assert!(b1 > b0);
        let step = f_tilde(p, (2 * (n + 1)) as u32).to_rational();
        prop_assert_eq!(b1 - b0, step);
    }

    #[test]
    fn terms_are_nonzero(which in 0usize..4, p in prop_oneof![Just(2u64), Just(3)], offset in 0u64..60) {
        let h = GroupSpec::parse("Z(3) + Z(2)").unwrap();
        let recipe = match which {
            0 => SequenceRecipe::lemma2(p, h),
            1 => SequenceRecipe::lemma3(p, h),
            2 => SequenceRecipe::lemma4(p, PruferValue::zero(p), h),
            _ => SequenceRecipe::lemma5_uniform(4, 2),
        };
        let seq = Sequence::new(recipe).unwrap();
        let n = seq.first_index() + offset;
        let d = seq.term(n).unwrap();
        prop_assert!(!d.is_zero());
        if which == 0 && n.is_multiple_of(2) {
            prop_assert!(d.support().keys().all(|c| c.component == 0));
        }
    }

    #[test]
    fn windows_nest(m in 5u64..12, dm in 0u64..3, width in 0u64..3, k in 0u64..2) {
        let recipe = SequenceRecipe::lemma2(2, GroupSpec::parse("Z(3)").unwrap());
        let cap = m + dm + width;
        let wide: BTreeSet<Combination> = enumerate_combinations(&AkmQuery::new(recipe.clone(), k, m, cap).unwrap()).collect();
        let narrow: Vec<Combination> = enumerate_combinations(&AkmQuery::new(recipe.clone(), k, m + dm, cap).unwrap()).collect();
        prop_assert!(narrow.iter().all(|c| wide.contains(c)));
        let larger: BTreeSet<Combination> = enumerate_combinations(&AkmQuery::new(recipe.clone(), k + 1, m, cap).unwrap()).collect();
        prop_assert!(wide.iter().all(|c| larger.contains(c)));
        for c in &narrow {
            prop_assert!(c.weight() <= k + 1);
            evaluate(c, &recipe).unwrap();
        }
    }

    #[test]
    fn pairing_is_bilinear(chi in character(), psi in character(), x in element(), y in element()) {
        let lhs = chi.pair(&x.add(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, chi.pair(&x).unwrap().add(&chi.pair(&y).unwrap()));
        let lhs = chi.add(&psi).unwrap().pair(&x).unwrap();
        prop_assert_eq!(lhs, chi.pair(&x).unwrap().add(&psi.pair(&x).unwrap()));
    }

    #[test]
    fn finite_duality(moduli in proptest::collection::vec(prop_oneof![Just(2u64), Just(3), Just(4), Just(5), Just(8), Just(9)], 1..4)) {
        prop_assume!(moduli.iter().product::<u64>() <= 512);
        let text: Vec<String> = moduli.iter().map(|q| format!("Z({q})")).collect();
        let spec = Arc::new(GroupSpec::parse(&text.join(" + ")).unwrap());
        let copies = spec.components().iter().map(|c| c.multiplicity.finite().unwrap()).collect();
        let g = FiniteGroup::new(spec, &Truncation { copies }).unwrap();
        let chars: Vec<Character> = (0..g.order()).map(|i| g.character(&g.decode(i))).collect();
        let distinct: BTreeSet<String> = chars.iter().map(|c| c.to_string()).collect();
        prop_assert_eq!(distinct.len() as u64, g.order());
        prop_assert_eq!(annihilator(&g, &chars).unwrap().members, vec![0]);
        prop_assert_eq!(annihilator(&g, &[]).unwrap().order(), g.order());
    }

    #[test]
    fn padic_multiples_are_recognized(p in prop_oneof![Just(2u64), Just(3), Just(5)], m in -1000i64..1000) {
        let x = PadicTrunc::from_integer(p, &BigInt::from(m), 30);
        let bound = BigUint::from(m.unsigned_abs());
        let got = tseq::character::padic_multiple_check(&x, (1, 30), &bound).unwrap();
        prop_assert_eq!(got, Some(BigInt::from(m)));
        if m.abs() > 0 && m.abs().is_odd() {
            let tighter = BigUint::from(m.unsigned_abs() - 1);
            prop_assert_eq!(tseq::character::padic_multiple_check(&x, (1, 30), &tighter).unwrap(), None);
        }
    }
}

#[test]
fn kind_helpers_are_consistent() {
    for (k, p, q) in [(ComponentKind::Cyclic { p: 3, a: 2 }, Some(3), Some(9)), (ComponentKind::IntegerZ, None, None)] {
        assert_eq!(k.prime(), p);
        assert_eq!(k.modulus(), q);
    }
}
