// Pairing characters with elements, convergence scans and the p-adic
// multiple test.

use std::error::Error;

use num_bigint::{BigInt, BigUint};
use tseq::character::{convergence_scan, padic_multiple_check, Character, PadicTrunc};
use tseq::group::{Element, GroupSpec, PruferValue};
use tseq::tseq::{Sequence, SequenceRecipe};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let spec = std::sync::Arc::new(GroupSpec::parse("Z + Z(3^inf)")?);
    let chi = Character::parse(spec.clone(), "x(0,0)=1/3; x(1,0)=3*1")?;
    let g = Element::parse(spec, "1*e(0,0) + 1/3^2*e(1,0)")?;
    println!("({g}, {chi}) = {}", chi.pair(&g)?);

    let recipe = SequenceRecipe::lemma4(3, PruferValue::zero(3), GroupSpec::parse("Z(2)")?);
    let ambient = Sequence::new(recipe.clone())?.ambient().clone();
    let scan = convergence_scan(&recipe, &Character::parse(ambient, "x(0,0)=5*1")?, (10, 20))?;
    for p in scan.points.iter().filter(|p| p.n % 2 == 0) {
        println!("  n = {:2}: angle {:>12}, deviation {:.3e}", p.n, p.angle, p.deviation);
    }

    let seven = PadicTrunc::from_integer(3, &BigInt::from(7), 25);
    let m = padic_multiple_check(&seven, (1, 25), &BigUint::from(10u32))?;
    println!("7·1 in Δ_3 is a small multiple of 1: {m:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
