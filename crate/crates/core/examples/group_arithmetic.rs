// Group specs, elements and Prüfer arithmetic.

use std::error::Error;
use std::sync::Arc;

use tseq::group::{Element, GroupSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let spec = Arc::new(GroupSpec::parse("Z + Z(4)^w + Z(3^inf)")?);
    println!("G = {spec}");

    let x = Element::parse(spec.clone(), "2*e(0,0) + 3*e(1,5) + 1/3^2*e(2,0)")?;
    let y = Element::parse(spec.clone(), "-2*e(0,0) + 1*e(1,5) + 8/3^2*e(2,0)")?;
    let sum = x.add(&y)?;
    println!("x + y = {sum}");
    assert!(sum.is_zero());

    let z = x.scale(3);
    println!("3x = {z}, order {:?}", z.order());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
