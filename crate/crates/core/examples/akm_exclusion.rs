// Windowed check that a target avoids the signed sums A(k, m).

use std::error::Error;
use std::sync::Arc;

use tseq::akm::{eq1_evaluate, excludes, AkmQuery};
use tseq::group::{Element, GroupSpec};
use tseq::tseq::{m_bound, Sequence, SequenceRecipe};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let recipe = SequenceRecipe::lemma2(2, GroupSpec::parse("Z(3)")?);
    let ambient: Arc<GroupSpec> = Sequence::new(recipe.clone())?.ambient().clone();
    for target in ["1*e(0,0)", "1*e(1,0)", "-1*e(0,0) + 1*e(1,0)"] {
        let g = Element::parse(ambient.clone(), target)?;
        for k in 0..=1 {
            let m = m_bound(&recipe, &g, k)?;
            let report = excludes(&g, &AkmQuery::new(recipe.clone(), k, m, m + 12)?)?;
            println!("{report}");
            assert!(report.excluded());
        }
    }

    let e = eq1_evaluate(2, 1, &[2, 3], &[1, -1])?;
    println!("|f_2 - f_3| = {}, inner bound holds: {}", e.abs_sum, e.inner);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
