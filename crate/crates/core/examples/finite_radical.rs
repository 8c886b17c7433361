// The radical of a finite truncation computed through its characters.

use std::error::Error;

use tseq::character::{radical_report, Expected, Truncation};
use tseq::tseq::{Sequence, SequenceRecipe};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for (multiplier, expected) in [(2, Expected::Targets), (1, Expected::Whole)] {
        let recipe = SequenceRecipe::lemma5_uniform(4, multiplier);
        let ambient = Sequence::new(recipe.clone())?.ambient().clone();
        let report = radical_report(&recipe, &Truncation::leading(&ambient, 6), 50, 100, &expected)?;
        println!(
            "e'_j = {multiplier}e_j: {} kept characters, annihilator of order {} = [{}], {:?}",
            report.kept_characters,
            report.annihilator_order,
            report.annihilator_generators.join(", "),
            report.verdict
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
