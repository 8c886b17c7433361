// Terms of the four constructions and the numbers behind them.

use std::error::Error;

use tseq::group::GroupSpec;
use tseq::tseq::{f, f_tilde, Sequence, SequenceRecipe};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("f(2,2) = {}, f~(2,2) = {}", f(2, 2), f_tilde(2, 2));

    let recipes = [
        SequenceRecipe::lemma2(2, GroupSpec::parse("Z(3)")?),
        SequenceRecipe::lemma3(2, GroupSpec::parse("Z(3)")?),
        SequenceRecipe::lemma4(3, tseq::group::PruferValue::zero(3), GroupSpec::parse("Z(2)")?),
        SequenceRecipe::lemma5_uniform(4, 2),
    ];
    for recipe in recipes {
        let seq = Sequence::new(recipe)?;
        let first = seq.first_index();
        println!("{} on {}", seq.recipe().tag(), seq.ambient());
        for (n, d) in seq.dump(first..=first + 3)? {
            let text = d.to_string();
            let short = if text.len() > 60 { format!("{}…", &text[..60]) } else { text };
            println!("  d_{n} = {short}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
