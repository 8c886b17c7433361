// MinAP admissibility and NR membership for bounded groups, with the
// recommended construction.

use std::error::Error;

use tseq::group::GroupSpec;
use tseq::invariants::{admits_minap, nr_membership_bounded};
use tseq::reduction::{classify_reduction, ReductionFlags};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for g in ["Z(2)^w + Z(4)^3", "Z(2)^w + Z(4)^w", "Z(3)^w"] {
        let spec = GroupSpec::parse(g)?;
        let d = admits_minap(&spec)?;
        match &d.certificate {
            None => println!("{g}: admits a MinAP topology"),
            Some(c) => println!("{g}: no MinAP topology ({c})"),
        }
    }

    for (g, h) in [("Z(2)^w + Z(4)", "Z(4)"), ("Z(4)^w", "Z(2)"), ("Z(4)^w + Z(9)", "Z(2) + Z(3)")] {
        let (gs, hs) = (GroupSpec::parse(g)?, GroupSpec::parse(h)?);
        let d = nr_membership_bounded(&gs, &hs)?;
        print!("H = {h} in G = {g}: {}", if d.member { "radical" } else { "not a radical" });
        if d.member {
            let case = classify_reduction(&gs, &hs, &ReductionFlags::default())?;
            print!(" via {}", case.tag);
        }
        println!();
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
