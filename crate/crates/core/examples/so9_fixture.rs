//! Check the SO(9) matrix fixture against the abstract B4 build.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use samelson::compact_algebra::build_compact_form;
use samelson::root_data::build_root_system;
use samelson::so9::{fixture_algebra, verify_family, verify_structure_equations, So9GoldenData};

fn main() -> samelson::Result<()> {
    let data = So9GoldenData::load()?;
    let rs = build_root_system(&"B4".parse()?)?;
    let alg = build_compact_form(&rs)?;
    let fixture = fixture_algebra(&data)?;
    let structure = verify_structure_equations(&data, &fixture, &alg)?;
    for e in &structure.equations {
        let mark = if e.verbatim { "ok" } else if e.corrected { "erratum" } else { "FAIL" };
        println!("d phi{:<2} {:>2} terms  {mark}", e.k, e.terms);
    }
    println!("isomorphic to B4: {}", structure.isomorphic);
    let family = verify_family(&data, &rs, &alg, &fixture, &mut ChaCha8Rng::seed_from_u64(1))?;
    for c in &family.coefficients {
        println!("  phi{:<2}: {} -> {}", c.k, c.displayed, c.computed);
    }
    Ok(())
}
