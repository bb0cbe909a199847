//! Bismut connection of a left-invariant metric on SU(3): torsion, holonomy and flatness.

use samelson::compact_algebra::build_compact_form;
use samelson::hermitian::HermitianStructure;
use samelson::root_data::build_root_system;
use samelson::Surd;

fn main() -> samelson::Result<()> {
    let rs = build_root_system(&"A2".parse()?)?;
    let alg = build_compact_form(&rs)?;
    for lambda in [[1, 1, 1], [1, 2, 3]] {
        let mut h = HermitianStructure::bi_invariant(&alg)?;
        h.lambda = lambda.iter().map(|&x| Surd::int(x)).collect();
        let conn = h.bismut_connection(&alg)?;
        let curv = conn.curvature(&alg);
        println!("lambda = {lambda:?}");
        println!("  torsion terms: {}", h.torsion_form(&alg)?.entries().len());
        println!("  preserves g: {}, preserves I: {}", conn.preserves_metric(&h.metric(&alg)), conn.preserves(&h.complex_structure(&alg)));
        println!("  flat: {} ({} nonzero curvature entries)", curv.is_flat(), curv.entries.len());
    }
    Ok(())
}
