//! Build the compact real form of G2 and check it.

use samelson::compact_algebra::build_compact_form;
use samelson::root_data::build_root_system;

fn main() -> samelson::Result<()> {
    let rs = build_root_system(&"G2".parse()?)?;
    let alg = build_compact_form(&rs)?;
    alg.check_jacobi()?;
    alg.check_invariance()?;
    println!("g2: dim {}, basis {}", alg.dim(), alg.labels.join(" "));
    println!("Killing form negative definite: {}", alg.killing_negative_definite());
    let (x, y) = (alg.x(0), alg.y(0));
    for &(k, ref c) in alg.bracket(x, y) {
        println!("  [{}, {}] has {} component {c}", alg.labels[x], alg.labels[y], alg.labels[k]);
    }
    Ok(())
}
