//! The Chevalley–Eilenberg differential on su(3): d² = 0 and Leibniz.

use samelson::compact_algebra::build_compact_form;
use samelson::exterior::Form;
use samelson::root_data::build_root_system;
use samelson::Surd;

fn main() -> samelson::Result<()> {
    let rs = build_root_system(&"A2".parse()?)?;
    let alg = build_compact_form(&rs)?;
    let n = alg.dim();
    let mut worst = 0usize;
    for i in 0..n {
        let e = Form::<Surd>::covector(n, i);
        let de = e.d(&alg)?;
        worst = worst.max(de.d(&alg)?.entries().len());
        for j in 0..n {
            let f = Form::<Surd>::covector(n, j);
            let lhs = e.wedge(&f)?.d(&alg)?;
            let rhs = de.wedge(&f)?.sub(&e.wedge(&f.d(&alg)?)?);
            assert_eq!(lhs, rhs);
        }
    }
    println!("d(d e^i) has {worst} nonzero terms for every i");
    println!("Leibniz rule holds on all {} pairs of covectors", n * n);
    let d_theta = Form::<Surd>::covector(n, alg.x(2)).d(&alg)?;
    for (idx, c) in d_theta.entries() {
        let names: Vec<&str> = idx.iter().map(|&i| alg.labels[i].as_str()).collect();
        println!("  d {}: {c} {}", alg.labels[alg.x(2)], names.join("^"));
    }
    Ok(())
}
