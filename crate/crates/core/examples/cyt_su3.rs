//! A non-bi-invariant CYT metric on SU(3), found numerically and certified exactly.

use samelson::compact_algebra::build_compact_form;
use samelson::hermitian::HermitianStructure;
use samelson::root_data::build_root_system;
use samelson::solvers::{solve_cyt, NewtonOptions};
use samelson::Surd;

fn main() -> samelson::Result<()> {
    let rs = build_root_system(&"A2".parse()?)?;
    let alg = build_compact_form(&rs)?;
    let mut start = HermitianStructure::bi_invariant(&alg)?;
    start.lambda = vec![Surd::int(2); 3];
    let sol = solve_cyt(&alg, &start, None, NewtonOptions::default())?;
    println!("Newton: {} steps, residual {:.2e}", sol.iterations, sol.residual);
    println!("lambda = {:?}", sol.lambda);
    if let Some(q) = &sol.certified {
        let h = HermitianStructure { lambda: q.iter().map(|&x| Surd::from_q(x)).collect(), ..start };
        println!("exact rho_B = 0: {}", h.bismut_ricci(&alg)?.is_zero());
        println!("SKT: {}", h.ddc(&alg)?.is_zero());
    }
    Ok(())
}
