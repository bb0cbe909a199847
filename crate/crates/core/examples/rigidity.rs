//! Metrics that are both SKT and CYT are bi-invariant: random-start Newton runs.

use samelson::compact_algebra::build_compact_form;
use samelson::root_data::build_root_system;
use samelson::solvers::{solve_skt_cyt, RigidityOptions};

fn main() -> samelson::Result<()> {
    let opts = RigidityOptions { restarts: 20, ..Default::default() };
    for name in ["A2", "B2", "G2", "A2xA2", "B4"] {
        let rs = build_root_system(&name.parse()?)?;
        let alg = build_compact_form(&rs)?;
        let rep = solve_skt_cyt(&rs, &alg, opts)?;
        println!(
            "{name:6} converged {:>2}/{}  unique N = 0: {:5}  flat: {:?}  min eig L = {:.4}",
            rep.converged, opts.restarts, rep.unique_bi_invariant, rep.bismut_flat_at_origin, rep.l_min_eigenvalue
        );
    }
    Ok(())
}
