//! The SKT family on SO(9) and a random member of it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use samelson::compact_algebra::build_compact_form;
use samelson::root_data::build_root_system;
use samelson::scalar::fmt_q;
use samelson::solvers::solve_skt;

fn main() -> samelson::Result<()> {
    let group = std::env::args().nth(1).unwrap_or_else(|| "B4".into());
    let rs = build_root_system(&group.parse()?)?;
    let alg = build_compact_form(&rs)?;
    let family = solve_skt(&rs, &alg)?;
    println!("{group}: dimension {} in parameters {}", family.dimension(), family.parameters.join(", "));
    for g in &family.generators {
        let l: Vec<String> = g.lambda.iter().map(fmt_q).collect();
        println!("  d lambda / d {} = ({})", g.parameter, l.join(", "));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for theta in family.sample(&mut rng, 2) {
        let lambda: Vec<String> = family.lambda_at(&theta).iter().map(fmt_q).collect();
        println!("sample lambda = ({})", lambda.join(", "));
        println!("  ddcF = 0: {}", family.verify_point(&alg, &theta)?);
    }
    Ok(())
}
