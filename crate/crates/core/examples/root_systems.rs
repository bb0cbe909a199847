//! Positive roots and Killing Gram matrices for a few Cartan types.

use samelson::root_data::{build_root_system, killing_gram, CartanSpec};
use samelson::scalar::fmt_q;

fn main() -> samelson::Result<()> {
    for name in ["A2", "B2", "G2", "B4", "D4", "A2xA2"] {
        let spec: CartanSpec = name.parse()?;
        let rs = build_root_system(&spec)?;
        println!("{spec}: rank {}, {} positive roots", rs.rank, rs.p());
        let highest = &rs.positive_roots[rs.by_height_desc()[0]];
        println!("  highest root {highest:?}");
        for row in killing_gram(&spec)? {
            let row: Vec<String> = row.iter().map(fmt_q).collect();
            println!("  [{}]", row.join(", "));
        }
    }
    Ok(())
}
