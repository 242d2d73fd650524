//! Exact order-3 and order-4 profile of carousel tournaments.
//!
//! The carousel maximizes cyclic triangles and contains no `W4` or `L4`, so
//! its `R4` density approaches 1/2 as the order grows.

use tourney::counting::count_profile;
use tourney::generators::carousel;
use tourney::SmallClass4;

fn main() -> tourney::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "m", "p(C3)", "p(TR4)", "p(R4)", "W4+L4");
    for m in [5, 9, 21, 101, 501] {
        let p = count_profile(&carousel(m)?)?;
        let q = &p.quads;
        println!(
            "{:>6} {:>10.6} {:>10.6} {:>10.6} {:>10}",
            m,
            p.triples.p_c3().value(),
            q.density(SmallClass4::Tr4).value(),
            q.density(SmallClass4::R4).value(),
            q.w4 + q.l4,
        );
    }
    let p = count_profile(&carousel(11)?)?;
    println!("\n{}", serde_json::to_string_pretty(&p.to_json()).unwrap());
    Ok(())
}
