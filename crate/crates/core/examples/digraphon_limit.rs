//! Samples from the circular digraphon are locally transitive and approach
//! the carousel densities.

use tourney::counting::{quad_counts, triple_counts};
use tourney::generators::digraphon_sample_with_points;
use tourney::loctrans::{brouwer_order, is_locally_transitive};
use tourney::SmallClass4;

fn main() -> tourney::Result<()> {
    for n in [51, 201, 1001] {
        let (t, xs) = digraphon_sample_with_points(n, 7)?;
        let tri = triple_counts(&t)?;
        let q = quad_counts(&t)?;
        println!(
            "n={n:>5}  LT={}  p(C3)={:.4}  p(R4)={:.4}  p(TR4)={:.4}",
            is_locally_transitive(&t),
            tri.p_c3().value(),
            q.density(SmallClass4::R4).value(),
            q.density(SmallClass4::Tr4).value(),
        );
        if n == 51 {
            // the recovered cyclic order follows the points around the circle
            let order = brouwer_order(&t)?;
            let pts: Vec<String> = order.as_slice().iter().take(8).map(|&v| format!("{:.3}", xs[v])).collect();
            println!("  first points in cyclic order: {}", pts.join(" "));
        }
    }
    Ok(())
}
