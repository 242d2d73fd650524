//! Exact identities linking per-arc flag sums to order-3 and order-4 counts.
//! Every residual is an integer and is zero on any tournament.

use tourney::analysis::identity_suite;
use tourney::generators::{carousel, layered, random_uniform, LayeredSpec};

fn main() -> tourney::Result<()> {
    let cases = [
        ("carousel(31)", carousel(31)?),
        ("random(64)", random_uniform(64, 11)?),
        ("layered(200, 0.3)", layered(&LayeredSpec::new(200, 0.3, 2)?)?),
    ];
    for (name, t) in &cases {
        println!("{name}");
        for r in identity_suite(t)? {
            println!("  {:<12} residual={:<3} holds={}", r.name, r.residual, r.holds());
        }
    }
    Ok(())
}
