//! Per-arc flag counts and their distance from the reference laws.
//!
//! On a carousel the `C` flag of arc `x → x+i` is `i`, so the normalized
//! values form a grid on `[0, 1/2]`. On a random tournament each single flag
//! concentrates at 1/4.

use tourney::counting::{
    arc_flag_counts, arc_flag_distribution, ks_distance, FlagSelector, ReferenceDistribution,
};
use tourney::generators::{carousel, random_uniform};

fn main() -> tourney::Result<()> {
    let t = carousel(9)?;
    for v in 1..=4 {
        let f = arc_flag_counts(&t, 0, v)?;
        println!("arc 0->{v}: o={} i={} tr={} c={}", f.o, f.i, f.tr, f.c);
    }

    let uniform = ReferenceDistribution::UniformOnInterval { q: 0.5 };
    println!("\ncarousel C flag vs U(0, 1/2)");
    for n in [5usize, 25, 250] {
        let d = arc_flag_distribution(&carousel(2 * n + 1)?, FlagSelector::C)?;
        let ks = ks_distance(&d, &uniform)?;
        let n = n as f64;
        // the sup sits just below the top atom of the grid {i/(2n-1)}
        println!("  m={:>4}  ks={ks:.6}  (3n-2)/(n(2n-1))={:.6}", 2.0 * n + 1.0, (3.0 * n - 2.0) / (n * (2.0 * n - 1.0)));
    }

    println!("\nrandom(801) single flags vs point mass at 1/4");
    let r = random_uniform(801, 5)?;
    for sel in FlagSelector::SINGLE {
        let d = arc_flag_distribution(&r, sel)?;
        println!("  {sel:>3}: mean={:.4} ks={:.4}", d.mean(), ks_distance(&d, &ReferenceDistribution::PointMass { p: 0.25 })?);
    }

    let d = arc_flag_distribution(&carousel(21)?, FlagSelector::CTr)?;
    print!("\nctr histogram on carousel(21):\n{}", d.to_histogram_csv(5)?);
    Ok(())
}
