//! Quasi-carousel and quasi-random diagnostic reports on contrasting inputs.

use tourney::analysis::{quasi_carousel_report, quasi_random_report, ReportConfig};
use tourney::generators::{carousel, digraphon_sample, random_uniform, transitive};

fn main() -> tourney::Result<()> {
    let config = ReportConfig::default();
    let inputs = [
        ("carousel(1001)", carousel(1001)?),
        ("digraphon(1001)", digraphon_sample(1001, 3)?),
        ("random(1001)", random_uniform(1001, 3)?),
        ("transitive(1001)", transitive(1001)?),
    ];
    for (name, t) in &inputs {
        let c = quasi_carousel_report(t, &config)?;
        let r = quasi_random_report(t, &config)?;
        println!(
            "{name:<18} carousel: {:<4} {:?}\n{:<18} random:   {:<4} {:?}",
            if c.pass { "PASS" } else { "FAIL" },
            c.failures(),
            "",
            if r.pass { "PASS" } else { "FAIL" },
            r.failures(),
        );
    }
    let report = quasi_carousel_report(&inputs[0].1, &config)?;
    println!("\n{}", report.to_json());
    Ok(())
}
