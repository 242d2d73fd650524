//! The `W4` density curve of the layered construction: closed form, numeric
//! maximization, and a sampled tournament at the optimal ratio.

use tourney::analysis::{
    maximize_phi_t, phi_t_argmax_closed_form, phi_t_grid, phi_t_max_closed_form, simulate_layered_w4,
};

fn main() -> tourney::Result<()> {
    for p in phi_t_grid(9) {
        println!("t={:.2}  phi={:.6}", p.t, p.value);
    }
    let best = maximize_phi_t(1e-10)?;
    println!("\ngolden section: t*={:.8} phi={:.8}", best.t, best.value);
    println!("closed form:    t*={:.8} phi={:.8}", phi_t_argmax_closed_form(), phi_t_max_closed_form());

    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let sim = simulate_layered_w4(n, best.t, 1, 200_000)?;
    println!(
        "\nlayered n={n} layers={:?}\n  sampled W4={:.5} ± {:.5}, limit {:.5}",
        sim.layer_sizes, sim.sampled_w4, sim.std_error, sim.phi_t
    );
    Ok(())
}
