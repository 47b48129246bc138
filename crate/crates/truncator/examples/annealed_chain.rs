//! Redrawing the map at every step turns the truncator dynamics into a
//! Markov chain. Its one-step matrix, the increment laws of the power
//! sequence, first-return curves, and a two-step consistency check --
//! each exact law next to its Monte Carlo shadow.
//!
//! ```bash
//! cargo run --example annealed_chain
//! ```

use truncator::random_maps::{
    chapman_check, increment_chain_law, increment_chain_monte_carlo, return_time_distribution,
    step_matrix, MapMeasure,
};
use truncator::rng::{stream_rng, DEFAULT_SEED};
use truncator::Element;

fn main() -> truncator::Result<()> {
    // Under the uniform measure every transition row is flat.
    let uniform = MapMeasure::uniform(4)?;
    let matrix = step_matrix(&uniform);
    let g = Element::new(11, 4)?;
    assert!(matrix.row(g)?.iter().all(|&p| (p - 1.0 / 16.0).abs() < 1e-15));
    println!("uniform measure: one-step law is flat on all 16 states");

    // A seeded random product measure gives a lumpy chain.
    let mut rng = stream_rng(DEFAULT_SEED, 3);
    let nu = MapMeasure::random(4, &mut rng)?;
    let matrix = step_matrix(&nu);
    let row = matrix.row(g)?;
    let top = row
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    println!(
        "random measure: from {:?} the likeliest successor is state {} (p = {:.4})",
        g,
        top.0 + 1,
        top.1
    );

    // Increment law of the annealed power sequence: the p-th increment
    // mixes the rows of nu by the (p-1)-step state law. p = 1 is nu's
    // own row at g.
    let p1 = increment_chain_law(&nu, g, 1)?;
    assert_eq!(p1, nu.row(g)?.to_vec());
    for p in [2u32, 3, 4] {
        let law = increment_chain_law(&nu, g, p)?;
        let total: f64 = law.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        let counts = increment_chain_monte_carlo(&nu, g, p, 200_000, 9)?;
        let worst = law
            .iter()
            .zip(&counts)
            .map(|(&q, &c)| {
                let phat = c as f64 / 200_000.0;
                let se = (q * (1.0 - q) / 200_000.0).sqrt().max(1e-12);
                ((phat - q) / se).abs()
            })
            .fold(0.0f64, f64::max);
        println!("increment p = {p}: worst |z| against 200k trials = {worst:.2}");
        assert!(worst < 5.0);
    }

    // First-return curve: under the uniform measure returns are
    // geometric; the taboo recursion reproduces that closed form.
    let curve = return_time_distribution(&uniform, g, 24, 100_000, 11)?;
    println!("\nfirst-return law (uniform measure, horizon 24):");
    for (t, &q) in curve.probabilities.iter().enumerate().take(4) {
        let geometric = (15.0f64 / 16.0).powi(t as i32) / 16.0;
        println!("  t = {}: exact {q:.6}, geometric {geometric:.6}", t + 1);
        assert!((q - geometric).abs() < 1e-12);
    }
    println!("  no return within horizon: {:.6}", curve.residual);
    let empirical = curve.empirical.as_ref().unwrap();
    println!(
        "  Monte Carlo: {} of {} trials never returned",
        empirical.beyond, empirical.trials
    );

    // Two-step consistency: simulating two annealed steps must match the
    // matrix square, cell by cell, within Monte Carlo noise.
    let check = chapman_check(&nu, 200_000, 13)?;
    println!(
        "\ntwo-step check: max |z| = {:.2} at ({}, {})",
        check.max_abs_z, check.worst_start, check.worst_target
    );
    assert!(check.within(5.0));
    Ok(())
}
