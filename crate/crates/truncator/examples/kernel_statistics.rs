//! The kernel of a uniform random map -- the states it sends to the
//! all-plus quadrant -- has Binomial(M, 1/M) size, which converges to
//! Poisson(1) as the cube grows. Exact law, limit law, and a seeded
//! Monte Carlo histogram side by side.
//!
//! ```bash
//! cargo run --example kernel_statistics
//! ```

use truncator::random_maps::{
    kernel_pmf_exact, kernel_pmf_limit, kernel_size_counts, kernel_size_pmf, poisson_sup_distance,
};

fn main() -> truncator::Result<()> {
    // Exact probabilities P(|ker| = k) at M = 16, next to 1/(e k!).
    let m = 16u32;
    let exact = kernel_size_pmf(m)?;
    println!("kernel-size law at M = {m}:");
    println!("  k   exact        poisson");
    for k in 0..=6 {
        println!(
            "  {k}   {:<10.8}   {:<10.8}",
            exact[k as usize],
            kernel_pmf_limit(k)
        );
        // The closed binomial form agrees with the recurrence.
        assert!((exact[k as usize] - kernel_pmf_exact(m, k)?).abs() < 1e-12);
    }
    let mass: f64 = exact.iter().sum();
    let mean: f64 = exact.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    println!("  total mass {mass:.12}, mean {mean:.12}");

    // Convergence is monotone in the sup metric across growing cubes.
    println!("\nsup distance to Poisson(1):");
    let mut last = f64::INFINITY;
    for n in [2u8, 4, 6, 8, 10] {
        let d = poisson_sup_distance(1 << n)?;
        println!("  M = {:>4}: {d:.3e}", 1u32 << n);
        assert!(d < last);
        last = d;
    }

    // A seeded histogram at M = 256: one million random maps, counted
    // in deterministic per-chunk streams, so the numbers below never
    // change between runs or machines.
    let trials = 1_000_000u64;
    let counts = kernel_size_counts(8, trials, 42)?;
    let exact = kernel_size_pmf(256)?;
    println!("\nMonte Carlo at M = 256 ({trials} maps, seed 42):");
    println!("  k   empirical   exact        z");
    for k in 0..=6usize {
        let phat = counts[k] as f64 / trials as f64;
        let p = exact[k];
        let z = (phat - p) / (p * (1.0 - p) / trials as f64).sqrt();
        println!("  {k}   {phat:<9.6}   {p:<10.8}   {z:+.2}");
        assert!(z.abs() < 5.0);
    }
    Ok(())
}
