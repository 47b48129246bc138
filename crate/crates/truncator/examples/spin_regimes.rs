//! A synchronous spin market on the ring: each site follows its
//! neighbors but is pushed against the global majority. The frozen
//! (zero-temperature) sweep compiles to a shuffling map whose orbit
//! census exposes the market's phases as the coupling grows.
//!
//! ```bash
//! cargo run --example spin_regimes
//! ```

use truncator::spin_market::regime_report;
use truncator::{analyze, Beta, Element, Period, SpinModel};

fn main() -> truncator::Result<()> {
    // Four spins on a ring, coupling alpha = 3. Element 15 is the
    // configuration (+,-,-,-).
    let model = SpinModel::new(4, 1, 3.0, Beta::Infinite)?;
    let e15 = Element::new(15, 4)?;
    println!("configuration 15 = signs {:?}", e15.signs());
    for site in 1..=4 {
        println!("  field at site {site}: {:+.1}", model.local_field(e15, site)?);
    }
    println!("  frozen update -> {:?}", model.successor(e15)?);

    // Compile the whole sweep into a map and take the orbit census. The
    // tied configurations (some site with exact zero field) are reported:
    // there the keep-your-spin convention decides.
    for alpha in [1.0, 3.0, 5.0] {
        let model = SpinModel::new(4, 1, alpha, Beta::Infinite)?;
        let compiled = model.frozen_phi();
        let report = analyze(compiled.map())?;
        println!(
            "\nalpha = {alpha}: spectrum {:?}, {} tied configurations",
            report.spectrum(),
            compiled.ties().len()
        );
        for tracked in [1u32, 15] {
            let g = Element::new(tracked, 4)?;
            match report.period(g)? {
                Period::Finite(p) => println!("  state {tracked}: eventual period {p}"),
                Period::Transient => println!("  state {tracked}: transient"),
            }
        }
    }

    // At finite temperature the sweep is stochastic; cooling it down
    // concentrates each row on the frozen successor.
    let cold = SpinModel::new(4, 1, 3.0, Beta::Finite(50.0))?;
    let matrix = cold.finite_beta_matrix()?;
    let frozen = SpinModel::new(4, 1, 3.0, Beta::Infinite)?;
    let g = Element::new(1, 4)?;
    let row = matrix.row(g)?;
    let successor = frozen.successor(g)?;
    println!(
        "\nbeta = 50: from all-up, P(frozen successor {:?}) = {:.9}",
        successor,
        row[successor.mask() as usize]
    );

    // Sweep the coupling: the compiled map changes at sharply located
    // thresholds, and the tracked states change phase there.
    let grid: Vec<f64> = (0..61).map(|i| 0.1 * i as f64).collect();
    let tracked = [Element::new(1, 4)?, Element::new(15, 4)?];
    let report = regime_report(4, 1, &grid, &tracked)?;
    println!(
        "\ncoupling thresholds on [0, 6]: {:?}",
        report
            .thresholds
            .iter()
            .map(|t| (t * 1e6).round() / 1e6)
            .collect::<Vec<_>>()
    );
    for point in report.points.iter().step_by(20) {
        println!(
            "  alpha = {:>3.1}: ties {:>2}, spectrum {:?}, tracked {:?}",
            point.alpha, point.ties, point.spectrum, point.tracked
        );
    }
    Ok(())
}
