//! Exact orbit structure of the truncator dynamics: every state walks
//! into a periodic attractor; the census reports cycles, basin sizes and
//! transient depths in one pass over the state space.
//!
//! ```bash
//! cargo run --example orbit_census
//! ```

use truncator::random_maps::sample_uniform_map;
use truncator::rng::{stream_rng, DEFAULT_SEED};
use truncator::{analyze, p_star, Element, Period, ShufflingMap};

fn main() -> truncator::Result<()> {
    // The reversal map sends every quadrant to 4 in a single step.
    let reversal = ShufflingMap::from_table(2, &[4, 3, 2, 1])?;
    let report = analyze(&reversal)?;
    println!("reversal map census:");
    for attractor in report.attractors() {
        println!(
            "  cycle {:?}  length {}  basin {}",
            attractor.cycle.iter().map(Element::index).collect::<Vec<_>>(),
            attractor.len(),
            attractor.basin
        );
    }
    assert_eq!(report.attractors().len(), 1);
    assert_eq!(report.attractors()[0].basin, 4);

    // A random map on the 10-cube: 1024 states collapse onto a handful
    // of short cycles.
    let mut rng = stream_rng(DEFAULT_SEED, 2);
    let phi = sample_uniform_map(10, &mut rng)?;
    let report = analyze(&phi)?;
    println!("\nrandom 10-cube map:");
    println!("  attractors: {}", report.attractors().len());
    println!("  cycle-length spectrum: {:?}", report.spectrum());
    let deepest = Element::all(10)?
        .map(|g| report.transient_depth(g).unwrap())
        .max()
        .unwrap();
    println!("  deepest transient: {deepest} steps");

    // Eventual periods per state, via the report or a fresh walk; the
    // first-visit walk agrees with the census everywhere.
    let mut on_cycle = 0u32;
    for g in Element::all(10)? {
        let walked = p_star(g, &phi)?;
        assert_eq!(walked, report.period(g)?);
        if let Period::Finite(_) = walked {
            on_cycle += 1;
        }
    }
    let cyclic_total: u64 = report.attractors().iter().map(|a| a.len()).sum();
    assert_eq!(on_cycle as u64, cyclic_total);
    println!("  states on cycles: {on_cycle} / 1024");

    // Reports serialize for downstream tooling; transients are spelled
    // "transient" so the JSON stays typed.
    let value = serde_json::to_value(&report).expect("report serializes");
    println!(
        "\nJSON keys: {:?}",
        value.as_object().unwrap().keys().collect::<Vec<_>>()
    );
    Ok(())
}
