//! Work the sign-quadrant algebra by hand: composition, a shuffling map,
//! star products, truncator steps, commutators, and the degree-4 star
//! expansion that holds for every map.
//!
//! ```bash
//! cargo run --example complex_map
//! ```

use truncator::map_space::{classify, kernel};
use truncator::random_maps::sample_uniform_map;
use truncator::rng::{stream_rng, DEFAULT_SEED};
use truncator::{analyze, Element, ShufflingMap};

fn main() -> truncator::Result<()> {
    // The four quadrants of the plane, labelled 1..=4. Multiplication is
    // coordinatewise sign product, so every element squares to 1.
    let a = Element::from_signs(&[-1, 1])?;
    let b = Element::from_signs(&[1, -1])?;
    println!("a = {:?} (signs {:?})", a, a.signs());
    println!("b = {:?} (signs {:?})", b, b.signs());
    println!("a . b = {:?}", a.circ(b)?);
    println!("a . a = {:?} (self-inverse)", a.circ(a)?);
    assert!(a.circ(a)?.is_identity());

    // The label-reversing map: phi(g) = complement of g.
    let reversal = ShufflingMap::from_table(2, &[4, 3, 2, 1])?;
    println!("\nreversal map entries: {:?}", reversal.entries());

    // Star multiplication twists the right operand through phi.
    let star = reversal.star(a, b)?;
    println!("a * b = a . phi(b) = {:?}", star);
    assert_eq!(star, a.circ(reversal.apply(b)?)?);

    // The dynamics T(g) = g . phi(g) lands everything on quadrant 4 at
    // once; star commutativity and "T is constant" are the same thing.
    for g in Element::all(2)? {
        println!("T({:?}) = {:?}", g, reversal.truncator_step(g)?);
    }
    let classification = classify(&reversal)?;
    assert!(classification.is_star_commutative);
    assert_eq!(
        classification.fixed_unique_attractor,
        Some(Element::new(4, 2)?)
    );

    // A lopsided random map on the 3-cube: star powers unfold through
    // iterated truncator steps, g^(*p) = T^(p-1)(g).
    let mut rng = stream_rng(DEFAULT_SEED, 0);
    let phi = sample_uniform_map(3, &mut rng)?;
    println!("\nrandom map on the 3-cube: {:?}", phi.entries());
    let g = Element::new(5, 3)?;
    let mut walk = g;
    for p in 1..=5 {
        let power = phi.star_power(g, p)?;
        assert_eq!(power, walk);
        println!("g^(*{p}) = {:?}", power);
        walk = phi.truncator_step(walk)?;
    }

    // Commutators [a, b] measure how far phi is from a homomorphism;
    // the closed degree-4 expansion absorbs them exactly, for every map.
    let c = phi.commutator(g, phi.apply(g)?)?;
    println!("[g, phi(g)] = {:?}", c);
    for g in Element::all(3)? {
        assert_eq!(phi.star_power(g, 4)?, phi.star4_expansion(g)?);
    }
    println!("degree-4 expansion checked on all 8 states");

    // Kernel members are exactly the fixed points of T.
    let fixed = kernel(&phi, 1);
    let report = analyze(&phi)?;
    for g in &fixed {
        assert_eq!(report.transient_depth(*g)?, 0);
    }
    println!(
        "kernel of the random map: {:?} ({} fixed points of T)",
        fixed.iter().map(Element::index).collect::<Vec<_>>(),
        fixed.len()
    );
    Ok(())
}
