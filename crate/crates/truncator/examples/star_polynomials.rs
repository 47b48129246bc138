//! Star powers of a homomorphism collapse to a parity polynomial: the
//! coefficient of phi^k(g) in g^(*p) is the binomial coefficient
//! C(p-1, k) mod 2, i.e. row p-1 of Pascal's triangle mod 2.
//!
//! ```bash
//! cargo run --example star_polynomials
//! ```

use truncator::map_space::{enumerate_homomorphisms, sample_homomorphism};
use truncator::rng::{stream_rng, DEFAULT_SEED};
use truncator::{Element, GammaTable};

fn main() -> truncator::Result<()> {
    // The coefficient table is the Sierpinski pattern.
    let table = GammaTable::up_to(16)?;
    println!("parity rows (p = 1..=16):");
    for p in 1..=16 {
        let row: String = table
            .row_vec(p)?
            .iter()
            .map(|&bit| if bit { '#' } else { '.' })
            .collect();
        println!("  p={p:>2}  {row}");
    }

    // Lucas: C(p-1, k) is odd exactly when k's bits are a subset of
    // (p-1)'s bits. Powers of two give two-term rows.
    for p in [2u32, 3, 5, 9, 17] {
        let terms: Vec<u32> = (0..p).filter(|&k| k & (p - 1) == k).collect();
        println!("g^(*{p}) uses phi^k(g) for k in {terms:?}");
    }

    // On a composition homomorphism the polynomial evaluates star powers
    // exactly; check every homomorphism of the 3-cube at every state.
    let mut checked = 0u64;
    for phi in enumerate_homomorphisms(3)? {
        for g in Element::all(3)? {
            for p in 1..=9 {
                assert_eq!(phi.star_power(g, p)?, phi.poly_eval(g, p)?);
            }
        }
        checked += 1;
    }
    println!("\npolynomial law verified on all {checked} homomorphisms of the 3-cube");

    // Same law spot-checked on sampled homomorphisms of the 8-cube,
    // where enumeration (2^64 matrices) is out of reach.
    let mut rng = stream_rng(DEFAULT_SEED, 1);
    for _ in 0..200 {
        let phi = sample_homomorphism(8, &mut rng)?;
        let g = Element::new(137, 8)?;
        for p in 1..=16 {
            assert_eq!(phi.star_power(g, p)?, phi.poly_eval(g, p)?);
        }
    }
    println!("and on 200 sampled homomorphisms of the 8-cube");

    // A non-homomorphism generally breaks it: the commutator corrections
    // in the degree-3 expansion are the obstruction.
    let skew = truncator::ShufflingMap::from_table(2, &[1, 1, 2, 3])?;
    let g = Element::new(4, 2)?;
    let power = skew.star_power(g, 3)?;
    let poly = skew.poly_eval(g, 3)?;
    println!(
        "\nnon-homomorphism: g^(*3) = {:?} but the polynomial gives {:?}",
        power, poly
    );
    assert_ne!(power, poly);
    Ok(())
}
