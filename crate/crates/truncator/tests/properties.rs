//! Property tests: randomized instances of the algebraic laws, codec
//! round-trips, and orbit/market invariants the unit tests pin pointwise.

use proptest::prelude::*;

use truncator::algebra::group_size;
use truncator::map_space::sample_homomorphism;
use truncator::random_maps::sample_uniform_map;
use truncator::rng::stream_rng;
use truncator::{analyze, p_star, Beta, Element, Period, ShufflingMap, SpinModel};

fn element_of(n_bits: u8, index: u32) -> Element {
    Element::new(index, n_bits).unwrap()
}

/// Three independent group elements over a shared cube size.
fn triple() -> impl Strategy<Value = (u8, u32, u32, u32)> {
    (1u8..=6).prop_flat_map(|n| {
        let m = group_size(n);
        (Just(n), 1..=m, 1..=m, 1..=m)
    })
}

/// A full map table over a small cube.
fn map_table() -> impl Strategy<Value = (u8, Vec<u32>)> {
    (1u8..=5).prop_flat_map(|n| {
        let m = group_size(n);
        (Just(n), prop::collection::vec(1..=m, m as usize))
    })
}

/// Torus shapes small enough to sweep every configuration bit.
fn market() -> impl Strategy<Value = ((u32, u32), f64, u32)> {
    prop::sample::select(vec![(3u32, 1u32), (4, 1), (5, 1), (2, 2), (3, 2), (4, 2)])
        .prop_flat_map(|(l, d)| {
            let sites = l.pow(d);
            ((Just((l, d))), 0.0..6.0f64, 1..=(1u32 << sites))
        })
}

proptest! {
    #[test]
    fn componentwise_product_is_a_boolean_group((n, a, b, c) in triple()) {
        let (a, b, c) = (element_of(n, a), element_of(n, b), element_of(n, c));
        let e = Element::identity(n).unwrap();
        prop_assert_eq!(a.circ(b).unwrap(), b.circ(a).unwrap());
        prop_assert_eq!(
            a.circ(b).unwrap().circ(c).unwrap(),
            a.circ(b.circ(c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.circ(e).unwrap(), a);
        prop_assert_eq!(a.circ(a).unwrap(), e);
    }

    #[test]
    fn sign_and_index_codecs_round_trip((n, a, _, _) in triple()) {
        let g = element_of(n, a);
        prop_assert_eq!(Element::from_signs(&g.signs()).unwrap(), g);
        prop_assert_eq!(Element::new(g.index(), n).unwrap(), g);
        prop_assert_eq!(g.signs().len(), n as usize);
        // Complement is the product with the all-minus state.
        prop_assert_eq!(
            g.complement(),
            g.circ(Element::all_minus(n).unwrap()).unwrap()
        );
    }

    #[test]
    fn map_tables_round_trip_through_json((n, entries) in map_table()) {
        let phi = ShufflingMap::from_table(n, &entries).unwrap();
        let text = serde_json::to_string(&phi).unwrap();
        let back: ShufflingMap = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.entries(), entries);
        prop_assert_eq!(back.n_bits(), n);
    }

    #[test]
    fn commutator_is_symmetric((n, a, b, _) in triple(), seed in any::<u64>()) {
        let phi = sample_uniform_map(n, &mut stream_rng(seed, 0)).unwrap();
        let (a, b) = (element_of(n, a), element_of(n, b));
        prop_assert_eq!(
            phi.commutator(a, b).unwrap(),
            phi.commutator(b, a).unwrap()
        );
    }

    #[test]
    fn transient_depth_counts_down_along_the_orbit((n, entries) in map_table()) {
        let phi = ShufflingMap::from_table(n, &entries).unwrap();
        let report = analyze(&phi).unwrap();
        for g in Element::all(n).unwrap() {
            let depth = report.transient_depth(g).unwrap();
            let next = phi.truncator_step(g).unwrap();
            if depth > 0 {
                prop_assert_eq!(report.transient_depth(next).unwrap(), depth - 1);
                prop_assert_eq!(report.period(g).unwrap(), Period::Transient);
            }
            prop_assert_eq!(report.period(g).unwrap(), p_star(g, &phi).unwrap());
        }
    }

    #[test]
    fn star_powers_of_homomorphisms_are_polynomial(
        n in 1u8..=7,
        seed in any::<u64>(),
    ) {
        let phi = sample_homomorphism(n, &mut stream_rng(seed, 1)).unwrap();
        for g in Element::all(n).unwrap() {
            let mut walk = g;
            for p in 1..=8u32 {
                prop_assert_eq!(phi.poly_eval(g, p).unwrap(), walk);
                walk = phi.truncator_step(walk).unwrap();
            }
        }
    }

    #[test]
    fn market_sweep_commutes_with_symmetries(((l, d), alpha, index) in market()) {
        let model = SpinModel::new(l, d, alpha, Beta::Infinite).unwrap();
        let g = element_of(model.n_bits(), index);
        let s = model.successor(g).unwrap();
        prop_assert_eq!(model.successor(g.complement()).unwrap(), s.complement());
        for axis in 0..d {
            let shifted = model.translate(g, axis).unwrap();
            prop_assert_eq!(
                model.successor(shifted).unwrap(),
                model.translate(s, axis).unwrap()
            );
        }
    }

    #[test]
    fn inverse_temperature_serde_round_trips(value in 0.01f64..1000.0) {
        let finite: Beta = serde_json::from_str(
            &serde_json::to_string(&Beta::Finite(value)).unwrap()
        ).unwrap();
        prop_assert_eq!(finite.finite(), Some(value));

        let infinite: Beta = serde_json::from_str(
            &serde_json::to_string(&Beta::Infinite).unwrap()
        ).unwrap();
        prop_assert!(infinite.is_infinite());
    }

    #[test]
    fn period_serde_round_trips(p in 1u64..1_000_000) {
        let finite: Period = serde_json::from_str(
            &serde_json::to_string(&Period::Finite(p)).unwrap()
        ).unwrap();
        prop_assert_eq!(finite, Period::Finite(p));

        let text = serde_json::to_string(&Period::Transient).unwrap();
        prop_assert_eq!(text.as_str(), "\"transient\"");
        let transient: Period = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(transient, Period::Transient);
    }
}
