//! Predicates, classification, enumeration and verification sweeps over
//! the space of shuffling maps.
//!
//! The `M^M` maps on a `2^N`-element group stratify by how much algebra
//! they respect: composition homomorphisms, star homomorphisms, maps with
//! a commutative star operation, and the period classes their truncator
//! dynamics realizes. This module decides those predicates for single
//! maps and sweeps them over the whole space (exhaustively for small `M`,
//! sampled otherwise), emitting counterexample records when an expected
//! law fails.

mod classify;
mod enumerate;
mod verify;

pub use classify::{
    classify, delta_set, image, is_homomorphism_circ, is_homomorphism_star, is_star_commutative,
    kernel, predicted_period, MapClassification, PAIR_SCAN_LIMIT,
};
pub use enumerate::{
    enumerate_all_maps, enumerate_homomorphisms, map_at_index, map_count, sample_homomorphism,
    BinaryMatrix,
};
pub use verify::{
    exhaustive_limit, run_sweep, write_records, Record, SweepOptions, SweepOutcome, Theorem,
};
