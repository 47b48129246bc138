//! Exact and stochastic analysis of shuffling-map truncator dynamics on
//! sign quadrants.
//!
//! States are the `2^N` generalized quadrants of the N-cube, labelled
//! `1..=2^N` and identified with N-bit sign masks. A shuffling map `phi`
//! drives the one-step dynamics `T(g) = g . phi(g)`, where `.` multiplies
//! sign patterns coordinatewise (XOR on masks). On top of that sit the
//! star operation `a * b = a . phi(b)`, its power/commutator calculus,
//! orbit censuses, random-map statistics, and a synchronous spin market
//! whose frozen limit compiles to a shuffling map.
//!
//! Everything is reproducible: stochastic routines take explicit 64-bit
//! seeds and derive independent per-chunk generator streams from them, so
//! results do not depend on worker count.

pub mod algebra;
pub mod error;
pub mod json;
pub mod map_space;
pub mod orbit;
pub mod random_maps;
pub mod rng;
pub mod spin_market;

pub use algebra::{Element, GammaTable, ShufflingMap};
pub use error::{Error, Result};
pub use orbit::{analyze, p_star, OrbitReport, Period};
pub use spin_market::{Beta, SpinModel};
