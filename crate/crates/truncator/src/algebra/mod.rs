//! The quadrant group, shuffling maps, and the star-power calculus.
//!
//! `G = {1, .., 2^N}` labels the generalized quadrants of the N-cube.
//! Composition `.` multiplies sign patterns coordinatewise, which on the
//! zero-based masks is plain XOR; every element is its own inverse and the
//! all-plus quadrant `1` is the identity. A shuffling map is an arbitrary
//! self-map `phi` of `G`, stored as a dense table. It induces
//!
//! - the star operation `a * b = a . phi(b)`,
//! - the truncator step `T(g) = g * g = g . phi(g)`,
//! - star powers `g^(*p) = T^(p-1)(g)`,
//! - the commutator `[a, b] = phi(a . b) . phi(a) . phi(b)`, which
//!   measures how far `phi` is from a homomorphism on the pair.
//!
//! For homomorphic `phi`, star powers collapse to a polynomial in the
//! iterates of `phi` with mod-2 Pascal coefficients; see [`GammaTable`]
//! and [`ShufflingMap::poly_eval`].

mod element;
mod gamma;
mod map;

pub use element::{group_size, Element, MAX_BITS};
pub use gamma::{gamma, gamma_row, GammaTable, MAX_ROW};
pub use map::ShufflingMap;

pub(crate) use map::kernel;
