use rand::Rng;

use crate::algebra::{group_size, Element, ShufflingMap};
use crate::error::{Error, Result};

/// Largest group size whose `M^M` map space may be enumerated.
const ENUMERATION_LIMIT: u32 = 8;

/// Number of shuffling maps on a `2^N`-element group with `2^N = m`,
/// i.e. `m^m`.
pub fn map_count(m: u32) -> Result<u64> {
    if !m.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(m as u64));
    }
    if m == 0 || m > ENUMERATION_LIMIT {
        return Err(Error::Capacity {
            what: "map-space enumeration",
            requested: m as u64,
            limit: ENUMERATION_LIMIT as u64,
        });
    }
    Ok((m as u64).pow(m))
}

pub(crate) fn fill_table(m: u32, index: u64, table: &mut [u32]) {
    debug_assert_eq!(table.len(), m as usize);
    let mut rest = index;
    for slot in table.iter_mut().rev() {
        *slot = (rest % m as u64) as u32;
        rest /= m as u64;
    }
    debug_assert_eq!(rest, 0);
}

/// The `index`-th map in the lexicographic enumeration of all tables
/// `(phi(1), .., phi(M))`.
///
/// Index 0 is the constant-1 map and index `m^m - 1` the constant-M map,
/// so disjoint index ranges partition map space for parallel sweeps.
pub fn map_at_index(m: u32, index: u64) -> Result<ShufflingMap> {
    let count = map_count(m)?;
    if index >= count {
        return Err(Error::ElementOutOfRange {
            index,
            size: count,
        });
    }
    let n_bits = m.trailing_zeros() as u8;
    let mut table = vec![0u32; m as usize];
    fill_table(m, index, &mut table);
    Ok(ShufflingMap::from_masks(n_bits, table))
}

/// All `m^m` shuffling maps in lexicographic table order.
pub fn enumerate_all_maps(m: u32) -> Result<impl Iterator<Item = ShufflingMap>> {
    let count = map_count(m)?;
    let n_bits = m.trailing_zeros() as u8;
    Ok((0..count).map(move |index| {
        let mut table = vec![0u32; m as usize];
        fill_table(m, index, &mut table);
        ShufflingMap::from_masks(n_bits, table)
    }))
}

/// An N x N matrix over GF(2), acting on sign masks.
///
/// Every composition homomorphism of the quadrant group is the mask
/// action of exactly one such matrix, so these enumerate and sample the
/// homomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMatrix {
    n: u8,
    /// `rows[j]` holds row `j` as a bitmask over the N input bits.
    rows: Vec<u32>,
}

impl BinaryMatrix {
    /// Builds a matrix from row bitmasks.
    pub fn new(n: u8, rows: Vec<u32>) -> Result<Self> {
        let _ = Element::identity(n)?;
        if rows.len() != n as usize || rows.iter().any(|&r| r >= group_size(n)) {
            return Err(Error::InvalidMap {
                reason: format!("binary matrix needs {n} row masks below 2^{n}"),
            });
        }
        Ok(BinaryMatrix { n, rows })
    }

    /// Matrix-vector product over GF(2).
    #[inline]
    pub fn apply_mask(&self, v: u32) -> u32 {
        let mut out = 0u32;
        for (j, &row) in self.rows.iter().enumerate() {
            out |= ((row & v).count_ones() & 1) << j;
        }
        out
    }

    /// The shuffling map `g -> A . mask(g)` induced by this matrix.
    pub fn to_map(&self) -> ShufflingMap {
        let size = group_size(self.n);
        let table = (0..size).map(|m| self.apply_mask(m)).collect();
        ShufflingMap::from_masks(self.n, table)
    }
}

/// All `2^(N^2)` composition homomorphisms at dimension `n_bits`.
///
/// Guarded at `n_bits <= 4` (65536 maps).
pub fn enumerate_homomorphisms(n_bits: u8) -> Result<impl Iterator<Item = ShufflingMap>> {
    let _ = Element::identity(n_bits)?;
    if n_bits > 4 {
        return Err(Error::Capacity {
            what: "homomorphism enumeration",
            requested: n_bits as u64,
            limit: 4,
        });
    }
    let n = n_bits as u32;
    let count = 1u64 << (n * n);
    Ok((0..count).map(move |bits| {
        let rows: Vec<u32> = (0..n)
            .map(|j| ((bits >> (j * n)) & ((1 << n) - 1)) as u32)
            .collect();
        BinaryMatrix { n: n_bits, rows }.to_map()
    }))
}

/// Uniformly random composition homomorphism: a uniform N x N binary
/// matrix acting on masks.
pub fn sample_homomorphism<R: Rng + ?Sized>(n_bits: u8, rng: &mut R) -> Result<ShufflingMap> {
    let _ = Element::identity(n_bits)?;
    let top = group_size(n_bits);
    let rows: Vec<u32> = (0..n_bits).map(|_| rng.random_range(0..top)).collect();
    let map = BinaryMatrix { n: n_bits, rows }.to_map();
    debug_assert!(super::classify::table_predicates::hom_circ(map.masks()));
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map_space::is_homomorphism_circ;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tiny_map_space_enumerates_in_lexicographic_order() {
        let tables: Vec<Vec<u32>> = enumerate_all_maps(2)
            .unwrap()
            .map(|phi| phi.entries())
            .collect();
        assert_eq!(
            tables,
            vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]
        );
    }

    #[test]
    fn counts_and_limits() {
        assert_eq!(map_count(2).unwrap(), 4);
        assert_eq!(map_count(4).unwrap(), 256);
        assert_eq!(map_count(8).unwrap(), 16_777_216);
        assert!(map_count(16).is_err());
        assert!(map_count(3).is_err());
        assert_eq!(enumerate_all_maps(4).unwrap().count(), 256);
    }

    #[test]
    fn indexed_access_matches_the_iterator() {
        for (i, phi) in enumerate_all_maps(4).unwrap().enumerate() {
            assert_eq!(map_at_index(4, i as u64).unwrap(), phi);
        }
        assert!(map_at_index(4, 256).is_err());
    }

    #[test]
    fn matrix_extremes_give_constant_and_identity_maps() {
        let zero = BinaryMatrix::new(2, vec![0, 0]).unwrap();
        assert_eq!(zero.to_map().entries(), vec![1, 1, 1, 1]);
        let id = BinaryMatrix::new(2, vec![0b01, 0b10]).unwrap();
        assert_eq!(id.to_map(), ShufflingMap::identity(2).unwrap());
    }

    #[test]
    fn homomorphism_enumeration_is_complete_and_correct() {
        let maps: Vec<ShufflingMap> = enumerate_homomorphisms(2).unwrap().collect();
        assert_eq!(maps.len(), 16);
        for phi in &maps {
            assert!(is_homomorphism_circ(phi).unwrap());
        }
        let mut distinct = maps.clone();
        distinct.sort_by_key(|m| m.entries());
        distinct.dedup();
        assert_eq!(distinct.len(), 16);
        assert_eq!(enumerate_homomorphisms(3).unwrap().count(), 512);
        assert!(enumerate_homomorphisms(5).is_err());
    }

    #[test]
    fn sampled_homomorphisms_pass_the_pair_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let phi = sample_homomorphism(6, &mut rng).unwrap();
            assert!(is_homomorphism_circ(&phi).unwrap());
        }
    }
}
