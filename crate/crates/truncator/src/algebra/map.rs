use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::element::{group_size, Element, MAX_BITS};
use super::gamma::gamma_row;
use crate::error::{Error, Result};
use crate::json::{check_schema, SCHEMA};

/// A self-map of the quadrant group, stored as a dense table.
///
/// The map fixes the star operation `a * b = a . phi(b)` and the one-step
/// dynamics `T(g) = g . phi(g)`; all higher star powers, commutators and
/// polynomial evaluations below are derived from the table alone.
///
/// ```
/// use truncator::ShufflingMap;
///
/// // phi(g) = g . 2^N: flips every sign, table entries in reverse order.
/// let phi = ShufflingMap::complement(2)?;
/// assert_eq!(phi.entries(), vec![4, 3, 2, 1]);
/// let g = truncator::Element::new(2, 2)?;
/// assert_eq!(phi.truncator_step(g)?.index(), 4);
/// # Ok::<(), truncator::Error>(())
/// ```
#[derive(Clone, PartialEq, Eq)]
pub struct ShufflingMap {
    n_bits: u8,
    /// `table[m]` is the zero-based mask of `phi` at the element with mask `m`.
    table: Vec<u32>,
}

impl ShufflingMap {
    /// Builds a map from 1-based table entries `(phi(1), .., phi(2^N))`.
    pub fn from_table(n_bits: u8, entries: &[u32]) -> Result<Self> {
        if n_bits == 0 || n_bits > MAX_BITS {
            return Err(Error::Capacity {
                what: "cube dimension",
                requested: n_bits as u64,
                limit: MAX_BITS as u64,
            });
        }
        let size = group_size(n_bits) as usize;
        if entries.len() != size {
            return Err(Error::InvalidMap {
                reason: format!(
                    "table has {} entries but 2^{} = {} are required",
                    entries.len(),
                    n_bits,
                    size
                ),
            });
        }
        let mut table = Vec::with_capacity(size);
        for (i, &e) in entries.iter().enumerate() {
            if e == 0 || e as usize > size {
                return Err(Error::InvalidMap {
                    reason: format!("phi[{}] = {} outside 1..={}", i + 1, e, size),
                });
            }
            table.push(e - 1);
        }
        Ok(ShufflingMap { n_bits, table })
    }

    pub(crate) fn from_masks(n_bits: u8, table: Vec<u32>) -> Self {
        debug_assert_eq!(table.len(), group_size(n_bits) as usize);
        debug_assert!(table.iter().all(|&m| m < group_size(n_bits)));
        ShufflingMap { n_bits, table }
    }

    /// The identity map `phi(g) = g`.
    pub fn identity(n_bits: u8) -> Result<Self> {
        let _ = Element::identity(n_bits)?;
        let size = group_size(n_bits);
        Ok(ShufflingMap {
            n_bits,
            table: (0..size).collect(),
        })
    }

    /// The constant map `phi(g) = value` for every `g`.
    pub fn constant(value: Element) -> Self {
        let size = group_size(value.n_bits());
        ShufflingMap {
            n_bits: value.n_bits(),
            table: vec![value.mask(); size as usize],
        }
    }

    /// The sign-flip map `phi(g) = g . 2^N`; its table lists indices in
    /// reverse order.
    pub fn complement(n_bits: u8) -> Result<Self> {
        let _ = Element::identity(n_bits)?;
        let size = group_size(n_bits);
        Ok(ShufflingMap {
            n_bits,
            table: (0..size).map(|m| size - 1 - m).collect(),
        })
    }

    /// Dimension of the underlying cube.
    #[inline]
    pub fn n_bits(&self) -> u8 {
        self.n_bits
    }

    /// Number of group elements, `2^N`.
    #[inline]
    pub fn size(&self) -> u32 {
        group_size(self.n_bits)
    }

    /// 1-based table entries `(phi(1), .., phi(2^N))`.
    pub fn entries(&self) -> Vec<u32> {
        self.table.iter().map(|&m| m + 1).collect()
    }

    #[inline]
    pub(crate) fn masks(&self) -> &[u32] {
        &self.table
    }

    fn check_dim(&self, g: Element) -> Result<u32> {
        if g.n_bits() != self.n_bits {
            return Err(Error::DimensionMismatch {
                left: self.n_bits,
                right: g.n_bits(),
            });
        }
        Ok(g.mask())
    }

    #[inline]
    fn wrap(&self, mask: u32) -> Element {
        Element::from_mask(mask, self.n_bits)
    }

    /// `phi(g)`.
    pub fn apply(&self, g: Element) -> Result<Element> {
        let m = self.check_dim(g)?;
        Ok(self.wrap(self.table[m as usize]))
    }

    /// K-fold iterate `phi^(k)(g)`; `k = 0` returns `g` itself.
    pub fn iterate(&self, g: Element, k: u32) -> Result<Element> {
        let m = self.check_dim(g)?;
        Ok(self.wrap(kernel::iterate(&self.table, m, k)))
    }

    /// Star operation `a * b = a . phi(b)`.
    pub fn star(&self, a: Element, b: Element) -> Result<Element> {
        let ma = self.check_dim(a)?;
        let mb = self.check_dim(b)?;
        Ok(self.wrap(ma ^ self.table[mb as usize]))
    }

    /// One truncator step `T(g) = g * g = g . phi(g)`.
    pub fn truncator_step(&self, g: Element) -> Result<Element> {
        let m = self.check_dim(g)?;
        Ok(self.wrap(kernel::step(&self.table, m)))
    }

    /// Star power `g^(*p) = T^(p-1)(g)` for `p >= 1`.
    pub fn star_power(&self, g: Element, p: u32) -> Result<Element> {
        if p == 0 {
            return Err(Error::ZeroPower);
        }
        let m = self.check_dim(g)?;
        Ok(self.wrap(kernel::star_power(&self.table, m, p)))
    }

    /// Commutator `[a, b] = phi(a . b) . phi(a) . phi(b)`.
    ///
    /// Symmetric in its arguments; identically the all-plus quadrant when
    /// `phi` respects composition.
    pub fn commutator(&self, a: Element, b: Element) -> Result<Element> {
        let ma = self.check_dim(a)?;
        let mb = self.check_dim(b)?;
        Ok(self.wrap(kernel::commutator(&self.table, ma, mb)))
    }

    /// The star-power polynomial: composition of the iterates
    /// `phi^(k)(g)` for `0 <= k < p` whose mod-2 Pascal coefficient
    /// `gamma(k, p)` is 1.
    ///
    /// Equals [`ShufflingMap::star_power`] whenever `phi` respects
    /// composition.
    pub fn poly_eval(&self, g: Element, p: u32) -> Result<Element> {
        if p == 0 {
            return Err(Error::ZeroPower);
        }
        let row = gamma_row(p)?;
        let m = self.check_dim(g)?;
        Ok(self.wrap(kernel::poly_eval(&self.table, m, p, row)))
    }

    /// The commutator expansion of the fourth star power.
    ///
    /// With `C = [g, phi(g)]`, evaluates
    /// `g . phi(g) . phi^2(g) . phi^3(g) . C . phi(C) . [g, phi^2(g)]
    /// . [g . phi^2(g), C]`, which equals `star_power(g, 4)` for every
    /// map, homomorphic or not.
    pub fn star4_expansion(&self, g: Element) -> Result<Element> {
        let m = self.check_dim(g)?;
        Ok(self.wrap(kernel::star4_expansion(&self.table, m)))
    }
}

impl std::fmt::Debug for ShufflingMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.table.len() <= 32 {
            write!(f, "ShufflingMap(n={}, {:?})", self.n_bits, self.entries())
        } else {
            write!(f, "ShufflingMap(n={}, {} entries)", self.n_bits, self.table.len())
        }
    }
}

/// Mask-level primitives shared with the sweep machinery.
pub(crate) mod kernel {
    /// `T(g) = g . phi(g)` on masks.
    #[inline]
    pub fn step(table: &[u32], m: u32) -> u32 {
        m ^ table[m as usize]
    }

    #[inline]
    pub fn iterate(table: &[u32], mut m: u32, k: u32) -> u32 {
        for _ in 0..k {
            m = table[m as usize];
        }
        m
    }

    /// `g^(*p) = T^(p-1)(g)` on masks; `p >= 1`.
    #[inline]
    pub fn star_power(table: &[u32], mut m: u32, p: u32) -> u32 {
        for _ in 1..p {
            m = step(table, m);
        }
        m
    }

    /// `[a, b] = phi(a . b) . phi(a) . phi(b)` on masks.
    #[inline]
    pub fn commutator(table: &[u32], a: u32, b: u32) -> u32 {
        table[(a ^ b) as usize] ^ table[a as usize] ^ table[b as usize]
    }

    /// Star-power polynomial on masks; `row` is the mod-2 Pascal row `p`.
    pub fn poly_eval(table: &[u32], g: u32, p: u32, row: u128) -> u32 {
        let mut acc = 0u32;
        let mut cur = g;
        for k in 0..p {
            if row >> k & 1 == 1 {
                acc ^= cur;
            }
            cur = table[cur as usize];
        }
        acc
    }

    /// Fourth-star-power commutator expansion on masks.
    pub fn star4_expansion(table: &[u32], g: u32) -> u32 {
        let p1 = table[g as usize];
        let p2 = table[p1 as usize];
        let p3 = table[p2 as usize];
        let c = commutator(table, g, p1);
        let phi_c = table[c as usize];
        let d = commutator(table, g, p2);
        let e = commutator(table, g ^ p2, c);
        g ^ p1 ^ p2 ^ p3 ^ c ^ phi_c ^ d ^ e
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    #[serde(default)]
    schema: Option<String>,
    n_bits: u8,
    phi: Vec<u32>,
}

impl Serialize for ShufflingMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ShufflingMap", 3)?;
        s.serialize_field("schema", SCHEMA)?;
        s.serialize_field("n_bits", &self.n_bits)?;
        s.serialize_field("phi", &self.entries())?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for ShufflingMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = MapFile::deserialize(deserializer)?;
        check_schema(file.schema.as_deref()).map_err(D::Error::custom)?;
        ShufflingMap::from_table(file.n_bits, &file.phi).map_err(D::Error::custom)
    }
}
