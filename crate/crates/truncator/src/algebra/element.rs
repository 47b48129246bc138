use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on the cube dimension; group size is `2^N`.
pub const MAX_BITS: u8 = 24;

/// Number of quadrants of the N-cube.
#[inline]
pub fn group_size(n_bits: u8) -> u32 {
    1u32 << n_bits
}

fn check_bits(n_bits: u8) -> Result<()> {
    if n_bits == 0 || n_bits > MAX_BITS {
        return Err(Error::Capacity {
            what: "cube dimension",
            requested: n_bits as u64,
            limit: MAX_BITS as u64,
        });
    }
    Ok(())
}

/// A generalized quadrant of the N-cube.
///
/// Quadrant `j` carries the sign tuple `(a_1, .., a_N)` with
/// `j = 1 + sum_i (1 - a_i)/2 * 2^(i-1)`: bit `i-1` of the zero-based mask
/// is set exactly when coordinate `i` has sign `-1`. Index `1` is the
/// all-plus quadrant and `2^N` the all-minus one.
///
/// Composition multiplies sign tuples coordinatewise, so it is XOR on
/// masks and every element is its own inverse:
///
/// ```
/// use truncator::Element;
///
/// let a = Element::new(15, 4)?;
/// let b = Element::new(12, 4)?;
/// assert_eq!(a.circ(b)?.index(), 6);
/// assert_eq!(a.circ(a)?, Element::identity(4)?);
/// # Ok::<(), truncator::Error>(())
/// ```
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    index: u32,
    n_bits: u8,
}

impl Element {
    /// Quadrant with the given 1-based index on the N-cube.
    pub fn new(index: u32, n_bits: u8) -> Result<Self> {
        check_bits(n_bits)?;
        let size = group_size(n_bits);
        if index == 0 || index > size {
            return Err(Error::ElementOutOfRange {
                index: index as u64,
                size: size as u64,
            });
        }
        Ok(Element { index, n_bits })
    }

    /// The all-plus quadrant, neutral for composition.
    pub fn identity(n_bits: u8) -> Result<Self> {
        check_bits(n_bits)?;
        Ok(Element { index: 1, n_bits })
    }

    /// The all-minus quadrant, index `2^N`.
    pub fn all_minus(n_bits: u8) -> Result<Self> {
        check_bits(n_bits)?;
        Ok(Element {
            index: group_size(n_bits),
            n_bits,
        })
    }

    /// Quadrant described by a tuple of signs, one per coordinate.
    ///
    /// Entry `i` (zero-based) is the sign of coordinate `i + 1` and must
    /// be `+1` or `-1`.
    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        if signs.is_empty() || signs.len() > MAX_BITS as usize {
            return Err(Error::Capacity {
                what: "sign tuple length",
                requested: signs.len() as u64,
                limit: MAX_BITS as u64,
            });
        }
        let mut mask = 0u32;
        for (i, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => mask |= 1 << i,
                _ => {
                    return Err(Error::InvalidSign {
                        position: i,
                        value: s,
                    })
                }
            }
        }
        Ok(Element {
            index: mask + 1,
            n_bits: signs.len() as u8,
        })
    }

    /// The sign tuple of this quadrant, coordinate 1 first.
    pub fn signs(&self) -> Vec<i8> {
        let mask = self.mask();
        (0..self.n_bits)
            .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
            .collect()
    }

    pub(crate) fn from_mask(mask: u32, n_bits: u8) -> Self {
        debug_assert!((1..=MAX_BITS).contains(&n_bits));
        debug_assert!(mask < group_size(n_bits));
        Element {
            index: mask + 1,
            n_bits,
        }
    }

    /// 1-based quadrant label.
    #[inline]
    pub fn index(&self) -> u32 {
        self.index
    }

    /// Zero-based sign mask; bit `i-1` set means coordinate `i` is negative.
    #[inline]
    pub fn mask(&self) -> u32 {
        self.index - 1
    }

    /// Dimension of the cube this quadrant lives on.
    #[inline]
    pub fn n_bits(&self) -> u8 {
        self.n_bits
    }

    /// True for the all-plus quadrant.
    #[inline]
    pub fn is_identity(&self) -> bool {
        self.index == 1
    }

    /// Coordinatewise sign product of two quadrants.
    pub fn circ(self, other: Element) -> Result<Element> {
        if self.n_bits != other.n_bits {
            return Err(Error::DimensionMismatch {
                left: self.n_bits,
                right: other.n_bits,
            });
        }
        Ok(Element::from_mask(self.mask() ^ other.mask(), self.n_bits))
    }

    /// The quadrant with every sign flipped, `g . 2^N`.
    pub fn complement(self) -> Element {
        Element::from_mask(self.mask() ^ (group_size(self.n_bits) - 1), self.n_bits)
    }

    /// All quadrants of the N-cube in index order.
    pub fn all(n_bits: u8) -> Result<impl Iterator<Item = Element>> {
        check_bits(n_bits)?;
        Ok((0..group_size(n_bits)).map(move |m| Element::from_mask(m, n_bits)))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}/{}d", self.index, self.n_bits)
    }
}
