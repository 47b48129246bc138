use crate::error::{Error, Result};

/// Largest supported row of the mod-2 Pascal triangle.
pub const MAX_ROW: u32 = 128;

/// Row `p` of the mod-2 Pascal triangle as a bitmask, bit `k` holding
/// `gamma(k, p)`.
///
/// Rows follow the recurrence `gamma(k, p) = gamma(k, p-1) + gamma(k-1, p-1)
/// (mod 2)` from `gamma(0, 1) = 1`, which on a bitmask is one shift-XOR
/// per row.
pub fn gamma_row(p: u32) -> Result<u128> {
    if p == 0 {
        return Err(Error::EmptyRange { what: "row index p" });
    }
    if p > MAX_ROW {
        return Err(Error::Capacity {
            what: "mod-2 Pascal row",
            requested: p as u64,
            limit: MAX_ROW as u64,
        });
    }
    let mut row = 1u128;
    for _ in 1..p {
        row ^= row << 1;
    }
    Ok(row)
}

/// Coefficient `gamma(k, p)` of the star-power polynomial, `0 <= k < p`.
pub fn gamma(k: u32, p: u32) -> Result<bool> {
    let row = gamma_row(p)?;
    if k >= p {
        return Err(Error::GammaIndex { k, p });
    }
    Ok(row >> k & 1 == 1)
}

/// Materialized rows `1..=max_p` of the mod-2 Pascal triangle.
#[derive(Debug, Clone)]
pub struct GammaTable {
    rows: Vec<u128>,
}

impl GammaTable {
    /// Builds rows `1..=max_p` by the two-term recurrence.
    pub fn up_to(max_p: u32) -> Result<Self> {
        if max_p == 0 {
            return Err(Error::EmptyRange { what: "row count" });
        }
        if max_p > MAX_ROW {
            return Err(Error::Capacity {
                what: "mod-2 Pascal row",
                requested: max_p as u64,
                limit: MAX_ROW as u64,
            });
        }
        let mut rows = Vec::with_capacity(max_p as usize);
        let mut row = 1u128;
        rows.push(row);
        for _ in 1..max_p {
            row ^= row << 1;
            rows.push(row);
        }
        Ok(GammaTable { rows })
    }

    /// Number of rows held.
    pub fn max_p(&self) -> u32 {
        self.rows.len() as u32
    }

    /// Row `p` as a bitmask, bit `k` holding `gamma(k, p)`.
    pub fn row(&self, p: u32) -> Result<u128> {
        if p == 0 || p > self.max_p() {
            return Err(Error::GammaIndex { k: 0, p });
        }
        Ok(self.rows[p as usize - 1])
    }

    /// Single coefficient `gamma(k, p)`.
    pub fn get(&self, k: u32, p: u32) -> Result<bool> {
        let row = self.row(p)?;
        if k >= p {
            return Err(Error::GammaIndex { k, p });
        }
        Ok(row >> k & 1 == 1)
    }

    /// Row `p` expanded to booleans `(gamma(0,p), .., gamma(p-1,p))`.
    pub fn row_vec(&self, p: u32) -> Result<Vec<bool>> {
        let row = self.row(p)?;
        Ok((0..p).map(|k| row >> k & 1 == 1).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_bits(p: u32) -> Vec<u8> {
        let row = gamma_row(p).unwrap();
        (0..p).map(|k| (row >> k & 1) as u8).collect()
    }

    #[test]
    fn small_rows_match_the_recurrence_by_hand() {
        assert_eq!(row_bits(1), [1]);
        assert_eq!(row_bits(2), [1, 1]);
        assert_eq!(row_bits(3), [1, 0, 1]);
        assert_eq!(row_bits(4), [1, 1, 1, 1]);
        assert_eq!(row_bits(5), [1, 0, 0, 0, 1]);
    }

    #[test]
    fn rows_agree_with_the_bitwise_closed_form() {
        // gamma(k, p) = 1 exactly when k AND (p-1) = k.
        for p in 1..=MAX_ROW {
            for k in 0..p {
                let expect = k & (p - 1) == k;
                assert_eq!(gamma(k, p).unwrap(), expect, "k={k} p={p}");
            }
        }
    }

    #[test]
    fn row_edges_are_always_one() {
        let table = GammaTable::up_to(MAX_ROW).unwrap();
        for p in 1..=MAX_ROW {
            assert!(table.get(0, p).unwrap());
            assert!(table.get(p - 1, p).unwrap());
        }
    }

    #[test]
    fn table_matches_free_function() {
        let table = GammaTable::up_to(40).unwrap();
        for p in 1..=40 {
            assert_eq!(table.row(p).unwrap(), gamma_row(p).unwrap());
        }
        assert_eq!(table.row_vec(3).unwrap(), vec![true, false, true]);
    }

    #[test]
    fn out_of_range_requests_fail() {
        assert!(gamma_row(0).is_err());
        assert!(gamma_row(MAX_ROW + 1).is_err());
        assert!(gamma(3, 3).is_err());
        let table = GammaTable::up_to(8).unwrap();
        assert!(table.row(9).is_err());
        assert!(table.get(8, 8).is_err());
    }
}
