/// Neighbor lists of the d-dimensional torus with side `l` under the
/// taxicab metric.
///
/// Site `i` (zero-based) has coordinates `c_k = (i / l^k) mod l`. The
/// neighborhood of a site collects, for every nonzero integer offset
/// vector of taxicab norm at most `radius`, the site that offset lands on
/// — with multiplicity, so on the two-site ring the offsets `+1` and `-1`
/// both contribute the single other site and it is counted twice. Offsets
/// that wrap back onto the site itself are dropped.
#[derive(Clone, Debug)]
pub(crate) struct Lattice {
    neighbors: Vec<Vec<u32>>,
}

fn push_offsets(d: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if cur.len() == d {
        if cur.iter().any(|&o| o != 0) {
            out.push(cur.clone());
        }
        return;
    }
    for o in -budget..=budget {
        cur.push(o);
        push_offsets(d, budget - o.abs(), cur, out);
        cur.pop();
    }
}

impl Lattice {
    pub(crate) fn new(l: u32, d: u32, radius: u32) -> Self {
        let n_sites = (l as u64).pow(d) as usize;
        let mut offsets = Vec::new();
        push_offsets(d as usize, radius as i64, &mut Vec::new(), &mut offsets);

        let li = l as i64;
        let neighbors = (0..n_sites)
            .map(|site| {
                let coords: Vec<i64> = (0..d)
                    .map(|k| (site as u64 / (l as u64).pow(k) % l as u64) as i64)
                    .collect();
                offsets
                    .iter()
                    .filter_map(|off| {
                        let mut target = 0u64;
                        let mut scale = 1u64;
                        for (c, o) in coords.iter().zip(off) {
                            target += ((c + o).rem_euclid(li)) as u64 * scale;
                            scale *= l as u64;
                        }
                        (target as usize != site).then_some(target as u32)
                    })
                    .collect()
            })
            .collect();
        Lattice { neighbors }
    }

    #[inline]
    pub(crate) fn neighbors0(&self, site: usize) -> &[u32] {
        &self.neighbors[site]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<u32>) -> Vec<u32> {
        v.sort_unstable();
        v
    }

    #[test]
    fn ring_of_four_has_two_distinct_neighbors_per_site() {
        let lat = Lattice::new(4, 1, 1);
        assert_eq!(sorted(lat.neighbors0(0).to_vec()), vec![1, 3]);
        assert_eq!(sorted(lat.neighbors0(1).to_vec()), vec![0, 2]);
        assert_eq!(sorted(lat.neighbors0(2).to_vec()), vec![1, 3]);
        assert_eq!(sorted(lat.neighbors0(3).to_vec()), vec![0, 2]);
    }

    #[test]
    fn two_site_ring_counts_its_neighbor_twice() {
        let lat = Lattice::new(2, 1, 1);
        assert_eq!(lat.neighbors0(0), &[1, 1]);
        assert_eq!(lat.neighbors0(1), &[0, 0]);
    }

    #[test]
    fn square_torus_side_two_duplicates_both_axes() {
        // Sites: 0=(0,0), 1=(1,0), 2=(0,1), 3=(1,1).
        let lat = Lattice::new(2, 2, 1);
        assert_eq!(sorted(lat.neighbors0(0).to_vec()), vec![1, 1, 2, 2]);
        assert_eq!(sorted(lat.neighbors0(3).to_vec()), vec![1, 1, 2, 2]);
    }

    #[test]
    fn square_torus_side_three_has_four_distinct_neighbors() {
        let lat = Lattice::new(3, 2, 1);
        // Site 4 = (1,1): axis neighbors (0,1),(2,1),(1,0),(1,2).
        assert_eq!(sorted(lat.neighbors0(4).to_vec()), vec![1, 3, 5, 7]);
        // Corner 0 = (0,0): wraps to (1,0),(2,0),(0,1),(0,2).
        assert_eq!(sorted(lat.neighbors0(0).to_vec()), vec![1, 2, 3, 6]);
    }

    #[test]
    fn radius_two_ball_on_a_long_ring() {
        let lat = Lattice::new(7, 1, 2);
        assert_eq!(sorted(lat.neighbors0(0).to_vec()), vec![1, 2, 5, 6]);
    }

    #[test]
    fn radius_two_ball_in_two_dimensions() {
        let lat = Lattice::new(5, 2, 2);
        // Site 12 = (2,2): 12 offsets of taxicab norm 1 or 2, all distinct.
        let nbrs = sorted(lat.neighbors0(12).to_vec());
        assert_eq!(nbrs.len(), 12);
        assert_eq!(nbrs, vec![2, 6, 7, 8, 10, 11, 13, 14, 16, 17, 18, 22]);
    }
}
