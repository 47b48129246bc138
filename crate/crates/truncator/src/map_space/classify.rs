use crate::algebra::{Element, ShufflingMap};
use crate::error::{Error, Result};

/// Largest group size accepted by the `O(M^2)` pairwise predicates.
pub const PAIR_SCAN_LIMIT: u32 = 1 << 12;

fn guard_pairs(phi: &ShufflingMap, what: &'static str) -> Result<()> {
    if phi.size() > PAIR_SCAN_LIMIT {
        return Err(Error::Capacity {
            what,
            requested: phi.size() as u64,
            limit: PAIR_SCAN_LIMIT as u64,
        });
    }
    Ok(())
}

/// States sent to the all-plus quadrant by the k-fold iterate of `phi`.
///
/// `kernel(phi, 1)` is exactly the set of fixed points of the truncator
/// step, since `T(g) = g` means `phi(g) = 1`.
pub fn kernel(phi: &ShufflingMap, k: u32) -> Vec<Element> {
    let table = phi.masks();
    let n = phi.n_bits();
    (0..phi.size())
        .filter(|&m| crate::algebra::kernel::iterate(table, m, k) == 0)
        .map(|m| Element::from_mask(m, n))
        .collect()
}

/// Image of `phi`, in label order.
pub fn image(phi: &ShufflingMap) -> Vec<Element> {
    let mut hit = vec![false; phi.size() as usize];
    for &m in phi.masks() {
        hit[m as usize] = true;
    }
    hit.iter()
        .enumerate()
        .filter(|(_, &h)| h)
        .map(|(m, _)| Element::from_mask(m as u32, phi.n_bits()))
        .collect()
}

/// Does `phi` respect composition: `phi(a . b) = phi(a) . phi(b)` for all
/// pairs?
///
/// Exhaustive scan over all `M^2` pairs, guarded at `M <= 2^12`.
pub fn is_homomorphism_circ(phi: &ShufflingMap) -> Result<bool> {
    guard_pairs(phi, "composition homomorphism pair scan")?;
    Ok(table_predicates::hom_circ(phi.masks()))
}

/// Does `phi` respect the star operation: `phi(a * b) = phi(a) * phi(b)`
/// for all pairs?
pub fn is_homomorphism_star(phi: &ShufflingMap) -> Result<bool> {
    guard_pairs(phi, "star homomorphism pair scan")?;
    Ok(table_predicates::hom_star(phi.masks()))
}

/// Is the star operation of `phi` commutative?
///
/// Decided by the exhaustive pair scan `a * b = b * a`, cross-checked
/// against the equivalent one-pass characterization "the truncator step
/// is constant"; the two must agree.
pub fn is_star_commutative(phi: &ShufflingMap) -> Result<bool> {
    guard_pairs(phi, "star commutativity pair scan")?;
    let by_pairs = table_predicates::star_commutative_pairs(phi.masks());
    let by_constant_step = table_predicates::constant_step(phi.masks()).is_some();
    assert_eq!(
        by_pairs, by_constant_step,
        "pair scan and constant-step characterizations disagree"
    );
    Ok(by_pairs)
}

/// States with `g . phi(g) = phi^2(g)`.
pub fn delta_set(phi: &ShufflingMap) -> Vec<Element> {
    let table = phi.masks();
    let n = phi.n_bits();
    (0..phi.size())
        .filter(|&m| {
            let p1 = table[m as usize];
            m ^ p1 == table[p1 as usize]
        })
        .map(|m| Element::from_mask(m, n))
        .collect()
}

/// Period predicted for `g` by the hypothesis-guarded classification.
///
/// The clauses are tested in order and the first applicable one wins:
///
/// 1. `g` in `ker phi` predicts period 1 (no hypotheses);
/// 2. under `[g, phi(g)] = 1` and `phi(1) = 1`, membership in
///    `ker phi^2 \ ker phi` predicts period 2;
/// 3. under `[g, phi(g)] = [g, phi^2(g)] = 1` and `phi(1) = 1`,
///    membership in `phi^-1(im phi  ∩ delta) \ ker phi` predicts
///    period 3.
///
/// `None` means no clause applies; it carries no claim about the actual
/// period.
pub fn predicted_period(g: Element, phi: &ShufflingMap) -> Result<Option<u32>> {
    let table = phi.masks();
    let gm = {
        // Reuse the dimension check from apply.
        phi.apply(g)?;
        g.mask()
    };
    Ok(table_predicates::predicted_period(table, gm))
}

/// How one map sits in the algebraic stratification.
#[derive(Clone, Debug)]
pub struct MapClassification {
    pub is_circ_homomorphism: bool,
    pub is_star_homomorphism: bool,
    pub is_star_commutative: bool,
    pub kernel: Vec<Element>,
    pub kernel2: Vec<Element>,
    pub image: Vec<Element>,
    pub delta_set: Vec<Element>,
    /// When star is commutative the dynamics has a single fixed point
    /// reached in one step from everywhere; this is it.
    pub fixed_unique_attractor: Option<Element>,
}

/// Computes every predicate of [`MapClassification`] for one map.
pub fn classify(phi: &ShufflingMap) -> Result<MapClassification> {
    let commutative = is_star_commutative(phi)?;
    let fixed = table_predicates::constant_step(phi.masks())
        .map(|m| Element::from_mask(m, phi.n_bits()));
    debug_assert_eq!(commutative, fixed.is_some());
    Ok(MapClassification {
        is_circ_homomorphism: is_homomorphism_circ(phi)?,
        is_star_homomorphism: is_homomorphism_star(phi)?,
        is_star_commutative: commutative,
        kernel: kernel(phi, 1),
        kernel2: kernel(phi, 2),
        image: image(phi),
        delta_set: delta_set(phi),
        fixed_unique_attractor: fixed,
    })
}

/// The same predicates on raw mask tables, shared with the sweep driver.
pub(crate) mod table_predicates {
    pub fn hom_circ(table: &[u32]) -> bool {
        let m = table.len();
        for a in 0..m {
            for b in a..m {
                if table[a ^ b] != table[a] ^ table[b] {
                    return false;
                }
            }
        }
        true
    }

    pub fn hom_star(table: &[u32]) -> bool {
        let m = table.len();
        for a in 0..m {
            let pa = table[a];
            for b in 0..m {
                // phi(a * b) = phi(a) * phi(b), i.e.
                // phi(a . phi(b)) = phi(a) . phi(phi(b)).
                let pb = table[b] as usize;
                if table[a ^ pb] != pa ^ table[pb] {
                    return false;
                }
            }
        }
        true
    }

    pub fn star_commutative_pairs(table: &[u32]) -> bool {
        let m = table.len();
        for a in 0..m {
            for b in a + 1..m {
                if (a as u32) ^ table[b] != (b as u32) ^ table[a] {
                    return false;
                }
            }
        }
        true
    }

    /// The constant value of the truncator step, if it has one.
    pub fn constant_step(table: &[u32]) -> Option<u32> {
        let first = table[0];
        for (m, &p) in table.iter().enumerate() {
            if m as u32 ^ p != first {
                return None;
            }
        }
        Some(first)
    }

    pub fn surjective(table: &[u32], scratch: &mut Vec<bool>) -> bool {
        scratch.clear();
        scratch.resize(table.len(), false);
        let mut count = 0;
        for &m in table {
            if !scratch[m as usize] {
                scratch[m as usize] = true;
                count += 1;
            }
        }
        count == table.len()
    }

    pub fn predicted_period(table: &[u32], g: u32) -> Option<u32> {
        let p1 = table[g as usize];
        if p1 == 0 {
            return Some(1);
        }
        let id_fixed = table[0] == 0;
        let c1 = crate::algebra::kernel::commutator(table, g, p1);
        if !(id_fixed && c1 == 0) {
            return None;
        }
        let p2 = table[p1 as usize];
        if p2 == 0 {
            return Some(2);
        }
        if crate::algebra::kernel::commutator(table, g, p2) != 0 {
            return None;
        }
        // Membership for period 3: phi(g) lies in im phi and in delta.
        let in_image = table.contains(&p1);
        let in_delta = p1 ^ p2 == table[p2 as usize];
        if in_image && in_delta {
            return Some(3);
        }
        None
    }
}
