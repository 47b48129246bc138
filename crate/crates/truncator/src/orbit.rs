//! Exact decomposition of the truncator dynamics into attractors and
//! basins.
//!
//! The one-step dynamics `T(g) = g . phi(g)` turns the group into a
//! functional graph: every component is a cycle with trees hanging off
//! it. [`analyze`] walks that graph once, iteratively, in `O(2^N)` time
//! and memory, and reports every cycle (attractor), every state's
//! transient depth, and the basin sizes.

use std::collections::BTreeMap;
use std::collections::HashMap;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::algebra::{group_size, Element, ShufflingMap};
use crate::error::{Error, Result};
use crate::json::SCHEMA;

/// Eventual period of a state: the length of the cycle it sits on, or
/// `Transient` for states that never return to themselves.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Period {
    Finite(u64),
    Transient,
}

impl Period {
    /// The period as a number, if the state is on a cycle.
    pub fn finite(self) -> Option<u64> {
        match self {
            Period::Finite(p) => Some(p),
            Period::Transient => None,
        }
    }
}

impl std::fmt::Display for Period {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Period::Finite(p) => write!(f, "{p}"),
            Period::Transient => write!(f, "transient"),
        }
    }
}

impl Serialize for Period {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Period::Finite(p) => serializer.serialize_u64(*p),
            Period::Transient => serializer.serialize_str("transient"),
        }
    }
}

impl<'de> Deserialize<'de> for Period {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(deserializer)?;
        match &v {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(Period::Finite)
                .ok_or_else(|| D::Error::custom("period must be a non-negative integer")),
            serde_json::Value::String(s) if s == "transient" => Ok(Period::Transient),
            _ => Err(D::Error::custom("period must be an integer or \"transient\"")),
        }
    }
}

/// One attractor of the dynamics: a cycle together with its basin size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attractor {
    /// Cycle states in orbit order, starting from the smallest label.
    pub cycle: Vec<Element>,
    /// Number of states whose trajectory ends on this cycle (cycle included).
    pub basin: u64,
}

impl Attractor {
    /// Cycle length.
    pub fn len(&self) -> u64 {
        self.cycle.len() as u64
    }

    /// Cycles are never empty.
    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Full orbit census of a shuffling map's truncator dynamics.
#[derive(Clone, Debug)]
pub struct OrbitReport {
    n_bits: u8,
    attractors: Vec<Attractor>,
    /// Attractor id per state mask.
    attractor_of: Vec<u32>,
    /// Steps until the trajectory first lands on its cycle; 0 on-cycle.
    depth: Vec<u32>,
}

impl OrbitReport {
    /// Dimension of the underlying cube.
    pub fn n_bits(&self) -> u8 {
        self.n_bits
    }

    /// All attractors, ordered by their smallest cycle label.
    pub fn attractors(&self) -> &[Attractor] {
        &self.attractors
    }

    /// Index into [`OrbitReport::attractors`] for the cycle `g` ends on.
    pub fn attractor_id(&self, g: Element) -> Result<usize> {
        self.check(g)?;
        Ok(self.attractor_of[g.mask() as usize] as usize)
    }

    /// Steps before `g`'s trajectory first lands on its cycle.
    pub fn transient_depth(&self, g: Element) -> Result<u32> {
        self.check(g)?;
        Ok(self.depth[g.mask() as usize])
    }

    /// Eventual period of `g`: its cycle length on-cycle, transient off it.
    pub fn period(&self, g: Element) -> Result<Period> {
        self.check(g)?;
        let m = g.mask() as usize;
        Ok(if self.depth[m] == 0 {
            Period::Finite(self.attractors[self.attractor_of[m] as usize].len())
        } else {
            Period::Transient
        })
    }

    /// Multiset of cycle lengths: length -> number of attractors.
    pub fn spectrum(&self) -> BTreeMap<u64, u64> {
        let mut spectrum = BTreeMap::new();
        for a in &self.attractors {
            *spectrum.entry(a.len()).or_insert(0) += 1;
        }
        spectrum
    }

    fn check(&self, g: Element) -> Result<()> {
        if g.n_bits() != self.n_bits {
            return Err(Error::DimensionMismatch {
                left: self.n_bits,
                right: g.n_bits(),
            });
        }
        Ok(())
    }
}

impl Serialize for OrbitReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct AttractorJson<'a> {
            cycle: &'a [u32],
            length: u64,
            basin: u64,
        }
        let cycles: Vec<Vec<u32>> = self
            .attractors
            .iter()
            .map(|a| a.cycle.iter().map(|e| e.index()).collect())
            .collect();
        let attractors: Vec<AttractorJson> = self
            .attractors
            .iter()
            .zip(&cycles)
            .map(|(a, cycle)| AttractorJson {
                cycle,
                length: a.len(),
                basin: a.basin,
            })
            .collect();
        let transients: BTreeMap<u32, u32> = self
            .depth
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(m, &d)| (m as u32 + 1, d))
            .collect();
        let mut s = serializer.serialize_struct("OrbitReport", 5)?;
        s.serialize_field("schema", SCHEMA)?;
        s.serialize_field("n_bits", &self.n_bits)?;
        s.serialize_field("attractors", &attractors)?;
        s.serialize_field("transients", &transients)?;
        s.serialize_field("spectrum", &self.spectrum())?;
        s.end()
    }
}

/// Decomposes the truncator dynamics of `phi` into attractors and basins.
///
/// Single pass, iterative, `O(2^N)` time and memory.
pub fn analyze(phi: &ShufflingMap) -> Result<OrbitReport> {
    let n_bits = phi.n_bits();
    let size = group_size(n_bits) as usize;
    let table = phi.masks();

    const UNSEEN: u32 = u32::MAX;
    let mut attractor_of = vec![UNSEEN; size];
    let mut depth = vec![0u32; size];
    let mut pos_in_path = vec![UNSEEN; size];
    let mut raw_cycles: Vec<Vec<u32>> = Vec::new();
    let mut path: Vec<u32> = Vec::new();

    for start in 0..size as u32 {
        if attractor_of[start as usize] != UNSEEN {
            continue;
        }
        path.clear();
        let mut v = start;
        loop {
            if attractor_of[v as usize] != UNSEEN {
                // Tail joins a structure finished in an earlier walk.
                let id = attractor_of[v as usize];
                let mut d = depth[v as usize];
                for &u in path.iter().rev() {
                    d += 1;
                    attractor_of[u as usize] = id;
                    depth[u as usize] = d;
                }
                break;
            }
            if pos_in_path[v as usize] != UNSEEN {
                // Closed a new cycle inside the current walk.
                let cut = pos_in_path[v as usize] as usize;
                let id = raw_cycles.len() as u32;
                for &u in &path[cut..] {
                    attractor_of[u as usize] = id;
                    depth[u as usize] = 0;
                }
                raw_cycles.push(path[cut..].to_vec());
                let mut d = 0u32;
                for &u in path[..cut].iter().rev() {
                    d += 1;
                    attractor_of[u as usize] = id;
                    depth[u as usize] = d;
                }
                break;
            }
            pos_in_path[v as usize] = path.len() as u32;
            path.push(v);
            v ^= table[v as usize];
        }
        // Stale pos_in_path entries are harmless: every pushed state now
        // has an attractor id and is skipped by both checks above.
    }

    // Canonical order: each cycle starts at its smallest label, attractors
    // sorted by that label.
    for cycle in &mut raw_cycles {
        let min_at = cycle
            .iter()
            .enumerate()
            .min_by_key(|&(_, &m)| m)
            .map(|(i, _)| i)
            .unwrap();
        cycle.rotate_left(min_at);
    }
    let mut order: Vec<usize> = (0..raw_cycles.len()).collect();
    order.sort_by_key(|&i| raw_cycles[i][0]);
    let mut new_id = vec![0u32; raw_cycles.len()];
    for (new, &old) in order.iter().enumerate() {
        new_id[old] = new as u32;
    }
    for id in attractor_of.iter_mut() {
        *id = new_id[*id as usize];
    }

    let mut basins = vec![0u64; raw_cycles.len()];
    for &id in &attractor_of {
        basins[id as usize] += 1;
    }
    let attractors: Vec<Attractor> = order
        .iter()
        .enumerate()
        .map(|(new, &old)| Attractor {
            cycle: raw_cycles[old]
                .iter()
                .map(|&m| Element::from_mask(m, n_bits))
                .collect(),
            basin: basins[new],
        })
        .collect();

    Ok(OrbitReport {
        n_bits,
        attractors,
        attractor_of,
        depth,
    })
}

/// Eventual period of a single state, without a full census.
///
/// Walks the trajectory of `g` recording first-visit times; the period is
/// the cycle length if `g` itself lies on the cycle, transient otherwise.
pub fn p_star(g: Element, phi: &ShufflingMap) -> Result<Period> {
    if g.n_bits() != phi.n_bits() {
        return Err(Error::DimensionMismatch {
            left: phi.n_bits(),
            right: g.n_bits(),
        });
    }
    let table = phi.masks();
    let mut seen: HashMap<u32, u32> = HashMap::new();
    let mut v = g.mask();
    let mut t = 0u32;
    loop {
        if let Some(&first) = seen.get(&v) {
            return Ok(if first == 0 {
                Period::Finite((t - first) as u64)
            } else {
                Period::Transient
            });
        }
        seen.insert(v, t);
        v ^= table[v as usize];
        t += 1;
    }
}
