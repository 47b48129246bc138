use rayon::prelude::*;
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::measure::{check_dense_bits, normalize_row, MapMeasure};
use crate::algebra::{group_size, Element, ShufflingMap};
use crate::error::{Error, Result};
use crate::json::{check_schema, SCHEMA};

/// A row-stochastic matrix over the `2^N` states, stored dense row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    n_bits: u8,
    data: Vec<f64>,
}

impl TransitionMatrix {
    /// Builds a matrix from probability rows (row `i` holds the
    /// transition law out of state `i`, 1-based order).
    pub fn new(n_bits: u8, rows: Vec<Vec<f64>>) -> Result<Self> {
        check_dense_bits(n_bits)?;
        let size = group_size(n_bits) as usize;
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidMatrix {
                reason: format!("matrix needs {size} rows of {size} entries"),
            });
        }
        let mut data = Vec::with_capacity(size * size);
        for (i, mut row) in rows.into_iter().enumerate() {
            normalize_row(&mut row, i + 1, "matrix").map_err(|e| match e {
                Error::InvalidMeasure { reason } => Error::InvalidMatrix { reason },
                other => other,
            })?;
            data.extend_from_slice(&row);
        }
        Ok(TransitionMatrix { n_bits, data })
    }

    pub(crate) fn from_flat(n_bits: u8, data: Vec<f64>) -> Self {
        let size = group_size(n_bits) as usize;
        debug_assert_eq!(data.len(), size * size);
        debug_assert!(data
            .chunks_exact(size)
            .all(|row| (row.iter().sum::<f64>() - 1.0).abs() < 1e-6));
        TransitionMatrix { n_bits, data }
    }

    /// The 0/1 matrix of the one-step dynamics `g -> g . phi(g)`.
    pub fn deterministic(phi: &ShufflingMap) -> Result<Self> {
        check_dense_bits(phi.n_bits())?;
        let size = phi.size() as usize;
        let mut data = vec![0.0; size * size];
        for (g, &v) in phi.masks().iter().enumerate() {
            data[g * size + (g ^ v as usize)] = 1.0;
        }
        Ok(TransitionMatrix {
            n_bits: phi.n_bits(),
            data,
        })
    }

    /// Dimension of the underlying cube.
    #[inline]
    pub fn n_bits(&self) -> u8 {
        self.n_bits
    }

    /// Number of states, `2^N`.
    #[inline]
    pub fn size(&self) -> u32 {
        group_size(self.n_bits)
    }

    #[inline]
    pub(crate) fn row_mask(&self, m: u32) -> &[f64] {
        let size = self.size() as usize;
        &self.data[m as usize * size..(m as usize + 1) * size]
    }

    /// Transition law out of `g`; entry `j` targets label `j + 1`.
    pub fn row(&self, g: Element) -> Result<&[f64]> {
        self.check_dim(g.n_bits())?;
        Ok(self.row_mask(g.mask()))
    }

    fn check_dim(&self, other: u8) -> Result<()> {
        if other != self.n_bits {
            return Err(Error::DimensionMismatch {
                left: self.n_bits,
                right: other,
            });
        }
        Ok(())
    }

    /// Matrix product `self . other`, the law of doing `self` then `other`.
    pub fn matmul(&self, other: &TransitionMatrix) -> Result<TransitionMatrix> {
        self.check_dim(other.n_bits)?;
        let size = self.size() as usize;
        let mut data = vec![0.0; size * size];
        data.par_chunks_mut(size)
            .enumerate()
            .for_each(|(i, out_row)| {
                let a_row = &self.data[i * size..(i + 1) * size];
                for (k, &a) in a_row.iter().enumerate() {
                    if a == 0.0 {
                        continue;
                    }
                    let b_row = &other.data[k * size..(k + 1) * size];
                    for (o, &b) in out_row.iter_mut().zip(b_row) {
                        *o += a * b;
                    }
                }
            });
        Ok(TransitionMatrix {
            n_bits: self.n_bits,
            data,
        })
    }

    /// Pushes a distribution one step forward: `law . self`.
    pub fn propagate(&self, law: &[f64]) -> Result<Vec<f64>> {
        let size = self.size() as usize;
        if law.len() != size {
            return Err(Error::InvalidMatrix {
                reason: format!("law has {} entries, matrix expects {size}", law.len()),
            });
        }
        let mut out = vec![0.0; size];
        for (i, &w) in law.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(self.row_mask(i as u32)) {
                *o += w * p;
            }
        }
        Ok(out)
    }

    /// Law of the chain after `steps` transitions from the point mass at
    /// `g` — one row of the `steps`-th matrix power, without forming it.
    pub fn state_law(&self, g: Element, steps: u32) -> Result<Vec<f64>> {
        self.check_dim(g.n_bits())?;
        let size = self.size() as usize;
        let mut law = vec![0.0; size];
        law[g.mask() as usize] = 1.0;
        for _ in 0..steps {
            law = self.propagate(&law)?;
        }
        Ok(law)
    }

    /// True when every row is a point mass.
    pub fn is_deterministic(&self) -> bool {
        let size = self.size() as usize;
        self.data.chunks_exact(size).all(|row| {
            row.iter().filter(|&&p| p > 0.0).count() == 1
                && row.iter().all(|&p| p == 0.0 || (p - 1.0).abs() < 1e-12)
        })
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &TransitionMatrix) -> Result<f64> {
        self.check_dim(other.n_bits)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

impl Serialize for TransitionMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let size = self.size() as usize;
        let rows: Vec<&[f64]> = self.data.chunks_exact(size).collect();
        let mut s = serializer.serialize_struct("TransitionMatrix", 3)?;
        s.serialize_field("schema", SCHEMA)?;
        s.serialize_field("n_bits", &self.n_bits)?;
        s.serialize_field("matrix", &rows)?;
        s.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    #[serde(default)]
    schema: Option<String>,
    n_bits: u8,
    matrix: Vec<Vec<f64>>,
}

impl<'de> Deserialize<'de> for TransitionMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = MatrixFile::deserialize(deserializer)?;
        check_schema(file.schema.as_deref()).map_err(D::Error::custom)?;
        TransitionMatrix::new(file.n_bits, file.matrix).map_err(D::Error::custom)
    }
}

/// One-step law of the annealed truncator chain under `nu`: a fresh map
/// is drawn every step, so `P(g -> h) = nu_g(g . h)`.
pub fn step_matrix(nu: &MapMeasure) -> TransitionMatrix {
    let size = nu.size() as usize;
    let rows = nu.rows_masks();
    let mut data = vec![0.0; size * size];
    for (i, out_row) in data.chunks_exact_mut(size).enumerate() {
        for (j, o) in out_row.iter_mut().enumerate() {
            *o = rows[i][i ^ j];
        }
    }
    TransitionMatrix::from_flat(nu.n_bits(), data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(i: u32, n: u8) -> Element {
        Element::new(i, n).unwrap()
    }

    #[test]
    fn deterministic_matrix_tracks_the_one_step_dynamics() {
        let phi = ShufflingMap::complement(2).unwrap();
        let t = TransitionMatrix::deterministic(&phi).unwrap();
        assert!(t.is_deterministic());
        for g in Element::all(2).unwrap() {
            let target = phi.truncator_step(g).unwrap();
            let row = t.row(g).unwrap();
            assert_eq!(row[target.mask() as usize], 1.0);
            assert_eq!(row.iter().sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn step_matrix_under_uniform_measure_is_flat() {
        let nu = MapMeasure::uniform(2).unwrap();
        let phi = step_matrix(&nu);
        for g in Element::all(2).unwrap() {
            assert!(phi.row(g).unwrap().iter().all(|&p| (p - 0.25).abs() < 1e-15));
        }
    }

    #[test]
    fn step_matrix_of_a_point_mass_is_the_deterministic_step() {
        let map = ShufflingMap::from_table(2, &[3, 1, 4, 2]).unwrap();
        let nu = MapMeasure::point_mass(&map).unwrap();
        let annealed = step_matrix(&nu);
        let quenched = TransitionMatrix::deterministic(&map).unwrap();
        assert_eq!(annealed.max_abs_diff(&quenched).unwrap(), 0.0);
        assert!(annealed.is_deterministic());
    }

    #[test]
    fn matmul_matches_two_step_hand_computation() {
        // Two-state chain: rows (0.25, 0.75) and (0.5, 0.5).
        let t = TransitionMatrix::new(1, vec![vec![0.25, 0.75], vec![0.5, 0.5]]).unwrap();
        let t2 = t.matmul(&t).unwrap();
        let row = t2.row(el(1, 1)).unwrap();
        // (0.25, 0.75) . T = (0.25*0.25 + 0.75*0.5, ..).
        assert!((row[0] - 0.4375).abs() < 1e-15);
        assert!((row[1] - 0.5625).abs() < 1e-15);
    }

    #[test]
    fn propagate_and_state_law_agree_with_matrix_powers() {
        let t = TransitionMatrix::new(1, vec![vec![0.25, 0.75], vec![0.5, 0.5]]).unwrap();
        let t3 = t.matmul(&t).unwrap().matmul(&t).unwrap();
        let law = t.state_law(el(2, 1), 3).unwrap();
        let row = t3.row(el(2, 1)).unwrap();
        for (a, b) in law.iter().zip(row) {
            assert!((a - b).abs() < 1e-14);
        }
        let sum: f64 = law.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert_eq!(t.state_law(el(2, 1), 0).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn validation_rejects_malformed_matrices() {
        assert!(TransitionMatrix::new(1, vec![vec![0.5, 0.5]]).is_err());
        assert!(TransitionMatrix::new(1, vec![vec![0.9, 0.2], vec![1.0, 0.0]]).is_err());
        assert!(TransitionMatrix::new(1, vec![vec![-0.5, 1.5], vec![1.0, 0.0]]).is_err());
        assert!(TransitionMatrix::new(13, vec![]).is_err());
        let t = TransitionMatrix::new(1, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(t.propagate(&[1.0, 0.0, 0.0]).is_err());
        assert!(t.row(el(1, 2)).is_err());
    }

    #[test]
    fn json_roundtrip_and_schema_checks() {
        let t = TransitionMatrix::new(1, vec![vec![0.25, 0.75], vec![0.5, 0.5]]).unwrap();
        let text = serde_json::to_string(&t).unwrap();
        assert!(text.contains("\"schema\":\"truncator/1\""));
        assert!(text.contains("\"matrix\""));
        let back: TransitionMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back.max_abs_diff(&t).unwrap(), 0.0);
        assert!(serde_json::from_str::<TransitionMatrix>(
            r#"{"schema":"other/1","n_bits":1,"matrix":[[1.0,0.0],[0.0,1.0]]}"#
        )
        .is_err());
    }
}
