use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{group_size, Element, ShufflingMap};
use crate::error::{Error, Result};
use crate::json::{check_schema, SCHEMA};

/// Largest cube dimension for dense `M x M` probability objects.
pub const DENSE_LIMIT_BITS: u8 = 12;

/// Row sums may deviate this much before a measure or matrix is rejected;
/// accepted rows are renormalized exactly.
pub(crate) const ROW_SUM_TOLERANCE: f64 = 1e-9;

pub(crate) fn check_dense_bits(n_bits: u8) -> Result<()> {
    let _ = Element::identity(n_bits)?;
    if n_bits > DENSE_LIMIT_BITS {
        return Err(Error::Capacity {
            what: "dense probability table dimension",
            requested: n_bits as u64,
            limit: DENSE_LIMIT_BITS as u64,
        });
    }
    Ok(())
}

/// Validates one probability row and rescales it to sum exactly 1.
pub(crate) fn normalize_row(row: &mut [f64], index: usize, what: &str) -> Result<()> {
    for (j, &p) in row.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidMeasure {
                reason: format!("{what}[{index}][{j}] = {p} is not a probability"),
            });
        }
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
        return Err(Error::InvalidMeasure {
            reason: format!("{what} row {index} sums to {sum}, expected 1"),
        });
    }
    for p in row.iter_mut() {
        *p /= sum;
    }
    Ok(())
}

/// A product law on map space: the image of each state is drawn
/// independently, state `g` from its own distribution `nu_g` over the
/// group.
///
/// Row `g` of the table is `nu_g`; maps sampled from the measure feed the
/// annealed truncator chain, whose one-step law is
/// [`step_matrix`](crate::random_maps::step_matrix).
#[derive(Clone, Debug, PartialEq)]
pub struct MapMeasure {
    n_bits: u8,
    /// `rows[g][v] = P(phi(g) = v)` on zero-based masks.
    rows: Vec<Vec<f64>>,
}

impl MapMeasure {
    /// The uniform measure: every image value equally likely at every state.
    pub fn uniform(n_bits: u8) -> Result<Self> {
        check_dense_bits(n_bits)?;
        let size = group_size(n_bits) as usize;
        let p = 1.0 / size as f64;
        Ok(MapMeasure {
            n_bits,
            rows: vec![vec![p; size]; size],
        })
    }

    /// The measure concentrated on one map: sampling always returns `phi`.
    pub fn point_mass(phi: &ShufflingMap) -> Result<Self> {
        check_dense_bits(phi.n_bits())?;
        let size = phi.size() as usize;
        let mut rows = vec![vec![0.0; size]; size];
        for (g, &v) in phi.masks().iter().enumerate() {
            rows[g][v as usize] = 1.0;
        }
        Ok(MapMeasure {
            n_bits: phi.n_bits(),
            rows,
        })
    }

    /// A measure with rows drawn uniformly from the probability simplex.
    pub fn random<R: Rng + ?Sized>(n_bits: u8, rng: &mut R) -> Result<Self> {
        check_dense_bits(n_bits)?;
        let size = group_size(n_bits) as usize;
        let rows = (0..size)
            .map(|_| {
                // Normalized unit exponentials land uniformly on the simplex.
                let mut row: Vec<f64> = (0..size)
                    .map(|_| -(1.0 - rng.random::<f64>()).ln())
                    .collect();
                let sum: f64 = row.iter().sum();
                for p in row.iter_mut() {
                    *p /= sum;
                }
                row
            })
            .collect();
        Ok(MapMeasure { n_bits, rows })
    }

    /// Builds a measure from explicit probability rows (1-based state
    /// order, row `i` describing the image of state `i`).
    pub fn from_rows(n_bits: u8, mut rows: Vec<Vec<f64>>) -> Result<Self> {
        check_dense_bits(n_bits)?;
        let size = group_size(n_bits) as usize;
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidMeasure {
                reason: format!("measure needs {size} rows of {size} probabilities"),
            });
        }
        for (i, row) in rows.iter_mut().enumerate() {
            normalize_row(row, i + 1, "nu")?;
        }
        Ok(MapMeasure { n_bits, rows })
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

    /// The image distribution of one state; entry `j` is the probability
    /// of image label `j + 1`.
    pub fn row(&self, g: Element) -> Result<&[f64]> {
        if g.n_bits() != self.n_bits {
            return Err(Error::DimensionMismatch {
                left: self.n_bits,
                right: g.n_bits(),
            });
        }
        Ok(&self.rows[g.mask() as usize])
    }

    /// `P(phi(g) = v)`.
    pub fn prob(&self, g: Element, v: Element) -> Result<f64> {
        let row = self.row(g)?;
        if v.n_bits() != self.n_bits {
            return Err(Error::DimensionMismatch {
                left: self.n_bits,
                right: v.n_bits(),
            });
        }
        Ok(row[v.mask() as usize])
    }

    #[inline]
    pub(crate) fn rows_masks(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Precomputes per-row alias tables for repeated sampling.
    pub fn sampler(&self) -> Result<MeasureSampler> {
        let dists = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                WeightedIndex::new(row).map_err(|e| Error::InvalidMeasure {
                    reason: format!("row {} is not sampleable: {e}", i + 1),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MeasureSampler {
            n_bits: self.n_bits,
            dists,
        })
    }
}

impl Serialize for MapMeasure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("MapMeasure", 3)?;
        s.serialize_field("schema", SCHEMA)?;
        s.serialize_field("n_bits", &self.n_bits)?;
        s.serialize_field("nu", &self.rows)?;
        s.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureFile {
    #[serde(default)]
    schema: Option<String>,
    n_bits: u8,
    nu: Vec<Vec<f64>>,
}

impl<'de> Deserialize<'de> for MapMeasure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = MeasureFile::deserialize(deserializer)?;
        check_schema(file.schema.as_deref()).map_err(D::Error::custom)?;
        MapMeasure::from_rows(file.n_bits, file.nu).map_err(D::Error::custom)
    }
}

/// Sampler view of a [`MapMeasure`] with per-row alias tables built once.
pub struct MeasureSampler {
    n_bits: u8,
    dists: Vec<WeightedIndex<f64>>,
}

impl MeasureSampler {
    /// Draws an image mask for the state with mask `g`.
    #[inline]
    pub(crate) fn sample_image<R: Rng + ?Sized>(&self, g: u32, rng: &mut R) -> u32 {
        self.dists[g as usize].sample(rng) as u32
    }

    /// Draws `phi(g)`.
    pub fn sample_image_of<R: Rng + ?Sized>(&self, g: Element, rng: &mut R) -> Result<Element> {
        if g.n_bits() != self.n_bits {
            return Err(Error::DimensionMismatch {
                left: self.n_bits,
                right: g.n_bits(),
            });
        }
        Ok(Element::from_mask(
            self.sample_image(g.mask(), rng),
            self.n_bits,
        ))
    }

    /// Draws a whole map, each image independently from its row.
    pub fn sample_map<R: Rng + ?Sized>(&self, rng: &mut R) -> ShufflingMap {
        let table = (0..self.dists.len() as u32)
            .map(|g| self.sample_image(g, rng))
            .collect();
        ShufflingMap::from_masks(self.n_bits, table)
    }
}

/// A map with every image drawn uniformly and independently.
///
/// Unlike [`MapMeasure::uniform`] this never materializes the `M x M`
/// table, so it works up to the full 24-bit dimension cap.
pub fn sample_uniform_map<R: Rng + ?Sized>(n_bits: u8, rng: &mut R) -> Result<ShufflingMap> {
    let _ = Element::identity(n_bits)?;
    let size = group_size(n_bits);
    let table = (0..size).map(|_| rng.random_range(0..size)).collect();
    Ok(ShufflingMap::from_masks(n_bits, table))
}
