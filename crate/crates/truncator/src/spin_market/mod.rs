//! Synchronous spin market whose frozen limit compiles to a shuffling map.
//!
//! `N = l^d` spins live on the sites of a d-dimensional torus and update
//! simultaneously. Each site feels its taxicab-ball neighbors plus a
//! global coupling that pushes against the majority: the local field at
//! site `i` in configuration `η` is
//!
//! ```text
//! h_i = Σ_{y ~ i} η_y  −  α · η_i · |M| / N,      M = Σ_y η_y
//! ```
//!
//! At inverse temperature β the spin flips up with probability
//! `1 / (1 + exp(-2 β h_i))`; at β = ∞ it aligns with the sign of `h_i`
//! and keeps its value when the field vanishes exactly. The zero-field
//! ("tied") configurations are reported explicitly because there the
//! frozen dynamics is a convention, not a limit.
//!
//! Configurations are group elements: bit `i-1` of the mask is set exactly
//! when spin `i` is down, so element 1 is all-up and element `2^N` is
//! all-down. [`SpinModel::frozen_phi`] compiles one synchronous sweep into
//! a [`ShufflingMap`](crate::ShufflingMap) whose truncator dynamics can
//! then be analyzed with the orbit tools, and
//! [`SpinModel::finite_beta_matrix`] builds the corresponding stochastic
//! transition matrix at finite β.

mod finite_beta;
mod frozen;
mod lattice;
mod regime;

pub use frozen::FrozenCompilation;
pub use regime::{regime_report, RegimePoint, RegimeReport};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{Element, MAX_BITS};
use crate::error::{Error, Result};
use lattice::Lattice;

/// Inverse temperature: a positive real or the frozen limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Beta {
    Finite(f64),
    Infinite,
}

impl Beta {
    /// The numeric value at finite β.
    pub fn finite(self) -> Option<f64> {
        match self {
            Beta::Finite(b) => Some(b),
            Beta::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Beta::Infinite)
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Finite(b) => write!(f, "{b}"),
            Beta::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Beta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(Beta::Infinite);
        }
        s.parse::<f64>()
            .map(Beta::Finite)
            .map_err(|_| Error::InvalidModel {
                reason: format!("inverse temperature '{s}' is neither a number nor 'inf'"),
            })
    }
}

// β serializes as a bare number, with the frozen limit spelled "inf" so
// the JSON stays valid.
impl Serialize for Beta {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Beta::Finite(b) => serializer.serialize_f64(*b),
            Beta::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Beta {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Number(b) => Ok(Beta::Finite(b)),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A spin market on the torus: `l^d` sites, neighbor coupling of unit
/// strength within taxicab radius `radius`, and global counter-coupling
/// `alpha`.
#[derive(Clone, Debug)]
pub struct SpinModel {
    l: u32,
    d: u32,
    radius: u32,
    alpha: f64,
    beta: Beta,
    n_sites: u32,
    lattice: Lattice,
}

impl SpinModel {
    /// Nearest-neighbor model (radius 1).
    pub fn new(l: u32, d: u32, alpha: f64, beta: Beta) -> Result<Self> {
        Self::with_radius(l, d, 1, alpha, beta)
    }

    pub fn with_radius(l: u32, d: u32, radius: u32, alpha: f64, beta: Beta) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidModel {
                reason: format!("torus side must be at least 2, got {l}"),
            });
        }
        if d < 1 {
            return Err(Error::InvalidModel {
                reason: "torus dimension must be at least 1".into(),
            });
        }
        if radius < 1 {
            return Err(Error::InvalidModel {
                reason: "neighborhood radius must be at least 1".into(),
            });
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidModel {
                reason: format!("global coupling must be finite and nonnegative, got {alpha}"),
            });
        }
        if let Beta::Finite(b) = beta {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::InvalidModel {
                    reason: format!("inverse temperature must be positive and finite, got {b}"),
                });
            }
        }
        let mut n_sites = 1u64;
        for _ in 0..d {
            n_sites = n_sites.saturating_mul(l as u64);
        }
        if n_sites > MAX_BITS as u64 {
            return Err(Error::Capacity {
                what: "spin sites",
                requested: n_sites,
                limit: MAX_BITS as u64,
            });
        }
        Ok(SpinModel {
            l,
            d,
            radius,
            alpha,
            beta,
            n_sites: n_sites as u32,
            lattice: Lattice::new(l, d, radius),
        })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> Beta {
        self.beta
    }

    /// Number of spins `N = l^d`.
    pub fn n_sites(&self) -> u32 {
        self.n_sites
    }

    /// Bits per configuration; equals [`Self::n_sites`].
    pub fn n_bits(&self) -> u8 {
        self.n_sites as u8
    }

    fn check_config(&self, g: Element) -> Result<u32> {
        if g.n_bits() != self.n_bits() {
            return Err(Error::DimensionMismatch {
                left: self.n_bits(),
                right: g.n_bits(),
            });
        }
        Ok(g.mask())
    }

    fn check_site(&self, site: u32) -> Result<usize> {
        if site == 0 || site > self.n_sites {
            return Err(Error::InvalidModel {
                reason: format!("site {site} out of range 1..={}", self.n_sites),
            });
        }
        Ok(site as usize - 1)
    }

    /// Sites adjacent to `site` (both one-based), listed with multiplicity:
    /// on small tori several offsets can wrap onto the same site.
    pub fn neighbors(&self, site: u32) -> Result<Vec<u32>> {
        let site0 = self.check_site(site)?;
        Ok(self.lattice.neighbors0(site0).iter().map(|&j| j + 1).collect())
    }

    /// Net magnetization `Σ_i η_i` of a configuration.
    pub fn magnetization(&self, g: Element) -> Result<i64> {
        let mask = self.check_config(g)?;
        Ok(magnetization_of(mask, self.n_sites))
    }

    /// Field felt by `site` (one-based) in configuration `g`.
    pub fn local_field(&self, g: Element, site: u32) -> Result<f64> {
        let mask = self.check_config(g)?;
        let site0 = self.check_site(site)?;
        Ok(self.local_field_mask(mask, site0))
    }

    pub(crate) fn local_field_mask(&self, mask: u32, site0: usize) -> f64 {
        let neighbor_sum: i64 = self
            .lattice
            .neighbors0(site0)
            .iter()
            .map(|&j| spin_of(mask, j as usize))
            .sum();
        let m = magnetization_of(mask, self.n_sites);
        let eta = spin_of(mask, site0) as f64;
        neighbor_sum as f64 - self.alpha * eta * m.abs() as f64 / self.n_sites as f64
    }

    /// Probability that `site` points up after one update. Requires finite β.
    pub fn flip_probability(&self, g: Element, site: u32) -> Result<f64> {
        let Beta::Finite(beta) = self.beta else {
            return Err(Error::InfiniteBeta);
        };
        let h = self.local_field(g, site)?;
        Ok(up_probability(beta, h))
    }

    /// One frozen synchronous sweep: every spin aligns with the sign of its
    /// field, and a spin whose field vanishes exactly keeps its value.
    pub fn successor(&self, g: Element) -> Result<Element> {
        let mask = self.check_config(g)?;
        let (next, _) = self.successor_mask(mask);
        Ok(Element::from_mask(next, self.n_bits()))
    }

    /// Frozen update on a raw mask; the flag reports whether any site was
    /// tied (zero field).
    pub(crate) fn successor_mask(&self, mask: u32) -> (u32, bool) {
        let mut next = 0u32;
        let mut tied = false;
        for site0 in 0..self.n_sites as usize {
            let h = self.local_field_mask(mask, site0);
            if h < 0.0 {
                next |= 1 << site0;
            } else if h == 0.0 {
                tied = true;
                next |= mask & (1 << site0);
            }
        }
        (next, tied)
    }

    /// Shift a configuration one step along a torus axis (zero-based):
    /// the spin at coordinate vector `c` moves to `c + e_axis`.
    pub fn translate(&self, g: Element, axis: u32) -> Result<Element> {
        let mask = self.check_config(g)?;
        if axis >= self.d {
            return Err(Error::InvalidModel {
                reason: format!("axis {axis} out of range for dimension {}", self.d),
            });
        }
        let stride = (self.l as u64).pow(axis) as usize;
        let mut out = 0u32;
        for site0 in 0..self.n_sites as usize {
            if mask & (1 << site0) != 0 {
                let c = site0 / stride % self.l as usize;
                let target = site0 - c * stride + ((c + 1) % self.l as usize) * stride;
                out |= 1 << target;
            }
        }
        Ok(Element::from_mask(out, self.n_bits()))
    }
}

/// Spin at zero-based `site`: set bit means down (−1).
#[inline]
fn spin_of(mask: u32, site0: usize) -> i64 {
    if mask & (1 << site0) != 0 {
        -1
    } else {
        1
    }
}

#[inline]
fn magnetization_of(mask: u32, n_sites: u32) -> i64 {
    n_sites as i64 - 2 * mask.count_ones() as i64
}

/// `P(spin points up) = 1 / (1 + e^{-2βh})`, saturating cleanly at 0 and 1.
#[inline]
fn up_probability(beta: f64, h: f64) -> f64 {
    1.0 / (1.0 + (-2.0 * beta * h).exp())
}
