use rayon::prelude::*;

use crate::algebra::{Element, ShufflingMap};
use crate::error::{Error, Result};

use super::SpinModel;

/// A frozen sweep compiled into a shuffling map, together with the
/// configurations where some field vanished and the keep-current-spin
/// convention silently decided the update.
#[derive(Clone, Debug)]
pub struct FrozenCompilation {
    map: ShufflingMap,
    ties: Vec<Element>,
}

impl FrozenCompilation {
    /// The compiled map φ with φ(g) = g ∘ successor(g), so that the
    /// truncator step g ↦ g ∘ φ(g) reproduces the frozen sweep.
    pub fn map(&self) -> &ShufflingMap {
        &self.map
    }

    /// Configurations containing at least one zero-field site, ascending.
    pub fn ties(&self) -> &[Element] {
        &self.ties
    }

    /// The map, but only if no configuration was tied.
    pub fn strict(self) -> Result<ShufflingMap> {
        if self.ties.is_empty() {
            Ok(self.map)
        } else {
            Err(Error::TiedConfigurations {
                configurations: self.ties.iter().map(Element::index).collect(),
            })
        }
    }
}

impl SpinModel {
    /// Compile the β = ∞ synchronous sweep over all `2^N` configurations.
    ///
    /// Because elements are self-inverse, `g ∘ successor(g)` is exactly the
    /// map whose truncator dynamics steps `g` to its successor; orbit
    /// analysis of the returned map therefore describes the frozen market.
    pub fn frozen_phi(&self) -> FrozenCompilation {
        let n_bits = self.n_bits();
        let size = 1u64 << n_bits;
        let rows: Vec<(u32, bool)> = (0..size as u32)
            .into_par_iter()
            .map(|mask| self.successor_mask(mask))
            .collect();
        let phi: Vec<u32> = rows
            .iter()
            .zip(0u32..)
            .map(|(&(next, _), mask)| mask ^ next)
            .collect();
        let ties = rows
            .iter()
            .zip(0u32..)
            .filter(|&(&(_, tied), _)| tied)
            .map(|(_, mask)| Element::from_mask(mask, n_bits))
            .collect();
        FrozenCompilation {
            map: ShufflingMap::from_masks(n_bits, phi),
            ties,
        }
    }
}
