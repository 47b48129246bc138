use rayon::prelude::*;

use crate::algebra::group_size;
use crate::error::{Error, Result};
use crate::random_maps::{check_dense_bits, TransitionMatrix};

use super::{up_probability, Beta, SpinModel};

impl SpinModel {
    /// One-step transition matrix of the synchronous dynamics at finite β.
    ///
    /// Sites update independently given the current configuration, so row
    /// `g` is the product over sites of the two-point up/down law with
    /// up-probability `1 / (1 + e^{-2βh_i(g)})`. A tied site contributes
    /// exactly ½/½. Dense in the configuration count, hence capped like
    /// every other `2^N × 2^N` object.
    pub fn finite_beta_matrix(&self) -> Result<TransitionMatrix> {
        let Beta::Finite(beta) = self.beta else {
            return Err(Error::InfiniteBeta);
        };
        let n_bits = self.n_bits();
        check_dense_bits(n_bits)?;
        let size = group_size(n_bits) as usize;
        let n_sites = self.n_sites as usize;
        let rows: Vec<Vec<f64>> = (0..size as u32)
            .into_par_iter()
            .map(|mask| {
                let mut row = vec![0.0; size];
                row[0] = 1.0;
                for site0 in 0..n_sites {
                    let p_up = up_probability(beta, self.local_field_mask(mask, site0));
                    let block = 1usize << site0;
                    for m in 0..block {
                        let w = row[m];
                        if w != 0.0 {
                            row[m | block] = w * (1.0 - p_up);
                            row[m] = w * p_up;
                        }
                    }
                }
                row
            })
            .collect();
        TransitionMatrix::new(n_bits, rows)
    }
}
