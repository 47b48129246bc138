use serde::Serialize;

use super::matrix::step_matrix;
use super::measure::MapMeasure;
use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::rng::parallel_bin_counts;

/// Fewest trials accepted by the two-step z-score check.
pub const MIN_TRIALS: u64 = 10_000;

/// Stream labels for the chain samplers.
const INCREMENT_JOB: u32 = 0x20;
const RETURN_JOB: u32 = 0x30;
const TWO_STEP_JOB_BASE: u32 = 0x1000;

/// Outcome of the empirical Chapman-Kolmogorov check: simulated two-step
/// transitions of the annealed chain against the squared one-step matrix.
#[derive(Clone, Debug, Serialize)]
pub struct ChapmanCheck {
    pub n_bits: u8,
    pub trials: u64,
    /// Largest binomial z-score over all (start, target) cells.
    pub max_abs_z: f64,
    /// 1-based (start, target) pair attaining `max_abs_z`.
    pub worst_start: u32,
    pub worst_target: u32,
}

impl ChapmanCheck {
    /// True when every cell stays below the given z threshold.
    pub fn within(&self, z_limit: f64) -> bool {
        self.max_abs_z < z_limit
    }
}

fn z_score(count: u64, trials: u64, p: f64) -> f64 {
    if p <= 0.0 {
        return if count == 0 { 0.0 } else { f64::INFINITY };
    }
    if p >= 1.0 {
        return if count == trials { 0.0 } else { f64::INFINITY };
    }
    let t = trials as f64;
    (count as f64 - t * p) / (t * p * (1.0 - p)).sqrt()
}

/// Simulates `trials` two-step transitions of the annealed chain from
/// every start state (a fresh map each step) and z-scores the end-state
/// histograms against the matrix square of the one-step law.
pub fn chapman_check(nu: &MapMeasure, trials: u64, seed: u64) -> Result<ChapmanCheck> {
    if trials < MIN_TRIALS {
        return Err(Error::TooFewTrials {
            requested: trials,
            min: MIN_TRIALS,
        });
    }
    let m = nu.size();
    let phi = step_matrix(nu);
    let two = phi.matmul(&phi)?;
    let sampler = nu.sampler()?;
    let mut max_abs_z = 0.0f64;
    let mut worst = (0u32, 0u32);
    for start in 0..m {
        let counts = parallel_bin_counts(
            m as usize,
            trials,
            seed,
            TWO_STEP_JOB_BASE + start,
            |rng| {
                let mid = start ^ sampler.sample_image(start, rng);
                (mid ^ sampler.sample_image(mid, rng)) as usize
            },
        );
        let row = two.row_mask(start);
        for (target, (&count, &p)) in counts.iter().zip(row).enumerate() {
            let z = z_score(count, trials, p).abs();
            if z > max_abs_z {
                max_abs_z = z;
                worst = (start + 1, target as u32 + 1);
            }
        }
    }
    Ok(ChapmanCheck {
        n_bits: nu.n_bits(),
        trials,
        max_abs_z,
        worst_start: worst.0,
        worst_target: worst.1,
    })
}

/// Law of the `p`-th increment of the annealed power sequence started at
/// `g`: the image drawn at step `p`, after `p - 1` annealed steps.
///
/// Entry `j` is the probability of image label `j + 1`. For `p = 1` this
/// is exactly the measure row of `g`.
pub fn increment_chain_law(nu: &MapMeasure, g: Element, p: u32) -> Result<Vec<f64>> {
    if p == 0 {
        return Err(Error::EmptyRange {
            what: "increment step",
        });
    }
    let state_law = step_matrix(nu).state_law(g, p - 1)?;
    let rows = nu.rows_masks();
    let mut law = vec![0.0; nu.size() as usize];
    for (x, &w) in state_law.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for (o, &q) in law.iter_mut().zip(&rows[x]) {
            *o += w * q;
        }
    }
    Ok(law)
}

/// Monte Carlo histogram of the `p`-th increment: `trials` independent
/// runs of the annealed sequence, binned by the image drawn at step `p`.
pub fn increment_chain_monte_carlo(
    nu: &MapMeasure,
    g: Element,
    p: u32,
    trials: u64,
    seed: u64,
) -> Result<Vec<u64>> {
    if p == 0 {
        return Err(Error::EmptyRange {
            what: "increment step",
        });
    }
    let _ = nu.row(g)?;
    let sampler = nu.sampler()?;
    Ok(parallel_bin_counts(
        nu.size() as usize,
        trials,
        seed,
        INCREMENT_JOB,
        |rng| {
            let mut x = g.mask();
            for _ in 1..p {
                x ^= sampler.sample_image(x, rng);
            }
            sampler.sample_image(x, rng) as usize
        },
    ))
}

/// Empirical side of a return-time run.
#[derive(Clone, Debug, Serialize)]
pub struct EmpiricalReturns {
    /// `counts[t-1]` trials first returned at step `t`.
    pub counts: Vec<u64>,
    /// Trials that did not return within the horizon.
    pub beyond: u64,
    pub trials: u64,
}

/// First-return law of the annealed chain to its start state.
#[derive(Clone, Debug, Serialize)]
pub struct ReturnCurve {
    /// `probabilities[t-1] = P(first return at step t)`, `t = 1..=horizon`.
    pub probabilities: Vec<f64>,
    /// Probability of no return within the horizon.
    pub residual: f64,
    /// Monte Carlo histogram; absent when `trials = 0`.
    pub empirical: Option<EmpiricalReturns>,
}

/// First-return distribution of the annealed chain started at `g`,
/// exactly up to `horizon` steps via the taboo recursion (mass that
/// re-enters `g` is removed each step), plus an optional Monte Carlo
/// histogram with `trials` runs.
pub fn return_time_distribution(
    nu: &MapMeasure,
    g: Element,
    horizon: u32,
    trials: u64,
    seed: u64,
) -> Result<ReturnCurve> {
    if horizon == 0 {
        return Err(Error::EmptyRange {
            what: "return horizon",
        });
    }
    let _ = nu.row(g)?;
    let phi = step_matrix(nu);
    let gm = g.mask() as usize;

    let mut alive = phi.row(g)?.to_vec();
    let mut probabilities = Vec::with_capacity(horizon as usize);
    probabilities.push(alive[gm]);
    alive[gm] = 0.0;
    for _ in 2..=horizon {
        alive = phi.propagate(&alive)?;
        probabilities.push(alive[gm]);
        alive[gm] = 0.0;
    }
    let residual: f64 = alive.iter().sum();
    debug_assert!(
        (probabilities.iter().sum::<f64>() + residual - 1.0).abs() < 1e-9,
        "return mass must be conserved"
    );

    let empirical = if trials == 0 {
        None
    } else {
        let sampler = nu.sampler()?;
        let mut counts = parallel_bin_counts(
            horizon as usize + 1,
            trials,
            seed,
            RETURN_JOB,
            |rng| {
                let mut x = g.mask();
                for t in 0..horizon {
                    x ^= sampler.sample_image(x, rng);
                    if x == g.mask() {
                        return t as usize;
                    }
                }
                horizon as usize
            },
        );
        let beyond = counts.pop().expect("beyond bin");
        Some(EmpiricalReturns {
            counts,
            beyond,
            trials,
        })
    };

    Ok(ReturnCurve {
        probabilities,
        residual,
        empirical,
    })
}
