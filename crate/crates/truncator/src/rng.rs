//! Seeding conventions for the stochastic routines.
//!
//! Every Monte Carlo entry point takes a single master seed. Work is cut
//! into fixed-size chunks and chunk `c` of logical job `j` draws from
//! `stream_rng(seed, (j << 32) | c)`: a ChaCha8 generator keyed by the
//! master seed on stream index `(j << 32) | c`. Chunk boundaries depend
//! only on the trial count, so results are identical for any worker count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Seed used by the command-line tool when none is given.
pub const DEFAULT_SEED: u64 = 0x7472_756e_6361_746f;

/// Number of trials handled per generator stream.
pub const CHUNK: u64 = 8192;

/// Independent generator for one chunk of work.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Packs a job label and a chunk counter into a stream index.
pub fn stream_index(job: u32, chunk: u64) -> u64 {
    ((job as u64) << 32) | chunk
}

/// Runs `trials` independent trials in parallel and histograms their
/// outcomes into `bins` counters.
///
/// `per_trial` must map a generator to a bin index; it is called `trials`
/// times in total. The aggregation is a sum of per-chunk integer counts,
/// so the result is independent of scheduling.
pub(crate) fn parallel_bin_counts<F>(
    bins: usize,
    trials: u64,
    seed: u64,
    job: u32,
    per_trial: F,
) -> Vec<u64>
where
    F: Fn(&mut ChaCha8Rng) -> usize + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, stream_index(job, c));
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(trials);
            let mut counts = vec![0u64; bins];
            for _ in lo..hi {
                counts[per_trial(&mut rng)] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}
