use rand::Rng;

use super::measure::DENSE_LIMIT_BITS;
use crate::algebra::{group_size, Element};
use crate::error::{Error, Result};
use crate::rng::parallel_bin_counts;

/// Stream label for the kernel-size histogram sampler.
const KERNEL_JOB: u32 = 0x10;

fn check_group_size(m: u32) -> Result<()> {
    if !m.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(m as u64));
    }
    let _ = Element::identity(m.trailing_zeros() as u8)?;
    Ok(())
}

/// Distribution of the kernel size of a uniformly random map: entry `k`
/// is the probability that exactly `k` states map to the identity.
///
/// Each of the `M` images hits the identity independently with
/// probability `1/M`, so the size is binomial(M, 1/M); the table is
/// built by the term ratio recurrence from `P(0) = (1 - 1/M)^M`.
pub fn kernel_size_pmf(m: u32) -> Result<Vec<f64>> {
    check_group_size(m)?;
    let mf = m as f64;
    let mut pmf = Vec::with_capacity(m as usize + 1);
    let mut p = (mf * (-1.0 / mf).ln_1p()).exp();
    pmf.push(p);
    for k in 0..m {
        // P(k+1) / P(k) = (M - k) / ((k + 1)(M - 1)).
        p *= (mf - k as f64) / ((k as f64 + 1.0) * (mf - 1.0));
        pmf.push(p);
    }
    Ok(pmf)
}

/// Single binomial(M, 1/M) term evaluated independently in log space,
/// `C(M, k) (M-1)^(M-k) / M^M`.
pub fn kernel_pmf_exact(m: u32, k: u32) -> Result<f64> {
    check_group_size(m)?;
    if k > m {
        return Ok(0.0);
    }
    let ln_choose = ln_factorial(m as u64) - ln_factorial(k as u64) - ln_factorial((m - k) as u64);
    let mf = m as f64;
    Ok((ln_choose + (mf - k as f64) * (mf - 1.0).ln() - mf * mf.ln()).exp())
}

fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Large-group limit of the kernel-size law: Poisson with unit mean,
/// `P(k) = 1 / (e k!)`.
pub fn kernel_pmf_limit(k: u32) -> f64 {
    (-1.0 - ln_factorial(k as u64)).exp()
}

/// Sup-norm distance between the kernel-size law at group size `M` and
/// its Poisson limit, including the limit's tail mass beyond `M`.
pub fn poisson_sup_distance(m: u32) -> Result<f64> {
    let pmf = kernel_size_pmf(m)?;
    let mut sup = 0.0f64;
    for (k, &p) in pmf.iter().enumerate() {
        sup = sup.max((p - kernel_pmf_limit(k as u32)).abs());
    }
    // Beyond M the exact law is zero and the Poisson terms only shrink.
    Ok(sup.max(kernel_pmf_limit(m + 1)))
}

/// Monte Carlo histogram of kernel sizes over `trials` uniformly random
/// maps at dimension `n_bits`; entry `k` counts maps with kernel size `k`.
pub fn kernel_size_counts(n_bits: u8, trials: u64, seed: u64) -> Result<Vec<u64>> {
    let _ = Element::identity(n_bits)?;
    if n_bits > DENSE_LIMIT_BITS {
        return Err(Error::Capacity {
            what: "kernel histogram dimension",
            requested: n_bits as u64,
            limit: DENSE_LIMIT_BITS as u64,
        });
    }
    let m = group_size(n_bits);
    Ok(parallel_bin_counts(
        m as usize + 1,
        trials,
        seed,
        KERNEL_JOB,
        |rng| (0..m).filter(|_| rng.random_range(0..m) == 0).count(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_state_law_matches_full_enumeration() {
        // 4 maps: kernels of size 0 (one map), 1 (two maps), 2 (one map).
        let pmf = kernel_size_pmf(2).unwrap();
        assert_eq!(pmf.len(), 3);
        assert!((pmf[0] - 0.25).abs() < 1e-15);
        assert!((pmf[1] - 0.50).abs() < 1e-15);
        assert!((pmf[2] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn four_state_law_matches_full_enumeration() {
        // Census over all 4^4 = 256 tables.
        let mut counts = [0u64; 5];
        for idx in 0..256u32 {
            let mut rest = idx;
            let mut zeros = 0;
            for _ in 0..4 {
                if rest % 4 == 0 {
                    zeros += 1;
                }
                rest /= 4;
            }
            counts[zeros] += 1;
        }
        let pmf = kernel_size_pmf(4).unwrap();
        for (k, &c) in counts.iter().enumerate() {
            assert!(
                (pmf[k] - c as f64 / 256.0).abs() < 1e-14,
                "k={k}: {} vs {}",
                pmf[k],
                c as f64 / 256.0
            );
        }
    }

    #[test]
    fn recurrence_agrees_with_the_log_space_terms() {
        for m in [2u32, 4, 16, 64, 256] {
            let pmf = kernel_size_pmf(m).unwrap();
            for k in 0..=m {
                let exact = kernel_pmf_exact(m, k).unwrap();
                assert!(
                    (pmf[k as usize] - exact).abs() < 1e-12,
                    "m={m} k={k}: {} vs {exact}",
                    pmf[k as usize]
                );
            }
        }
        assert_eq!(kernel_pmf_exact(4, 5).unwrap(), 0.0);
    }

    #[test]
    fn law_has_unit_mass_and_unit_mean() {
        for m in [2u32, 8, 128, 1024] {
            let pmf = kernel_size_pmf(m).unwrap();
            let mass: f64 = pmf.iter().sum();
            let mean: f64 = pmf.iter().enumerate().map(|(k, &p)| k as f64 * p).sum();
            assert!((mass - 1.0).abs() < 1e-12, "m={m} mass {mass}");
            assert!((mean - 1.0).abs() < 1e-12, "m={m} mean {mean}");
        }
    }

    #[test]
    fn poisson_limit_terms_are_a_unit_mass_law() {
        let mass: f64 = (0..40).map(kernel_pmf_limit).sum();
        assert!((mass - 1.0).abs() < 1e-12);
        assert!((kernel_pmf_limit(0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!((kernel_pmf_limit(3) - (-1.0f64).exp() / 6.0).abs() < 1e-15);
    }

    #[test]
    fn distance_to_the_poisson_limit_shrinks_with_group_size() {
        let distances: Vec<f64> = [4u32, 16, 64, 256]
            .iter()
            .map(|&m| poisson_sup_distance(m).unwrap())
            .collect();
        for pair in distances.windows(2) {
            assert!(pair[0] > pair[1], "distances not decreasing: {distances:?}");
        }
        assert!(distances[3] > 0.0);
    }

    #[test]
    fn sampled_histogram_matches_the_law_and_reproduces() {
        let trials = 40_000u64;
        let counts = kernel_size_counts(2, trials, 7).unwrap();
        assert_eq!(counts.iter().sum::<u64>(), trials);
        let again = kernel_size_counts(2, trials, 7).unwrap();
        assert_eq!(counts, again);
        let pmf = kernel_size_pmf(4).unwrap();
        for (k, &c) in counts.iter().enumerate() {
            let p = pmf[k];
            let se = (p * (1.0 - p) / trials as f64).sqrt();
            let diff = (c as f64 / trials as f64 - p).abs();
            assert!(diff <= 5.0 * se + 1e-9, "k={k} diff {diff} se {se}");
        }
    }

    #[test]
    fn guards_reject_bad_sizes() {
        assert!(kernel_size_pmf(3).is_err());
        assert!(kernel_size_pmf(0).is_err());
        assert!(kernel_size_counts(13, 10, 0).is_err());
    }
}
