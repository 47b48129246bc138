use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::json::SCHEMA;
use crate::orbit::{self, Period};

use super::{Beta, SpinModel};

/// Attractor census of the frozen sweep at one coupling value.
#[derive(Clone, Debug, Serialize)]
pub struct RegimePoint {
    pub alpha: f64,
    /// Number of configurations containing a zero-field site.
    pub ties: u64,
    /// Cycle length → number of attractors of that length.
    pub spectrum: BTreeMap<u64, u64>,
    /// Eventual period of each tracked configuration (by element index).
    pub tracked: BTreeMap<u32, Period>,
}

/// How the frozen market changes across a grid of coupling strengths.
#[derive(Clone, Debug, Serialize)]
pub struct RegimeReport {
    pub schema: &'static str,
    pub l: u32,
    pub d: u32,
    pub radius: u32,
    /// Couplings where the compiled map changes: at most one per grid
    /// interval, each located by bisection to 1e-9. Thresholds closer
    /// together than the grid spacing require a finer grid.
    pub thresholds: Vec<f64>,
    pub points: Vec<RegimePoint>,
}

const BISECTION_TOLERANCE: f64 = 1e-9;

fn frozen_table(l: u32, d: u32, alpha: f64) -> Result<Vec<u32>> {
    let model = SpinModel::new(l, d, alpha, Beta::Infinite)?;
    Ok(model.frozen_phi().map().masks().to_vec())
}

/// Narrow `(lo, hi]` down to the first coupling where the compiled map
/// differs from its value at `lo`.
fn locate_change(l: u32, d: u32, mut lo: f64, mut hi: f64, table_lo: &[u32]) -> Result<f64> {
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if frozen_table(l, d, mid)? == table_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Sweep the coupling grid, compiling the frozen map at every point,
/// and bisect for the couplings where the map itself changes.
///
/// `tracked` configurations get their eventual period recorded at every
/// grid point; the grid must be strictly increasing and nonnegative.
pub fn regime_report(
    l: u32,
    d: u32,
    alphas: &[f64],
    tracked: &[Element],
) -> Result<RegimeReport> {
    if alphas.is_empty() {
        return Err(Error::EmptyRange {
            what: "coupling grid",
        });
    }
    // partial_cmp keeps NaN grid points on the error path.
    if alphas
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::InvalidModel {
            reason: "coupling grid must be strictly increasing".into(),
        });
    }

    let mut points = Vec::with_capacity(alphas.len());
    let mut tables = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let model = SpinModel::new(l, d, alpha, Beta::Infinite)?;
        for g in tracked {
            if g.n_bits() != model.n_bits() {
                return Err(Error::DimensionMismatch {
                    left: model.n_bits(),
                    right: g.n_bits(),
                });
            }
        }
        let compiled = model.frozen_phi();
        let report = orbit::analyze(compiled.map())?;
        let tracked_periods = tracked
            .iter()
            .map(|&g| Ok((g.index(), report.period(g)?)))
            .collect::<Result<_>>()?;
        points.push(RegimePoint {
            alpha,
            ties: compiled.ties().len() as u64,
            spectrum: report.spectrum(),
            tracked: tracked_periods,
        });
        tables.push(compiled.map().masks().to_vec());
    }

    let mut thresholds = Vec::new();
    for (i, pair) in tables.windows(2).enumerate() {
        if pair[0] != pair[1] {
            thresholds.push(locate_change(
                l,
                d,
                alphas[i],
                alphas[i + 1],
                &pair[0],
            )?);
        }
    }

    Ok(RegimeReport {
        schema: SCHEMA,
        l,
        d,
        radius: 1,
        thresholds,
        points,
    })
}
