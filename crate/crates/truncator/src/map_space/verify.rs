//! Sweep drivers that confirm the structural laws of the star calculus
//! over whole map spaces.
//!
//! Each sweep checks one law — homomorphism transfer, the commutative
//! fixed point, the star-power polynomial, the period classification, or
//! the fourth-power commutator expansion — either exhaustively over all
//! `M^M` tables or on seeded random samples. Failures become
//! machine-readable [`Record`]s; an empty violation list is the
//! verification result.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::classify::table_predicates as pred;
use super::classify::PAIR_SCAN_LIMIT;
use super::enumerate::{fill_table, map_count, sample_homomorphism, BinaryMatrix};
use crate::algebra::kernel as ops;
use crate::algebra::{gamma_row, Element, GammaTable, MAX_ROW};
use crate::error::{Error, Result};
use crate::rng::{stream_index, stream_rng, CHUNK};

/// Violation records kept verbatim per sweep; the rest are only counted.
const RECORD_CAP: usize = 100;

/// Maps handled per parallel work item in exhaustive sweeps.
const BLOCK: u64 = 1 << 14;

/// The sweepable laws, named by their command-line labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// `1`: composition homomorphisms are star homomorphisms, and
    /// surjective star homomorphisms respect composition.
    HomTransfer,
    /// `2`: a commutative star forces a constant truncator step whose
    /// value is the unique kernel element, and exactly `M` maps qualify.
    CommutativeFixedPoint,
    /// `3`: on composition homomorphisms the star power equals the
    /// mod-2 Pascal polynomial in the iterates.
    Polynomial,
    /// `period`: the hypothesis-guarded period clauses predict the
    /// measured period, and period 1 characterizes the kernel exactly.
    PeriodClassification,
    /// `gast4`: the commutator expansion of the fourth star power holds
    /// for every map.
    StarFourExpansion,
}

impl Theorem {
    /// Command-line label of this sweep.
    pub fn label(&self) -> &'static str {
        match self {
            Theorem::HomTransfer => "1",
            Theorem::CommutativeFixedPoint => "2",
            Theorem::Polynomial => "3",
            Theorem::PeriodClassification => "period",
            Theorem::StarFourExpansion => "gast4",
        }
    }

    /// Every sweep, in label order.
    pub fn all() -> [Theorem; 5] {
        [
            Theorem::HomTransfer,
            Theorem::CommutativeFixedPoint,
            Theorem::Polynomial,
            Theorem::PeriodClassification,
            Theorem::StarFourExpansion,
        ]
    }

    /// Job label keying the random streams of sampled sweeps.
    fn job(&self) -> u32 {
        match self {
            Theorem::HomTransfer => 1,
            Theorem::CommutativeFixedPoint => 2,
            Theorem::Polynomial => 3,
            Theorem::PeriodClassification => 4,
            Theorem::StarFourExpansion => 5,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Theorem::HomTransfer),
            "2" => Ok(Theorem::CommutativeFixedPoint),
            "3" => Ok(Theorem::Polynomial),
            "period" => Ok(Theorem::PeriodClassification),
            "gast4" => Ok(Theorem::StarFourExpansion),
            other => Err(Error::UnknownTheorem(other.to_string())),
        }
    }
}

impl Serialize for Theorem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

/// Largest group size swept exhaustively by default. `M = 8` walks all
/// `8^8` tables and is only unlocked explicitly.
pub fn exhaustive_limit(expensive: bool) -> u32 {
    if expensive {
        8
    } else {
        4
    }
}

/// One counterexample (or informational observation) from a sweep.
///
/// `phi` lists the 1-based map table; sweep-level records leave it empty.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub theorem: String,
    #[serde(rename = "M")]
    pub m: u32,
    pub phi: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<u32>,
    pub expected: String,
    pub observed: String,
}

/// Writes records as JSON Lines, one record per line.
pub fn write_records<P: AsRef<Path>>(path: P, records: &[Record]) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut out = std::io::BufWriter::new(file);
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Tuning knobs shared by every sweep.
#[derive(Clone, Debug)]
pub struct SweepOptions {
    /// `None` sweeps exhaustively; `Some(s)` draws `s` seeded instances.
    pub samples: Option<u64>,
    /// Master seed for sampled sweeps.
    pub seed: u64,
    /// Highest star power compared by the polynomial sweep.
    pub max_p: u32,
    /// Emit coarse progress lines on stderr.
    pub progress: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            samples: None,
            seed: crate::rng::DEFAULT_SEED,
            max_p: 16,
            progress: false,
        }
    }
}

/// Result of one sweep: what was checked and every law failure found.
#[derive(Debug, Serialize)]
pub struct SweepOutcome {
    pub theorem: Theorem,
    #[serde(rename = "M")]
    pub m: u32,
    pub maps_checked: u64,
    /// Counterexamples to the law; empty means the sweep passed.
    pub violations: Vec<Record>,
    /// Observations that are reported but do not fail the sweep.
    pub informational: Vec<Record>,
    /// Aggregate counters (homomorphisms seen, periods predicted, ..).
    pub notes: BTreeMap<String, u64>,
}

impl SweepOutcome {
    /// True when no violation was found.
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs the sweep for one law at group size `m`.
///
/// Exhaustive mode (the default) accepts `m <= 8` for the table sweeps
/// and `m <= 16` for the polynomial sweep over homomorphisms; sampled
/// mode accepts any power of two up to `2^12`.
pub fn run_sweep(theorem: Theorem, m: u32, options: &SweepOptions) -> Result<SweepOutcome> {
    if !m.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(m as u64));
    }
    let n_bits = m.trailing_zeros() as u8;
    let _ = Element::identity(n_bits)?;
    if options.samples.is_some() && m > PAIR_SCAN_LIMIT {
        return Err(Error::Capacity {
            what: "sampled sweep group size",
            requested: m as u64,
            limit: PAIR_SCAN_LIMIT as u64,
        });
    }
    match theorem {
        Theorem::HomTransfer => sweep_hom_transfer(m, options),
        Theorem::CommutativeFixedPoint => sweep_commutative(m, options),
        Theorem::Polynomial => sweep_polynomial(m, n_bits, options),
        Theorem::PeriodClassification => sweep_period(m, options),
        Theorem::StarFourExpansion => sweep_star4(m, options),
    }
}

/// Mergeable per-block accumulator.
#[derive(Default)]
struct Tally {
    maps: u64,
    violations: Vec<Record>,
    violation_count: u64,
    informational: Vec<Record>,
    informational_count: u64,
    counts: BTreeMap<&'static str, u64>,
}

impl Tally {
    fn bump(&mut self, key: &'static str) {
        *self.counts.entry(key).or_insert(0) += 1;
    }

    fn violation(&mut self, record: Record) {
        self.violation_count += 1;
        if self.violations.len() < RECORD_CAP {
            self.violations.push(record);
        }
    }

    fn informational(&mut self, record: Record) {
        self.informational_count += 1;
        if self.informational.len() < RECORD_CAP {
            self.informational.push(record);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.maps += other.maps;
        self.violation_count += other.violation_count;
        self.informational_count += other.informational_count;
        for record in other.violations {
            if self.violations.len() < RECORD_CAP {
                self.violations.push(record);
            }
        }
        for record in other.informational {
            if self.informational.len() < RECORD_CAP {
                self.informational.push(record);
            }
        }
        for (key, value) in other.counts {
            *self.counts.entry(key).or_insert(0) += value;
        }
        self
    }

    fn into_outcome(self, theorem: Theorem, m: u32) -> SweepOutcome {
        let mut notes: BTreeMap<String, u64> = self
            .counts
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        notes.insert("violations".to_string(), self.violation_count);
        notes.insert("informational".to_string(), self.informational_count);
        SweepOutcome {
            theorem,
            m,
            maps_checked: self.maps,
            violations: self.violations,
            informational: self.informational,
            notes,
        }
    }
}

fn record(
    theorem: Theorem,
    m: u32,
    table: &[u32],
    g: Option<u32>,
    expected: String,
    observed: String,
) -> Record {
    Record {
        theorem: theorem.label().to_string(),
        m,
        phi: table.iter().map(|&e| e + 1).collect(),
        g: g.map(|e| e + 1),
        expected,
        observed,
    }
}

fn advance_table(table: &mut [u32], m: u32) {
    for slot in table.iter_mut().rev() {
        *slot += 1;
        if *slot < m {
            return;
        }
        *slot = 0;
    }
}

/// Folds `per_map` over all `m^m` tables, block-parallel with a
/// deterministic merge order.
fn exhaustive_tally<F>(m: u32, progress: bool, per_map: F) -> Result<Tally>
where
    F: Fn(&[u32], &mut Tally) + Sync,
{
    let count = map_count(m)?;
    let blocks = count.div_ceil(BLOCK);
    let done = AtomicU64::new(0);
    let report = (blocks / 10).max(1);
    let tallies: Vec<Tally> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let start = block * BLOCK;
            let stop = (start + BLOCK).min(count);
            let mut table = vec![0u32; m as usize];
            fill_table(m, start, &mut table);
            let mut tally = Tally::default();
            for _ in start..stop {
                per_map(&table, &mut tally);
                tally.maps += 1;
                advance_table(&mut table, m);
            }
            if progress {
                let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                if finished.is_multiple_of(report) || finished == blocks {
                    eprintln!("  swept {finished}/{blocks} blocks of {BLOCK} maps");
                }
            }
            tally
        })
        .collect();
    Ok(tallies.into_iter().fold(Tally::default(), Tally::merge))
}

/// Folds `body` over `samples` seeded draws, chunk-parallel; chunk `c`
/// draws from stream `(job << 32) | c` so the result is independent of
/// the worker count.
fn sampled_tally<F>(samples: u64, seed: u64, job: u32, progress: bool, body: F) -> Tally
where
    F: Fn(&mut ChaCha8Rng, &mut Tally) + Sync,
{
    let blocks = samples.div_ceil(CHUNK);
    let done = AtomicU64::new(0);
    let report = (blocks / 10).max(1);
    let tallies: Vec<Tally> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let mut rng = stream_rng(seed, stream_index(job, block));
            let n = CHUNK.min(samples - block * CHUNK);
            let mut tally = Tally::default();
            for _ in 0..n {
                body(&mut rng, &mut tally);
                tally.maps += 1;
            }
            if progress {
                let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                if finished.is_multiple_of(report) || finished == blocks {
                    eprintln!("  sampled {finished}/{blocks} chunks of {CHUNK} draws");
                }
            }
            tally
        })
        .collect();
    tallies.into_iter().fold(Tally::default(), Tally::merge)
}

fn random_table(m: u32, rng: &mut ChaCha8Rng) -> Vec<u32> {
    (0..m).map(|_| rng.random_range(0..m)).collect()
}

fn first_circ_failure(table: &[u32]) -> Option<(u32, u32)> {
    let m = table.len();
    for a in 0..m {
        for b in a..m {
            if table[a ^ b] != table[a] ^ table[b] {
                return Some((a as u32, b as u32));
            }
        }
    }
    None
}

fn first_star_failure(table: &[u32]) -> Option<(u32, u32)> {
    let m = table.len();
    for a in 0..m {
        for b in 0..m {
            let pb = table[b] as usize;
            if table[a ^ pb] != table[a] ^ table[pb] {
                return Some((a as u32, b as u32));
            }
        }
    }
    None
}

fn check_hom_transfer(m: u32, table: &[u32], tally: &mut Tally) {
    let circ = pred::hom_circ(table);
    let star = pred::hom_star(table);
    if circ {
        tally.bump("circ_homomorphisms");
        if !star {
            let (a, b) = first_star_failure(table).unwrap_or((0, 0));
            tally.violation(record(
                Theorem::HomTransfer,
                m,
                table,
                None,
                "composition homomorphism respects star".to_string(),
                format!("phi({} * {}) != phi({}) * phi({})", a + 1, b + 1, a + 1, b + 1),
            ));
        }
    }
    if star {
        tally.bump("star_homomorphisms");
        if !circ {
            tally.bump("star_only_homomorphisms");
        }
        let mut scratch = Vec::new();
        if pred::surjective(table, &mut scratch) {
            tally.bump("surjective_star_homomorphisms");
            if !circ {
                let (a, b) = first_circ_failure(table).unwrap_or((0, 0));
                tally.violation(record(
                    Theorem::HomTransfer,
                    m,
                    table,
                    None,
                    "surjective star homomorphism respects composition".to_string(),
                    format!("phi({} . {}) != phi({}) . phi({})", a + 1, b + 1, a + 1, b + 1),
                ));
            }
        }
    }
}

fn sweep_hom_transfer(m: u32, options: &SweepOptions) -> Result<SweepOutcome> {
    let theorem = Theorem::HomTransfer;
    let tally = match options.samples {
        None => exhaustive_tally(m, options.progress, |table, tally| {
            check_hom_transfer(m, table, tally)
        })?,
        Some(samples) => sampled_tally(
            samples,
            options.seed,
            theorem.job(),
            options.progress,
            |rng, tally| {
                let table = random_table(m, rng);
                check_hom_transfer(m, &table, tally);
            },
        ),
    };
    Ok(tally.into_outcome(theorem, m))
}

fn check_commutative(m: u32, table: &[u32], tally: &mut Tally) {
    if !pred::star_commutative_pairs(table) {
        return;
    }
    tally.bump("commutative_maps");
    match pred::constant_step(table) {
        None => tally.violation(record(
            Theorem::CommutativeFixedPoint,
            m,
            table,
            None,
            "commutative star forces a constant truncator step".to_string(),
            "step takes at least two values".to_string(),
        )),
        Some(c) => {
            // The kernel must be exactly {c}: then T(c) = c and every
            // state reaches c in one step.
            let kernel_is_c = table
                .iter()
                .enumerate()
                .all(|(g, &p)| (p == 0) == (g as u32 == c));
            if !kernel_is_c {
                let kernel: Vec<u32> = table
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p == 0)
                    .map(|(g, _)| g as u32 + 1)
                    .collect();
                tally.violation(record(
                    Theorem::CommutativeFixedPoint,
                    m,
                    table,
                    Some(c),
                    format!("kernel = {{{}}}", c + 1),
                    format!("kernel = {kernel:?}"),
                ));
            }
        }
    }
}

fn sweep_commutative(m: u32, options: &SweepOptions) -> Result<SweepOutcome> {
    let theorem = Theorem::CommutativeFixedPoint;
    let mut tally = match options.samples {
        None => exhaustive_tally(m, options.progress, |table, tally| {
            check_commutative(m, table, tally)
        })?,
        Some(samples) => sampled_tally(
            samples,
            options.seed,
            theorem.job(),
            options.progress,
            |rng, tally| {
                let table = random_table(m, rng);
                check_commutative(m, &table, tally);
            },
        ),
    };
    if options.samples.is_none() {
        // The commutative maps are exactly the M translations
        // phi(g) = g . c, so the exhaustive census must find M of them.
        let found = tally.counts.get("commutative_maps").copied().unwrap_or(0);
        if found != m as u64 {
            tally.violation(record(
                theorem,
                m,
                &[],
                None,
                format!("{m} star-commutative maps"),
                format!("{found} star-commutative maps"),
            ));
        }
    }
    Ok(tally.into_outcome(theorem, m))
}

fn check_polynomial(m: u32, table: &[u32], rows: &GammaTable, max_p: u32, tally: &mut Tally) {
    for g in 0..m {
        let mut star = g;
        for p in 1..=max_p {
            // Invariant: star == g^(*p) via the orbit recursion.
            let row = rows.row(p).expect("row within table");
            let poly = ops::poly_eval(table, g, p, row);
            if poly != star {
                tally.violation(record(
                    Theorem::Polynomial,
                    m,
                    table,
                    Some(g),
                    format!("g^(*{p}) = {}", star + 1),
                    format!("polynomial evaluates to {}", poly + 1),
                ));
            }
            star = ops::step(table, star);
        }
    }
}

fn cross_check_gamma(max_p: u32, tally: &mut Tally) -> Result<()> {
    // Recurrence rows vs the bitwise closed form gamma(k,p) = [k AND (p-1) = k].
    let limit = max_p.clamp(64, MAX_ROW);
    for p in 1..=limit {
        let row = gamma_row(p)?;
        for k in 0..p {
            let closed = k & (p - 1) == k;
            if (row >> k & 1 == 1) != closed {
                tally.violation(record(
                    Theorem::Polynomial,
                    0,
                    &[],
                    None,
                    format!("gamma({k},{p}) = {}", closed as u8),
                    format!("recurrence row gives {}", !closed as u8),
                ));
            }
        }
    }
    tally.counts.insert("gamma_rows_cross_checked", limit as u64);
    Ok(())
}

fn sweep_polynomial(m: u32, n_bits: u8, options: &SweepOptions) -> Result<SweepOutcome> {
    let theorem = Theorem::Polynomial;
    let rows = GammaTable::up_to(options.max_p)?;
    let mut tally = Tally::default();
    cross_check_gamma(options.max_p, &mut tally)?;
    tally.counts.insert("max_power", options.max_p as u64);
    let swept = match options.samples {
        None => {
            if n_bits > 4 {
                return Err(Error::Capacity {
                    what: "homomorphism enumeration",
                    requested: n_bits as u64,
                    limit: 4,
                });
            }
            let n = n_bits as u32;
            let count = 1u64 << (n * n);
            let blocks = count.div_ceil(BLOCK);
            let tallies: Vec<Tally> = (0..blocks)
                .into_par_iter()
                .map(|block| {
                    let start = block * BLOCK;
                    let stop = (start + BLOCK).min(count);
                    let mut tally = Tally::default();
                    for bits in start..stop {
                        let matrix_rows: Vec<u32> = (0..n)
                            .map(|j| ((bits >> (j * n)) & ((1 << n) - 1)) as u32)
                            .collect();
                        let phi = BinaryMatrix::new(n_bits, matrix_rows)
                            .expect("rows below 2^n")
                            .to_map();
                        check_polynomial(m, phi.masks(), &rows, options.max_p, &mut tally);
                        tally.maps += 1;
                    }
                    tally
                })
                .collect();
            tallies.into_iter().fold(Tally::default(), Tally::merge)
        }
        Some(samples) => sampled_tally(
            samples,
            options.seed,
            theorem.job(),
            options.progress,
            |rng, tally| {
                let phi = sample_homomorphism(n_bits, rng).expect("dimension already validated");
                check_polynomial(m, phi.masks(), &rows, options.max_p, tally);
            },
        ),
    };
    Ok(tally.merge(swept).into_outcome(theorem, m))
}

/// Smallest `p >= 1` with `T^p(g) = g`, or `None` when `g` never returns
/// (no return within `M` steps means `g` is off-cycle for good).
fn measured_period(table: &[u32], g: u32) -> Option<u32> {
    let mut cur = ops::step(table, g);
    for p in 1..=table.len() as u32 {
        if cur == g {
            return Some(p);
        }
        cur = ops::step(table, cur);
    }
    None
}

fn fmt_period(period: Option<u32>) -> String {
    match period {
        Some(p) => format!("period {p}"),
        None => "transient".to_string(),
    }
}

fn check_period(m: u32, table: &[u32], tally: &mut Tally) {
    let theorem = Theorem::PeriodClassification;
    for g in 0..m {
        let predicted = pred::predicted_period(table, g);
        let measured = measured_period(table, g);
        match predicted {
            Some(1) => tally.bump("predicted_period_1"),
            Some(2) => tally.bump("predicted_period_2"),
            Some(3) => tally.bump("predicted_period_3"),
            Some(_) => tally.bump("predicted_other"),
            None => tally.bump("unpredicted_states"),
        }
        if let Some(p) = predicted {
            if measured != Some(p) {
                tally.violation(record(
                    theorem,
                    m,
                    table,
                    Some(g),
                    format!("period {p}"),
                    fmt_period(measured),
                ));
            }
        }
        // Period 1 characterizes the kernel, with no side hypotheses.
        let in_kernel = table[g as usize] == 0;
        if (measured == Some(1)) != in_kernel {
            tally.violation(record(
                theorem,
                m,
                table,
                Some(g),
                "period 1 exactly on the kernel".to_string(),
                format!("kernel membership {in_kernel}, {}", fmt_period(measured)),
            ));
        }
        // Converse direction for periods 2 and 3: under the clause
        // hypotheses, a measured short period must be caught by the
        // membership test. Escapes are reported, not failed.
        if measured == Some(2) && predicted != Some(2) {
            if hypotheses_period_2(table, g) {
                tally.informational(record(
                    theorem,
                    m,
                    table,
                    Some(g),
                    "period 2 implies membership under clause hypotheses".to_string(),
                    "membership test missed a period-2 state".to_string(),
                ));
            } else {
                tally.bump("period_2_outside_hypotheses");
            }
        }
        if measured == Some(3) && predicted != Some(3) {
            if hypotheses_period_3(table, g) {
                tally.informational(record(
                    theorem,
                    m,
                    table,
                    Some(g),
                    "period 3 implies membership under clause hypotheses".to_string(),
                    "membership test missed a period-3 state".to_string(),
                ));
            } else {
                tally.bump("period_3_outside_hypotheses");
            }
        }
    }
}

fn hypotheses_period_2(table: &[u32], g: u32) -> bool {
    table[0] == 0 && ops::commutator(table, g, table[g as usize]) == 0
}

fn hypotheses_period_3(table: &[u32], g: u32) -> bool {
    let p2 = table[table[g as usize] as usize];
    hypotheses_period_2(table, g) && ops::commutator(table, g, p2) == 0
}

fn sweep_period(m: u32, options: &SweepOptions) -> Result<SweepOutcome> {
    let theorem = Theorem::PeriodClassification;
    let tally = match options.samples {
        None => exhaustive_tally(m, options.progress, |table, tally| {
            check_period(m, table, tally)
        })?,
        Some(samples) => sampled_tally(
            samples,
            options.seed,
            theorem.job(),
            options.progress,
            |rng, tally| {
                let table = random_table(m, rng);
                check_period(m, &table, tally);
            },
        ),
    };
    Ok(tally.into_outcome(theorem, m))
}

fn check_star4(m: u32, table: &[u32], g: u32, tally: &mut Tally) {
    let direct = ops::star_power(table, g, 4);
    let expanded = ops::star4_expansion(table, g);
    if direct != expanded {
        tally.violation(record(
            Theorem::StarFourExpansion,
            m,
            table,
            Some(g),
            format!("g^(*4) = {}", direct + 1),
            format!("expansion gives {}", expanded + 1),
        ));
    }
}

fn sweep_star4(m: u32, options: &SweepOptions) -> Result<SweepOutcome> {
    let theorem = Theorem::StarFourExpansion;
    let tally = match options.samples {
        None => exhaustive_tally(m, options.progress, |table, tally| {
            for g in 0..m {
                check_star4(m, table, g, tally);
            }
        })?,
        // One random (map, state) pair per draw.
        Some(samples) => sampled_tally(
            samples,
            options.seed,
            theorem.job(),
            options.progress,
            |rng, tally| {
                let table = random_table(m, rng);
                let g = rng.random_range(0..m);
                check_star4(m, &table, g, tally);
            },
        ),
    };
    Ok(tally.into_outcome(theorem, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exhaustive() -> SweepOptions {
        SweepOptions::default()
    }

    fn sampled(samples: u64) -> SweepOptions {
        SweepOptions {
            samples: Some(samples),
            ..SweepOptions::default()
        }
    }

    #[test]
    fn labels_roundtrip_and_reject_unknowns() {
        for theorem in Theorem::all() {
            assert_eq!(theorem.label().parse::<Theorem>().unwrap(), theorem);
            assert_eq!(theorem.to_string(), theorem.label());
        }
        assert!(matches!(
            "5".parse::<Theorem>(),
            Err(Error::UnknownTheorem(_))
        ));
    }

    #[test]
    fn hom_transfer_holds_on_every_tiny_map() {
        let outcome = run_sweep(Theorem::HomTransfer, 2, &exhaustive()).unwrap();
        assert!(outcome.passed());
        assert_eq!(outcome.maps_checked, 4);
        assert_eq!(outcome.notes["circ_homomorphisms"], 2);
        assert_eq!(outcome.notes["star_homomorphisms"], 2);
        assert_eq!(outcome.notes["surjective_star_homomorphisms"], 1);
    }

    #[test]
    fn hom_transfer_census_at_m4_counts_the_binary_matrices() {
        let outcome = run_sweep(Theorem::HomTransfer, 4, &exhaustive()).unwrap();
        assert!(outcome.passed());
        assert_eq!(outcome.maps_checked, 256);
        // One composition homomorphism per 2x2 binary matrix.
        assert_eq!(outcome.notes["circ_homomorphisms"], 16);
    }

    #[test]
    fn commutative_maps_are_exactly_the_translations() {
        for m in [2u32, 4] {
            let outcome = run_sweep(Theorem::CommutativeFixedPoint, m, &exhaustive()).unwrap();
            assert!(outcome.passed(), "violations: {:?}", outcome.violations);
            assert_eq!(outcome.notes["commutative_maps"], m as u64);
        }
    }

    #[test]
    fn polynomial_law_holds_on_all_homomorphisms_at_m4() {
        let outcome = run_sweep(Theorem::Polynomial, 4, &exhaustive()).unwrap();
        assert!(outcome.passed());
        assert_eq!(outcome.maps_checked, 16);
        assert_eq!(outcome.notes["gamma_rows_cross_checked"], 64);
    }

    #[test]
    fn polynomial_law_holds_on_sampled_homomorphisms() {
        let outcome = run_sweep(Theorem::Polynomial, 16, &sampled(50)).unwrap();
        assert!(outcome.passed());
        assert_eq!(outcome.maps_checked, 50);
    }

    #[test]
    fn period_clauses_hold_exhaustively_at_m4() {
        let outcome = run_sweep(Theorem::PeriodClassification, 4, &exhaustive()).unwrap();
        assert!(outcome.passed(), "violations: {:?}", outcome.violations);
        // No short-period state escapes its membership test under the
        // clause hypotheses.
        assert!(outcome.informational.is_empty());
        // Summed over all maps, each table position is a kernel entry in
        // exactly M^(M-1) tables: M * M^(M-1) = 256 period-1 predictions.
        assert_eq!(outcome.notes["predicted_period_1"], 256);
    }

    #[test]
    fn star4_expansion_holds_everywhere_at_m4_and_on_samples() {
        let outcome = run_sweep(Theorem::StarFourExpansion, 4, &exhaustive()).unwrap();
        assert!(outcome.passed());
        assert_eq!(outcome.maps_checked, 256);
        let outcome = run_sweep(Theorem::StarFourExpansion, 8, &sampled(1000)).unwrap();
        assert!(outcome.passed());
        assert_eq!(outcome.maps_checked, 1000);
    }

    #[test]
    fn sampled_sweeps_are_reproducible() {
        let a = run_sweep(Theorem::StarFourExpansion, 8, &sampled(5000)).unwrap();
        let b = run_sweep(Theorem::StarFourExpansion, 8, &sampled(5000)).unwrap();
        assert_eq!(a.notes, b.notes);
        assert_eq!(a.maps_checked, b.maps_checked);
    }

    #[test]
    fn size_guards_reject_bad_requests() {
        assert!(run_sweep(Theorem::HomTransfer, 3, &exhaustive()).is_err());
        assert!(run_sweep(Theorem::HomTransfer, 16, &exhaustive()).is_err());
        assert!(run_sweep(Theorem::Polynomial, 32, &exhaustive()).is_err());
        assert!(run_sweep(Theorem::HomTransfer, 1 << 13, &sampled(1)).is_err());
        assert_eq!(exhaustive_limit(false), 4);
        assert_eq!(exhaustive_limit(true), 8);
    }

    #[test]
    fn record_cap_keeps_counts_exact() {
        let mut a = Tally::default();
        for i in 0..80u32 {
            a.violation(record(Theorem::HomTransfer, 2, &[], Some(i), "x".into(), "y".into()));
        }
        let mut b = Tally::default();
        for i in 0..80u32 {
            b.violation(record(Theorem::HomTransfer, 2, &[], Some(i), "x".into(), "y".into()));
        }
        let merged = a.merge(b);
        assert_eq!(merged.violation_count, 160);
        assert_eq!(merged.violations.len(), RECORD_CAP);
    }

    #[test]
    fn records_write_as_json_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.jsonl");
        let records = vec![
            record(Theorem::Polynomial, 4, &[0, 1, 2, 3], Some(2), "a".into(), "b".into()),
            record(Theorem::Polynomial, 4, &[3, 2, 1, 0], None, "c".into(), "d".into()),
        ];
        write_records(&path, &records).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(first["theorem"], "3");
        assert_eq!(first["M"], 4);
        assert_eq!(first["g"], 3);
        let second: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
        assert!(second.get("g").is_none());
    }
}
