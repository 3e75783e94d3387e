//! Reproducible experiments: counts with bound verdicts, seed scans,
//! coloring minimization, tightness searches and the table of minimal
//! Tverberg counts in the plane.
//!
//! Seeds are processed in parallel but results are gathered in seed order,
//! and timings are left out of CSV output unless asked for, so equal
//! parameters give byte-identical reports.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::birch::{count_colored_birch, count_uncolored_birch, verify_birch_partition};
use crate::bounds::{birch_lower_bound, check_birch_count, check_tverberg_count, format_tverberg_bound, Verdict};
use crate::config::{ColoredConfiguration, Mode};
use crate::error::{Error, Result};
use crate::generators::{
    coloring_count, default_epsilon, enumerate_colorings, make_polygon, make_random, make_sierksma, Symmetry,
};
use crate::partition::{CountReport, Partition};
use crate::rational::{format_rational, parse_rational};
use crate::rng::SeedStream;
use crate::tverberg::{
    count_colored_tverberg, distinct_tverberg_points, verify_tverberg_partition, TverbergCatalog, TverbergOptions,
};
use crate::words::{count_word_partitions, realize_word, ColoredWord, Letter};

pub const TOOL_VERSION: &str = concat!("tverberg ", env!("CARGO_PKG_VERSION"));

pub const CSV_HEADER: &str = "seed,count,even_ok,bound_ok,fingerprint,elapsed_ms";

pub const DEFAULT_RANGE: u64 = 1000;

pub const DEFAULT_POLYGON_DENOM: u64 = 1_000_000;

/// Largest coloring space `min_coloring` walks without an explicit override.
pub const COLORING_BUDGET: u64 = 10_000_000;

/// Where a configuration comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Source {
    Sierksma {
        dim: usize,
        r: usize,
        epsilon: String,
        seed: u64,
    },
    Polygon {
        r: usize,
        denom: u64,
    },
    Random {
        dim: usize,
        mode: Mode,
        seed: u64,
        range: u64,
    },
    Word {
        word: String,
        seed: u64,
    },
    File {
        path: String,
    },
}

impl Source {
    pub fn sierksma(dim: usize, r: usize, seed: u64) -> Source {
        Source::Sierksma {
            dim,
            r,
            epsilon: format_rational(&default_epsilon()),
            seed,
        }
    }

    pub fn build(&self) -> Result<ColoredConfiguration> {
        match self {
            Source::Sierksma { dim, r, epsilon, seed } => {
                let eps = parse_rational(epsilon).map_err(Error::InvalidArgument)?;
                make_sierksma(*dim, *r, &eps, *seed)
            }
            Source::Polygon { r, denom } => make_polygon(*r, *denom),
            Source::Random { dim, mode, seed, range } => make_random(*dim, *mode, *seed, *range),
            Source::Word { word, seed } => realize_word(&ColoredWord::parse(word, true)?, *seed),
            Source::File { path } => crate::config::read_config(path),
        }
    }
}

/// Everything that determines a run. Serialized into every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub tool: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<Source>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<u64>,
    pub emit_partitions: bool,
    pub allow_large_blocks: bool,
    pub symmetry: Symmetry,
    pub heavy: bool,
    pub timings: bool,
}

impl ExperimentSpec {
    pub fn new(command: &str) -> Self {
        ExperimentSpec {
            tool: TOOL_VERSION.to_string(),
            command: command.to_string(),
            source: None,
            dim: None,
            mode: None,
            seed: 0,
            seeds: None,
            range: None,
            emit_partitions: false,
            allow_large_blocks: false,
            symmetry: Symmetry::None,
            heavy: false,
            timings: false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountOptions {
    pub emit_partitions: bool,
    pub allow_large_blocks: bool,
    /// Also count uncolored Birch partitions.
    pub uncolored: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountOutcome {
    pub report: CountReport,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uncolored: Option<u64>,
    /// Distinct common points over the emitted Tverberg partitions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tverberg_points: Option<usize>,
}

/// Runs the counter for the configuration's mode and checks the theorem's
/// clauses against the result.
pub fn count(config: &ColoredConfiguration, options: CountOptions) -> Result<CountOutcome> {
    let d = config.dim();
    match config.mode() {
        Mode::Birch { k } => {
            let report = count_colored_birch(config, options.emit_partitions)?;
            let uncolored = if options.uncolored {
                Some(count_uncolored_birch(config, false)?.count)
            } else {
                None
            };
            Ok(CountOutcome {
                verdict: check_birch_count(report.count, d, k),
                report,
                uncolored,
                tverberg_points: None,
            })
        }
        Mode::Tverberg { r } => {
            let report = count_colored_tverberg(
                config,
                TverbergOptions {
                    emit_partitions: options.emit_partitions,
                    allow_large_blocks: options.allow_large_blocks,
                },
            )?;
            let tverberg_points = report.partitions.as_ref().map(|p| distinct_tverberg_points(config, p));
            Ok(CountOutcome {
                verdict: check_tverberg_count(report.count, d, r),
                report,
                uncolored: None,
                tverberg_points,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub seed: u64,
    pub count: Option<u64>,
    pub even_ok: bool,
    pub bound_ok: bool,
    pub fingerprint: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub spec: ExperimentSpec,
    pub rows: Vec<ScanRow>,
    pub min: Option<u64>,
    pub max: Option<u64>,
    /// Seeds attaining the minimum.
    pub min_seeds: Vec<u64>,
    pub odd_counts: Vec<u64>,
    pub parity_violations: Vec<u64>,
    pub bound_violations: Vec<u64>,
    pub failures: Vec<u64>,
    /// For Tverberg scans: distinct Tverberg points of the first minimal
    /// configurations.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub min_witness_points: Vec<(u64, usize)>,
}

/// Number of minimal Tverberg configurations whose Tverberg points are
/// listed in a scan summary.
const WITNESS_DETAIL: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanParams {
    pub dim: usize,
    pub mode: Mode,
    pub seed_start: u64,
    pub seed_count: u64,
    pub range: u64,
    pub allow_large_blocks: bool,
    pub timings: bool,
}

fn scan_one(p: &ScanParams, seed: u64) -> ScanRow {
    let start = Instant::now();
    let outcome = make_random(p.dim, p.mode, seed, p.range).and_then(|c| {
        let o = count(
            &c,
            CountOptions {
                allow_large_blocks: p.allow_large_blocks,
                ..CountOptions::default()
            },
        )?;
        Ok((c.fingerprint(), o))
    });
    let elapsed_ms = p.timings.then(|| start.elapsed().as_millis() as u64);
    match outcome {
        Ok((fp, o)) => ScanRow {
            seed,
            count: Some(o.report.count),
            even_ok: o.verdict.even_ok,
            bound_ok: o.verdict.bound_ok && !o.verdict.existence_violated,
            fingerprint: fp.0,
            elapsed_ms,
            error: None,
        },
        Err(e) => ScanRow {
            seed,
            count: None,
            even_ok: false,
            bound_ok: false,
            fingerprint: String::new(),
            elapsed_ms,
            error: Some(e.to_string()),
        },
    }
}

/// Counts random configurations for a range of seeds.
pub fn scan(params: ScanParams, spec: ExperimentSpec) -> ScanSummary {
    let seeds: Vec<u64> = (0..params.seed_count)
        .map(|i| params.seed_start.wrapping_add(i))
        .collect();
    let rows: Vec<ScanRow> = seeds.par_iter().map(|&s| scan_one(&params, s)).collect();
    let counted: Vec<(u64, u64)> = rows.iter().filter_map(|r| r.count.map(|c| (r.seed, c))).collect();
    let min = counted.iter().map(|x| x.1).min();
    let max = counted.iter().map(|x| x.1).max();
    let min_seeds: Vec<u64> = counted.iter().filter(|x| Some(x.1) == min).map(|x| x.0).collect();
    let mut min_witness_points = Vec::new();
    if let Mode::Tverberg { .. } = params.mode {
        for &seed in min_seeds.iter().take(WITNESS_DETAIL) {
            let pts = make_random(params.dim, params.mode, seed, params.range).and_then(|c| {
                count(
                    &c,
                    CountOptions {
                        emit_partitions: true,
                        allow_large_blocks: params.allow_large_blocks,
                        ..CountOptions::default()
                    },
                )
            });
            if let Ok(CountOutcome {
                tverberg_points: Some(n),
                ..
            }) = pts
            {
                min_witness_points.push((seed, n));
            }
        }
    }
    ScanSummary {
        spec,
        min,
        max,
        min_seeds,
        odd_counts: counted.iter().filter(|x| x.1 % 2 == 1).map(|x| x.0).collect(),
        parity_violations: rows
            .iter()
            .filter(|r| r.count.is_some() && !r.even_ok)
            .map(|r| r.seed)
            .collect(),
        bound_violations: rows
            .iter()
            .filter(|r| r.count.is_some() && !r.bound_ok)
            .map(|r| r.seed)
            .collect(),
        failures: rows.iter().filter(|r| r.error.is_some()).map(|r| r.seed).collect(),
        min_witness_points,
        rows,
    }
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl ScanSummary {
    /// Two comment lines (tool and spec) followed by the header and one row
    /// per seed.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.spec.tool);
        let _ = writeln!(out, "# spec {}", self.spec.to_json());
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.seed,
                opt(r.count),
                r.even_ok,
                r.bound_ok,
                r.fingerprint,
                opt(r.elapsed_ms)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes") + "\n"
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>10}  {:>10}  {:>5}  {:>5}  fingerprint",
            "seed", "count", "even", "bound"
        );
        for r in &self.rows {
            let count = match (&r.count, &r.error) {
                (Some(c), _) => c.to_string(),
                (None, Some(e)) => format!("error: {e}"),
                (None, None) => String::new(),
            };
            let _ = writeln!(
                out,
                "{:>10}  {:>10}  {:>5}  {:>5}  {}",
                r.seed,
                count,
                r.even_ok,
                r.bound_ok,
                &r.fingerprint[..r.fingerprint.len().min(16)]
            );
        }
        let _ = writeln!(
            out,
            "configurations: {}  min: {}  max: {}  odd: {}  parity violations: {}  bound violations: {}  failures: {}",
            self.rows.len() - self.failures.len(),
            opt(self.min),
            opt(self.max),
            self.odd_counts.len(),
            self.parity_violations.len(),
            self.bound_violations.len(),
            self.failures.len()
        );
        if !self.min_seeds.is_empty() {
            let shown: Vec<String> = self.min_seeds.iter().take(10).map(|s| s.to_string()).collect();
            let _ = writeln!(out, "minimum attained at seeds: {}", shown.join(", "));
        }
        for (seed, n) in &self.min_witness_points {
            let _ = writeln!(out, "seed {seed}: {n} distinct Tverberg points");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinColoring {
    pub min: u64,
    pub witness: Vec<usize>,
    pub colorings: u64,
    /// Uncolored Tverberg partitions of the geometry (blocks of at most d+1
    /// points).
    pub catalog_size: usize,
    /// `(count, colorings attaining it)` in increasing order of count.
    pub histogram: Vec<(u64, u64)>,
}

/// The smallest colored Tverberg count over all colorings of the geometry
/// with the mode's class sizes.
pub fn min_coloring(config: &ColoredConfiguration, symmetry: Symmetry, budget: u64) -> Result<MinColoring> {
    let Mode::Tverberg { .. } = config.mode() else {
        return Err(Error::InvalidArgument(
            "min-coloring needs a tverberg configuration".into(),
        ));
    };
    let sizes = config.mode().class_sizes(config.dim());
    let total = coloring_count(&sizes);
    let factor: u64 = match symmetry {
        Symmetry::None => 1,
        Symmetry::Colors => (1..=config.dim() as u64 + 1).product(),
        Symmetry::Dihedral(m) => (1..=config.dim() as u64 + 1).product::<u64>() * 2 * m as u64,
    };
    if total / factor > budget {
        return Err(Error::Budget(format!(
            "{total} colorings exceed the budget of {budget}; pass --symmetry colors or dihedral, or raise the budget"
        )));
    }
    let catalog = TverbergCatalog::build(config)?;
    let mut hist = std::collections::BTreeMap::new();
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut colorings = 0u64;
    for colors in enumerate_colorings(config.len(), &sizes, symmetry)? {
        let c = catalog.count_rainbow(&colors);
        *hist.entry(c).or_insert(0u64) += 1;
        colorings += 1;
        if best.as_ref().is_none_or(|b| c < b.0) {
            best = Some((c, colors));
        }
    }
    let (min, witness) = best.ok_or_else(|| Error::InvalidArgument("no colorings".into()))?;
    Ok(MinColoring {
        min,
        witness,
        colorings,
        catalog_size: catalog.len(),
        histogram: hist.into_iter().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightnessParams {
    pub dim: usize,
    pub k: usize,
    pub seed_start: u64,
    pub seed_count: u64,
    pub range: u64,
    /// Also try realizations of random words (d = 2 only).
    pub words: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightnessWitness {
    pub source: Source,
    pub count: u64,
    pub config: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tightness {
    pub target: u64,
    pub tried: u64,
    pub witness: Option<TightnessWitness>,
}

/// A seeded random balanced word of length 3k.
pub fn random_word(k: usize, seed: u64) -> ColoredWord {
    let mut rng = SeedStream::new(seed);
    let mut colors: Vec<u8> = (0..3 * k).map(|i| (i % 3) as u8).collect();
    rng.shuffle(&mut colors);
    ColoredWord::new(
        colors
            .into_iter()
            .map(|color| Letter {
                plus: rng.next_u64() & 1 == 1,
                color,
            })
            .collect(),
    )
}

fn tightness_candidate(p: &TightnessParams, target: u64, seed: u64) -> Result<Option<TightnessWitness>> {
    let mode = Mode::Birch { k: p.k };
    let c = make_random(p.dim, mode, seed, p.range)?;
    let n = count_colored_birch(&c, false)?.count;
    if n == target {
        return Ok(Some(TightnessWitness {
            source: Source::Random {
                dim: p.dim,
                mode,
                seed,
                range: p.range,
            },
            count: n,
            config: c.to_text(),
        }));
    }
    if p.words && p.dim == 2 {
        let w = random_word(p.k, seed);
        if count_word_partitions(&w) == target {
            let c = realize_word(&w, seed)?;
            let n = count_colored_birch(&c, false)?.count;
            if n == target {
                return Ok(Some(TightnessWitness {
                    source: Source::Word {
                        word: w.to_string(),
                        seed,
                    },
                    count: n,
                    config: c.to_text(),
                }));
            }
        }
    }
    Ok(None)
}

/// Seeds examined in parallel before looking for the first hit.
const TIGHTNESS_CHUNK: u64 = 256;

/// Looks for a Birch configuration whose count equals the theorem's lower
/// bound; the first witness in seed order is reported.
pub fn tightness(p: &TightnessParams) -> Result<Tightness> {
    if p.k < p.dim + 2 || p.dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "no lower bound to test for d = {}, k = {}",
            p.dim, p.k
        )));
    }
    let target = birch_lower_bound(p.dim, p.k) as u64;
    let mut tried = 0;
    while tried < p.seed_count {
        let n = TIGHTNESS_CHUNK.min(p.seed_count - tried);
        let base = p.seed_start.wrapping_add(tried);
        let hits: Vec<Option<TightnessWitness>> = (0..n)
            .into_par_iter()
            .map(|i| tightness_candidate(p, target, base.wrapping_add(i)).ok().flatten())
            .collect();
        if let Some((i, w)) = hits.into_iter().enumerate().find_map(|(i, h)| h.map(|w| (i, w))) {
            return Ok(Tightness {
                target,
                tried: tried + i as u64 + 1,
                witness: Some(w),
            });
        }
        tried += n;
    }
    Ok(Tightness {
        target,
        tried,
        witness: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cell {
    Value(u64),
    /// Not computed: beyond the default budget.
    Skipped,
    /// Left blank in the reference table.
    Blank,
    Failed(String),
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Value(v) => write!(f, "{v}"),
            Cell::Skipped => f.write_str("skipped(budget)"),
            Cell::Blank => f.write_str("-"),
            Cell::Failed(e) => write!(f, "error({e})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub r: usize,
    pub sierksma: Cell,
    pub polygon: Cell,
    pub random_observed_min: Cell,
    pub bound: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Column {
    Sierksma,
    Polygon,
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableParams {
    pub r_min: usize,
    pub r_max: usize,
    pub columns: Vec<Column>,
    pub heavy: bool,
    pub seed: u64,
    /// Random configurations per row of the random column.
    pub samples: u64,
    pub range: u64,
}

impl Default for TableParams {
    fn default() -> Self {
        TableParams {
            r_min: 2,
            r_max: 8,
            columns: vec![Column::Sierksma, Column::Polygon, Column::Random],
            heavy: false,
            seed: 0,
            samples: 20,
            range: DEFAULT_RANGE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub spec: ExperimentSpec,
    pub rows: Vec<TableRow>,
}

fn cell(v: Result<u64>) -> Cell {
    match v {
        Ok(v) => Cell::Value(v),
        Err(e) => Cell::Failed(e.to_string()),
    }
}

/// Minimal colored Tverberg counts in the plane for r in a range, with the
/// analytic lower bound column (in brackets for r not prime).
pub fn table(p: &TableParams, spec: ExperimentSpec) -> Table {
    let rows = (p.r_min.max(2)..=p.r_max)
        .map(|r| {
            let sierksma = if !p.columns.contains(&Column::Sierksma) || (r > 7 && !p.heavy) {
                Cell::Skipped
            } else {
                cell(
                    make_sierksma(2, r, &default_epsilon(), p.seed)
                        .and_then(|c| count_colored_tverberg(&c, TverbergOptions::default()))
                        .map(|rep| rep.count),
                )
            };
            let polygon = if r >= 7 {
                Cell::Blank
            } else if !p.columns.contains(&Column::Polygon) || (r > 5 && !p.heavy) {
                Cell::Skipped
            } else {
                cell(
                    make_polygon(r, DEFAULT_POLYGON_DENOM)
                        .and_then(|c| min_coloring(&c, Symmetry::Colors, u64::MAX))
                        .map(|m| m.min),
                )
            };
            let random_observed_min = if !p.columns.contains(&Column::Random) || (r > 6 && !p.heavy) || p.samples == 0 {
                Cell::Skipped
            } else {
                let params = ScanParams {
                    dim: 2,
                    mode: Mode::Tverberg { r },
                    seed_start: p.seed,
                    seed_count: p.samples,
                    range: p.range,
                    allow_large_blocks: false,
                    timings: false,
                };
                match scan(params, spec.clone()).min {
                    Some(m) => Cell::Value(m),
                    None => Cell::Failed("no configuration counted".into()),
                }
            };
            TableRow {
                r,
                sierksma,
                polygon,
                random_observed_min,
                bound: format_tverberg_bound(2, r),
            }
        })
        .collect();
    Table { spec, rows }
}

impl Table {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>3}  {:>16}  {:>16}  {:>22}  {:>11}",
            "r", "sierksma", "polygon", "random (observed min)", "lower bound"
        );
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:>3}  {:>16}  {:>16}  {:>22}  {:>11}",
                row.r,
                row.sierksma.to_string(),
                row.polygon.to_string(),
                row.random_observed_min.to_string(),
                row.bound
            );
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.spec.tool);
        let _ = writeln!(out, "# spec {}", self.spec.to_json());
        out.push_str("r,sierksma,polygon,random_observed_min,lower_bound\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                row.r, row.sierksma, row.polygon, row.random_observed_min, row.bound
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes") + "\n"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub fingerprint: String,
    pub total: usize,
    pub valid: usize,
    /// Zero-based positions of the invalid partitions in the input list.
    pub invalid: Vec<usize>,
    /// Distinct partitions among the valid ones.
    pub distinct: usize,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.invalid.is_empty()
    }
}

/// Re-checks every partition of a list against the configuration. Birch
/// partitions are checked as colored unless `uncolored` is set.
pub fn verify(config: &ColoredConfiguration, partitions: &[Partition], uncolored: bool) -> Result<VerifyReport> {
    let mut invalid = Vec::new();
    for (i, p) in partitions.iter().enumerate() {
        let ok = match config.mode() {
            Mode::Birch { .. } => verify_birch_partition(config, p, !uncolored)?,
            Mode::Tverberg { .. } => verify_tverberg_partition(config, p)?,
        };
        if !ok {
            invalid.push(i);
        }
    }
    let mut valid: Vec<&Partition> = partitions
        .iter()
        .enumerate()
        .filter(|(i, _)| !invalid.contains(i))
        .map(|(_, p)| p)
        .collect();
    let n_valid = valid.len();
    valid.sort();
    valid.dedup();
    Ok(VerifyReport {
        fingerprint: config.fingerprint().0,
        total: partitions.len(),
        valid: n_valid,
        invalid,
        distinct: valid.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_scan(seed_count: u64) -> ScanSummary {
        let params = ScanParams {
            dim: 2,
            mode: Mode::Birch { k: 4 },
            seed_start: 10,
            seed_count,
            range: DEFAULT_RANGE,
            allow_large_blocks: false,
            timings: false,
        };
        scan(params, ExperimentSpec::new("scan"))
    }

    #[test]
    fn scan_csv_is_reproducible() {
        let a = small_scan(12).to_csv();
        let b = small_scan(12).to_csv();
        assert_eq!(a, b);
        let lines: Vec<&str> = a.lines().collect();
        assert!(lines[0].starts_with("# tverberg "));
        assert_eq!(lines[2], CSV_HEADER);
        assert_eq!(lines.len(), 3 + 12);
        assert!(lines[3].starts_with("10,"));
    }

    #[test]
    fn scan_summary_is_consistent() {
        let s = small_scan(20);
        let counts: Vec<u64> = s.rows.iter().filter_map(|r| r.count).collect();
        assert_eq!(s.min, counts.iter().copied().min());
        assert_eq!(s.max, counts.iter().copied().max());
        assert!(s.parity_violations.is_empty());
        assert!(s.bound_violations.is_empty());
    }

    #[test]
    fn count_word_example_through_source() {
        let c = Source::Word {
            word: "+0-1+2-0+1-2+0-1+2".into(),
            seed: 0,
        }
        .build()
        .unwrap();
        let o = count(
            &c,
            CountOptions {
                uncolored: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(o.report.count, 3);
        assert!(o.uncolored.unwrap() >= 3);
        assert!(o.verdict.ok());
    }

    #[test]
    fn min_coloring_small_cases() {
        let c = make_polygon(2, DEFAULT_POLYGON_DENOM).unwrap();
        let m = min_coloring(&c, Symmetry::None, COLORING_BUDGET).unwrap();
        assert_eq!(m.min, 1);
        assert_eq!(m.colorings, 24);
        // every coloring of 4 points gives exactly one partition
        assert_eq!(m.histogram, vec![(1, 24)]);
        let big = make_polygon(4, DEFAULT_POLYGON_DENOM).unwrap();
        assert!(matches!(min_coloring(&big, Symmetry::None, 10), Err(Error::Budget(_))));
    }

    #[test]
    fn verify_flags_bad_partitions() {
        let c = Source::Word {
            word: "+0-1+2-0+1-2+0-1+2".into(),
            seed: 0,
        }
        .build()
        .unwrap();
        let good = count(
            &c,
            CountOptions {
                emit_partitions: true,
                ..Default::default()
            },
        )
        .unwrap()
        .report
        .partitions
        .unwrap();
        let mut list = good.clone();
        list.push(Partition::parse("{0,1,2}|{3,4,6}|{5,7,8}").unwrap());
        let v = verify(&c, &list, false).unwrap();
        assert_eq!(v.total, 4);
        assert_eq!(v.valid, 3);
        assert_eq!(v.invalid, vec![3]);
        assert!(!v.ok());
    }

    #[test]
    fn random_words_are_balanced() {
        for seed in 0..20 {
            random_word(4, seed).check_balanced().unwrap();
        }
        assert_eq!(random_word(4, 3), random_word(4, 3));
    }

    #[test]
    fn tightness_in_the_plane_for_four_blocks() {
        let t = tightness(&TightnessParams {
            dim: 2,
            k: 4,
            seed_start: 0,
            seed_count: 2000,
            range: DEFAULT_RANGE,
            words: true,
        })
        .unwrap();
        assert_eq!(t.target, 2);
        let w = t.witness.expect("witness within 2000 seeds");
        let c = ColoredConfiguration::parse(&w.config).unwrap();
        assert_eq!(count_colored_birch(&c, false).unwrap().count, 2);
    }
}
