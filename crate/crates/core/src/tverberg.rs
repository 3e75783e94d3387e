//! Counting colored Tverberg partitions of an affine configuration.
//!
//! The search builds partitions block by block. The next block is always the
//! one containing the lowest-index unassigned point, which fixes the block
//! order (by minimal element) and generates every unordered partition once.
//! A block is tested against the blocks already placed as soon as it is
//! chosen: the family of hulls must still have a common point. By Helly's
//! theorem it is enough that every d+1 of the blocks intersect, so the new
//! block is checked together with each d-subset of the earlier ones, and
//! those small feasibility problems are cached by block bitmask. Every
//! complete partition is confirmed once more with a single exact LP over all
//! of its blocks.

use std::time::Instant;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::config::{check_class_sizes, ColoredConfiguration, Mode};
use crate::error::{Error, Result};
use crate::geometry::{for_each_combination, Frame, RationalPoint};
use crate::lp::{witness_point, FeasibilityProblem};
use crate::partition::{mask_indices, CountReport, Partition, SearchStats};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TverbergOptions {
    pub emit_partitions: bool,
    /// Lift the d+1 cap on block sizes (blocks stay rainbow, so at most d+2).
    pub allow_large_blocks: bool,
}

/// Exact common-point test for the hulls of `blocks` (closed semantics).
pub fn hulls_intersect(blocks: &[Vec<usize>], config: &ColoredConfiguration) -> bool {
    frame_hulls_intersect(config.frame(), blocks)
}

pub(crate) fn frame_hulls_intersect(frame: &Frame, blocks: &[Vec<usize>]) -> bool {
    FeasibilityProblem::new(blocks, frame.dim(), |i| frame.coords(i)).is_feasible()
}

/// A point common to the hulls of all blocks, if there is one.
pub fn common_point(blocks: &[Vec<usize>], config: &ColoredConfiguration) -> Option<RationalPoint> {
    let frame = config.frame();
    let weights = FeasibilityProblem::new(blocks, frame.dim(), |i| frame.coords(i)).solve()?;
    Some(witness_point(config.points(), &blocks[0], &weights[0]))
}

const KEY_LEN: usize = 5;

/// Cached feasibility of small block families, keyed by sorted bitmasks.
struct HullOracle<'a> {
    frame: &'a Frame,
    cache: FxHashMap<[u64; KEY_LEN], bool>,
    lp_solves: u64,
}

impl<'a> HullOracle<'a> {
    fn new(frame: &'a Frame) -> Self {
        HullOracle {
            frame,
            cache: FxHashMap::default(),
            lp_solves: 0,
        }
    }

    fn solve(&mut self, masks: &[u64]) -> bool {
        self.lp_solves += 1;
        let blocks: Vec<Vec<usize>> = masks.iter().map(|&m| mask_indices(m)).collect();
        frame_hulls_intersect(self.frame, &blocks)
    }

    fn family(&mut self, masks: &[u64]) -> bool {
        if masks.len() > KEY_LEN {
            return self.solve(masks);
        }
        let mut key = [0u64; KEY_LEN];
        key[..masks.len()].copy_from_slice(masks);
        key[..masks.len()].sort_unstable();
        if let Some(&v) = self.cache.get(&key) {
            return v;
        }
        let v = self.solve(masks);
        self.cache.insert(key, v);
        v
    }

    /// Whether `placed` plus `block` still have a common point, given that
    /// `placed` alone does.
    fn compatible(&mut self, placed: &[u64], block: u64) -> bool {
        let d = self.frame.dim();
        for &p in placed {
            if !self.family(&[p, block]) {
                return false;
            }
        }
        if placed.len() <= 1 || d == 1 {
            return true;
        }
        if placed.len() <= d {
            let mut fam = placed.to_vec();
            fam.push(block);
            return self.family(&fam);
        }
        let mut ok = true;
        let mut fam = vec![0u64; d + 1];
        for_each_combination(placed.len(), d, |c| {
            for (slot, &i) in fam.iter_mut().zip(c) {
                *slot = placed[i];
            }
            fam[d] = block;
            ok = self.family(&fam);
            ok
        });
        ok
    }
}

/// Candidate blocks for every anchor: subsets containing the anchor whose
/// other members have larger indices, of size at most `cap`, rainbow when
/// `colors` is given.
fn anchor_blocks(n: usize, cap: usize, colors: Option<&[usize]>) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new(); n];
    for (a, slot) in out.iter_mut().enumerate() {
        let mut stack: Vec<usize> = vec![a];
        extend_blocks(a + 1, n, cap, colors, &mut stack, slot);
    }
    out
}

fn extend_blocks(
    from: usize,
    n: usize,
    cap: usize,
    colors: Option<&[usize]>,
    stack: &mut Vec<usize>,
    out: &mut Vec<u64>,
) {
    out.push(stack.iter().fold(0u64, |m, &i| m | (1 << i)));
    if stack.len() == cap {
        return;
    }
    for j in from..n {
        if let Some(col) = colors {
            if stack.iter().any(|&i| col[i] == col[j]) {
                continue;
            }
        }
        stack.push(j);
        extend_blocks(j + 1, n, cap, colors, stack, out);
        stack.pop();
    }
}

struct Search<'a> {
    oracle: HullOracle<'a>,
    candidates: &'a [Vec<u64>],
    n: usize,
    r: usize,
    cap: usize,
    full: u64,
    emit: bool,
    stack: Vec<u64>,
    found: Vec<Vec<u64>>,
    count: u64,
    stats: SearchStats,
}

impl<'a> Search<'a> {
    fn new(frame: &'a Frame, candidates: &'a [Vec<u64>], r: usize, cap: usize, emit: bool) -> Self {
        let n = frame.len();
        Search {
            oracle: HullOracle::new(frame),
            candidates,
            n,
            r,
            cap,
            full: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
            emit,
            stack: Vec::with_capacity(r),
            found: Vec::new(),
            count: 0,
            stats: SearchStats::default(),
        }
    }

    fn run(&mut self, used: u64) {
        self.stats.nodes += 1;
        if used == self.full {
            if self.stack.len() == self.r && self.confirm() {
                self.count += 1;
                if self.emit {
                    self.found.push(self.stack.clone());
                }
            }
            return;
        }
        let blocks_left = self.r - self.stack.len();
        if blocks_left == 0 {
            return;
        }
        let anchor = (!used).trailing_zeros() as usize;
        let remaining = self.n - used.count_ones() as usize;
        for &block in &self.candidates[anchor] {
            if block & used != 0 {
                continue;
            }
            let rest = remaining - block.count_ones() as usize;
            if rest < blocks_left - 1 || rest > (blocks_left - 1) * self.cap {
                self.stats.pruned += 1;
                continue;
            }
            if !self.oracle.compatible(&self.stack, block) {
                self.stats.pruned += 1;
                continue;
            }
            self.stack.push(block);
            self.run(used | block);
            self.stack.pop();
        }
    }

    fn confirm(&mut self) -> bool {
        let blocks: Vec<Vec<usize>> = self.stack.iter().map(|&m| mask_indices(m)).collect();
        self.oracle.lp_solves += 1;
        frame_hulls_intersect(self.oracle.frame, &blocks)
    }
}

/// Runs the block-by-block search and returns the block masks of every
/// partition found (when `emit`), the count and statistics.
fn enumerate(
    frame: &Frame,
    r: usize,
    cap: usize,
    colors: Option<&[usize]>,
    emit: bool,
) -> (u64, Vec<Vec<u64>>, SearchStats) {
    let n = frame.len();
    let candidates = anchor_blocks(n, cap, colors);
    if n == 0 {
        return (0, Vec::new(), SearchStats::default());
    }
    if rayon::current_num_threads() <= 1 {
        let mut s = Search::new(frame, &candidates, r, cap, emit);
        s.run(0);
        s.stats.lp_solves = s.oracle.lp_solves;
        return (s.count, s.found, s.stats);
    }
    // subtrees under the first block run independently; merged in order
    let parts: Vec<(u64, Vec<Vec<u64>>, SearchStats)> = candidates[0]
        .par_iter()
        .map(|&block| {
            let mut s = Search::new(frame, &candidates, r, cap, emit);
            let rest = n - block.count_ones() as usize;
            if rest < r - 1 || rest > (r - 1) * cap {
                return (0, Vec::new(), s.stats);
            }
            s.stack.push(block);
            s.run(block);
            s.stats.lp_solves = s.oracle.lp_solves;
            (s.count, s.found, s.stats)
        })
        .collect();
    let mut stats = SearchStats {
        nodes: 1,
        ..SearchStats::default()
    };
    let mut count = 0;
    let mut found = Vec::new();
    for (c, f, s) in parts {
        count += c;
        found.extend(f);
        stats.merge(&s);
    }
    (count, found, stats)
}

fn require_tverberg(config: &ColoredConfiguration) -> Result<usize> {
    match config.mode() {
        Mode::Tverberg { r } => Ok(r),
        other => Err(Error::InvalidArgument(format!(
            "expected a tverberg configuration, found {other}"
        ))),
    }
}

/// T(f): unordered partitions of all points into r rainbow blocks whose hulls
/// share a point.
pub fn count_colored_tverberg(config: &ColoredConfiguration, options: TverbergOptions) -> Result<CountReport> {
    let start = Instant::now();
    let r = require_tverberg(config)?;
    let d = config.dim();
    let cap = if options.allow_large_blocks { d + 2 } else { d + 1 };
    let (count, found, stats) = enumerate(config.frame(), r, cap, Some(config.colors()), options.emit_partitions);
    Ok(CountReport {
        count,
        partitions: options
            .emit_partitions
            .then(|| found.iter().map(|m| Partition::from_masks(m)).collect()),
        fingerprint: config.fingerprint(),
        dim: d,
        mode: config.mode(),
        stats,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

/// All Tverberg partitions of the geometry with blocks of at most d+1 points,
/// colors ignored. Counting the partitions whose blocks are all rainbow for
/// a coloring gives T(f) for that coloring.
#[derive(Debug, Clone)]
pub struct TverbergCatalog {
    r: usize,
    n: usize,
    /// Distinct blocks used by any partition.
    blocks: Vec<u64>,
    /// Each partition as indices into `blocks`.
    partitions: Vec<Vec<u32>>,
    pub stats: SearchStats,
}

impl TverbergCatalog {
    pub fn build(config: &ColoredConfiguration) -> Result<Self> {
        let r = require_tverberg(config)?;
        let d = config.dim();
        let (_, found, stats) = enumerate(config.frame(), r, d + 1, None, true);
        let mut index: FxHashMap<u64, u32> = FxHashMap::default();
        let mut blocks = Vec::new();
        let partitions = found
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&m| {
                        *index.entry(m).or_insert_with(|| {
                            blocks.push(m);
                            (blocks.len() - 1) as u32
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(TverbergCatalog {
            r,
            n: config.len(),
            blocks,
            partitions,
            stats,
        })
    }

    /// Number of uncolored partitions.
    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// T(f) for the given coloring of the catalog's geometry.
    pub fn count_rainbow(&self, colors: &[usize]) -> u64 {
        assert_eq!(colors.len(), self.n, "coloring length");
        let color_bits: Vec<u64> = colors.iter().map(|&c| 1u64 << c).collect();
        let rainbow: Vec<bool> = self
            .blocks
            .iter()
            .map(|&m| {
                let mut seen = 0u64;
                let mut mm = m;
                while mm != 0 {
                    let i = mm.trailing_zeros() as usize;
                    mm &= mm - 1;
                    if seen & color_bits[i] != 0 {
                        return false;
                    }
                    seen |= color_bits[i];
                }
                true
            })
            .collect();
        self.partitions
            .iter()
            .filter(|p| p.iter().all(|&b| rainbow[b as usize]))
            .count() as u64
    }

    pub fn partitions(&self) -> impl Iterator<Item = Partition> + '_ {
        self.partitions.iter().map(|p| {
            let masks: Vec<u64> = p.iter().map(|&b| self.blocks[b as usize]).collect();
            Partition::from_masks(&masks)
        })
    }
}

/// Re-checks a colored Tverberg partition independently of the search.
pub fn verify_tverberg_partition(config: &ColoredConfiguration, partition: &Partition) -> Result<bool> {
    let r = require_tverberg(config)?;
    if partition.len() != r || !partition.covers_exactly(config.len()) {
        return Ok(false);
    }
    for block in partition.blocks() {
        let mut colors: Vec<usize> = block.iter().map(|&i| config.colors()[i]).collect();
        colors.sort_unstable();
        if colors.windows(2).any(|w| w[0] == w[1]) {
            return Ok(false);
        }
    }
    Ok(hulls_intersect(partition.blocks(), config))
}

/// Distinct common points over a list of Tverberg partitions.
pub fn distinct_tverberg_points(config: &ColoredConfiguration, partitions: &[Partition]) -> usize {
    let mut pts: Vec<RationalPoint> = partitions
        .iter()
        .filter_map(|p| common_point(p.blocks(), config))
        .collect();
    pts.sort_by(|a, b| a.coords.cmp(&b.coords));
    pts.dedup();
    pts.len()
}

/// The Birch instance hidden in a partition made of d blocks of exactly d
/// points and r-d blocks of d+1 points: the full blocks, with the common
/// point as query. If the singleton-class point sits in a full block it takes
/// the color that the full blocks are missing. Returns `None` for any other
/// block shape.
pub fn birch_view_of_tverberg(
    partition: &Partition,
    config: &ColoredConfiguration,
) -> Result<Option<ColoredConfiguration>> {
    let r = require_tverberg(config)?;
    let d = config.dim();
    if r < d + 1 || partition.len() != r {
        return Ok(None);
    }
    let small: Vec<&Vec<usize>> = partition.blocks().iter().filter(|b| b.len() == d).collect();
    let full: Vec<&Vec<usize>> = partition.blocks().iter().filter(|b| b.len() == d + 1).collect();
    if small.len() != d || full.len() != r - d {
        return Ok(None);
    }
    let Some(witness) = common_point(partition.blocks(), config) else {
        return Ok(None);
    };
    let mut members: Vec<usize> = full.iter().flat_map(|b| b.iter().copied()).collect();
    members.sort_unstable();
    let k = r - d;
    let mut colors: Vec<usize> = members.iter().map(|&i| config.colors()[i]).collect();
    if let Some(pos) = colors.iter().position(|&c| c == d + 1) {
        let mut counts = vec![0usize; d + 1];
        for &c in colors.iter().filter(|&&c| c <= d) {
            counts[c] += 1;
        }
        let missing = counts
            .iter()
            .position(|&c| c + 1 == k)
            .ok_or_else(|| Error::InvalidArgument("full blocks are not rainbow".into()))?;
        colors[pos] = missing;
    }
    check_class_sizes(&colors, &vec![k; d + 1])?;
    let points = members.iter().map(|&i| config.points()[i].clone()).collect();
    ColoredConfiguration::new(d, points, colors, Mode::Birch { k }, Some(witness)).map(Some)
}
