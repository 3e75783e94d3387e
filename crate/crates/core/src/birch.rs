//! Counting colored and uncolored Birch partitions of X to the query point p.
//!
//! Every block of a colored Birch partition holds exactly one point of color
//! 0, so a partition is generated exactly once by always extending the
//! lowest-index unused color-0 point (its anchor). Containment tests are
//! hoisted out of the search: each anchor gets the list of rainbow blocks
//! through it that contain p, as bitmasks, and the search only intersects
//! those lists with the set of used points.

use std::time::Instant;

use rayon::prelude::*;

use crate::config::{ColoredConfiguration, Mode};
use crate::error::{Error, Result};
use crate::geometry::{for_each_combination, Frame};
use crate::partition::{CountReport, Partition, SearchStats};

/// Blocks through one anchor that contain the query point.
struct AnchorTable {
    /// Indexed by point; empty for points that are never anchors.
    candidates: Vec<Vec<u64>>,
    /// Points in the order they become anchors.
    anchors: Vec<usize>,
}

struct Enumerator<'a> {
    table: &'a AnchorTable,
    full: u64,
    emit: bool,
    stats: SearchStats,
    stack: Vec<u64>,
    found: Vec<Partition>,
    count: u64,
}

impl<'a> Enumerator<'a> {
    fn new(table: &'a AnchorTable, full: u64, emit: bool) -> Self {
        Enumerator {
            table,
            full,
            emit,
            stats: SearchStats::default(),
            stack: Vec::new(),
            found: Vec::new(),
            count: 0,
        }
    }

    fn run(&mut self, used: u64) {
        self.stats.nodes += 1;
        if used == self.full {
            self.count += 1;
            if self.emit {
                self.found.push(Partition::from_masks(&self.stack));
            }
            return;
        }
        let Some(&anchor) = self.table.anchors.iter().find(|&&a| used & (1 << a) == 0) else {
            return;
        };
        for &block in &self.table.candidates[anchor] {
            if block & used != 0 {
                self.stats.pruned += 1;
                continue;
            }
            self.stack.push(block);
            self.run(used | block);
            self.stack.pop();
        }
    }
}

fn search(table: &AnchorTable, n: usize, emit: bool) -> (u64, Vec<Partition>, SearchStats) {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let Some(&first) = table.anchors.first() else {
        return (
            1,
            if emit { vec![Partition::new(vec![])] } else { vec![] },
            SearchStats::default(),
        );
    };
    // fan out over the first anchor's blocks; results are concatenated in
    // candidate order, so the output does not depend on scheduling
    let parts: Vec<(u64, Vec<Partition>, SearchStats)> = table.candidates[first]
        .par_iter()
        .map(|&block| {
            let mut e = Enumerator::new(table, full, emit);
            e.stack.push(block);
            e.run(block);
            (e.count, e.found, e.stats)
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

fn require_birch(config: &ColoredConfiguration) -> Result<usize> {
    match config.mode() {
        Mode::Birch { k } => Ok(k),
        other => Err(Error::InvalidArgument(format!(
            "expected a birch configuration, found {other}"
        ))),
    }
}

fn colored_table(config: &ColoredConfiguration) -> Result<AnchorTable> {
    let n = config.len();
    let classes = config.color_classes();
    let mut candidates = vec![Vec::new(); n];
    for &a in &classes[0] {
        candidates[a] = rainbow_blocks_containing(config.frame(), &classes, a, n)?;
    }
    Ok(AnchorTable {
        candidates,
        anchors: classes[0].clone(),
    })
}

/// Rainbow (d+1)-sets through `anchor` (of color 0) whose hull strictly
/// contains frame point `query`, as bitmasks.
fn rainbow_blocks_containing(frame: &Frame, classes: &[Vec<usize>], anchor: usize, query: usize) -> Result<Vec<u64>> {
    let d = frame.dim();
    let mut out = Vec::new();
    let mut choice = vec![0usize; d];
    let mut simplex = vec![anchor; d + 1];
    loop {
        for (c, &i) in choice.iter().enumerate() {
            simplex[c + 1] = classes[c + 1][i];
        }
        if frame.simplex_contains(&simplex, query)? {
            out.push(simplex.iter().fold(0u64, |m, &i| m | (1 << i)));
        }
        // odometer over the d remaining color classes
        let mut c = 0;
        loop {
            if c == d {
                return Ok(out);
            }
            choice[c] += 1;
            if choice[c] < classes[c + 1].len() {
                break;
            }
            choice[c] = 0;
            c += 1;
        }
    }
}

fn report(
    config: &ColoredConfiguration,
    count: u64,
    partitions: Vec<Partition>,
    emit: bool,
    stats: SearchStats,
    start: Instant,
) -> CountReport {
    CountReport {
        count,
        partitions: emit.then_some(partitions),
        fingerprint: config.fingerprint(),
        dim: config.dim(),
        mode: config.mode(),
        stats,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    }
}

/// cBP_k(X): unordered partitions of X into k rainbow (d+1)-sets, each
/// strictly containing the query point.
pub fn count_colored_birch(config: &ColoredConfiguration, emit_partitions: bool) -> Result<CountReport> {
    let start = Instant::now();
    require_birch(config)?;
    let table = colored_table(config)?;
    let (count, found, stats) = search(&table, config.len(), emit_partitions);
    Ok(report(config, count, found, emit_partitions, stats, start))
}

/// BP_k(X): like [`count_colored_birch`] with colors ignored.
pub fn count_uncolored_birch(config: &ColoredConfiguration, emit_partitions: bool) -> Result<CountReport> {
    let start = Instant::now();
    require_birch(config)?;
    let d = config.dim();
    let n = config.len();
    let frame = config.frame();
    let mut candidates = vec![Vec::new(); n];
    for (a, slot) in candidates.iter_mut().enumerate() {
        let later: Vec<usize> = (a + 1..n).collect();
        let mut err = None;
        for_each_combination(later.len(), d, |c| {
            let mut simplex = vec![a];
            simplex.extend(c.iter().map(|&i| later[i]));
            match frame.simplex_contains(&simplex, n) {
                Ok(true) => slot.push(simplex.iter().fold(0u64, |m, &i| m | (1 << i))),
                Ok(false) => {}
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            }
            true
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    // with uncolored blocks any point can be the lowest unused one
    let table = AnchorTable {
        candidates,
        anchors: (0..n).collect(),
    };
    let (count, found, stats) = search(&table, n, emit_partitions);
    Ok(report(config, count, found, emit_partitions, stats, start))
}

/// Number of rainbow d-simplices strictly containing the query point, for a
/// configuration of 2(d+1) points in which every color appears twice.
pub fn count_rainbow_simplices(config: &ColoredConfiguration) -> Result<u64> {
    let k = require_birch(config)?;
    if k != 2 {
        return Err(Error::InvalidArgument(format!(
            "rainbow simplex count needs every color exactly twice (k = 2), found k = {k}"
        )));
    }
    let classes = config.color_classes();
    let n = config.len();
    let mut total = 0u64;
    for &a in &classes[0] {
        total += rainbow_blocks_containing(config.frame(), &classes, a, n)?.len() as u64;
    }
    Ok(total)
}

/// Re-checks a Birch partition block by block, independent of the search.
pub fn verify_birch_partition(config: &ColoredConfiguration, partition: &Partition, colored: bool) -> Result<bool> {
    let k = require_birch(config)?;
    let d = config.dim();
    let n = config.len();
    if partition.len() != k || !partition.covers_exactly(n) {
        return Ok(false);
    }
    for block in partition.blocks() {
        if block.len() != d + 1 {
            return Ok(false);
        }
        if colored {
            let mut seen = vec![false; d + 1];
            for &i in block {
                let c = config.colors()[i];
                if seen[c] {
                    return Ok(false);
                }
                seen[c] = true;
            }
        }
        let simplex: Vec<_> = block.iter().map(|&i| config.points()[i].clone()).collect();
        if !crate::geometry::simplex_contains(&simplex, config.query().expect("birch query"))? {
            return Ok(false);
        }
    }
    Ok(true)
}
