//! Unordered partitions of point indices and the count reports built on them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::{Fingerprint, Mode};
use crate::error::{Error, Result};

/// Blocks sorted by minimal element, indices sorted within blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by_key(|b| b.first().copied().unwrap_or(usize::MAX));
        Partition { blocks }
    }

    pub fn from_masks(masks: &[u64]) -> Self {
        Partition::new(masks.iter().map(|&m| mask_indices(m)).collect())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Disjoint, nonempty blocks whose union is exactly `0..n`.
    pub fn covers_exactly(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for b in &self.blocks {
            if b.is_empty() {
                return false;
            }
            for &i in b {
                if i >= n || seen[i] {
                    return false;
                }
                seen[i] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Parses `{0,1,2}|{3,4,5}`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let mut blocks = Vec::new();
        for part in s.split('|') {
            let part = part.trim();
            let inner = part
                .strip_prefix('{')
                .and_then(|p| p.strip_suffix('}'))
                .ok_or_else(|| format!("block {part:?} is not of the form {{i,j,...}}"))?;
            let block = inner
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| format!("invalid index {t:?}")))
                .collect::<Result<Vec<_>, _>>()?;
            blocks.push(block);
        }
        Ok(Partition::new(blocks))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            let items: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

pub fn mask_indices(mut m: u64) -> Vec<usize> {
    let mut v = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        v.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    v
}

pub fn indices_mask(idx: &[usize]) -> u64 {
    idx.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

/// One partition per line.
pub fn format_partition_list(parts: &[Partition]) -> String {
    let mut s = String::new();
    for p in parts {
        s.push_str(&p.to_string());
        s.push('\n');
    }
    s
}

pub fn parse_partition_list(text: &str) -> Result<Vec<Partition>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| {
            Partition::parse(l).map_err(|message| Error::Parse {
                line: i + 1,
                column: 1,
                message,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Search nodes expanded.
    pub nodes: u64,
    /// Candidate extensions rejected by a feasibility or containment test.
    pub pruned: u64,
    /// Feasibility problems solved (cache misses only).
    pub lp_solves: u64,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.pruned += other.pruned;
        self.lp_solves += other.lp_solves;
    }
}

/// Result of one counting run.
///
/// Counts are exact. They are enumerated one by one, so `u64` cannot overflow
/// in any run that terminates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partitions: Option<Vec<Partition>>,
    pub fingerprint: Fingerprint,
    pub dim: usize,
    pub mode: Mode,
    pub stats: SearchStats,
    /// Wall-clock time; excluded from equality-sensitive outputs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}
