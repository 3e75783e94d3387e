//! Brute-force oracles shared by the integration tests. They work on integer
//! coordinates with plain i128 arithmetic and enumerate every set partition
//! without pruning.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use tverberg_core::config::ColoredConfiguration;
use tverberg_core::lp::FeasibilityProblem;

/// Points (and the query point, if any) scaled to integers by one common
/// positive factor.
pub fn int_points(config: &ColoredConfiguration) -> (Vec<Vec<i128>>, Option<Vec<i128>>) {
    let all: Vec<_> = config.points().iter().chain(config.query()).collect();
    let mut l = BigInt::one();
    for p in &all {
        for c in &p.coords {
            l = l.lcm(c.denom());
        }
    }
    let scale = |p: &tverberg_core::geometry::RationalPoint| -> Vec<i128> {
        p.coords
            .iter()
            .map(|c| (c.numer() * (&l / c.denom())).to_i128().expect("coordinate fits i128"))
            .collect()
    };
    let pts = config.points().iter().map(scale).collect();
    (pts, config.query().map(scale))
}

pub fn orient2(a: &[i128], b: &[i128], c: &[i128]) -> i128 {
    ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).signum()
}

/// Strict containment of `p` in triangle abc.
pub fn in_triangle(a: &[i128], b: &[i128], c: &[i128], p: &[i128]) -> bool {
    let s = orient2(a, b, c);
    s != 0 && orient2(a, b, p) == s && orient2(b, c, p) == s && orient2(c, a, p) == s
}

/// Every partition of `0..n` into exactly `m` nonempty blocks, blocks ordered
/// by their smallest element.
pub fn set_partitions(n: usize, m: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, m: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            if cur.len() == m {
                out.push(cur.clone());
            }
            return;
        }
        if cur.len() + (n - i) < m {
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, n, m, cur, out);
            cur[b].pop();
        }
        if cur.len() < m {
            cur.push(vec![i]);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, m, &mut Vec::new(), &mut out);
    out
}

pub fn rainbow(block: &[usize], colors: &[usize]) -> bool {
    let mut seen: Vec<usize> = block.iter().map(|&i| colors[i]).collect();
    seen.sort_unstable();
    seen.windows(2).all(|w| w[0] != w[1])
}

/// Colored Birch partitions in the plane: rainbow triples, each with the
/// query point strictly inside.
pub fn naive_birch_2d(config: &ColoredConfiguration, colored: bool) -> u64 {
    let (pts, q) = int_points(config);
    let q = q.expect("birch configuration");
    let n = pts.len();
    set_partitions(n, n / 3)
        .into_iter()
        .filter(|p| {
            p.iter().all(|b| {
                b.len() == 3
                    && (!colored || rainbow(b, config.colors()))
                    && in_triangle(&pts[b[0]], &pts[b[1]], &pts[b[2]], &q)
            })
        })
        .count() as u64
}

/// Common point of the hulls, by interval overlap on the line and by an
/// exact LP otherwise.
pub fn hulls_meet(pts: &[Vec<i128>], blocks: &[Vec<usize>]) -> bool {
    if pts[0].len() == 1 {
        let lo = blocks
            .iter()
            .map(|b| b.iter().map(|&i| pts[i][0]).min().unwrap())
            .max()
            .unwrap();
        let hi = blocks
            .iter()
            .map(|b| b.iter().map(|&i| pts[i][0]).max().unwrap())
            .min()
            .unwrap();
        return lo <= hi;
    }
    let big: Vec<Vec<BigInt>> = pts
        .iter()
        .map(|p| p.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    FeasibilityProblem::new(blocks, pts[0].len(), |i| &big[i][..]).is_feasible()
}

/// Colored Tverberg partitions: every partition into r rainbow blocks of any
/// size whose hulls share a point.
pub fn naive_tverberg(config: &ColoredConfiguration, r: usize) -> u64 {
    let (pts, _) = int_points(config);
    set_partitions(pts.len(), r)
        .into_iter()
        .filter(|p| p.iter().all(|b| rainbow(b, config.colors())) && hulls_meet(&pts, p))
        .count() as u64
}
