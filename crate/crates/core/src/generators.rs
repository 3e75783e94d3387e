//! Generators for the named configurations and for colorings.
//!
//! Randomness comes from [`SeedStream`]: attempt `a` of a generator seeded
//! with `s` draws from `SeedStream::new(s).split(a)`, so a rejected draw never
//! shifts the values of later ones.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::config::{ColoredConfiguration, Mode};
use crate::error::{Error, Result};
use crate::geometry::RationalPoint;
use crate::rational::{frac, int, Rational};
use crate::rng::SeedStream;

pub const RETRY_BUDGET: usize = 100;

/// Offsets inside a Sierksma cluster are multiples of `1/OFFSET_GRID`.
const OFFSET_GRID: i64 = 1024;

/// The default cluster radius.
pub fn default_epsilon() -> Rational {
    frac(1, 1000)
}

/// Sierksma colors: the center gets d+1; cluster i holds `floor((r-1)/(d+1))`
/// points of every color and the surplus colored `i, i+1, ...` mod d+1.
pub fn sierksma_colors(d: usize, r: usize) -> Vec<usize> {
    let m = r - 1;
    let (q, s) = (m / (d + 1), m % (d + 1));
    let mut colors = Vec::with_capacity((d + 1) * m + 1);
    for i in 0..=d {
        for c in 0..=d {
            colors.extend(std::iter::repeat_n(c, q));
        }
        colors.extend((0..s).map(|t| (i + t) % (d + 1)));
    }
    colors.push(d + 1);
    colors
}

/// r-1 points around each vertex of the standard simplex (origin and unit
/// vectors) plus the centroid, listed cluster by cluster, centroid last.
pub fn make_sierksma(d: usize, r: usize, epsilon: &Rational, seed: u64) -> Result<ColoredConfiguration> {
    if d == 0 || r < 2 {
        return Err(Error::InvalidArgument(format!(
            "sierksma needs d >= 1 and r >= 2, got d = {d}, r = {r}"
        )));
    }
    if *epsilon <= int(0) {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let colors = sierksma_colors(d, r);
    let root = SeedStream::new(seed);
    let centroid = RationalPoint::new(vec![frac(1, d as i64 + 1); d]);
    for attempt in 0..RETRY_BUDGET {
        let mut rng = root.split(attempt as u64);
        let mut points = Vec::with_capacity(colors.len());
        for i in 0..=d {
            for _ in 0..r - 1 {
                let coords = (0..d)
                    .map(|j| {
                        let base = if i > 0 && j == i - 1 { int(1) } else { int(0) };
                        let u = frac(rng.range_i64(-OFFSET_GRID, OFFSET_GRID), OFFSET_GRID);
                        base + epsilon * u
                    })
                    .collect();
                points.push(RationalPoint::new(coords));
            }
        }
        points.push(centroid.clone());
        match ColoredConfiguration::new(d, points, colors.clone(), Mode::Tverberg { r }, None) {
            Ok(c) => return Ok(c),
            Err(Error::GeneralPosition(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GeneralPositionBudget(RETRY_BUDGET))
}

/// Rounds `x` down to a multiple of `1/denom`.
fn floor_to(x: f64, denom: u64) -> Rational {
    let n = (x * denom as f64).floor() as i64;
    Rational::new(BigInt::from(n), BigInt::from(denom))
}

/// Rotation of the polygon, in radians. Keeps vertices off the grid lines
/// and off the diagonals x = y.
const POLYGON_ROTATION: f64 = 1e-3;

/// Vertices of a regular 3(r-1)-gon, rotated by a small fixed angle and
/// rounded down to the `1/denom` grid, plus the exact center as the last
/// point. Rounding to nearest would keep opposite vertices exactly
/// antipodal, hence collinear with the center; rounding down moves each long
/// diagonal off the center. Vertex j gets color j mod 3 and the center
/// color 3; callers recolor. The denominator is raised one step at a time
/// until the rounded points are in general position.
pub fn make_polygon(r: usize, denom: u64) -> Result<ColoredConfiguration> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("polygon needs r >= 2, got {r}")));
    }
    if denom == 0 {
        return Err(Error::InvalidArgument("denominator must be positive".into()));
    }
    let n = 3 * (r - 1);
    let mut colors: Vec<usize> = (0..n).map(|j| j % 3).collect();
    colors.push(3);
    let mut den = denom;
    for _ in 0..RETRY_BUDGET {
        let mut points: Vec<RationalPoint> = (0..n)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / n as f64 + POLYGON_ROTATION;
                RationalPoint::new(vec![floor_to(t.cos(), den), floor_to(t.sin(), den)])
            })
            .collect();
        points.push(RationalPoint::origin(2));
        match ColoredConfiguration::new(2, points, colors.clone(), Mode::Tverberg { r }, None) {
            Ok(c) => return Ok(c),
            Err(Error::GeneralPosition(_)) => den += 1,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GeneralPositionBudget(RETRY_BUDGET))
}

/// Random points with coordinates `a / range`, `a` uniform in
/// `[-range, range]`. In birch mode the query point is the origin, the
/// center of that box. Colors are a shuffled list with the mode's class
/// sizes.
pub fn make_random(d: usize, mode: Mode, seed: u64, range: u64) -> Result<ColoredConfiguration> {
    mode.validate()?;
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    if range == 0 || range > i64::MAX as u64 {
        return Err(Error::InvalidArgument(format!(
            "coordinate range out of bounds: {range}"
        )));
    }
    let n = mode.point_count(d);
    let range = range as i64;
    let root = SeedStream::new(seed);
    let query = match mode {
        Mode::Birch { .. } => Some(RationalPoint::origin(d)),
        Mode::Tverberg { .. } => None,
    };
    for attempt in 0..RETRY_BUDGET {
        let mut rng = root.split(attempt as u64);
        let points = (0..n)
            .map(|_| RationalPoint::new((0..d).map(|_| frac(rng.range_i64(-range, range), range)).collect()))
            .collect();
        let mut colors: Vec<usize> = mode
            .class_sizes(d)
            .iter()
            .enumerate()
            .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
            .collect();
        rng.shuffle(&mut colors);
        match ColoredConfiguration::new(d, points, colors, mode, query.clone()) {
            Ok(c) => return Ok(c),
            Err(Error::GeneralPosition(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GeneralPositionBudget(RETRY_BUDGET))
}

/// Which colorings [`enumerate_colorings`] may skip as equivalent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    /// Every coloring.
    #[default]
    None,
    /// One coloring per renaming of the colors `0..colors-1` that share the
    /// largest class size. Exact for counts that only depend on which
    /// points share a color.
    Colors,
    /// `Colors` combined with the dihedral group of the first `n` points
    /// (a polygon, any further points fixed). Exact only when the geometry
    /// has that symmetry.
    Dihedral(usize),
}

/// Number of colorings with the given class sizes.
pub fn multinomial(sizes: &[usize]) -> BigInt {
    let mut total = BigInt::one();
    let mut n = 0usize;
    for &s in sizes {
        for i in 1..=s {
            n += 1;
            total = total * BigInt::from(n) / BigInt::from(i);
        }
    }
    total
}

/// Colorings with the given class sizes in lexicographic order, optionally
/// keeping one representative per symmetry class (the lexicographically
/// smallest).
pub fn enumerate_colorings(n: usize, class_sizes: &[usize], symmetry: Symmetry) -> Result<ColoringIter> {
    let total: usize = class_sizes.iter().sum();
    if total != n {
        return Err(Error::InvalidArgument(format!(
            "class sizes sum to {total}, but there are {n} points"
        )));
    }
    if let Symmetry::Dihedral(m) = symmetry {
        if m > n || m < 3 {
            return Err(Error::InvalidArgument(format!("dihedral order {m} out of range")));
        }
    }
    let max = class_sizes.iter().copied().max().unwrap_or(0);
    let renamable = class_sizes.iter().take_while(|&&s| s == max).count();
    let first: Vec<usize> = class_sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect();
    Ok(ColoringIter {
        next: Some(first),
        symmetry,
        renamable,
    })
}

pub struct ColoringIter {
    next: Option<Vec<usize>>,
    symmetry: Symmetry,
    renamable: usize,
}

impl ColoringIter {
    /// Relabels colors `0..renamable` in order of first appearance: the
    /// smallest coloring equivalent under renaming.
    fn normalize(&self, c: &[usize]) -> Vec<usize> {
        let mut map = vec![usize::MAX; self.renamable];
        let mut fresh = 0;
        c.iter()
            .map(|&x| {
                if x >= self.renamable {
                    return x;
                }
                if map[x] == usize::MAX {
                    map[x] = fresh;
                    fresh += 1;
                }
                map[x]
            })
            .collect()
    }

    fn is_representative(&self, c: &[usize]) -> bool {
        match self.symmetry {
            Symmetry::None => true,
            Symmetry::Colors => self.normalize(c) == c,
            Symmetry::Dihedral(m) => {
                if self.normalize(c) != c {
                    return false;
                }
                let mut img = c.to_vec();
                for s in 0..m {
                    for flip in [false, true] {
                        if s == 0 && !flip {
                            continue;
                        }
                        for j in 0..m {
                            let src = if flip { (s + m - j) % m } else { (j + s) % m };
                            img[j] = c[src];
                        }
                        if self.normalize(&img).as_slice() < c {
                            return false;
                        }
                    }
                }
                true
            }
        }
    }
}

/// Next multiset permutation in lexicographic order.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl Iterator for ColoringIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            let cur = self.next.take()?;
            let mut succ = cur.clone();
            if next_permutation(&mut succ) {
                self.next = Some(succ);
            }
            if self.is_representative(&cur) {
                return Some(cur);
            }
        }
    }
}

/// Upper bound on the work `enumerate_colorings` will do, for budget guards.
pub fn coloring_count(class_sizes: &[usize]) -> u64 {
    multinomial(class_sizes).to_u64().unwrap_or(u64::MAX)
}
