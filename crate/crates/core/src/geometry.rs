//! Exact orientation, containment and general-position predicates.
//!
//! Everything here is decided by the sign of an integer determinant. Rational
//! inputs are scaled row by row to integers (which preserves signs) and the
//! determinant is evaluated by fraction-free Bareiss elimination, first in
//! checked `i128` and, on overflow, in `BigInt`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, format_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    fn from_i8(s: i8) -> Sign {
        match s.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }

    pub fn flip(self) -> Sign {
        Sign::from_i8(-self.as_i8())
    }
}

/// A point of R^d with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    pub coords: Vec<Rational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalPoint {
            coords: coords.iter().map(|&c| Rational::from_integer(c.into())).collect(),
        }
    }

    pub fn origin(d: usize) -> Self {
        RationalPoint {
            coords: vec![Rational::zero(); d],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn sub(&self, other: &RationalPoint) -> RationalPoint {
        RationalPoint {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> RationalPoint {
        RationalPoint {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> RationalPoint {
        RationalPoint {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn check_dims<'a>(points: impl IntoIterator<Item = &'a RationalPoint>, d: usize) -> Result<()> {
    for p in points {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.dim(),
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Integer determinants
// ---------------------------------------------------------------------------

/// Bareiss elimination in checked i128. `None` on overflow.
fn det_sign_i128(mut m: Vec<Vec<i128>>) -> Option<i8> {
    let n = m.len();
    let mut sign = 1i8;
    let mut prev: i128 = 1;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(swap) => {
                    m.swap(k, swap);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[k][k].checked_mul(m[i][j])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Some(sign * m[n - 1][n - 1].signum() as i8)
}

fn det_sign_big(mut m: Vec<Vec<BigInt>>) -> i8 {
    let n = m.len();
    let mut sign = 1i8;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(swap) => {
                    m.swap(k, swap);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let last = &m[n - 1][n - 1];
    if last.is_zero() {
        0
    } else if last.is_positive() {
        sign
    } else {
        -sign
    }
}

/// Sign of the determinant of a square integer matrix.
pub(crate) fn det_sign_int(m: &[Vec<BigInt>]) -> Sign {
    let n = m.len();
    if n == 0 {
        return Sign::Positive;
    }
    let small: Option<Vec<Vec<i128>>> = m.iter().map(|row| row.iter().map(|x| x.to_i128()).collect()).collect();
    if let Some(s) = small.and_then(det_sign_i128) {
        return Sign::from_i8(s);
    }
    Sign::from_i8(det_sign_big(m.to_vec()))
}

/// Sign of the determinant of a square rational matrix.
pub fn det_sign(rows: &[Vec<Rational>]) -> Sign {
    det_sign_int(&integer_rows(rows))
}

fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = common_denominator(row);
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect()
}

/// Rank of an integer matrix by fraction-free elimination.
fn rank_int(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            for j in c + 1..cols {
                m[i][j] = &m[rank][c] * &m[i][j] - &m[i][c] * &m[rank][j];
            }
            m[i][c] = BigInt::zero();
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

// ---------------------------------------------------------------------------
// Public predicates on rational points
// ---------------------------------------------------------------------------

/// Sign of det(p1 - p0, ..., pd - p0).
pub fn orientation(points: &[RationalPoint], d: usize) -> Result<Sign> {
    check_dims(points, d)?;
    if points.len() != d + 1 {
        return Err(Error::DimensionMismatch {
            expected: d + 1,
            found: points.len(),
        });
    }
    let rows: Vec<Vec<Rational>> = points[1..].iter().map(|p| p.sub(&points[0]).coords).collect();
    Ok(det_sign(&rows))
}

/// True iff the points (at most d + 1 of them) are affinely independent.
pub fn affinely_independent(points: &[RationalPoint]) -> bool {
    if points.len() <= 1 {
        return true;
    }
    let rows: Vec<Vec<Rational>> = points[1..].iter().map(|p| p.sub(&points[0]).coords).collect();
    rank_int(integer_rows(&rows)) == points.len() - 1
}

/// No m + 2 points on a common m-flat, for every m < d.
pub fn in_general_position(points: &[RationalPoint], d: usize) -> Result<bool> {
    check_dims(points, d)?;
    Ok(Frame::new(points, d).in_general_position())
}

/// Strict interior containment of `p` in the simplex spanned by `simplex`.
pub fn simplex_contains(simplex: &[RationalPoint], p: &RationalPoint) -> Result<bool> {
    let d = p.dim();
    check_dims(simplex, d)?;
    if simplex.len() != d + 1 {
        return Err(Error::DimensionMismatch {
            expected: d + 1,
            found: simplex.len(),
        });
    }
    let mut all: Vec<RationalPoint> = simplex.to_vec();
    all.push(p.clone());
    let frame = Frame::new(&all, d);
    let idx: Vec<usize> = (0..=d).collect();
    frame.simplex_contains(&idx, d + 1)
}

/// Membership of `q_neg` in the open cone spanned by the d vectors `generators`.
pub fn cone_member(generators: &[RationalPoint], q_neg: &RationalPoint) -> Result<bool> {
    let d = q_neg.dim();
    check_dims(generators, d)?;
    if generators.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: generators.len(),
        });
    }
    let rows: Vec<Vec<Rational>> = generators.iter().map(|g| g.coords.clone()).collect();
    let base = det_sign(&rows);
    if base == Sign::Zero {
        return Err(Error::Degenerate("linearly dependent cone generators".into()));
    }
    for i in 0..d {
        let mut replaced = rows.clone();
        replaced[i] = q_neg.coords.clone();
        // Cramer: coefficient i has the sign of det_i / det
        if det_sign(&replaced) != base {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Integer frame used by the enumerators
// ---------------------------------------------------------------------------

/// A point set rescaled to integer coordinates by one positive common
/// denominator, so predicates on indices avoid rational arithmetic.
#[derive(Debug, Clone)]
pub struct Frame {
    dim: usize,
    coords: Vec<Vec<BigInt>>,
    small: Option<Vec<Vec<i64>>>,
}

impl Frame {
    pub fn new(points: &[RationalPoint], dim: usize) -> Frame {
        let l = common_denominator(points.iter().flat_map(|p| p.coords.iter()));
        let coords: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| p.coords.iter().map(|q| q.numer() * (&l / q.denom())).collect())
            .collect();
        // keep a machine-word copy when every coordinate is comfortably small
        let limit = BigInt::from(1i64 << 40);
        let small = coords.iter().all(|row| row.iter().all(|x| x.abs() < limit)).then(|| {
            coords
                .iter()
                .map(|row| row.iter().map(|x| x.to_i64().unwrap()).collect())
                .collect()
        });
        Frame { dim, coords, small }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self, i: usize) -> &[BigInt] {
        &self.coords[i]
    }

    /// Orientation of the d + 1 indexed points.
    pub fn orient(&self, idx: &[usize]) -> Sign {
        debug_assert_eq!(idx.len(), self.dim + 1);
        if let Some(small) = &self.small {
            let base = &small[idx[0]];
            let m: Vec<Vec<i128>> = idx[1..]
                .iter()
                .map(|&i| {
                    small[i]
                        .iter()
                        .zip(base)
                        .map(|(&a, &b)| a as i128 - b as i128)
                        .collect()
                })
                .collect();
            if let Some(s) = det_sign_i128(m) {
                return Sign::from_i8(s);
            }
        }
        let base = &self.coords[idx[0]];
        let m: Vec<Vec<BigInt>> = idx[1..]
            .iter()
            .map(|&i| self.coords[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        Sign::from_i8(det_sign_big(m))
    }

    /// Strict containment of point `p` in the simplex `simplex` (d + 1 indices).
    pub fn simplex_contains(&self, simplex: &[usize], p: usize) -> Result<bool> {
        let base = self.orient(simplex);
        if base == Sign::Zero {
            return Err(Error::Degenerate("simplex vertices are affinely dependent".into()));
        }
        let mut idx = simplex.to_vec();
        let mut inside = true;
        for i in 0..simplex.len() {
            idx[i] = p;
            let s = self.orient(&idx);
            idx[i] = simplex[i];
            if s == Sign::Zero {
                return Err(Error::Degenerate(
                    "query point on the affine hull of a simplex facet".into(),
                ));
            }
            if s != base {
                inside = false;
            }
        }
        Ok(inside)
    }

    pub fn affinely_independent(&self, idx: &[usize]) -> bool {
        if idx.len() <= 1 {
            return true;
        }
        if idx.len() == self.dim + 1 {
            return self.orient(idx) != Sign::Zero;
        }
        let base = &self.coords[idx[0]];
        let m: Vec<Vec<BigInt>> = idx[1..]
            .iter()
            .map(|&i| self.coords[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        rank_int(m) == idx.len() - 1
    }

    /// Every subset of at most d + 1 points is affinely independent.
    pub fn in_general_position(&self) -> bool {
        let n = self.len();
        if n <= 1 {
            return true;
        }
        if n <= self.dim + 1 {
            let idx: Vec<usize> = (0..n).collect();
            return self.affinely_independent(&idx);
        }
        // dependence of a smaller subset makes every (d+1)-superset dependent
        let mut ok = true;
        for_each_combination(n, self.dim + 1, |c| {
            if self.orient(c) == Sign::Zero {
                ok = false;
            }
            ok
        });
        ok
    }

    /// First affinely dependent (d+1)-subset, if any.
    pub fn find_dependent_subset(&self) -> Option<Vec<usize>> {
        let n = self.len();
        if n <= self.dim + 1 {
            let idx: Vec<usize> = (0..n).collect();
            return (!self.affinely_independent(&idx)).then_some(idx);
        }
        let mut found = None;
        for_each_combination(n, self.dim + 1, |c| {
            if self.orient(c) == Sign::Zero {
                found = Some(c.to_vec());
                false
            } else {
                true
            }
        });
        found
    }
}

/// Calls `f` on every k-subset of `0..n` in lexicographic order until it
/// returns false.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        if !f(&c) {
            return;
        }
        let mut i = k;
        while i > 0 && c[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        c[i - 1] += 1;
        for j in i..k {
            c[j] = c[j - 1] + 1;
        }
    }
}
