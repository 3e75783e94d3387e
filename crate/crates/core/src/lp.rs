//! Exact feasibility of `A x = b, x >= 0` by a phase-1 simplex method.
//!
//! The tableau is kept fraction-free: all entries are integers and the true
//! tableau is `T / D` for a single positive denominator `D` (the last pivot).
//! A pivot on `(r, c)` replaces every row `i != r` by
//! `(T[r][c] * T[i][j] - T[i][c] * T[r][j]) / D`, which is an exact division.
//! Entering and leaving variables follow Bland's smallest-index rule, so the
//! method terminates. Arithmetic runs in checked `i128` and restarts in
//! `BigInt` on overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::geometry::RationalPoint;
use crate::rational::Rational;

trait LpInt: Clone + std::fmt::Debug {
    fn lp_zero() -> Self;
    fn lp_one() -> Self;
    fn sign(&self) -> i8;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Self;
    fn to_big(&self) -> BigInt;
}

impl LpInt for i128 {
    fn lp_zero() -> Self {
        0
    }
    fn lp_one() -> Self {
        1
    }
    fn sign(&self) -> i8 {
        self.signum() as i8
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert_eq!(self % o, 0);
        self / o
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl LpInt for BigInt {
    fn lp_zero() -> Self {
        Zero::zero()
    }
    fn lp_one() -> Self {
        BigInt::from(1)
    }
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert!(self.is_multiple_of(o));
        self / o
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Overflow;

/// A basic feasible solution, or `None` when the system is infeasible.
fn phase_one<I: LpInt>(a: &[Vec<I>], b: &[I]) -> Result<Option<Vec<Rational>>, Overflow> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let width = n + m + 1;
    let rhs = n + m;
    // rows 0..m: constraints, row m: phase-1 reduced costs
    let mut t: Vec<Vec<I>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i].sign() < 0;
        let mut row = Vec::with_capacity(width);
        for j in 0..n {
            row.push(if flip {
                a[i][j].neg().ok_or(Overflow)?
            } else {
                a[i][j].clone()
            });
        }
        for j in 0..m {
            row.push(if i == j { I::lp_one() } else { I::lp_zero() });
        }
        row.push(if flip {
            b[i].neg().ok_or(Overflow)?
        } else {
            b[i].clone()
        });
        t.push(row);
    }
    let mut cost = vec![I::lp_zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] = cost[j].sub(&row[j]).ok_or(Overflow)?;
        }
        cost[rhs] = cost[rhs].sub(&row[rhs]).ok_or(Overflow)?;
    }
    t.push(cost);
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut denom = I::lp_one();

    // Bland: smallest index with negative reduced cost
    while let Some(enter) = (0..n + m).find(|&j| t[m][j].sign() < 0) {
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if t[i][enter].sign() <= 0 {
                continue;
            }
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    // compare t[i][rhs]/t[i][enter] with t[l][rhs]/t[l][enter]
                    let lhs = t[i][rhs].mul(&t[l][enter]).ok_or(Overflow)?;
                    let rhs_v = t[l][rhs].mul(&t[i][enter]).ok_or(Overflow)?;
                    let cmp = lhs.sub(&rhs_v).ok_or(Overflow)?.sign();
                    if cmp < 0 || (cmp == 0 && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        // phase-1 objective is bounded below by zero
        let r = leave.expect("phase-1 problem cannot be unbounded");
        let pivot = t[r][enter].clone();
        for i in 0..=m {
            if i == r {
                continue;
            }
            let factor = t[i][enter].clone();
            for j in 0..width {
                let x = pivot.mul(&t[i][j]).ok_or(Overflow)?;
                let y = factor.mul(&t[r][j]).ok_or(Overflow)?;
                t[i][j] = x.sub(&y).ok_or(Overflow)?.div_exact(&denom);
            }
        }
        denom = pivot;
        basis[r] = enter;
    }

    if t[m][rhs].sign() != 0 {
        return Ok(None);
    }
    let d = denom.to_big();
    let mut x = vec![Rational::zero(); n];
    for (i, &v) in basis.iter().enumerate() {
        if v < n {
            x[v] = Rational::new(t[i][rhs].to_big(), d.clone());
        }
    }
    Ok(Some(x))
}

/// Solves `A x = b, x >= 0` exactly; returns a basic feasible solution.
pub fn feasible_point(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<Rational>> {
    let small_a: Option<Vec<Vec<i128>>> = a.iter().map(|row| row.iter().map(|x| x.to_i128()).collect()).collect();
    let small_b: Option<Vec<i128>> = b.iter().map(|x| x.to_i128()).collect();
    if let (Some(sa), Some(sb)) = (small_a, small_b) {
        if let Ok(res) = phase_one(&sa, &sb) {
            return res;
        }
    }
    match phase_one(a, b) {
        Ok(res) => res,
        Err(Overflow) => unreachable!("BigInt arithmetic does not overflow"),
    }
}

pub fn is_feasible(a: &[Vec<BigInt>], b: &[BigInt]) -> bool {
    feasible_point(a, b).is_some()
}

/// Common-point system for a family of point blocks.
///
/// Variables are barycentric weights `w[j][x] >= 0`, one per block member.
/// Constraints: the weights of every block sum to one, and every block's
/// weighted point equals that of the last block. The system is feasible iff
/// the convex hulls of all blocks share a point.
#[derive(Debug, Clone)]
pub struct FeasibilityProblem {
    pub blocks: Vec<Vec<usize>>,
    a: Vec<Vec<BigInt>>,
    b: Vec<BigInt>,
}

impl FeasibilityProblem {
    /// `coords(i)` returns integer coordinates of point `i`; any common
    /// positive scaling and translation of all points leaves feasibility intact.
    pub fn new<'a>(blocks: &[Vec<usize>], dim: usize, coords: impl Fn(usize) -> &'a [BigInt]) -> Self {
        let n: usize = blocks.iter().map(|b| b.len()).sum();
        let m = blocks.len();
        let origin: Vec<BigInt> = blocks
            .iter()
            .flatten()
            .next()
            .map(|&i| coords(i).to_vec())
            .unwrap_or_else(|| vec![BigInt::zero(); dim]);
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut offsets = Vec::with_capacity(m);
        let mut off = 0;
        for blk in blocks {
            offsets.push(off);
            off += blk.len();
        }
        for j in 0..m.saturating_sub(1) {
            for t in 0..dim {
                let mut row = vec![BigInt::zero(); n];
                for (s, &x) in blocks[j].iter().enumerate() {
                    row[offsets[j] + s] = &coords(x)[t] - &origin[t];
                }
                for (s, &y) in blocks[m - 1].iter().enumerate() {
                    row[offsets[m - 1] + s] = &origin[t] - &coords(y)[t];
                }
                a.push(row);
                b.push(BigInt::zero());
            }
        }
        for j in 0..m {
            let mut row = vec![BigInt::zero(); n];
            for s in 0..blocks[j].len() {
                row[offsets[j] + s] = BigInt::from(1);
            }
            a.push(row);
            b.push(BigInt::from(1));
        }
        FeasibilityProblem {
            blocks: blocks.to_vec(),
            a,
            b,
        }
    }

    pub fn is_feasible(&self) -> bool {
        if self.blocks.iter().any(|b| b.is_empty()) {
            return false;
        }
        is_feasible(&self.a, &self.b)
    }

    /// Barycentric weights of a common point, block by block.
    pub fn solve(&self) -> Option<Vec<Vec<Rational>>> {
        if self.blocks.iter().any(|b| b.is_empty()) {
            return None;
        }
        let x = feasible_point(&self.a, &self.b)?;
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut it = x.into_iter();
        for blk in &self.blocks {
            out.push(it.by_ref().take(blk.len()).collect());
        }
        Some(out)
    }
}

/// A point in the intersection of the hulls, from the first block's weights.
pub fn witness_point(points: &[RationalPoint], block: &[usize], weights: &[Rational]) -> RationalPoint {
    let d = points[block[0]].dim();
    let mut c = vec![Rational::zero(); d];
    for (&i, w) in block.iter().zip(weights) {
        for (acc, x) in c.iter_mut().zip(&points[i].coords) {
            *acc += w * x;
        }
    }
    RationalPoint::new(c)
}
