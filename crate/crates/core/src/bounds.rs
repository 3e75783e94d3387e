//! Parity and lower-bound checks for Birch and Tverberg counts.
//!
//! Birch counts `c = cBP_k(X)` with d+1 colors of k points each:
//!
//! * (i) c is even for k >= d+2;
//! * (ii) d = 1: c > 0 implies c >= ceil(k/2)! floor(k/2)!;
//! * (iii) d = 2, k >= 6: c > 0 implies c >= 8 * 3^(k-6);
//! * (iv) d >= 2, k >= d+2: c > 0 implies c >= 2^(k-d-1).
//!
//! Tverberg counts `T` follow the same pattern with k replaced by r-1 in
//! (ii), by r-2 in (iii) and (iv) read 2^(r-2d-1) for r >= 2d+2; evenness
//! holds for r >= 2d+2. For prime r the count is at least 1 and every
//! clause holds outright. For other r the clauses need T > 0.

use serde::{Deserialize, Serialize};

use crate::partition::CountReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    /// "i" to "iv".
    pub clause: String,
    pub description: String,
    /// Side conditions hold for these parameters.
    pub applies: bool,
    /// Holds unconditionally (prime r); otherwise only when the count is
    /// positive.
    pub unconditional: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub count: u64,
    pub clauses: Vec<Clause>,
    /// Clause (i) holds or does not apply.
    pub even_ok: bool,
    /// Every applicable lower bound holds.
    pub bound_ok: bool,
    /// Prime r guarantees at least one Tverberg partition; `None` for Birch.
    pub existence_guaranteed: Option<bool>,
    /// The count is 0 although existence is guaranteed.
    pub existence_violated: bool,
}

impl Verdict {
    pub fn ok(&self) -> bool {
        self.even_ok && self.bound_ok && !self.existence_violated
    }
}

pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

fn pow(base: u128, exp: u64) -> u128 {
    base.saturating_pow(exp.min(u32::MAX as u64) as u32)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

/// The lower bounds on a positive Birch count: `(clause, description, bound)`
/// for every clause whose side conditions hold.
fn birch_bounds(d: usize, k: usize) -> Vec<(&'static str, String, u128)> {
    let (d, k) = (d as u64, k as u64);
    let mut out = Vec::new();
    if d == 1 {
        out.push((
            "ii",
            format!(
                ">= ceil(k/2)! floor(k/2)! = {}",
                factorial(k.div_ceil(2)) * factorial(k / 2)
            ),
            factorial(k.div_ceil(2)) * factorial(k / 2),
        ));
    }
    if d == 2 && k >= 6 {
        out.push((
            "iii",
            format!(">= 8 * 3^{} = {}", k - 6, 8 * pow(3, k - 6)),
            8 * pow(3, k - 6),
        ));
    }
    if d >= 2 && k >= d + 2 {
        out.push((
            "iv",
            format!(">= 2^{} = {}", k - d - 1, pow(2, k - d - 1)),
            pow(2, k - d - 1),
        ));
    }
    out
}

fn tverberg_bounds(d: usize, r: usize) -> Vec<(&'static str, String, u128)> {
    let (d, r) = (d as u64, r as u64);
    let mut out = Vec::new();
    if d == 1 {
        let m = r - 1;
        let b = factorial(m.div_ceil(2)) * factorial(m / 2);
        out.push(("ii", format!(">= ceil((r-1)/2)! floor((r-1)/2)! = {b}"), b));
    }
    if d == 2 && r >= 8 {
        out.push((
            "iii",
            format!(">= 8 * 3^{} = {}", r - 8, 8 * pow(3, r - 8)),
            8 * pow(3, r - 8),
        ));
    }
    if d >= 2 && r >= 2 * d + 2 {
        let e = r - 2 * d - 1;
        out.push(("iv", format!(">= 2^{e} = {}", pow(2, e)), pow(2, e)));
    }
    out
}

fn verdict(count: u64, even_applies: bool, unconditional: bool, bounds: Vec<(&'static str, String, u128)>) -> Verdict {
    let mut clauses = vec![Clause {
        clause: "i".into(),
        description: "even".into(),
        applies: even_applies,
        unconditional,
        passed: !even_applies || count.is_multiple_of(2),
    }];
    for (name, description, b) in bounds {
        clauses.push(Clause {
            clause: name.into(),
            description,
            applies: true,
            unconditional,
            passed: (!unconditional && count == 0) || count as u128 >= b,
        });
    }
    let even_ok = clauses[0].passed;
    let bound_ok = clauses[1..].iter().all(|c| c.passed);
    Verdict {
        count,
        clauses,
        even_ok,
        bound_ok,
        existence_guaranteed: None,
        existence_violated: false,
    }
}

pub fn check_birch_count(count: u64, d: usize, k: usize) -> Verdict {
    verdict(count, k >= d + 2, false, birch_bounds(d, k))
}

pub fn check_tverberg_count(count: u64, d: usize, r: usize) -> Verdict {
    let prime = is_prime(r as u64);
    let mut v = verdict(count, r >= 2 * d + 2, prime, tverberg_bounds(d, r));
    v.existence_guaranteed = Some(prime);
    v.existence_violated = prime && count == 0;
    v
}

pub fn check_birch_bounds(report: &CountReport, d: usize, k: usize) -> Verdict {
    check_birch_count(report.count, d, k)
}

pub fn check_tverberg_bounds(report: &CountReport, d: usize, r: usize) -> Verdict {
    check_tverberg_count(report.count, d, r)
}

/// Smallest positive Birch count allowed by the theorem (1 when no clause
/// applies).
pub fn birch_lower_bound(d: usize, k: usize) -> u128 {
    birch_bounds(d, k).iter().map(|b| b.2).max().unwrap_or(1).max(1)
}

/// The Tverberg lower bound and whether it is conditional on T > 0 (r not
/// prime), as printed in brackets in the table.
pub fn tverberg_lower_bound(d: usize, r: usize) -> (u128, bool) {
    let b = tverberg_bounds(d, r).iter().map(|b| b.2).max().unwrap_or(1).max(1);
    (b, !is_prime(r as u64))
}

pub fn format_tverberg_bound(d: usize, r: usize) -> String {
    match tverberg_lower_bound(d, r) {
        (b, true) => format!("({b})"),
        (b, false) => b.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn birch_examples() {
        let v = check_birch_count(2, 2, 4);
        assert!(v.clauses[0].applies && v.even_ok);
        assert_eq!(v.clauses.len(), 2);
        assert_eq!(v.clauses[1].clause, "iv");
        assert!(v.bound_ok);
        let v = check_birch_count(3, 2, 3);
        assert!(!v.clauses[0].applies);
        assert!(v.ok());
        let v = check_birch_count(1, 1, 3);
        assert!(!v.bound_ok);
        assert!(check_birch_count(2, 1, 3).bound_ok);
        // zero is vacuous for the lower bounds but still even
        assert!(check_birch_count(0, 2, 6).ok());
        assert!(!check_birch_count(7, 2, 6).ok());
        assert!(!check_birch_count(6, 2, 6).bound_ok);
        assert!(check_birch_count(8, 2, 6).ok());
    }

    #[test]
    fn tverberg_examples() {
        let v = check_tverberg_count(80, 2, 6);
        assert!(v.clauses[0].applies && !v.clauses[0].unconditional);
        assert!(v.ok());
        let v = check_tverberg_count(12, 2, 5);
        assert!(!v.clauses[0].applies);
        assert_eq!(v.clauses.len(), 1);
        assert_eq!(v.existence_guaranteed, Some(true));
        assert!(v.ok());
        assert!(!check_tverberg_count(0, 2, 5).ok());
        assert!(check_tverberg_count(0, 2, 6).ok());
        assert!(!check_tverberg_count(1, 1, 4).ok());
        assert!(check_tverberg_count(2, 1, 4).ok());
    }

    #[test]
    fn bound_column() {
        let col: Vec<String> = (2..=8).map(|r| format_tverberg_bound(2, r)).collect();
        assert_eq!(col, vec!["1", "1", "(1)", "1", "(2)", "4", "(8)"]);
    }

    #[test]
    fn small_primes() {
        let p: Vec<u64> = (0..20).filter(|&n| is_prime(n)).collect();
        assert_eq!(p, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}
