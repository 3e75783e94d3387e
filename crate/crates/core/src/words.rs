//! The planar sweep encoding of Birch instances as colored words.
//!
//! A line through p is rotated counter-clockwise by half a turn. Each point
//! is hit once; it contributes the letter `+` when it lies in the chosen
//! half-plane and `-` otherwise. The chosen half-plane is the one to the left
//! of the starting direction `s` (or its complement). A triangle contains p
//! exactly when its three letters, in hitting order, read `+-+` or `-+-`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::config::{ColoredConfiguration, Mode};
use crate::error::{Error, Result};
use crate::generators::RETRY_BUDGET;
use crate::geometry::RationalPoint;
use crate::partition::Partition;
use crate::rational::int;
use crate::rng::SeedStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub plus: bool,
    pub color: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredWord {
    letters: Vec<Letter>,
}

impl ColoredWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        ColoredWord { letters }
    }

    pub fn from_parts(signs: &[bool], colors: &[u8]) -> Self {
        assert_eq!(signs.len(), colors.len(), "signs and colors differ in length");
        ColoredWord {
            letters: signs
                .iter()
                .zip(colors)
                .map(|(&plus, &color)| Letter { plus, color })
                .collect(),
        }
    }

    /// Parses `([+-][0-9])+`. In strict mode the length must be a multiple
    /// of 3 and the colors 0, 1, 2 must each appear a third of the time.
    pub fn parse(s: &str, strict: bool) -> Result<Self> {
        let s = s.trim();
        let chars: Vec<char> = s.chars().collect();
        if chars.is_empty() || !chars.len().is_multiple_of(2) {
            return Err(word_error(s, "expected sign/color pairs"));
        }
        let mut letters = Vec::with_capacity(chars.len() / 2);
        for pair in chars.chunks(2) {
            let plus = match pair[0] {
                '+' => true,
                '-' => false,
                c => return Err(word_error(s, &format!("bad sign {c:?}"))),
            };
            let color = pair[1]
                .to_digit(10)
                .ok_or_else(|| word_error(s, &format!("bad color {:?}", pair[1])))? as u8;
            letters.push(Letter { plus, color });
        }
        let w = ColoredWord { letters };
        if strict {
            w.check_balanced()?;
        }
        Ok(w)
    }

    pub fn check_balanced(&self) -> Result<()> {
        if !self.letters.len().is_multiple_of(3) {
            return Err(Error::InvalidArgument(format!(
                "word length {} is not a multiple of 3",
                self.letters.len()
            )));
        }
        let k = self.k();
        for c in 0..3u8 {
            let n = self.letters.iter().filter(|l| l.color == c).count();
            if n != k {
                return Err(Error::InvalidArgument(format!(
                    "color {c} appears {n} times, expected {k}"
                )));
            }
        }
        Ok(())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn k(&self) -> usize {
        self.letters.len() / 3
    }

    pub fn flipped(&self) -> Self {
        ColoredWord {
            letters: self
                .letters
                .iter()
                .map(|l| Letter {
                    plus: !l.plus,
                    color: l.color,
                })
                .collect(),
        }
    }

    /// The word with its first letter `+`.
    pub fn canonical(&self) -> Self {
        match self.letters.first() {
            Some(l) if !l.plus => self.flipped(),
            _ => self.clone(),
        }
    }
}

fn word_error(s: &str, msg: &str) -> Error {
    Error::InvalidArgument(format!("invalid word {s:?}: {msg}"))
}

impl fmt::Display for ColoredWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}{}", if l.plus { '+' } else { '-' }, l.color)?;
        }
        Ok(())
    }
}

impl FromStr for ColoredWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ColoredWord::parse(s, false)
    }
}

struct WordSearch<'a> {
    word: &'a [Letter],
    emit: bool,
    stack: Vec<u64>,
    found: Vec<Partition>,
    count: u64,
}

impl WordSearch<'_> {
    fn run(&mut self, used: u64) {
        let n = self.word.len();
        let Some(i) = (0..n).find(|&i| used & (1 << i) == 0) else {
            self.count += 1;
            if self.emit {
                self.found.push(Partition::from_masks(&self.stack));
            }
            return;
        };
        let a = self.word[i];
        for j in i + 1..n {
            let b = self.word[j];
            if used & (1 << j) != 0 || b.plus == a.plus || b.color == a.color {
                continue;
            }
            for l in j + 1..n {
                let c = self.word[l];
                if used & (1 << l) != 0 || c.plus != a.plus || c.color == a.color || c.color == b.color {
                    continue;
                }
                let m = (1 << i) | (1 << j) | (1 << l);
                self.stack.push(m);
                self.run(used | m);
                self.stack.pop();
            }
        }
    }
}

fn search_word(word: &ColoredWord, emit: bool) -> WordSearch<'_> {
    assert!(word.len() <= 64, "word too long");
    let mut s = WordSearch {
        word: &word.letters,
        emit,
        stack: Vec::new(),
        found: Vec::new(),
        count: 0,
    };
    if word.len().is_multiple_of(3) {
        s.run(0);
    }
    s
}

/// Partitions of the positions into rainbow triples reading `+-+` or `-+-`.
pub fn count_word_partitions(word: &ColoredWord) -> u64 {
    search_word(word, false).count
}

/// The partitions counted by [`count_word_partitions`], by position.
pub fn word_partitions(word: &ColoredWord) -> Vec<Partition> {
    search_word(word, true).found
}

type Vec2 = [BigInt; 2];

fn cross(a: &Vec2, b: &Vec2) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn dot(a: &Vec2, b: &Vec2) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1]
}

fn neg(a: &Vec2) -> Vec2 {
    [-&a[0], -&a[1]]
}

/// Offsets of the points from the query point, on a common integer scale.
fn offsets(config: &ColoredConfiguration) -> Result<Vec<Vec2>> {
    if config.dim() != 2 {
        return Err(Error::InvalidArgument(format!(
            "the sweep encoding is planar, got dimension {}",
            config.dim()
        )));
    }
    if !matches!(config.mode(), Mode::Birch { .. }) {
        return Err(Error::InvalidArgument(
            "the sweep encoding needs a birch configuration".into(),
        ));
    }
    let frame = config.frame();
    let n = config.len();
    let p = frame.coords(n);
    Ok((0..n)
        .map(|i| {
            let x = frame.coords(i);
            [&x[0] - &p[0], &x[1] - &p[1]]
        })
        .collect())
}

/// Sweep from direction `start`, `+` meaning left of `start` when
/// `plus_left` holds and right of it otherwise.
pub fn sweep_encode_from(config: &ColoredConfiguration, start: [i64; 2], plus_left: bool) -> Result<ColoredWord> {
    let s = [BigInt::from(start[0]), BigInt::from(start[1])];
    if s[0].sign() == num_bigint::Sign::NoSign && s[1].sign() == num_bigint::Sign::NoSign {
        return Err(Error::InvalidArgument("start direction must be nonzero".into()));
    }
    sweep(config, &offsets(config)?, &s, Some(plus_left))
}

/// Canonical sweep: the start direction lies in the widest angular gap
/// between consecutive point directions (the first such gap on ties,
/// counting counter-clockwise from the positive x-axis), and `+` is the
/// side of the first point hit.
pub fn sweep_encode(config: &ColoredConfiguration) -> Result<ColoredWord> {
    let w = offsets(config)?;
    // directions modulo a half turn, in [0, pi)
    let mut u: Vec<Vec2> = w
        .iter()
        .map(|v| {
            if v[1].is_negative() || (v[1].sign() == num_bigint::Sign::NoSign && v[0].is_negative()) {
                neg(v)
            } else {
                v.clone()
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..u.len()).collect();
    let mut degenerate = false;
    order.sort_by(|&a, &b| {
        let c = cross(&u[a], &u[b]);
        if c.sign() == num_bigint::Sign::NoSign && a != b {
            degenerate = true;
        }
        BigInt::from(0).cmp(&c)
    });
    if degenerate {
        return Err(Error::Degenerate(
            "two points are collinear with the query point".into(),
        ));
    }
    let m = order.len();
    if m < 2 {
        return Err(Error::InvalidArgument(
            "the sweep encoding needs at least two points".into(),
        ));
    }
    u = order.iter().map(|&i| u[i].clone()).collect();
    // gap g runs from u[g] to u[g+1], the last one wraps to -u[0]
    let gap = |g: usize| -> (Vec2, Vec2) {
        let a = u[g].clone();
        let b = if g + 1 < m { u[g + 1].clone() } else { neg(&u[0]) };
        (a, b)
    };
    let mut best = 0;
    let (a0, b0) = gap(0);
    let (mut bc, mut bd) = (cross(&a0, &b0), dot(&a0, &b0));
    for g in 1..m {
        let (a, b) = gap(g);
        let (c, d) = (cross(&a, &b), dot(&a, &b));
        // angle(c, d) > angle(bc, bd) with both crosses positive
        if &bd * &c > &d * &bc {
            best = g;
            bc = c;
            bd = d;
        }
    }
    let (a, b) = gap(best);
    let s = [&a[0] + &b[0], &a[1] + &b[1]];
    sweep(config, &w, &s, None)
}

/// `plus_left = None` puts `+` on the side of the first point hit.
fn sweep(config: &ColoredConfiguration, w: &[Vec2], s: &Vec2, plus_left: Option<bool>) -> Result<ColoredWord> {
    let mut left = Vec::with_capacity(w.len());
    let mut dirs = Vec::with_capacity(w.len());
    for v in w {
        let c = cross(s, v);
        if c.sign() == num_bigint::Sign::NoSign {
            return Err(Error::Degenerate("the starting line passes through a point".into()));
        }
        let is_left = c.is_positive();
        dirs.push(if is_left { v.clone() } else { neg(v) });
        left.push(is_left);
    }
    let mut order: Vec<usize> = (0..w.len()).collect();
    let mut degenerate = false;
    order.sort_by(|&a, &b| {
        let c = cross(&dirs[a], &dirs[b]);
        if c.sign() == num_bigint::Sign::NoSign && a != b {
            degenerate = true;
        }
        BigInt::from(0).cmp(&c)
    });
    if degenerate {
        return Err(Error::Degenerate(
            "two points are collinear with the query point".into(),
        ));
    }
    let plus_left = plus_left.unwrap_or_else(|| order.first().is_none_or(|&i| left[i]));
    let colors = config.colors();
    Ok(ColoredWord {
        letters: order
            .iter()
            .map(|&i| Letter {
                plus: left[i] == plus_left,
                color: colors[i] as u8,
            })
            .collect(),
    })
}

/// A planar Birch configuration with query point at the origin whose
/// canonical sweep reads `word` (up to a global sign flip). Letter i becomes
/// point i at `rho_i * v_i` for `+` and `-rho_i * v_i` for `-`, where
/// `v_i = (L-1-2i, L)` and the radii `rho_i` are drawn from the seed.
pub fn realize_word(word: &ColoredWord, seed: u64) -> Result<ColoredConfiguration> {
    word.check_balanced()?;
    let l = word.len() as i64;
    let k = word.k();
    let colors: Vec<usize> = word.letters.iter().map(|x| x.color as usize).collect();
    let root = SeedStream::new(seed);
    for attempt in 0..RETRY_BUDGET {
        let mut rng = root.split(attempt as u64);
        let points = word
            .letters
            .iter()
            .enumerate()
            .map(|(i, letter)| {
                let rho = rng.range_i64(8, 64);
                let sign = if letter.plus { rho } else { -rho };
                RationalPoint::new(vec![int(sign * (l - 1 - 2 * i as i64)), int(sign * l)])
            })
            .collect();
        match ColoredConfiguration::new(
            2,
            points,
            colors.clone(),
            Mode::Birch { k },
            Some(RationalPoint::origin(2)),
        ) {
            Ok(c) => return Ok(c),
            Err(Error::GeneralPosition(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GeneralPositionBudget(RETRY_BUDGET))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birch::count_colored_birch;

    fn w(s: &str) -> ColoredWord {
        ColoredWord::parse(s, false).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let x = w("+0-1+2");
        assert_eq!(x.to_string(), "+0-1+2");
        assert_eq!(x.k(), 1);
        assert!(ColoredWord::parse("+0-1", true).is_err());
        assert!(ColoredWord::parse("+0-0+2", true).is_err());
        assert!(ColoredWord::parse("+0-0+2", false).is_ok());
        assert!(ColoredWord::parse("*0-1+2", false).is_err());
        assert!(ColoredWord::parse("+0-1+", false).is_err());
    }

    #[test]
    fn alternating_word_has_three_partitions() {
        let x = w("+0-1+2-0+1-2+0-1+2");
        let parts: Vec<String> = word_partitions(&x).iter().map(|p| p.to_string()).collect();
        assert_eq!(
            parts,
            vec![
                "{0,1,2}|{3,4,5}|{6,7,8}",
                "{0,1,8}|{2,3,4}|{5,6,7}",
                "{0,7,8}|{1,2,3}|{4,5,6}"
            ]
        );
        assert_eq!(count_word_partitions(&x), 3);
        assert_eq!(count_word_partitions(&x.flipped()), 3);
    }

    #[test]
    fn small_words() {
        assert_eq!(count_word_partitions(&w("+0+1+2")), 0);
        assert_eq!(count_word_partitions(&w("+0-1+2")), 1);
        assert_eq!(count_word_partitions(&w("-0+1-2")), 1);
        assert_eq!(count_word_partitions(&w("+0-0+2")), 0);
    }

    #[test]
    fn realized_words_round_trip() {
        for s in ["+0-1+2", "-0+1-2", "+0+1+2", "+0-1+2-0+1-2+0-1+2", "+2+1-0-2-1+0"] {
            let x = w(s);
            let c = realize_word(&x, 3).unwrap();
            assert_eq!(sweep_encode(&c).unwrap(), x.canonical(), "{s}");
            assert_eq!(
                count_colored_birch(&c, false).unwrap().count,
                count_word_partitions(&x),
                "{s}"
            );
        }
    }

    #[test]
    fn triangle_around_the_query_alternates() {
        let c = ColoredConfiguration::new(
            2,
            vec![
                RationalPoint::from_ints(&[5, -1]),
                RationalPoint::from_ints(&[-2, 4]),
                RationalPoint::from_ints(&[-3, -3]),
            ],
            vec![0, 1, 2],
            Mode::Birch { k: 1 },
            Some(RationalPoint::origin(2)),
        )
        .unwrap();
        let word = sweep_encode(&c).unwrap();
        let signs: String = word.letters().iter().map(|l| if l.plus { '+' } else { '-' }).collect();
        assert_eq!(signs, "+-+");
        // any admissible start gives an alternating pattern
        for (start, side) in [([1, 0], true), ([0, 1], false), ([1, 3], true), ([-2, 1], false)] {
            let word = sweep_encode_from(&c, start, side).unwrap();
            assert_eq!(count_word_partitions(&word), 1);
        }
    }

    #[test]
    fn points_in_a_half_plane_give_a_constant_word() {
        let c = ColoredConfiguration::new(
            2,
            vec![
                RationalPoint::from_ints(&[5, 1]),
                RationalPoint::from_ints(&[-2, 4]),
                RationalPoint::from_ints(&[1, 3]),
            ],
            vec![0, 1, 2],
            Mode::Birch { k: 1 },
            Some(RationalPoint::origin(2)),
        )
        .unwrap();
        let word = sweep_encode(&c).unwrap();
        assert!(word.letters().iter().all(|l| l.plus));
    }

    #[test]
    fn start_line_through_a_point_is_rejected() {
        let c = realize_word(&w("+0-1+2"), 0).unwrap();
        let v = c.points()[0].coords.clone();
        let x: i64 = v[0].to_integer().try_into().unwrap();
        let y: i64 = v[1].to_integer().try_into().unwrap();
        assert!(sweep_encode_from(&c, [x, y], true).is_err());
    }
}
