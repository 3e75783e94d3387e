//! Colored point configurations and their text file format.
//!
//! ```text
//! tvconfig 1
//! dim 2 mode birch 3
//! query 0/1 0/1
//! point 0 1/2 -3/4
//! ...
//! ```
//!
//! `#` starts a comment. Rationals are written `num/den` in lowest terms; the
//! reader also accepts bare integers. Color ids are `0..=d` in birch mode and
//! `0..=d+1` in tverberg mode, where color `d+1` is the singleton class.

use std::fmt;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{Frame, RationalPoint};
use crate::rational::{format_rational, parse_rational};

pub const MAX_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// k(d+1) points, d+1 colors of k points each, plus a query point.
    Birch { k: usize },
    /// (d+1)(r-1)+1 points, d+1 colors of r-1 points and one singleton color.
    Tverberg { r: usize },
}

impl Mode {
    pub fn point_count(self, d: usize) -> usize {
        match self {
            Mode::Birch { k } => k * (d + 1),
            Mode::Tverberg { r } => (d + 1) * (r - 1) + 1,
        }
    }

    pub fn color_count(self, d: usize) -> usize {
        match self {
            Mode::Birch { .. } => d + 1,
            Mode::Tverberg { .. } => d + 2,
        }
    }

    pub fn class_sizes(self, d: usize) -> Vec<usize> {
        match self {
            Mode::Birch { k } => vec![k; d + 1],
            Mode::Tverberg { r } => {
                let mut v = vec![r - 1; d + 1];
                v.push(1);
                v
            }
        }
    }

    pub fn validate(self) -> Result<()> {
        match self {
            Mode::Birch { k: 0 } => Err(Error::InvalidConfig("birch mode needs k >= 1".into())),
            Mode::Tverberg { r } if r < 2 => Err(Error::InvalidConfig("tverberg mode needs r >= 2".into())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Birch { k } => write!(f, "birch {k}"),
            Mode::Tverberg { r } => write!(f, "tverberg {r}"),
        }
    }
}

/// SHA-256 of the canonical serialization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint(pub String);

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An immutable, validated colored point configuration.
///
/// Construction checks the point count, the color class sizes of the mode and
/// general position of the relevant point set (X together with the query point
/// in birch mode, X alone in tverberg mode).
#[derive(Debug, Clone)]
pub struct ColoredConfiguration {
    dim: usize,
    points: Vec<RationalPoint>,
    colors: Vec<usize>,
    mode: Mode,
    query: Option<RationalPoint>,
    frame: Frame,
}

impl PartialEq for ColoredConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.points == other.points
            && self.colors == other.colors
            && self.mode == other.mode
            && self.query == other.query
    }
}

impl ColoredConfiguration {
    pub fn new(
        dim: usize,
        points: Vec<RationalPoint>,
        colors: Vec<usize>,
        mode: Mode,
        query: Option<RationalPoint>,
    ) -> Result<Self> {
        let frame = Self::validate_shape(dim, &points, &colors, mode, query.as_ref())?;
        if let Some(bad) = frame.find_dependent_subset() {
            let n = points.len();
            let names: Vec<String> = bad
                .iter()
                .map(|&i| if i == n { "query".to_string() } else { i.to_string() })
                .collect();
            return Err(Error::GeneralPosition(format!(
                "points {{{}}} are affinely dependent",
                names.join(",")
            )));
        }
        Ok(ColoredConfiguration {
            dim,
            points,
            colors,
            mode,
            query,
            frame,
        })
    }

    fn validate_shape(
        dim: usize,
        points: &[RationalPoint],
        colors: &[usize],
        mode: Mode,
        query: Option<&RationalPoint>,
    ) -> Result<Frame> {
        if dim == 0 {
            return Err(Error::InvalidConfig("dimension must be at least 1".into()));
        }
        mode.validate()?;
        let expected = mode.point_count(dim);
        if points.len() != expected {
            return Err(Error::InvalidConfig(format!(
                "expected {expected} points for {mode} in dimension {dim}, found {}",
                points.len()
            )));
        }
        if expected > MAX_POINTS {
            return Err(Error::TooManyPoints(expected));
        }
        if colors.len() != points.len() {
            return Err(Error::InvalidConfig(format!(
                "expected {} colors, found {}",
                points.len(),
                colors.len()
            )));
        }
        for p in points.iter().chain(query) {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        check_class_sizes(colors, &mode.class_sizes(dim))?;
        match (mode, query) {
            (Mode::Birch { .. }, None) => return Err(Error::InvalidConfig("birch mode requires a query point".into())),
            (Mode::Tverberg { .. }, Some(_)) => {
                return Err(Error::InvalidConfig("tverberg mode takes no query point".into()))
            }
            _ => {}
        }
        let mut all = points.to_vec();
        all.extend(query.cloned());
        Ok(Frame::new(&all, dim))
    }

    /// Same geometry, different coloring. General position is inherited.
    pub fn with_colors(&self, colors: Vec<usize>) -> Result<Self> {
        if colors.len() != self.points.len() {
            return Err(Error::InvalidConfig(format!(
                "expected {} colors, found {}",
                self.points.len(),
                colors.len()
            )));
        }
        check_class_sizes(&colors, &self.mode.class_sizes(self.dim))?;
        Ok(ColoredConfiguration { colors, ..self.clone() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn query(&self) -> Option<&RationalPoint> {
        self.query.as_ref()
    }

    /// Integer frame of the points, with the query point (if any) at index `len()`.
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.mode.color_count(self.dim)];
        for &c in &self.colors {
            sizes[c] += 1;
        }
        sizes
    }

    /// Indices of the points of each color.
    pub fn color_classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.mode.color_count(self.dim)];
        for (i, &c) in self.colors.iter().enumerate() {
            classes[c].push(i);
        }
        classes
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("tvconfig 1\n");
        let _ = writeln!(s, "dim {} mode {}", self.dim, self.mode);
        if let Some(q) = &self.query {
            s.push_str("query");
            for c in &q.coords {
                let _ = write!(s, " {}", format_rational(c));
            }
            s.push('\n');
        }
        for (p, c) in self.points.iter().zip(&self.colors) {
            let _ = write!(s, "point {c}");
            for x in &p.coords {
                let _ = write!(s, " {}", format_rational(x));
            }
            s.push('\n');
        }
        s
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let digest = Sha256::digest(self.to_text().as_bytes());
        let mut hex = String::with_capacity(64);
        for b in digest.iter() {
            let _ = write!(hex, "{b:02x}");
        }
        Fingerprint(hex)
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_config(text)
    }
}

pub(crate) fn check_class_sizes(colors: &[usize], sizes: &[usize]) -> Result<()> {
    let mut counts = vec![0usize; sizes.len()];
    for &c in colors {
        if c >= sizes.len() {
            return Err(Error::InvalidConfig(format!(
                "color {c} out of range 0..{}",
                sizes.len() - 1
            )));
        }
        counts[c] += 1;
    }
    for (c, (&have, &want)) in counts.iter().zip(sizes).enumerate() {
        if have != want {
            return Err(Error::InvalidConfig(format!(
                "color class {c} has {have} points, expected {want}"
            )));
        }
    }
    Ok(())
}

pub fn write_config(config: &ColoredConfiguration, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, config.to_text())?;
    Ok(())
}

pub fn read_config(path: impl AsRef<Path>) -> Result<ColoredConfiguration> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token {
                    text: &content[s..i],
                    column: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &content[s..],
            column: s + 1,
        });
    }
    tokens
}

pub fn parse_config(text: &str) -> Result<ColoredConfiguration> {
    let err = |line: usize, column: usize, message: String| Error::Parse { line, column, message };
    let mut header_seen = false;
    let mut dim_mode: Option<(usize, Mode)> = None;
    let mut query: Option<RationalPoint> = None;
    let mut points = Vec::new();
    let mut colors = Vec::new();

    let parse_coords = |tokens: &[Token], line: usize, d: usize, after: usize| -> Result<RationalPoint> {
        let coords = &tokens[after..];
        if coords.len() != d {
            let column = coords.get(d).or(tokens.last()).map_or(1, |t| t.column);
            return Err(err(
                line,
                column,
                format!("expected {d} coordinates, found {}", coords.len()),
            ));
        }
        coords
            .iter()
            .map(|t| parse_rational(t.text).map_err(|m| err(line, t.column, m)))
            .collect::<Result<Vec<_>>>()
            .map(RationalPoint::new)
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let tokens = tokenize(raw);
        let Some(first) = tokens.first() else {
            continue;
        };
        if !header_seen {
            if first.text != "tvconfig" {
                return Err(err(line, first.column, "expected header `tvconfig 1`".into()));
            }
            match tokens.get(1) {
                Some(t) if t.text == "1" && tokens.len() == 2 => {}
                Some(t) => return Err(err(line, t.column, format!("unsupported version {:?}", t.text))),
                None => return Err(err(line, first.column, "missing version".into())),
            }
            header_seen = true;
            continue;
        }
        match first.text {
            "dim" => {
                if dim_mode.is_some() {
                    return Err(err(line, first.column, "duplicate `dim` line".into()));
                }
                let num = |i: usize| -> Result<usize> {
                    let t = tokens
                        .get(i)
                        .ok_or_else(|| err(line, raw.len() + 1, "unexpected end of line".into()))?;
                    t.text
                        .parse()
                        .map_err(|_| err(line, t.column, format!("expected an integer, found {:?}", t.text)))
                };
                let d = num(1)?;
                match tokens.get(2) {
                    Some(t) if t.text == "mode" => {}
                    Some(t) => return Err(err(line, t.column, "expected `mode`".into())),
                    None => return Err(err(line, raw.len() + 1, "expected `mode`".into())),
                }
                let kind = tokens
                    .get(3)
                    .ok_or_else(|| err(line, raw.len() + 1, "expected `birch` or `tverberg`".into()))?;
                let param = num(4)?;
                let mode = match kind.text {
                    "birch" => Mode::Birch { k: param },
                    "tverberg" => Mode::Tverberg { r: param },
                    other => return Err(err(line, kind.column, format!("unknown mode {other:?}"))),
                };
                if let Some(t) = tokens.get(5) {
                    return Err(err(line, t.column, "trailing input".into()));
                }
                dim_mode = Some((d, mode));
            }
            "query" => {
                let (d, _) = dim_mode.ok_or_else(|| err(line, first.column, "`query` before `dim`".into()))?;
                if query.is_some() {
                    return Err(err(line, first.column, "duplicate `query` line".into()));
                }
                query = Some(parse_coords(&tokens, line, d, 1)?);
            }
            "point" => {
                let (d, _) = dim_mode.ok_or_else(|| err(line, first.column, "`point` before `dim`".into()))?;
                let ct = tokens
                    .get(1)
                    .ok_or_else(|| err(line, raw.len() + 1, "missing color".into()))?;
                let color: usize = ct
                    .text
                    .parse()
                    .map_err(|_| err(line, ct.column, format!("invalid color {:?}", ct.text)))?;
                points.push(parse_coords(&tokens, line, d, 2)?);
                colors.push(color);
            }
            other => {
                return Err(err(line, first.column, format!("unknown directive {other:?}")));
            }
        }
    }
    if !header_seen {
        return Err(err(1, 1, "empty configuration file".into()));
    }
    let (d, mode) = dim_mode.ok_or_else(|| err(1, 1, "missing `dim` line".into()))?;
    ColoredConfiguration::new(d, points, colors, mode, query)
}
