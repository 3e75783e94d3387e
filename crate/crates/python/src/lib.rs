//! Python module `tverberg`: configurations, counters, bound checks and the
//! word encoding of tverberg-core.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tverberg_core::bounds::{check_birch_count, check_tverberg_count, Verdict};
use tverberg_core::config::{ColoredConfiguration, Mode};
use tverberg_core::experiments;
use tverberg_core::generators::{self, Symmetry};
use tverberg_core::geometry::{self, RationalPoint};
use tverberg_core::partition::{CountReport, Partition};
use tverberg_core::rational::{format_rational, parse_rational, Rational};
use tverberg_core::tverberg as core_tverberg;
use tverberg_core::{birch, words};

create_exception!(tverberg, TverbergError, PyException);

fn err(e: tverberg_core::Error) -> PyErr {
    TverbergError::new_err(e.to_string())
}

/// Accepts ints, "n/d" strings and objects with integer `numerator` and
/// `denominator` attributes (such as `fractions.Fraction`).
fn to_rational(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(i) = x.extract::<i64>() {
        return Ok(Rational::from_integer(i.into()));
    }
    if let Ok(s) = x.extract::<String>() {
        return parse_rational(&s).map_err(TverbergError::new_err);
    }
    let n: i64 = x.getattr("numerator")?.extract()?;
    let d: i64 = x.getattr("denominator")?.extract()?;
    if d == 0 {
        return Err(TverbergError::new_err("zero denominator"));
    }
    Ok(Rational::new(n.into(), d.into()))
}

fn to_point(coords: &[Bound<'_, PyAny>]) -> PyResult<RationalPoint> {
    Ok(RationalPoint::new(
        coords.iter().map(to_rational).collect::<PyResult<_>>()?,
    ))
}

fn to_points(points: &[Vec<Bound<'_, PyAny>>]) -> PyResult<Vec<RationalPoint>> {
    points.iter().map(|p| to_point(p)).collect()
}

fn parse_mode(mode: &str, size: usize) -> PyResult<Mode> {
    match mode {
        "birch" => Ok(Mode::Birch { k: size }),
        "tverberg" => Ok(Mode::Tverberg { r: size }),
        other => Err(TverbergError::new_err(format!("unknown mode {other:?}"))),
    }
}

fn blocks(p: &Partition) -> Vec<Vec<usize>> {
    p.blocks().to_vec()
}

/// A colored point configuration in birch or tverberg mode.
#[pyclass(name = "Configuration", module = "tverberg", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyConfiguration {
    inner: ColoredConfiguration,
}

#[pymethods]
impl PyConfiguration {
    /// `mode` is "birch" (size k, query required) or "tverberg" (size r).
    #[new]
    #[pyo3(signature = (dim, points, colors, mode, size, query=None))]
    fn new(
        dim: usize,
        points: Vec<Vec<Bound<'_, PyAny>>>,
        colors: Vec<usize>,
        mode: &str,
        size: usize,
        query: Option<Vec<Bound<'_, PyAny>>>,
    ) -> PyResult<Self> {
        let query = query.map(|q| to_point(&q)).transpose()?;
        let inner =
            ColoredConfiguration::new(dim, to_points(&points)?, colors, parse_mode(mode, size)?, query).map_err(err)?;
        Ok(PyConfiguration { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (dim, r, epsilon="1/1000", seed=0))]
    fn sierksma(dim: usize, r: usize, epsilon: &str, seed: u64) -> PyResult<Self> {
        let eps = parse_rational(epsilon).map_err(TverbergError::new_err)?;
        Ok(PyConfiguration {
            inner: generators::make_sierksma(dim, r, &eps, seed).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (r, denom=1_000_000))]
    fn polygon(r: usize, denom: u64) -> PyResult<Self> {
        Ok(PyConfiguration {
            inner: generators::make_polygon(r, denom).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (dim, mode, size, seed=0, range=1000))]
    fn random(dim: usize, mode: &str, size: usize, seed: u64, range: u64) -> PyResult<Self> {
        Ok(PyConfiguration {
            inner: generators::make_random(dim, parse_mode(mode, size)?, seed, range).map_err(err)?,
        })
    }

    /// Planar birch configuration realizing a word such as "+0-1+2".
    #[staticmethod]
    #[pyo3(signature = (word, seed=0))]
    fn from_word(word: &str, seed: u64) -> PyResult<Self> {
        let w = words::ColoredWord::parse(word, true).map_err(err)?;
        Ok(PyConfiguration {
            inner: words::realize_word(&w, seed).map_err(err)?,
        })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyConfiguration {
            inner: ColoredConfiguration::parse(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        Ok(PyConfiguration {
            inner: tverberg_core::config::read_config(path).map_err(err)?,
        })
    }

    fn write(&self, path: &str) -> PyResult<()> {
        tverberg_core::config::write_config(&self.inner, path).map_err(err)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn with_colors(&self, colors: Vec<usize>) -> PyResult<Self> {
        Ok(PyConfiguration {
            inner: self.inner.with_colors(colors).map_err(err)?,
        })
    }

    #[getter]
    fn fingerprint(&self) -> String {
        self.inner.fingerprint().0
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// `("birch", k)` or `("tverberg", r)`.
    #[getter]
    fn mode(&self) -> (&'static str, usize) {
        match self.inner.mode() {
            Mode::Birch { k } => ("birch", k),
            Mode::Tverberg { r } => ("tverberg", r),
        }
    }

    #[getter]
    fn colors(&self) -> Vec<usize> {
        self.inner.colors().to_vec()
    }

    /// Coordinates as "n/d" strings.
    #[getter]
    fn points(&self) -> Vec<Vec<String>> {
        self.inner
            .points()
            .iter()
            .map(|p| p.coords.iter().map(format_rational).collect())
            .collect()
    }

    #[getter]
    fn query(&self) -> Option<Vec<String>> {
        self.inner
            .query()
            .map(|q| q.coords.iter().map(format_rational).collect())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Configuration({} in dimension {}, {} points, fingerprint {})",
            self.inner.mode(),
            self.inner.dim(),
            self.inner.len(),
            &self.inner.fingerprint().0[..12]
        )
    }
}

fn report_dict<'py>(py: Python<'py>, report: &CountReport, verdict: &Verdict) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("count", report.count)?;
    d.set_item("fingerprint", &report.fingerprint.0)?;
    d.set_item("even_ok", verdict.even_ok)?;
    d.set_item("bound_ok", verdict.bound_ok)?;
    d.set_item("nodes", report.stats.nodes)?;
    d.set_item("lp_solves", report.stats.lp_solves)?;
    if let Some(parts) = &report.partitions {
        d.set_item("partitions", parts.iter().map(blocks).collect::<Vec<_>>())?;
    }
    Ok(d)
}

/// Counts colored partitions for the configuration's mode. Returns a dict
/// with `count`, `fingerprint`, `even_ok`, `bound_ok` and, when asked,
/// `partitions` (lists of index blocks).
#[pyfunction]
#[pyo3(signature = (config, emit_partitions=false, allow_large_blocks=false))]
fn count<'py>(
    py: Python<'py>,
    config: &PyConfiguration,
    emit_partitions: bool,
    allow_large_blocks: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let inner = config.inner.clone();
    let outcome = py
        .detach(move || {
            experiments::count(
                &inner,
                experiments::CountOptions {
                    emit_partitions,
                    allow_large_blocks,
                    uncolored: false,
                },
            )
        })
        .map_err(err)?;
    report_dict(py, &outcome.report, &outcome.verdict)
}

#[pyfunction]
fn count_uncolored_birch(config: &PyConfiguration) -> PyResult<u64> {
    Ok(birch::count_uncolored_birch(&config.inner, false).map_err(err)?.count)
}

#[pyfunction]
fn count_rainbow_simplices(config: &PyConfiguration) -> PyResult<u64> {
    birch::count_rainbow_simplices(&config.inner).map_err(err)
}

/// Exact test for a common point of the hulls of the index blocks.
#[pyfunction]
fn hulls_intersect(config: &PyConfiguration, blocks: Vec<Vec<usize>>) -> PyResult<bool> {
    let n = config.inner.len();
    if blocks.iter().flatten().any(|&i| i >= n) || blocks.iter().any(|b| b.is_empty()) {
        return Err(TverbergError::new_err("blocks must be nonempty lists of point indices"));
    }
    Ok(core_tverberg::hulls_intersect(&blocks, &config.inner))
}

/// Checks a count against the theorem's clauses for `mode` ("birch" or
/// "tverberg") with k or r blocks in dimension `dim`.
#[pyfunction]
fn check_bounds<'py>(py: Python<'py>, mode: &str, dim: usize, size: usize, count: u64) -> PyResult<Bound<'py, PyDict>> {
    let v = match parse_mode(mode, size)? {
        Mode::Birch { k } => check_birch_count(count, dim, k),
        Mode::Tverberg { r } => check_tverberg_count(count, dim, r),
    };
    let d = PyDict::new(py);
    d.set_item("even_ok", v.even_ok)?;
    d.set_item("bound_ok", v.bound_ok)?;
    d.set_item("ok", v.ok())?;
    d.set_item(
        "applicable",
        v.clauses
            .iter()
            .filter(|c| c.applies)
            .map(|c| c.clause.clone())
            .collect::<Vec<_>>(),
    )?;
    Ok(d)
}

#[pyfunction]
fn count_word_partitions(word: &str) -> PyResult<u64> {
    let w = words::ColoredWord::parse(word, false).map_err(err)?;
    Ok(words::count_word_partitions(&w))
}

#[pyfunction]
fn word_partitions(word: &str) -> PyResult<Vec<Vec<Vec<usize>>>> {
    let w = words::ColoredWord::parse(word, false).map_err(err)?;
    Ok(words::word_partitions(&w).iter().map(blocks).collect())
}

/// Canonical sweep word of a planar birch configuration.
#[pyfunction]
fn sweep_encode(config: &PyConfiguration) -> PyResult<String> {
    Ok(words::sweep_encode(&config.inner).map_err(err)?.to_string())
}

/// Sign of det(p1 - p0, ..., pd - p0): -1, 0 or 1.
#[pyfunction]
fn orientation(points: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<i8> {
    let pts = to_points(&points)?;
    let d = pts.first().map_or(0, |p| p.dim());
    Ok(geometry::orientation(&pts, d).map_err(err)?.as_i8())
}

#[pyfunction]
fn in_general_position(points: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<bool> {
    let pts = to_points(&points)?;
    let d = pts.first().map_or(0, |p| p.dim());
    geometry::in_general_position(&pts, d).map_err(err)
}

/// Strict containment of `p` in the simplex spanned by `simplex`.
#[pyfunction]
fn simplex_contains(simplex: Vec<Vec<Bound<'_, PyAny>>>, p: Vec<Bound<'_, PyAny>>) -> PyResult<bool> {
    geometry::simplex_contains(&to_points(&simplex)?, &to_point(&p)?).map_err(err)
}

/// Minimum colored Tverberg count over all colorings; `symmetry` is "none"
/// or "colors". Returns `(minimum, witness coloring, colorings checked)`.
#[pyfunction]
#[pyo3(signature = (config, symmetry="colors"))]
fn min_coloring(py: Python<'_>, config: &PyConfiguration, symmetry: &str) -> PyResult<(u64, Vec<usize>, u64)> {
    let sym = match symmetry {
        "none" => Symmetry::None,
        "colors" => Symmetry::Colors,
        other => return Err(TverbergError::new_err(format!("unknown symmetry {other:?}"))),
    };
    let inner = config.inner.clone();
    let m = py
        .detach(move || experiments::min_coloring(&inner, sym, experiments::COLORING_BUDGET))
        .map_err(err)?;
    Ok((m.min, m.witness, m.colorings))
}

#[pymodule]
fn tverberg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TverbergError", m.py().get_type::<TverbergError>())?;
    m.add_class::<PyConfiguration>()?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(count_uncolored_birch, m)?)?;
    m.add_function(wrap_pyfunction!(count_rainbow_simplices, m)?)?;
    m.add_function(wrap_pyfunction!(hulls_intersect, m)?)?;
    m.add_function(wrap_pyfunction!(check_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(count_word_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(word_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_encode, m)?)?;
    m.add_function(wrap_pyfunction!(orientation, m)?)?;
    m.add_function(wrap_pyfunction!(in_general_position, m)?)?;
    m.add_function(wrap_pyfunction!(simplex_contains, m)?)?;
    m.add_function(wrap_pyfunction!(min_coloring, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
