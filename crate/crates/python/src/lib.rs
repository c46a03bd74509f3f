//! Python bindings: exact operators, relation discovery and the
//! verification suites.

// pyo3 0.22's generated wrappers convert PyErr into itself
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use commuting_ops::cli::checks::{EpsMode, Settings};
use commuting_ops::cli::report::Report;
use commuting_ops::cli::{self, print_op, Format, Suite};
use commuting_ops::diffop::{eval_poly_at_pair, DiffOp};
use commuting_ops::exact::{parse_rational, Rational, XLaurent};
use commuting_ops::kncheck::{kn_evaluate, search_branches, KnConfig};
use commuting_ops::opdata::bc_polynomial;
use commuting_ops::pipeline::find_bc_relation;
use commuting_ops::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Parse { .. } | Error::InvalidArgument(_) | Error::Domain(_) => PyValueError::new_err(e.to_string()),
        other => PyArithmeticError::new_err(other.to_string()),
    }
}

fn rational(s: &str) -> PyResult<Rational> {
    parse_rational(s).ok_or_else(|| PyValueError::new_err(format!("not a rational: `{s}`")))
}

fn format_of(name: &str) -> PyResult<Format> {
    match name {
        "text" => Ok(Format::Text),
        "json" => Ok(Format::Json),
        "tex" => Ok(Format::Tex),
        other => Err(PyValueError::new_err(format!("unknown format `{other}`; use text, json or tex"))),
    }
}

/// A differential operator with coefficients in `Q[eps][x, 1/x]`.
#[pyclass(name = "Operator", frozen, eq)]
#[derive(Clone, PartialEq)]
struct PyOperator {
    op: DiffOp<XLaurent>,
}

#[pymethods]
impl PyOperator {
    /// Parses the operator grammar, e.g. `"D^3 - (26/x^2)*D"`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self { op: cli::parse_op(text).map_err(to_py)? })
    }

    /// `l1`, `l2`, `cal-l` or `l2-mu`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        if !matches!(name, "l1" | "l2" | "cal-l" | "l2-mu") {
            return Err(PyValueError::new_err(format!("unknown operator `{name}`")));
        }
        Ok(Self { op: cli::load_operator(name).map_err(to_py)? })
    }

    /// `None` for the zero operator.
    #[getter]
    fn order(&self) -> Option<usize> {
        self.op.order()
    }

    fn is_zero(&self) -> bool {
        self.op.is_zero()
    }

    /// The `D^k` coefficient as text.
    fn coefficient(&self, k: usize) -> String {
        self.op.coeff(k).to_string()
    }

    fn __add__(&self, rhs: &Self) -> Self {
        Self { op: self.op.add(&rhs.op) }
    }

    fn __sub__(&self, rhs: &Self) -> Self {
        Self { op: self.op.sub(&rhs.op) }
    }

    fn __neg__(&self) -> Self {
        Self { op: self.op.neg() }
    }

    /// Composition.
    fn __mul__(&self, rhs: &Self) -> Self {
        Self { op: self.op.compose(&rhs.op) }
    }

    fn __pow__(&self, k: u32, _modulo: Option<u32>) -> Self {
        Self { op: self.op.power(k) }
    }

    fn commutator(&self, rhs: &Self) -> Self {
        Self { op: self.op.commutator(&rhs.op) }
    }

    /// Substitutes a rational such as `"-1/2"` for eps.
    fn specialize_eps(&self, value: &str) -> PyResult<Self> {
        Ok(Self { op: self.op.specialize_eps(&rational(value)?) })
    }

    /// `text`, `json` or `tex`.
    #[pyo3(signature = (format = "text"))]
    fn render(&self, format: &str) -> PyResult<String> {
        Ok(print_op(&self.op, format_of(format)?))
    }

    fn __str__(&self) -> String {
        self.op.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Operator({:?})", self.op.to_string())
    }
}

/// The minimal relation `Q(a, b) = 0` of weight at most `weight_bound`.
#[pyfunction]
#[pyo3(signature = (a, b, weight_bound = 36))]
fn bc_relation(py: Python<'_>, a: &PyOperator, b: &PyOperator, weight_bound: u32) -> PyResult<Option<String>> {
    let (a, b) = (a.op.clone(), b.op.clone());
    py.allow_threads(|| find_bc_relation(&a, &b, weight_bound).map(|r| r.map(|r| r.display())).map_err(to_py))
}

/// Whether `w^3 - (eps^4/15552) w^2 - z^4 - z^3` vanishes at `(a, b)`.
#[pyfunction]
fn satisfies_stated_relation(py: Python<'_>, a: &PyOperator, b: &PyOperator) -> PyResult<bool> {
    let (a, b) = (a.op.clone(), b.op.clone());
    py.allow_threads(|| eval_poly_at_pair(&bc_polynomial(), &a, &b).map(|r| r.is_zero()).map_err(to_py))
}

/// Largest of the twelve residuals at `x`, in scientific notation, after
/// the branch search. Returns `(residual, branches)`.
#[pyfunction]
#[pyo3(signature = (x, eps = "-1", digits = 60))]
fn kn_max_residual(py: Python<'_>, x: &str, eps: &str, digits: u32) -> PyResult<(String, String)> {
    let (x, eps) = (rational(x)?, rational(eps)?);
    py.allow_threads(|| {
        let config = KnConfig { eps, ..KnConfig::with_digits(digits) };
        let found = search_branches(&x, &config).map_err(to_py)?;
        let data = kn_evaluate(&x, &config, found.branches).map_err(to_py)?;
        Ok((data.max_residual().to_sci(6), found.branches.to_string()))
    })
}

/// Runs a `verify` suite and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (suite, eps = "symbolic", precision = 60, points = 5))]
fn verify(py: Python<'_>, suite: &str, eps: &str, precision: u32, points: usize) -> PyResult<String> {
    let suite = match suite {
        "all" => Suite::All,
        "commute" => Suite::Commute,
        "bc" => Suite::Bc,
        "limit" => Suite::Limit,
        "rank" => Suite::Rank,
        "kn" => Suite::Kn,
        other => return Err(PyValueError::new_err(format!("unknown suite `{other}`"))),
    };
    let eps = if eps == "symbolic" { EpsMode::Symbolic } else { EpsMode::Value(rational(eps)?) };
    let settings = Settings { eps, precision, points, ..Settings::default() };
    let report: Report = py.allow_threads(|| cli::verify_with(suite, &settings));
    Ok(report.to_json())
}

#[pymodule]
fn commuting_ops_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOperator>()?;
    m.add_function(wrap_pyfunction!(bc_relation, m)?)?;
    m.add_function(wrap_pyfunction!(satisfies_stated_relation, m)?)?;
    m.add_function(wrap_pyfunction!(kn_max_residual, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
