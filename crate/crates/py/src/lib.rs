//! Python bindings: the digit-set type plus the classification, sumset,
//! bound and certificate operations, returning the same JSON-shaped
//! structures the CLI emits (rationals as exact `p/q` strings).

use cantorval::bounds::{alpha_lower, alpha_lower_via_star};
use cantorval::classify::{classify, sweep, ClassifyOptions};
use cantorval::nullseq::{qn_root, qn_sequence, star_condition_witness};
use cantorval::rational::{parse_rational, Rational};
use cantorval::ratio::RatioValue;
use cantorval::render::{diagram_from_sweep, render_svg};
use cantorval::report::*;
use cantorval::sigma::{gap_stats, sumset_of_multigeometric, FiniteSigma as CoreSigma};
use cantorval::sumsets::{
    cover_length, full_sumset_check, null_certificate, sigma_n, t12_check, SumsetBudget,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList};
use serde_json::Value;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.into_any()
        }
    })
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(err)?;
    json_to_py(py, &v)
}

fn parse_q(raw: &str, tol: &Rational) -> PyResult<RatioValue> {
    if let Some(spec) = raw.strip_prefix("qn:") {
        let (s, n) = spec
            .split_once(',')
            .ok_or_else(|| err(format!("expected qn:s,n, got `{raw}`")))?;
        let s: usize = s.trim().parse().map_err(err)?;
        let n: u32 = n.trim().parse().map_err(err)?;
        return qn_root(s, n, tol).map_err(err);
    }
    RatioValue::exact(parse_rational(raw).map_err(err)?).map_err(err)
}

fn parse_tol(raw: &str) -> PyResult<Rational> {
    parse_rational(raw).map_err(err)
}

/// A finite digit set Σ of exact rationals.
#[pyclass(frozen)]
struct FiniteSigma {
    inner: CoreSigma,
    known_achievement: bool,
}

impl FiniteSigma {
    fn options(&self, depth: u32, tol: &Rational) -> ClassifyOptions {
        ClassifyOptions {
            depth_budget: depth,
            tol: tol.clone(),
            known_achievement: self.known_achievement,
            ..ClassifyOptions::default()
        }
    }
}

#[pymethods]
impl FiniteSigma {
    /// Parse from a comma-separated list of rationals, e.g. "0,2,3,5".
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(FiniteSigma {
            inner: CoreSigma::parse(spec).map_err(err)?,
            known_achievement: false,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("FiniteSigma({})", self.inner)
    }

    /// Elements as exact rational strings.
    fn elements(&self) -> Vec<String> {
        self.inner.elements().iter().map(|e| e.to_string()).collect()
    }

    /// diam, δ, Δ, I(Σ), i(Σ), d and the extreme-gap flag.
    fn gap_stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &gap_stats(&self.inner))
    }

    fn is_ferens_like(&self) -> bool {
        self.inner.is_ferens_like()
    }

    /// Classify K(Σ;q); `q` is a rational string or "qn:s,n".
    #[pyo3(signature = (q, depth=8, tol="1e-12"))]
    fn classify<'py>(
        &self,
        py: Python<'py>,
        q: &str,
        depth: u32,
        tol: &str,
    ) -> PyResult<Bound<'py, PyAny>> {
        let tol = parse_tol(tol)?;
        let ratio = parse_q(q, &tol)?;
        let outcome = classify(&self.inner, &ratio, &self.options(depth, &tol)).map_err(err)?;
        to_py(py, &VerdictReport::new(self.inner.clone(), ratio, outcome))
    }

    /// Partition (0,1) into classified q-regions.
    #[pyo3(signature = (resolution=210, depth=3, tol="1e-12"))]
    fn sweep<'py>(
        &self,
        py: Python<'py>,
        resolution: u32,
        depth: u32,
        tol: &str,
    ) -> PyResult<Bound<'py, PyAny>> {
        let tol = parse_tol(tol)?;
        let result = sweep(&self.inner, resolution, &self.options(depth, &tol)).map_err(err)?;
        to_py(
            py,
            &SweepReport::new(self.inner.clone(), resolution, depth, result),
        )
    }

    /// Depth-n sumset Σₙ as rational strings.
    #[pyo3(signature = (q, n))]
    fn sigma_n(&self, q: &str, n: u32) -> PyResult<Vec<String>> {
        let q = parse_rational(q).map_err(err)?;
        let level = sigma_n(&self.inner, &q, n, SumsetBudget::default()).map_err(err)?;
        Ok(level.elements().iter().map(|e| e.to_string()).collect())
    }

    /// Smallest depth with |Σₙ|·qⁿ < 1, or None.
    #[pyo3(signature = (q, max_depth=8))]
    fn null_certificate<'py>(
        &self,
        py: Python<'py>,
        q: &str,
        max_depth: u32,
    ) -> PyResult<Bound<'py, PyAny>> {
        let q = parse_rational(q).map_err(err)?;
        let cert =
            null_certificate(&self.inner, &q, max_depth, SumsetBudget::default()).map_err(err)?;
        to_py(
            py,
            &NullCertReport::new(self.inner.clone(), q, max_depth, cert),
        )
    }

    /// Exact length of the depth-n interval cover.
    fn cover_length<'py>(&self, py: Python<'py>, q: &str, n: u32) -> PyResult<Bound<'py, PyAny>> {
        let q = parse_rational(q).map_err(err)?;
        let report = cover_length(&self.inner, &q, n, SumsetBudget::default()).map_err(err)?;
        to_py(py, &CoverEnvelope::new(self.inner.clone(), q, report))
    }

    /// Rational-ratio measure check (integer Σ, q = 1/(k+1); default 1/|Σ|).
    #[pyo3(signature = (q=None, max_depth=10))]
    fn t12_check<'py>(
        &self,
        py: Python<'py>,
        q: Option<&str>,
        max_depth: u32,
    ) -> PyResult<Bound<'py, PyAny>> {
        let q = match q {
            Some(raw) => parse_rational(raw).map_err(err)?,
            None => Rational::new(1.into(), (self.inner.len() as i64).into()),
        };
        let outcome = t12_check(&self.inner, &q, max_depth, SumsetBudget::default()).map_err(err)?;
        to_py(py, &T12Report::new(self.inner.clone(), q, max_depth, outcome))
    }

    /// Collision search at q = 1/|Σ| for integer Σ.
    #[pyo3(signature = (max_depth=8))]
    fn full_sumset_check<'py>(&self, py: Python<'py>, max_depth: u32) -> PyResult<Bound<'py, PyAny>> {
        let out = full_sumset_check(&self.inner, max_depth, SumsetBudget::default()).map_err(err)?;
        to_py(py, &out)
    }

    /// Condition-(*) witness (a, b, c), or None.
    fn star_condition_witness<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        match star_condition_witness(&self.inner) {
            Some(w) => to_py(py, &w),
            None => Ok(py.None().into_bound(py)),
        }
    }

    /// Zero-measure certificates along qₙ ↘ 1/|Σ|.
    #[pyo3(signature = (count=3, tol="1e-9"))]
    fn qn_sequence<'py>(&self, py: Python<'py>, count: usize, tol: &str) -> PyResult<Bound<'py, PyAny>> {
        let tol = parse_tol(tol)?;
        let certs = qn_sequence(&self.inner, count, &tol).map_err(err)?;
        to_py(py, &QnSeqReport::new(self.inner.clone(), certs))
    }

    /// The a.e.-positive-measure window (1/|Σ|, α̲(d)), or None.
    #[pyo3(signature = (tol="1e-12"))]
    fn ae_positive_window<'py>(&self, py: Python<'py>, tol: &str) -> PyResult<Bound<'py, PyAny>> {
        let tol = parse_tol(tol)?;
        match cantorval::classify::ae_positive_window(&self.inner, &tol).map_err(err)? {
            Some(w) => to_py(py, &w),
            None => Ok(py.None().into_bound(py)),
        }
    }

    /// Sweep, build the diagram, and write SVG + JSON sidecar.
    #[pyo3(signature = (path, resolution=210, depth=3, tol="1e-12"))]
    fn render_diagram(&self, path: &str, resolution: u32, depth: u32, tol: &str) -> PyResult<()> {
        let tol = parse_tol(tol)?;
        let result = sweep(&self.inner, resolution, &self.options(depth, &tol)).map_err(err)?;
        let spec = diagram_from_sweep(&result).map_err(err)?;
        render_svg(&spec, std::path::Path::new(path)).map_err(err)
    }
}

/// Digit set from the subset sums of multigeometric coefficients,
/// e.g. sumset("4,3,2") or sumset(["4","3","2"]).
#[pyfunction]
fn sumset(coefficients: &Bound<'_, PyAny>) -> PyResult<FiniteSigma> {
    let coeffs: Vec<Rational> = if let Ok(s) = coefficients.extract::<&str>() {
        s.split(',')
            .map(parse_rational)
            .collect::<Result<_, _>>()
            .map_err(err)?
    } else {
        let items: Vec<String> = coefficients.extract()?;
        items
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<_, _>>()
            .map_err(err)?
    };
    Ok(FiniteSigma {
        inner: sumset_of_multigeometric(&coeffs).map_err(err)?,
        known_achievement: true,
    })
}

/// Solomyak lower bound α̲(d) for 0 < d ≤ 1/2.
#[pyfunction]
#[pyo3(signature = (d, tol="1e-12", via_star=false))]
fn alpha_lower_bound<'py>(
    py: Python<'py>,
    d: &str,
    tol: &str,
    via_star: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let d = parse_rational(d).map_err(err)?;
    let tol = parse_tol(tol)?;
    let bound = alpha_lower(&d, &tol).map_err(err)?;
    let star = if via_star {
        Some(alpha_lower_via_star(&d, &tol).map_err(err)?)
    } else {
        None
    };
    to_py(py, &AlphaReport::new(bound, star))
}

/// Enclosure of the root of x + … + x^{n−1} = 1/(s−1).
#[pyfunction]
#[pyo3(signature = (s, n, tol="1e-9"))]
fn qn_root_enclosure<'py>(py: Python<'py>, s: usize, n: u32, tol: &str) -> PyResult<Bound<'py, PyAny>> {
    let tol = parse_tol(tol)?;
    to_py(py, &qn_root(s, n, &tol).map_err(err)?)
}

/// Replay the certificates inside a serialized artifact (JSON text).
#[pyfunction]
fn verify_json<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    let report = cantorval::verify::verify_str(text).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn cantorval_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<FiniteSigma>()?;
    m.add_function(wrap_pyfunction!(sumset, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(qn_root_enclosure, m)?)?;
    m.add_function(wrap_pyfunction!(verify_json, m)?)?;
    Ok(())
}
