use logfano::cli::{self, document, report};
use logfano::exactnum::{fmt_rat, parse_rat, Rat};
use logfano::lattice::{DivisorClass, IntersectionLattice, SurfaceData};
use logfano::stability;
use logfano::toric::{self, TDivisor, ToricSurface};
use logfano::zariski::{self, VolumeProfile};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

fn py_err(e: logfano::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn read_rat(s: &str) -> PyResult<Rat> {
    parse_rat(s).ok_or_else(|| PyValueError::new_err(format!("cannot read {s:?} as a rational")))
}

fn read_class(v: &[String]) -> PyResult<DivisorClass> {
    v.iter().map(|s| read_rat(s)).collect::<PyResult<Vec<_>>>().map(DivisorClass)
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (v.to_string(),))?.unbind())
}

/// A smooth projective surface given by its intersection data.
#[pyclass(name = "Surface", module = "logfano", frozen)]
struct PySurface {
    inner: SurfaceData,
}

#[pymethods]
impl PySurface {
    #[new]
    #[pyo3(signature = (basis, gram, canonical, boundary, negative_curves, test_curves=None))]
    fn new(
        basis: Vec<String>,
        gram: Vec<Vec<String>>,
        canonical: Vec<String>,
        boundary: Vec<String>,
        negative_curves: Vec<Vec<String>>,
        test_curves: Option<Vec<Vec<String>>>,
    ) -> PyResult<Self> {
        let gram = gram
            .iter()
            .map(|row| row.iter().map(|s| read_rat(s)).collect())
            .collect::<PyResult<Vec<Vec<Rat>>>>()?;
        let lattice = IntersectionLattice::new(basis, gram, 2).map_err(py_err)?;
        let curves = negative_curves.iter().map(|c| read_class(c)).collect::<PyResult<_>>()?;
        let tests = test_curves
            .unwrap_or_default()
            .iter()
            .map(|c| read_class(c))
            .collect::<PyResult<_>>()?;
        let inner = SurfaceData::new(lattice, read_class(&canonical)?, read_class(&boundary)?, curves)
            .and_then(|s| s.with_test_curves(tests))
            .map_err(py_err)?;
        Ok(PySurface { inner })
    }

    #[staticmethod]
    fn blown_up_f1() -> Self {
        PySurface { inner: logfano::builtins::blown_up_f1() }
    }

    #[staticmethod]
    fn projective_plane() -> Self {
        PySurface { inner: logfano::builtins::projective_plane() }
    }

    #[staticmethod]
    fn p1_x_p1() -> Self {
        PySurface { inner: logfano::builtins::p1_x_p1() }
    }

    fn intersect(&self, a: Vec<String>, b: Vec<String>) -> PyResult<String> {
        let v = self.inner.intersect(&read_class(&a)?, &read_class(&b)?).map_err(py_err)?;
        Ok(fmt_rat(&v))
    }

    fn volume(&self, a: Vec<String>) -> PyResult<String> {
        let v = zariski::volume_of(&self.inner, &read_class(&a)?).map_err(py_err)?;
        Ok(fmt_rat(&v))
    }

    /// `(positive part, [(curve label, coefficient)])`
    fn zariski(&self, a: Vec<String>) -> PyResult<(Vec<String>, Vec<(String, String)>)> {
        let z = zariski::zariski_decompose(&self.inner, &read_class(&a)?).map_err(py_err)?;
        let p = z.positive.0.iter().map(fmt_rat).collect();
        let n = z
            .negative
            .iter()
            .map(|(i, c)| (self.inner.curve_labels[*i].clone(), fmt_rat(c)))
            .collect();
        Ok((p, n))
    }

    fn profile(&self) -> PyResult<Profile> {
        zariski::build_profile(&self.inner)
            .map(|inner| Profile { inner })
            .map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Surface(basis={:?})", self.inner.lattice.basis_labels)
    }
}

/// `t ↦ vol(-K_X - tD)` with its chamber data.
#[pyclass(module = "logfano", frozen)]
struct Profile {
    inner: VolumeProfile,
}

#[pymethods]
impl Profile {
    #[getter]
    fn tau(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &report::alg_json(&self.inner.tau))
    }

    /// `[(lo, hi, [coefficients, lowest degree first])]`
    fn pieces(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &report::piecewise_json(&self.inner.volume, "t"))
    }

    fn volume_at(&self, t: &str) -> PyResult<Option<String>> {
        Ok(self.inner.volume_at(&read_rat(t)?).map(|v| fmt_rat(&v)))
    }

    fn thresholds(&self, beta: &str) -> PyResult<(f64, f64)> {
        let (a, b) = zariski::thresholds(&self.inner, &read_rat(beta)?).map_err(py_err)?;
        Ok((a.to_f64(), b.to_f64()))
    }

    fn eta(&self, py: Python<'_>, beta: &str) -> PyResult<Py<PyAny>> {
        let e = stability::eta(&self.inner, &read_rat(beta)?).map_err(py_err)?;
        let v = serde_json::json!({
            "value": report::alg_json(&e.value),
            "eta_plus": report::alg_json(&e.eta_plus),
            "eta_minus": report::alg_json(&e.eta_minus),
            "sign": e.sign.as_str(),
            "verdict": e.verdict.as_str(),
        });
        to_py(py, &v)
    }

    fn eta_polynomial(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let p = stability::eta_polynomials(&self.inner).map_err(py_err)?;
        to_py(py, &report::piecewise_json(&p.eta, "beta"))
    }

    fn destabilizing_betas(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let d = stability::destabilizing_betas(&self.inner).map_err(py_err)?;
        to_py(py, &report::destabilizing_json(&d))
    }

    /// Bundle document (JSON text) reproducing this profile.
    fn bundle_document(&self) -> PyResult<String> {
        let v = document::bundle_document(&self.inner, &Default::default()).map_err(py_err)?;
        Ok(cli::to_json_string(&v))
    }
}

/// Runs a full input document (JSON text) and returns the report.
#[pyfunction]
fn run(py: Python<'_>, document_json: &str) -> PyResult<Py<PyAny>> {
    let v: Value = serde_json::from_str(document_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let doc = document::parse_document(&v).map_err(|d| {
        PyValueError::new_err(d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
    })?;
    let out = cli::run(&doc).map_err(py_err)?;
    to_py(py, &out.report)
}

/// Diagnostics for a document, as `"path: message"` strings.
#[pyfunction]
fn validate(document_json: &str) -> PyResult<Vec<String>> {
    let v: Value = serde_json::from_str(document_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(document::validate(&v).iter().map(ToString::to_string).collect())
}

#[pyfunction]
fn eta_closed_form(n: usize, l: &str, vol_at_beta: &str, beta: &str) -> PyResult<String> {
    let v = stability::eta_closed_form(n, &read_rat(l)?, &read_rat(vol_at_beta)?, &read_rat(beta)?);
    Ok(fmt_rat(&v))
}

/// Lattice points of the section polytope of a torus-invariant divisor.
#[pyfunction]
fn count_sections(rays: Vec<(i64, i64)>, coeffs: Vec<String>) -> PyResult<u64> {
    let t = ToricSurface::new(rays).map_err(py_err)?;
    let a = TDivisor(coeffs.iter().map(|s| read_rat(s)).collect::<PyResult<_>>()?);
    toric::count_sections(&t, &a).map_err(py_err)
}

#[pymodule]
#[pyo3(name = "logfano")]
fn logfano_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySurface>()?;
    m.add_class::<Profile>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(eta_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(count_sections, m)?)?;
    Ok(())
}
