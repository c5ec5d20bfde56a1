//! Python bindings. Structured results cross the boundary as JSON decoded by
//! Python's `json` module, so they match the files the CLI writes.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

use fatflat::bounds::bound_report;
use fatflat::checks::{run_checks, CheckConfig};
use fatflat::classify::classify;
use fatflat::field::DEFAULT_PRIMES;
use fatflat::interp::{alpha_symbolic, membership, AlphaOptions};
use fatflat::json;
use fatflat::projective::random_general_hyperplanes;
use fatflat::scheme::{
    build_integer_target, build_plane_family, build_quasi_star, build_rational_target, star_configuration,
    ExtraSpec, FatFlatScheme, FatPointsP2, PlaneFamily,
};
use fatflat::Error;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Unresolved { .. } | Error::Certificate(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn decode(py: Python<'_>, value: &Value) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).expect("json values serialize");
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn parse(text: &str) -> PyResult<Value> {
    serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn options(mode: &str, primes: Option<(u64, u64)>, cap: Option<u32>) -> PyResult<AlphaOptions> {
    let base = match mode {
        "rational" => AlphaOptions::rational(),
        "modp" => AlphaOptions::modular(primes.map_or(DEFAULT_PRIMES, |(p, q)| [p, q])),
        other => return Err(PyValueError::new_err(format!("mode must be 'rational' or 'modp', got {other:?}"))),
    };
    Ok(match cap {
        Some(c) => base.with_cap(c),
        None => base,
    })
}

/// A fat flat subscheme of projective space.
#[pyclass(module = "fatflat_py", name = "Scheme", frozen)]
struct PyScheme {
    inner: FatFlatScheme,
}

#[pymethods]
impl PyScheme {
    /// `m S_N(e, s)` on seeded general hyperplanes.
    #[staticmethod]
    #[pyo3(signature = (n, e, s, m = 1, seed = 1))]
    fn star(n: usize, e: usize, s: usize, m: u32, seed: u64) -> PyResult<Self> {
        let hyperplanes = random_general_hyperplanes(n, s, seed).map_err(to_py_err)?;
        let star = star_configuration(n, e, s, hyperplanes).map_err(to_py_err)?;
        Ok(PyScheme { inner: star.fat(m) })
    }

    #[staticmethod]
    #[pyo3(signature = (s, seed = 1))]
    fn quasi_star(s: usize, seed: u64) -> PyResult<Self> {
        Ok(PyScheme { inner: build_quasi_star(s, seed).map_err(to_py_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (a, b, n = None, seed = 1))]
    fn rational_target(a: usize, b: usize, n: Option<usize>, seed: u64) -> PyResult<Self> {
        Ok(PyScheme { inner: build_rational_target(a, b, n, seed).map_err(to_py_err)? })
    }

    /// Extras are `(hyperplane, codim, multiplicity)` with hyperplanes counted from 0.
    #[staticmethod]
    #[pyo3(signature = (n, d, s, t, e, extras = Vec::new(), seed = 1))]
    fn integer_target(
        n: usize,
        d: u64,
        s: usize,
        t: u32,
        e: usize,
        extras: Vec<(usize, usize, u32)>,
        seed: u64,
    ) -> PyResult<Self> {
        let specs: Vec<ExtraSpec> = extras
            .into_iter()
            .map(|(hyperplane, codim, multiplicity)| ExtraSpec { hyperplane, codim, multiplicity })
            .collect();
        Ok(PyScheme { inner: build_integer_target(n, d, s, t, e, &specs, seed).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyScheme { inner: json::scheme_from_json(&parse(text)?).map_err(to_py_err)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&json::scheme_to_json(&self.inner)).expect("json values serialize")
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    /// `(codim, multiplicity)` per component.
    #[getter]
    fn components(&self) -> Vec<(usize, u32)> {
        self.inner.components().iter().map(|c| (c.subspace.codim(), c.multiplicity)).collect()
    }

    /// The initial degree of the `k`-th symbolic power, as a record dict.
    #[pyo3(signature = (k, mode = "modp", primes = None, cap = None))]
    fn alpha(&self, py: Python<'_>, k: u32, mode: &str, primes: Option<(u64, u64)>, cap: Option<u32>) -> PyResult<Py<PyAny>> {
        let opts = options(mode, primes, cap)?;
        let record = py.detach(|| alpha_symbolic(&self.inner, k, &opts)).map_err(to_py_err)?;
        decode(py, &json::alpha_record_to_json(&record))
    }

    /// Whether a form (in the CLI's JSON format) lies in the `k`-th symbolic power.
    fn contains(&self, form_json: &str, k: u32) -> PyResult<bool> {
        let f = json::form_from_json(&parse(form_json)?).map_err(to_py_err)?;
        membership(&f, &self.inner, k).map_err(to_py_err)
    }

    #[pyo3(signature = (k_max, mode = "modp", primes = None, cap = None))]
    fn bounds(&self, py: Python<'_>, k_max: u32, mode: &str, primes: Option<(u64, u64)>, cap: Option<u32>) -> PyResult<Py<PyAny>> {
        let opts = options(mode, primes, cap)?;
        let report = py.detach(|| bound_report(&self.inner, k_max, &opts, None)).map_err(to_py_err)?;
        decode(py, &json::bound_report_to_json(&report))
    }

    fn __repr__(&self) -> String {
        format!("Scheme(P^{}, {} components)", self.inner.ambient_dim(), self.inner.components().len())
    }
}

/// Fat points in the projective plane.
#[pyclass(module = "fatflat_py", name = "Points", frozen)]
struct PyPoints {
    inner: FatPointsP2,
}

#[pymethods]
impl PyPoints {
    #[new]
    fn new(points: Vec<[i64; 3]>, multiplicities: Vec<u32>) -> PyResult<Self> {
        Ok(PyPoints { inner: FatPointsP2::from_ints(&points, &multiplicities).map_err(to_py_err)? })
    }

    /// A named plane family, as accepted by `fatflat build thmb-family`.
    #[staticmethod]
    #[pyo3(signature = (case, r = 1, s = 1, n = 5, multiplicities = Vec::new(), seed = 1))]
    fn family(case: &str, r: usize, s: usize, n: usize, multiplicities: Vec<u32>, seed: u64) -> PyResult<Self> {
        let family = PlaneFamily::from_case(case, r, s, n, &multiplicities).map_err(to_py_err)?;
        Ok(PyPoints { inner: build_plane_family(&family, seed).map_err(to_py_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPoints { inner: json::points_from_json(&parse(text)?).map_err(to_py_err)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&json::points_to_json(&self.inner)).expect("json values serialize")
    }

    #[getter]
    fn multiplicities(&self) -> Vec<u32> {
        self.inner.multiplicities().to_vec()
    }

    fn to_scheme(&self) -> PyScheme {
        PyScheme { inner: self.inner.to_scheme() }
    }

    /// The classification dict, including its certificate and value claim.
    fn classify(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let c = classify(&self.inner).map_err(to_py_err)?;
        decode(py, &json::classification_to_json(&c, &self.inner).map_err(to_py_err)?)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Runs the verification suite; returns `(id, passed, detail)` per check.
#[pyfunction]
#[pyo3(signature = (only = None, instances = 200, seed = 1))]
fn verify(py: Python<'_>, only: Option<Vec<String>>, instances: usize, seed: u64) -> PyResult<Vec<(String, bool, String)>> {
    let config = CheckConfig { primes: DEFAULT_PRIMES, seed, property_instances: instances };
    let outcomes = py.detach(|| run_checks(&config, only.as_deref())).map_err(to_py_err)?;
    Ok(outcomes.into_iter().map(|o| (o.id.to_string(), o.passed, o.detail)).collect())
}

#[pymodule]
fn fatflat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScheme>()?;
    m.add_class::<PyPoints>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
