//! Python bindings. Reports cross the boundary as plain dicts and lists,
//! converted through their JSON form.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;
use serde_json::json;

use nodal::antisym::{antisymmetry_vector, verify_by_sampling};
use nodal::arith::{verify_generalized_lemma, QuadraticForm};
use nodal::construct::{default_epsilon, make_construction, run_construction, CurveCheckConfig};
use nodal::nodal::{count_nodal_domains, CountConfig, NodalError, NodalSummary};
use nodal::render::{render_eigenfunction, Palette, RenderSpec};
use nodal::scan::{parity_scan as scan, ParityScanConfig};
use nodal::spectra::{
    eigenspace_at, enumerate_eigenspaces, BasisFunction, Eigenfunction, Family, Rational,
    TorusShape,
};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn nodal_error(e: NodalError) -> PyErr {
    match e {
        NodalError::UnstableCount(_) => PyRuntimeError::new_err(e.to_string()),
        other => value_error(other),
    }
}

fn to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn rational(s: &str) -> PyResult<Rational> {
    s.trim()
        .parse()
        .map_err(|_| value_error(format!("expected \"a/b\" or an integer, got {s:?}")))
}

/// A flat torus with periods 2π and 2ρπ.
#[pyclass(name = "Torus", frozen, module = "torus_nodal", skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyTorus {
    inner: TorusShape,
}

#[pymethods]
impl PyTorus {
    /// `rho_sq` is "a/b", "a", or "irrational:<rho>".
    #[new]
    fn new(rho_sq: &str) -> PyResult<Self> {
        Ok(Self {
            inner: TorusShape::parse(rho_sq).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn square() -> Self {
        Self {
            inner: TorusShape::square(),
        }
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho()
    }

    #[getter]
    fn rho_sq(&self) -> String {
        self.inner.to_string()
    }

    /// Eigenspaces up to `lambda_max`, each a dict with lambda, multiplicity and basis.
    fn eigenspaces<'py>(&self, py: Python<'py>, lambda_max: &str) -> PyResult<Bound<'py, PyAny>> {
        let spaces =
            enumerate_eigenspaces(&self.inner, rational(lambda_max)?).map_err(value_error)?;
        to_py(py, &spaces)
    }

    /// The sign-flipping translation of the eigenspace at `lam`, exact and as floats.
    fn antisymmetry_vector<'py>(&self, py: Python<'py>, lam: &str) -> PyResult<Bound<'py, PyAny>> {
        let space = eigenspace_at(&self.inner, rational(lam)?).map_err(value_error)?;
        let v = antisymmetry_vector(&space, &self.inner).map_err(value_error)?;
        let (x1, x2) = v.to_real(&self.inner);
        to_py(py, &json!({ "vector": v, "real": [x1, x2] }))
    }

    fn __repr__(&self) -> String {
        format!("Torus('{}')", self.inner)
    }
}

/// A real eigenfunction, a combination of basis functions at one eigenvalue.
#[pyclass(name = "Eigenfunction", frozen, module = "torus_nodal")]
struct PyEigenfunction {
    inner: Eigenfunction,
}

#[pymethods]
impl PyEigenfunction {
    /// `terms` are `(family, m, n, c)` with family one of cc, cs, sc, ss.
    #[new]
    fn new(torus: &PyTorus, terms: Vec<(String, u64, u64, f64)>) -> PyResult<Self> {
        let terms = terms
            .into_iter()
            .map(|(family, m, n, c)| {
                let family: Family = family.parse().map_err(value_error)?;
                Ok((BasisFunction::new(family, m, n).map_err(value_error)?, c))
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: Eigenfunction::from_terms(torus.inner, &terms).map_err(value_error)?,
        })
    }

    /// Coefficients in the order of the eigenspace basis.
    #[staticmethod]
    fn from_coefficients(torus: &PyTorus, lam: &str, coefficients: Vec<f64>) -> PyResult<Self> {
        let space = eigenspace_at(&torus.inner, rational(lam)?).map_err(value_error)?;
        Ok(Self {
            inner: Eigenfunction::new(torus.inner, space, coefficients).map_err(value_error)?,
        })
    }

    #[getter]
    fn lam(&self) -> String {
        self.inner.eigenspace.eigenvalue.to_string()
    }

    #[getter]
    fn torus(&self) -> PyTorus {
        PyTorus {
            inner: self.inner.torus,
        }
    }

    fn __call__(&self, x1: f64, x2: f64) -> f64 {
        self.inner.value_at(x1, x2)
    }

    /// Samples at `x = (2πi/n1, 2ρπj/n2)`, as `n1` rows of `n2` values.
    fn grid(&self, py: Python<'_>, n1: usize, n2: usize) -> PyResult<Vec<Vec<f64>>> {
        let g = py
            .detach(|| self.inner.evaluate_grid(n1, n2))
            .map_err(value_error)?;
        Ok(g.values.chunks(n2).map(<[f64]>::to_vec).collect())
    }

    /// Stabilized domain count with signs and areas.
    #[pyo3(signature = (base_resolution = 256, max_resolution = 4096, tau = 1e-9))]
    fn count_nodal_domains<'py>(
        &self,
        py: Python<'py>,
        base_resolution: usize,
        max_resolution: usize,
        tau: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let cfg = CountConfig {
            base_resolution,
            max_resolution,
            tau_relative: tau,
            ..CountConfig::default()
        };
        let r = py
            .detach(|| count_nodal_domains(&self.inner, &cfg))
            .map_err(nodal_error)?;
        let s = NodalSummary::new(&r.decomposition, &self.inner.torus);
        to_py(
            py,
            &json!({
                "count": s.count,
                "signs": s.signs,
                "areas": s.areas,
                "resolution": r.resolution,
                "history": r.history,
            }),
        )
    }

    /// Largest `|u(x+v) + u(x)|` over random points, `v` the sign-flip translation.
    #[pyo3(signature = (samples = 1000, seed = 0))]
    fn flip_residual(&self, samples: usize, seed: u64) -> PyResult<f64> {
        let v =
            antisymmetry_vector(&self.inner.eigenspace, &self.inner.torus).map_err(value_error)?;
        Ok(verify_by_sampling(&self.inner, &v, samples, seed))
    }

    /// Nodal map as binary PPM bytes.
    #[pyo3(signature = (width = 512, height = 512, palette = "sign"))]
    fn render_ppm<'py>(
        &self,
        py: Python<'py>,
        width: usize,
        height: usize,
        palette: &str,
    ) -> PyResult<Bound<'py, PyBytes>> {
        let palette: Palette = palette.parse().map_err(value_error)?;
        let spec = RenderSpec::new(width, height, palette).map_err(value_error)?;
        let bytes = py
            .detach(|| render_eigenfunction(&self.inner, &spec))
            .map_err(value_error)?;
        Ok(PyBytes::new(py, &bytes))
    }

    fn __repr__(&self) -> String {
        format!(
            "Eigenfunction(torus='{}', lam={}, terms={})",
            self.inner.torus,
            self.inner.eigenspace.eigenvalue,
            self.inner
                .coefficients
                .iter()
                .filter(|c| **c != 0.0)
                .count()
        )
    }
}

/// `cos(m x₁)cos(n x₂/ρ) + ε cos(k m x₁)` on the torus where both terms share an eigenvalue.
#[pyfunction]
#[pyo3(signature = (m, n, k, eps = None))]
fn construction(m: u64, n: u64, k: u64, eps: Option<f64>) -> PyResult<PyEigenfunction> {
    let eps = eps.unwrap_or_else(|| default_epsilon(m.max(1), n.max(1), k.max(1)));
    let c = make_construction(m, n, k, eps).map_err(value_error)?;
    Ok(PyEigenfunction { inner: c.u })
}

/// Count, symmetry and (for m = n = 1, k = 2) curve checks of a construction.
#[pyfunction]
#[pyo3(signature = (m, n, k, eps = None))]
fn construction_report<'py>(
    py: Python<'py>,
    m: u64,
    n: u64,
    k: u64,
    eps: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let eps = eps.unwrap_or_else(|| default_epsilon(m.max(1), n.max(1), k.max(1)));
    let c = make_construction(m, n, k, eps).map_err(value_error)?;
    let report = py
        .detach(|| run_construction(&c, &CountConfig::default(), &CurveCheckConfig::default()))
        .map_err(value_error)?;
    to_py(py, &report)
}

/// Checks the parity decomposition of every `αm² + βn² ≤ lambda_max`.
#[pyfunction]
#[pyo3(signature = (alpha = 1, beta = 1, lambda_max = 10_000))]
fn verify_arith<'py>(
    py: Python<'py>,
    alpha: u64,
    beta: u64,
    lambda_max: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let form = QuadraticForm::new(alpha, beta).map_err(value_error)?;
    let report = py
        .detach(|| verify_generalized_lemma(form, lambda_max))
        .map_err(value_error)?;
    to_py(py, &report)
}

/// Even counts and exact domain pairing for random eigenfunctions.
#[pyfunction]
#[pyo3(signature = (torus, lambda_max, samples = 5, seed = 42, base_resolution = 256))]
fn parity_scan<'py>(
    py: Python<'py>,
    torus: &PyTorus,
    lambda_max: &str,
    samples: usize,
    seed: u64,
    base_resolution: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = ParityScanConfig {
        samples_per_eigenspace: samples,
        seed,
        count: CountConfig::with_base(base_resolution),
        ..ParityScanConfig::default()
    };
    let lambda_max = rational(lambda_max)?;
    let report = py
        .detach(|| scan(&torus.inner, lambda_max, &cfg))
        .map_err(value_error)?;
    to_py(py, &report)
}

#[pymodule]
fn torus_nodal(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTorus>()?;
    m.add_class::<PyEigenfunction>()?;
    m.add_function(wrap_pyfunction!(construction, m)?)?;
    m.add_function(wrap_pyfunction!(construction_report, m)?)?;
    m.add_function(wrap_pyfunction!(verify_arith, m)?)?;
    m.add_function(wrap_pyfunction!(parity_scan, m)?)?;
    Ok(())
}
