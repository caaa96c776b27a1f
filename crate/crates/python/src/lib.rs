use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use opuclab::experiment::{self, ExperimentConfig};
use opuclab::families::{self, Family, BUILTINS};
use opuclab::measure::{Atom, CircleMeasure};
use opuclab::schur::SchurParameters;
use opuclab::{opuc, outer, schur, OpucError};

fn value_error(e: OpucError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_family(json: &str) -> PyResult<Family> {
    serde_json::from_str(json).map_err(|e| PyValueError::new_err(format!("invalid family: {e}")))
}

#[pyclass(name = "Measure", frozen)]
struct PyMeasure(CircleMeasure);

#[pymethods]
impl PyMeasure {
    /// Weight samples on the uniform grid plus `(angle, mass)` atoms.
    #[new]
    #[pyo3(signature = (weight, atoms = vec![], normalize = true))]
    fn new(weight: Vec<f64>, atoms: Vec<(f64, f64)>, normalize: bool) -> PyResult<Self> {
        let atoms = atoms.into_iter().map(|(a, m)| Atom::new(a, m)).collect();
        CircleMeasure::new(weight, atoms, normalize).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn lebesgue(grid_size: usize) -> Self {
        Self(CircleMeasure::lebesgue(grid_size))
    }

    #[getter]
    fn grid_size(&self) -> usize {
        self.0.grid_size()
    }

    #[getter]
    fn weight(&self) -> Vec<f64> {
        self.0.weight().to_vec()
    }

    #[getter]
    fn atoms(&self) -> Vec<(f64, f64)> {
        self.0.atoms().iter().map(|a| (a.angle, a.mass)).collect()
    }

    fn total_mass(&self) -> f64 {
        self.0.total_mass()
    }

    fn is_szego(&self) -> bool {
        self.0.is_szego()
    }

    fn moments(&self, count: usize) -> PyResult<Vec<Complex64>> {
        self.0.moments(count).map_err(value_error)
    }

    fn poisson(&self, z: Complex64) -> PyResult<f64> {
        self.0.poisson(z).map_err(value_error)
    }

    fn caratheodory(&self, z: Complex64) -> PyResult<Complex64> {
        self.0.caratheodory(z).map_err(value_error)
    }

    fn fejer_mean(&self, xi: Complex64, n: usize) -> PyResult<f64> {
        self.0.fejer_mean(xi, n).map_err(value_error)
    }

    fn schur_value(&self, z: Complex64) -> PyResult<Complex64> {
        schur::schur_function_value(&self.0, z).map_err(value_error)
    }

    /// Outer function `D(z)` with `|D|² = w` on the circle and `D(0) > 0`.
    fn szego_function(&self, z: Complex64) -> PyResult<Complex64> {
        outer::szego_interior(&self.0, z).map_err(value_error)
    }

    /// `log P(z) - P[log w](z)`.
    fn entropy(&self, z: Complex64) -> PyResult<f64> {
        outer::entropy(&self.0, z).map_err(value_error)
    }

    /// `a_0..a_{count-1}` through the Levinson recursion on the moments.
    fn verblunsky(&self, count: usize) -> PyResult<PyParameters> {
        opuc::verblunsky_from_moments(&self.0.moments(count).map_err(value_error)?, count)
            .map(PyParameters)
            .map_err(value_error)
    }

    /// `a_0..a_{count-1}` through the Schur algorithm on the series of `f`.
    fn schur_parameters(&self, count: usize) -> PyResult<PyParameters> {
        schur::schur_parameters_from_measure(&self.0, count).map(PyParameters).map_err(value_error)
    }

    fn szego_residual(&self, params: &PyParameters, n: usize) -> PyResult<f64> {
        schur::szego_formula_residual(&self.0, &params.0, n).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "Measure(grid_size={}, atoms={}, family={:?})",
            self.0.grid_size(),
            self.0.atoms().len(),
            self.0.family().unwrap_or("custom")
        )
    }
}

#[pyclass(name = "SchurParameters", frozen)]
struct PyParameters(SchurParameters);

#[pymethods]
impl PyParameters {
    #[new]
    fn new(values: Vec<Complex64>) -> PyResult<Self> {
        SchurParameters::new(values).map(Self).map_err(value_error)
    }

    #[getter]
    fn values(&self) -> Vec<Complex64> {
        self.0.values().to_vec()
    }

    #[getter]
    fn rho(&self) -> Vec<f64> {
        self.0.rho().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// Parameters `-ā_n` of the dual measure.
    fn dual(&self) -> Self {
        Self(opuc::dual_parameters(&self.0))
    }

    /// `(φ_n(z), φ*_n(z))`.
    fn eval_pair(&self, z: Complex64, n: usize) -> PyResult<(Complex64, Complex64)> {
        let pair = opuc::eval_pair(&self.0, z, n).map_err(value_error)?;
        Ok((pair.phi, pair.phi_star))
    }

    fn cd_kernel(&self, xi: Complex64, z: Complex64, n: usize) -> PyResult<Complex64> {
        opuc::cd_kernel_poly(&self.0, xi, z, n).map_err(value_error)
    }

    fn cmv_kernel(&self, xi: Complex64, z: Complex64, n: usize) -> PyResult<Complex64> {
        opuc::cd_kernel_cmv(&self.0, xi, z, n).map_err(value_error)
    }

    /// `log Π_{k<n} (1 - |z f_k|²)/(1 - |f_k|²)` over the backward Schur iterates at `z`.
    fn entropy_product(&self, z: Complex64, n: usize) -> PyResult<f64> {
        let iterates = schur::SchurIterates::backward(&self.0, z, n).map_err(value_error)?;
        schur::entropy_product(&iterates, n).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("SchurParameters(len={})", self.0.len())
    }
}

/// Builds a family from its JSON description, e.g. `{"kind": "geronimus", "a": 0.3}`.
#[pyfunction]
#[pyo3(signature = (family, grid_size = 4096, param_len = 258, truncation = None))]
fn build_family(
    family: &str,
    grid_size: usize,
    param_len: usize,
    truncation: Option<usize>,
) -> PyResult<(PyMeasure, PyParameters)> {
    let built = families::build_family(&parse_family(family)?, grid_size, param_len, truncation)
        .map_err(value_error)?;
    Ok((PyMeasure(built.measure), PyParameters(built.params)))
}

#[pyfunction]
fn builtin_families() -> Vec<(&'static str, &'static str)> {
    BUILTINS.to_vec()
}

/// Runs an experiment config (JSON text) and returns the report as JSON text.
/// With `out`, CSV tables and report.json are written there as well.
#[pyfunction]
#[pyo3(signature = (config, out = None))]
fn run_experiment(py: Python<'_>, config: &str, out: Option<std::path::PathBuf>) -> PyResult<String> {
    let config = ExperimentConfig::from_json(config).map_err(value_error)?;
    let output = py.detach(|| experiment::run(&config)).map_err(value_error)?;
    if let Some(dir) = out {
        experiment::write_outputs(&output, &dir)?;
    }
    serde_json::to_string(&output.report).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn opuclab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMeasure>()?;
    m.add_class::<PyParameters>()?;
    m.add_function(wrap_pyfunction!(build_family, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_families, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
