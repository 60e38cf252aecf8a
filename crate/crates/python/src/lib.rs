//! Python bindings for `mixbvp`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mixbvp::config::ProblemConfig;
use mixbvp::denominator::{
    denominator_report, detect_resonant_modes, diophantine_scan, expected_denominator, separation_bound,
    DenominatorForm, DiophantineScanConfig,
};
use mixbvp::example::{reproduce_example, worked_example};
use mixbvp::mode::{assemble_mode_system, scaled_determinant};
use mixbvp::model::{classify_ratio, validate_problem, Phase, RatioClass, RatioValue, RationalNumber};
use mixbvp::solver::{build_solution, evaluate, growth_probe, verify, SeriesSolution};
use mixbvp::spectral::ModeCoefficients;
use mixbvp::{Error, ProblemSpec};

create_exception!(pymixbvp, UnsolvableError, PyException);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NonorthogonalData { .. } => UnsolvableError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn phase_arg(phase: Option<&str>, spec: Option<&ProblemSpec>) -> PyResult<Phase> {
    match (phase, spec) {
        (Some(p), _) => Phase::parse(p).ok_or_else(|| PyValueError::new_err(format!("unknown phase {p:?}"))),
        (None, Some(spec)) => expected_denominator(spec.order(), &spec.schema).require_phase().map_err(py_err),
        (None, None) => Err(PyValueError::new_err("phase is required")),
    }
}

/// A validated boundary-value problem.
#[pyclass(name = "Problem", frozen, module = "pymixbvp")]
struct PyProblem {
    spec: ProblemSpec,
}

impl PyProblem {
    fn checked(spec: ProblemSpec) -> PyResult<Self> {
        validate_problem(&spec).into_result().map_err(py_err)?;
        Ok(Self { spec })
    }
}

#[pymethods]
impl PyProblem {
    /// Parse a JSON problem description.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Self::checked(ProblemConfig::parse_json(text).and_then(|c| c.to_spec()).map_err(py_err)?)
    }

    /// Load a JSON or TOML problem file.
    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        Self::checked(mixbvp::config::load_problem(path.as_ref()).map_err(py_err)?)
    }

    /// The fourth-order example on (0, 3) × (−1, 1); task 1 or 2.
    #[staticmethod]
    #[pyo3(signature = (task, truncation=None))]
    fn worked_example(task: u8, truncation: Option<usize>) -> PyResult<Self> {
        let mut spec = worked_example(task).map_err(py_err)?;
        if let Some(k) = truncation {
            spec.truncation = k;
        }
        Self::checked(spec)
    }

    #[getter]
    fn order(&self) -> usize {
        self.spec.order()
    }

    #[getter]
    fn l(&self) -> f64 {
        self.spec.l
    }

    #[getter]
    fn a(&self) -> f64 {
        self.spec.a
    }

    #[getter]
    fn truncation(&self) -> usize {
        self.spec.truncation
    }

    /// Non-fatal validation warnings.
    fn warnings(&self) -> PyResult<Vec<String>> {
        validate_problem(&self.spec).into_result().map_err(py_err)
    }

    /// Ratio class and separation constant (rational) or scan summary (irrational).
    #[pyo3(signature = (phase=None, epsilon=0.5, k_max=10_000))]
    fn classify<'py>(
        &self,
        py: Python<'py>,
        phase: Option<&str>,
        epsilon: f64,
        k_max: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let phase = phase_arg(phase, Some(&self.spec))?;
        classify_into(py, &self.spec.ratio, phase, epsilon, k_max)
    }

    fn solve(&self, py: Python<'_>) -> PyResult<PySolution> {
        let sol = py.detach(|| build_solution(&self.spec)).map_err(py_err)?;
        Ok(PySolution { sol })
    }

    /// Modes whose scaled system is rank-deficient, for k = 1..modes.
    fn detect_resonant_modes(&self, py: Python<'_>, modes: usize) -> PyResult<Vec<usize>> {
        Ok(py.detach(|| detect_resonant_modes(&self.spec, modes)).map_err(py_err)?.resonant)
    }

    /// (mantissa, log_scale) of the mode-k determinant.
    fn scaled_determinant(&self, k: usize) -> PyResult<(f64, f64)> {
        let coeffs = ModeCoefficients::compute(&self.spec).map_err(py_err)?;
        let sys = assemble_mode_system(&self.spec, &coeffs, k).map_err(py_err)?;
        let det = scaled_determinant(&sys);
        Ok((det.mantissa, det.log_scale))
    }

    /// ln max|coefficient| under unit data for each k.
    fn growth_probe(&self, ks: Vec<usize>) -> PyResult<Vec<(usize, f64)>> {
        let rows = growth_probe(&self.spec, &ks).map_err(py_err)?;
        Ok(rows.into_iter().map(|r| (r.k, r.log_max_coefficient)).collect())
    }

    /// Per-k rows (k, expected_delta4, mantissa, log_scale, delta5_estimate, resonant).
    #[allow(clippy::type_complexity)]
    fn denominator_table(
        &self,
        py: Python<'_>,
        modes: usize,
    ) -> PyResult<Vec<(usize, Option<f64>, f64, f64, Option<f64>, bool)>> {
        let report = py.detach(|| denominator_report(&self.spec, modes)).map_err(py_err)?;
        Ok(report
            .rows
            .into_iter()
            .map(|r| (r.k, r.expected_delta4, r.scaled_det_mantissa, r.log_scale, r.delta5_estimate, r.resonant))
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Problem(order={}, l={}, a={}, K={})",
            self.spec.order(),
            self.spec.l,
            self.spec.a,
            self.spec.truncation
        )
    }
}

/// A truncated series solution.
#[pyclass(name = "Solution", frozen, module = "pymixbvp")]
struct PySolution {
    sol: SeriesSolution,
}

#[pymethods]
impl PySolution {
    /// ∂ₓ^dx ∂ᵧ^dy u at (x, y).
    #[pyo3(signature = (x, y, dx=0, dy=0))]
    fn evaluate(&self, x: f64, y: f64, dx: usize, dy: usize) -> PyResult<f64> {
        evaluate(&self.sol, x, y, dx, dy).map_err(py_err)
    }

    /// Residual sup-norms on an nx × ny grid.
    #[pyo3(signature = (nx=101, ny=101))]
    fn verify<'py>(&self, py: Python<'py>, nx: usize, ny: usize) -> PyResult<Bound<'py, PyDict>> {
        let r = py.detach(|| verify(&self.sol, nx, ny)).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("pde_residual_sup", r.pde_residual_sup)?;
        d.set_item("boundary_residual_sup", r.boundary_residual_sup)?;
        d.set_item("gluing_residual_sup", r.gluing_residual_sup)?;
        d.set_item("energy_sup", r.energy_sup)?;
        d.set_item("solution_sup", r.solution_sup)?;
        d.set_item("data_sup", r.data_sup)?;
        Ok(d)
    }

    #[getter]
    fn resonant(&self) -> Vec<usize> {
        self.sol.resonant().to_vec()
    }

    #[getter]
    fn m_hat(&self) -> Option<f64> {
        self.sol.m_hat()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.sol.warnings().to_vec()
    }

    /// Basis coefficients of mode k: upper side followed by lower side.
    fn mode_coefficients(&self, k: usize) -> PyResult<Vec<f64>> {
        if k == 0 || k > self.sol.truncation() {
            return Err(PyValueError::new_err(format!("mode {k} outside 1..={}", self.sol.truncation())));
        }
        Ok(self.sol.mode(k).coefficients().to_vec())
    }
}

fn classify_into<'py>(
    py: Python<'py>,
    ratio: &RatioValue,
    phase: Phase,
    epsilon: f64,
    k_max: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let class = classify_ratio(ratio, phase).map_err(py_err)?;
    let form = DenominatorForm { phase: Some(phase) };
    let d = PyDict::new(py);
    d.set_item("class", class.label())?;
    d.set_item("phase", phase.label())?;
    match class {
        RatioClass::AlgebraicIrrational { .. } | RatioClass::FloatUnknown => {
            let scan = diophantine_scan(ratio, &form, &DiophantineScanConfig { epsilon, k_max }).map_err(py_err)?;
            d.set_item("n_hat", scan.n_hat)?;
            d.set_item("worst_k", scan.worst_k)?;
        }
        _ => {
            let bound = separation_bound(&class, &form).map_err(py_err)?;
            d.set_item("delta", bound.delta)?;
            d.set_item("witness_residue", bound.witness_k2)?;
        }
    }
    Ok(d)
}

/// Separation constant of a rational ratio s/t for the given phase.
#[pyfunction]
fn separation_constant(num: i64, den: i64, phase: &str) -> PyResult<f64> {
    let phase = phase_arg(Some(phase), None)?;
    let ratio = RatioValue::Rational(RationalNumber::new(num, den).map_err(py_err)?);
    let class = classify_ratio(&ratio, phase).map_err(py_err)?;
    Ok(separation_bound(&class, &DenominatorForm { phase: Some(phase) }).map_err(py_err)?.delta)
}

/// (N_hat, worst_k) for a ratio given as a float.
#[pyfunction]
#[pyo3(signature = (ratio, phase="0", epsilon=0.5, k_max=10_000))]
fn float_scan(py: Python<'_>, ratio: f64, phase: &str, epsilon: f64, k_max: usize) -> PyResult<(f64, usize)> {
    let phase = phase_arg(Some(phase), None)?;
    let scan = py
        .detach(|| {
            diophantine_scan(
                &RatioValue::Float(ratio),
                &DenominatorForm { phase: Some(phase) },
                &DiophantineScanConfig { epsilon, k_max },
            )
        })
        .map_err(py_err)?;
    Ok((scan.n_hat, scan.worst_k))
}

/// Checks and verdict for the fourth-order example.
#[pyfunction(name = "reproduce_example")]
fn reproduce<'py>(py: Python<'py>, task: u8) -> PyResult<Bound<'py, PyDict>> {
    let r = py.detach(|| reproduce_example(task)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("verdict", r.verdict)?;
    d.set_item(
        "checks",
        r.checks.iter().map(|c| (c.name, c.pass, c.detail.clone())).collect::<Vec<_>>(),
    )?;
    d.set_item("growth", r.growth.iter().map(|g| (g.k, g.log_max_coefficient)).collect::<Vec<_>>())?;
    d.set_item("resonant", r.denominators.resonant)?;
    Ok(d)
}

#[pymodule]
fn pymixbvp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProblem>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(separation_constant, m)?)?;
    m.add_function(wrap_pyfunction!(float_scan, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    m.add("UnsolvableError", m.py().get_type::<UnsolvableError>())?;
    Ok(())
}
