//! Fixed fourth-order problems on (0, 3) × (−1, 1) and manufactured
//! one-mode solutions.

use nalgebra::{DMatrix, DVector};

use crate::defaults;
use crate::denominator::{asymptotic_constant, denominator_report, median, DenominatorReport};
use crate::error::{Error, Result};
use crate::mode::geometry::{compute_root_geometry, RootGeometry, Side};
use crate::model::{BoundarySchema, ProblemSpec, RatioValue, RationalNumber, SinePolynomial};
use crate::solver::{growth_probe, GrowthRow};

/// Boundary orders {0, 1} at y = ±1 (task 1) or {1, 2} at y = −1 and
/// {0, 1} at y = +1 (task 2), zero data.
pub fn worked_example(task: u8) -> Result<ProblemSpec> {
    let q = match task {
        1 => 0,
        2 => 1,
        other => return Err(Error::Config(format!("task must be 1 or 2 (got {other})"))),
    };
    let ratio = RatioValue::Rational(RationalNumber::new(1, 3)?);
    let mut spec = ProblemSpec::homogeneous(2, 3.0, 1.0, ratio, BoundarySchema::new(1, 1, q, 0));
    spec.tolerances.degeneracy = defaults::WORKED_EXAMPLE_DEGENERACY_TOL;
    Ok(spec)
}

/// Modes probed for coefficient growth.
pub const GROWTH_MODES: [usize; 4] = [3, 6, 9, 12];
/// Modes covered by the determinant table.
pub const TABLE_MODES: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleReport {
    pub task: u8,
    pub growth: Vec<GrowthRow>,
    pub denominators: DenominatorReport,
    pub checks: Vec<Check>,
    pub verdict: &'static str,
}

/// Growth table, determinant table and pass/fail checks for either task.
pub fn reproduce_example(task: u8) -> Result<ExampleReport> {
    let mut spec = worked_example(task)?;
    spec.truncation = TABLE_MODES;
    let growth = growth_probe(&spec, &GROWTH_MODES)?;
    let denominators = denominator_report(&spec, TABLE_MODES)?;
    let mut checks = Vec::new();
    let verdict = if task == 1 {
        let logs: Vec<f64> = growth.iter().map(|g| g.log_max_coefficient).collect();
        let increasing = logs.windows(2).all(|w| w[0] < w[1]);
        let factor = (logs[3] - logs[0]).exp();
        let grows = increasing && factor > 10.0;
        checks.push(Check {
            name: "growth along k = 3, 6, 9, 12",
            pass: grows,
            detail: format!("ln|coef| = {logs:?}, |coef(12)|/|coef(3)| = {factor:.3e}"),
        });
        let expected: Vec<usize> = (3..=TABLE_MODES).step_by(3).collect();
        checks.push(Check {
            name: "resonant set is {3, 6, ..., 60}",
            pass: denominators.resonant == expected,
            detail: format!("detected {:?}", denominators.resonant),
        });
        if grows {
            "NOT solvable by Fourier method (growth confirmed)"
        } else {
            "growth not confirmed"
        }
    } else {
        let mags: Vec<f64> = denominators.rows.iter().map(|r| r.scaled_det_mantissa.abs()).collect();
        let min = mags.iter().copied().fold(f64::INFINITY, f64::min);
        let med = median(&mags);
        let separated = min >= 0.25 * med;
        checks.push(Check {
            name: "determinant separated for k ≤ 60",
            pass: separated,
            detail: format!("min |mantissa| = {min:.6}, median = {med:.6}"),
        });
        let constant = asymptotic_constant(&spec, 30..=60)?;
        checks.push(Check {
            name: "mantissa/Δ4 constant on k ∈ [30, 60]",
            pass: constant.dispersion <= 0.05,
            detail: format!("M̂ = {:.12}, dispersion = {:.3e}", constant.m_hat, constant.dispersion),
        });
        checks.push(Check {
            name: "no resonant modes",
            pass: denominators.resonant.is_empty(),
            detail: format!("detected {:?}", denominators.resonant),
        });
        if separated { "solvable (determinant separated)" } else { "determinant not separated" }
    };
    Ok(ExampleReport { task, growth, denominators, checks, verdict })
}

/// A single-mode exact solution u = u_k(y)·X_k(x) and its boundary traces.
#[derive(Debug, Clone, PartialEq)]
pub struct ManufacturedMode {
    pub k: usize,
    /// Upper-basis coefficients followed by lower-basis coefficients.
    pub coefficients: Vec<f64>,
    pub geometry: RootGeometry,
    /// φ_{sk}: D_y^{q+γs} u_k(−a).
    pub phi: Vec<f64>,
    /// ψ_{sk}: D_y^{χ+δs} u_k(a).
    pub psi: Vec<f64>,
}

impl ManufacturedMode {
    /// Chooses the lower coefficients, then fixes the upper ones by matching
    /// derivatives 0..2n−1 at y = 0.
    pub fn new(spec: &ProblemSpec, k: usize, lower: &[f64]) -> Result<Self> {
        let n = spec.n;
        if lower.len() != 2 * n || k == 0 {
            return Err(Error::InvalidData(format!("need 2n = {} lower coefficients and k ≥ 1", 2 * n)));
        }
        let geom = compute_root_geometry(n, k, spec.l);
        let lower_value = |t: usize, y: f64| -> f64 {
            lower
                .iter()
                .enumerate()
                .map(|(i, c)| c * geom.scaled_shape(Side::Lower, i, t, y, 0.0))
                .sum()
        };
        let cauchy = DVector::from_iterator(2 * n, (0..2 * n).map(|t| lower_value(t, 0.0)));
        let basis = DMatrix::from_fn(2 * n, 2 * n, |t, i| geom.scaled_shape(Side::Upper, i, t, 0.0, 0.0));
        let upper = basis
            .lu()
            .solve(&cauchy)
            .ok_or_else(|| Error::InvalidData("singular Cauchy matrix".into()))?;
        let lam = geom.lambda();
        let upper_value = |t: usize, y: f64| -> f64 {
            upper
                .iter()
                .enumerate()
                .map(|(i, c)| c * geom.scaled_shape(Side::Upper, i, t, y, 0.0))
                .sum()
        };
        let phi = spec
            .schema
            .lower_orders(n)
            .into_iter()
            .map(|o| lam.powi(o as i32) * lower_value(o, -spec.a))
            .collect();
        let psi = spec
            .schema
            .upper_orders(n)
            .into_iter()
            .map(|o| lam.powi(o as i32) * upper_value(o, spec.a))
            .collect();
        let coefficients = upper.iter().copied().chain(lower.iter().copied()).collect();
        Ok(Self { k, coefficients, geometry: geom, phi, psi })
    }

    /// Copy of `spec` whose data are exactly the traces of this mode.
    pub fn problem(&self, spec: &ProblemSpec) -> Result<ProblemSpec> {
        let norm = (2.0 / spec.l).sqrt();
        let trace = |v: f64| -> Result<_> {
            let terms = if v == 0.0 { Vec::new() } else { vec![(self.k, v * norm)] };
            Ok(SinePolynomial::new(terms, spec.l)?.into())
        };
        let mut out = spec.clone();
        out.phi = self.phi.iter().map(|v| trace(*v)).collect::<Result<_>>()?;
        out.psi = self.psi.iter().map(|v| trace(*v)).collect::<Result<_>>()?;
        Ok(out)
    }

    /// u(x, y) of the exact solution.
    pub fn value(&self, x: f64, y: f64, l: f64) -> f64 {
        let (side, offset) = if y >= 0.0 { (Side::Upper, 0) } else { (Side::Lower, self.geometry.basis_len(Side::Upper)) };
        let uk: f64 = (0..self.geometry.basis_len(side))
            .map(|i| self.coefficients[offset + i] * self.geometry.scaled_shape(side, i, 0, y, 0.0))
            .sum();
        uk * crate::spectral::eigenfunction_derivative(self.k, 0, x, l)
    }
}
