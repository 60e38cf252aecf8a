//! Series solution u(x, y) = Σ u_k(y)·X_k(x): the mode loop, pointwise
//! evaluation, residual checks, the growth probe and smoothness surrogates.

use rayon::prelude::*;
use serde::Serialize;

use crate::defaults;
use crate::denominator::{asymptotic_constant, expected_denominator};
use crate::error::{Error, Result};
use crate::mode::geometry::{compute_root_geometry, Side};
use crate::mode::solve::{lu_solve, solve_mode, ModeSolution};
use crate::mode::system::{assemble, scaled_determinant, ModeData};
use crate::model::{classify_ratio, uniform_nodes, BoundaryFunction, Phase, ProblemSpec};
use crate::spectral::{eigenfunction_derivative, simpson, sine_coefficient, ModeCoefficients};
use crate::model::validate_problem;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSolution {
    spec: ProblemSpec,
    coefficients: ModeCoefficients,
    modes: Vec<ModeSolution>,
    resonant: Vec<usize>,
    m_hat: Option<f64>,
    warnings: Vec<String>,
}

impl SeriesSolution {
    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn data_coefficients(&self) -> &ModeCoefficients {
        &self.coefficients
    }

    /// Mode solutions for k = 1..K.
    pub fn modes(&self) -> &[ModeSolution] {
        &self.modes
    }

    pub fn mode(&self, k: usize) -> &ModeSolution {
        &self.modes[k - 1]
    }

    pub fn resonant(&self) -> &[usize] {
        &self.resonant
    }

    pub fn m_hat(&self) -> Option<f64> {
        self.m_hat
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn truncation(&self) -> usize {
        self.modes.len()
    }
}

pub fn build_solution(spec: &ProblemSpec) -> Result<SeriesSolution> {
    let mut warnings = validate_problem(spec).into_result()?;
    let coefficients = ModeCoefficients::compute(spec)?;
    let data_norm = coefficients.norm();
    let tol = spec.tolerances.degeneracy;

    let solved: Vec<Result<ModeSolution>> = (1..=spec.truncation)
        .into_par_iter()
        .map(|k| {
            let geom = compute_root_geometry(spec.n, k, spec.l);
            let data = ModeData::from_coefficients(&coefficients, k);
            let sys = assemble(geom, &spec.schema, spec.a, &data);
            let sol = solve_mode(&sys, tol)?;
            if !sol.degenerate() {
                return Ok(sol);
            }
            if data.max_abs() > defaults::ORTHOGONALITY_TOL * data_norm {
                return Err(Error::NonorthogonalData { k });
            }
            match spec.kernel_amplitudes.get(&k) {
                Some(amps) => sol.with_kernel_amplitudes(amps),
                None => Ok(sol),
            }
        })
        .collect();
    let modes = solved.into_iter().collect::<Result<Vec<_>>>()?;

    let resonant: Vec<usize> = modes.iter().filter(|m| m.degenerate()).map(ModeSolution::k).collect();
    for k in spec.kernel_amplitudes.keys() {
        if !resonant.contains(k) {
            warnings.push(format!("kernel amplitude for nonresonant mode k={k} ignored"));
        }
    }
    let form = expected_denominator(spec.order(), &spec.schema);
    if let Some(phase) = form.phase {
        if let Ok(class) = classify_ratio(&spec.ratio, phase) {
            if !resonant.is_empty() {
                warnings.push(format!(
                    "resonant modes {resonant:?} ({}): kernel amplitudes are free",
                    class.label()
                ));
            }
        }
    }
    let m_hat = form
        .tabulated()
        .then(|| asymptotic_constant(spec, (spec.truncation / 2).max(1)..=spec.truncation).ok())
        .flatten()
        .map(|c| c.m_hat);
    Ok(SeriesSolution {
        spec: spec.clone(),
        coefficients,
        modes,
        resonant,
        m_hat,
        warnings,
    })
}

fn check_point(spec: &ProblemSpec, x: f64, y: f64, orders: &[usize]) -> Result<()> {
    let slack = 1e-12 * spec.l.max(spec.a);
    if !(x >= -slack && x <= spec.l + slack && y >= -spec.a - slack && y <= spec.a + slack) {
        return Err(Error::OutOfDomain { x, y });
    }
    let max = 2 * spec.n;
    match orders.iter().find(|&&o| o > max) {
        Some(&order) => Err(Error::DerivativeOrder { order, max }),
        None => Ok(()),
    }
}

/// D_x^{dx} D_y^{dy} u at (x, y); y = 0 uses the upper expansion.
pub fn evaluate(sol: &SeriesSolution, x: f64, y: f64, dx: usize, dy: usize) -> Result<f64> {
    check_point(&sol.spec, x, y, &[dx, dy])?;
    let x = x.clamp(0.0, sol.spec.l);
    let y = y.clamp(-sol.spec.a, sol.spec.a);
    Ok(sol
        .modes
        .iter()
        .map(|m| m.derivative(dy, y) * eigenfunction_derivative(m.k(), dx, x, sol.spec.l))
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryResidual {
    pub condition: String,
    pub sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub pde_residual_sup: f64,
    pub boundary_residual_sup: f64,
    pub boundary_residuals: Vec<BoundaryResidual>,
    pub gluing_residual_sup: f64,
    pub energy_sup: f64,
    pub solution_sup: f64,
    pub data_sup: f64,
}

/// Mode derivatives u_k^{(t)}(y), t = 0..2n, for every k, using `side`.
fn mode_table(sol: &SeriesSolution, side: Side, y: f64) -> Vec<Vec<f64>> {
    let n2 = 2 * sol.spec.n;
    sol.modes
        .iter()
        .map(|m| (0..=n2).map(|t| m.derivative_on(side, t, y)).collect())
        .collect()
}

fn side_of(y: f64) -> Side {
    if y >= 0.0 {
        Side::Upper
    } else {
        Side::Lower
    }
}

/// X_k^{(p)}(x) for k = 1..K, p = 0..2n.
fn eigen_table(sol: &SeriesSolution, x: f64) -> Vec<Vec<f64>> {
    let n2 = 2 * sol.spec.n;
    (1..=sol.truncation())
        .map(|k| (0..=n2).map(|p| eigenfunction_derivative(k, p, x, sol.spec.l)).collect())
        .collect()
}

fn combine(modes: &[Vec<f64>], eigen: &[Vec<f64>], t: usize, p: usize) -> f64 {
    modes.iter().zip(eigen).map(|(m, e)| m[t] * e[p]).sum()
}

pub fn verify(sol: &SeriesSolution, nx: usize, ny: usize) -> Result<ResidualReport> {
    if nx < 9 || ny < 9 {
        return Err(Error::InvalidData(format!("verification grid must be at least 9 × 9 (got {nx} × {ny})")));
    }
    let spec = &sol.spec;
    let n2 = 2 * spec.n;
    let xs = uniform_nodes(nx, spec.l);
    let ys: Vec<f64> = uniform_nodes(ny, 2.0 * spec.a).into_iter().map(|v| v - spec.a).collect();
    let eigen: Vec<Vec<Vec<f64>>> = xs.iter().map(|&x| eigen_table(sol, x)).collect();

    // solution sup-norm and PDE residual on the grid
    let (solution_sup, pde_residual_sup) = ys
        .par_iter()
        .map(|&y| {
            let modes = mode_table(sol, side_of(y), y);
            let interior_y = y != 0.0 && y.abs() < spec.a;
            let sign = y.signum();
            let mut sup = 0.0f64;
            let mut pde = 0.0f64;
            for (i, e) in eigen.iter().enumerate() {
                sup = sup.max(combine(&modes, e, 0, 0).abs());
                if interior_y && i > 0 && i + 1 < eigen.len() {
                    let r = combine(&modes, e, 0, n2) + sign * combine(&modes, e, n2, 0);
                    pde = pde.max(r.abs());
                }
            }
            (sup, pde)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));

    // boundary conditions
    let mut boundary_residuals = Vec::new();
    let mut data_sup = 0.0f64;
    let sides = [
        ("y=-a", -spec.a, spec.schema.lower_orders(spec.n), &spec.phi, "phi"),
        ("y=+a", spec.a, spec.schema.upper_orders(spec.n), &spec.psi, "psi"),
    ];
    for (place, y, orders, data, name) in sides {
        let modes = mode_table(sol, side_of(y), y);
        for (s, (&order, f)) in orders.iter().zip(data.iter()).enumerate() {
            let mut sup = 0.0f64;
            for (x, e) in xs.iter().zip(&eigen) {
                let target = f.value(*x);
                data_sup = data_sup.max(target.abs());
                sup = sup.max((combine(&modes, e, order, 0) - target).abs());
            }
            boundary_residuals.push(BoundaryResidual {
                condition: format!("{name}[{s}]: D_y^{order} u at {place}"),
                sup,
            });
        }
    }
    let boundary_residual_sup = boundary_residuals.iter().map(|b| b.sup).fold(0.0, f64::max);

    // gluing across y = 0
    let upper = mode_table(sol, Side::Upper, 0.0);
    let lower = mode_table(sol, Side::Lower, 0.0);
    let mut gluing_residual_sup = 0.0f64;
    for e in &eigen {
        for t in 0..n2 {
            let jump = combine(&upper, e, t, 0) - combine(&lower, e, t, 0);
            gluing_residual_sup = gluing_residual_sup.max(jump.abs());
        }
    }

    // ∫ [D_y^{2n} u]² dx by Simpson on a grid resolving every retained mode
    let mut count = (defaults::SAMPLES_PER_PERIOD * sol.truncation() + 1).max(nx);
    if count.is_multiple_of(2) {
        count += 1;
    }
    let fine: Vec<f64> = uniform_nodes(count, spec.l);
    let h = spec.l / (count - 1) as f64;
    let fine_eigen: Vec<Vec<f64>> = fine
        .iter()
        .map(|&x| (1..=sol.truncation()).map(|k| eigenfunction_derivative(k, 0, x, spec.l)).collect())
        .collect();
    let energy_sup = ys
        .par_iter()
        .map(|&y| {
            let top: Vec<f64> = sol.modes.iter().map(|m| m.derivative(n2, y)).collect();
            let values: Vec<f64> = fine_eigen
                .iter()
                .map(|e| {
                    let v: f64 = top.iter().zip(e).map(|(a, b)| a * b).sum();
                    v * v
                })
                .collect();
            simpson(&values, h)
        })
        .reduce(|| 0.0, f64::max);

    Ok(ResidualReport {
        pde_residual_sup,
        boundary_residual_sup,
        boundary_residuals,
        gluing_residual_sup,
        energy_sup,
        solution_sup,
        data_sup,
    })
}

/// u on an nx × ny grid, rows ordered by y then x.
pub fn sample_grid(sol: &SeriesSolution, nx: usize, ny: usize) -> Vec<(f64, f64, f64)> {
    let spec = &sol.spec;
    let xs = uniform_nodes(nx.max(2), spec.l);
    let ys: Vec<f64> = uniform_nodes(ny.max(2), 2.0 * spec.a).into_iter().map(|v| v - spec.a).collect();
    let eigen: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| (1..=sol.truncation()).map(|k| eigenfunction_derivative(k, 0, x, spec.l)).collect())
        .collect();
    ys.par_iter()
        .flat_map_iter(|&y| {
            let values: Vec<f64> = sol.modes.iter().map(|m| m.derivative(0, y)).collect();
            xs.iter()
                .zip(&eigen)
                .map(|(&x, e)| (x, y, values.iter().zip(e).map(|(a, b)| a * b).sum::<f64>()))
                .collect::<Vec<_>>()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRow {
    pub k: usize,
    /// ln max_j |coefficient_j| for unit data; +∞ when the solve breaks down.
    pub log_max_coefficient: f64,
    pub scaled_det_mantissa: f64,
    pub log_scale: f64,
}

/// Solves with φ_{sk} = ψ_{sk} = 1 for each k and reports the largest
/// coefficient on a log scale. No rank cutoff is applied.
pub fn growth_probe(spec: &ProblemSpec, k_list: &[usize]) -> Result<Vec<GrowthRow>> {
    validate_problem(spec).into_result()?;
    if let Some(&k) = k_list.iter().find(|&&k| k == 0) {
        return Err(Error::InvalidData(format!("mode index must be positive (got {k})")));
    }
    Ok(k_list
        .par_iter()
        .map(|&k| {
            let geom = compute_root_geometry(spec.n, k, spec.l);
            let sys = assemble(geom, &spec.schema, spec.a, &ModeData::unit(spec.n));
            let det = scaled_determinant(&sys);
            let log_max_coefficient = match lu_solve(&sys) {
                Some(z) => z
                    .iter()
                    .zip(sys.column_scales())
                    .filter(|(v, _)| **v != 0.0)
                    .map(|(v, e)| v.abs().ln() - e)
                    .fold(f64::NEG_INFINITY, f64::max),
                None => f64::INFINITY,
            };
            GrowthRow { k, log_max_coefficient, scaled_det_mantissa: det.mantissa, log_scale: det.log_scale }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothnessVerdict {
    SufficientT2,
    SufficientT3,
    Inconclusive,
}

impl SmoothnessVerdict {
    pub fn label(self) -> &'static str {
        match self {
            SmoothnessVerdict::SufficientT2 => "sufficient-T2",
            SmoothnessVerdict::SufficientT3 => "sufficient-T3",
            SmoothnessVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothnessEntry {
    pub function: String,
    /// Fitted p in |c_k| ∼ k^{−p}; absent for finite sine spectra.
    pub decay_exponent: Option<f64>,
    pub verdict: SmoothnessVerdict,
}

/// Coefficient-decay surrogate for the smoothness hypotheses; it does not
/// verify the hypotheses themselves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothnessReport {
    pub entries: Vec<SmoothnessEntry>,
    pub required_exponent: f64,
    pub verdict: SmoothnessVerdict,
}

/// Least-squares slope of ln(envelope) against ln k over the upper half of
/// the modes above the noise floor.
pub fn decay_exponent(coefficients: &[f64]) -> Option<f64> {
    let mut envelope = coefficients.iter().map(|c| c.abs()).collect::<Vec<_>>();
    for i in (0..envelope.len().saturating_sub(1)).rev() {
        envelope[i] = envelope[i].max(envelope[i + 1]);
    }
    let peak = envelope.first().copied().unwrap_or(0.0);
    if peak == 0.0 {
        return None;
    }
    let usable = envelope.iter().take_while(|e| **e > 1e-12 * peak).count();
    let start = usable / 2;
    let points: Vec<(f64, f64)> = (start.max(1)..usable)
        .map(|i| (((i + 1) as f64).ln(), envelope[i].ln()))
        .collect();
    if points.len() < 3 {
        return None;
    }
    let m = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    Some(-sxy / sxx)
}

pub fn smoothness_check(spec: &ProblemSpec) -> Result<SmoothnessReport> {
    validate_problem(spec).into_result()?;
    let irrational = classify_ratio(&spec.ratio, Phase::Zero)?.is_irrational();
    let base = (2 * spec.n + 2) as f64;
    let (required, pass) = if irrational {
        (base + defaults::EPSILON, SmoothnessVerdict::SufficientT3)
    } else {
        (base, SmoothnessVerdict::SufficientT2)
    };
    let mut entries = Vec::new();
    for (name, data) in [("phi", &spec.phi), ("psi", &spec.psi)] {
        for (s, f) in data.iter().enumerate() {
            let function = format!("{name}[{s}]");
            let entry = match f {
                BoundaryFunction::Sine(_) => SmoothnessEntry {
                    function,
                    decay_exponent: None,
                    verdict: SmoothnessVerdict::SufficientT2,
                },
                BoundaryFunction::Samples(samples) => {
                    let top = 2 * (samples.samples().len() - 1) / defaults::SAMPLES_PER_PERIOD;
                    let coeffs = (1..=top).map(|k| sine_coefficient(f, k)).collect::<Result<Vec<_>>>()?;
                    let exponent = decay_exponent(&coeffs);
                    let verdict = match exponent {
                        Some(p) if p >= required => pass,
                        None if coeffs.iter().all(|c| *c == 0.0) => SmoothnessVerdict::SufficientT2,
                        _ => SmoothnessVerdict::Inconclusive,
                    };
                    SmoothnessEntry { function, decay_exponent: exponent, verdict }
                }
            };
            entries.push(entry);
        }
    }
    let verdict = entries.iter().map(|e| e.verdict).max().unwrap_or(SmoothnessVerdict::SufficientT2);
    Ok(SmoothnessReport { entries, required_exponent: required, verdict })
}
