//! The 4n × 4n coupling system for one mode, with exponential column scales
//! factored out so every stored entry is O(1).
//!
//! Row layout: n conditions at y = +a (orders χ + δj, j ascending), n at
//! y = −a (orders q + γj), then 2n gluing rows at y = 0 (orders 0..2n−1).
//! Unknowns: the 2n upper coefficients followed by the 2n lower ones, in
//! [`SideBasis`](super::geometry::SideBasis) order. Every boundary row is
//! divided by λ^{order}, so its right-hand side is λ^{−order}·(data).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{validate_problem, BoundarySchema, ProblemSpec};
use crate::mode::geometry::{compute_root_geometry, RootGeometry, Side};
use crate::spectral::ModeCoefficients;

/// Boundary data of one mode: φ_{sk} and ψ_{sk} for s = 0..n−1.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeData {
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
}

impl ModeData {
    pub fn zero(n: usize) -> Self {
        Self { phi: vec![0.0; n], psi: vec![0.0; n] }
    }

    pub fn unit(n: usize) -> Self {
        Self { phi: vec![1.0; n], psi: vec![1.0; n] }
    }

    pub fn from_coefficients(coeffs: &ModeCoefficients, k: usize) -> Self {
        Self { phi: coeffs.phi_mode(k), psi: coeffs.psi_mode(k) }
    }

    pub fn max_abs(&self) -> f64 {
        self.phi.iter().chain(&self.psi).fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledLinearSystem {
    matrix: DMatrix<f64>,
    column_scales: Vec<f64>,
    rhs: DVector<f64>,
    rhs_scale: f64,
    upper_len: usize,
    geometry: Option<RootGeometry>,
}

/// Determinant as mantissa·e^{log_scale}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledDeterminant {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl ScaledDeterminant {
    /// mantissa·e^{log_scale}; overflows for large k.
    pub fn value(&self) -> f64 {
        self.mantissa * self.log_scale.exp()
    }
}

impl ScaledLinearSystem {
    /// System from explicit parts; `rhs` is taken at unit scale.
    pub fn from_parts(matrix: DMatrix<f64>, column_scales: Vec<f64>, rhs: DVector<f64>) -> Result<Self> {
        if !matrix.is_square() || matrix.ncols() != column_scales.len() || rhs.len() != matrix.nrows() {
            return Err(Error::InvalidData("inconsistent system dimensions".into()));
        }
        let (rhs, rhs_scale) = normalise(rhs);
        Ok(Self {
            upper_len: matrix.ncols(),
            matrix,
            column_scales,
            rhs,
            rhs_scale,
            geometry: None,
        })
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Natural logs of the factored-out column magnitudes.
    pub fn column_scales(&self) -> &[f64] {
        &self.column_scales
    }

    /// Right-hand side normalised to unit max-norm (or zero).
    pub fn rhs(&self) -> &DVector<f64> {
        &self.rhs
    }

    pub fn rhs_scale(&self) -> f64 {
        self.rhs_scale
    }

    pub fn raw_rhs(&self) -> DVector<f64> {
        &self.rhs * self.rhs_scale.exp()
    }

    pub fn upper_len(&self) -> usize {
        self.upper_len
    }

    pub fn geometry(&self) -> Option<&RootGeometry> {
        self.geometry.as_ref()
    }

    pub fn log_scale(&self) -> f64 {
        self.column_scales.iter().sum()
    }

    /// Matrix with the column scales multiplied back in.
    pub fn unscaled_matrix(&self) -> DMatrix<f64> {
        let mut m = self.matrix.clone();
        for (j, e) in self.column_scales.iter().enumerate() {
            m.column_mut(j).scale_mut(e.exp());
        }
        m
    }

    /// Same matrix with a different right-hand side (raw scale).
    pub fn with_rhs(&self, rhs: DVector<f64>) -> Self {
        let (rhs, rhs_scale) = normalise(rhs);
        Self { rhs, rhs_scale, ..self.clone() }
    }
}

fn normalise(rhs: DVector<f64>) -> (DVector<f64>, f64) {
    let peak = rhs.amax();
    if peak > 0.0 {
        (rhs / peak, peak.ln())
    } else {
        (rhs, 0.0)
    }
}

/// Assembles the coupling system for mode `k` of a validated problem.
pub fn assemble_mode_system(spec: &ProblemSpec, coeffs: &ModeCoefficients, k: usize) -> Result<ScaledLinearSystem> {
    validate_problem(spec).into_result()?;
    if k == 0 || k > coeffs.modes() {
        return Err(Error::InvalidData(format!("mode {k} outside 1..={}", coeffs.modes())));
    }
    let geom = compute_root_geometry(spec.n, k, spec.l);
    Ok(assemble(geom, &spec.schema, spec.a, &ModeData::from_coefficients(coeffs, k)))
}

pub(crate) fn assemble(geom: RootGeometry, schema: &BoundarySchema, a: f64, data: &ModeData) -> ScaledLinearSystem {
    let n = geom.n();
    let size = 4 * n;
    let up = geom.basis_len(Side::Upper);
    let lambda = geom.lambda();

    let mut scales = Vec::with_capacity(size);
    for i in 0..up {
        scales.push((geom.growth(Side::Upper, i) * a).max(0.0));
    }
    for i in 0..geom.basis_len(Side::Lower) {
        scales.push((-geom.growth(Side::Lower, i) * a).max(0.0));
    }

    let mut matrix = DMatrix::<f64>::zeros(size, size);
    let mut rhs = DVector::<f64>::zeros(size);
    let mut row = 0;
    for (j, order) in schema.upper_orders(n).into_iter().enumerate() {
        for i in 0..up {
            matrix[(row, i)] = geom.scaled_shape(Side::Upper, i, order, a, scales[i]);
        }
        rhs[row] = data.psi[j] / lambda.powi(order as i32);
        row += 1;
    }
    for (j, order) in schema.lower_orders(n).into_iter().enumerate() {
        for i in 0..geom.basis_len(Side::Lower) {
            matrix[(row, up + i)] = geom.scaled_shape(Side::Lower, i, order, -a, scales[up + i]);
        }
        rhs[row] = data.phi[j] / lambda.powi(order as i32);
        row += 1;
    }
    for t in 0..2 * n {
        for i in 0..up {
            matrix[(row, i)] = geom.scaled_shape(Side::Upper, i, t, 0.0, scales[i]);
        }
        for i in 0..geom.basis_len(Side::Lower) {
            matrix[(row, up + i)] = -geom.scaled_shape(Side::Lower, i, t, 0.0, scales[up + i]);
        }
        row += 1;
    }

    let (rhs, rhs_scale) = normalise(rhs);
    ScaledLinearSystem {
        matrix,
        column_scales: scales,
        rhs,
        rhs_scale,
        upper_len: up,
        geometry: Some(geom),
    }
}

/// Determinant of the O(1) matrix by pivoted elimination, with Σ e_j.
pub fn scaled_determinant(sys: &ScaledLinearSystem) -> ScaledDeterminant {
    ScaledDeterminant {
        mantissa: sys.matrix.clone().lu().determinant(),
        log_scale: sys.log_scale(),
    }
}
