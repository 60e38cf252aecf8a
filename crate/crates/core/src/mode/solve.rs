//! Solving one mode system, with a rank test on the scaled matrix.

use nalgebra::{DMatrix, DVector};

use crate::defaults;
use crate::error::{Error, Result};
use crate::mode::geometry::{RootGeometry, Side};
use crate::mode::system::ScaledLinearSystem;

/// Coefficients of u_k in both half-line bases.
///
/// Stored in scaled form z_j = e^{e_j}·x_j, where x_j multiplies basis
/// function j and e_j is the column scale of the system it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSolution {
    k: usize,
    scaled: DVector<f64>,
    column_scales: Vec<f64>,
    upper_len: usize,
    degenerate: bool,
    kernel_basis: Vec<DVector<f64>>,
    residual: f64,
    sigma_ratio: f64,
    geometry: Option<RootGeometry>,
}

impl ModeSolution {
    /// Mode that contributes nothing.
    pub fn zero(geometry: RootGeometry) -> Self {
        let size = 4 * geometry.n();
        let upper_len = geometry.basis_len(Side::Upper);
        Self {
            k: geometry.k(),
            scaled: DVector::zeros(size),
            column_scales: vec![0.0; size],
            upper_len,
            degenerate: false,
            kernel_basis: Vec::new(),
            residual: 0.0,
            sigma_ratio: 1.0,
            geometry: Some(geometry),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degenerate(&self) -> bool {
        self.degenerate
    }

    /// Orthonormal kernel vectors of the scaled matrix.
    pub fn kernel_basis(&self) -> &[DVector<f64>] {
        &self.kernel_basis
    }

    /// Relative residual of the solved system.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// σ_min/σ_max of the scaled matrix.
    pub fn sigma_ratio(&self) -> f64 {
        self.sigma_ratio
    }

    pub fn geometry(&self) -> Option<&RootGeometry> {
        self.geometry.as_ref()
    }

    pub fn scaled_coefficients(&self) -> &DVector<f64> {
        &self.scaled
    }

    pub fn column_scales(&self) -> &[f64] {
        &self.column_scales
    }

    /// x_j = z_j·e^{−e_j}; tiny growing-column entries may underflow to 0.
    pub fn coefficients(&self) -> Vec<f64> {
        self.scaled
            .iter()
            .zip(&self.column_scales)
            .map(|(z, e)| z * (-e).exp())
            .collect()
    }

    /// Upper-side coefficients (c_p^1, c_p^2 for even n).
    pub fn upper_coeffs(&self) -> Vec<f64> {
        self.coefficients()[..self.upper_len].to_vec()
    }

    /// Lower-side coefficients (d₀, d_s^1, d_s^2, d_n for even n).
    pub fn lower_coeffs(&self) -> Vec<f64> {
        self.coefficients()[self.upper_len..].to_vec()
    }

    /// Largest ln|x_j| over nonzero coefficients; −∞ for the zero solution.
    pub fn log_max_coefficient(&self) -> f64 {
        self.scaled
            .iter()
            .zip(&self.column_scales)
            .filter(|(z, _)| **z != 0.0)
            .map(|(z, e)| z.abs().ln() - e)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Adds Σ amplitude_i · kernel_i to the coefficients.
    pub fn with_kernel_amplitudes(&self, amplitudes: &[f64]) -> Result<Self> {
        if amplitudes.len() > self.kernel_basis.len() {
            return Err(Error::InvalidData(format!(
                "mode k={} has {} kernel vectors, got {} amplitudes",
                self.k,
                self.kernel_basis.len(),
                amplitudes.len()
            )));
        }
        let mut out = self.clone();
        for (c, v) in amplitudes.iter().zip(&self.kernel_basis) {
            out.scaled.axpy(*c, v, 1.0);
        }
        Ok(out)
    }

    /// t-th derivative of u_k at y, using the upper basis for y ≥ 0.
    pub fn derivative(&self, t: usize, y: f64) -> f64 {
        let side = if y >= 0.0 { Side::Upper } else { Side::Lower };
        self.derivative_on(side, t, y)
    }

    /// t-th derivative of the `side` expansion at y (y = 0 allowed for both).
    pub fn derivative_on(&self, side: Side, t: usize, y: f64) -> f64 {
        let geom = self.geometry.as_ref().expect("mode solution without geometry");
        let offset = match side {
            Side::Upper => 0,
            Side::Lower => self.upper_len,
        };
        let sum: f64 = (0..geom.basis_len(side))
            .map(|i| {
                let z = self.scaled[offset + i];
                if z == 0.0 {
                    0.0
                } else {
                    z * geom.scaled_shape(side, i, t, y, self.column_scales[offset + i])
                }
            })
            .sum();
        geom.lambda().powi(t as i32) * sum
    }
}

/// Singular values of the scaled matrix, largest first.
pub fn singular_values(matrix: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = matrix.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// σ_min/σ_max of the scaled matrix (0 for the zero matrix).
pub fn sigma_ratio(matrix: &DMatrix<f64>) -> f64 {
    let s = singular_values(matrix);
    match (s.first(), s.last()) {
        (Some(&max), Some(&min)) if max > 0.0 => min / max,
        _ => 0.0,
    }
}

/// Pivoted-LU solve of the scaled system ignoring the rank test; `None` when
/// a pivot is exactly zero. Returns z at the raw rhs scale.
pub fn lu_solve(sys: &ScaledLinearSystem) -> Option<DVector<f64>> {
    let z = sys.matrix().clone().lu().solve(sys.rhs())?;
    z.iter().all(|v| v.is_finite()).then(|| z * sys.rhs_scale().exp())
}

fn relative_residual(matrix: &DMatrix<f64>, z: &DVector<f64>, rhs: &DVector<f64>) -> f64 {
    let r = matrix * z - rhs;
    let mut scale = rhs.amax();
    for i in 0..matrix.nrows() {
        let row: f64 = (0..matrix.ncols()).map(|j| (matrix[(i, j)] * z[j]).abs()).sum();
        scale = scale.max(row);
    }
    if scale == 0.0 {
        0.0
    } else {
        r.amax() / scale
    }
}

pub fn solve_mode(sys: &ScaledLinearSystem, degeneracy_tol: f64) -> Result<ModeSolution> {
    let k = sys.geometry().map_or(0, RootGeometry::k);
    let matrix = sys.matrix();
    let size = sys.size();
    let svd = matrix.clone().svd(true, true);
    let sigma = &svd.singular_values;
    let sigma_max = sigma.max();
    let sigma_min = sigma.min();
    let ratio = if sigma_max > 0.0 { sigma_min / sigma_max } else { 0.0 };
    let peak = sys.rhs_scale().exp();

    let finish = |scaled: DVector<f64>, degenerate, kernel_basis, residual| ModeSolution {
        k,
        scaled,
        column_scales: sys.column_scales().to_vec(),
        upper_len: sys.upper_len(),
        degenerate,
        kernel_basis,
        residual,
        sigma_ratio: ratio,
        geometry: sys.geometry().cloned(),
    };

    if ratio >= degeneracy_tol {
        if let Some(z) = matrix.clone().lu().solve(sys.rhs()) {
            let residual = relative_residual(matrix, &z, sys.rhs());
            return Ok(finish(z * peak, false, Vec::new(), residual));
        }
    }

    let u = svd.u.as_ref().expect("left singular vectors");
    let v_t = svd.v_t.as_ref().expect("right singular vectors");
    let threshold = degeneracy_tol * sigma_max;
    let rhs = sys.rhs();
    let rhs_norm = rhs.norm();

    let mut kernel = Vec::new();
    let mut z = DVector::<f64>::zeros(size);
    let mut left_null_sq = 0.0;
    for i in 0..size {
        let ui = u.column(i);
        let vi = v_t.row(i).transpose();
        let proj = ui.dot(rhs);
        if sigma[i] < threshold || sigma_max == 0.0 {
            left_null_sq += proj * proj;
            kernel.push(vi.normalize());
        } else {
            z.axpy(proj / sigma[i], &vi, 1.0);
        }
    }
    if rhs_norm > 0.0 && left_null_sq.sqrt() > defaults::LEFT_NULL_TOL * rhs_norm {
        return Err(Error::NonorthogonalData { k });
    }
    // Gram–Schmidt keeps the kernel orthonormal against roundoff.
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(kernel.len());
    for mut v in kernel {
        for b in &basis {
            let c = b.dot(&v);
            v.axpy(-c, b, 1.0);
        }
        basis.push(v.normalize());
    }
    let residual = relative_residual(matrix, &z, rhs);
    Ok(finish(z * peak, true, basis, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BoundarySchema;
    use crate::mode::geometry::compute_root_geometry;
    use crate::mode::system::{assemble, ModeData};

    fn task(q: u32, k: usize) -> ScaledLinearSystem {
        let geom = compute_root_geometry(2, k, 3.0);
        assemble(geom, &BoundarySchema::new(1, 1, q, 0), 1.0, &ModeData::unit(2))
    }

    #[test]
    fn manufactured_coefficients_recovered() {
        let base = task(1, 2);
        let v: DVector<f64> = DVector::from_iterator(8, (0..8).map(|i| (1.0 + 0.25 * i as f64) * (-1f64).powi(i)));
        let rhs = base.unscaled_matrix() * &v;
        let sys = base.with_rhs(rhs);
        let sol = solve_mode(&sys, 1e-8).unwrap();
        assert!(!sol.degenerate());
        let got = DVector::from_vec(sol.coefficients());
        assert!((got - &v).norm() <= 1e-8 * v.norm());
        assert!(sol.residual() < 1e-12);
    }

    #[test]
    fn homogeneous_nondegenerate_is_zero() {
        let sys = task(1, 4).with_rhs(DVector::zeros(8));
        let sol = solve_mode(&sys, 1e-8).unwrap();
        assert!(sol.coefficients().iter().all(|c| *c == 0.0));
    }

    #[test]
    fn resonant_mode_with_zero_data() {
        let sys = task(0, 3).with_rhs(DVector::zeros(8));
        let sol = solve_mode(&sys, defaults::WORKED_EXAMPLE_DEGENERACY_TOL).unwrap();
        assert!(sol.degenerate());
        assert!(!sol.kernel_basis().is_empty());
        assert!(sol.scaled_coefficients().iter().all(|c| *c == 0.0));
        for v in sol.kernel_basis() {
            assert!((v.norm() - 1.0).abs() < 1e-12);
            let image = (sys.matrix() * v).norm();
            assert!(image <= defaults::WORKED_EXAMPLE_DEGENERACY_TOL * singular_values(sys.matrix())[0]);
        }
    }

    #[test]
    fn resonant_mode_with_generic_data_rejected() {
        let sys = task(0, 3);
        let err = solve_mode(&sys, defaults::WORKED_EXAMPLE_DEGENERACY_TOL).unwrap_err();
        assert_eq!(err.to_string(), "nonorthogonal data at resonant mode k=3");
    }

    #[test]
    fn kernel_amplitude_shifts_solution() {
        let sys = task(0, 3).with_rhs(DVector::zeros(8));
        let sol = solve_mode(&sys, defaults::WORKED_EXAMPLE_DEGENERACY_TOL).unwrap();
        let shifted = sol.with_kernel_amplitudes(&[2.0]).unwrap();
        assert!((shifted.scaled_coefficients().norm() - 2.0).abs() < 1e-12);
        assert!(sol.with_kernel_amplitudes(&[1.0; 9]).is_err());
    }

    #[test]
    fn gluing_holds_for_solved_mode() {
        let sol = solve_mode(&task(1, 5), 1e-8).unwrap();
        for t in 0..4 {
            let up = sol.derivative_on(Side::Upper, t, 0.0);
            let lo = sol.derivative_on(Side::Lower, t, 0.0);
            let scale = 1.0 + up.abs().max(lo.abs());
            assert!((up - lo).abs() <= 1e-10 * scale, "t={t}");
        }
    }
}
