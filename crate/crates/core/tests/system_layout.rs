use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use nalgebra::DMatrix;

use mixbvp::example::worked_example;
use mixbvp::mode::{assemble_mode_system, scaled_determinant};
use mixbvp::spectral::ModeCoefficients;

/// Cofactor expansion along the first row.
fn laplace_det(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    if n == 1 {
        return m[(0, 0)];
    }
    (0..n)
        .filter(|&j| m[(0, j)] != 0.0)
        .map(|j| {
            let minor = m.clone().remove_row(0).remove_column(j);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[(0, j)] * laplace_det(&minor)
        })
        .sum()
}

fn system(task: u8, k: usize) -> mixbvp::ScaledLinearSystem {
    let mut spec = worked_example(task).unwrap();
    spec.truncation = k;
    let coeffs = ModeCoefficients::compute(&spec).unwrap();
    assemble_mode_system(&spec, &coeffs, k).unwrap()
}

/// Explicit fourth-order system, columns (c1..c4, d1..d4), for the given
/// y = −1 rows.
fn reference(k: usize, lower_rows: [[f64; 4]; 2]) -> DMatrix<f64> {
    let lam = PI * k as f64 / 3.0;
    let al = lam * FRAC_1_SQRT_2;
    let (ep, em) = (al.exp(), (-al).exp());
    let r = FRAC_1_SQRT_2;
    let mut rows = vec![
        [ep * al.cos(), ep * al.sin(), em * al.cos(), em * al.sin(), 0.0, 0.0, 0.0, 0.0],
        [
            ep * (al + FRAC_PI_4).cos(),
            ep * (al + FRAC_PI_4).sin(),
            em * (al + 3.0 * FRAC_PI_4).cos(),
            em * (al + 3.0 * FRAC_PI_4).sin(),
            0.0,
            0.0,
            0.0,
            0.0,
        ],
    ];
    for lower in lower_rows {
        rows.push([0.0, 0.0, 0.0, 0.0, lower[0], lower[1], lower[2], lower[3]]);
    }
    rows.push([1.0, 0.0, 1.0, 0.0, -1.0, -1.0, 0.0, -1.0]);
    rows.push([r, r, -r, r, -1.0, 0.0, -1.0, 1.0]);
    rows.push([0.0, 1.0, 0.0, -1.0, -1.0, 1.0, 0.0, -1.0]);
    rows.push([-r, r, r, r, -1.0, 0.0, 1.0, 1.0]);
    DMatrix::from_fn(8, 8, |i, j| rows[i][j])
}

fn lower_value(lam: f64) -> [f64; 4] {
    [(-lam).exp(), lam.cos(), -lam.sin(), lam.exp()]
}

fn lower_first(lam: f64) -> [f64; 4] {
    [(-lam).exp(), lam.sin(), lam.cos(), -lam.exp()]
}

fn lower_second(lam: f64) -> [f64; 4] {
    [(-lam).exp(), -lam.cos(), lam.sin(), lam.exp()]
}

fn assert_close(a: &DMatrix<f64>, b: &DMatrix<f64>) {
    for i in 0..8 {
        for j in 0..8 {
            let (x, y) = (a[(i, j)], b[(i, j)]);
            assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()), "row {i} col {j}: {x} vs {y}");
        }
    }
}

#[test]
fn task_one_matches_explicit_system() {
    for k in 1..=4 {
        let lam = PI * k as f64 / 3.0;
        let got = system(1, k).unscaled_matrix();
        assert_close(&got, &reference(k, [lower_value(lam), lower_first(lam)]));
    }
}

#[test]
fn task_two_matches_explicit_system() {
    // y = −1 rows come in order of derivative order: u' then u''
    for k in 1..=4 {
        let lam = PI * k as f64 / 3.0;
        let got = system(2, k).unscaled_matrix();
        assert_close(&got, &reference(k, [lower_first(lam), lower_second(lam)]));
    }
}

#[test]
fn scaled_determinant_matches_cofactor_oracle() {
    for task in [1, 2] {
        for k in 1..=3 {
            let sys = system(task, k);
            let det = scaled_determinant(&sys);
            let oracle = laplace_det(&sys.unscaled_matrix());
            let rel = (det.value() - oracle).abs() / oracle.abs();
            assert!(rel <= 1e-9, "task {task} k={k}: {} vs {oracle}", det.value());
        }
    }
}

#[test]
fn log_scale_is_the_exponent_sum() {
    // 2a(α₀) + λa for the fourth-order example
    for k in [1, 7, 50, 1000] {
        let lam = PI * k as f64 / 3.0;
        let det = scaled_determinant(&system(2, k));
        let expected = 2.0 * lam * FRAC_1_SQRT_2 + lam;
        assert!((det.log_scale - expected).abs() <= 1e-12 * expected);
    }
}
