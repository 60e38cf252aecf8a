//! Spectral solver for D_x^{2n}u + sgn(y)·D_y^{2n}u = 0 on (0, l) × (−a, a),
//! with diagnostics for the small denominators that decide solvability.
//!
//! ```
//! use mixbvp::{build_solution, example::worked_example, model::SinePolynomial, verify};
//!
//! let mut spec = worked_example(2).unwrap();
//! spec.truncation = 8;
//! spec.psi[0] = SinePolynomial::new(vec![(1, 1.0)], 3.0).unwrap().into();
//! let sol = build_solution(&spec).unwrap();
//! let report = verify(&sol, 21, 21).unwrap();
//! assert!(report.boundary_residual_sup < 1e-8);
//! ```

pub mod config;
pub mod defaults;
pub mod denominator;
pub mod error;
pub mod example;
pub mod mode;
pub mod model;
pub mod report;
pub mod solver;
pub mod spectral;

pub use denominator::{
    asymptotic_constant, denominator_report, detect_resonant_modes, diophantine_scan, expected_denominator,
    separation_bound, DenominatorForm, DenominatorReport, DiophantineScanConfig, SeparationBound,
};
pub use error::{Error, Result};
pub use mode::{
    assemble_mode_system, basis_value, compute_root_geometry, scaled_determinant, solve_mode, ModeSolution,
    RootGeometry, ScaledLinearSystem, Side,
};
pub use model::{
    classify_ratio, validate_problem, BoundaryFunction, BoundarySchema, Phase, ProblemSpec, RatioClass, RatioValue,
    RationalNumber,
};
pub use solver::{
    build_solution, evaluate, growth_probe, smoothness_check, verify, ResidualReport, SeriesSolution,
    SmoothnessReport,
};
pub use spectral::{eigenfunction_value, sine_coefficient, ModeCoefficients};
