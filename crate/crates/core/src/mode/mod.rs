//! Per-mode ODE machinery: roots, bases, the coupling system and its solution.

pub mod geometry;
pub mod solve;
pub mod system;

pub use geometry::{basis_value, compute_root_geometry, RootGeometry, Side};
pub use solve::{lu_solve, sigma_ratio, singular_values, solve_mode, ModeSolution};
pub use system::{assemble_mode_system, scaled_determinant, ModeData, ScaledDeterminant, ScaledLinearSystem};
