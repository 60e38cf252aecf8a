//! Defaults and fixed thresholds used across the crate.
//!
//! | name | value | used by |
//! |------|-------|---------|
//! | [`TRUNCATION`] | 50 | series truncation K |
//! | [`GRID`] | 101 × 101 | verification / CSV grid |
//! | [`EPSILON`] | 0.5 | Diophantine scan exponent |
//! | [`K_MAX`] | 10⁴ | Diophantine scan horizon |
//! | [`DEGENERACY_TOL`] | 10⁻⁸ | σ_min/σ_max rank test |
//! | [`RESIDUAL_TOL`] | 10⁻⁸ | residual acceptance |
//! | [`LEFT_NULL_TOL`] | 10⁻⁸ | rhs projection on the left null space |
//! | [`ORTHOGONALITY_TOL`] | 10⁻¹⁰ | vanishing data coefficients at resonant modes |
//! | [`SAMPLES_PER_PERIOD`] | 8 | Nyquist guard for sampled data |
//! | [`RATIO_MATCH_TOL`] | 10⁻¹² | a/l against the exact ratio |
//! | [`ADMISSIBLE_DELTA4`] | 0.3 | k used for the asymptotic constant |
//! | [`PREDICTED_RESONANCE_TOL`] | 10⁻⁹ | |sin| threshold for predicted resonance |

pub const TRUNCATION: usize = 50;
pub const GRID: (usize, usize) = (101, 101);
pub const EPSILON: f64 = 0.5;
pub const K_MAX: usize = 10_000;
pub const DEGENERACY_TOL: f64 = 1e-8;
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const LEFT_NULL_TOL: f64 = 1e-8;
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
pub const SAMPLES_PER_PERIOD: usize = 8;
pub const RATIO_MATCH_TOL: f64 = 1e-12;
pub const ADMISSIBLE_DELTA4: f64 = 0.3;
pub const PREDICTED_RESONANCE_TOL: f64 = 1e-9;

/// Rank threshold for the fourth-order worked example (l = 3, a = 1).
///
/// The k = 3j modes of Task 1 are near-singular rather than singular:
/// σ_min/σ_max is 8.7e-3 at k = 3 and decays by roughly e^{-αa} per step,
/// while every other mode of either task stays above 8.3e-2.
pub const WORKED_EXAMPLE_DEGENERACY_TOL: f64 = 2e-2;
