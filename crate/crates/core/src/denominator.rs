//! The small denominator sin(πkτ + phase): phase tables, separation
//! constants for rational τ, Diophantine scans for irrational τ, resonance
//! detection and the asymptotic constant of the scaled determinant.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::defaults;
use crate::error::{Error, Result};
use crate::mode::geometry::compute_root_geometry;
use crate::mode::solve::sigma_ratio;
use crate::mode::system::{assemble, scaled_determinant, ModeData};
use crate::model::{validate_problem, BoundarySchema, Phase, ProblemSpec, RatioClass, RatioValue};

/// Δ(k) = sin(πkτ + phase); `phase` is `None` when no table covers the schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenominatorForm {
    pub phase: Option<Phase>,
}

impl DenominatorForm {
    pub fn tabulated(&self) -> bool {
        self.phase.is_some()
    }

    pub fn require_phase(&self) -> Result<Phase> {
        self.phase.ok_or(Error::Untabulated)
    }
}

/// Phase lookup keyed by (order mod 8, γ, q mod 2); γ ≠ δ is untabulated.
pub fn expected_denominator(order: usize, schema: &BoundarySchema) -> DenominatorForm {
    use Phase::*;
    if schema.is_mixed() || !order.is_multiple_of(2) {
        return DenominatorForm { phase: None };
    }
    let even_q = schema.q.is_multiple_of(2);
    let pick = |even, odd| if even_q { even } else { odd };
    let phase = match (order % 8, schema.gamma) {
        (4, 1) => Some(pick(Zero, HalfPi)),
        (0, 1) => Some(pick(HalfPi, Zero)),
        (0 | 4, 2) => Some(pick(QuarterPi, ThreeQuarterPi)),
        (2, 1) => Some(pick(QuarterPi, ThreeQuarterPi)),
        (6, 1) => Some(pick(ThreeQuarterPi, QuarterPi)),
        (2 | 6, 2) => Some(pick(QuarterPi, ThreeQuarterPi)),
        _ => None,
    };
    DenominatorForm { phase }
}

/// sin(πkτ + phase) with the argument reduced before rounding.
///
/// Rational τ uses exact residues (and returns an exact 0 on resonance);
/// surds reduce the rational part exactly and the irrational part in floats.
pub fn denominator_value(ratio: &RatioValue, phase: Phase, k: u64) -> f64 {
    let turns = match ratio {
        RatioValue::Rational(r) => {
            if phase.vanishes_at(k, *r) {
                return 0.0;
            }
            let (s, t) = (r.num() as i128, r.den() as i128);
            (k as i128 * s).rem_euclid(2 * t) as f64 / t as f64
        }
        RatioValue::QuadraticSurd(q) => {
            let p = q.p();
            let (pn, pd) = (p.num() as i128, p.den() as i128);
            let rational = (k as i128 * pn).rem_euclid(2 * pd) as f64 / pd as f64;
            let irrational = (k as f64 * q.q().to_f64() * (q.d() as f64).sqrt()).rem_euclid(2.0);
            (rational + irrational).rem_euclid(2.0)
        }
        RatioValue::Float(x) => (k as f64 * x).rem_euclid(2.0),
    };
    (PI * turns + phase.radians()).sin()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    ExactRationalMin,
    IntegerCase,
    EmpiricalScan,
}

impl BoundKind {
    pub fn label(self) -> &'static str {
        match self {
            BoundKind::ExactRationalMin => "exact-rational-min",
            BoundKind::IntegerCase => "integer-case",
            BoundKind::EmpiricalScan => "empirical-scan",
        }
    }
}

/// Uniform lower bound δ on |sin(πkτ + phase)| over all k.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationBound {
    pub delta: f64,
    /// Residue k·s mod t attaining δ.
    pub witness_k2: i64,
    pub kind: BoundKind,
    pub warning: Option<String>,
}

pub fn separation_bound(class: &RatioClass, form: &DenominatorForm) -> Result<SeparationBound> {
    let phase = form.require_phase()?;
    match class {
        RatioClass::Integer(_) => {
            let delta = match phase {
                Phase::Zero => 0.0,
                Phase::HalfPi => 1.0,
                Phase::QuarterPi | Phase::ThreeQuarterPi => FRAC_1_SQRT_2,
            };
            Ok(SeparationBound {
                delta,
                witness_k2: 0,
                kind: BoundKind::IntegerCase,
                warning: (delta == 0.0).then(|| "resonant: sin(πk·τ) = 0 for every k".to_string()),
            })
        }
        RatioClass::RationalSeparated { t, .. } | RatioClass::RationalResonant { t, .. } => {
            let t = *t;
            let quarters = phase.quarters() as i128;
            let mut best = (f64::INFINITY, 0);
            // gcd(s, t) = 1, so k·s mod t runs over every residue
            for r in 0..t {
                let value = if (4 * r as i128 + quarters * t as i128).rem_euclid(4 * t as i128) == 0 {
                    0.0
                } else {
                    (PI * r as f64 / t as f64 + phase.radians()).sin().abs()
                };
                if value < best.0 {
                    best = (value, r);
                }
            }
            Ok(SeparationBound {
                delta: best.0,
                witness_k2: best.1,
                kind: BoundKind::ExactRationalMin,
                warning: (best.0 == 0.0)
                    .then(|| format!("resonant: residue {} annihilates the denominator", best.1)),
            })
        }
        RatioClass::AlgebraicIrrational { .. } | RatioClass::FloatUnknown => {
            Err(Error::RequiresRational("separation_bound"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiophantineScanConfig {
    pub epsilon: f64,
    pub k_max: usize,
}

impl Default for DiophantineScanConfig {
    fn default() -> Self {
        Self { epsilon: defaults::EPSILON, k_max: defaults::K_MAX }
    }
}

impl DiophantineScanConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidScan(format!("epsilon in (0,1) (got {})", self.epsilon)));
        }
        if self.k_max == 0 {
            return Err(Error::InvalidScan("k_max ≥ 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub k: usize,
    /// |sin(πkτ + phase)|
    pub abs_denominator: f64,
    /// |sin(πkτ + phase)|·k^{1+ε}
    pub weighted: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiophantineScan {
    pub n_hat: f64,
    pub worst_k: usize,
    pub table: Vec<ScanRow>,
}

/// N̂ = min_{k ≤ k_max} |sin(πkτ + phase)|·k^{1+ε}.
pub fn diophantine_scan(
    ratio: &RatioValue,
    form: &DenominatorForm,
    cfg: &DiophantineScanConfig,
) -> Result<DiophantineScan> {
    if let RatioValue::Rational(_) = ratio {
        return Err(Error::RequiresIrrational("diophantine_scan"));
    }
    cfg.validate()?;
    let phase = form.require_phase()?;
    let exponent = 1.0 + cfg.epsilon;
    let table: Vec<ScanRow> = (1..=cfg.k_max)
        .map(|k| {
            let abs_denominator = denominator_value(ratio, phase, k as u64).abs();
            ScanRow { k, abs_denominator, weighted: abs_denominator * (k as f64).powf(exponent) }
        })
        .collect();
    let worst = table
        .iter()
        .min_by(|a, b| a.weighted.total_cmp(&b.weighted))
        .expect("k_max ≥ 1");
    Ok(DiophantineScan { n_hat: worst.weighted, worst_k: worst.k, table })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceScan {
    /// k whose scaled matrix failed the rank test.
    pub resonant: Vec<usize>,
    /// k with an exactly vanishing predicted denominator; `None` when no
    /// prediction is possible (float or irrational τ, untabulated schema).
    pub predicted: Option<Vec<usize>>,
    /// Symmetric difference of the two sets.
    pub disagreements: Vec<usize>,
    /// σ_min/σ_max for k = 1..K.
    pub sigma_ratios: Vec<f64>,
}

/// Rank test on the scaled matrix for k = 1..K, cross-checked against the
/// phase table.
pub fn detect_resonant_modes(spec: &ProblemSpec, modes: usize) -> Result<ResonanceScan> {
    validate_problem(spec).into_result()?;
    let tol = spec.tolerances.degeneracy;
    let sigma_ratios: Vec<f64> = (1..=modes)
        .into_par_iter()
        .map(|k| {
            let geom = compute_root_geometry(spec.n, k, spec.l);
            sigma_ratio(assemble(geom, &spec.schema, spec.a, &ModeData::zero(spec.n)).matrix())
        })
        .collect();
    let resonant: Vec<usize> = (1..=modes).filter(|k| sigma_ratios[k - 1] < tol).collect();
    let form = expected_denominator(spec.order(), &spec.schema);
    let predicted = match (spec.ratio, form.phase) {
        (RatioValue::Rational(r), Some(phase)) => Some(
            (1..=modes)
                .filter(|&k| (denominator_value(&RatioValue::Rational(r), phase, k as u64)).abs()
                    < defaults::PREDICTED_RESONANCE_TOL)
                .collect::<Vec<_>>(),
        ),
        (RatioValue::QuadraticSurd(_), Some(_)) => Some(Vec::new()),
        _ => None,
    };
    let disagreements = match &predicted {
        Some(p) => (1..=modes)
            .filter(|k| p.contains(k) != resonant.contains(k))
            .collect(),
        None => Vec::new(),
    };
    Ok(ResonanceScan { resonant, predicted, disagreements, sigma_ratios })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticConstant {
    pub m_hat: f64,
    /// max |ratio − M̂|/|M̂| over the admissible k.
    pub dispersion: f64,
    pub used_k: Vec<usize>,
}

/// Median of mantissa/Δ(k) over k in `range` with |Δ(k)| ≥ 0.3.
pub fn asymptotic_constant(spec: &ProblemSpec, range: RangeInclusive<usize>) -> Result<AsymptoticConstant> {
    validate_problem(spec).into_result()?;
    let phase = expected_denominator(spec.order(), &spec.schema).require_phase()?;
    let used_k: Vec<usize> = range
        .filter(|&k| k >= 1)
        .filter(|&k| denominator_value(&spec.ratio, phase, k as u64).abs() >= defaults::ADMISSIBLE_DELTA4)
        .collect();
    if used_k.is_empty() {
        return Err(Error::NoAdmissibleK { threshold: defaults::ADMISSIBLE_DELTA4 });
    }
    let ratios: Vec<f64> = used_k
        .par_iter()
        .map(|&k| {
            let geom = compute_root_geometry(spec.n, k, spec.l);
            let sys = assemble(geom, &spec.schema, spec.a, &ModeData::zero(spec.n));
            scaled_determinant(&sys).mantissa / denominator_value(&spec.ratio, phase, k as u64)
        })
        .collect();
    let m_hat = median(&ratios);
    let dispersion = ratios
        .iter()
        .map(|r| (r - m_hat).abs() / m_hat.abs())
        .fold(0.0, f64::max);
    Ok(AsymptoticConstant { m_hat, dispersion, used_k })
}

pub(crate) fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenominatorRow {
    pub k: usize,
    pub expected_delta4: Option<f64>,
    pub scaled_det_mantissa: f64,
    pub log_scale: f64,
    pub delta5_estimate: Option<f64>,
    pub resonant: bool,
    pub sigma_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenominatorReport {
    pub rows: Vec<DenominatorRow>,
    pub m_hat: Option<f64>,
    pub min_abs_delta4: Option<f64>,
    pub resonant: Vec<usize>,
    pub disagreements: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Per-k table for k = 1..K. M̂ is estimated over the upper half of the range.
pub fn denominator_report(spec: &ProblemSpec, modes: usize) -> Result<DenominatorReport> {
    let mut warnings = validate_problem(spec).into_result()?;
    let scan = detect_resonant_modes(spec, modes)?;
    let phase = expected_denominator(spec.order(), &spec.schema).phase;
    let m_hat = match asymptotic_constant(spec, (modes / 2).max(1)..=modes) {
        Ok(c) => Some(c.m_hat),
        Err(e) => {
            warnings.push(format!("asymptotic constant unavailable: {e}"));
            None
        }
    };
    let dets: Vec<_> = (1..=modes)
        .into_par_iter()
        .map(|k| {
            let geom = compute_root_geometry(spec.n, k, spec.l);
            scaled_determinant(&assemble(geom, &spec.schema, spec.a, &ModeData::zero(spec.n)))
        })
        .collect();
    let rows: Vec<DenominatorRow> = (1..=modes)
        .map(|k| {
            let det = dets[k - 1];
            let expected = phase.map(|p| denominator_value(&spec.ratio, p, k as u64));
            DenominatorRow {
                k,
                expected_delta4: expected,
                scaled_det_mantissa: det.mantissa,
                log_scale: det.log_scale,
                delta5_estimate: expected.zip(m_hat).map(|(e, m)| det.mantissa / m - e),
                resonant: scan.resonant.contains(&k),
                sigma_ratio: scan.sigma_ratios[k - 1],
            }
        })
        .collect();
    let min_abs_delta4 = phase.map(|_| {
        rows.iter()
            .filter_map(|r| r.expected_delta4)
            .map(f64::abs)
            .fold(f64::INFINITY, f64::min)
    });
    if !scan.disagreements.is_empty() {
        warnings.push(format!(
            "detected and predicted resonances disagree at k = {:?}",
            scan.disagreements
        ));
    }
    Ok(DenominatorReport {
        rows,
        m_hat,
        min_abs_delta4,
        resonant: scan.resonant,
        disagreements: scan.disagreements,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{classify_ratio, QuadraticSurd, RationalNumber};

    fn rat(n: i64, d: i64) -> RatioValue {
        RatioValue::Rational(RationalNumber::new(n, d).unwrap())
    }

    fn sqrt2() -> RatioValue {
        let zero = RationalNumber::integer(0);
        RatioValue::QuadraticSurd(QuadraticSurd::new(zero, RationalNumber::integer(1), 2).unwrap())
    }

    #[test]
    fn fourth_order_phases() {
        let form = |gamma, q| expected_denominator(4, &BoundarySchema::new(gamma, gamma, q, 0)).phase;
        assert_eq!(form(1, 0), Some(Phase::Zero));
        assert_eq!(form(1, 1), Some(Phase::HalfPi));
        assert_eq!(form(2, 0), Some(Phase::QuarterPi));
        assert_eq!(form(2, 1), Some(Phase::ThreeQuarterPi));
        assert!(!expected_denominator(4, &BoundarySchema::new(1, 2, 0, 0)).tabulated());
    }

    #[test]
    fn separation_examples() {
        let third = classify_ratio(&rat(1, 3), Phase::HalfPi).unwrap();
        let form = DenominatorForm { phase: Some(Phase::HalfPi) };
        let b = separation_bound(&third, &form).unwrap();
        assert!((b.delta - 0.5).abs() < 1e-12);
        let int = classify_ratio(&rat(2, 1), Phase::HalfPi).unwrap();
        assert_eq!(separation_bound(&int, &form).unwrap().delta, 1.0);
        let two_fifths = classify_ratio(&rat(2, 5), Phase::HalfPi).unwrap();
        let d = separation_bound(&two_fifths, &form).unwrap().delta;
        assert!((d - 0.309_016_994_374_947_4).abs() < 1e-12);
        let irr = classify_ratio(&sqrt2(), Phase::HalfPi).unwrap();
        assert!(separation_bound(&irr, &form).is_err());
    }

    #[test]
    fn scan_value_at_two() {
        let form = DenominatorForm { phase: Some(Phase::Zero) };
        let cfg = DiophantineScanConfig { epsilon: 0.5, k_max: 2 };
        let scan = diophantine_scan(&sqrt2(), &form, &cfg).unwrap();
        // 40-digit reference for |sin(2π√2)|·2^{1.5}
        assert!((scan.table[1].weighted - 1.451_798_825_336_528_3).abs() < 1e-12);
        assert!(diophantine_scan(&rat(1, 3), &form, &cfg).is_err());
        let bad = DiophantineScanConfig { epsilon: 1.0, k_max: 2 };
        assert!(diophantine_scan(&sqrt2(), &form, &bad).is_err());
    }

    #[test]
    fn integer_shift_invariance() {
        let one = RationalNumber::integer(1);
        let shifted = RatioValue::QuadraticSurd(QuadraticSurd::new(one, one, 2).unwrap());
        for k in 1..=200u64 {
            let a = denominator_value(&sqrt2(), Phase::Zero, k).abs();
            let b = denominator_value(&shifted, Phase::Zero, k).abs();
            assert!((a - b).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
