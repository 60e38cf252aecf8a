//! Problem statement: side ratio arithmetic, boundary schema, boundary data.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::error::{Error, Result};

/// Reduced fraction with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRational", into = "RawRational")]
pub struct RationalNumber {
    num: i64,
    den: i64,
}

#[derive(Serialize, Deserialize)]
struct RawRational {
    num: i64,
    den: i64,
}

impl TryFrom<RawRational> for RationalNumber {
    type Error = Error;
    fn try_from(raw: RawRational) -> Result<Self> {
        RationalNumber::new(raw.num, raw.den)
    }
}

impl From<RationalNumber> for RawRational {
    fn from(r: RationalNumber) -> Self {
        RawRational { num: r.num, den: r.den }
    }
}

impl RationalNumber {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidRational(format!("{num}/0")));
        }
        let g = num.gcd(&den);
        let sign = if den < 0 { -1 } else { 1 };
        Ok(Self {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    pub fn integer(value: i64) -> Self {
        Self { num: value, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for RationalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `p + q·√d` with `q ≠ 0` and `d > 1` square-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadraticSurd {
    p: RationalNumber,
    q: RationalNumber,
    d: u64,
}

impl QuadraticSurd {
    /// Square factors of `d` are folded into `q`; a perfect square is rejected
    /// since the value is then rational.
    pub fn new(p: RationalNumber, q: RationalNumber, d: u64) -> Result<Self> {
        if q.num() == 0 {
            return Err(Error::InvalidSurd("q must be nonzero".into()));
        }
        if d == 0 {
            return Err(Error::InvalidSurd("d must be positive".into()));
        }
        let (outside, inside) = split_square(d);
        if inside == 1 {
            return Err(Error::InvalidSurd(format!(
                "d = {d} is a perfect square; store the value as a rational"
            )));
        }
        let outside = i64::try_from(outside)
            .map_err(|_| Error::InvalidSurd(format!("d = {d} too large")))?;
        let q = RationalNumber::new(
            q.num()
                .checked_mul(outside)
                .ok_or_else(|| Error::InvalidSurd("q overflow".into()))?,
            q.den(),
        )?;
        Ok(Self { p, q, d: inside })
    }

    pub fn p(&self) -> RationalNumber {
        self.p
    }

    pub fn q(&self) -> RationalNumber {
        self.q
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn to_f64(&self) -> f64 {
        self.p.to_f64() + self.q.to_f64() * (self.d as f64).sqrt()
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√{}", self.p, self.q, self.d)
    }
}

/// Returns `(s, r)` with `d = s²·r` and `r` square-free.
fn split_square(mut d: u64) -> (u64, u64) {
    let mut outside = 1u64;
    let mut inside = 1u64;
    let mut f = 2u64;
    while f.saturating_mul(f) <= d {
        let mut count = 0;
        while d.is_multiple_of(f) {
            d /= f;
            count += 1;
        }
        outside *= f.pow(count / 2);
        if count % 2 == 1 {
            inside *= f;
        }
        f += 1;
    }
    (outside, inside * d)
}

/// The side ratio τ = a/l in the most exact form available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RatioValue {
    Rational(RationalNumber),
    QuadraticSurd(QuadraticSurd),
    Float(f64),
}

impl RatioValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            RatioValue::Rational(r) => r.to_f64(),
            RatioValue::QuadraticSurd(s) => s.to_f64(),
            RatioValue::Float(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<RationalNumber> {
        match self {
            RatioValue::Rational(r) => Some(*r),
            _ => None,
        }
    }
}

impl fmt::Display for RatioValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioValue::Rational(r) => write!(f, "{r}"),
            RatioValue::QuadraticSurd(s) => write!(f, "{s}"),
            RatioValue::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Phase of the small denominator sin(πkτ + phase), in quarter turns of π.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Phase {
    Zero,
    QuarterPi,
    HalfPi,
    ThreeQuarterPi,
}

impl Phase {
    pub const ALL: [Phase; 4] = [
        Phase::Zero,
        Phase::QuarterPi,
        Phase::HalfPi,
        Phase::ThreeQuarterPi,
    ];

    /// Multiple of π/4.
    pub fn quarters(self) -> i64 {
        match self {
            Phase::Zero => 0,
            Phase::QuarterPi => 1,
            Phase::HalfPi => 2,
            Phase::ThreeQuarterPi => 3,
        }
    }

    pub fn radians(self) -> f64 {
        self.quarters() as f64 * PI / 4.0
    }

    pub fn label(self) -> &'static str {
        match self {
            Phase::Zero => "0",
            Phase::QuarterPi => "pi/4",
            Phase::HalfPi => "pi/2",
            Phase::ThreeQuarterPi => "3pi/4",
        }
    }

    pub fn parse(s: &str) -> Option<Phase> {
        match s.trim() {
            "0" => Some(Phase::Zero),
            "pi/4" | "π/4" => Some(Phase::QuarterPi),
            "pi/2" | "π/2" => Some(Phase::HalfPi),
            "3pi/4" | "3π/4" => Some(Phase::ThreeQuarterPi),
            _ => None,
        }
    }

    /// Whether sin(πk·s/t + phase) = 0 for this k, by exact residue arithmetic.
    pub fn vanishes_at(self, k: u64, tau: RationalNumber) -> bool {
        let (s, t) = (tau.num() as i128, tau.den() as i128);
        (4 * k as i128 * s + self.quarters() as i128 * t).rem_euclid(4 * t) == 0
    }

    /// Whether some k ≥ 1 makes sin(πk·s/t + phase) vanish.
    ///
    /// ks mod t runs over every residue r, and 4r + jt ≡ 0 (mod 4t) forces
    /// r = 0 (j = 0), r = t/2 (j = 2) or r ∈ {t/4, 3t/4} (j odd).
    pub fn resonates_with(self, tau: RationalNumber) -> bool {
        let t = tau.den();
        match self {
            Phase::Zero => true,
            Phase::HalfPi => t % 2 == 0,
            Phase::QuarterPi | Phase::ThreeQuarterPi => t % 4 == 0,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Derivative orders prescribed on y = −a (q + γs) and y = +a (χ + δs).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundarySchema {
    pub gamma: u32,
    pub delta: u32,
    pub q: u32,
    pub chi: u32,
}

impl BoundarySchema {
    pub fn new(gamma: u32, delta: u32, q: u32, chi: u32) -> Self {
        Self { gamma, delta, q, chi }
    }

    /// Orders at y = −a, one per φ_s.
    pub fn lower_orders(&self, n: usize) -> Vec<usize> {
        (0..n as u32).map(|s| (self.q + self.gamma * s) as usize).collect()
    }

    /// Orders at y = +a, one per ψ_s.
    pub fn upper_orders(&self, n: usize) -> Vec<usize> {
        (0..n as u32).map(|s| (self.chi + self.delta * s) as usize).collect()
    }

    pub fn is_mixed(&self) -> bool {
        self.gamma != self.delta
    }

    /// Admissibility violations for half-order `n`.
    pub fn violations(&self, n: usize) -> Vec<String> {
        let mut out = Vec::new();
        for (name, step) in [("gamma", self.gamma), ("delta", self.delta)] {
            if step != 1 && step != 2 {
                out.push(format!("{name} ∈ {{1,2}} (got {step})"));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for (name, base, step) in [("q", self.q, self.gamma), ("chi", self.chi, self.delta)] {
            if step == 1 && base as usize > n {
                out.push(format!("{name} ≤ n (got {name}={base}, n={n})"));
            }
            if step == 2 && base > 1 {
                out.push(format!("{name} ∈ {{0,1}} (got {name}={base})"));
            }
            let top = base as usize + step as usize * (n - 1);
            if top > 2 * n - 1 {
                out.push(format!(
                    "derivative order {top} ≥ 2n = {} for {name}",
                    2 * n
                ));
            }
        }
        out
    }
}

/// Finite sine series Σ c_j sin(π m_j x / l).
#[derive(Debug, Clone, PartialEq)]
pub struct SinePolynomial {
    terms: Vec<(usize, f64)>,
    length: f64,
}

impl SinePolynomial {
    pub fn new(terms: Vec<(usize, f64)>, length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidData(format!("length must be positive, got {length}")));
        }
        for w in terms.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidData(
                    "sine modes must be strictly increasing".into(),
                ));
            }
        }
        if let Some(&(m, _)) = terms.first() {
            if m == 0 {
                return Err(Error::InvalidData("sine modes start at 1".into()));
            }
        }
        if terms.iter().any(|(_, c)| !c.is_finite()) {
            return Err(Error::InvalidData("non-finite sine coefficient".into()));
        }
        Ok(Self { terms, length })
    }

    pub fn zero(length: f64) -> Self {
        Self { terms: Vec::new(), length }
    }

    pub fn terms(&self) -> &[(usize, f64)] {
        &self.terms
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn coefficient(&self, mode: usize) -> f64 {
        self.terms
            .binary_search_by_key(&mode, |&(m, _)| m)
            .map(|i| self.terms[i].1)
            .unwrap_or(0.0)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(m, c)| c * (PI * m as f64 * x / self.length).sin())
            .sum()
    }

    /// α·self + other, merged mode by mode.
    pub fn axpy(&self, alpha: f64, other: &SinePolynomial) -> SinePolynomial {
        let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
        for &(m, c) in &self.terms {
            *merged.entry(m).or_default() += alpha * c;
        }
        for &(m, c) in &other.terms {
            *merged.entry(m).or_default() += c;
        }
        SinePolynomial {
            terms: merged.into_iter().collect(),
            length: self.length,
        }
    }
}

/// Samples on a uniform grid over [0, l], endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    samples: Vec<f64>,
    length: f64,
}

impl SampledFunction {
    pub const MIN_SAMPLES: usize = 17;

    pub fn new(samples: Vec<f64>, length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidData(format!("length must be positive, got {length}")));
        }
        if samples.len() < Self::MIN_SAMPLES {
            return Err(Error::InvalidData(format!(
                "need at least {} samples, got {}",
                Self::MIN_SAMPLES,
                samples.len()
            )));
        }
        if samples.len().is_multiple_of(2) {
            return Err(Error::InvalidData(format!(
                "sample count must be odd for Simpson quadrature, got {}",
                samples.len()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("non-finite sample".into()));
        }
        Ok(Self { samples, length })
    }

    /// Samples `f` on `count` uniform nodes.
    pub fn from_fn(f: impl Fn(f64) -> f64, count: usize, length: f64) -> Result<Self> {
        let samples = uniform_nodes(count, length).into_iter().map(f).collect();
        Self::new(samples, length)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / (self.samples.len() - 1) as f64
    }

    /// Piecewise-linear interpolation between nodes.
    pub fn value(&self, x: f64) -> f64 {
        let h = self.spacing();
        let last = self.samples.len() - 1;
        let pos = (x / h).clamp(0.0, last as f64);
        let i = (pos.floor() as usize).min(last - 1);
        let frac = pos - i as f64;
        self.samples[i] * (1.0 - frac) + self.samples[i + 1] * frac
    }
}

/// `count` uniform nodes on [0, length] with the last node exactly `length`.
pub fn uniform_nodes(count: usize, length: f64) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count)
            .map(|i| {
                if i + 1 == count {
                    length
                } else {
                    length * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryFunction {
    Sine(SinePolynomial),
    Samples(SampledFunction),
}

impl BoundaryFunction {
    pub fn length(&self) -> f64 {
        match self {
            BoundaryFunction::Sine(p) => p.length(),
            BoundaryFunction::Samples(s) => s.length(),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            BoundaryFunction::Sine(p) => p.value(x),
            BoundaryFunction::Samples(s) => s.value(x),
        }
    }
}

impl From<SinePolynomial> for BoundaryFunction {
    fn from(p: SinePolynomial) -> Self {
        BoundaryFunction::Sine(p)
    }
}

impl From<SampledFunction> for BoundaryFunction {
    fn from(s: SampledFunction) -> Self {
        BoundaryFunction::Samples(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub degeneracy: f64,
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            degeneracy: defaults::DEGENERACY_TOL,
            residual: defaults::RESIDUAL_TOL,
        }
    }
}

/// Full statement of the boundary value problem.
///
/// `n` is the half-order (the equation has order 2n); `phi[s]` is prescribed
/// at y = −a with derivative order q + γs, `psi[s]` at y = +a with order χ + δs.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub n: usize,
    pub l: f64,
    pub a: f64,
    pub ratio: RatioValue,
    pub schema: BoundarySchema,
    pub phi: Vec<BoundaryFunction>,
    pub psi: Vec<BoundaryFunction>,
    pub truncation: usize,
    pub tolerances: Tolerances,
    /// Free kernel amplitudes at resonant modes, keyed by k.
    pub kernel_amplitudes: BTreeMap<usize, Vec<f64>>,
}

impl ProblemSpec {
    /// Problem with zero boundary data.
    pub fn homogeneous(n: usize, l: f64, a: f64, ratio: RatioValue, schema: BoundarySchema) -> Self {
        let zero = || BoundaryFunction::Sine(SinePolynomial::zero(l));
        Self {
            n,
            l,
            a,
            ratio,
            schema,
            phi: (0..n).map(|_| zero()).collect(),
            psi: (0..n).map(|_| zero()).collect(),
            truncation: defaults::TRUNCATION,
            tolerances: Tolerances::default(),
            kernel_amplitudes: BTreeMap::new(),
        }
    }

    pub fn order(&self) -> usize {
        2 * self.n
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<Vec<String>> {
        if self.violations.is_empty() {
            Ok(self.warnings)
        } else {
            Err(Error::InvalidProblem(self.violations))
        }
    }
}

pub fn validate_problem(spec: &ProblemSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let v = &mut report.violations;
    if spec.n == 0 {
        v.push("n ≥ 1".into());
        return report;
    }
    if !(spec.l > 0.0 && spec.l.is_finite()) {
        v.push(format!("l > 0 (got {})", spec.l));
    }
    if !(spec.a > 0.0 && spec.a.is_finite()) {
        v.push(format!("a > 0 (got {})", spec.a));
    }
    if spec.truncation == 0 {
        v.push("K ≥ 1".into());
    }
    v.extend(spec.schema.violations(spec.n));
    for (name, data) in [("phi", &spec.phi), ("psi", &spec.psi)] {
        if data.is_empty() {
            v.push(format!("{name} is empty"));
        } else if data.len() != spec.n {
            v.push(format!("|{name}| = n (got {}, n={})", data.len(), spec.n));
        }
        for (s, f) in data.iter().enumerate() {
            if (f.length() - spec.l).abs() > 1e-12 * spec.l.max(1.0) {
                v.push(format!("{name}[{s}] defined on [0, {}] instead of [0, {}]", f.length(), spec.l));
            }
        }
    }
    let tau = spec.ratio.to_f64();
    if tau.is_nan() || tau <= 0.0 {
        v.push(format!("ratio > 0 (got {tau})"));
    } else if spec.l > 0.0 && spec.a > 0.0 {
        let direct = spec.a / spec.l;
        if (direct - tau).abs() > defaults::RATIO_MATCH_TOL * tau.max(1.0) {
            v.push(format!("a/l = {direct} does not match ratio {}", spec.ratio));
        }
    }
    let tol = spec.tolerances;
    if !(tol.degeneracy > 0.0 && tol.degeneracy < 1.0) {
        v.push(format!("degeneracy_tol in (0,1) (got {})", tol.degeneracy));
    }
    if tol.residual.is_nan() || tol.residual <= 0.0 {
        v.push(format!("residual_tol > 0 (got {})", tol.residual));
    }
    if spec.schema.is_mixed() && report.violations.is_empty() {
        report.warnings.push("denominator form not tabulated (γ ≠ δ)".into());
    }
    if let RatioValue::Float(_) = spec.ratio {
        report
            .warnings
            .push("float side ratio: rationality unknown, resonance prediction skipped".into());
    }
    report
}

/// Arithmetic class of τ = a/l with respect to a denominator phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatioClass {
    Integer(i64),
    RationalSeparated { s: i64, t: i64, phases: Vec<Phase> },
    RationalResonant { s: i64, t: i64 },
    AlgebraicIrrational { degree: u32 },
    FloatUnknown,
}

impl RatioClass {
    pub fn label(&self) -> &'static str {
        match self {
            RatioClass::Integer(_) => "integer",
            RatioClass::RationalSeparated { .. } => "rational-separated",
            RatioClass::RationalResonant { .. } => "rational-resonant",
            RatioClass::AlgebraicIrrational { .. } => "algebraic-irrational",
            RatioClass::FloatUnknown => "float-unknown",
        }
    }

    pub fn is_irrational(&self) -> bool {
        matches!(
            self,
            RatioClass::AlgebraicIrrational { .. } | RatioClass::FloatUnknown
        )
    }
}

pub fn classify_ratio(ratio: &RatioValue, phase: Phase) -> Result<RatioClass> {
    let value = ratio.to_f64();
    if value.is_nan() || value <= 0.0 {
        return Err(Error::NonpositiveRatio(value));
    }
    Ok(match ratio {
        RatioValue::Rational(r) if r.is_integer() => RatioClass::Integer(r.num()),
        RatioValue::Rational(r) => {
            if phase.resonates_with(*r) {
                RatioClass::RationalResonant { s: r.num(), t: r.den() }
            } else {
                let phases = Phase::ALL
                    .into_iter()
                    .filter(|p| !p.resonates_with(*r))
                    .collect();
                RatioClass::RationalSeparated { s: r.num(), t: r.den(), phases }
            }
        }
        RatioValue::QuadraticSurd(_) => RatioClass::AlgebraicIrrational { degree: 2 },
        RatioValue::Float(_) => RatioClass::FloatUnknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> RatioValue {
        RatioValue::Rational(RationalNumber::new(n, d).unwrap())
    }

    fn spec(n: usize, schema: BoundarySchema) -> ProblemSpec {
        ProblemSpec::homogeneous(n, 3.0, 1.0, rat(1, 3), schema)
    }

    #[test]
    fn rational_is_reduced() {
        let r = RationalNumber::new(3, 9).unwrap();
        assert_eq!((r.num(), r.den()), (1, 3));
        let r = RationalNumber::new(2, -4).unwrap();
        assert_eq!((r.num(), r.den()), (-1, 2));
        assert!(RationalNumber::new(1, 0).is_err());
    }

    #[test]
    fn surd_normalisation() {
        let one = RationalNumber::integer(1);
        let s = QuadraticSurd::new(RationalNumber::integer(0), one, 8).unwrap();
        assert_eq!(s.d(), 2);
        assert_eq!(s.q(), RationalNumber::integer(2));
        assert!((s.to_f64() - 8f64.sqrt()).abs() < 1e-15);
        assert!(QuadraticSurd::new(one, one, 9).is_err());
        assert!(QuadraticSurd::new(one, RationalNumber::integer(0), 2).is_err());
    }

    #[test]
    fn task_one_schema_is_admissible() {
        let report = validate_problem(&spec(2, BoundarySchema::new(1, 1, 0, 0)));
        assert!(report.is_ok(), "{:?}", report.violations);
    }

    #[test]
    fn q_above_n_rejected() {
        let report = validate_problem(&spec(2, BoundarySchema::new(1, 1, 3, 0)));
        assert!(report.violations.iter().any(|v| v.starts_with("q ≤ n")));
    }

    #[test]
    fn gamma_two_restricts_q() {
        let report = validate_problem(&spec(2, BoundarySchema::new(2, 2, 2, 0)));
        assert!(report.violations.iter().any(|v| v.starts_with("q ∈ {0,1}")));
    }

    #[test]
    fn mixed_schema_accepted_with_warning() {
        let report = validate_problem(&spec(2, BoundarySchema::new(1, 2, 0, 1)));
        assert!(report.is_ok());
        assert!(report.warnings.iter().any(|w| w.contains("not tabulated")));
    }

    #[test]
    fn ratio_mismatch_rejected() {
        let mut s = spec(2, BoundarySchema::new(1, 1, 0, 0));
        s.ratio = rat(1, 2);
        assert!(!validate_problem(&s).is_ok());
    }

    #[test]
    fn data_count_and_empty_data() {
        let mut s = spec(2, BoundarySchema::new(1, 1, 0, 0));
        s.phi.pop();
        s.psi.clear();
        let v = validate_problem(&s).violations;
        assert!(v.iter().any(|m| m.contains("|phi|")));
        assert!(v.iter().any(|m| m.contains("psi is empty")));
    }

    // Admissible set: γ = δ = 1 with q, χ ≤ n; γ = δ = 2 with q, χ ≤ 1.
    #[test]
    fn exhaustive_schema_enumeration() {
        for n in 1..=3usize {
            for gamma in 1..=2 {
                for delta in 1..=2 {
                    for q in 0..=2 * n as u32 {
                        for chi in 0..=2 * n as u32 {
                            let schema = BoundarySchema::new(gamma, delta, q, chi);
                            let ok = validate_problem(&spec(n, schema)).is_ok();
                            let side = |base: u32, step: u32| match step {
                                1 => base as usize <= n,
                                _ => base <= 1,
                            };
                            let expected = side(q, gamma) && side(chi, delta);
                            assert_eq!(ok, expected, "n={n} {schema:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        match classify_ratio(&rat(1, 3), Phase::HalfPi).unwrap() {
            RatioClass::RationalSeparated { s, t, .. } => assert_eq!((s, t), (1, 3)),
            other => panic!("{other:?}"),
        }
        assert_eq!(classify_ratio(&rat(2, 1), Phase::HalfPi).unwrap(), RatioClass::Integer(2));
        let sqrt2 = QuadraticSurd::new(
            RationalNumber::integer(0),
            RationalNumber::integer(1),
            2,
        )
        .unwrap();
        for phase in Phase::ALL {
            assert_eq!(
                classify_ratio(&RatioValue::QuadraticSurd(sqrt2), phase).unwrap(),
                RatioClass::AlgebraicIrrational { degree: 2 }
            );
        }
        assert_eq!(
            classify_ratio(&rat(1, 3), Phase::Zero).unwrap(),
            RatioClass::RationalResonant { s: 1, t: 3 }
        );
        assert!(classify_ratio(&RatioValue::Float(-0.5), Phase::Zero).is_err());
        assert_eq!(
            classify_ratio(&RatioValue::Float(0.7), Phase::Zero).unwrap(),
            RatioClass::FloatUnknown
        );
    }

    #[test]
    fn unreduced_fraction_classifies_identically() {
        for phase in Phase::ALL {
            assert_eq!(
                classify_ratio(&rat(3, 9), phase).unwrap(),
                classify_ratio(&rat(1, 3), phase).unwrap()
            );
        }
    }

    #[test]
    fn resonant_phase_zero_has_vanishing_sine() {
        for t in 2..=12i64 {
            for s in 1..t {
                let r = RationalNumber::new(s, t).unwrap();
                if r.den() != t {
                    continue;
                }
                let tau = r.to_f64();
                let hit = (1..=10 * t).any(|k| (PI * k as f64 * tau).sin().abs() < 1e-12);
                assert!(hit, "s/t = {s}/{t}");
            }
        }
    }

    #[test]
    fn sampled_function_checks() {
        assert!(SampledFunction::new(vec![0.0; 16], 1.0).is_err());
        assert!(SampledFunction::new(vec![0.0; 18], 1.0).is_err());
        let f = SampledFunction::from_fn(|x| x, 17, 2.0).unwrap();
        assert!((f.value(0.3) - 0.3).abs() < 1e-14);
        assert_eq!(f.value(2.0), 2.0);
    }

    #[test]
    fn sine_polynomial_rejects_unsorted_modes() {
        assert!(SinePolynomial::new(vec![(2, 1.0), (1, 1.0)], 1.0).is_err());
        assert!(SinePolynomial::new(vec![(1, 1.0), (1, 2.0)], 1.0).is_err());
        assert!(SinePolynomial::new(vec![(0, 1.0)], 1.0).is_err());
    }
}
