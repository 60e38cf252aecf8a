//! Problem files in JSON or TOML.
//!
//! ```json
//! {
//!   "order": 4, "l": 3.0, "a": 1.0,
//!   "ratio": {"num": 1, "den": 3},
//!   "schema": {"gamma": 1, "delta": 1, "q": 1, "chi": 0},
//!   "phi": [{"type": "sine", "terms": [[1, 1.0]]}, {"type": "samples", "values": [...]}],
//!   "psi": [...],
//!   "K": 50,
//!   "tolerances": {"degeneracy_tol": 1e-8, "residual_tol": 1e-8},
//!   "kernel_amplitudes": {"3": [0.5]}
//! }
//! ```
//!
//! `ratio` may also be `{"surd": {"p": [0, 1], "q": [1, 1], "d": 2}}` (p + q·√d,
//! rationals as `[num, den]` or integers), a bare integer, or `{"float": 0.414}`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::defaults;
use crate::error::{Error, Result};
use crate::model::{
    BoundaryFunction, BoundarySchema, ProblemSpec, QuadraticSurd, RatioValue, RationalNumber,
    SampledFunction, SinePolynomial, Tolerances,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalConfig {
    Integer(i64),
    Pair([i64; 2]),
    Fields { num: i64, den: i64 },
}

impl RationalConfig {
    fn resolve(&self) -> Result<RationalNumber> {
        match *self {
            RationalConfig::Integer(v) => Ok(RationalNumber::integer(v)),
            RationalConfig::Pair([num, den]) | RationalConfig::Fields { num, den } => RationalNumber::new(num, den),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurdConfig {
    pub p: RationalConfig,
    pub q: RationalConfig,
    pub d: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatioConfig {
    Integer(i64),
    Rational { num: i64, den: i64 },
    Surd { surd: SurdConfig },
    Float { float: f64 },
}

impl RatioConfig {
    pub fn resolve(&self) -> Result<RatioValue> {
        Ok(match self {
            RatioConfig::Integer(v) => RatioValue::Rational(RationalNumber::integer(*v)),
            RatioConfig::Rational { num, den } => RatioValue::Rational(RationalNumber::new(*num, *den)?),
            RatioConfig::Surd { surd } => RatioValue::QuadraticSurd(QuadraticSurd::new(
                surd.p.resolve()?,
                surd.q.resolve()?,
                surd.d,
            )?),
            RatioConfig::Float { float } => RatioValue::Float(*float),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctionConfig {
    Sine { terms: Vec<(usize, f64)> },
    Samples { values: Vec<f64> },
}

impl FunctionConfig {
    fn resolve(&self, l: f64) -> Result<BoundaryFunction> {
        Ok(match self {
            FunctionConfig::Sine { terms } => SinePolynomial::new(terms.clone(), l)?.into(),
            FunctionConfig::Samples { values } => SampledFunction::new(values.clone(), l)?.into(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesConfig {
    #[serde(default = "default_degeneracy")]
    pub degeneracy_tol: f64,
    #[serde(default = "default_residual")]
    pub residual_tol: f64,
}

fn default_degeneracy() -> f64 {
    defaults::DEGENERACY_TOL
}

fn default_residual() -> f64 {
    defaults::RESIDUAL_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    /// Equation order 2n.
    pub order: usize,
    pub l: f64,
    pub a: f64,
    pub ratio: RatioConfig,
    pub schema: BoundarySchema,
    pub phi: Vec<FunctionConfig>,
    pub psi: Vec<FunctionConfig>,
    #[serde(rename = "K", default)]
    pub truncation: Option<usize>,
    #[serde(default)]
    pub tolerances: Option<TolerancesConfig>,
    #[serde(default)]
    pub kernel_amplitudes: BTreeMap<String, Vec<f64>>,
}

impl ProblemConfig {
    pub fn parse_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn parse_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads a `.toml` file as TOML and anything else as JSON.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => Self::parse_toml(&text),
            _ => Self::parse_json(&text),
        }
    }

    /// Builds the problem; it is not validated here.
    pub fn to_spec(&self) -> Result<ProblemSpec> {
        if self.order == 0 || !self.order.is_multiple_of(2) {
            return Err(Error::Config(format!("order must be a positive even number (got {})", self.order)));
        }
        let n = self.order / 2;
        let ratio = self.ratio.resolve()?;
        let resolve_all = |fs: &[FunctionConfig]| fs.iter().map(|f| f.resolve(self.l)).collect::<Result<Vec<_>>>();
        let tolerances = self
            .tolerances
            .as_ref()
            .map_or_else(Tolerances::default, |t| Tolerances {
                degeneracy: t.degeneracy_tol,
                residual: t.residual_tol,
            });
        let mut kernel_amplitudes = BTreeMap::new();
        for (key, amps) in &self.kernel_amplitudes {
            let k: usize = key
                .parse()
                .map_err(|_| Error::Config(format!("kernel_amplitudes key {key:?} is not a mode index")))?;
            kernel_amplitudes.insert(k, amps.clone());
        }
        Ok(ProblemSpec {
            n,
            l: self.l,
            a: self.a,
            ratio,
            schema: self.schema,
            phi: resolve_all(&self.phi)?,
            psi: resolve_all(&self.psi)?,
            truncation: self.truncation.unwrap_or(defaults::TRUNCATION),
            tolerances,
            kernel_amplitudes,
        })
    }
}

pub fn load_problem(path: &Path) -> Result<ProblemSpec> {
    ProblemConfig::load(path)?.to_spec()
}
