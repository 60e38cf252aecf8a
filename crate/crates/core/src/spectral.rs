//! Sine eigenbasis X_k(x) = √(2/l)·sin(πkx/l) and Fourier coefficients of
//! boundary data.

use std::f64::consts::PI;

use crate::defaults;
use crate::error::{Error, Result};
use crate::model::{BoundaryFunction, ProblemSpec, SampledFunction};

pub fn eigenfunction_value(k: usize, x: f64, l: f64) -> Result<f64> {
    if !(0.0..=l).contains(&x) {
        return Err(Error::OutOfInterval { x, l });
    }
    Ok((2.0 / l).sqrt() * (PI * k as f64 * x / l).sin())
}

/// p-th x-derivative of X_k.
pub fn eigenfunction_derivative(k: usize, p: usize, x: f64, l: f64) -> f64 {
    let lambda = PI * k as f64 / l;
    let arg = lambda * x + p as f64 * PI / 2.0;
    (2.0 / l).sqrt() * lambda.powi(p as i32) * arg.sin()
}

/// Composite Simpson rule on an odd number of uniformly spaced values.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    assert!(
        values.len() >= 3 && values.len() % 2 == 1,
        "Simpson needs an odd count ≥ 3"
    );
    let last = values.len() - 1;
    let inner: f64 = values[1..last]
        .iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { 4.0 * v } else { 2.0 * v })
        .sum();
    h / 3.0 * (values[0] + inner + values[last])
}

/// ∫₀^l f(x) X_k(x) dx.
///
/// Exact for sine polynomials; composite Simpson for samples, refusing modes
/// with fewer than 8 samples per period.
pub fn sine_coefficient(f: &BoundaryFunction, k: usize) -> Result<f64> {
    match f {
        BoundaryFunction::Sine(p) => Ok(p.coefficient(k) * (p.length() / 2.0).sqrt()),
        BoundaryFunction::Samples(s) => sampled_coefficient(s, k),
    }
}

fn sampled_coefficient(s: &SampledFunction, k: usize) -> Result<f64> {
    let intervals = s.samples().len() - 1;
    // one period of sin(πkx/l) spans 2/k of the interval
    if k == 0 || 2 * intervals < defaults::SAMPLES_PER_PERIOD * k {
        return Err(Error::UnderResolvedMode {
            k,
            samples: s.samples().len(),
        });
    }
    let l = s.length();
    let h = s.spacing();
    let norm = (2.0 / l).sqrt();
    let products: Vec<f64> = s
        .samples()
        .iter()
        .enumerate()
        .map(|(i, v)| v * norm * (PI * k as f64 * i as f64 / intervals as f64).sin())
        .collect();
    Ok(simpson(&products, h))
}

/// Largest mode a sampled function can resolve; `None` for sine polynomials.
pub fn resolvable_modes(f: &BoundaryFunction) -> Option<usize> {
    match f {
        BoundaryFunction::Sine(_) => None,
        BoundaryFunction::Samples(s) => {
            Some(2 * (s.samples().len() - 1) / defaults::SAMPLES_PER_PERIOD)
        }
    }
}

/// φ_{sk}, ψ_{sk} for s = 0..n−1, k = 1..K.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeCoefficients {
    n: usize,
    modes: usize,
    phi: Vec<f64>,
    psi: Vec<f64>,
}

impl ModeCoefficients {
    pub fn compute(spec: &ProblemSpec) -> Result<Self> {
        let (n, modes) = (spec.n, spec.truncation);
        let mut phi = Vec::with_capacity(n * modes);
        let mut psi = Vec::with_capacity(n * modes);
        for s in 0..n {
            for k in 1..=modes {
                phi.push(sine_coefficient(&spec.phi[s], k)?);
                psi.push(sine_coefficient(&spec.psi[s], k)?);
            }
        }
        Ok(Self { n, modes, phi, psi })
    }

    /// Coefficients given directly; `phi[s][k-1]`, `psi[s][k-1]`.
    pub fn from_rows(phi: Vec<Vec<f64>>, psi: Vec<Vec<f64>>) -> Result<Self> {
        let n = phi.len();
        let modes = phi.first().map_or(0, Vec::len);
        if psi.len() != n
            || phi.iter().chain(psi.iter()).any(|row| row.len() != modes)
        {
            return Err(Error::InvalidData("coefficient rows must form n × K arrays".into()));
        }
        let phi: Vec<f64> = phi.into_iter().flatten().collect();
        let psi: Vec<f64> = psi.into_iter().flatten().collect();
        if phi.iter().chain(psi.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("non-finite coefficient".into()));
        }
        Ok(Self { n, modes, phi, psi })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn phi(&self, s: usize, k: usize) -> f64 {
        self.phi[s * self.modes + k - 1]
    }

    pub fn psi(&self, s: usize, k: usize) -> f64 {
        self.psi[s * self.modes + k - 1]
    }

    pub fn phi_mode(&self, k: usize) -> Vec<f64> {
        (0..self.n).map(|s| self.phi(s, k)).collect()
    }

    pub fn psi_mode(&self, k: usize) -> Vec<f64> {
        (0..self.n).map(|s| self.psi(s, k)).collect()
    }

    /// Euclidean norm over every stored coefficient.
    pub fn norm(&self) -> f64 {
        self.phi
            .iter()
            .chain(self.psi.iter())
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    /// Largest |φ_{sk}| + |ψ_{sk}| entry at mode k.
    pub fn mode_magnitude(&self, k: usize) -> f64 {
        (0..self.n)
            .map(|s| self.phi(s, k).abs() + self.psi(s, k).abs())
            .sum()
    }
}
