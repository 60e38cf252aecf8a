//! Characteristic roots of the per-mode ODE and the real solution bases.
//!
//! Mode k reduces the equation to u^{(2n)} + (−1)ⁿ·sgn(y)·λ^{2n}·u = 0 with
//! λ = πk/l. Each half-line has characteristic roots r = λ·e^{iφ} solving
//! r^{2n} = ±λ^{2n}; for n = 2m the upper side gets
//! θ_p = π(1 + 2p)/(4m) and the lower side σ_s = πs/(2m).

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Cos,
    Sin,
}

/// cos and sin of π·num/den, exact at multiples of π/2.
fn cos_sin_pi(num: i64, den: i64) -> (f64, f64) {
    if (2 * num) % den == 0 {
        match (2 * num / den).rem_euclid(4) {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    } else {
        let angle = PI * num as f64 / den as f64;
        (angle.cos(), angle.sin())
    }
}

/// Root λ·e^{iπ·num/den} on the upper half of the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    num: i64,
    den: i64,
    angle: f64,
    cos: f64,
    sin: f64,
}

impl Root {
    fn new(num: i64, den: i64, angle: f64) -> Self {
        let (cos, sin) = cos_sin_pi(num, den);
        Self { num, den, angle, cos, sin }
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn is_real(&self) -> bool {
        self.sin == 0.0
    }

    /// cos and sin of t·angle.
    fn shifted(&self, t: usize) -> (f64, f64) {
        cos_sin_pi(self.num * t as i64, self.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFunction {
    pub root: usize,
    pub trig: Trig,
}

/// Roots and real basis functions of one half-line.
#[derive(Debug, Clone, PartialEq)]
pub struct SideBasis {
    roots: Vec<Root>,
    functions: Vec<BasisFunction>,
}

impl SideBasis {
    /// Roots of r^{2n} = −λ^{2n}: n conjugate pairs at π(1 + 2p)/(2n).
    fn complex_pairs(n: usize) -> Self {
        let den = 2 * n as i64;
        let roots: Vec<Root> = (0..n)
            .map(|p| {
                let angle = PI / (2 * n) as f64 * (1 + 2 * p) as f64;
                Root::new(1 + 2 * p as i64, den, angle)
            })
            .collect();
        let functions = (0..n)
            .flat_map(|p| {
                [Trig::Cos, Trig::Sin].map(|trig| BasisFunction { root: p, trig })
            })
            .collect();
        Self { roots, functions }
    }

    /// Roots of r^{2n} = +λ^{2n}: real ±λ plus n − 1 pairs at πj/n.
    fn real_ended(n: usize) -> Self {
        let roots: Vec<Root> = (0..=n)
            .map(|j| Root::new(j as i64, n as i64, PI * j as f64 / n as f64))
            .collect();
        let mut functions = vec![BasisFunction { root: 0, trig: Trig::Cos }];
        for j in 1..n {
            functions.push(BasisFunction { root: j, trig: Trig::Cos });
            functions.push(BasisFunction { root: j, trig: Trig::Sin });
        }
        functions.push(BasisFunction { root: n, trig: Trig::Cos });
        Self { roots, functions }
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn functions(&self) -> &[BasisFunction] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootGeometry {
    n: usize,
    k: usize,
    lambda: f64,
    upper: SideBasis,
    lower: SideBasis,
}

pub fn compute_root_geometry(n: usize, k: usize, l: f64) -> RootGeometry {
    assert!(n >= 1, "half-order must be positive");
    let lambda = PI * k as f64 / l;
    // upper: r^{2n} = −(−1)ⁿλ^{2n}; lower: r^{2n} = (−1)ⁿλ^{2n}
    let (upper, lower) = if n.is_multiple_of(2) {
        (SideBasis::complex_pairs(n), SideBasis::real_ended(n))
    } else {
        (SideBasis::real_ended(n), SideBasis::complex_pairs(n))
    };
    RootGeometry { n, k, lambda, upper, lower }
}

impl RootGeometry {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn side(&self, side: Side) -> &SideBasis {
        match side {
            Side::Upper => &self.upper,
            Side::Lower => &self.lower,
        }
    }

    /// Root angles on the upper side (θ_p for even n).
    pub fn theta(&self) -> Vec<f64> {
        self.upper.roots.iter().map(Root::angle).collect()
    }

    /// First n root angles on the lower side (σ_s for even n).
    pub fn sigma(&self) -> Vec<f64> {
        self.lower.roots.iter().take(self.n).map(Root::angle).collect()
    }

    pub fn alpha(&self, p: usize) -> f64 {
        self.lambda * self.upper.roots[p].cos
    }

    pub fn beta(&self, p: usize) -> f64 {
        self.lambda * self.upper.roots[p].sin
    }

    pub fn mu(&self, s: usize) -> f64 {
        self.lambda * self.lower.roots[s].cos
    }

    pub fn nu(&self, s: usize) -> f64 {
        self.lambda * self.lower.roots[s].sin
    }

    /// Exponential rate of basis function `index`.
    pub fn growth(&self, side: Side, index: usize) -> f64 {
        let basis = self.side(side);
        self.lambda * basis.roots[basis.functions[index].root].cos
    }

    /// trig(β·y + t·φ) without the exponential or λ^t factors.
    pub fn oscillation(&self, side: Side, index: usize, t: usize, y: f64) -> f64 {
        let basis = self.side(side);
        let f = basis.functions[index];
        let root = &basis.roots[f.root];
        let (ct, st) = root.shifted(t);
        let (cb, sb) = if root.sin == 0.0 {
            (1.0, 0.0)
        } else {
            let arg = self.lambda * root.sin * y;
            (arg.cos(), arg.sin())
        };
        match f.trig {
            Trig::Cos => cb * ct - sb * st,
            Trig::Sin => sb * ct + cb * st,
        }
    }

    /// e^{growth·y − log_scale}·trig(β·y + t·φ): the t-th derivative divided by λ^t
    /// and by e^{log_scale}.
    pub fn scaled_shape(&self, side: Side, index: usize, t: usize, y: f64, log_scale: f64) -> f64 {
        (self.growth(side, index) * y - log_scale).exp() * self.oscillation(side, index, t, y)
    }

    pub fn basis_len(&self, side: Side) -> usize {
        self.side(side).len()
    }
}

/// t-th y-derivative of basis function `index` on `side` at `y`:
/// λ^t·e^{αy}·trig(βy + tφ).
pub fn basis_value(geom: &RootGeometry, side: Side, index: usize, t: usize, y: f64) -> Result<f64> {
    let wrong_side = match side {
        Side::Upper => y < 0.0,
        Side::Lower => y > 0.0,
    };
    if wrong_side {
        return Err(Error::SideMismatch { side: side.name(), y });
    }
    if t > 2 * geom.n {
        return Err(Error::DerivativeOrder { order: t, max: 2 * geom.n });
    }
    if index >= geom.basis_len(side) {
        return Err(Error::InvalidData(format!("basis index {index} out of range")));
    }
    Ok(geom.lambda.powi(t as i32) * geom.scaled_shape(side, index, t, y, 0.0))
}
