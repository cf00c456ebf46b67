use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, golden_section_max, QuadratureTolerance};

/// `F_{t,α}(x) = ∫₀ˣ (e^{t y^α} - 1) dy`, with `α = 1/d` by default.
///
/// Evaluated by adaptive Simpson after the substitution `y = u^{1/α}`, which
/// turns the integrand into `(1/α) u^{1/α-1} (e^{tu} - 1)`, smooth at the
/// origin for `α ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FtFunctional {
    t: f64,
    dimension: u32,
    exponent: f64,
    #[serde(skip, default)]
    tolerance: QuadratureTolerance,
}

impl FtFunctional {
    /// `F_t` in dimension `d` (`α = 1/d`).
    pub fn new(t: f64, dimension: u32) -> Result<Self> {
        if !(1..=3).contains(&dimension) {
            return Err(Error::invalid("dimension", "must be 1, 2 or 3"));
        }
        Self::with_exponent(t, dimension, 1.0 / dimension as f64)
    }

    /// The generalised `F_{t,α}`.
    pub fn with_exponent(t: f64, dimension: u32, exponent: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::invalid("t", format!("must be positive, got {t}")));
        }
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::invalid("alpha", "must be positive"));
        }
        Ok(Self {
            t,
            dimension,
            exponent,
            tolerance: QuadratureTolerance::default(),
        })
    }

    /// Copy using a different quadrature tolerance.
    pub fn with_tolerance(mut self, tolerance: QuadratureTolerance) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// `F'(x) = e^{t x^α} - 1`.
    pub fn derivative(&self, x: f64) -> f64 {
        (self.t * x.max(0.0).powf(self.exponent)).exp_m1()
    }

    /// `F(x)`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.increment(0.0, x)
    }

    /// `F(x₁) - F(x₀) = ∫_{x₀}^{x₁} (e^{t y^α} - 1) dy` for `0 ≤ x₀ ≤ x₁`,
    /// computed directly so large arguments do not cancel.
    pub fn increment(&self, x0: f64, x1: f64) -> Result<f64> {
        if !(x0 >= 0.0) || !(x1 >= 0.0) {
            return Err(Error::invalid("x", format!("F_t needs nonnegative arguments, got [{x0}, {x1}]")));
        }
        if x1 < x0 {
            return Err(Error::invalid("x", "increment needs x0 <= x1"));
        }
        if x0 == x1 {
            return Ok(0.0);
        }
        let a = self.exponent;
        let inv = 1.0 / a;
        let t = self.t;
        let integrand = move |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            inv * u.powf(inv - 1.0) * (t * u).exp_m1()
        };
        let value = adaptive_simpson(integrand, x0.powf(a), x1.powf(a), self.tolerance);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFinite { at: x1 })
        }
    }

    /// Legendre transform `G(y) = sup_{x ≥ 0} {x y - F(x)}` by golden-section
    /// search. The objective is concave, and `F'(x) > y` past the bracket.
    pub fn legendre_dual(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return Err(Error::invalid("y", "must be nonnegative"));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        let mut hi = 1.0;
        while self.derivative(hi) <= y {
            hi *= 2.0;
        }
        let objective = |x: f64| x * y - self.eval(x).unwrap_or(f64::INFINITY);
        let (_, value) = golden_section_max(objective, 0.0, hi, 1e-12);
        Ok(value.max(0.0))
    }

    /// `y (log(1+y)/t)^d`, the closed-form majorant of `G`.
    pub fn legendre_majorant(&self, y: f64) -> f64 {
        y * ((1.0 + y).ln() / self.t).powi(self.dimension as i32)
    }
}

/// `F_t(x) / ((d/t) x^{(d-1)/d} e^{t x^{1/d}})`, which tends to 1 for large `x`.
pub fn asymptotic_ratio(f: &FtFunctional, x: f64) -> Result<f64> {
    let d = f.dimension() as f64;
    let value = f.eval(x)?;
    let leading = d / f.t() * x.powf((d - 1.0) / d) * (f.t() * x.powf(1.0 / d)).exp();
    Ok(value / leading)
}
