use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Monotone ramp from `-1` on `(-∞, E-ε]` to `0` on `[E+ε, ∞)`.
///
/// The transition is the quintic smoothstep, so `ρ` is C¹ everywhere (C²
/// away from the two junctions) and `max ρ' = (15/8) / (2ε) = 0.9375/ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchFunction {
    center: f64,
    half_width: f64,
}

/// Peak slope of the quintic smoothstep on the unit interval.
pub const SMOOTHSTEP_PEAK_SLOPE: f64 = 15.0 / 8.0;

/// Quintic smoothstep `6u⁵ - 15u⁴ + 10u³`, clamped to `[0, 1]`.
pub fn smoothstep(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
}

pub fn smoothstep_derivative(u: f64) -> f64 {
    if !(0.0..=1.0).contains(&u) {
        return 0.0;
    }
    30.0 * u * u * (1.0 - u) * (1.0 - u)
}

impl SwitchFunction {
    pub fn new(center: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width <= 0.5) {
            return Err(Error::invalid(
                "epsilon",
                format!("switch half-width must lie in (0, 1/2], got {half_width}"),
            ));
        }
        if !center.is_finite() {
            return Err(Error::invalid("energy", "must be finite"));
        }
        Ok(Self { center, half_width })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    fn unit(&self, x: f64) -> f64 {
        (x - (self.center - self.half_width)) / (2.0 * self.half_width)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.center - self.half_width {
            -1.0
        } else if x >= self.center + self.half_width {
            0.0
        } else {
            smoothstep(self.unit(x)) - 1.0
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        smoothstep_derivative(self.unit(x)) / (2.0 * self.half_width)
    }

    /// `sup |ρ'|`, attained at the centre.
    pub fn max_derivative(&self) -> f64 {
        SMOOTHSTEP_PEAK_SLOPE / (2.0 * self.half_width)
    }
}

/// Switch function centred at `energy` with half-width `eps`.
pub fn make_switch(energy: f64, eps: f64) -> Result<SwitchFunction> {
    SwitchFunction::new(energy, eps)
}
