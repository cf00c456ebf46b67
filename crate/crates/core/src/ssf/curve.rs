use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::compensated_sum;
use crate::spectral::SpectralData;

/// Exact finite-volume spectral shift function
/// `ξ(λ) = #{n : λ_n(H₂) ≤ λ} - #{n : λ_n(H₁) ≤ λ}`.
///
/// `values[i]` holds on `[breakpoints[i], breakpoints[i+1])`; the curve is zero
/// below the first breakpoint, and the last value is always zero because both
/// operators have the same number of eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsfCurve {
    breakpoints: Vec<f64>,
    values: Vec<i64>,
}

impl SsfCurve {
    /// Curve from two ascending spectra of equal length.
    pub fn from_spectra(first: &[f64], second: &[f64]) -> Result<Self> {
        if first.len() != second.len() {
            return Err(Error::DimensionMismatch {
                expected: first.len(),
                actual: second.len(),
            });
        }
        let mut breakpoints = Vec::with_capacity(first.len() + second.len());
        let mut values = Vec::with_capacity(first.len() + second.len());
        let (mut i, mut j) = (0usize, 0usize);
        while i < first.len() || j < second.len() {
            let next = match (first.get(i), second.get(j)) {
                (Some(&a), Some(&b)) => a.min(b),
                (Some(&a), None) => a,
                (None, Some(&b)) => b,
                (None, None) => unreachable!(),
            };
            while i < first.len() && first[i] <= next {
                i += 1;
            }
            while j < second.len() && second[j] <= next {
                j += 1;
            }
            breakpoints.push(next);
            values.push(j as i64 - i as i64);
        }
        Ok(Self { breakpoints, values })
    }

    /// Build directly from parts; used when mapping curves between coordinates.
    pub fn from_parts(breakpoints: Vec<f64>, values: Vec<i64>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: breakpoints.len(),
                actual: values.len(),
            });
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("breakpoints", "must be strictly increasing"));
        }
        if values.last().is_some_and(|&v| v != 0) {
            return Err(Error::invalid("values", "curve must vanish beyond its last breakpoint"));
        }
        Ok(Self { breakpoints, values })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Right-continuous evaluation.
    pub fn eval(&self, lambda: f64) -> i64 {
        let k = self.breakpoints.partition_point(|&b| b <= lambda);
        if k == 0 {
            0
        } else {
            self.values[k - 1]
        }
    }

    pub fn max_abs(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn min_value(&self) -> i64 {
        self.values.iter().copied().min().unwrap_or(0).min(0)
    }

    pub fn max_value(&self) -> i64 {
        self.values.iter().copied().max().unwrap_or(0).max(0)
    }

    /// `(start, end, value)` for every bounded interval.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, i64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[0], w[1], v))
    }

    /// Midpoint of the interval with `ξ ≠ 0` whose midpoint is closest to `target`.
    pub fn nearest_nonzero_midpoint(&self, target: f64) -> Option<f64> {
        self.intervals()
            .filter(|&(a, b, v)| v != 0 && b > a)
            .map(|(a, b, _)| 0.5 * (a + b))
            .min_by(|x, y| (x - target).abs().total_cmp(&(y - target).abs()))
    }

    /// `∫ ξ(λ) dλ`.
    pub fn integral(&self) -> f64 {
        compensated_sum(self.intervals().map(|(a, b, v)| v as f64 * (b - a)))
    }

    /// `∫_{-∞}^{upper} F(|ξ(λ)|) dλ` for a function with `F(0) = 0`.
    pub fn integral_of_abs<F: Fn(u64) -> f64>(&self, upper: f64, f: F) -> f64 {
        compensated_sum(self.intervals().filter(|&(a, _, v)| a < upper && v != 0).map(
            |(a, b, v)| f(v.unsigned_abs()) * (b.min(upper) - a),
        ))
    }

    /// `∫ ρ'(λ) ξ_K(λ) dλ` where `ξ_K = -ξ` is the orientation for which
    /// `Tr[ρ(H₂) - ρ(H₁)] = ∫ ρ' ξ_K`. Exact because `ξ` is piecewise constant.
    pub fn krein_pairing<F: Fn(f64) -> f64>(&self, rho: F) -> f64 {
        compensated_sum(
            self.intervals()
                .filter(|&(_, _, v)| v != 0)
                .map(|(a, b, v)| -(v as f64) * (rho(b) - rho(a))),
        )
    }

    /// Two-column text export, `#`-prefixed metadata lines first.
    pub fn to_table(&self, metadata: &[(&str, String)]) -> String {
        let mut out = String::new();
        out.push_str("# spectral shift function: xi(lambda) = #{H2 <= lambda} - #{H1 <= lambda}\n");
        out.push_str("# value holds on [breakpoint, next breakpoint); zero outside\n");
        for (k, v) in metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out.push_str("# units: breakpoint [energy], value [count]\n");
        out.push_str("breakpoint,value\n");
        for (b, v) in self.breakpoints.iter().zip(&self.values) {
            out.push_str(&format!("{b:e},{v}\n"));
        }
        out
    }
}

/// SSF of the pair `(H₁, H₂)` by eigenvalue counting.
pub fn ssf_counting(first: &SpectralData, second: &SpectralData) -> Result<SsfCurve> {
    SsfCurve::from_spectra(first.eigenvalues(), second.eigenvalues())
}

/// SSF recomputed in the coordinates `s = g(λ)` and mapped back:
/// `ξ(λ) = sign(g') ξ(g(λ), g(H₂), g(H₁))`.
///
/// `g` must be strictly monotone on the union of both spectra; its values are
/// what the counting runs on, so equality with [`ssf_counting`] is a genuine
/// check of the invariance principle.
pub fn ssf_via_invariance<G: Fn(f64) -> f64>(
    first: &SpectralData,
    second: &SpectralData,
    g: G,
) -> Result<SsfCurve> {
    if first.len() != second.len() {
        return Err(Error::DimensionMismatch {
            expected: first.len(),
            actual: second.len(),
        });
    }
    let mut union: Vec<f64> = first
        .eigenvalues()
        .iter()
        .chain(second.eigenvalues())
        .copied()
        .collect();
    union.sort_by(f64::total_cmp);
    union.dedup();
    let mapped: Vec<f64> = union.iter().map(|&x| g(x)).collect();
    if let Some((x, _)) = union.iter().zip(&mapped).find(|(_, y)| !y.is_finite()) {
        return Err(Error::NonFinite { at: *x });
    }
    let increasing = match mapped.len() {
        0 | 1 => true,
        _ => mapped[1] > mapped[0],
    };
    for (k, w) in mapped.windows(2).enumerate() {
        let ok = if increasing { w[1] > w[0] } else { w[1] < w[0] };
        if !ok {
            return Err(Error::NotMonotone { at: union[k + 1] });
        }
    }

    let transform = |spec: &SpectralData| -> Vec<f64> {
        let mut v: Vec<f64> = spec.eigenvalues().iter().map(|&x| g(x)).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let in_s = SsfCurve::from_spectra(&transform(first), &transform(second))?;
    let k = union.len();
    debug_assert_eq!(in_s.breakpoints.len(), k);

    let values = if increasing {
        in_s.values.clone()
    } else {
        // λ-interval [u_i, u_{i+1}) is the s-interval (s_{k-2-i}, s_{k-1-i}].
        (0..k)
            .map(|i| if i + 1 < k { -in_s.values[k - 2 - i] } else { 0 })
            .collect()
    };
    SsfCurve::from_parts(union, values)
}
