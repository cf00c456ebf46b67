use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, compensated_sum, QuadratureTolerance};
use crate::spectral::{SingularValueList, SpectralData};

use super::curve::SsfCurve;
use super::ft::FtFunctional;
use super::switch::SwitchFunction;

/// Both sides of the trace identity `Tr[ρ(H₂) - ρ(H₁)] = ∫ ρ' ξ_K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KreinCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl KreinCheck {
    pub fn discrepancy(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    /// `|lhs - rhs| ≤ tol (1 + |lhs|)`.
    pub fn holds(&self, tol: f64) -> bool {
        self.discrepancy() <= tol * (1.0 + self.lhs.abs())
    }
}

/// `Σ_n [ρ(λ_n(H₂)) - ρ(λ_n(H₁))]`, paired by index to limit cancellation.
pub fn trace_difference<F: Fn(f64) -> f64>(
    first: &SpectralData,
    second: &SpectralData,
    rho: F,
) -> Result<f64> {
    if first.len() != second.len() {
        return Err(Error::DimensionMismatch {
            expected: first.len(),
            actual: second.len(),
        });
    }
    let mut terms = Vec::with_capacity(first.len());
    for (&a, &b) in first.eigenvalues().iter().zip(second.eigenvalues()) {
        let (ra, rb) = (rho(a), rho(b));
        if !ra.is_finite() {
            return Err(Error::NonFinite { at: a });
        }
        if !rb.is_finite() {
            return Err(Error::NonFinite { at: b });
        }
        terms.push(rb - ra);
    }
    Ok(compensated_sum(terms))
}

/// Trace side from the spectra, integral side from the counting curve.
pub fn krein_check<F: Fn(f64) -> f64>(
    first: &SpectralData,
    second: &SpectralData,
    rho: F,
) -> Result<KreinCheck> {
    let curve = super::curve::ssf_counting(first, second)?;
    let lhs = trace_difference(first, second, &rho)?;
    let rhs = curve.krein_pairing(&rho);
    Ok(KreinCheck { lhs, rhs })
}

/// `∫_{-∞}^{T} F_t(|ξ(λ)|) dλ`, summed exactly over the breakpoint intervals.
pub fn ssf_integral_bound(curve: &SsfCurve, f: &FtFunctional, upper: f64) -> Result<f64> {
    let table = f_table(f, curve.max_abs() as u64)?;
    Ok(curve.integral_of_abs(upper, |k| table[k as usize]))
}

/// `F(0), F(1), …, F(max)` built from increments.
fn f_table(f: &FtFunctional, max: u64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for n in 1..=max {
        acc += f.increment((n - 1) as f64, n as f64)?;
        out.push(acc);
    }
    Ok(out)
}

/// Smallest `K₁` with `∫_{-∞}^{T} F(|ξ|) ≤ K₁ e^T` for every `T`.
///
/// `I(T)` is piecewise linear, so `e^{-T} I(T)` peaks either at a breakpoint or
/// where `I(T)` equals the local slope.
pub fn integral_bound_constant(curve: &SsfCurve, f: &FtFunctional) -> Result<f64> {
    let table = f_table(f, curve.max_abs() as u64)?;
    let mut acc = 0.0;
    let mut best = 0.0f64;
    for (a, b, v) in curve.intervals() {
        let slope = table[v.unsigned_abs() as usize];
        best = best.max((-a).exp() * acc);
        if slope > 0.0 {
            let t_star = a + 1.0 - acc / slope;
            if t_star > a && t_star < b {
                best = best.max((-t_star).exp() * (acc + slope * (t_star - a)));
            }
        }
        acc += slope * (b - a);
        best = best.max((-b).exp() * acc);
    }
    Ok(best)
}

/// Both sides of the dual bound
/// `∫ f ξ_K ≤ K₁ e^b + K₂ (log(1+‖f‖∞))^d ‖f‖₁` for `f = scale · ρ'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualBoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluate the dual bound for a scaled switch derivative with fitted
/// constants `K₁` and `K₂`.
pub fn dual_bound_check(
    curve: &SsfCurve,
    switch: &SwitchFunction,
    scale: f64,
    k1: f64,
    k2: f64,
    dimension: u32,
) -> DualBoundCheck {
    let lhs = scale * curve.krein_pairing(|x| switch.eval(x));
    let sup_norm = scale.abs() * switch.max_derivative();
    let l1_norm = scale.abs();
    let b = switch.center() + switch.half_width();
    let rhs = k1 * b.exp() + k2 * (1.0 + sup_norm).ln().powi(dimension as i32) * l1_norm;
    DualBoundCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-10 * (1.0 + rhs.abs()),
    }
}

/// Hundertmark–Simon majorisation
/// `∫ F(|ξ(s)|) ds ≤ Σ_n μ_n (F(n) - F(n-1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MajorizationCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// The SSF of `(e^{-H₁}, e^{-H₂})` in the coordinate `s`, built from the
/// exactly mapped spectra.
pub fn exponentiated_curve(first: &SpectralData, second: &SpectralData) -> Result<SsfCurve> {
    let map = |spec: &SpectralData| -> Vec<f64> {
        let mut v: Vec<f64> = spec.eigenvalues().iter().map(|x| (-x).exp()).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    SsfCurve::from_spectra(&map(first), &map(second))
}

pub fn hs_majorization_check(
    sv: &SingularValueList,
    curve_exp: &SsfCurve,
    f: &FtFunctional,
) -> Result<MajorizationCheck> {
    let lhs = ssf_integral_bound(curve_exp, f, f64::INFINITY)?;
    let mut terms = Vec::with_capacity(sv.len());
    for (i, &mu) in sv.values().iter().enumerate() {
        if mu == 0.0 {
            continue;
        }
        terms.push(mu * f.increment(i as f64, (i + 1) as f64)?);
    }
    let rhs = compensated_sum(terms);
    Ok(MajorizationCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-10,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceBoundRow {
    pub epsilon: f64,
    pub trace: f64,
    /// `|log ε|^d`.
    pub log_factor: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceBoundTable {
    pub energy: f64,
    pub dimension: u32,
    pub rows: Vec<TraceBoundRow>,
    /// `max_ε Tr[ρ(H₂) - ρ(H₁)] / |log ε|^d` over the whole grid.
    pub c_e: f64,
    /// Same maximum over the coarser (larger-ε) half.
    pub c_e_coarse: f64,
    /// Same maximum over the finer half.
    pub c_e_fine: f64,
    /// Fine-grid points exceeding `2 c_e_coarse |log ε|^d`.
    pub envelope_violations: Vec<f64>,
}

/// `Tr[ρ_{E,ε}(H₂) - ρ_{E,ε}(H₁)]` on an ε-grid, with the fitted `C_E` of
/// the `C_E |log ε|^d` law.
pub fn trace_bound_check(
    first: &SpectralData,
    second: &SpectralData,
    energy: f64,
    eps_grid: &[f64],
    dimension: u32,
) -> Result<TraceBoundTable> {
    if eps_grid.is_empty() {
        return Err(Error::invalid("epsilon_grid", "must be nonempty"));
    }
    let mut grid = eps_grid.to_vec();
    grid.sort_by(|a, b| b.total_cmp(a));
    let mut rows = Vec::with_capacity(grid.len());
    for &eps in &grid {
        let rho = SwitchFunction::new(energy, eps)?;
        let trace = trace_difference(first, second, |x| rho.eval(x))?;
        let log_factor = eps.ln().abs().powi(dimension as i32);
        rows.push(TraceBoundRow {
            epsilon: eps,
            trace,
            log_factor,
            ratio: trace / log_factor,
        });
    }
    let max_ratio = |rows: &[TraceBoundRow]| rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let split = rows.len() / 2;
    let c_e = max_ratio(&rows);
    let c_e_coarse = max_ratio(&rows[..split]);
    let c_e_fine = max_ratio(&rows[split..]);
    let envelope_violations = rows[split..]
        .iter()
        .filter(|r| split > 0 && r.trace > 2.0 * c_e_coarse * r.log_factor)
        .map(|r| r.epsilon)
        .collect();
    Ok(TraceBoundTable {
        energy,
        dimension,
        rows,
        c_e,
        c_e_coarse,
        c_e_fine,
        envelope_violations,
    })
}

/// Synthetic SSF profile `|ξ(E+λ)| = (|ln λ| / ln|ln λ|)^{d/2}` near a
/// degenerate level, written in `L = |ln λ|`.
pub fn synthetic_level_profile(dimension: u32, log_depth: f64) -> f64 {
    (log_depth / log_depth.ln()).powf(dimension as f64 / 2.0)
}

/// `∫ F_{t,α}(|ξ(λ)|) dλ` over `λ ∈ [e^{-cutoff}, e^{-start}]` for the
/// synthetic profile, in the variable `L` (so `dλ = e^{-L} dL`). Returned
/// for each cutoff in increasing order; growth without bound as the cutoff
/// moves towards `λ = 0` signals non-integrability.
pub fn synthetic_singularity_trend(
    f: &FtFunctional,
    start: f64,
    cutoffs: &[f64],
) -> Result<Vec<f64>> {
    if !(start > std::f64::consts::E) {
        return Err(Error::invalid("start", "profile needs L > e"));
    }
    let d = f.dimension();
    let tol = QuadratureTolerance {
        relative: 1e-8,
        absolute: 1e-300,
        max_depth: 40,
    };
    let integrand = |l: f64| {
        let xi = synthetic_level_profile(d, l);
        f.eval(xi).unwrap_or(f64::NAN) * (-l).exp()
    };
    let mut partial = Vec::with_capacity(cutoffs.len());
    let mut acc = 0.0;
    let mut from = start;
    for &cut in cutoffs {
        if cut < from {
            return Err(Error::invalid("cutoffs", "must be increasing and above start"));
        }
        acc += adaptive_simpson(integrand, from, cut, tol);
        if !acc.is_finite() {
            return Err(Error::NonFinite { at: cut });
        }
        partial.push(acc);
        from = cut;
    }
    Ok(partial)
}
