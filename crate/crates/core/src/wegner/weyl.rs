use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Domain, LatticeOperator};
use crate::numerics::CompensatedSum;
use crate::spectral::{eigenvalues_only, DEFAULT_DENSE_CAP};

/// Default fraction of the spectrum compared with the continuum bound.
pub const DEFAULT_ETA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylRow {
    pub n: usize,
    pub eigenvalue: f64,
    pub bound: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylReport {
    pub spacing: f64,
    pub sites: usize,
    pub volume: f64,
    pub eta: f64,
    pub delta: f64,
    pub constant: f64,
    pub rows: Vec<WeylRow>,
    /// Indices `n` with `E_n` below the bound.
    pub violations: Vec<usize>,
    pub min_margin: f64,
}

/// `δ = max(0, -min V) / λ_max(kinetic)` and `C = max(0, -min V)`.
fn relative_bound(domain: &Domain, potential: &[f64]) -> Result<(f64, f64)> {
    let negative = potential.iter().fold(0.0f64, |a, &v| a.max(-v));
    let kinetic = LatticeOperator::new(domain.clone(), vec![0.0; domain.len()], None)?;
    let spec = eigenvalues_only(&kinetic.matrix(), DEFAULT_DENSE_CAP)?;
    let top = spec.eigenvalues()[spec.len() - 1];
    let delta = negative / top;
    if delta >= 1.0 {
        return Err(Error::invalid(
            "potential",
            format!("relative bound delta = {delta} must be below 1"),
        ));
    }
    Ok((delta, negative))
}

/// Compare the lowest `⌊η N⌋` eigenvalues with `(2π(1-δ)d/e)(n/|U|)^{2/d} - C`.
pub fn weyl_check(domain: &Domain, potential: &[f64], eta: f64) -> Result<WeylReport> {
    if !(eta > 0.0 && eta <= 0.25) {
        return Err(Error::invalid("eta", format!("must lie in (0, 1/4], got {eta}")));
    }
    if domain.len() > DEFAULT_DENSE_CAP {
        return Err(Error::DenseCapExceeded {
            size: domain.len(),
            cap: DEFAULT_DENSE_CAP,
        });
    }
    let (delta, constant) = relative_bound(domain, potential)?;
    let op = LatticeOperator::new(domain.clone(), potential.to_vec(), None)?;
    let spec = eigenvalues_only(&op.matrix(), DEFAULT_DENSE_CAP)?;
    let d = domain.dimension() as f64;
    let volume = domain.volume();
    let prefactor = 2.0 * std::f64::consts::PI * (1.0 - delta) * d / std::f64::consts::E;
    let count = ((eta * domain.len() as f64).floor() as usize).max(1);
    let rows: Vec<WeylRow> = spec.eigenvalues()[..count]
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let n = i + 1;
            let bound = prefactor * (n as f64 / volume).powf(2.0 / d) - constant;
            WeylRow {
                n,
                eigenvalue: e,
                bound,
                margin: e - bound,
            }
        })
        .collect();
    let violations = rows.iter().filter(|r| r.margin < 0.0).map(|r| r.n).collect();
    let min_margin = rows.iter().fold(f64::INFINITY, |a, r| a.min(r.margin));
    Ok(WeylReport {
        spacing: domain.spacing(),
        sites: domain.len(),
        volume,
        eta,
        delta,
        constant,
        rows,
        violations,
        min_margin,
    })
}

/// Potential on `domain.refined()`: each child site inherits its parent's value.
pub fn refine_potential(domain: &Domain, refined: &Domain, potential: &[f64]) -> Result<Vec<f64>> {
    refined
        .sites()
        .iter()
        .map(|c| {
            let parent = [c[0].div_euclid(2), c[1].div_euclid(2), c[2].div_euclid(2)];
            domain
                .index_of(&parent)
                .map(|i| potential[i])
                .ok_or_else(|| Error::invalid("refined", "site has no parent in the coarse domain"))
        })
        .collect()
}

/// Weyl check at spacing `h` and `h/2` over the same continuum region.
pub fn weyl_refinement(domain: &Domain, potential: &[f64], eta: f64) -> Result<[WeylReport; 2]> {
    let coarse = weyl_check(domain, potential, eta)?;
    let refined = domain.refined()?;
    let v = refine_potential(domain, &refined, potential)?;
    let fine = weyl_check(&refined, &v, eta)?;
    Ok([coarse, fine])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemigroupTraceRow {
    pub t: f64,
    /// `Σ e^{-2tλ_n}`.
    pub lhs: f64,
    /// `e^{2tC} |U| (8πt(1-δ))^{-d/2}`.
    pub rhs: f64,
    /// `1 - lhs / rhs`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemigroupTraceReport {
    pub spacing: f64,
    pub volume: f64,
    pub delta: f64,
    pub constant: f64,
    /// Smallest admissible `t`, `4h²`.
    pub window_min: f64,
    pub rows: Vec<SemigroupTraceRow>,
}

impl SemigroupTraceReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.lhs <= r.rhs)
    }

    pub fn min_margin(&self) -> f64 {
        self.rows.iter().fold(f64::INFINITY, |a, r| a.min(r.margin))
    }
}

pub fn semigroup_trace_check(domain: &Domain, potential: &[f64], t_grid: &[f64]) -> Result<SemigroupTraceReport> {
    let h = domain.spacing();
    let window_min = 4.0 * h * h;
    if t_grid.is_empty() {
        return Err(Error::invalid("t_grid", "must be nonempty"));
    }
    if let Some(&t) = t_grid.iter().find(|&&t| !(t >= window_min)) {
        return Err(Error::invalid(
            "t_grid",
            format!("t = {t} is below the validity window 4h^2 = {window_min}"),
        ));
    }
    if domain.len() > DEFAULT_DENSE_CAP {
        return Err(Error::DenseCapExceeded {
            size: domain.len(),
            cap: DEFAULT_DENSE_CAP,
        });
    }
    let (delta, constant) = relative_bound(domain, potential)?;
    let op = LatticeOperator::new(domain.clone(), potential.to_vec(), None)?;
    let spec = eigenvalues_only(&op.matrix(), DEFAULT_DENSE_CAP)?;
    let d = domain.dimension() as f64;
    let volume = domain.volume();
    let rows = t_grid
        .iter()
        .map(|&t| {
            let lhs = spec
                .eigenvalues()
                .iter()
                .map(|&l| (-2.0 * t * l).exp())
                .collect::<CompensatedSum>()
                .value();
            let rhs = (2.0 * t * constant).exp()
                * volume
                * (8.0 * std::f64::consts::PI * t * (1.0 - delta)).powf(-d / 2.0);
            SemigroupTraceRow {
                t,
                lhs,
                rhs,
                margin: 1.0 - lhs / rhs,
            }
        })
        .collect();
    Ok(SemigroupTraceReport {
        spacing: h,
        volume,
        delta,
        constant,
        window_min,
        rows,
    })
}
