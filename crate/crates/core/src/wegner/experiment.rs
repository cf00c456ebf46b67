use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disorder::DisorderDistribution;
use crate::error::{Error, Result};
use crate::numerics::{fit_line, CompensatedSum, LineFit};
use crate::spectral::{counting_function, eigenvalues_only, window_count};

use super::model::AlloyModel;

/// Monte Carlo Wegner run: one eigensolve per realization serves every ε.
#[derive(Debug, Clone, PartialEq)]
pub struct WegnerConfig {
    pub model: AlloyModel,
    /// Window centre; the `ω ≡ 0` mid-spectrum energy when absent.
    pub energy: Option<f64>,
    pub eps_grid: Vec<f64>,
    pub realizations: usize,
    pub seed: u64,
    pub dense_cap: usize,
}

impl WegnerConfig {
    pub fn validate(&self) -> Result<()> {
        validate_eps_grid(&self.eps_grid)?;
        if self.realizations < 1 {
            return Err(Error::invalid("realizations", "need at least one realization"));
        }
        if self.model.single_site.kappa().is_none() {
            return Err(Error::invalid(
                "single_site",
                "needs u >= kappa * cell indicator with kappa > 0",
            ));
        }
        if self.model.domain.len() > self.dense_cap {
            return Err(Error::DenseCapExceeded {
                size: self.model.domain.len(),
                cap: self.dense_cap,
            });
        }
        Ok(())
    }
}

/// Every ε must lie in `(0, 1/2]`.
pub fn validate_eps_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid("epsilon_grid", "must be nonempty"));
    }
    if let Some(bad) = grid.iter().find(|e| !(**e > 0.0 && **e <= 0.5)) {
        return Err(Error::invalid(
            "epsilon_grid",
            format!("entries must lie in (0, 1/2], found {bad}"),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WegnerRow {
    pub epsilon: f64,
    pub mean: f64,
    pub std_error: f64,
    /// `s(μ, ε)`.
    pub modulus: f64,
    /// `s(μ, 2ε)`.
    pub modulus_double: f64,
    /// `mean / (s(μ, 2ε) (log 1/ε)^d |Λ|)`.
    pub ratio: f64,
    /// `mean / (s(μ, ε) (log 1/ε)^d |Λ|)`.
    pub ratio_single: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WegnerResult {
    pub energy: f64,
    pub volume: f64,
    pub sites: usize,
    pub rows: Vec<WegnerRow>,
    /// Slope of `log mean` against `log ε` over rows with a positive mean.
    pub exponent: Option<f64>,
    pub exponent_r_squared: Option<f64>,
    /// `counts[m][j]`: eigenvalues of realization `m` in window `j`.
    pub counts: Vec<Vec<u32>>,
}

impl WegnerResult {
    /// Largest ratio divided by the median ratio.
    pub fn ratio_spread(&self) -> f64 {
        let ratios: Vec<f64> = self.rows.iter().map(|r| r.ratio).collect();
        let med = crate::numerics::median(&ratios);
        ratios.iter().fold(0.0f64, |a, &r| a.max(r)) / med
    }
}

pub fn wegner_experiment(cfg: &WegnerConfig) -> Result<WegnerResult> {
    cfg.validate()?;
    let model = &cfg.model;
    let energy = match cfg.energy {
        Some(e) => e,
        None => model.mid_spectrum_energy()?,
    };
    let grid = &cfg.eps_grid;
    let counts: Vec<Vec<u32>> = (0..cfg.realizations as u64)
        .into_par_iter()
        .map(|m| -> Result<Vec<u32>> {
            let op = model.realization(cfg.seed, m)?;
            let spec = eigenvalues_only(&op.matrix(), cfg.dense_cap)?;
            Ok(grid
                .iter()
                .map(|&eps| window_count(&spec, energy - eps, energy + eps) as u32)
                .collect())
        })
        .collect::<Result<_>>()?;

    let d = model.domain.dimension() as i32;
    let volume = model.domain.volume();
    let m = cfg.realizations as f64;
    let mut rows = Vec::with_capacity(grid.len());
    for (j, &eps) in grid.iter().enumerate() {
        let mean = counts.iter().map(|c| c[j] as f64).collect::<CompensatedSum>().value() / m;
        let var = if cfg.realizations > 1 {
            counts
                .iter()
                .map(|c| (c[j] as f64 - mean).powi(2))
                .collect::<CompensatedSum>()
                .value()
                / (m - 1.0)
        } else {
            0.0
        };
        let modulus = model.disorder.modulus(eps)?;
        let modulus_double = model.disorder.modulus(2.0 * eps)?;
        let log_factor = (1.0 / eps).ln().powi(d);
        rows.push(WegnerRow {
            epsilon: eps,
            mean,
            std_error: (var / m).sqrt(),
            modulus,
            modulus_double,
            ratio: mean / (modulus_double * log_factor * volume),
            ratio_single: mean / (modulus * log_factor * volume),
        });
    }
    let fit = log_log_fit(rows.iter().map(|r| (r.epsilon, r.mean)));
    Ok(WegnerResult {
        energy,
        volume,
        sites: model.domain.len(),
        rows,
        exponent: fit.map(|f| f.slope),
        exponent_r_squared: fit.map(|f| f.r_squared),
        counts,
    })
}

/// Least-squares slope of `log y` against `log x` over points with `y > 0`.
pub fn log_log_fit<I: IntoIterator<Item = (f64, f64)>>(points: I) -> Option<LineFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .into_iter()
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .unzip();
    fit_line(&xs, &ys)
}

/// Disorder-averaged `N_ω^l(E) / |Λ_l|` on an energy grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdsCurve {
    pub side: usize,
    pub volume: f64,
    pub energies: Vec<f64>,
    pub values: Vec<f64>,
}

impl IdsCurve {
    /// Value at a grid energy.
    pub fn at(&self, energy: f64) -> Result<f64> {
        self.energies
            .iter()
            .position(|&e| e == energy)
            .map(|i| self.values[i])
            .ok_or_else(|| Error::invalid("pairs", format!("energy {energy} is not on the IDS grid")))
    }

    pub fn sup_distance(&self, other: &IdsCurve) -> Result<f64> {
        if self.energies != other.energies {
            return Err(Error::invalid("energies", "curves use different grids"));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |a, (x, y)| a.max((x - y).abs())))
    }
}

/// Settings shared by all volumes of an IDS run. The background is constant.
#[derive(Debug, Clone, PartialEq)]
pub struct IdsConfig {
    pub dimension: usize,
    pub spacing: f64,
    pub single_site: crate::lattice::SingleSitePotential,
    pub background: f64,
    pub disorder: DisorderDistribution,
    pub sides: Vec<usize>,
    pub energies: Vec<f64>,
    pub realizations: usize,
    pub seed: u64,
    pub dense_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdsEstimate {
    pub curves: Vec<IdsCurve>,
    /// Sup-distance between consecutive volumes.
    pub sup_distances: Vec<f64>,
}

pub fn ids_estimate(cfg: &IdsConfig) -> Result<IdsEstimate> {
    if cfg.realizations < 1 {
        return Err(Error::invalid("realizations", "need at least one realization"));
    }
    if cfg.energies.is_empty() {
        return Err(Error::invalid("energies", "must be nonempty"));
    }
    let mut curves = Vec::with_capacity(cfg.sides.len());
    for &side in &cfg.sides {
        let domain = crate::lattice::Domain::boxed(cfg.dimension, side, cfg.spacing)?;
        if domain.len() > cfg.dense_cap {
            return Err(Error::DenseCapExceeded {
                size: domain.len(),
                cap: cfg.dense_cap,
            });
        }
        let n = domain.len();
        let model = AlloyModel::new(
            domain,
            cfg.single_site.clone(),
            vec![cfg.background; n],
            cfg.disorder.clone(),
        )?;
        let per_realization: Vec<Vec<usize>> = (0..cfg.realizations as u64)
            .into_par_iter()
            .map(|m| -> Result<Vec<usize>> {
                let op = model.realization(cfg.seed, m)?;
                let spec = eigenvalues_only(&op.matrix(), cfg.dense_cap)?;
                Ok(cfg.energies.iter().map(|&e| counting_function(&spec, e)).collect())
            })
            .collect::<Result<_>>()?;
        let volume = model.domain.volume();
        let m = cfg.realizations as f64;
        let values = (0..cfg.energies.len())
            .map(|j| {
                per_realization
                    .iter()
                    .map(|c| c[j] as f64)
                    .collect::<CompensatedSum>()
                    .value()
                    / (m * volume)
            })
            .collect();
        curves.push(IdsCurve {
            side,
            volume,
            energies: cfg.energies.clone(),
            values,
        });
    }
    let sup_distances = curves
        .windows(2)
        .map(|w| w[0].sup_distance(&w[1]))
        .collect::<Result<_>>()?;
    Ok(IdsEstimate {
        curves,
        sup_distances,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderRow {
    pub e1: f64,
    pub e2: f64,
    pub delta_n: f64,
    pub modulus: f64,
    /// `|ΔN| / (s(μ,|ΔE|) (log 1/|ΔE|)^d)`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderReport {
    pub rows: Vec<HolderRow>,
    /// Largest ratio, the fitted `C_I`.
    pub c_i: f64,
    /// Largest ratio over the median ratio.
    pub spread: f64,
    /// Slope of `log |ΔN|` against `log |ΔE|`.
    pub exponent: Option<f64>,
}

/// IDS increments against the modulus of continuity of `μ`.
pub fn holder_modulus_check(
    curve: &IdsCurve,
    dist: &DisorderDistribution,
    pairs: &[(f64, f64)],
    dimension: usize,
) -> Result<HolderReport> {
    if pairs.is_empty() {
        return Err(Error::invalid("pairs", "must be nonempty"));
    }
    let mut rows = Vec::with_capacity(pairs.len());
    for &(e1, e2) in pairs {
        let gap = (e2 - e1).abs();
        if !(gap > 0.0 && gap <= 0.5) {
            return Err(Error::invalid(
                "pairs",
                format!("energy spacing must lie in (0, 1/2], got {gap}"),
            ));
        }
        let delta_n = (curve.at(e2)? - curve.at(e1)?).abs();
        let modulus = dist.modulus(gap)?;
        let ratio = delta_n / (modulus * (1.0 / gap).ln().powi(dimension as i32));
        rows.push(HolderRow {
            e1,
            e2,
            delta_n,
            modulus,
            ratio,
        });
    }
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let c_i = ratios.iter().fold(0.0f64, |a, &r| a.max(r));
    let med = crate::numerics::median(&ratios);
    let spread = if med > 0.0 { c_i / med } else { f64::INFINITY };
    let exponent = log_log_fit(rows.iter().map(|r| ((r.e2 - r.e1).abs(), r.delta_n))).map(|f| f.slope);
    Ok(HolderReport {
        rows,
        c_i,
        spread,
        exponent,
    })
}

/// Mean of `ξ(E; H_ω + amplitude·u(· - cell), H_ω)` over realizations on an
/// energy grid. Exploratory output only.
pub fn averaged_ssf(
    model: &AlloyModel,
    cell: crate::lattice::Coord,
    amplitude: f64,
    energies: &[f64],
    realizations: usize,
    seed: u64,
    dense_cap: usize,
) -> Result<Vec<f64>> {
    let bump: Vec<f64> = model
        .single_site
        .placed(&model.domain, cell)
        .into_iter()
        .map(|v| v * amplitude)
        .collect();
    let per: Vec<Vec<i64>> = (0..realizations as u64)
        .into_par_iter()
        .map(|m| -> Result<Vec<i64>> {
            let h1 = model.realization(seed, m)?;
            let v2: Vec<f64> = h1.potential().iter().zip(&bump).map(|(a, b)| a + b).collect();
            let h2 = h1.with_potential(v2)?;
            let s1 = eigenvalues_only(&h1.matrix(), dense_cap)?;
            let s2 = eigenvalues_only(&h2.matrix(), dense_cap)?;
            let curve = crate::ssf::ssf_counting(&s1, &s2)?;
            Ok(energies.iter().map(|&e| curve.eval(e)).collect())
        })
        .collect::<Result<_>>()?;
    let m = realizations.max(1) as f64;
    Ok((0..energies.len())
        .map(|j| per.iter().map(|c| c[j] as f64).sum::<f64>() / m)
        .collect())
}
