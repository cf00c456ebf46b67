use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Coord, LatticeOperator, SingleSitePotential};
use crate::matrix::DenseMatrix;
use crate::spectral::{
    eigen_decompose_matrix, fit_decay_with, semigroup, singular_values, DecayFit, SingularValueList,
};

use super::model::Amplitude;

/// `V_eff = e^{-tH₁} - e^{-tH₂}` for a bump `amplitude·u(· - cell)` added to `H₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayExperimentConfig {
    pub base: LatticeOperator,
    pub single_site: SingleSitePotential,
    pub cell: Coord,
    pub amplitudes: Vec<Amplitude>,
    pub t: f64,
    pub floor: f64,
    pub skip_leading: usize,
    pub dense_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub amplitude: Amplitude,
    pub singular_values: SingularValueList,
    /// Fit against `n^{1/d}`.
    pub fit: Option<DecayFit>,
    /// Fit against `n^{2/d}`; reported only.
    pub fit_conjecture: Option<DecayFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayExperiment {
    pub dimension: usize,
    pub rows: Vec<DecayRow>,
}

impl DecayExperiment {
    /// Fitted rates `c` of the `n^{1/d}` fits, `None` if any fit failed.
    pub fn rates(&self) -> Option<Vec<f64>> {
        self.rows.iter().map(|r| r.fit.map(|f| f.rate)).collect()
    }

    /// `(max c - min c) / min c` across amplitudes.
    pub fn rate_variation(&self) -> Option<f64> {
        let rates = self.rates()?;
        let lo = rates.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo > 0.0).then(|| (hi - lo) / lo)
    }

    /// Largest `|c / mean c - 1|` across amplitudes.
    pub fn rate_deviation(&self) -> Option<f64> {
        let rates = self.rates()?;
        let mean = rates.iter().sum::<f64>() / rates.len() as f64;
        Some(rates.iter().fold(0.0f64, |a, c| a.max((c / mean - 1.0).abs())))
    }
}

/// Singular values of `e^{-tH₁} - e^{-tH₂}` for one amplitude.
pub fn perturbation_singular_values(
    base: &LatticeOperator,
    base_semigroup: &DenseMatrix,
    single_site: &SingleSitePotential,
    cell: Coord,
    amplitude: Amplitude,
    t: f64,
    dense_cap: usize,
) -> Result<SingularValueList> {
    let domain = base.domain();
    let second = match amplitude {
        Amplitude::Finite(a) => {
            let bump = single_site.placed(domain, cell);
            let v: Vec<f64> = base.potential().iter().zip(&bump).map(|(p, b)| p + a * b).collect();
            let h2 = base.with_potential(v)?;
            semigroup(&eigen_decompose_matrix(&h2.matrix(), dense_cap)?, t)?
        }
        Amplitude::Infinite => {
            let removed = single_site.support_in(domain, cell);
            let (sub, kept) = domain.without(&removed)?;
            if sub.is_empty() {
                DenseMatrix::zeros(domain.len())
            } else {
                let v: Vec<f64> = kept.iter().map(|&i| base.potential()[i]).collect();
                let phases = base.phases().map(|p| restrict_phases(base, &sub, p));
                let h2 = LatticeOperator::new(sub, v, phases)?;
                let g = semigroup(&eigen_decompose_matrix(&h2.matrix(), dense_cap)?, t)?;
                g.embed(&kept, domain.len())?
            }
        }
    };
    Ok(singular_values(&base_semigroup.sub(&second)?))
}

/// Phases of the edges that survive in `sub`.
fn restrict_phases(base: &LatticeOperator, sub: &crate::lattice::Domain, phases: &[crate::matrix::Complex64]) -> Vec<crate::matrix::Complex64> {
    let full = base.domain();
    let lookup: std::collections::HashMap<(Coord, Coord), usize> = full
        .edges()
        .iter()
        .enumerate()
        .map(|(k, e)| ((full.sites()[e.from], full.sites()[e.to]), k))
        .collect();
    sub.edges()
        .iter()
        .map(|e| phases[lookup[&(sub.sites()[e.from], sub.sites()[e.to])]])
        .collect()
}

pub fn singular_value_experiment(cfg: &DecayExperimentConfig) -> Result<DecayExperiment> {
    if cfg.amplitudes.is_empty() {
        return Err(Error::invalid("amplitudes", "must be nonempty"));
    }
    let base = &cfg.base;
    let d = base.domain().dimension();
    let g1 = semigroup(&eigen_decompose_matrix(&base.matrix(), cfg.dense_cap)?, cfg.t)?;
    let mut rows = Vec::with_capacity(cfg.amplitudes.len());
    for &amplitude in &cfg.amplitudes {
        let sv = perturbation_singular_values(
            base,
            &g1,
            &cfg.single_site,
            cfg.cell,
            amplitude,
            cfg.t,
            cfg.dense_cap,
        )?;
        let fit = fit_decay_with(&sv, 1.0 / d as f64, cfg.floor, cfg.skip_leading).ok();
        let fit_conjecture = fit_decay_with(&sv, 2.0 / d as f64, cfg.floor, cfg.skip_leading).ok();
        rows.push(DecayRow {
            amplitude,
            singular_values: sv,
            fit,
            fit_conjecture,
        });
    }
    Ok(DecayExperiment { dimension: d, rows })
}
