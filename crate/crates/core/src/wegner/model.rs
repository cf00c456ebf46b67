use serde::{Deserialize, Serialize};

use crate::disorder::{sample_couplings, DisorderDistribution};
use crate::error::{Error, Result};
use crate::lattice::{alloy_potential, Domain, LatticeOperator, SingleSitePotential};
use crate::matrix::Complex64;
use crate::spectral::{eigenvalues_only, DEFAULT_DENSE_CAP};

/// Alloy-type random operator `H_ω = H₀ + Σ_k ω_k u(· - k)` on a fixed domain.
#[derive(Debug, Clone, PartialEq)]
pub struct AlloyModel {
    pub domain: Domain,
    pub single_site: SingleSitePotential,
    /// Periodic background `V_per` over the domain sites.
    pub background: Vec<f64>,
    pub disorder: DisorderDistribution,
    pub phases: Option<Vec<Complex64>>,
}

impl AlloyModel {
    pub fn new(
        domain: Domain,
        single_site: SingleSitePotential,
        background: Vec<f64>,
        disorder: DisorderDistribution,
    ) -> Result<Self> {
        if background.len() != domain.len() {
            return Err(Error::DimensionMismatch {
                expected: domain.len(),
                actual: background.len(),
            });
        }
        Ok(Self {
            domain,
            single_site,
            background,
            disorder,
            phases: None,
        })
    }

    pub fn with_phases(mut self, phases: Vec<Complex64>) -> Self {
        self.phases = Some(phases);
        self
    }

    /// Operator for an explicit coupling vector.
    pub fn operator(&self, couplings: &[f64]) -> Result<LatticeOperator> {
        let v = alloy_potential(&self.domain, &self.single_site, couplings, &self.background)?;
        LatticeOperator::new(self.domain.clone(), v, self.phases.clone())
    }

    /// Couplings of realization `index`.
    pub fn couplings(&self, seed: u64, index: u64) -> Vec<f64> {
        sample_couplings(&self.disorder, self.domain.len(), seed, index)
    }

    pub fn realization(&self, seed: u64, index: u64) -> Result<LatticeOperator> {
        self.operator(&self.couplings(seed, index))
    }

    /// Midpoint of the spectrum of the `ω ≡ 0` operator.
    pub fn mid_spectrum_energy(&self) -> Result<f64> {
        let op = self.operator(&vec![0.0; self.domain.len()])?;
        let spec = eigenvalues_only(&op.matrix(), DEFAULT_DENSE_CAP)?;
        let ev = spec.eigenvalues();
        Ok(0.5 * (ev[0] + ev[ev.len() - 1]))
    }
}

/// Potential amplitude of a coupling; `Infinite` deletes the support sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Amplitude {
    Finite(f64),
    Infinite,
}

impl Serialize for Amplitude {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Amplitude::Finite(v) => s.serialize_f64(*v),
            Amplitude::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Amplitude {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(Amplitude::Finite(v)),
            Raw::Text(s) if s == "inf" || s == "infinity" => Ok(Amplitude::Infinite),
            Raw::Text(s) => Err(serde::de::Error::custom(format!(
                "amplitude must be a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

impl std::fmt::Display for Amplitude {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Amplitude::Finite(v) => write!(f, "{v}"),
            Amplitude::Infinite => write!(f, "inf"),
        }
    }
}
