use serde::{Deserialize, Serialize};

use crate::disorder::DisorderDistribution;
use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, CompensatedSum, QuadratureTolerance};
use crate::ssf::smoothstep;

/// Sample count for the monotonicity scan.
const MONOTONE_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Check {
    pub epsilon: f64,
    /// `∫ [φ(λ+ε) - φ(λ)] dμ(λ)`.
    pub lhs: f64,
    /// `s(μ, ε) [φ(b+ε) - φ(a)]`.
    pub rhs: f64,
}

impl Lemma3Check {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs <= self.rhs + tol
    }
}

/// Check `∫ [φ(λ+ε) - φ(λ)] dμ(λ) ≤ s(μ,ε) [φ(b+ε) - φ(a)]` for a
/// nondecreasing `φ`. Atoms are summed exactly, densities by quadrature.
pub fn lemma3_verify<F: Fn(f64) -> f64>(
    dist: &DisorderDistribution,
    phi: F,
    eps: f64,
) -> Result<Lemma3Check> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::invalid("epsilon", format!("must lie in (0, 1/2], got {eps}")));
    }
    let (a, b) = dist.support();
    check_monotone(&phi, a, b + eps)?;
    let increment = |x: f64| phi(x + eps) - phi(x);
    let mut lhs = CompensatedSum::new();
    for atom in dist.atoms() {
        lhs.add(atom.mass * increment(atom.position));
    }
    let tol = QuadratureTolerance {
        relative: 1e-12,
        absolute: 1e-15,
        ..QuadratureTolerance::default()
    };
    for (lo, hi, density) in dist.density_segments() {
        lhs.add(density * adaptive_simpson(increment, lo, hi, tol));
    }
    Ok(Lemma3Check {
        epsilon: eps,
        lhs: lhs.value(),
        rhs: dist.modulus(eps)? * (phi(b + eps) - phi(a)),
    })
}

fn check_monotone<F: Fn(f64) -> f64>(phi: &F, lo: f64, hi: f64) -> Result<()> {
    let dx = (hi - lo) / MONOTONE_SAMPLES as f64;
    let mut prev = phi(lo);
    for i in 1..=MONOTONE_SAMPLES {
        let x = if i == MONOTONE_SAMPLES { hi } else { lo + i as f64 * dx };
        let cur = phi(x);
        if !cur.is_finite() {
            return Err(Error::NonFinite { at: x });
        }
        if cur - prev < -1e-12 {
            return Err(Error::NotMonotone { at: x });
        }
        prev = cur;
    }
    Ok(())
}

/// `φ(x) = Σ w_i S((x - c_i) / h_i)` with nonnegative weights; nondecreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothstepSum {
    pub terms: Vec<SmoothstepTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothstepTerm {
    pub weight: f64,
    pub start: f64,
    pub width: f64,
}

impl SmoothstepSum {
    pub fn new(terms: Vec<SmoothstepTerm>) -> Result<Self> {
        for t in &terms {
            if !(t.weight >= 0.0 && t.width > 0.0 && t.start.is_finite()) {
                return Err(Error::invalid("terms", "need weight >= 0 and width > 0"));
            }
        }
        Ok(Self { terms })
    }

    /// `count` random terms with starts in `[lo, hi]`.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, count: usize, lo: f64, hi: f64) -> Self {
        let terms = (0..count)
            .map(|_| SmoothstepTerm {
                weight: rng.random::<f64>(),
                start: lo + (hi - lo) * rng.random::<f64>(),
                width: 0.01 + 0.5 * rng.random::<f64>(),
            })
            .collect();
        Self { terms }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.weight * smoothstep((x - t.start) / t.width))
            .sum()
    }
}
