//! Coupling-constant distributions on a compact interval `[a, b]`.
//!
//! Every kind exposes a sampler, its CDF and the exact modulus of continuity
//! `s(μ, ε) = sup_E μ([E - ε, E + ε])`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{stream, StreamComponent};

/// Largest Cantor depth accepted; the modulus enumerates all `2^depth` atoms.
pub const MAX_CANTOR_DEPTH: u32 = 20;

/// Default depth of the Cantor sampler.
pub const DEFAULT_CANTOR_DEPTH: u32 = 16;

/// Tolerance on total probability mass.
const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DisorderKind {
    Uniform,
    /// Atoms at `a` (mass `1 - p`) and `b` (mass `p`).
    Bernoulli { p: f64 },
    /// Point masses plus `continuous_weight` spread uniformly over `[a, b]`.
    AtomicMixture {
        atoms: Vec<Atom>,
        #[serde(default)]
        continuous_weight: f64,
    },
    /// Depth-limited self-similar Cantor measure with Hölder exponent
    /// `holder` (`ln 2 / ln 3` for the middle-thirds set). Each of the
    /// `2^depth` level-`depth` left endpoints carries mass `2^-depth`.
    Cantor {
        depth: u32,
        #[serde(default = "middle_thirds_exponent")]
        holder: f64,
    },
    /// Piecewise-linear CDF through `(x, F)` knots; `a`, `b` are the first and
    /// last knot.
    CdfTable { knots: Vec<(f64, f64)> },
}

fn middle_thirds_exponent() -> f64 {
    2f64.ln() / 3f64.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub position: f64,
    pub mass: f64,
}

/// A probability measure on `[a, b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderDistribution {
    #[serde(flatten)]
    kind: DisorderKind,
    a: f64,
    b: f64,
}

impl DisorderDistribution {
    pub fn new(kind: DisorderKind, a: f64, b: f64) -> Result<Self> {
        let dist = Self { kind, a, b };
        dist.validate()?;
        Ok(dist)
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        Self::new(DisorderKind::Uniform, a, b)
    }

    /// Bernoulli on `{0, 1}`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::new(DisorderKind::Bernoulli { p }, 0.0, 1.0)
    }

    /// Middle-thirds Cantor measure on `[a, b]`.
    pub fn cantor(depth: u32, a: f64, b: f64) -> Result<Self> {
        Self::new(
            DisorderKind::Cantor {
                depth,
                holder: middle_thirds_exponent(),
            },
            a,
            b,
        )
    }

    pub fn point_mass(at: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(
            DisorderKind::AtomicMixture {
                atoms: vec![Atom { position: at, mass: 1.0 }],
                continuous_weight: 0.0,
            },
            a,
            b,
        )
    }

    pub fn kind(&self) -> &DisorderKind {
        &self.kind
    }

    pub fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Re-check the invariants; used after deserialisation.
    pub fn validate(&self) -> Result<()> {
        let (a, b) = (self.a, self.b);
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid("disorder", format!("need a < b, got [{a}, {b}]")));
        }
        match &self.kind {
            DisorderKind::Uniform => Ok(()),
            DisorderKind::Bernoulli { p } => {
                if (0.0..=1.0).contains(p) {
                    Ok(())
                } else {
                    Err(Error::invalid("disorder", format!("bernoulli p={p} outside [0, 1]")))
                }
            }
            DisorderKind::AtomicMixture {
                atoms,
                continuous_weight,
            } => {
                if !(0.0..=1.0).contains(continuous_weight) {
                    return Err(Error::invalid("disorder", "continuous_weight outside [0, 1]"));
                }
                if atoms.iter().any(|at| at.mass < 0.0 || !(a..=b).contains(&at.position)) {
                    return Err(Error::invalid(
                        "disorder",
                        "atoms need nonnegative mass and a position inside [a, b]",
                    ));
                }
                let total: f64 = continuous_weight + atoms.iter().map(|at| at.mass).sum::<f64>();
                if (total - 1.0).abs() > MASS_TOLERANCE {
                    return Err(Error::invalid("disorder", format!("total mass {total} != 1")));
                }
                Ok(())
            }
            DisorderKind::Cantor { depth, holder } => {
                if !(1..=MAX_CANTOR_DEPTH).contains(depth) {
                    return Err(Error::invalid(
                        "disorder",
                        format!("cantor depth must be in 1..={MAX_CANTOR_DEPTH}"),
                    ));
                }
                if !(*holder > 0.0 && *holder <= 1.0) {
                    return Err(Error::invalid("disorder", "cantor exponent must be in (0, 1]"));
                }
                Ok(())
            }
            DisorderKind::CdfTable { knots } => {
                if knots.len() < 2 {
                    return Err(Error::invalid("disorder", "cdf table needs at least two knots"));
                }
                let first = knots[0];
                let last = knots[knots.len() - 1];
                if first != (a, 0.0) || last.0 != b || (last.1 - 1.0).abs() > MASS_TOLERANCE {
                    return Err(Error::invalid(
                        "disorder",
                        "cdf table must run from (a, 0) to (b, 1)",
                    ));
                }
                if knots.windows(2).any(|w| w[1].0 <= w[0].0 || w[1].1 < w[0].1) {
                    return Err(Error::invalid(
                        "disorder",
                        "cdf knots must have increasing x and nondecreasing F",
                    ));
                }
                Ok(())
            }
        }
    }

    /// Contraction ratio of the Cantor construction, `2^{-1/α}`.
    fn cantor_ratio(holder: f64) -> f64 {
        2f64.powf(-1.0 / holder)
    }

    /// Atom positions (sorted) with masses, for the purely atomic kinds.
    /// Cantor atoms are generated on demand.
    pub fn atoms(&self) -> Vec<Atom> {
        match &self.kind {
            DisorderKind::Uniform | DisorderKind::CdfTable { .. } => Vec::new(),
            DisorderKind::Bernoulli { p } => vec![
                Atom { position: self.a, mass: 1.0 - p },
                Atom { position: self.b, mass: *p },
            ],
            DisorderKind::AtomicMixture { atoms, .. } => {
                let mut v = atoms.clone();
                v.sort_by(|x, y| x.position.total_cmp(&y.position));
                v
            }
            DisorderKind::Cantor { depth, holder } => {
                let mass = 0.5f64.powi(*depth as i32);
                (0..1u64 << depth)
                    .map(|m| Atom {
                        position: self.cantor_point(m, *depth, *holder),
                        mass,
                    })
                    .collect()
            }
        }
    }

    /// Cantor atom whose ternary-like digits are the bits of `m`, MSB first.
    fn cantor_point(&self, m: u64, depth: u32, holder: f64) -> f64 {
        let r = Self::cantor_ratio(holder);
        let mut x = 0.0;
        let mut scale = 1.0 - r;
        for j in (0..depth).rev() {
            if (m >> j) & 1 == 1 {
                x += scale;
            }
            scale *= r;
        }
        self.a + (self.b - self.a) * x
    }

    /// Absolutely continuous part as `(lo, hi, density)` pieces.
    pub fn density_segments(&self) -> Vec<(f64, f64, f64)> {
        match &self.kind {
            DisorderKind::CdfTable { knots } => knots
                .windows(2)
                .filter(|w| w[1].0 > w[0].0 && w[1].1 > w[0].1)
                .map(|w| (w[0].0, w[1].0, (w[1].1 - w[0].1) / (w[1].0 - w[0].0)))
                .collect(),
            _ => {
                let w = self.continuous_weight();
                if w > 0.0 {
                    vec![(self.a, self.b, w / (self.b - self.a))]
                } else {
                    Vec::new()
                }
            }
        }
    }

    /// Mass of the absolutely continuous part spread uniformly over `[a, b]`.
    fn continuous_weight(&self) -> f64 {
        match &self.kind {
            DisorderKind::Uniform => 1.0,
            DisorderKind::AtomicMixture {
                continuous_weight, ..
            } => *continuous_weight,
            _ => 0.0,
        }
    }

    /// Draw one sample from `rng`. Always lands in `[a, b]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (a, b) = (self.a, self.b);
        let uniform = |rng: &mut R| (a + (b - a) * rng.random::<f64>()).min(b);
        match &self.kind {
            DisorderKind::Uniform => uniform(rng),
            DisorderKind::Bernoulli { p } => {
                if rng.random::<f64>() < *p {
                    b
                } else {
                    a
                }
            }
            DisorderKind::AtomicMixture {
                atoms,
                continuous_weight,
            } => {
                let x = rng.random::<f64>();
                if x < *continuous_weight {
                    return uniform(rng);
                }
                let mut acc = *continuous_weight;
                for at in atoms {
                    acc += at.mass;
                    if x < acc {
                        return at.position;
                    }
                }
                atoms.last().map(|at| at.position).unwrap_or(a)
            }
            DisorderKind::Cantor { depth, holder } => {
                let bits = rng.random::<u64>() >> (64 - depth);
                self.cantor_point(bits, *depth, *holder)
            }
            DisorderKind::CdfTable { knots } => {
                let x = rng.random::<f64>();
                for w in knots.windows(2) {
                    let ((x0, f0), (x1, f1)) = (w[0], w[1]);
                    if x < f1 && f1 > f0 {
                        return (x0 + (x - f0) / (f1 - f0) * (x1 - x0)).clamp(a, b);
                    }
                }
                b
            }
        }
    }

    /// Right-continuous distribution function `μ((-∞, x])`.
    pub fn cdf(&self, x: f64) -> f64 {
        let (a, b) = (self.a, self.b);
        if x < a {
            return 0.0;
        }
        if x >= b {
            return 1.0;
        }
        let continuous = self.continuous_weight() * (x - a) / (b - a);
        match &self.kind {
            DisorderKind::Uniform => continuous,
            DisorderKind::Bernoulli { p } => 1.0 - p,
            DisorderKind::AtomicMixture { atoms, .. } => {
                continuous
                    + atoms
                        .iter()
                        .filter(|at| at.position <= x)
                        .map(|at| at.mass)
                        .sum::<f64>()
            }
            DisorderKind::Cantor { depth, holder } => {
                let r = Self::cantor_ratio(*holder);
                let mut y = (x - a) / (b - a);
                let mut count: u64 = 0;
                for level in 0..*depth {
                    if y >= 1.0 - r {
                        count += 1u64 << (depth - level - 1);
                        y = (y - (1.0 - r)) / r;
                    } else {
                        y /= r;
                    }
                }
                // y >= 0 always holds here: the last atom of the branch is included.
                (count + 1) as f64 * 0.5f64.powi(*depth as i32)
            }
            DisorderKind::CdfTable { knots } => {
                for w in knots.windows(2) {
                    let ((x0, f0), (x1, f1)) = (w[0], w[1]);
                    if x < x1 {
                        return f0 + (x - x0) / (x1 - x0) * (f1 - f0);
                    }
                }
                1.0
            }
        }
    }

    /// `μ([lo, hi])` for a closed interval.
    pub fn closed_mass(&self, lo: f64, hi: f64) -> f64 {
        if hi < lo {
            return 0.0;
        }
        match &self.kind {
            DisorderKind::Uniform | DisorderKind::CdfTable { .. } => self.cdf(hi) - self.cdf(lo),
            _ => {
                let (a, b) = (self.a, self.b);
                let cont = self.continuous_weight() * (hi.min(b) - lo.max(a)).max(0.0) / (b - a);
                cont + self
                    .atoms()
                    .iter()
                    .filter(|at| at.position >= lo && at.position <= hi)
                    .map(|at| at.mass)
                    .sum::<f64>()
            }
        }
    }

    /// Modulus of continuity `s(μ, ε) = sup_E μ([E - ε, E + ε])`.
    pub fn modulus(&self, eps: f64) -> Result<f64> {
        if !(eps > 0.0) {
            return Err(Error::invalid("epsilon", format!("must be positive, got {eps}")));
        }
        let (a, b) = (self.a, self.b);
        let width = 2.0 * eps;
        let s = match &self.kind {
            DisorderKind::Uniform => (width / (b - a)).min(1.0),
            DisorderKind::CdfTable { knots } => {
                // F(E + ε) - F(E - ε) is piecewise linear in E with kinks where
                // either end meets a knot, so the sup sits at one of those.
                let mut best = 0.0f64;
                for &(x, _) in knots {
                    for lo in [x, x - width] {
                        best = best.max(self.cdf(lo + width) - self.cdf(lo));
                    }
                }
                best
            }
            DisorderKind::Cantor { .. } => {
                let atoms = self.atoms();
                sliding_window_mass(&atoms, width)
            }
            DisorderKind::Bernoulli { .. } | DisorderKind::AtomicMixture { .. } => {
                let atoms = self.atoms();
                let cw = self.continuous_weight();
                if cw == 0.0 {
                    sliding_window_mass(&atoms, width)
                } else {
                    let mut best = 0.0f64;
                    let mut candidates: Vec<f64> = vec![a, b - width];
                    for at in &atoms {
                        candidates.push(at.position);
                        candidates.push(at.position - width);
                    }
                    for lo in candidates {
                        best = best.max(self.closed_mass(lo, lo + width));
                    }
                    best
                }
            }
        };
        Ok(s.min(1.0))
    }
}

/// Largest total mass of sorted atoms inside any closed window of `width`.
fn sliding_window_mass(atoms: &[Atom], width: f64) -> f64 {
    let mut best = 0.0f64;
    let mut hi = 0;
    let mut mass = 0.0;
    for lo in 0..atoms.len() {
        if hi < lo {
            hi = lo;
            mass = 0.0;
        }
        while hi < atoms.len() && atoms[hi].position - atoms[lo].position <= width {
            mass += atoms[hi].mass;
            hi += 1;
        }
        best = best.max(mass);
        mass -= atoms[lo].mass;
    }
    best
}

/// `count` i.i.d. couplings for one realization. Deterministic in
/// `(master_seed, realization)`.
pub fn sample_couplings(
    dist: &DisorderDistribution,
    count: usize,
    master_seed: u64,
    realization: u64,
) -> Vec<f64> {
    let mut rng = stream(master_seed, realization, StreamComponent::Couplings);
    (0..count).map(|_| dist.sample(&mut rng)).collect()
}
