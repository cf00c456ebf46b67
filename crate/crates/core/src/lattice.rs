//! Finite lattice domains and discrete magnetic Schrödinger operators.
//!
//! Sites carry integer coordinates; the continuum length of one lattice step is
//! the spacing `h`. The kinetic part is the `(2d+1)`-point stencil scaled by
//! `h^{-2}` with Dirichlet boundary conditions: neighbours outside the domain
//! simply have no row or column. A vector potential enters through unit-modulus
//! Peierls phases on the oriented edges.

use std::collections::{BTreeSet, HashMap};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Complex64, DenseMatrix};

/// Integer lattice coordinate. Axes beyond the domain dimension are zero.
pub type Coord = [i64; 3];

/// Nearest-neighbour edge `from -> to` with `to = from + e_axis`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub axis: usize,
}

/// A finite set of lattice sites with nearest-neighbour adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    dimension: usize,
    spacing: f64,
    sites: Vec<Coord>,
    edges: Vec<Edge>,
    index: HashMap<Coord, usize>,
}

fn check_dimension(d: usize) -> Result<()> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(Error::invalid("dimension", format!("must be 1, 2 or 3, got {d}")))
    }
}

fn check_spacing(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("spacing", format!("must be positive, got {h}")))
    }
}

/// Canonical site order: last axis slowest, first axis fastest.
fn site_order(a: &Coord, b: &Coord) -> std::cmp::Ordering {
    (a[2], a[1], a[0]).cmp(&(b[2], b[1], b[0]))
}

/// Full box `{0, .., side-1}^d` as a coordinate list in canonical order.
pub fn box_coords(d: usize, side: usize) -> Vec<Coord> {
    let s = side as i64;
    let (ny, nz) = match d {
        1 => (1, 1),
        2 => (s, 1),
        _ => (s, s),
    };
    let mut out = Vec::with_capacity(side.pow(d as u32));
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..s {
                out.push([x, y, z]);
            }
        }
    }
    out
}

impl Domain {
    /// Box domain with `side^d` sites.
    pub fn boxed(d: usize, side: usize, h: f64) -> Result<Self> {
        check_dimension(d)?;
        check_spacing(h)?;
        if side < 1 {
            return Err(Error::invalid("side", "must be at least 1"));
        }
        Self::from_sorted_unique(d, h, box_coords(d, side))
    }

    /// Domain restricted to an arbitrary finite mask of coordinates.
    pub fn masked<I: IntoIterator<Item = Coord>>(d: usize, mask: I, h: f64) -> Result<Self> {
        check_dimension(d)?;
        check_spacing(h)?;
        let set: BTreeSet<Coord> = mask.into_iter().collect();
        if set.is_empty() {
            return Err(Error::invalid("mask", "must contain at least one site"));
        }
        if let Some(bad) = set.iter().find(|c| c[d..].iter().any(|&v| v != 0)) {
            return Err(Error::invalid(
                "mask",
                format!("coordinate {bad:?} has nonzero entries beyond dimension {d}"),
            ));
        }
        let mut sites: Vec<Coord> = set.into_iter().collect();
        sites.sort_by(site_order);
        Self::from_sorted_unique(d, h, sites)
    }

    fn from_sorted_unique(d: usize, h: f64, sites: Vec<Coord>) -> Result<Self> {
        let index: HashMap<Coord, usize> = sites.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut edges = Vec::new();
        for (i, c) in sites.iter().enumerate() {
            for axis in 0..d {
                let mut n = *c;
                n[axis] += 1;
                if let Some(&j) = index.get(&n) {
                    edges.push(Edge { from: i, to: j, axis });
                }
            }
        }
        Ok(Self {
            dimension: d,
            spacing: h,
            sites,
            edges,
            index,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn sites(&self) -> &[Coord] {
        &self.sites
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn index_of(&self, c: &Coord) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Continuum volume `N h^d`.
    pub fn volume(&self) -> f64 {
        self.sites.len() as f64 * self.spacing.powi(self.dimension as i32)
    }

    /// Each site split into `2^d` sites at spacing `h/2`, covering the same
    /// continuum region.
    pub fn refined(&self) -> Result<Self> {
        let d = self.dimension;
        let sub = box_coords(d, 2);
        let coords = self.sites.iter().flat_map(|c| {
            sub.iter().map(move |o| {
                let mut r = [0i64; 3];
                for a in 0..d {
                    r[a] = 2 * c[a] + o[a];
                }
                r
            })
        });
        Domain::masked(d, coords, self.spacing / 2.0)
    }

    /// The domain with the given sites removed, together with the indices the
    /// surviving sites had in `self`.
    pub fn without(&self, removed: &[Coord]) -> Result<(Domain, Vec<usize>)> {
        let drop: BTreeSet<Coord> = removed.iter().copied().collect();
        let kept: Vec<usize> = (0..self.len()).filter(|&i| !drop.contains(&self.sites[i])).collect();
        let sub = Domain::masked(self.dimension, kept.iter().map(|&i| self.sites[i]), self.spacing)?;
        Ok((sub, kept))
    }

    /// Centre cell of the bounding box (integer division per axis).
    pub fn center(&self) -> Coord {
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        for c in &self.sites {
            for a in 0..3 {
                lo[a] = lo[a].min(c[a]);
                hi[a] = hi[a].max(c[a]);
            }
        }
        let mut out = [0; 3];
        for a in 0..self.dimension {
            out[a] = lo[a] + (hi[a] - lo[a] + 1) / 2;
        }
        out
    }
}

/// Choice of vector potential for a constant field normal to the xy-plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    /// `A = (-B y, 0, 0)`.
    Landau,
    /// `A = (-B y / 2, B x / 2, 0)`.
    Symmetric,
}

/// Peierls phases for a constant field of strength `b`: every xy-plaquette
/// carries flux `b h^2`.
pub fn constant_field_phases(domain: &Domain, b: f64, gauge: Gauge) -> Result<Vec<Complex64>> {
    if domain.dimension() < 2 {
        return Err(Error::invalid(
            "magnetic_field",
            "a constant field needs at least two dimensions",
        ));
    }
    let flux = b * domain.spacing() * domain.spacing();
    Ok(domain
        .edges()
        .iter()
        .map(|e| {
            let c = domain.sites()[e.from];
            let (x, y) = (c[0] as f64, c[1] as f64);
            let angle = match (gauge, e.axis) {
                (Gauge::Landau, 0) => -flux * y,
                (Gauge::Landau, _) => 0.0,
                (Gauge::Symmetric, 0) => -0.5 * flux * y,
                (Gauge::Symmetric, 1) => 0.5 * flux * x,
                (Gauge::Symmetric, _) => 0.0,
            };
            Complex64::from_polar(1.0, angle)
        })
        .collect())
}

/// Apply the gauge transformation `psi(x) -> e^{i theta(x)} psi(x)` to edge phases.
pub fn gauge_transform(domain: &Domain, phases: &[Complex64], theta: &[f64]) -> Vec<Complex64> {
    domain
        .edges()
        .iter()
        .zip(phases)
        .map(|(e, p)| p * Complex64::from_polar(1.0, theta[e.from] - theta[e.to]))
        .collect()
}

/// `H = h^{-2} (-Δ_A) + V` on a finite domain with Dirichlet boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeOperator {
    domain: Domain,
    phases: Option<Vec<Complex64>>,
    potential: Vec<f64>,
}

const PHASE_TOLERANCE: f64 = 1e-12;

impl LatticeOperator {
    pub fn new(domain: Domain, potential: Vec<f64>, phases: Option<Vec<Complex64>>) -> Result<Self> {
        if potential.len() != domain.len() {
            return Err(Error::DimensionMismatch {
                expected: domain.len(),
                actual: potential.len(),
            });
        }
        if let Some(&bad) = potential.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("potential", format!("non-finite entry {bad}")));
        }
        if let Some(p) = &phases {
            if p.len() != domain.edges().len() {
                return Err(Error::DimensionMismatch {
                    expected: domain.edges().len(),
                    actual: p.len(),
                });
            }
            if let Some(bad) = p.iter().find(|z| (z.norm() - 1.0).abs() > PHASE_TOLERANCE) {
                return Err(Error::invalid(
                    "phases",
                    format!("phase {bad} is not unimodular"),
                ));
            }
        }
        Ok(Self {
            domain,
            phases,
            potential,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn phases(&self) -> Option<&[Complex64]> {
        self.phases.as_deref()
    }

    /// `h^{-2}`.
    pub fn kinetic_scale(&self) -> f64 {
        self.domain.spacing().powi(-2)
    }

    /// Same kinetic part with a different potential.
    pub fn with_potential(&self, potential: Vec<f64>) -> Result<Self> {
        Self::new(self.domain.clone(), potential, self.phases.clone())
    }

    /// Assemble the dense matrix; real storage when there are no phases.
    pub fn matrix(&self) -> DenseMatrix {
        let n = self.domain.len();
        let d = self.domain.dimension() as f64;
        let k = self.kinetic_scale();
        match &self.phases {
            None => {
                let mut m = DMatrix::zeros(n, n);
                for (i, v) in self.potential.iter().enumerate() {
                    m[(i, i)] = 2.0 * d * k + v;
                }
                for e in self.domain.edges() {
                    m[(e.from, e.to)] = -k;
                    m[(e.to, e.from)] = -k;
                }
                DenseMatrix::Real(m)
            }
            Some(phases) => {
                let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
                for (i, v) in self.potential.iter().enumerate() {
                    m[(i, i)] = Complex64::new(2.0 * d * k + v, 0.0);
                }
                for (e, p) in self.domain.edges().iter().zip(phases) {
                    m[(e.from, e.to)] = -k * p;
                    m[(e.to, e.from)] = -k * p.conj();
                }
                DenseMatrix::Complex(m)
            }
        }
    }
}

/// Compactly supported single-site bump: `profile[i]` at integer offset
/// `offsets[i]` from the cell it is attached to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleSitePotential {
    pub offsets: Vec<Coord>,
    pub profile: Vec<f64>,
}

impl SingleSitePotential {
    pub fn new(offsets: Vec<Coord>, profile: Vec<f64>) -> Result<Self> {
        if offsets.len() != profile.len() {
            return Err(Error::DimensionMismatch {
                expected: offsets.len(),
                actual: profile.len(),
            });
        }
        if offsets.is_empty() {
            return Err(Error::invalid("single_site", "support must be nonempty"));
        }
        if let Some(bad) = profile.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid("single_site", format!("non-finite profile value {bad}")));
        }
        Ok(Self { offsets, profile })
    }

    /// `amplitude` times the indicator of the cell itself.
    pub fn cell_indicator(amplitude: f64) -> Self {
        Self {
            offsets: vec![[0, 0, 0]],
            profile: vec![amplitude],
        }
    }

    /// Largest `κ` with `u ≥ κ χ_cell` and `u ≥ 0`, if positive.
    pub fn kappa(&self) -> Option<f64> {
        if self.profile.iter().any(|&v| v < 0.0) {
            return None;
        }
        let k: f64 = self
            .offsets
            .iter()
            .zip(&self.profile)
            .filter(|(o, _)| **o == [0, 0, 0])
            .map(|(_, v)| *v)
            .sum();
        (k > 0.0).then_some(k)
    }

    /// Scaled copy.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            offsets: self.offsets.clone(),
            profile: self.profile.iter().map(|v| v * factor).collect(),
        }
    }

    /// `u(. - cell)` as a vector over the domain sites, truncated to the domain.
    pub fn placed(&self, domain: &Domain, cell: Coord) -> Vec<f64> {
        let mut out = vec![0.0; domain.len()];
        for (o, v) in self.offsets.iter().zip(&self.profile) {
            let x = [cell[0] + o[0], cell[1] + o[1], cell[2] + o[2]];
            if let Some(i) = domain.index_of(&x) {
                out[i] += v;
            }
        }
        out
    }

    /// Sites of the domain touched by `u(. - cell)`.
    pub fn support_in(&self, domain: &Domain, cell: Coord) -> Vec<Coord> {
        self.offsets
            .iter()
            .zip(&self.profile)
            .filter(|(_, v)| **v != 0.0)
            .map(|(o, _)| [cell[0] + o[0], cell[1] + o[1], cell[2] + o[2]])
            .filter(|x| domain.index_of(x).is_some())
            .collect()
    }
}

/// `V(x) = V_per(x) + Σ_k ω_k u(x - k)` with one coupling per domain cell.
///
/// Cell `k` is the unit cell `[k, k+1)^d`, which contains exactly the site with
/// coordinate `k`, so couplings are indexed like the domain sites.
/// Contributions landing outside the domain are dropped.
pub fn alloy_potential(
    domain: &Domain,
    u: &SingleSitePotential,
    couplings: &[f64],
    background: &[f64],
) -> Result<Vec<f64>> {
    if couplings.len() != domain.len() {
        return Err(Error::DimensionMismatch {
            expected: domain.len(),
            actual: couplings.len(),
        });
    }
    if background.len() != domain.len() {
        return Err(Error::DimensionMismatch {
            expected: domain.len(),
            actual: background.len(),
        });
    }
    let mut v = background.to_vec();
    for (cell, w) in domain.sites().iter().zip(couplings) {
        if *w == 0.0 {
            continue;
        }
        for (o, p) in u.offsets.iter().zip(&u.profile) {
            let x = [cell[0] + o[0], cell[1] + o[1], cell[2] + o[2]];
            if let Some(i) = domain.index_of(&x) {
                v[i] += w * p;
            }
        }
    }
    Ok(v)
}
