mod common;

use common::rng;
use rand::Rng;
use ssflab_core::disorder::{Atom, DisorderDistribution, DisorderKind};
use ssflab_core::lattice::{Domain, LatticeOperator, SingleSitePotential};
use ssflab_core::spectral::{eigenvalues_only, trace_function, DEFAULT_DENSE_CAP};
use ssflab_core::ssf::make_switch;
use ssflab_core::wegner::*;

fn model(d: usize, side: usize, h: f64, dist: DisorderDistribution) -> AlloyModel {
    let dom = Domain::boxed(d, side, h).unwrap();
    let n = dom.len();
    AlloyModel::new(dom, SingleSitePotential::cell_indicator(1.0), vec![0.0; n], dist).unwrap()
}

fn config(model: AlloyModel, realizations: usize) -> WegnerConfig {
    WegnerConfig {
        model,
        energy: None,
        eps_grid: vec![0.5, 0.25, 0.125, 0.0625],
        realizations,
        seed: 42,
        dense_cap: DEFAULT_DENSE_CAP,
    }
}

fn trace_rho(op: &LatticeOperator, e: f64, eps: f64) -> f64 {
    let rho = make_switch(e, eps).unwrap();
    let spec = eigenvalues_only(&op.matrix(), DEFAULT_DENSE_CAP).unwrap();
    trace_function(&spec, |x| rho.eval(x)).unwrap()
}

#[test]
fn telescoping_map_is_nondecreasing() {
    let m = model(2, 5, 1.0, DisorderDistribution::uniform(0.0, 1.0).unwrap());
    let mut r = rng(1);
    for trial in 0..20u64 {
        let mut w = m.couplings(3, trial);
        let k0 = r.random_range(0..w.len());
        let e = r.random_range(0.5..8.0);
        let mut prev = f64::NEG_INFINITY;
        for step in 0..=10 {
            w[k0] = step as f64 / 10.0;
            let tr = trace_rho(&m.operator(&w).unwrap(), e, 0.25);
            assert!(tr >= prev - 1e-12, "trial {trial} step {step}");
            prev = tr;
        }
    }
}

#[test]
fn covering_condition_shift_is_dominated() {
    let m = model(1, 12, 1.0, DisorderDistribution::uniform(0.0, 1.0).unwrap());
    let w = m.couplings(5, 0);
    let h = m.operator(&w).unwrap();
    for eps in [0.5, 0.1, 0.01] {
        let cover: Vec<f64> = h.potential().iter().map(|v| v + eps).collect();
        let constant = h.with_potential(cover.clone()).unwrap();
        let wide: Vec<f64> = w.iter().map(|x| x + eps).collect();
        let through_u = m.operator(&wide).unwrap();
        for (a, b) in constant.potential().iter().zip(through_u.potential()) {
            assert!(a <= &(b + 1e-15));
        }
        let e = 1.7;
        assert!(trace_rho(&constant, e, 0.2) <= trace_rho(&through_u, e, 0.2) + 1e-12);
    }
}

#[test]
fn eigenvalue_derivatives_sum_to_one_for_anderson_model() {
    let m = model(2, 8, 1.0, DisorderDistribution::uniform(0.0, 4.0).unwrap());
    let w = m.couplings(9, 0);
    let base = eigenvalues_only(&m.operator(&w).unwrap().matrix(), DEFAULT_DENSE_CAP).unwrap();
    let n = w.len();
    let delta = 1e-3;
    let shifted = |k: usize, by: f64| {
        let mut v = w.clone();
        v[k] += by;
        eigenvalues_only(&m.operator(&v).unwrap().matrix(), DEFAULT_DENSE_CAP).unwrap()
    };
    let mut sums = vec![0.0; n];
    for k in 0..n {
        // fourth-order central difference
        let (p2, p1, m1, m2) = (shifted(k, 2.0 * delta), shifted(k, delta), shifted(k, -delta), shifted(k, -2.0 * delta));
        for j in 0..n {
            let (a, b, c, d) = (p2.eigenvalues()[j], p1.eigenvalues()[j], m1.eigenvalues()[j], m2.eigenvalues()[j]);
            sums[j] += (-a + 8.0 * b - 8.0 * c + d) / (12.0 * delta);
        }
    }
    assert_eq!(base.len(), n);
    for (j, s) in sums.iter().enumerate() {
        assert!((s - 1.0).abs() < 1e-8, "n={j}: {s}");
    }
}

#[test]
fn wegner_is_deterministic_across_thread_counts() {
    let cfg = config(model(1, 24, 1.0, DisorderDistribution::uniform(0.0, 1.0).unwrap()), 40);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| wegner_experiment(&cfg).unwrap());
    let b = four.install(|| wegner_experiment(&cfg).unwrap());
    assert_eq!(a, b);
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        assert_eq!(ra.mean.to_bits(), rb.mean.to_bits());
    }
}

#[test]
fn wegner_counts_monotone_in_epsilon() {
    let cfg = config(model(1, 24, 1.0, DisorderDistribution::bernoulli(0.3).unwrap()), 30);
    let res = wegner_experiment(&cfg).unwrap();
    // grid is decreasing
    for counts in &res.counts {
        assert!(counts.windows(2).all(|w| w[0] >= w[1]));
        assert!(counts.iter().all(|&c| c as usize <= res.sites));
    }
    assert!(res.rows.windows(2).all(|w| w[0].mean >= w[1].mean));
}

#[test]
fn point_mass_disorder_gives_exact_count() {
    let dist = DisorderDistribution::point_mass(0.5, 0.0, 1.0).unwrap();
    let m = model(1, 16, 1.0, dist);
    let mut cfg = config(m.clone(), 5);
    cfg.energy = Some(1.3);
    let res = wegner_experiment(&cfg).unwrap();
    let spec = eigenvalues_only(&m.operator(&[0.5; 16]).unwrap().matrix(), DEFAULT_DENSE_CAP).unwrap();
    for row in &res.rows {
        let exact = spec
            .eigenvalues()
            .iter()
            .filter(|&&l| (1.3 - row.epsilon..=1.3 + row.epsilon).contains(&l))
            .count();
        assert_eq!(row.mean, exact as f64);
        assert_eq!(row.std_error, 0.0);
    }
}

#[test]
fn window_covering_spectrum_counts_everything() {
    // a single site with h = 1 has spectrum 2 + ω, ω ∈ [0, 1]
    let m = model(1, 1, 1.0, DisorderDistribution::uniform(0.0, 1.0).unwrap());
    let mut cfg = config(m, 10);
    cfg.energy = Some(2.5);
    cfg.eps_grid = vec![0.5];
    let res = wegner_experiment(&cfg).unwrap();
    assert_eq!(res.rows[0].mean, 1.0);
}

#[test]
fn wegner_rejects_bad_grids() {
    let m = model(1, 4, 1.0, DisorderDistribution::uniform(0.0, 1.0).unwrap());
    let mut cfg = config(m, 1);
    cfg.eps_grid = vec![0.7];
    assert!(wegner_experiment(&cfg).is_err());
    cfg.eps_grid = vec![];
    assert!(wegner_experiment(&cfg).is_err());
    cfg.eps_grid = vec![0.1];
    cfg.dense_cap = 2;
    assert!(wegner_experiment(&cfg).is_err());
}

fn ids_config(dist: DisorderDistribution, sides: Vec<usize>, energies: Vec<f64>, realizations: usize) -> IdsConfig {
    IdsConfig {
        dimension: 1,
        spacing: 1.0,
        single_site: SingleSitePotential::cell_indicator(1.0),
        background: 0.0,
        disorder: dist,
        sides,
        energies,
        realizations,
        seed: 8,
        dense_cap: DEFAULT_DENSE_CAP,
    }
}

#[test]
fn ids_of_free_chain_matches_closed_form() {
    let dist = DisorderDistribution::point_mass(0.0, 0.0, 1.0).unwrap();
    let energies: Vec<f64> = (0..=40).map(|i| 0.1 * i as f64 + 0.013).collect();
    let est = ids_estimate(&ids_config(dist, vec![16, 33], energies.clone(), 1)).unwrap();
    for curve in &est.curves {
        let l = curve.side;
        for (e, v) in energies.iter().zip(&curve.values) {
            let count = (1..=l)
                .filter(|k| {
                    4.0 * (*k as f64 * std::f64::consts::PI / (2.0 * (l as f64 + 1.0))).sin().powi(2) <= *e
                })
                .count();
            assert_eq!(*v, count as f64 / l as f64);
        }
    }
}

#[test]
fn ids_curves_are_monotone_and_converge() {
    let energies: Vec<f64> = (0..=50).map(|i| 0.1 * i as f64).collect();
    let dist = DisorderDistribution::uniform(0.0, 1.0).unwrap();
    let est = ids_estimate(&ids_config(dist, vec![16, 32, 64], energies, 100)).unwrap();
    for c in &est.curves {
        assert!(c.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(c.values.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }
    assert!(est.sup_distances[1] <= est.sup_distances[0], "{:?}", est.sup_distances);
}

#[test]
fn holder_check_flat_region_and_precondition() {
    let energies = vec![-2.0, -1.9, -1.5, 0.0];
    let dist = DisorderDistribution::uniform(0.0, 1.0).unwrap();
    let est = ids_estimate(&ids_config(dist.clone(), vec![8], energies, 5)).unwrap();
    let rep = holder_modulus_check(&est.curves[0], &dist, &[(-2.0, -1.9), (-2.0, -1.5)], 1).unwrap();
    assert!(rep.rows.iter().all(|r| r.ratio == 0.0));
    assert!(holder_modulus_check(&est.curves[0], &dist, &[(-2.0, 0.0)], 1).is_err());
    assert!(holder_modulus_check(&est.curves[0], &dist, &[(-2.0, -2.0)], 1).is_err());
}

#[test]
fn lemma3_examples() {
    let dist = DisorderDistribution::uniform(0.0, 1.0).unwrap();
    let c = lemma3_verify(&dist, |_| 3.0, 0.1).unwrap();
    assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
    let pm = DisorderDistribution::point_mass(0.5, 0.0, 1.0).unwrap();
    for eps in [0.01, 0.2, 0.5] {
        let c = lemma3_verify(&pm, |x: f64| x.clamp(0.0, 2.0), eps).unwrap();
        assert!((c.lhs - eps).abs() < 1e-15);
        assert!((c.rhs - (1.0 + eps)).abs() < 1e-15);
        assert!(c.holds(1e-8));
    }
    assert!(matches!(
        lemma3_verify(&dist, |x: f64| -x, 0.1),
        Err(ssflab_core::Error::NotMonotone { .. })
    ));
}

#[test]
fn lemma3_uniform_closed_form() {
    // φ(x) = x: lhs = ε exactly, s(μ,ε) = 2ε
    let dist = DisorderDistribution::uniform(0.0, 1.0).unwrap();
    let c = lemma3_verify(&dist, |x| x, 0.25).unwrap();
    assert!((c.lhs - 0.25).abs() < 1e-12);
    assert!((c.rhs - 0.5 * 1.25).abs() < 1e-12);
}

#[test]
fn lemma3_random_triples() {
    let mut r = rng(77);
    let dists = [
        DisorderDistribution::uniform(0.0, 1.0).unwrap(),
        DisorderDistribution::bernoulli(0.4).unwrap(),
        DisorderDistribution::cantor(12, 0.0, 1.0).unwrap(),
        DisorderDistribution::new(
            DisorderKind::AtomicMixture {
                atoms: vec![Atom { position: 0.2, mass: 0.3 }, Atom { position: 0.7, mass: 0.2 }],
                continuous_weight: 0.5,
            },
            0.0,
            1.0,
        )
        .unwrap(),
    ];
    for i in 0..200 {
        let dist = &dists[i % dists.len()];
        let phi = SmoothstepSum::random(&mut r, 1 + i % 5, -0.5, 1.5);
        let eps = 10f64.powf(r.random_range(-3.0..(0.5f64).log10()));
        let c = lemma3_verify(dist, |x| phi.eval(x), eps).unwrap();
        assert!(c.holds(1e-8), "{i}: {c:?}");
    }
}

#[test]
fn weyl_examples() {
    let dom = Domain::boxed(2, 32, 1.0 / 32.0).unwrap();
    let rep = weyl_check(&dom, &vec![0.0; dom.len()], 0.1).unwrap();
    assert!(rep.violations.is_empty());
    let shifted = weyl_check(&dom, &vec![-1.0; dom.len()], 0.1).unwrap();
    assert_eq!(shifted.constant, 1.0);
    assert!(shifted.violations.is_empty());
    for (a, b) in rep.rows.iter().zip(&shifted.rows) {
        assert!((a.eigenvalue - 1.0 - b.eigenvalue).abs() < 1e-9);
    }
    let small = Domain::boxed(1, 4, 1.0).unwrap();
    assert!(weyl_check(&small, &[-100.0; 4], 0.1).is_err());
    assert!(weyl_check(&small, &[0.0; 4], 0.5).is_err());
    // continuum constants: π² > 2π/e
    assert!(std::f64::consts::PI.powi(2) > 2.0 * std::f64::consts::PI / std::f64::consts::E);
}

#[test]
fn semigroup_trace_examples() {
    let dom = Domain::boxed(1, 256, 1.0 / 256.0).unwrap();
    let rep = semigroup_trace_check(&dom, &vec![0.0; 256], &[0.01, 1.0]).unwrap();
    assert!(rep.holds());
    assert!(rep.rows[0].margin >= 0.1);
    assert!(rep.rows[1].lhs <= rep.rows[1].rhs);
    assert!(semigroup_trace_check(&dom, &vec![0.0; 256], &[1e-6]).is_err());
}

#[test]
fn semigroup_trace_is_nearly_extensive() {
    let h = 1.0 / 16.0;
    let square: Vec<[i64; 3]> = Domain::boxed(2, 16, h).unwrap().sites().to_vec();
    // 16x16 square with a 4x4 notch moved to the opposite side
    let notched: Vec<[i64; 3]> = square
        .iter()
        .filter(|c| !(c[0] >= 12 && c[1] >= 12))
        .map(|c| [c[0] + 40, c[1], 0])
        .chain((0..4).flat_map(|y| (0..4).map(move |x| [x + 56, y, 0])))
        .collect();
    let a = Domain::masked(2, square.clone(), h).unwrap();
    let both = Domain::masked(2, square.into_iter().chain(notched), h).unwrap();
    let t = [0.02];
    let ra = semigroup_trace_check(&a, &vec![0.0; a.len()], &t).unwrap();
    let rb = semigroup_trace_check(&both, &vec![0.0; both.len()], &t).unwrap();
    assert!((rb.rows[0].rhs / ra.rows[0].rhs - 2.0).abs() < 1e-12);
    let ratio = rb.rows[0].lhs / ra.rows[0].lhs;
    assert!((1.8..=2.0).contains(&ratio), "{ratio}");
}

fn decay_config(amplitudes: Vec<Amplitude>) -> DecayExperimentConfig {
    let dom = Domain::boxed(1, 48, 1.0).unwrap();
    DecayExperimentConfig {
        base: LatticeOperator::new(dom.clone(), vec![0.0; 48], None).unwrap(),
        single_site: SingleSitePotential::cell_indicator(1.0),
        cell: dom.center(),
        amplitudes,
        t: 20.0,
        floor: 1e-12,
        skip_leading: 3,
        dense_cap: DEFAULT_DENSE_CAP,
    }
}

#[test]
fn zero_amplitude_rejects_fit() {
    let exp = singular_value_experiment(&decay_config(vec![Amplitude::Finite(0.0)])).unwrap();
    assert!(exp.rows[0].singular_values.values().iter().all(|&v| v == 0.0));
    assert!(exp.rows[0].fit.is_none());
}

#[test]
fn large_coupling_approaches_site_deletion() {
    let exp = singular_value_experiment(&decay_config(vec![Amplitude::Finite(1e6), Amplitude::Infinite])).unwrap();
    let (a, b) = (&exp.rows[0].singular_values, &exp.rows[1].singular_values);
    for i in 0..10 {
        let rel = (a.values()[i] - b.values()[i]).abs() / b.values()[i];
        assert!(rel < 1e-3, "{i}: {rel}");
    }
}

#[test]
fn decay_fit_positive_rate() {
    let exp = singular_value_experiment(&decay_config(vec![Amplitude::Finite(5.0)])).unwrap();
    let fit = exp.rows[0].fit.unwrap();
    assert!(fit.rate > 0.0 && fit.r_squared >= 0.9, "{fit:?}");
}
