//! Executes one experiment and collects its payload, fits and tables.

use rand::Rng;
use serde_json::{json, Value};
use ssflab_core::disorder::DisorderDistribution;
use ssflab_core::lattice::{constant_field_phases, Domain, LatticeOperator, SingleSitePotential};
use ssflab_core::matrix::{Complex64, DenseMatrix};
use ssflab_core::numerics::QuadratureTolerance;
use ssflab_core::rng::{stream, StreamComponent};
use ssflab_core::spectral::{
    eigen_decompose_matrix, eigenvalues_only, fit_decay_with, semigroup, singular_values,
    SpectralData, DEFAULT_DENSE_CAP, DEFAULT_FLOOR, DEFAULT_SKIP_LEADING,
};
use ssflab_core::ssf::*;
use ssflab_core::wegner::*;

use crate::config::{Background, ExperimentConfig, ExperimentKind, ModelBlock};
use crate::error::CliError;
use crate::row;
use crate::tables::Table;

type Res<T> = std::result::Result<T, CliError>;

/// What a run produces before it is wrapped into a record.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub payload: Value,
    pub fits: Value,
    pub tables: Vec<Table>,
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialize")
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Res<Outcome> {
    let model = || Model::build(&cfg.model);
    match cfg.experiment {
        ExperimentKind::SingularDecay => singular_decay(cfg, &model()?),
        ExperimentKind::SsfIdentities => ssf_identities(cfg, &model()?),
        ExperimentKind::FtBounds => ft_bounds(cfg, &model()?),
        ExperimentKind::Wegner => wegner(cfg, &model()?),
        ExperimentKind::Ids => ids(cfg),
        ExperimentKind::Lemma3 => lemma3(cfg),
        ExperimentKind::Weyl => weyl(cfg, &model()?),
        ExperimentKind::TraceBound => trace_bound(cfg, &model()?),
    }
}

/// Domain, phases, background and single-site profile built from the model block.
struct Model {
    domain: Domain,
    phases: Option<Vec<Complex64>>,
    background: Vec<f64>,
    single_site: SingleSitePotential,
    disorder: DisorderDistribution,
}

impl Model {
    fn build(block: &ModelBlock) -> Res<Self> {
        let domain = match &block.mask {
            Some(mask) => Domain::masked(block.dimension, mask.iter().copied(), block.spacing)?,
            None => Domain::boxed(block.dimension, block.side, block.spacing)?,
        };
        let phases = match &block.magnetic_field {
            Some(f) => Some(constant_field_phases(&domain, f.strength, f.gauge)?),
            None => None,
        };
        let background = match &block.background {
            Background::Constant(v) => vec![*v; domain.len()],
            Background::Values(v) => {
                if v.len() != domain.len() {
                    return Err(CliError::invalid(
                        "model.background",
                        format!("expected {} values, got {}", domain.len(), v.len()),
                    ));
                }
                v.clone()
            }
        };
        let single_site = SingleSitePotential::new(
            block.single_site.offsets.clone(),
            block.single_site.profile.clone(),
        )?;
        block.disorder.validate()?;
        Ok(Self {
            domain,
            phases,
            background,
            single_site,
            disorder: block.disorder.clone(),
        })
    }

    fn base(&self) -> Res<LatticeOperator> {
        Ok(LatticeOperator::new(
            self.domain.clone(),
            self.background.clone(),
            self.phases.clone(),
        )?)
    }

    /// `H₁` plus `amplitude · u` at the centre cell.
    fn bumped(&self, base: &LatticeOperator, amplitude: f64) -> Res<LatticeOperator> {
        let bump = self.single_site.placed(&self.domain, self.domain.center());
        let v = base
            .potential()
            .iter()
            .zip(&bump)
            .map(|(p, b)| p + amplitude * b)
            .collect();
        Ok(base.with_potential(v)?)
    }

    fn rank(&self) -> usize {
        self.single_site
            .support_in(&self.domain, self.domain.center())
            .len()
    }

    fn alloy(&self) -> Res<AlloyModel> {
        let m = AlloyModel::new(
            self.domain.clone(),
            self.single_site.clone(),
            self.background.clone(),
            self.disorder.clone(),
        )?;
        Ok(match &self.phases {
            Some(p) => m.with_phases(p.clone()),
            None => m,
        })
    }
}

fn dense_cap(cfg: &ExperimentConfig) -> usize {
    cfg.numeric.dense_cap.unwrap_or(DEFAULT_DENSE_CAP)
}

fn eps_grid(cfg: &ExperimentConfig, default: Option<Vec<f64>>) -> Res<Vec<f64>> {
    let grid = match (&cfg.numeric.epsilon_grid, default) {
        (Some(g), _) => g.clone(),
        (None, Some(d)) => d,
        (None, None) => return Err(CliError::missing("epsilon_grid")),
    };
    validate_eps_grid(&grid)?;
    Ok(grid)
}

fn dyadic_grid(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|k| 2f64.powi(-k)).collect()
}

fn spectra(op1: &LatticeOperator, op2: &LatticeOperator, cap: usize, vectors: bool) -> Res<(SpectralData, SpectralData)> {
    let f = if vectors { eigen_decompose_matrix } else { eigenvalues_only };
    Ok((f(&op1.matrix(), cap)?, f(&op2.matrix(), cap)?))
}

fn mid_spectrum(spec: &SpectralData) -> f64 {
    let ev = spec.eigenvalues();
    0.5 * (ev[0] + ev[ev.len() - 1])
}

fn singular_decay(cfg: &ExperimentConfig, model: &Model) -> Res<Outcome> {
    let n = &cfg.numeric;
    let exp_cfg = DecayExperimentConfig {
        base: model.base()?,
        single_site: model.single_site.clone(),
        cell: model.domain.center(),
        amplitudes: n.amplitudes.clone().unwrap_or_else(|| {
            vec![
                Amplitude::Finite(1.0),
                Amplitude::Finite(10.0),
                Amplitude::Finite(1e3),
                Amplitude::Infinite,
            ]
        }),
        t: n.t.unwrap_or(1.0),
        floor: n.floor.unwrap_or(DEFAULT_FLOOR),
        skip_leading: n.skip_leading.unwrap_or(DEFAULT_SKIP_LEADING),
        dense_cap: dense_cap(cfg),
    };
    let exp = singular_value_experiment(&exp_cfg)?;
    let d = exp.dimension as f64;
    let mut tables = Vec::new();
    for (i, r) in exp.rows.iter().enumerate() {
        let mut t = Table::new(
            format!("decay_{i}"),
            &[("n", "1"), ("mu_n", "1"), ("n_pow_alpha", "1"), ("log_mu_n", "1")],
        )
        .meta("amplitude", r.amplitude)
        .meta("alpha", 1.0 / d)
        .meta("t", exp_cfg.t);
        for (k, &mu) in r.singular_values.values().iter().enumerate() {
            let idx = k + 1;
            t.push(row![idx, mu, (idx as f64).powf(1.0 / d), mu.ln()]);
        }
        tables.push(t);
    }
    let fits = json!({
        "rates": exp.rates(),
        "rate_variation": exp.rate_variation(),
        "rate_deviation": exp.rate_deviation(),
        "r_squared": exp.rows.iter().map(|r| r.fit.map(|f| f.r_squared)).collect::<Vec<_>>(),
        "conjecture_rates": exp.rows.iter().map(|r| r.fit_conjecture.map(|f| f.rate)).collect::<Vec<_>>(),
    });
    Ok(Outcome {
        payload: json!({ "t": exp_cfg.t, "experiment": to_value(&exp) }),
        fits,
        tables,
    })
}

fn random_pair<R: Rng>(rng: &mut R, n: usize, rank: usize, sign: f64) -> Res<(DenseMatrix, DenseMatrix)> {
    let mut m = nalgebra::DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    let mut shift = vec![0.0; n];
    let mut placed = 0;
    while placed < rank.min(n) {
        let i = rng.random_range(0..n);
        if shift[i] == 0.0 {
            shift[i] = sign * 2.0 * (1.0 - rng.random::<f64>());
            placed += 1;
        }
    }
    let h1 = DenseMatrix::Real(m);
    let h2 = h1.add_diagonal(&shift)?;
    Ok((h1, h2))
}

fn invariance_matches(s1: &SpectralData, s2: &SpectralData, direct: &SsfCurve) -> Res<bool> {
    let gs: [&dyn Fn(f64) -> f64; 3] = [&|x: f64| (-x).exp(), &|x| 2.0 * x + 7.0, &|x| x * x * x + x];
    for g in gs {
        if &ssf_via_invariance(s1, s2, g)? != direct {
            return Ok(false);
        }
    }
    Ok(true)
}

fn ssf_identities(cfg: &ExperimentConfig, model: &Model) -> Res<Outcome> {
    let cap = dense_cap(cfg);
    let amplitude = cfg.numeric.amplitude.unwrap_or(1.0);
    let base = model.base()?;
    let (s1, s2) = spectra(&base, &model.bumped(&base, amplitude)?, cap, false)?;
    let curve = ssf_counting(&s1, &s2)?;
    let energy = cfg.numeric.energy.unwrap_or_else(|| mid_spectrum(&s1));
    let grid = eps_grid(cfg, Some(vec![0.25, 0.1, 0.05]))?;
    let mut krein = Vec::new();
    for &eps in &grid {
        let rho = make_switch(energy, eps)?;
        let k = krein_check(&s1, &s2, |x| rho.eval(x))?;
        krein.push(json!({"epsilon": eps, "lhs": k.lhs, "rhs": k.rhs, "holds": k.holds(1e-10)}));
    }
    let gauss = krein_check(&s1, &s2, |x| (-(x - energy).powi(2)).exp())?;
    let rank = model.rank() as i64;
    let model_checks = json!({
        "energy": energy,
        "krein_switch": krein,
        "krein_gaussian": {"lhs": gauss.lhs, "rhs": gauss.rhs, "holds": gauss.holds(1e-10)},
        "invariance_exact": invariance_matches(&s1, &s2, &curve)?,
        "max_abs": curve.max_abs(),
        "rank": rank,
        "interlacing_holds": curve.max_abs() <= rank,
        "sign_holds": if amplitude >= 0.0 { curve.max_value() <= 0 } else { curve.min_value() >= 0 },
    });

    let trials = cfg.numeric.trials.unwrap_or(200);
    let mut rng = stream(cfg.seed, 0, StreamComponent::Instance);
    let (mut krein_fail, mut inv_fail, mut inter_fail, mut sign_fail) = (0usize, 0usize, 0usize, 0usize);
    let mut max_disc = 0.0f64;
    for _ in 0..trials {
        let n = rng.random_range(2..=64usize);
        let rank = rng.random_range(1..=5usize).min(n);
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let (h1, h2) = random_pair(&mut rng, n, rank, sign)?;
        let (a, b) = (eigenvalues_only(&h1, cap)?, eigenvalues_only(&h2, cap)?);
        let c = ssf_counting(&a, &b)?;
        let e = rng.random_range(-3.0..3.0);
        let rho = make_switch(e, 0.05)?;
        let k = krein_check(&a, &b, |x| rho.eval(x))?;
        max_disc = max_disc.max(k.discrepancy() / (1.0 + k.lhs.abs()));
        krein_fail += usize::from(!k.holds(1e-10));
        inv_fail += usize::from(!invariance_matches(&a, &b, &c)?);
        inter_fail += usize::from(c.max_abs() > rank as i64);
        sign_fail += usize::from(if sign > 0.0 { c.max_value() > 0 } else { c.min_value() < 0 });
    }
    let random = json!({
        "trials": trials,
        "krein_failures": krein_fail,
        "invariance_failures": inv_fail,
        "interlacing_failures": inter_fail,
        "sign_failures": sign_fail,
        "max_relative_discrepancy": max_disc,
    });
    let mut table = Table::new("ssf", &[("breakpoint", "energy"), ("value", "count")])
        .meta("convention", "xi(lambda) = #{H2 <= lambda} - #{H1 <= lambda}")
        .meta("amplitude", amplitude);
    for (b, v) in curve.breakpoints().iter().zip(curve.values()) {
        table.push(row![*b, *v]);
    }
    Ok(Outcome {
        payload: json!({"model_pair": model_checks, "random_pairs": random, "curve": to_value(&curve)}),
        fits: json!({"max_relative_discrepancy": max_disc}),
        tables: vec![table],
    })
}

fn ft_bounds(cfg: &ExperimentConfig, model: &Model) -> Res<Outcome> {
    let cap = dense_cap(cfg);
    let d = model.domain.dimension() as u32;
    let amplitude = cfg.numeric.amplitude.unwrap_or(3.0);
    let base = model.base()?;
    let (s1, s2) = spectra(&base, &model.bumped(&base, amplitude)?, cap, true)?;
    let diff = semigroup(&s1, 1.0)?.sub(&semigroup(&s2, 1.0)?)?;
    let sv = singular_values(&diff);
    let (t, c_fit) = match cfg.numeric.t {
        Some(t) => (t, None),
        None => {
            let fit = fit_decay_with(&sv, 1.0 / d as f64, cfg.numeric.floor.unwrap_or(DEFAULT_FLOOR), 0)?;
            (fit.rate / 2.0, Some(fit.rate))
        }
    };
    let f = FtFunctional::new(t, d)?;
    let curve = ssf_counting(&s1, &s2)?;

    let k1 = integral_bound_constant(&curve, &f)?;
    let fine = f.with_tolerance(QuadratureTolerance {
        relative: 1e-13,
        absolute: 1e-16,
        max_depth: 56,
    });
    let top = s2.eigenvalues()[s2.len() - 1].max(s1.eigenvalues()[s1.len() - 1]);
    let uppers = cfg
        .numeric
        .upper
        .clone()
        .unwrap_or_else(|| vec![0.0, 1.0, 2.0, 5.0, top + 1.0]);
    let mut integral = Table::new(
        "ssf_integral",
        &[("T", "energy"), ("integral", "energy"), ("refined", "energy"), ("k1_exp_T", "energy")],
    )
    .meta("t", t)
    .meta("k1", k1);
    let mut max_refine_gap = 0.0f64;
    let mut bound_holds = true;
    for &upper in &uppers {
        let a = ssf_integral_bound(&curve, &f, upper)?;
        let b = ssf_integral_bound(&curve, &fine, upper)?;
        max_refine_gap = max_refine_gap.max((a - b).abs() / b.abs().max(1e-300));
        bound_holds &= a <= k1 * upper.exp() * (1.0 + 1e-12);
        integral.push(row![upper, a, b, k1 * upper.exp()]);
    }

    let mut legendre = Table::new("legendre", &[("y", "1"), ("G", "1"), ("majorant", "1")]).meta("t", t);
    let mut legendre_holds = true;
    for i in 0..=24 {
        let y = 10f64.powf(-3.0 + 0.25 * i as f64);
        let g = f.legendre_dual(y)?;
        let m = f.legendre_majorant(y);
        legendre_holds &= g <= m * (1.0 + 1e-9);
        legendre.push(row![y, g, m]);
    }

    let hs = hs_majorization_check(&sv, &exponentiated_curve(&s1, &s2)?, &f)?;

    let k2 = t.powi(-(d as i32));
    let energy = mid_spectrum(&s1);
    let mut dual = Vec::new();
    for &eps in &[0.25, 0.1, 0.05] {
        for &scale in &[0.5, 1.0, 2.0, 4.0] {
            let rho = make_switch(energy, eps)?;
            let c = dual_bound_check(&curve, &rho, scale, k1, k2, d);
            dual.push(json!({"epsilon": eps, "scale": scale, "lhs": c.lhs, "rhs": c.rhs, "holds": c.holds}));
        }
    }

    let cutoffs = [50.0, 100.0, 200.0, 400.0];
    let low = FtFunctional::with_exponent(1.0, d, 1.0 / d as f64)?;
    let high = FtFunctional::with_exponent(1.0, d, 3.0 / d as f64)?;
    let trend = json!({
        "cutoffs": cutoffs,
        "alpha_low": 1.0 / d as f64,
        "partial_low": synthetic_singularity_trend(&low, 4.0, &cutoffs)?,
        "alpha_high": 3.0 / d as f64,
        "partial_high": synthetic_singularity_trend(&high, 4.0, &cutoffs)?,
    });

    let closed_form = if d == 1 {
        let v = f.eval(1.0)?;
        let exact = ((t).exp() - 1.0) / t - 1.0;
        Some(json!({"value": v, "exact": exact, "error": (v - exact).abs()}))
    } else {
        None
    };
    Ok(Outcome {
        payload: json!({
            "t": t,
            "c_fit": c_fit,
            "dimension": d,
            "f_at_zero": f.eval(0.0)?,
            "closed_form": closed_form,
            "integral_bound": {"k1": k1, "holds": bound_holds, "max_refinement_gap": max_refine_gap},
            "legendre_holds": legendre_holds,
            "majorization": to_value(&hs),
            "dual_bound": {"k2": k2, "checks": dual},
            "synthetic_trend": trend,
        }),
        fits: json!({"k1": k1, "k2": k2, "t": t, "c_fit": c_fit}),
        tables: vec![integral, legendre],
    })
}

fn wegner(cfg: &ExperimentConfig, model: &Model) -> Res<Outcome> {
    let n = &cfg.numeric;
    let wcfg = WegnerConfig {
        model: model.alloy()?,
        energy: n.energy,
        eps_grid: eps_grid(cfg, None)?,
        realizations: n.realizations.ok_or_else(|| CliError::missing("realizations"))?,
        seed: cfg.seed,
        dense_cap: dense_cap(cfg),
    };
    let res = wegner_experiment(&wcfg)?;
    let mut table = Table::new(
        "wegner",
        &[
            ("epsilon", "energy"),
            ("mean", "count"),
            ("std_error", "count"),
            ("s_eps", "1"),
            ("s_2eps", "1"),
            ("ratio", "1"),
            ("ratio_single", "1"),
        ],
    )
    .meta("energy", res.energy)
    .meta("realizations", wcfg.realizations)
    .meta("sites", res.sites);
    for r in &res.rows {
        table.push(row![r.epsilon, r.mean, r.std_error, r.modulus, r.modulus_double, r.ratio, r.ratio_single]);
    }
    Ok(Outcome {
        fits: json!({
            "exponent": res.exponent,
            "exponent_r_squared": res.exponent_r_squared,
            "ratio_spread": res.ratio_spread(),
        }),
        payload: to_value(&res),
        tables: vec![table],
    })
}

fn ids(cfg: &ExperimentConfig) -> Res<Outcome> {
    let m = &cfg.model;
    let n = &cfg.numeric;
    let background = match m.background {
        Background::Constant(v) => v,
        Background::Values(_) => {
            return Err(CliError::invalid("model.background", "ids needs a constant background"))
        }
    };
    m.disorder.validate()?;
    let icfg = IdsConfig {
        dimension: m.dimension,
        spacing: m.spacing,
        single_site: SingleSitePotential::new(m.single_site.offsets.clone(), m.single_site.profile.clone())?,
        background,
        disorder: m.disorder.clone(),
        sides: n.sides.clone().ok_or_else(|| CliError::missing("sides"))?,
        energies: n.energies.clone().ok_or_else(|| CliError::missing("energies"))?,
        realizations: n.realizations.ok_or_else(|| CliError::missing("realizations"))?,
        seed: cfg.seed,
        dense_cap: dense_cap(cfg),
    };
    let est = ids_estimate(&icfg)?;
    let holder = match (&n.pairs, est.curves.last()) {
        (Some(pairs), Some(curve)) => Some(holder_modulus_check(curve, &m.disorder, pairs, m.dimension)?),
        _ => None,
    };
    let tables = est
        .curves
        .iter()
        .map(|c| {
            let mut t = Table::new(format!("ids_{}", c.side), &[("energy", "energy"), ("ids", "1/volume")])
                .meta("side", c.side)
                .meta("volume", c.volume);
            for (e, v) in c.energies.iter().zip(&c.values) {
                t.push(row![*e, *v]);
            }
            t
        })
        .collect();
    Ok(Outcome {
        fits: json!({
            "sup_distances": est.sup_distances,
            "c_i": holder.as_ref().map(|h| h.c_i),
            "holder_exponent": holder.as_ref().and_then(|h| h.exponent),
        }),
        payload: json!({"estimate": to_value(&est), "holder": holder.as_ref().map(to_value)}),
        tables,
    })
}

fn lemma3(cfg: &ExperimentConfig) -> Res<Outcome> {
    let dist = &cfg.model.disorder;
    dist.validate()?;
    let (a, b) = dist.support();
    let trials = cfg.numeric.trials.unwrap_or(1000);
    let mut rng = stream(cfg.seed, 0, StreamComponent::Instance);
    let mut table = Table::new(
        "lemma3",
        &[("trial", "1"), ("epsilon", "1"), ("lhs", "1"), ("rhs", "1")],
    );
    let mut violations = 0usize;
    let mut max_excess = f64::NEG_INFINITY;
    for i in 0..trials {
        let terms = rng.random_range(1..=5usize);
        let phi = SmoothstepSum::random(&mut rng, terms, a - 0.5, b + 0.5);
        let eps = 10f64.powf(rng.random_range(-3.0..=0.5f64.log10()));
        let c = lemma3_verify(dist, |x| phi.eval(x), eps)?;
        violations += usize::from(!c.holds(1e-8));
        max_excess = max_excess.max(c.lhs - c.rhs);
        table.push(row![i, eps, c.lhs, c.rhs]);
    }
    Ok(Outcome {
        payload: json!({"trials": trials, "violations": violations, "max_excess": max_excess}),
        fits: json!({"max_excess": max_excess}),
        tables: vec![table],
    })
}

fn weyl(cfg: &ExperimentConfig, model: &Model) -> Res<Outcome> {
    let eta = cfg.numeric.eta.unwrap_or(DEFAULT_ETA);
    let [coarse, fine] = weyl_refinement(&model.domain, &model.background, eta)?;
    let h = model.domain.spacing();
    let t_grid = match &cfg.numeric.t_grid {
        Some(g) => g.clone(),
        None => [4.0 * h * h, 0.01, 0.1, 1.0]
            .into_iter()
            .filter(|&t| t >= 4.0 * h * h)
            .collect(),
    };
    let trace = semigroup_trace_check(&model.domain, &model.background, &t_grid)?;
    let mut tables = Vec::new();
    for (label, rep) in [("weyl_coarse", &coarse), ("weyl_fine", &fine)] {
        let mut t = Table::new(
            label,
            &[("n", "1"), ("eigenvalue", "energy"), ("bound", "energy"), ("margin", "energy")],
        )
        .meta("spacing", rep.spacing)
        .meta("delta", rep.delta)
        .meta("constant", rep.constant);
        for r in &rep.rows {
            t.push(row![r.n, r.eigenvalue, r.bound, r.margin]);
        }
        tables.push(t);
    }
    let mut tt = Table::new(
        "semigroup_trace",
        &[("t", "time"), ("lhs", "1"), ("rhs", "1"), ("margin", "1")],
    )
    .meta("window_min", trace.window_min);
    for r in &trace.rows {
        tt.push(row![r.t, r.lhs, r.rhs, r.margin]);
    }
    tables.push(tt);
    Ok(Outcome {
        fits: json!({
            "min_margin": [coarse.min_margin, fine.min_margin],
            "violations": [coarse.violations.len(), fine.violations.len()],
            "trace_min_margin": trace.min_margin(),
        }),
        payload: json!({"coarse": to_value(&coarse), "fine": to_value(&fine), "semigroup_trace": to_value(&trace)}),
        tables,
    })
}

fn trace_bound(cfg: &ExperimentConfig, model: &Model) -> Res<Outcome> {
    let cap = dense_cap(cfg);
    let amplitude = cfg.numeric.amplitude.unwrap_or(1e3);
    let base = model.base()?;
    let (s1, s2) = spectra(&base, &model.bumped(&base, amplitude)?, cap, false)?;
    let curve = ssf_counting(&s1, &s2)?;
    let energy = match cfg.numeric.energy {
        Some(e) => e,
        None => {
            let mid = mid_spectrum(&s1);
            curve.nearest_nonzero_midpoint(mid).unwrap_or(mid)
        }
    };
    let grid = eps_grid(cfg, Some(dyadic_grid(2, 10)))?;
    let d = model.domain.dimension() as u32;
    let table = trace_bound_check(&s1, &s2, energy, &grid, d)?;
    let rank = model.rank();
    let max_trace = table.rows.iter().fold(f64::NEG_INFINITY, |a, r| a.max(r.trace));
    let mut t = Table::new(
        "trace_bound",
        &[("epsilon", "energy"), ("trace", "count"), ("log_factor", "1"), ("ratio", "count")],
    )
    .meta("energy", energy)
    .meta("c_e", table.c_e);
    for r in &table.rows {
        t.push(row![r.epsilon, r.trace, r.log_factor, r.ratio]);
    }
    let stability = table.c_e_fine / table.c_e_coarse;
    Ok(Outcome {
        fits: json!({"c_e": table.c_e, "c_e_coarse": table.c_e_coarse, "c_e_fine": table.c_e_fine, "stability": stability}),
        payload: json!({
            "table": to_value(&table),
            "rank": rank,
            "max_abs_xi": curve.max_abs(),
            "max_trace": max_trace,
            "xi_at_energy": curve.eval(energy),
        }),
        tables: vec![t],
    })
}
