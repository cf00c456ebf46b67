use super::*;
use crate::error::Error;
use crate::matrix::DenseMatrix;
use crate::spectral::{eigen_decompose_matrix, semigroup, singular_values, SpectralData};

fn diag(values: &[f64]) -> SpectralData {
    eigen_decompose_matrix(&DenseMatrix::from_diagonal(values), 100).unwrap()
}

#[test]
fn counting_curve_examples() {
    let h = diag(&[0.0, 2.0]);
    assert_eq!(ssf_counting(&h, &h).unwrap().max_abs(), 0);

    let c = ssf_counting(&diag(&[0.0]), &diag(&[1.0])).unwrap();
    assert_eq!(c.breakpoints(), &[0.0, 1.0]);
    assert_eq!(c.values(), &[-1, 0]);
    assert_eq!(c.eval(-0.5), 0);
    assert_eq!(c.eval(0.0), -1);
    assert_eq!(c.eval(0.999), -1);
    assert_eq!(c.eval(1.0), 0);

    // {0, 2} against {1, 2}
    let c = ssf_counting(&diag(&[0.0, 2.0]), &diag(&[1.0, 2.0])).unwrap();
    assert_eq!(c.breakpoints(), &[0.0, 1.0, 2.0]);
    assert_eq!(c.values(), &[-1, 0, 0]);
    assert_eq!(c.integral(), -1.0);

    assert!(matches!(
        ssf_counting(&diag(&[0.0]), &diag(&[0.0, 1.0])),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn krein_orientation_on_one_by_one_pair() {
    // H₁ = 0, H₂ = 1: ξ = -1 on [0, 1) and Tr[ρ(H₂) - ρ(H₁)] = ρ(1) - ρ(0) = 1.
    let rho = make_switch(0.5, 0.1).unwrap();
    let check = krein_check(&diag(&[0.0]), &diag(&[1.0]), |x| rho.eval(x)).unwrap();
    assert_eq!(check.lhs, 1.0);
    assert_eq!(check.rhs, 1.0);

    let same = krein_check(&diag(&[0.3, 4.0]), &diag(&[0.3, 4.0]), |x| rho.eval(x)).unwrap();
    assert_eq!((same.lhs, same.rhs), (0.0, 0.0));
}

#[test]
fn invariance_examples() {
    let h1 = diag(&[0.0, 2.0]);
    let h2 = diag(&[1.0, 2.0]);
    let direct = ssf_counting(&h1, &h2).unwrap();
    assert_eq!(ssf_via_invariance(&h1, &h2, |x| x).unwrap(), direct);
    assert_eq!(ssf_via_invariance(&h1, &h2, |x: f64| (-x).exp()).unwrap(), direct);
    assert_eq!(ssf_via_invariance(&h1, &h2, |x| 2.0 * x + 7.0).unwrap(), direct);
    assert!(matches!(
        ssf_via_invariance(&h1, &h2, |x| (x - 1.0).powi(2)),
        Err(Error::NotMonotone { .. })
    ));
}

#[test]
fn switch_function_shape() {
    let (e, eps) = (0.7, 0.2);
    let rho = make_switch(e, eps).unwrap();
    assert_eq!(rho.eval(e - eps), -1.0);
    assert_eq!(rho.eval(e + eps), 0.0);
    assert!((rho.eval(e) + 0.5).abs() < 1e-15);
    assert!((rho.derivative(e) - 0.9375 / eps).abs() < 1e-12);
    assert!(rho.max_derivative() <= 1.0 / eps);
    assert_eq!(rho.eval(-10.0), -1.0);
    assert_eq!(rho.eval(10.0), 0.0);
    assert!(make_switch(0.0, 0.0).is_err());
    assert!(make_switch(0.0, 0.6).is_err());
    assert!(make_switch(0.0, 0.5).is_ok());
}

#[test]
fn switch_sandwiches_window_indicator() {
    let (e, eps) = (1.3, 0.05);
    let rho = make_switch(e, eps).unwrap();
    let n = 20_001;
    for i in 0..n {
        let x = e - 5.0 * eps + 10.0 * eps * i as f64 / (n - 1) as f64;
        let chi = if (e - eps..=e + eps).contains(&x) { 1.0 } else { 0.0 };
        let sandwich = rho.eval(x + 2.0 * eps) - rho.eval(x - 2.0 * eps);
        assert!(chi <= sandwich + 1e-15, "x = {x}");
    }
}

#[test]
fn switch_is_monotone_and_c1() {
    let rho = make_switch(0.0, 0.25).unwrap();
    let h = 1e-6;
    let mut prev = rho.eval(-1.0);
    for i in 0..=2000 {
        let x = -0.5 + i as f64 * 0.0005;
        let v = rho.eval(x);
        assert!(v >= prev);
        prev = v;
        let fd = (rho.eval(x + h) - rho.eval(x - h)) / (2.0 * h);
        assert!((fd - rho.derivative(x)).abs() < 1e-5, "x = {x}");
    }
}

/// Midpoint rule in the original variable, independent of the substitution
/// used by the implementation.
fn ft_midpoint(t: f64, d: u32, x: f64, n: usize) -> f64 {
    let h = x / n as f64;
    (0..n)
        .map(|i| {
            let y = (i as f64 + 0.5) * h;
            (t * y.powf(1.0 / d as f64)).exp() - 1.0
        })
        .sum::<f64>()
        * h
}

#[test]
fn ft_values() {
    let f1 = FtFunctional::new(1.0, 1).unwrap();
    assert_eq!(f1.eval(0.0).unwrap(), 0.0);
    let e2 = std::f64::consts::E - 2.0;
    assert!((f1.eval(1.0).unwrap() - e2).abs() < 1e-12);
    for (t, x) in [(0.1, 3.0), (2.0, 0.5), (0.7, 10.0)] {
        let f = FtFunctional::new(t, 1).unwrap();
        let closed = ((t * x).exp_m1() - t * x) / t;
        assert!(((f.eval(x).unwrap() - closed) / closed).abs() < 1e-10);
    }
    // 2 ∫₀¹ u eᵘ du - 1 = 1
    let f2 = FtFunctional::new(1.0, 2).unwrap();
    assert!((f2.eval(1.0).unwrap() - 1.0).abs() < 1e-10);
    assert!((ft_midpoint(1.0, 2, 1.0, 1_000_000) - 1.0).abs() < 1e-8);
    let f3 = FtFunctional::new(0.5, 3).unwrap();
    let x = 7.5;
    assert!((f3.eval(x).unwrap() - ft_midpoint(0.5, 3, x, 2_000_000)).abs() < 1e-7);
    assert!(f2.eval(-1.0).is_err());
    assert!(FtFunctional::new(0.0, 1).is_err());
}

#[test]
fn ft_large_argument_asymptotics() {
    let f = FtFunctional::new(1.0, 2).unwrap();
    let ratios: Vec<f64> = [1e2, 1e3, 1e4]
        .iter()
        .map(|&x| asymptotic_ratio(&f, x).unwrap())
        .collect();
    assert!((ratios[2] - 1.0).abs() < 0.05, "{ratios:?}");
    assert!((ratios[2] - 1.0).abs() < (ratios[0] - 1.0).abs());
}

#[test]
fn legendre_dual_examples() {
    let f = FtFunctional::new(0.5, 2).unwrap();
    assert_eq!(f.legendre_dual(0.0).unwrap(), 0.0);
    for y in [0.01, 0.3, 2.0, 40.0] {
        let g = f.legendre_dual(y).unwrap();
        // maximiser of x y - F(x) solves F'(x) = y
        let x_star = ((1.0 + y).ln() / f.t()).powi(2);
        let exact = x_star * y - f.eval(x_star).unwrap();
        assert!((g - exact).abs() < 1e-8 * (1.0 + exact), "y {y}: {g} vs {exact}");
        assert!(g <= f.legendre_majorant(y));
    }
}

#[test]
fn integral_bound_examples() {
    let f = FtFunctional::new(1.0, 1).unwrap();
    let zero = ssf_counting(&diag(&[1.0]), &diag(&[1.0])).unwrap();
    assert_eq!(ssf_integral_bound(&zero, &f, 2.0).unwrap(), 0.0);
    let c = ssf_counting(&diag(&[0.0]), &diag(&[1.0])).unwrap();
    let v = ssf_integral_bound(&c, &f, 2.0).unwrap();
    assert!((v - (std::f64::consts::E - 2.0)).abs() < 1e-12);
    // truncation at T inside the interval
    let half = ssf_integral_bound(&c, &f, 0.5).unwrap();
    assert!((half - 0.5 * (std::f64::consts::E - 2.0)).abs() < 1e-12);
}

#[test]
fn integral_bound_constant_is_tight() {
    let f = FtFunctional::new(0.5, 1).unwrap();
    let c = ssf_counting(&diag(&[-1.0, 0.5, 2.0]), &diag(&[0.0, 1.5, 3.0])).unwrap();
    let k1 = integral_bound_constant(&c, &f).unwrap();
    let mut best = 0.0f64;
    for i in 0..=20_000 {
        let t = -2.0 + 6.0 * i as f64 / 20_000.0;
        let v = ssf_integral_bound(&c, &f, t).unwrap();
        assert!(v <= k1 * t.exp() * (1.0 + 1e-12));
        best = best.max(v * (-t).exp());
    }
    assert!((best - k1).abs() < 1e-6 * k1);
}

#[test]
fn majorization_rank_one_saturates() {
    let f = FtFunctional::new(1.0, 1).unwrap();
    let (h1, h2) = (diag(&[0.0]), diag(&[1.0]));
    let sv = singular_values(
        &semigroup(&h1, 1.0)
            .unwrap()
            .sub(&semigroup(&h2, 1.0).unwrap())
            .unwrap(),
    );
    let curve = exponentiated_curve(&h1, &h2).unwrap();
    let check = hs_majorization_check(&sv, &curve, &f).unwrap();
    let expected = f.eval(1.0).unwrap() * (1.0 - (-1f64).exp());
    assert!((check.lhs - expected).abs() < 1e-14);
    assert!((check.rhs - expected).abs() < 1e-14);
    assert!(check.holds);

    let same = hs_majorization_check(
        &singular_values(&DenseMatrix::zeros(2)),
        &exponentiated_curve(&diag(&[0.0, 1.0]), &diag(&[0.0, 1.0])).unwrap(),
        &f,
    )
    .unwrap();
    assert_eq!((same.lhs, same.rhs), (0.0, 0.0));
}

#[test]
fn trace_bound_trivial_cases() {
    let h = diag(&[0.0, 0.4, 1.0, 2.0]);
    let grid: Vec<f64> = (2..=6).map(|k| 2f64.powi(-k)).collect();
    let t = trace_bound_check(&h, &h, 0.5, &grid, 1).unwrap();
    assert!(t.rows.iter().all(|r| r.trace == 0.0));
    assert_eq!(t.c_e, 0.0);

    // rank-two nonnegative perturbation: values within [0, 2]
    let h2 = diag(&[0.0, 0.9, 1.0, 2.7]);
    let t = trace_bound_check(&h, &h2, 0.6, &grid, 1).unwrap();
    assert!(t.rows.iter().all(|r| r.trace >= -1e-15 && r.trace <= 2.0 + 1e-12));
    assert!(trace_bound_check(&h, &h2, 0.6, &[], 1).is_err());
    assert!(trace_bound_check(&h, &h2, 0.6, &[0.7], 1).is_err());
}

#[test]
fn dual_bound_holds_with_fitted_constants() {
    let f = FtFunctional::new(0.3, 1).unwrap();
    let c = ssf_counting(&diag(&[0.0, 0.5, 1.0, 1.7]), &diag(&[0.2, 0.8, 1.1, 2.5])).unwrap();
    let k1 = integral_bound_constant(&c, &f).unwrap();
    let k2 = f.t().powi(-1);
    for (e, eps, scale) in [(0.1, 0.05, 1.0), (0.9, 0.2, 10.0), (2.0, 0.5, 0.3), (0.55, 0.01, 50.0)] {
        let rho = make_switch(e, eps).unwrap();
        let check = dual_bound_check(&c, &rho, scale, k1, k2, 1);
        assert!(check.holds, "{check:?}");
    }
}

#[test]
fn synthetic_profile_integrability_threshold() {
    let d = 2;
    let cutoffs = [50.0, 100.0, 200.0, 400.0];
    let fine = FtFunctional::with_exponent(1.0, d, 1.0 / d as f64).unwrap();
    let conv = synthetic_singularity_trend(&fine, 4.0, &cutoffs).unwrap();
    let last_step = conv[3] - conv[2];
    assert!(last_step.abs() <= 1e-12 * conv[3].abs().max(1e-300), "{conv:?}");

    let steep = FtFunctional::with_exponent(1.0, d, 1.5 * 2.0 / d as f64).unwrap();
    let div = synthetic_singularity_trend(&steep, 4.0, &cutoffs).unwrap();
    let steps: Vec<f64> = div.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(steps.windows(2).all(|w| w[1] > w[0]), "{div:?}");
    assert!(div[3] > 1e6 * div[1], "{div:?}");
}
