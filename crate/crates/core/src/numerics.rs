//! Small numerical kernels shared by the spectral and verification modules.

/// Neumaier-compensated accumulator. Summation order is the call order, so a
/// fixed iteration order gives bit-identical results.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// Tolerances for [`adaptive_simpson`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureTolerance {
    pub relative: f64,
    pub absolute: f64,
    pub max_depth: u32,
}

impl Default for QuadratureTolerance {
    fn default() -> Self {
        Self {
            relative: 1e-10,
            absolute: 1e-14,
            max_depth: 48,
        }
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` with Richardson correction.
///
/// The tolerance budget is split between halves; a panel is accepted once its
/// two-level estimates agree to `max(absolute, relative * |whole|)`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: QuadratureTolerance) -> f64 {
    if a == b {
        return 0.0;
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    // A coarse composite pass seeds the relative tolerance so that integrands
    // concentrated in a small part of the range still get resolved.
    let panels = 16;
    let width = (hi - lo) / panels as f64;
    let mut pieces = Vec::with_capacity(panels);
    for i in 0..panels {
        let x0 = lo + width * i as f64;
        let x1 = if i + 1 == panels { hi } else { x0 + width };
        let fa = f(x0);
        let fb = f(x1);
        let m = 0.5 * (x0 + x1);
        let fm = f(m);
        let whole = (x1 - x0) / 6.0 * (fa + 4.0 * fm + fb);
        pieces.push((x0, x1, fa, fm, fb, whole));
    }
    let scale: f64 = pieces.iter().map(|p| p.5.abs()).sum();
    let eps = (tol.relative * scale).max(tol.absolute) / panels as f64;
    let total = compensated_sum(pieces.into_iter().map(|(x0, x1, fa, fm, fb, whole)| {
        simpson_step(&f, x0, x1, fa, fm, fb, whole, eps, tol.max_depth)
    }));
    sign * total
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps || m <= a || m >= b {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares line through `(x, y)` pairs. Needs at least two distinct x.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = compensated_sum(xs.iter().copied()) / nf;
    let my = compensated_sum(ys.iter().copied()) / nf;
    let sxx = compensated_sum(xs.iter().map(|x| (x - mx) * (x - mx)));
    if sxx <= 0.0 {
        return None;
    }
    let sxy = compensated_sum(xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)));
    let syy = compensated_sum(ys.iter().map(|y| (y - my) * (y - my)));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let sse = compensated_sum(
            xs.iter()
                .zip(ys)
                .map(|(x, y)| (y - intercept - slope * x).powi(2)),
        );
        (1.0 - sse / syy).clamp(0.0, 1.0)
    };
    Some(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Golden-section maximisation of a unimodal function on `[lo, hi]`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while (hi - lo).abs() > tol * (1.0 + lo.abs().max(hi.abs())) {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Median of a non-empty slice (average of middle pair for even length).
pub fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let values = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(values), 2.0);
    }

    #[test]
    fn simpson_integrates_polynomials_and_exp() {
        let tol = QuadratureTolerance::default();
        let cubic = adaptive_simpson(|x| x * x * x, 0.0, 2.0, tol);
        assert!((cubic - 4.0).abs() < 1e-12);
        let e = adaptive_simpson(f64::exp, 0.0, 1.0, tol);
        assert!((e - (std::f64::consts::E - 1.0)).abs() < 1e-11);
        let reversed = adaptive_simpson(f64::exp, 1.0, 0.0, tol);
        assert!((reversed + e).abs() < 1e-14);
    }

    #[test]
    fn simpson_handles_sqrt_singularity() {
        let v = adaptive_simpson(f64::sqrt, 0.0, 1.0, QuadratureTolerance::default());
        assert!((v - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn line_fit_exact_data() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x).collect();
        let fit = fit_line(&xs, &ys).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-14);
        assert!((fit.intercept - 3.0).abs() < 1e-14);
        assert_eq!(fit.r_squared, 1.0);
        assert!(fit_line(&[1.0, 1.0], &[0.0, 1.0]).is_none());
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 1.25).powi(2) + 3.0, 0.0, 4.0, 1e-12);
        assert!((x - 1.25).abs() < 1e-6);
        assert!((fx - 3.0).abs() < 1e-10);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
