//! Small statistics helpers shared across estimators and checks.

/// Sample mean; 0 for an empty slice.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance (n - 1 denominator); 0 below two samples.
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Standard error of the sample mean.
pub fn se_of_mean(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return f64::INFINITY;
    }
    (sample_variance(xs) / xs.len() as f64).sqrt()
}

/// Error function, Abramowitz & Stegun 7.1.26 (absolute error < 1.5e-7).
pub fn erf(x: f64) -> f64 {
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    sign * (1.0 - poly * (-x * x).exp())
}

/// Standard normal CDF.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// Kolmogorov-Smirnov distance between the empirical law of `sample`
/// and the standard normal. Sorts a copy.
pub fn ks_distance_std_normal(sample: &[f64]) -> f64 {
    assert!(!sample.is_empty());
    let mut xs = sample.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in KS sample"));
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let cdf = std_normal_cdf(x);
        let hi = (i as f64 + 1.0) / n - cdf;
        let lo = cdf - i as f64 / n;
        d = d.max(hi).max(lo);
    }
    d
}

/// Chi-square survival function via the Wilson-Hilferty normal
/// approximation; adequate for pass/fail thresholds far from machine
/// precision.
pub fn chi_square_sf(x: f64, df: f64) -> f64 {
    assert!(df > 0.0);
    if x <= 0.0 {
        return 1.0;
    }
    let z = ((x / df).powf(1.0 / 3.0) - (1.0 - 2.0 / (9.0 * df))) / (2.0 / (9.0 * df)).sqrt();
    1.0 - std_normal_cdf(z)
}

/// Local quadratic interpolation through a uniformly spaced table.
/// `xs` must be ascending and uniform; queries are clamped to the table
/// range.
pub fn quadratic_interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    assert!(xs.len() == ys.len() && xs.len() >= 3);
    let h = xs[1] - xs[0];
    let pos = ((x - xs[0]) / h).round() as isize;
    let c = pos.clamp(1, xs.len() as isize - 2) as usize;
    let (x0, x1, x2) = (xs[c - 1], xs[c], xs[c + 1]);
    let (y0, y1, y2) = (ys[c - 1], ys[c], ys[c + 1]);
    let l0 = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
    let l1 = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
    let l2 = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
    y0 * l0 + y1 * l1 + y2 * l2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_cdf_reference_points() {
        assert!((std_normal_cdf(0.0) - 0.5).abs() < 1e-7);
        assert!((std_normal_cdf(1.96) - 0.975).abs() < 3e-4);
        assert!((std_normal_cdf(-3.0) - 0.00135).abs() < 1e-4);
    }

    #[test]
    fn ks_of_exact_normal_quantiles_is_small() {
        // Plug the exact quantile grid in: KS should be ~1/(2n).
        let n = 1000;
        let mut xs = Vec::with_capacity(n);
        for i in 0..n {
            let p = (i as f64 + 0.5) / n as f64;
            // crude quantile via bisection on the cdf
            let (mut lo, mut hi) = (-8.0, 8.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if std_normal_cdf(mid) < p {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            xs.push(0.5 * (lo + hi));
        }
        assert!(ks_distance_std_normal(&xs) < 1.0 / n as f64 + 1e-4);
    }

    #[test]
    fn chi_square_sf_reference() {
        // df=2: sf(x) = exp(-x/2) exactly; Wilson-Hilferty is approximate.
        let exact = (-13.8155f64 / 2.0).exp(); // ~0.001
        let approx = chi_square_sf(13.8155, 2.0);
        assert!((approx - exact).abs() < 5e-4, "approx {approx} vs exact {exact}");
    }

    #[test]
    fn quadratic_interp_reproduces_parabola() {
        let xs: Vec<f64> = (0..11).map(|i| i as f64 * 0.5).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x * x - 3.0 * x + 1.0).collect();
        for q in [0.1, 0.77, 2.5, 4.9] {
            let got = quadratic_interp(&xs, &ys, q);
            let want = 2.0 * q * q - 3.0 * q + 1.0;
            assert!((got - want).abs() < 1e-12);
        }
    }
}
