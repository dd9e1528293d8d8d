//! Statistical primitives for the verification harness: log-domain
//! binomial intervals, Kolmogorov-Smirnov distances, correlation, and
//! weighted least squares.

use statrs::distribution::{Beta, ContinuousCDF};

/// Log-domain 95% Clopper-Pearson interval for hits out of n trials.
/// Returns (ln low, ln high). Zero hits yield (-inf, ln(1 - (alpha/2)^(1/n))),
/// the exact upper bound behind the rule-of-three approximation; n hits
/// yield (ln((alpha/2)^(1/n)), 0).
pub fn clopper_pearson_log(hits: u64, n: u64) -> (f64, f64) {
    assert!(n >= 1, "need at least one trial");
    assert!(hits <= n, "hits cannot exceed trials");
    let alpha = 0.05_f64;
    let nf = n as f64;
    let half_log = (alpha / 2.0).ln();
    if hits == 0 {
        let hi = f64::ln_1p(-(half_log / nf).exp());
        return (f64::NEG_INFINITY, hi);
    }
    if hits == n {
        return (half_log / nf, 0.0);
    }
    let h = hits as f64;
    let lo = beta_quantile(h, nf - h + 1.0, alpha / 2.0).ln();
    let hi = beta_quantile(h + 1.0, nf - h, 1.0 - alpha / 2.0).ln();
    (lo, hi)
}

/// Beta quantile by bisection on the regularized incomplete beta. The
/// trait-provided inverse_cdf stops on a coarse absolute grid, which at
/// large shape parameters is wider than the interval being computed.
fn beta_quantile(a: f64, b: f64, q: f64) -> f64 {
    let dist = Beta::new(a, b).expect("valid Beta parameters");
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if dist.cdf(mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// One-sample Kolmogorov-Smirnov statistic against a reference CDF.
/// Sorts a copy of the data.
pub fn ks_one_sample<F: Fn(f64) -> f64>(data: &[f64], cdf: F) -> f64 {
    assert!(!data.is_empty());
    let mut xs = data.to_vec();
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max((f - (i + 1) as f64 / n).abs());
    }
    d
}

/// Two-sample Kolmogorov-Smirnov statistic. Sorts copies of both samples.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_unstable_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_unstable_by(|p, q| p.partial_cmp(q).unwrap());
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0_f64;
    while i < xs.len() && j < ys.len() {
        let x = xs[i];
        let y = ys[j];
        if x <= y {
            i += 1;
        }
        if y <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d.max(1.0 - i as f64 / na).max(1.0 - j as f64 / nb)
}

/// Sample Pearson correlation coefficient.
pub fn pearson_correlation(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2);
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    sxy / (sxx * syy).sqrt()
}

/// Weighted least-squares slope of y against x.
pub fn weighted_slope(x: &[f64], y: &[f64], w: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    assert_eq!(x.len(), w.len());
    assert!(x.len() >= 2);
    let sw: f64 = w.iter().sum();
    let mx = x.iter().zip(w).map(|(a, c)| a * c).sum::<f64>() / sw;
    let my = y.iter().zip(w).map(|(a, c)| a * c).sum::<f64>() / sw;
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&a, &b), &c) in x.iter().zip(y).zip(w) {
        num += c * (a - mx) * (b - my);
        den += c * (a - mx) * (a - mx);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clopper_pearson_zero_hits_matches_rule_of_three_scale() {
        let (lo, hi) = clopper_pearson_log(0, 1000);
        assert!(lo.is_infinite() && lo < 0.0);
        // exact bound 1 - 0.025^(1/n); the classical 3/n is an upper proxy
        let exact = 1.0 - 0.025_f64.powf(1.0 / 1000.0);
        assert!((hi.exp() - exact).abs() < 1e-12);
        assert!(hi.exp() < 3.7 / 1000.0);
    }

    #[test]
    fn clopper_pearson_interval_brackets_the_point_estimate() {
        let (lo, hi) = clopper_pearson_log(50, 1000);
        let point = (50.0 / 1000.0_f64).ln();
        assert!(lo < point && point < hi, "({lo}, {hi}) vs {point}");
        // interval width shrinks with n
        let (lo2, hi2) = clopper_pearson_log(500, 10000);
        assert!(hi2 - lo2 < hi - lo);
    }

    #[test]
    fn clopper_pearson_matches_reference_quantiles() {
        // reference values from an independent incomplete-beta implementation
        let (lo, hi) = clopper_pearson_log(50, 1000);
        assert!((lo.exp() - 0.037335398).abs() < 1e-7, "lo {}", lo.exp());
        assert!((hi.exp() - 0.065390488).abs() < 1e-7, "hi {}", hi.exp());
        // large shape parameters, where interval width is ~1e-4
        let (lo, hi) = clopper_pearson_log(39558, 10_000_000);
        assert!((lo.exp() - 0.003916989).abs() < 1e-8, "lo {}", lo.exp());
        assert!((hi.exp() - 0.003994899).abs() < 1e-8, "hi {}", hi.exp());
    }

    #[test]
    fn clopper_pearson_full_hits() {
        let (lo, hi) = clopper_pearson_log(100, 100);
        assert_eq!(hi, 0.0);
        assert!((lo - (0.025_f64.ln() / 100.0)).abs() < 1e-12);
    }

    #[test]
    fn ks_one_sample_detects_uniform_vs_shifted() {
        let n = 2000;
        let data: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d_uniform = ks_one_sample(&data, |x| x.clamp(0.0, 1.0));
        assert!(d_uniform < 1e-3, "near-perfect uniform sample: {d_uniform}");
        let d_skew = ks_one_sample(&data, |x| x.clamp(0.0, 1.0).powi(2));
        assert!(d_skew > 0.2, "should flag the wrong CDF: {d_skew}");
    }

    #[test]
    fn ks_two_sample_identical_and_disjoint() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        let b: Vec<f64> = (0..100).map(|i| 1000.0 + i as f64).collect();
        assert_eq!(ks_two_sample(&a, &b), 1.0);
    }

    #[test]
    fn pearson_correlation_signs() {
        let x: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!((pearson_correlation(&x, &y) - 1.0).abs() < 1e-12);
        let z: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson_correlation(&x, &z) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_slope_recovers_line_and_honors_weights() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let w = [1.0, 1.0, 1.0, 1.0];
        assert!((weighted_slope(&x, &y, &w) - 2.0).abs() < 1e-12);
        // an outlier with zero weight must not distort the fit
        let y2 = [1.0, 3.0, 5.0, 100.0];
        let w2 = [1.0, 1.0, 1.0, 0.0];
        assert!((weighted_slope(&x, &y2, &w2) - 2.0).abs() < 1e-12);
    }
}
