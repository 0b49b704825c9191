//! Binomial helpers for reporting rates.

/// Wilson score interval for `successes / trials` at normal quantile `z`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// `P[Bin(n, p) <= k]`, summed in log space.
pub fn binomial_cdf(k: usize, n: usize, p: f64) -> f64 {
    if k >= n {
        return 1.0;
    }
    if p <= 0.0 {
        return 1.0;
    }
    if p >= 1.0 {
        return 0.0;
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut log_binom = 0.0;
    let mut total = 0.0;
    for i in 0..=k {
        if i > 0 {
            log_binom += ((n - i + 1) as f64).ln() - (i as f64).ln();
        }
        total += (log_binom + i as f64 * lp + (n - i) as f64 * lq).exp();
    }
    total.min(1.0)
}

/// Success probabilities `(yes, no)` of the midpoint collision rule with
/// two samples: a single pair collides with probability `1/|F|` under YES
/// and `2/|F|` under NO, and the rule answers NO exactly on a collision
/// once `|F| >= 2`.
pub fn two_sample_success(family_size: usize) -> (f64, f64) {
    let f = family_size as f64;
    (1.0 - 1.0 / f, (2.0 / f).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_point_estimate() {
        let (lo, hi) = wilson_interval(140, 200, 1.96);
        assert!(lo < 0.7 && 0.7 < hi);
        assert!((hi - lo) < 0.14);
        assert_eq!(wilson_interval(0, 0, 1.96), (0.0, 1.0));
    }

    #[test]
    fn binomial_cdf_matches_direct_sum() {
        // Bin(10, 0.3): P[X <= 2] = 0.3827827864
        assert!((binomial_cdf(2, 10, 0.3) - 0.382_782_786_4).abs() < 1e-9);
        assert_eq!(binomial_cdf(10, 10, 0.3), 1.0);
    }
}
