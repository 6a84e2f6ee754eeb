//! Monte Carlo estimates with standard errors, and small statistics helpers.

use serde::{Deserialize, Serialize};

/// Pairwise (cascade) summation; error grows like log n instead of n.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 64;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    pairwise_sum(xs) / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    let sq: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    pairwise_sum(&sq) / (n - 1) as f64
}

/// Monte Carlo point estimate with its standard error and a 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_paths: usize,
    pub seed: u64,
}

impl Estimate {
    pub fn new(value: f64, std_error: f64, n_paths: usize, seed: u64) -> Self {
        Self {
            value,
            std_error,
            ci_low: value - 1.96 * std_error,
            ci_high: value + 1.96 * std_error,
            n_paths,
            seed,
        }
    }

    /// Sample mean of `xs`.
    pub fn mean_of(xs: &[f64], seed: u64) -> Self {
        let n = xs.len();
        Self::new(mean(xs), (variance(xs) / n as f64).sqrt(), n, seed)
    }

    /// Sample variance of `xs`, with the delta-method standard error
    /// `sqrt((m4 - s^4) / n)`.
    pub fn variance_of(xs: &[f64], seed: u64) -> Self {
        let m = mean(xs);
        let phi: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
        let n = xs.len();
        let v = variance(xs);
        Self::new(v, (variance(&phi) / n as f64).sqrt(), n, seed)
    }

    /// Sample covariance of paired samples, SE from the influence values
    /// `(x - mx)(y - my)`.
    pub fn covariance_of(xs: &[f64], ys: &[f64], seed: u64) -> Self {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let (mx, my) = (mean(xs), mean(ys));
        let phi: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
        let c = pairwise_sum(&phi) / (n - 1) as f64;
        Self::new(c, (variance(&phi) / n as f64).sqrt(), n, seed)
    }

    /// Fraction of `true` flags with its binomial standard error.
    pub fn proportion(hits: usize, n: usize, seed: u64) -> Self {
        let p = hits as f64 / n as f64;
        Self::new(p, (p * (1.0 - p) / n as f64).sqrt(), n, seed)
    }

    /// `|value - target| <= k * std_error`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.std_error
    }

    /// Distance to `target` in standard errors.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.value - target) / self.std_error
    }
}

/// Kolmogorov-Smirnov distance between the empirical law of `samples` and
/// `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic p-value of the two-sample KS statistic `d`.
pub fn ks_two_sample_pvalue(d: f64, na: usize, nb: usize) -> f64 {
    let ne = (na * nb) as f64 / (na + nb) as f64;
    let lam = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    if lam < 0.2 {
        // the alternating series does not converge here; Q(0.2) = 1 - 1e-20
        return 1.0;
    }
    let mut p = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = 2.0 * (-2.0 * kf * kf * lam * lam).exp();
        p += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}

/// Ordinary least-squares slope and intercept of `y` on `x`.
pub fn ols(x: &[f64], y: &[f64]) -> (f64, f64) {
    let (mx, my) = (mean(x), mean(y));
    let sxy: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect();
    let sxx: Vec<f64> = x.iter().map(|a| (a - mx) * (a - mx)).collect();
    let slope = pairwise_sum(&sxy) / pairwise_sum(&sxx);
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_inputs() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64 * 0.5).collect();
        assert_eq!(pairwise_sum(&xs), 249_750.0);
    }

    #[test]
    fn estimate_basics() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let e = Estimate::mean_of(&xs, 9);
        assert_eq!(e.value, 2.5);
        assert!((e.std_error - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert!(e.within(2.6, 1.0));
        assert!((variance(&xs) - 5.0 / 3.0).abs() < 1e-15);
        let c = Estimate::covariance_of(&xs, &xs, 0);
        assert!((c.value - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ks_of_uniform_grid() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        assert!((ks_statistic(&xs, |x| x) - 0.005).abs() < 1e-12);
        assert_eq!(ks_two_sample(&xs, &xs), 0.0);
        assert!(ks_two_sample_pvalue(0.0, 100, 100) > 0.99);
        assert!(ks_two_sample_pvalue(0.5, 100, 100) < 1e-6);
    }

    #[test]
    fn ols_exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 0.5 * v).collect();
        let (b, a) = ols(&x, &y);
        assert!((b + 0.5).abs() < 1e-15 && (a - 2.0).abs() < 1e-15);
    }
}
