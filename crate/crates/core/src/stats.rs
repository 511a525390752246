//! Small statistics helpers: Wilson intervals, pooled standard errors and
//! Spearman rank correlation.

use statrs::distribution::{ContinuousCDF, StudentsT};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

/// Standard error of `p1 - p2` under the pooled proportion.
pub fn pooled_standard_error(p1: f64, n1: u64, p2: f64, n2: u64) -> f64 {
    let (a, b) = (n1 as f64, n2 as f64);
    let pooled = (p1 * a + p2 * b) / (a + b);
    (pooled * (1.0 - pooled) * (1.0 / a + 1.0 / b)).sqrt()
}

/// Ranks starting at 1, ties receive their average rank.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spearman {
    pub rho: f64,
    /// One-sided p-value for `rho < 0` (t approximation, `n - 2` d.o.f.).
    pub p_decreasing: f64,
    /// One-sided p-value for `rho > 0`.
    pub p_increasing: f64,
}

/// Spearman correlation as the Pearson correlation of average ranks.
/// Returns `None` with fewer than three points or a constant series.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<Spearman> {
    if x.len() != y.len() || x.len() < 3 {
        return None;
    }
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    let rho = sxy / (sxx * syy).sqrt();
    let df = n - 2.0;
    let (p_dec, p_inc) = if rho.abs() >= 1.0 {
        if rho > 0.0 { (1.0, 0.0) } else { (0.0, 1.0) }
    } else {
        let t = rho * (df / (1.0 - rho * rho)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
        (dist.cdf(t), 1.0 - dist.cdf(t))
    };
    Some(Spearman {
        rho,
        p_decreasing: p_dec,
        p_increasing: p_inc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_known_values() {
        // 8 of 10 at 95%: (0.4902, 0.9433)
        let (lo, hi) = wilson_interval(8, 10, Z_95);
        assert!((lo - 0.4902).abs() < 1e-4 && (hi - 0.9433).abs() < 1e-4);
        let (lo, hi) = wilson_interval(1, 1, Z_95);
        assert!(lo < 1.0 && hi == 1.0 && lo > 0.0);
        let (lo, hi) = wilson_interval(0, 1, Z_95);
        assert!(lo == 0.0 && hi > 0.0 && hi < 1.0);
    }

    #[test]
    fn ranks_with_ties() {
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn spearman_monotone() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| -v * v).collect();
        let s = spearman(&x, &y).unwrap();
        assert!((s.rho + 1.0).abs() < 1e-12);
        assert_eq!(s.p_decreasing, 0.0);
        assert!(spearman(&x, &[1.0; 10]).is_none());
    }

    #[test]
    fn spearman_t_approximation() {
        // rho = 0.5 with n = 12: t = 0.5 * sqrt(10 / 0.75) = 1.8257, one-sided p ~ 0.049
        let x: Vec<f64> = (0..12).map(f64::from).collect();
        let y = [2.0, 0.0, 5.0, 1.0, 9.0, 3.0, 4.0, 11.0, 6.0, 7.0, 10.0, 8.0];
        let s = spearman(&x, &y).unwrap();
        let t = s.rho * (10.0 / (1.0 - s.rho * s.rho)).sqrt();
        let d = StudentsT::new(0.0, 1.0, 10.0).unwrap();
        assert!((s.p_increasing - (1.0 - d.cdf(t))).abs() < 1e-12);
        assert!(s.rho > 0.0 && s.p_increasing < 0.05);
    }
}
