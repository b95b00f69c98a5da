//! Compensated summation, moment statistics and log-log regression helpers.

/// Neumaier-compensated sum. Used for every Monte Carlo reduction so that
/// results do not depend on how the per-path work was scheduled.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    compensated_sum(xs.iter().copied()) / xs.len() as f64
}

/// Sample variance (denominator n-1).
pub fn variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    compensated_sum(xs.iter().map(|x| (x - m) * (x - m))) / (n - 1) as f64
}

/// Standard error of the sample mean.
pub fn std_error(xs: &[f64]) -> f64 {
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Empirical `E|X|^p` together with the Monte Carlo standard error of that
/// estimate, computed from the sample variance of `|X|^p`.
pub fn abs_moment_with_se(xs: &[f64], p: f64) -> (f64, f64) {
    let pows: Vec<f64> = xs.iter().map(|x| x.abs().powf(p)).collect();
    (mean(&pows), std_error(&pows))
}

/// Empirical variance of X and the standard error of the variance estimate
/// (delta method on the second and fourth central moments).
pub fn variance_with_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = mean(xs);
    let m2 = compensated_sum(xs.iter().map(|x| (x - m).powi(2))) / n;
    let m4 = compensated_sum(xs.iter().map(|x| (x - m).powi(4))) / n;
    let var_of_var = (m4 - m2 * m2).max(0.0) / n;
    (m2 * n / (n - 1.0), var_of_var.sqrt())
}

/// Empirical characteristic function `(1/N) Σ exp(i λ x_k)` as `(re, im)`.
pub fn empirical_cf(xs: &[f64], lambda: f64) -> (f64, f64) {
    let n = xs.len() as f64;
    let re = compensated_sum(xs.iter().map(|x| (lambda * x).cos())) / n;
    let im = compensated_sum(xs.iter().map(|x| (lambda * x).sin())) / n;
    (re, im)
}

/// Ordinary least squares fit `y = slope * x + intercept`.
/// Returns `(slope, intercept, slope_std_error)`.
pub fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    assert!(n >= 2.0, "need at least two points");
    let mx = mean(xs);
    let my = mean(ys);
    let sxx = compensated_sum(xs.iter().map(|x| (x - mx) * (x - mx)));
    let sxy = compensated_sum(xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let dof = (n - 2.0).max(1.0);
    let ss_res = compensated_sum(
        xs.iter()
            .zip(ys)
            .map(|(x, y)| (y - slope * x - intercept).powi(2)),
    );
    let se = (ss_res / dof / sxx).sqrt();
    (slope, intercept, se)
}

/// Log-log variogram regression over an ensemble of equally sampled paths.
///
/// For each lag `h` (in grid steps) the structure function
/// `D(h) = mean over paths and t of (x_{t+h} - x_t)^2` is accumulated; the
/// OLS slope of `log D` against `log h` divided by two estimates the Hölder
/// (Hurst) exponent.
pub fn variogram_exponent(paths: &[&[f64]], lags: &[usize], dt: f64) -> (f64, f64) {
    assert!(lags.len() >= 2, "need at least two lags");
    let mut log_h = Vec::with_capacity(lags.len());
    let mut log_d = Vec::with_capacity(lags.len());
    for &lag in lags {
        let mut acc = 0.0;
        let mut count = 0u64;
        for p in paths {
            assert!(lag < p.len(), "lag {lag} exceeds path length {}", p.len());
            for i in 0..p.len() - lag {
                let d = p[i + lag] - p[i];
                acc += d * d;
                count += 1;
            }
        }
        let d = acc / count as f64;
        log_h.push((lag as f64 * dt).ln());
        log_d.push(d.ln());
    }
    let (slope, _, se) = ols(&log_h, &log_d);
    (slope / 2.0, se / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_beats_naive_on_cancellation() {
        let xs = vec![1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(xs), 2.0);
    }

    #[test]
    fn ols_recovers_exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let (slope, intercept, se) = ols(&xs, &ys);
        assert!((slope - 2.0).abs() < 1e-12);
        assert!((intercept - 1.0).abs() < 1e-12);
        assert!(se < 1e-12);
    }

    #[test]
    fn variogram_of_linear_ramp_is_one() {
        let path: Vec<f64> = (0..1025).map(|i| i as f64 * 1e-3).collect();
        let refs = [path.as_slice()];
        let (h, _) = variogram_exponent(&refs, &[1, 2, 4, 8, 16], 1e-3);
        assert!((h - 1.0).abs() < 1e-10);
    }
}
