//! Small statistics toolbox shared by the samplers and their tests:
//! normal CDF, Kolmogorov-Smirnov distances, moments and integrated
//! autocorrelation time.

/// Error function, accurate to ~1e-14 over the real line.
///
/// Maclaurin series for |x| <= 2.5, Lentz continued fraction for the
/// complementary function beyond.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x <= 2.5 {
        // erf(x) = 2/sqrt(pi) * sum_k (-1)^k x^(2k+1) / (k! (2k+1))
        let mut term = x;
        let mut sum = x;
        let x2 = x * x;
        for k in 1..200 {
            term *= -x2 / k as f64;
            let add = term / (2 * k + 1) as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        2.0 / std::f64::consts::PI.sqrt() * sum
    } else {
        1.0 - erfc_large(x)
    }
}

/// Complementary error function for x > 2, via the Legendre continued
/// fraction  erfc(x) sqrt(pi) e^{x^2} = 1/(x+ (1/2)/(x+ 1/(x+ (3/2)/(x+ ...)))),
/// evaluated with modified Lentz.
fn erfc_large(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..400 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        if d == 0.0 {
            d = tiny;
        }
        c = x + a / c;
        if c == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / std::f64::consts::PI.sqrt() / f
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

/// Sample mean and unbiased variance.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var)
}

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `samples` (need not be sorted) and the continuous CDF `cdf`.
///
/// Ties are handled by comparing the CDF against the empirical CDF just
/// before and just after each distinct value.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let f = cdf(x);
        let lo = i as f64 / n; // empirical CDF just below x
        let hi = j as f64 / n; // empirical CDF at x
        d = d.max((f - lo).abs()).max((hi - f).abs());
        i = j;
    }
    d
}

/// Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(|p, q| p.partial_cmp(q).unwrap());
    xb.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let mut i = 0;
    let mut j = 0;
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Integrated autocorrelation time of a scalar chain, with Sokal's adaptive
/// truncation (sum lags until lag > 5 * tau_est). Returns at least 1.
pub fn integrated_autocorrelation_time(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 8 {
        return 1.0;
    }
    let (mean, var) = mean_var(xs);
    if var <= 0.0 {
        return 1.0;
    }
    let mut tau = 1.0;
    for lag in 1..n / 4 {
        let mut c = 0.0;
        for i in 0..n - lag {
            c += (xs[i] - mean) * (xs[i + lag] - mean);
        }
        c /= (n - lag) as f64 * var;
        if c < 0.0 {
            break;
        }
        tau += 2.0 * c;
        if lag as f64 > 5.0 * tau {
            break;
        }
    }
    tau.max(1.0)
}

/// z-score style check for a multinomial cell: |observed - n p| against
/// `sigmas` standard deviations of Binomial(n, p).
pub fn within_binomial_sigma(observed: u64, n: u64, p: f64, sigmas: f64) -> bool {
    let mean = n as f64 * p;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    (observed as f64 - mean).abs() <= sigmas * sd.max(1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erf_reference_values() {
        // Abramowitz-Stegun / widely tabulated values.
        assert!((erf(0.0)).abs() < 1e-16);
        assert!((erf(0.5) - 0.5204998778130465).abs() < 1e-13);
        assert!((erf(1.0) - 0.8427007929497149).abs() < 1e-13);
        assert!((erf(2.0) - 0.9953222650189527).abs() < 1e-13);
        assert!((erf(3.0) - 0.9999779095030014).abs() < 1e-13);
        assert!((erf(-1.0) + 0.8427007929497149).abs() < 1e-13);
    }

    #[test]
    fn normal_cdf_symmetry_and_tails() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        for &x in &[0.3, 1.0, 2.5, 4.0] {
            assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() < 1e-13);
        }
        assert!((normal_cdf(1.959963984540054) - 0.975).abs() < 1e-12);
    }

    #[test]
    fn ks_of_exact_uniform_grid() {
        // points at (i - 1/2)/n have KS distance 1/(2n) against U(0,1)
        let n = 100;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_distance(&xs, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.5 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn two_sample_ks_detects_shifts() {
        let mut rng = crate::rng::CounterRng::new(3, 3);
        let a: Vec<f64> = (0..4000).map(|_| rng.uniform()).collect();
        let b: Vec<f64> = (0..4000).map(|_| rng.uniform()).collect();
        assert!(ks_two_sample(&a, &b) < 0.05);
        let shifted: Vec<f64> = a.iter().map(|x| x + 0.3).collect();
        assert!(ks_two_sample(&a, &shifted) > 0.25);
        assert_eq!(ks_two_sample(&a, &a), 0.0);
    }

    #[test]
    fn iat_of_white_noise_is_near_one() {
        let mut rng = crate::rng::CounterRng::new(5, 0);
        let xs: Vec<f64> = (0..20_000).map(|_| rng.uniform()).collect();
        let tau = integrated_autocorrelation_time(&xs);
        assert!(tau < 1.2, "tau = {tau}");
    }
}
