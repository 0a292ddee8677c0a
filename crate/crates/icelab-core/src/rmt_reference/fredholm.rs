//! Tracy-Widom F2 via a Nystrom discretization of the Airy-kernel Fredholm
//! determinant, its moments, and Laplace transforms of the Airy point
//! process correlations.

use super::airy::{airy_clamped, airy_kernel};
use crate::error::{Error, Result};
use crate::linalg;

/// Kernel values on a node set, built from cached Ai / Ai' evaluations so a
/// full m x m matrix costs only m Airy calls.
struct KernelTable {
    xs: Vec<f64>,
    ai: Vec<f64>,
    aip: Vec<f64>,
}

impl KernelTable {
    fn new(xs: Vec<f64>) -> Self {
        let vals: Vec<(f64, f64)> = xs.iter().map(|&x| airy_clamped(x)).collect();
        KernelTable {
            xs,
            ai: vals.iter().map(|v| v.0).collect(),
            aip: vals.iter().map(|v| v.1).collect(),
        }
    }

    #[inline]
    fn k(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.aip[i] * self.aip[i] - self.xs[i] * self.ai[i] * self.ai[i]
        } else {
            (self.ai[i] * self.aip[j] - self.ai[j] * self.aip[i]) / (self.xs[i] - self.xs[j])
        }
    }

    /// kernel across two distinct tables
    #[inline]
    fn k_cross(&self, i: usize, other: &KernelTable, j: usize) -> f64 {
        let dx = self.xs[i] - other.xs[j];
        if dx.abs() < 1e-7 {
            let m = 0.5 * (self.xs[i] + other.xs[j]);
            let (ai, aip) = airy_clamped(m);
            aip * aip - m * ai * ai
        } else {
            (self.ai[i] * other.aip[j] - other.ai[j] * self.aip[i]) / dx
        }
    }
}

/// F2(s) = det(I - K_Airy) on L^2(s, inf), discretized with an m-point
/// Gauss-Legendre rule pushed forward by x = s + tan(pi (xi + 1) / 4)
/// (the tangent map soaks up the superexponential kernel decay).
pub fn tracy_widom_f2(s: f64, m: usize) -> Result<f64> {
    if s < -10.0 {
        return Err(Error::Range { value: s, lo: -10.0, hi: f64::INFINITY });
    }
    if m < 4 {
        return Err(Error::Domain("quadrature order too small".into()));
    }
    let (xi, wi) = linalg::gauss_legendre(m);
    let quarter_pi = std::f64::consts::FRAC_PI_4;
    let mut xs = Vec::with_capacity(m);
    let mut sqrt_w = Vec::with_capacity(m);
    for i in 0..m {
        let angle = quarter_pi * (xi[i] + 1.0);
        let x = s + angle.tan();
        let sec = 1.0 / angle.cos();
        let dxdxi = quarter_pi * sec * sec;
        xs.push(x);
        sqrt_w.push((wi[i] * dxdxi).sqrt());
    }
    let table = KernelTable::new(xs);
    let mut a = vec![0.0f64; m * m];
    for i in 0..m {
        for j in 0..m {
            let val = sqrt_w[i] * table.k(i, j) * sqrt_w[j];
            a[i * m + j] = if i == j { 1.0 - val } else { -val };
        }
    }
    Ok(linalg::det_real(&mut a, m))
}

/// F2 with an automatic resolution check: the value at order m and 2m must
/// agree to `tol`, else a non-convergence error.
pub fn tracy_widom_f2_checked(s: f64, m: usize, tol: f64) -> Result<f64> {
    let coarse = tracy_widom_f2(s, m)?;
    let fine = tracy_widom_f2(s, 2 * m)?;
    let delta = (fine - coarse).abs();
    if delta > tol {
        return Err(Error::NonConvergence { delta });
    }
    Ok(fine)
}

/// Mean and variance of the F2 distribution by integrating the CDF
/// (integration by parts, so no numerical differentiation), together with a
/// double-resolution error estimate. Returns ((mean, var), err_estimate).
pub fn tw_mean_variance(m: usize, step: f64) -> Result<((f64, f64), f64)> {
    let coarse = tw_moments_once(m, step)?;
    let fine = tw_moments_once(2 * m, step / 2.0)?;
    let err = (coarse.0 - fine.0).abs().max((coarse.1 - fine.1).abs());
    Ok((fine, err))
}

fn tw_moments_once(m: usize, step: f64) -> Result<(f64, f64)> {
    // E[X]   = int_0^inf (1 - F) - int_-inf^0 F
    // E[X^2] = int_0^inf 2x (1 - F) dx - int_-inf^0 2x F dx
    // integrated piecewise so the x = 0 seam is always a panel boundary
    let simpson_piece = |lo: f64, hi: f64, g: &dyn Fn(f64, f64) -> f64| -> Result<f64> {
        let n = ((hi - lo) / step).round() as usize;
        let n = if n % 2 == 0 { n.max(2) } else { n + 1 };
        let h = (hi - lo) / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let x = lo + i as f64 * h;
            let f = tracy_widom_f2(x, m)?;
            let coeff = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += coeff * g(x, f);
        }
        Ok(acc * h / 3.0)
    };
    let mean = simpson_piece(0.0, 8.0, &|_, f| 1.0 - f)?
        - simpson_piece(-10.0, 0.0, &|_, f| f)?;
    let second = simpson_piece(0.0, 8.0, &|x, f| 2.0 * x * (1.0 - f))?
        - simpson_piece(-10.0, 0.0, &|x, f| 2.0 * x * f)?;
    Ok((mean, second - mean * mean))
}

/// One-point density of the Airy process rho_1(x) = K(x, x).
pub fn airy_density(x: f64) -> f64 {
    airy_kernel(x, x)
}

fn panel_integral(lo: f64, hi: f64, panel_width: f64, nodes: usize, f: &dyn Fn(f64) -> f64) -> f64 {
    let panels = ((hi - lo) / panel_width).ceil().max(1.0) as usize;
    let w = (hi - lo) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let (xs, ws) = linalg::gauss_legendre_on(nodes, lo + p as f64 * w, lo + (p + 1) as f64 * w);
        for (x, wt) in xs.iter().zip(&ws) {
            acc += wt * f(*x);
        }
    }
    acc
}

/// Laplace transform of the one-point correlation:
/// int e^{s x} rho_1(x) dx over (-cut, 40]. Closed form: e^{s^3/12} / (2 sqrt(pi) s^{3/2}).
pub fn airy_rho1_laplace(s: f64, cut: f64) -> Result<f64> {
    if s <= 0.0 {
        return Err(Error::Domain(format!("s = {s} must be positive")));
    }
    let cut = cut.min(40.0);
    // certify the discarded tail: rho_1(x) ~ sqrt(|x|)/pi as x -> -inf
    let tail = (-s * cut).exp() * cut.sqrt() / std::f64::consts::PI / s;
    if tail > 1e-7 {
        return Err(Error::ContourCertificate(format!(
            "left tail bound {tail:.2e} too large at cut {cut}"
        )));
    }
    Ok(panel_integral(-cut, 40.0, 0.4, 16, &|x| (s * x).exp() * airy_density(x)))
}

/// Two-point observable E[sum_i e^{s1 a_i} sum_j e^{s2 a_j}] by quadrature
/// over the correlation functions: the off-diagonal part integrates
/// e^{s1 x + s2 y} rho_2(x,y) with rho_2 = K(x,x)K(y,y) - K(x,y)^2, and the
/// coincident pairs contribute the rho_1 transform at s1 + s2.
pub fn airy_moment_lhs(ss: &[f64], cut: f64) -> Result<f64> {
    match ss.len() {
        1 => airy_rho1_laplace(ss[0], cut),
        2 => {
            let (s1, s2) = (ss[0], ss[1]);
            if s1 <= 0.0 || s2 <= 0.0 {
                return Err(Error::Domain("s values must be positive".into()));
            }
            let rho2 = airy_rho2_laplace(s1, s2, cut)?;
            let diag = airy_rho1_laplace(s1 + s2, cut)?;
            Ok(rho2 + diag)
        }
        _ => Err(Error::Domain("only k <= 2 supported".into())),
    }
}

/// int int e^{s1 x + s2 y} rho_2(x, y) dx dy over (-cut, 40]^2.
pub fn airy_rho2_laplace(s1: f64, s2: f64, cut: f64) -> Result<f64> {
    let cut = cut.min(40.0);
    let grid = |s: f64| -> (Vec<f64>, Vec<f64>) {
        let panels = ((cut + 12.0) / 0.5).ceil() as usize;
        let w = (cut + 12.0) / panels as f64;
        let mut xs = Vec::new();
        let mut ws = Vec::new();
        for p in 0..panels {
            let (x, wt) = linalg::gauss_legendre_on(12, -cut + p as f64 * w, -cut + (p + 1) as f64 * w);
            for (xi, wi) in x.iter().zip(&wt) {
                xs.push(*xi);
                ws.push(wi * (s * xi).exp());
            }
        }
        (xs, ws)
    };
    let (xs1, ws1) = grid(s1);
    let (xs2, ws2) = grid(s2);
    let t1 = KernelTable::new(xs1);
    let t2 = KernelTable::new(xs2);
    let d1: Vec<f64> = (0..t1.xs.len()).map(|i| t1.k(i, i)).collect();
    let d2: Vec<f64> = (0..t2.xs.len()).map(|j| t2.k(j, j)).collect();
    let mut acc = 0.0;
    for i in 0..t1.xs.len() {
        for j in 0..t2.xs.len() {
            let k = t1.k_cross(i, &t2, j);
            acc += ws1[i] * ws2[j] * (d1[i] * d2[j] - k * k);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho1_closed_form(s: f64) -> f64 {
        (s * s * s / 12.0).exp() / (2.0 * std::f64::consts::PI.sqrt() * s.powf(1.5))
    }

    #[test]
    fn f2_limits() {
        // empty interval far right
        let f = tracy_widom_f2(8.0, 32).unwrap();
        assert!(f > 1.0 - 1e-6, "F2(8) = {f}");
        // essentially zero mass far left
        let f = tracy_widom_f2(-9.0, 64).unwrap();
        assert!(f.abs() < 1e-4, "F2(-9) = {f}");
    }

    #[test]
    fn f2_monotone_and_stable() {
        let grid: Vec<f64> = (0..11).map(|i| -6.0 + i as f64).collect();
        let mut prev = -1.0;
        for &s in &grid {
            let f = tracy_widom_f2_checked(s, 48, 1e-8).unwrap();
            assert!((0.0..=1.0 + 1e-12).contains(&f), "F2({s}) = {f}");
            assert!(f >= prev - 1e-12, "not monotone at {s}");
            prev = f;
        }
    }

    #[test]
    fn f2_known_median_region() {
        // F2 crosses 1/2 a bit left of -1.77 (the mean); sanity window
        let lo = tracy_widom_f2(-2.5, 48).unwrap();
        let hi = tracy_widom_f2(-1.0, 48).unwrap();
        assert!(lo < 0.5 && hi > 0.5, "F2(-2.5) = {lo}, F2(-1) = {hi}");
    }

    #[test]
    fn tw_moments_match_known_values() {
        let ((mean, var), err) = tw_mean_variance(40, 0.06).unwrap();
        assert!(err < 5e-4, "unstable moments: {err}");
        assert!((mean + 1.7711).abs() < 1e-3, "mean = {mean}");
        assert!((var - 0.8132).abs() < 2e-3, "var = {var}");
    }

    #[test]
    fn rho1_laplace_matches_closed_form() {
        for &s in &[0.5f64, 1.0, 2.0] {
            let lhs = airy_rho1_laplace(s, 40.0).unwrap();
            let rhs = rho1_closed_form(s);
            assert!(
                (lhs - rhs).abs() < 1e-6 * rhs.max(1.0),
                "s={s}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn airy_kernel_gram_psd_spotcheck() {
        // 20x20 Gram matrix on a grid must be (numerically) PSD
        let n = 20;
        let mut g = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..n {
                let x = -4.0 + 0.4 * i as f64;
                let y = -4.0 + 0.4 * j as f64;
                g[i * n + j] = airy_kernel(x, y);
            }
        }
        // smallest eigenvalue via complex hermitian solver on the real matrix
        let a: Vec<num_complex::Complex64> =
            g.iter().map(|&v| num_complex::Complex64::new(v, 0.0)).collect();
        let eig = crate::linalg::hermitian_eigenvalues(&a, n).unwrap();
        assert!(eig[0] >= -1e-10, "smallest eigenvalue {}", eig[0]);
    }
}
