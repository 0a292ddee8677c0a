//! Dense linear algebra kernels: pivoted LU determinants (real/complex),
//! a complex Hermitian eigenvalue solver (Householder tridiagonalization
//! followed by implicit-shift QL) and Gauss-Legendre quadrature rules.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Determinant of a complex matrix (row-major, n x n) by partially pivoted
/// LU, together with the ratio max|pivot| / min|pivot| as a cheap
/// conditioning diagnostic.
pub fn det_complex(a: &mut [Complex64], n: usize) -> (Complex64, f64) {
    debug_assert_eq!(a.len(), n * n);
    let mut det = Complex64::new(1.0, 0.0);
    let mut max_piv = 0.0f64;
    let mut min_piv = f64::INFINITY;
    for k in 0..n {
        // pivot search on column k
        let mut p = k;
        let mut best = a[k * n + k].norm_sqr();
        for i in k + 1..n {
            let v = a[i * n + k].norm_sqr();
            if v > best {
                best = v;
                p = i;
            }
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let piv = a[k * n + k];
        if piv == Complex64::new(0.0, 0.0) {
            return (Complex64::new(0.0, 0.0), f64::INFINITY);
        }
        det *= piv;
        let m = piv.norm();
        max_piv = max_piv.max(m);
        min_piv = min_piv.min(m);
        for i in k + 1..n {
            let factor = a[i * n + k] / piv;
            if factor != Complex64::new(0.0, 0.0) {
                for j in k + 1..n {
                    let t = a[k * n + j];
                    a[i * n + j] -= factor * t;
                }
            }
        }
    }
    (det, if n == 0 { 1.0 } else { max_piv / min_piv })
}

/// Determinant of a real matrix (row-major) by partially pivoted LU.
pub fn det_real(a: &mut [f64], n: usize) -> f64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = 1.0f64;
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].abs();
        for i in k + 1..n {
            if a[i * n + k].abs() > best {
                best = a[i * n + k].abs();
                p = i;
            }
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let piv = a[k * n + k];
        if piv == 0.0 {
            return 0.0;
        }
        det *= piv;
        for i in k + 1..n {
            let factor = a[i * n + k] / piv;
            if factor != 0.0 {
                for j in k + 1..n {
                    a[i * n + j] -= factor * a[k * n + j];
                }
            }
        }
    }
    det
}

/// Eigenvalues (ascending) of a complex Hermitian matrix given in row-major
/// full storage. Only the lower triangle is read.
pub fn hermitian_eigenvalues(a: &[Complex64], n: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![a[0].re]);
    }
    let mut m = a.to_vec();
    let (mut d, mut e) = householder_tridiagonalize(&mut m, n);
    tql_eigenvalues(&mut d, &mut e)?;
    d.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(d)
}

/// Householder reduction of a Hermitian matrix to a real symmetric
/// tridiagonal (d, e), where e[k] is the subdiagonal |T[k+1,k]|. Works on
/// the lower triangle in place; complex subdiagonal phases are absorbed by a
/// diagonal unitary, which leaves eigenvalues untouched.
fn householder_tridiagonalize(a: &mut [Complex64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let idx = |i: usize, j: usize| i * n + j;
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n - 1];
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut p = vec![Complex64::new(0.0, 0.0); n];

    for k in 0..n - 2 {
        // column x = A[k+1.., k]
        let mut norm2 = 0.0;
        for i in k + 1..n {
            norm2 += a[idx(i, k)].norm_sqr();
        }
        let beta = norm2.sqrt();
        if beta == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let x0 = a[idx(k + 1, k)];
        let alpha = if x0 == Complex64::new(0.0, 0.0) {
            Complex64::new(-beta, 0.0)
        } else {
            -x0 / x0.norm() * beta
        };
        // v = x - alpha e_1 ; vv = v^* v = 2 (beta^2 + beta |x0|)
        let mut vv = 0.0;
        for i in k + 1..n {
            v[i] = a[idx(i, k)];
            if i == k + 1 {
                v[i] -= alpha;
            }
            vv += v[i].norm_sqr();
        }
        if vv == 0.0 {
            e[k] = beta;
            a[idx(k + 1, k)] = alpha;
            continue;
        }
        let tau = 2.0 / vv;

        // p = tau * W v over the trailing block W = A[k+1.., k+1..] (lower tri stored)
        for i in k + 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in k + 1..=i {
                acc += a[idx(i, j)] * v[j];
            }
            for j in i + 1..n {
                acc += a[idx(j, i)].conj() * v[j];
            }
            p[i] = tau * acc;
        }
        // K = tau/2 * v^* p (real since W hermitian)
        let mut vp = Complex64::new(0.0, 0.0);
        for i in k + 1..n {
            vp += v[i].conj() * p[i];
        }
        let kk = 0.5 * tau * vp.re;
        // q = p - K v ; W <- W - q v^* - v q^*
        for i in k + 1..n {
            p[i] -= kk * v[i];
        }
        for i in k + 1..n {
            for j in k + 1..=i {
                let upd = p[i] * v[j].conj() + v[i] * p[j].conj();
                a[idx(i, j)] -= upd;
            }
        }
        a[idx(k + 1, k)] = alpha;
        e[k] = beta;
    }
    e[n - 2] = a[idx(n - 1, n - 2)].norm();
    for i in 0..n {
        d[i] = a[idx(i, i)].re;
    }
    (d, e)
}

/// Implicit-shift QL iteration for a symmetric tridiagonal matrix;
/// eigenvalues land in `d` (unsorted). Classical tqli, eigenvalues only.
fn tql_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let mut ee = vec![0.0f64; n];
    ee[..n - 1].copy_from_slice(e);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if ee[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::EigenNonConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * ee[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + ee[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut pp = 0.0;
            let mut underflow_restart = false;
            for i in (l..m).rev() {
                let f = s * ee[i];
                let b = c * ee[i];
                r = f.hypot(g);
                ee[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= pp;
                    ee[m] = 0.0;
                    underflow_restart = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - pp;
                r = (d[i] - g) * s + 2.0 * c * b;
                pp = s * r;
                d[i + 1] = g + pp;
                g = c * r - b;
            }
            if underflow_restart {
                continue;
            }
            d[l] -= pp;
            ee[l] = g;
            ee[m] = 0.0;
        }
    }
    Ok(())
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre rule mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| w * half).collect(),
    )
}
