//! Closed-form determinant evaluations for the domain-wall partition
//! function: the Cauchy determinant, the inhomogeneous determinant formula,
//! its free-fermion product form at t = -1, the free-boundary
//! generalization, and the equivalent truncated Schur sum.

use crate::dd::{det_complex_dd, DdComplex};
use crate::error::{Error, Result};
use crate::schur_engine::{self, Partition};
use num_complex::Complex64;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Minimum pairwise separation accepted by the determinant formulas.
pub const MIN_GAP: f64 = 1e-8;

/// Column/row spectral parameters with the quantum parameter t.
#[derive(Debug, Clone)]
pub struct SpectralVectors {
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
    pub t: Complex64,
}

impl SpectralVectors {
    /// Validates pairwise separation within x and within y, and that no
    /// 1 - x_i y_j or 1 - t x_i y_j vanishes.
    pub fn new(x: Vec<Complex64>, y: Vec<Complex64>, t: Complex64) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Invariant("x and y must have equal length".into()));
        }
        let gap = min_gap(&x).min(min_gap(&y));
        if gap < MIN_GAP {
            return Err(Error::CoincidentParameters { gap, min_gap: MIN_GAP });
        }
        for &xi in &x {
            for &yj in &y {
                if (ONE - xi * yj).norm() < 1e-12 || (ONE - t * xi * yj).norm() < 1e-12 {
                    return Err(Error::Domain(format!(
                        "pole in the determinant entries at x*y = {}",
                        xi * yj
                    )));
                }
            }
        }
        Ok(SpectralVectors { x, y, t })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}

fn min_gap(v: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            gap = gap.min((v[i] - v[j]).norm());
        }
    }
    gap
}

/// det[ 1/(a_j - b_i) ] by pivoted LU.
///
/// Cauchy matrices get ill-conditioned fast, so the matrix is built and
/// factored in double-double; the only rounding left is in the f64 inputs.
pub fn cauchy_det_lu(a: &[Complex64], b: &[Complex64]) -> Result<Complex64> {
    let n = a.len();
    check_cauchy_inputs(a, b)?;
    let mut m = vec![DdComplex::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            let d = DdComplex::from_c64(a[j]).sub(DdComplex::from_c64(b[i]));
            m[i * n + j] = DdComplex::ONE.div(d);
        }
    }
    Ok(det_complex_dd(&mut m, n).to_c64())
}

/// The same determinant in closed form:
/// prod_{i<j} (a_i - a_j)(b_j - b_i) / prod_{i,j} (a_i - b_j).
pub fn cauchy_det_product(a: &[Complex64], b: &[Complex64]) -> Result<Complex64> {
    let n = a.len();
    check_cauchy_inputs(a, b)?;
    let mut num = ONE;
    for i in 0..n {
        for j in i + 1..n {
            num *= (a[i] - a[j]) * (b[j] - b[i]);
        }
    }
    let mut den = ONE;
    for &ai in a {
        for &bj in b {
            den *= ai - bj;
        }
    }
    Ok(num / den)
}

fn check_cauchy_inputs(a: &[Complex64], b: &[Complex64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Invariant("a and b must have equal length".into()));
    }
    let gap = min_gap(a).min(min_gap(b));
    if gap < MIN_GAP {
        return Err(Error::CoincidentParameters { gap, min_gap: MIN_GAP });
    }
    for &ai in a {
        for &bj in b {
            if (ai - bj).norm() < MIN_GAP {
                return Err(Error::CoincidentParameters {
                    gap: (ai - bj).norm(),
                    min_gap: MIN_GAP,
                });
            }
        }
    }
    Ok(())
}

/// Inhomogeneous domain-wall partition function in determinant form:
/// prod (1 - x_i y_j) / prod_{i<j} (x_i - x_j)(y_i - y_j)
///   * det[ (1-t) x_i y_j / ((1 - x_i y_j)(1 - t x_i y_j)) ].
pub fn ik_rhs(sv: &SpectralVectors) -> Result<Complex64> {
    let n = sv.n();
    let t = DdComplex::from_c64(sv.t);
    let one = DdComplex::ONE;
    let mut m = vec![DdComplex::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            let p = DdComplex::from_c64(sv.x[i]).mul(DdComplex::from_c64(sv.y[j]));
            let num = one.sub(t).mul(p);
            let den = one.sub(p).mul(one.sub(t.mul(p)));
            m[i * n + j] = num.div(den);
        }
    }
    let det = det_complex_dd(&mut m, n);
    Ok(prefactor_dd(&sv.x, &sv.y).mul(det).to_c64())
}

fn prefactor_dd(x: &[Complex64], y: &[Complex64]) -> DdComplex {
    let n = x.len();
    let one = DdComplex::ONE;
    let mut num = one;
    for &xi in x {
        for &yj in y {
            num = num.mul(one.sub(DdComplex::from_c64(xi).mul(DdComplex::from_c64(yj))));
        }
    }
    let mut den = one;
    for i in 0..n {
        for j in i + 1..n {
            let dx = DdComplex::from_c64(x[i]).sub(DdComplex::from_c64(x[j]));
            let dy = DdComplex::from_c64(y[i]).sub(DdComplex::from_c64(y[j]));
            den = den.mul(dx).mul(dy);
        }
    }
    num.div(den)
}

/// Free-fermion (t = -1) product form:
/// prod_i (2 x_i y_i) * prod_{i<j} (x_i + x_j)(y_i + y_j) / prod_{i,j} (1 + x_i y_j).
/// No determinant involved, so coincident parameters are fine.
pub fn ff_product(x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    if x.len() != y.len() {
        return Err(Error::Invariant("x and y must have equal length".into()));
    }
    let n = x.len();
    let mut value = ONE;
    for i in 0..n {
        value *= 2.0 * x[i] * y[i];
    }
    for i in 0..n {
        for j in i + 1..n {
            value *= (x[i] + x[j]) * (y[i] + y[j]);
        }
    }
    for &xi in x {
        for &yj in y {
            let d = ONE + xi * yj;
            if d.norm() < 1e-12 {
                return Err(Error::Domain(format!("pole at 1 + x y = 0, x*y = {}", xi * yj)));
            }
            value /= d;
        }
    }
    Ok(value)
}

/// Free-boundary generalization: same prefactor with determinant entries
/// (1 - w - (t - w) x_i y_j) / ((1 - x_i y_j)(1 - t x_i y_j)).
/// At w = 1 this reduces to `ik_rhs`.
pub fn free_ik_rhs(sv: &SpectralVectors, w: Complex64) -> Result<Complex64> {
    let n = sv.n();
    let t = DdComplex::from_c64(sv.t);
    let wd = DdComplex::from_c64(w);
    let one = DdComplex::ONE;
    let mut m = vec![DdComplex::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            let p = DdComplex::from_c64(sv.x[i]).mul(DdComplex::from_c64(sv.y[j]));
            let num = one.sub(wd).sub(t.sub(wd).mul(p));
            let den = one.sub(p).mul(one.sub(t.mul(p)));
            m[i * n + j] = num.div(den);
        }
    }
    let det = det_complex_dd(&mut m, n);
    Ok(prefactor_dd(&sv.x, &sv.y).mul(det).to_c64())
}

/// Truncated Schur-sum route to the same quantity:
/// sum_{lambda_1 <= L} prod_i (1 - w t^{lambda_i + N - i}) s_lambda(x)
/// s_lambda(y) prod (1 - x_i y_j). Returns the value and the geometric
/// tail-bound heuristic (max |x_i y_j|)^{L+1} / (1 - max).
pub fn schur_sum_form(
    n: usize,
    x: &[Complex64],
    y: &[Complex64],
    t: Complex64,
    w: Complex64,
    cutoff: Option<usize>,
) -> Result<(Complex64, f64)> {
    let r = schur_engine::max_abs_xy(x, y);
    if r >= 1.0 {
        return Err(Error::Divergence { value: r });
    }
    let cutoff = cutoff.unwrap_or_else(|| schur_engine::default_cutoff(r));
    let f = |lambda: &Partition| -> Complex64 {
        let mut prod = ONE;
        for i in 0..n {
            prod *= ONE - w * t.powi((lambda.part(i) + n - 1 - i) as i32);
        }
        prod
    };
    let (value, tail) = schur_engine::schur_measure_expect(n, x, y, &f, Some(cutoff))?;
    Ok((value, tail))
}

/// Evaluate f at x_n displaced by eps * direction and Richardson-extrapolate
/// to eps -> 0 with nodes eps, eps/2, eps/4, eps/8 (kills the eps..eps^3
/// terms of a smooth limit).
pub fn richardson_limit(mut f: impl FnMut(f64) -> Result<Complex64>, eps: f64) -> Result<Complex64> {
    let nodes = [eps, eps / 2.0, eps / 4.0, eps / 8.0];
    let mut vals = Vec::with_capacity(4);
    for &e in &nodes {
        vals.push(f(e)?);
    }
    // Neville tableau toward 0 in the variable e
    let mut tab = vals;
    let xs = nodes;
    for level in 1..4 {
        for i in 0..4 - level {
            let x0 = xs[i];
            let x1 = xs[i + level];
            let num = tab[i + 1] * x0 - tab[i] * x1;
            tab[i] = num / (x0 - x1);
        }
    }
    Ok(tab[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_enum;
    use crate::rng::CounterRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reals(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| c(x, 0.0)).collect()
    }

    #[test]
    fn cauchy_det_n1() {
        let a = reals(&[5.0]);
        let b = reals(&[2.0]);
        let lu = cauchy_det_lu(&a, &b).unwrap();
        let cf = cauchy_det_product(&a, &b).unwrap();
        assert!((lu - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((cf - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cauchy_det_n2_hand_value() {
        let a = reals(&[2.0, 3.0]);
        let b = reals(&[0.0, 1.0]);
        let lu = cauchy_det_lu(&a, &b).unwrap();
        let cf = cauchy_det_product(&a, &b).unwrap();
        assert!((lu - c(-1.0 / 12.0, 0.0)).norm() < 1e-15, "lu = {lu}");
        assert!((cf - c(-1.0 / 12.0, 0.0)).norm() < 1e-15, "cf = {cf}");
    }

    #[test]
    fn cauchy_det_random_complex_agreement() {
        let mut rng = CounterRng::new(101, 0);
        for n in [4usize, 8, 12] {
            let a: Vec<Complex64> = (0..n)
                .map(|_| Complex64::from_polar(0.9 * rng.uniform(), 6.28 * rng.uniform()))
                .collect();
            let b: Vec<Complex64> = (0..n)
                .map(|_| Complex64::from_polar(0.9 * rng.uniform() + 1.5, 6.28 * rng.uniform()))
                .collect();
            let lu = cauchy_det_lu(&a, &b).unwrap();
            let cf = cauchy_det_product(&a, &b).unwrap();
            assert!(
                (lu - cf).norm() < 1e-10 * cf.norm(),
                "n={n}: lu={lu} cf={cf}"
            );
        }
    }

    #[test]
    fn cauchy_rejects_coincident() {
        let a = reals(&[1.0, 1.0 + 1e-10]);
        let b = reals(&[3.0, 4.0]);
        assert!(matches!(
            cauchy_det_lu(&a, &b),
            Err(Error::CoincidentParameters { .. })
        ));
    }

    #[test]
    fn ik_base_case() {
        let sv = SpectralVectors::new(reals(&[0.3]), reals(&[0.6]), c(0.4, 0.0)).unwrap();
        let z = ik_rhs(&sv).unwrap();
        let u = sv.x[0] * sv.y[0];
        let expect = (ONE - sv.t) * u / (ONE - sv.t * u);
        assert!((z - expect).norm() < 1e-15);
    }

    #[test]
    fn ik_matches_enumeration_small_n() {
        let mut rng = CounterRng::new(202, 0);
        for n in 1..=4usize {
            for _ in 0..10 {
                let x: Vec<Complex64> =
                    (0..n).map(|_| c(0.1 + 0.7 * rng.uniform(), 0.0)).collect();
                let y: Vec<Complex64> =
                    (0..n).map(|_| c(0.1 + 0.7 * rng.uniform(), 0.0)).collect();
                let t = c(0.1 + 0.8 * rng.uniform(), 0.0);
                let sv = match SpectralVectors::new(x.clone(), y.clone(), t) {
                    Ok(sv) => sv,
                    Err(_) => continue,
                };
                let det = ik_rhs(&sv).unwrap();
                let enumd = exact_enum::dwbc_partition(n, &x, &y, t).unwrap();
                assert!(
                    (det - enumd).norm() < 1e-10 * enumd.norm().max(1e-30),
                    "n={n}: det={det} enum={enumd}"
                );
            }
        }
    }

    #[test]
    fn ik_recursion_property_via_extrapolation() {
        // at x_N = 1/y_N the N-point value reduces to the (N-1)-point value
        let mut rng = CounterRng::new(303, 0);
        for n in 2..=5usize {
            let x: Vec<Complex64> =
                (0..n - 1).map(|_| c(0.15 + 0.5 * rng.uniform(), 0.0)).collect();
            let y: Vec<Complex64> =
                (0..n).map(|_| c(0.15 + 0.5 * rng.uniform(), 0.0)).collect();
            let t = c(0.35, 0.0);
            let sub =
                ik_rhs(&SpectralVectors::new(x.clone(), y[..n - 1].to_vec(), t).unwrap()).unwrap();
            let limit = richardson_limit(
                |eps| {
                    let mut xs = x.clone();
                    xs.push(ONE / y[n - 1] + c(eps, 0.0));
                    ik_rhs(&SpectralVectors::new(xs, y.clone(), t)?)
                },
                1e-3,
            )
            .unwrap();
            assert!(
                (limit - sub).norm() < 1e-10 * sub.norm().max(1.0),
                "n={n}: limit={limit} sub={sub}"
            );
        }
    }

    #[test]
    fn ik_symmetric_under_permutations() {
        let mut rng = CounterRng::new(404, 0);
        let n = 4;
        let x: Vec<Complex64> = (0..n).map(|_| c(0.1 + 0.6 * rng.uniform(), 0.0)).collect();
        let y: Vec<Complex64> = (0..n).map(|_| c(0.1 + 0.6 * rng.uniform(), 0.0)).collect();
        let t = c(0.5, 0.0);
        let base = ik_rhs(&SpectralVectors::new(x.clone(), y.clone(), t).unwrap()).unwrap();
        let mut xp = x.clone();
        xp.swap(0, 2);
        xp.swap(1, 3);
        let permuted = ik_rhs(&SpectralVectors::new(xp, y.clone(), t).unwrap()).unwrap();
        assert!((base - permuted).norm() < 1e-10 * base.norm());
        let w = c(0.3, 0.4);
        let fbase =
            free_ik_rhs(&SpectralVectors::new(x.clone(), y.clone(), t).unwrap(), w).unwrap();
        let mut yp = y.clone();
        yp.swap(1, 2);
        let fperm = free_ik_rhs(&SpectralVectors::new(x, yp, t).unwrap(), w).unwrap();
        assert!((fbase - fperm).norm() < 1e-10 * fbase.norm());
    }

    #[test]
    fn degree_bound_in_last_variable() {
        // prod_j (1 - t x_N y_j) * Z, as a function of x_N, is a polynomial
        // of degree at most N: the (N+1)-st divided difference over N+2
        // nodes must vanish.
        let n = 3;
        let x12 = reals(&[0.21, 0.43]);
        let y = reals(&[0.31, 0.52, 0.68]);
        let t = c(0.45, 0.0);
        let nodes: Vec<f64> = (0..n + 2).map(|k| 0.05 + 0.09 * k as f64).collect();
        let values: Vec<Complex64> = nodes
            .iter()
            .map(|&xn| {
                let mut xs = x12.clone();
                xs.push(c(xn, 0.0));
                let z = ik_rhs(&SpectralVectors::new(xs, y.clone(), t).unwrap()).unwrap();
                let clear: Complex64 =
                    y.iter().map(|&yj| ONE - t * c(xn, 0.0) * yj).product();
                z * clear
            })
            .collect();
        // divided differences
        let mut dd = values;
        for level in 1..=n + 1 {
            for i in 0..=n + 1 - level {
                dd[i] = (dd[i + 1] - dd[i]) / c(nodes[i + level] - nodes[i], 0.0);
            }
        }
        assert!(dd[0].norm() < 1e-8, "leading excess coefficient {}", dd[0]);
    }

    #[test]
    fn ff_product_matches_ik_at_t_minus_one() {
        let x = reals(&[0.21, 0.48, 0.74]);
        let y = reals(&[0.33, 0.56, 0.12]);
        let t = c(-1.0, 0.0);
        let a = ff_product(&x, &y).unwrap();
        let b = ik_rhs(&SpectralVectors::new(x.clone(), y.clone(), t).unwrap()).unwrap();
        assert!((a - b).norm() < 1e-10 * b.norm(), "{a} vs {b}");
        // n = 1 closed form
        let v = ff_product(&reals(&[0.4]), &reals(&[0.7])).unwrap();
        let u = 0.4 * 0.7;
        assert!((v - c(2.0 * u / (1.0 + u), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ff_product_handles_coincident_points() {
        // homogeneous case x = u, y = 1 where the determinant route is 0/0
        let n = 3;
        let u = 0.62;
        let x = vec![c(u, 0.0); n];
        let y = vec![c(1.0, 0.0); n];
        let a = ff_product(&x, &y).unwrap();
        let enumd = exact_enum::dwbc_partition(n, &x, &y, c(-1.0, 0.0)).unwrap();
        assert!((a - enumd).norm() < 1e-10 * enumd.norm(), "{a} vs {enumd}");
    }

    #[test]
    fn free_ik_reduces_to_ik_at_w_one() {
        let sv =
            SpectralVectors::new(reals(&[0.2, 0.5]), reals(&[0.3, 0.6]), c(0.4, 0.0)).unwrap();
        let a = free_ik_rhs(&sv, ONE).unwrap();
        let b = ik_rhs(&sv).unwrap();
        assert!((a - b).norm() < 1e-12 * b.norm().max(1.0));
    }

    #[test]
    fn free_ik_matches_enumeration() {
        let mut rng = CounterRng::new(505, 0);
        for n in 1..=4usize {
            for _ in 0..5 {
                let x: Vec<Complex64> =
                    (0..n).map(|_| c(0.1 + 0.6 * rng.uniform(), 0.0)).collect();
                let y: Vec<Complex64> =
                    (0..n).map(|_| c(0.1 + 0.6 * rng.uniform(), 0.0)).collect();
                let t = c(0.1 + 0.7 * rng.uniform(), 0.0);
                let w = c(2.0 * rng.uniform() - 0.5, 1.5 * rng.uniform() - 0.75);
                let sv = match SpectralVectors::new(x.clone(), y.clone(), t) {
                    Ok(sv) => sv,
                    Err(_) => continue,
                };
                let det = free_ik_rhs(&sv, w).unwrap();
                let obs = exact_enum::stochastic_free_observable(n, &x, &y, t, w).unwrap();
                assert!(
                    (det - obs).norm() < 1e-10 * obs.norm().max(1e-20),
                    "n={n}: det={det} enum={obs}"
                );
            }
        }
    }

    #[test]
    fn free_ik_zero_x_limit_is_t_pochhammer() {
        // R_N(0; y; t, w) = (1 - w)(1 - w t) ... (1 - w t^{N-1}),
        // reached by Richardson extrapolation over x_i = eps * i
        let n = 3;
        let y = reals(&[0.41, 0.62, 0.23]);
        let t = c(0.52, 0.0);
        let w = c(0.37, 0.21);
        let limit = richardson_limit(
            |eps| {
                let xs: Vec<Complex64> = (1..=n).map(|i| c(eps * i as f64, 0.0)).collect();
                free_ik_rhs(&SpectralVectors::new(xs, y.clone(), t)?, w)
            },
            1e-2,
        )
        .unwrap();
        let mut expect = ONE;
        for i in 0..n {
            expect *= ONE - w * t.powi(i as i32);
        }
        assert!((limit - expect).norm() < 1e-6, "{limit} vs {expect}");
    }

    #[test]
    fn schur_sum_matches_free_ik() {
        let n = 2;
        let x = reals(&[0.2, 0.3]);
        let y = reals(&[0.4, 0.5]);
        let t = c(0.5, 0.0);
        let w = c(0.7, 0.0);
        let (sum, _) = schur_sum_form(n, &x, &y, t, w, Some(40)).unwrap();
        let det = free_ik_rhs(&SpectralVectors::new(x, y, t).unwrap(), w).unwrap();
        assert!((sum - det).norm() < 1e-10, "{sum} vs {det}");
    }

    #[test]
    fn schur_sum_zero_x_closed_form() {
        // only lambda = 0 survives at x = 0
        let n = 3;
        let x = reals(&[0.0, 0.0, 0.0]);
        let y = reals(&[0.3, 0.5, 0.7]);
        let t = c(0.6, 0.0);
        let w = c(0.8, 0.1);
        let (sum, _) = schur_sum_form(n, &x, &y, t, w, Some(5)).unwrap();
        let mut expect = ONE;
        for i in 1..=n {
            expect *= ONE - w * t.powi((n - i) as i32);
        }
        assert!((sum - expect).norm() < 1e-13, "{sum} vs {expect}");
    }

    #[test]
    fn schur_sum_mass_check_at_w_zero() {
        // w = 0 turns the summand into the Schur measure itself
        let n = 2;
        let x = reals(&[0.35, 0.15]);
        let y = reals(&[0.4, 0.2]);
        let (sum, tail) = schur_sum_form(n, &x, &y, c(0.5, 0.0), c(0.0, 0.0), None).unwrap();
        assert!((sum - ONE).norm() < 1e-12 + tail, "mass = {sum}");
    }
}
