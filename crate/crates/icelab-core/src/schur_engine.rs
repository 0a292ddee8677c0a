//! Partitions, Schur polynomials, truncated Schur-measure expectations, the
//! q-difference operator with Schur eigenfunctions, and the complement point
//! configuration Z_{>=0} \ {lambda_i + N - i}.
//!
//! Two independent evaluation routes are kept for Schur polynomials: the
//! bialternant determinant (fast, needs distinct variables) and the
//! branching sum over Gelfand-Tsetlin patterns (any variables; this is the
//! oracle). Equal variables additionally use the hook-content product.

use crate::dd::{det_complex_dd, DdComplex};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::HashMap;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Minimum pairwise separation for the determinant route.
pub const MIN_GAP: f64 = 1e-8;

/// A weakly decreasing sequence of nonnegative integers; trailing zeros are
/// canonicalized away.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: impl Into<Vec<usize>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invariant("partition parts must be weakly decreasing".into()));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// i-th part (0-based), zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// |lambda|, the number of boxes.
    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    fn conjugate_part(&self, j: usize) -> usize {
        self.parts.iter().take_while(|&&p| p > j).count()
    }
}

/// All partitions with largest part <= `max_part` and at most `max_len` parts.
pub fn partitions_with(max_part: usize, max_len: usize) -> Vec<Partition> {
    fn rec(out: &mut Vec<Partition>, current: &mut Vec<usize>, max_part: usize, remaining: usize) {
        out.push(Partition { parts: current.clone() });
        if remaining == 0 {
            return;
        }
        let hi = current.last().copied().unwrap_or(max_part);
        for p in (1..=hi).rev() {
            current.push(p);
            rec(out, current, max_part, remaining - 1);
            current.pop();
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    rec(&mut out, &mut current, max_part, max_len);
    out
}

/// Bialternant route: det[x_i^(lambda_j + N - j)] / prod_{i<j} (x_i - x_j).
/// Requires pairwise distinct variables.
pub fn schur_poly_det(lambda: &Partition, x: &[Complex64]) -> Result<Complex64> {
    let n = x.len();
    if lambda.len() > n {
        return Ok(ZERO);
    }
    let gap = min_pairwise_gap(x);
    if gap < MIN_GAP {
        return Err(Error::CoincidentParameters { gap, min_gap: MIN_GAP });
    }
    // double-double LU: the bialternant cancels heavily near coincident x
    let mut m = vec![DdComplex::ZERO; n * n];
    for i in 0..n {
        let xi = DdComplex::from_c64(x[i]);
        for j in 0..n {
            let e = (lambda.part(j) + n - 1 - j) as u32;
            m[i * n + j] = xi.powi(e);
        }
    }
    let num = det_complex_dd(&mut m, n);
    let mut vandermonde = DdComplex::ONE;
    for i in 0..n {
        for j in i + 1..n {
            vandermonde =
                vandermonde.mul(DdComplex::from_c64(x[i]).sub(DdComplex::from_c64(x[j])));
        }
    }
    Ok(num.div(vandermonde).to_c64())
}

/// Branching (Gelfand-Tsetlin) route: sum over interlacing chains, one
/// variable at a time. Valid for any variables; used as the oracle.
pub fn schur_poly_tableau(lambda: &Partition, x: &[Complex64]) -> Complex64 {
    let n = x.len();
    if lambda.len() > n {
        return ZERO;
    }
    let mut memo: HashMap<(usize, Vec<usize>), Complex64> = HashMap::new();
    branch(lambda.parts(), n, x, &mut memo)
}

#[allow(clippy::too_many_arguments)]
fn interlace_rec(
    lam: &[usize],
    mu: &mut Vec<usize>,
    i: usize,
    level: usize,
    weight: usize,
    x: &[Complex64],
    memo: &mut HashMap<(usize, Vec<usize>), Complex64>,
    total: &mut Complex64,
) {
    if i == mu.len() {
        let mut m: Vec<usize> = mu.clone();
        while m.last() == Some(&0) {
            m.pop();
        }
        let sub_weight: usize = m.iter().sum();
        let sub = branch(&m, level - 1, &x[..level - 1], memo);
        *total += sub * x[level - 1].powi((weight - sub_weight) as i32);
        return;
    }
    let hi = lam[i];
    let lo = if i + 1 < lam.len() { lam[i + 1] } else { 0 };
    for v in lo..=hi {
        mu[i] = v;
        interlace_rec(lam, mu, i + 1, level, weight, x, memo, total);
    }
}

fn branch(
    lam: &[usize],
    level: usize,
    x: &[Complex64],
    memo: &mut HashMap<(usize, Vec<usize>), Complex64>,
) -> Complex64 {
    if lam.len() > level {
        return ZERO;
    }
    if level == 0 {
        return ONE;
    }
    if level == 1 {
        return x[0].powi(lam.first().copied().unwrap_or(0) as i32);
    }
    let key = (level, lam.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let weight: usize = lam.iter().sum();
    let rows = lam.len().min(level - 1);
    let mut mu = vec![0usize; rows];
    let mut total = ZERO;
    interlace_rec(lam, &mut mu, 0, level, weight, x, memo, &mut total);
    memo.insert(key, total);
    total
}

/// Hook-content product for equal variables: s_lambda(c, ..., c) =
/// c^{|lambda|} prod_{(i,j)} (N + j - i) / h(i,j).
pub fn schur_poly_equal(lambda: &Partition, n: usize, c: Complex64) -> Complex64 {
    if lambda.len() > n {
        return ZERO;
    }
    let mut ratio = 1.0f64;
    for (i, &li) in lambda.parts().iter().enumerate() {
        for j in 0..li {
            let arm = li - j - 1;
            let leg = lambda.conjugate_part(j) - i - 1;
            let hook = (arm + leg + 1) as f64;
            let content = (n + j - i) as f64;
            ratio *= content / hook;
        }
    }
    c.powi(lambda.weight() as i32) * ratio
}

/// Schur polynomial dispatcher: equal variables use the hook-content
/// product, well-separated ones the determinant, anything else the
/// branching sum.
pub fn schur_poly(lambda: &Partition, x: &[Complex64]) -> Complex64 {
    let n = x.len();
    if lambda.len() > n {
        return ZERO;
    }
    if n == 0 {
        return ONE;
    }
    if x.iter().all(|&v| (v - x[0]).norm() < 1e-15) {
        return schur_poly_equal(lambda, n, x[0]);
    }
    match schur_poly_det(lambda, x) {
        Ok(v) => v,
        Err(_) => schur_poly_tableau(lambda, x),
    }
}

/// prod_{i,j} (1 - x_i y_j): the reciprocal of the Cauchy sum, i.e. the
/// Schur-measure normalizer.
pub fn cauchy_normalizer(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let mut z = ONE;
    for &xi in x {
        for &yj in y {
            z *= ONE - xi * yj;
        }
    }
    z
}

pub fn max_abs_xy(x: &[Complex64], y: &[Complex64]) -> f64 {
    let mut r = 0.0f64;
    for &xi in x {
        for &yj in y {
            r = r.max((xi * yj).norm());
        }
    }
    r
}

/// Smallest cutoff L with r^L < 1e-14 (1 - r), the default geometric-tail
/// truncation level.
pub fn default_cutoff(r: f64) -> usize {
    if r <= 0.0 {
        return 1;
    }
    let target = 1e-14 * (1.0 - r);
    ((target.ln() / r.ln()).ceil() as usize).clamp(1, 4000)
}

/// Truncated Schur-measure expectation sum_{lambda_1 <= L} f(lambda) P(lambda)
/// with P(lambda) = s_lambda(x) s_lambda(y) prod (1 - x_i y_j).
/// Returns the value and a heuristic geometric tail bound.
pub fn schur_measure_expect(
    n: usize,
    x: &[Complex64],
    y: &[Complex64],
    f: &dyn Fn(&Partition) -> Complex64,
    cutoff: Option<usize>,
) -> Result<(Complex64, f64)> {
    let r = max_abs_xy(x, y);
    if r >= 1.0 {
        return Err(Error::Divergence { value: r });
    }
    let cutoff = cutoff.unwrap_or_else(|| default_cutoff(r));
    let z = cauchy_normalizer(x, y);
    let mut total = ZERO;
    for lambda in partitions_with(cutoff, n) {
        let p = schur_poly(&lambda, x) * schur_poly(&lambda, y) * z;
        total += f(&lambda) * p;
    }
    let tail = 2.0 * r.powi(cutoff as i32) / (1.0 - r);
    Ok((total, tail))
}

/// Apply the q-difference operator
/// D_q = sum_i prod_{j != i} (q x_i - x_j)/(x_i - x_j) T_{q,i}
/// to a symmetric function handle at the point x.
pub fn dq_apply(
    q: Complex64,
    f: &dyn Fn(&[Complex64]) -> Complex64,
    x: &[Complex64],
) -> Result<Complex64> {
    let n = x.len();
    let gap = min_pairwise_gap(x);
    if gap < MIN_GAP {
        return Err(Error::CoincidentParameters { gap, min_gap: MIN_GAP });
    }
    let mut total = ZERO;
    let mut shifted = x.to_vec();
    for i in 0..n {
        let mut coeff = ONE;
        for j in 0..n {
            if j != i {
                coeff *= (q * x[i] - x[j]) / (x[i] - x[j]);
            }
        }
        shifted[i] = q * x[i];
        total += coeff * f(&shifted);
        shifted[i] = x[i];
    }
    Ok(total)
}

/// Eigenvalue of D_q on s_lambda in n variables: sum_i q^{lambda_i + n - i}.
pub fn dq_eigenvalue(q: Complex64, lambda: &Partition, n: usize) -> Complex64 {
    (0..n).map(|i| q.powi((lambda.part(i) + n - 1 - i) as i32)).sum()
}

/// The increasing complement Z_{>=0} \ {lambda_i + N - i}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfiguration {
    points: Vec<usize>,
}

impl PointConfiguration {
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn smallest(&self) -> usize {
        self.points[0]
    }

    /// Rebuild the partition from a complement that covers [0, horizon).
    pub fn reconstruct_partition(&self, n: usize, horizon: usize) -> Result<Partition> {
        let mut occupied: Vec<usize> = Vec::new();
        let mut it = self.points.iter().peekable();
        for v in 0..horizon {
            if it.peek() == Some(&&v) {
                it.next();
            } else {
                occupied.push(v);
            }
        }
        if occupied.len() != n {
            return Err(Error::Invariant(format!(
                "complement over [0,{horizon}) leaves {} occupied points, expected {n}",
                occupied.len()
            )));
        }
        occupied.reverse(); // descending: a_i = lambda_i + n - i (1-based i)
        let parts: Vec<usize> = occupied
            .iter()
            .enumerate()
            .map(|(i0, &a)| {
                (a + 1 + i0).checked_sub(n).ok_or_else(|| {
                    Error::Invariant("occupied points do not form a partition".into())
                })
            })
            .collect::<Result<_>>()?;
        Partition::new(parts)
    }
}

/// First `count` points of Z_{>=0} \ {lambda_i + N - i}; the smallest is
/// always N - len(lambda).
pub fn point_config(lambda: &Partition, n: usize, count: usize) -> Result<PointConfiguration> {
    if lambda.len() > n {
        return Err(Error::Invariant("partition longer than n".into()));
    }
    let horizon = lambda.part(0) + n + count;
    let mut occupied = vec![false; horizon];
    for i in 0..n {
        occupied[lambda.part(i) + n - 1 - i] = true;
    }
    let points: Vec<usize> = (0..horizon).filter(|&v| !occupied[v]).take(count).collect();
    Ok(PointConfiguration { points })
}

/// sum over the complement of q^p, with the geometric tail past
/// lambda_1 + n summed in closed form (exact for |q| < 1).
pub fn complement_power_sum(lambda: &Partition, n: usize, q: f64) -> f64 {
    let horizon = lambda.part(0) + n;
    let mut occupied = vec![false; horizon];
    for i in 0..n {
        occupied[lambda.part(i) + n - 1 - i] = true;
    }
    let mut s = 0.0;
    for (v, occ) in occupied.iter().enumerate() {
        if !occ {
            s += q.powi(v as i32);
        }
    }
    s + q.powi(horizon as i32) / (1.0 - q)
}

/// Brute-force E[prod_m sum_{p in complement} q_m^p] under the Schur measure,
/// truncated at lambda_1 <= cutoff. The point sums are exact per partition;
/// only the partition sum is truncated.
pub fn laplace_observable_bruteforce(
    n: usize,
    x: &[Complex64],
    y: &[Complex64],
    qs: &[f64],
    cutoff: Option<usize>,
) -> Result<(Complex64, f64)> {
    for &q in qs {
        if !(0.0 < q && q < 1.0) {
            return Err(Error::Domain(format!("q = {q} outside (0,1)")));
        }
    }
    schur_measure_expect(
        n,
        x,
        y,
        &|lambda| {
            let mut prod = 1.0;
            for &q in qs {
                prod *= complement_power_sum(lambda, n, q);
            }
            Complex64::new(prod, 0.0)
        },
        cutoff,
    )
}

fn min_pairwise_gap(x: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            gap = gap.min((x[i] - x[j]).norm());
        }
    }
    gap
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn part(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partition_canonicalization() {
        let p = Partition::new(vec![3, 2, 2, 0, 0]).unwrap();
        assert_eq!(p.parts(), &[3, 2, 2]);
        assert_eq!(p.len(), 3);
        assert_eq!(p.weight(), 7);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(Partition::empty().len(), 0);
    }

    #[test]
    fn partition_generation_counts() {
        // lambda_1 <= L with at most N parts: C(L + N, N) partitions
        assert_eq!(partitions_with(2, 2).len(), 6);
        assert_eq!(partitions_with(4, 3).len(), 35);
        assert_eq!(partitions_with(1, 1).len(), 2);
    }

    #[test]
    fn schur_single_row() {
        // s_(1)(x1, x2) = x1 + x2
        let x = [c(0.3, 0.1), c(0.7, -0.2)];
        let lam = part(&[1]);
        let v = schur_poly_det(&lam, &x).unwrap();
        assert!((v - (x[0] + x[1])).norm() < 1e-14);
        let w = schur_poly_tableau(&lam, &x);
        assert!((w - (x[0] + x[1])).norm() < 1e-14);
    }

    #[test]
    fn schur_21_two_variables() {
        // s_(2,1)(x1,x2) = x1^2 x2 + x1 x2^2
        let x = [c(0.4, 0.0), c(0.9, 0.0)];
        let lam = part(&[2, 1]);
        let expect = x[0] * x[0] * x[1] + x[0] * x[1] * x[1];
        assert!((schur_poly_det(&lam, &x).unwrap() - expect).norm() < 1e-14);
        assert!((schur_poly_tableau(&lam, &x) - expect).norm() < 1e-14);
    }

    #[test]
    fn schur_too_long_is_zero() {
        let x = [c(0.4, 0.0), c(0.9, 0.0)];
        let lam = part(&[1, 1, 1]);
        assert_eq!(schur_poly(&lam, &x), ZERO);
        assert_eq!(schur_poly_tableau(&lam, &x), ZERO);
    }

    #[test]
    fn schur_at_zero_is_delta() {
        let x = [c(0.0, 0.0), c(0.0, 0.0)];
        assert_eq!(schur_poly(&Partition::empty(), &x), ONE);
        assert_eq!(schur_poly(&part(&[1]), &x), ZERO);
        assert_eq!(schur_poly_tableau(&part(&[2, 1]), &x), ZERO);
    }

    #[test]
    fn det_and_tableau_routes_agree() {
        let mut rng = CounterRng::new(31, 0);
        for n in 1..=4usize {
            for _ in 0..10 {
                let x: Vec<Complex64> =
                    (0..n).map(|_| c(rng.uniform() * 1.6 - 0.8, rng.uniform() * 0.4)).collect();
                if min_pairwise_gap(&x) < 1e-3 {
                    continue;
                }
                let lam = part(&[rng.below(5) as usize + 1, rng.below(2) as usize]);
                let lam = if lam.len() > n { part(&[lam.part(0)]) } else { lam };
                let a = schur_poly_det(&lam, &x).unwrap();
                let b = schur_poly_tableau(&lam, &x);
                assert!(
                    (a - b).norm() <= 1e-10 * a.norm().max(1.0),
                    "n={n} lam={:?}: {a} vs {b}",
                    lam.parts()
                );
            }
        }
    }

    #[test]
    fn hook_content_matches_tableau() {
        let lam = part(&[3, 1, 1]);
        for n in 3..=5usize {
            let xval = c(0.83, 0.21);
            let xs = vec![xval; n];
            let a = schur_poly_equal(&lam, n, xval);
            let b = schur_poly_tableau(&lam, &xs);
            assert!((a - b).norm() < 1e-12 * a.norm().max(1.0), "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn cauchy_identity_truncated() {
        // sum_lambda s(x) s(y), normalized, converges to 1 with a geometric
        // tail controlled by 2 r^L (plus machine noise at large L)
        let x = vec![c(0.35, 0.0), c(0.2, 0.0)];
        let y = vec![c(0.4, 0.0), c(0.25, 0.0)];
        let r = max_abs_xy(&x, &y);
        for cutoff in [6usize, 10, 16] {
            let (mass, _) = schur_measure_expect(2, &x, &y, &|_| ONE, Some(cutoff)).unwrap();
            let bound = 2.0 * r.powi(cutoff as i32) + 1e-13;
            assert!(
                (mass - ONE).norm() < bound,
                "L={cutoff}: |mass - 1| = {} vs {bound}",
                (mass - ONE).norm()
            );
        }
    }

    #[test]
    fn divergent_inputs_rejected() {
        let x = vec![c(1.2, 0.0)];
        let y = vec![c(0.9, 0.0)];
        assert!(matches!(
            schur_measure_expect(1, &x, &y, &|_| ONE, None),
            Err(Error::Divergence { .. })
        ));
    }

    #[test]
    fn dq_single_row_eigenvalue_by_hand() {
        // D_q s_(1) = (q^2 + 1) s_(1) for n = 2
        let q = c(0.6, 0.0);
        let x = [c(0.37, 0.0), c(0.91, 0.0)];
        let f = |v: &[Complex64]| v[0] + v[1];
        let got = dq_apply(q, &f, &x).unwrap();
        let expect = (q * q + ONE) * (x[0] + x[1]);
        assert!((got - expect).norm() < 1e-13);
    }

    #[test]
    fn dq_eigenrelation_random_partitions() {
        let mut rng = CounterRng::new(57, 0);
        for _ in 0..20 {
            let n = 2 + rng.below(3) as usize;
            let q = c(0.2 + 0.6 * rng.uniform(), 0.0);
            let x: Vec<Complex64> = (0..n).map(|_| c(0.2 + 1.3 * rng.uniform(), 0.0)).collect();
            if min_pairwise_gap(&x) < 1e-3 {
                continue;
            }
            let mut parts: Vec<usize> = (0..n).map(|_| rng.below(5) as usize).collect();
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts).unwrap();
            let f = |v: &[Complex64]| schur_poly_tableau(&lam, v);
            let got = dq_apply(q, &f, &x).unwrap();
            let s = schur_poly_tableau(&lam, &x);
            let expect = dq_eigenvalue(q, &lam, n) * s;
            assert!(
                (got - expect).norm() < 1e-10 * s.norm().max(1.0),
                "lam={:?}: {got} vs {expect}",
                lam.parts()
            );
        }
    }

    #[test]
    fn dq_on_constant_function() {
        // empty lambda: eigenvalue sum_i q^{n-i}
        let q = c(0.45, 0.0);
        let x = [c(0.3, 0.0), c(0.8, 0.0), c(1.4, 0.0)];
        let f = |_: &[Complex64]| ONE;
        let got = dq_apply(q, &f, &x).unwrap();
        let expect = dq_eigenvalue(q, &Partition::empty(), 3);
        assert!((got - expect).norm() < 1e-13);
    }

    #[test]
    fn point_config_examples() {
        // lambda = 0, N = 3: occupied {2,1,0}, complement starts at 3
        let p = point_config(&Partition::empty(), 3, 5).unwrap();
        assert_eq!(p.points(), &[3, 4, 5, 6, 7]);
        assert_eq!(p.smallest(), 3);

        // lambda = (2,1), N = 2: occupied {3, 1}; complement (0, 2, 4, 5, ...)
        let lam = part(&[2, 1]);
        let p = point_config(&lam, 2, 4).unwrap();
        assert_eq!(p.points(), &[0, 2, 4, 5]);
        assert_eq!(p.smallest(), 2 - lam.len());
    }

    #[test]
    fn point_config_smallest_and_round_trip() {
        let mut rng = CounterRng::new(77, 0);
        for _ in 0..30 {
            let n = 1 + rng.below(5) as usize;
            let mut parts: Vec<usize> =
                (0..rng.below(n as u64 + 1)).map(|_| rng.below(6) as usize + 1).collect();
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition::new(parts).unwrap();
            let count = lam.part(0) + n + 3;
            let p = point_config(&lam, n, count).unwrap();
            assert_eq!(p.smallest(), n - lam.len());
            let horizon = lam.part(0) + n;
            let back = p.reconstruct_partition(n, horizon).unwrap();
            assert_eq!(back, lam);
        }
    }

    #[test]
    fn complement_sum_concentrated_measure() {
        // as |y| -> 0 the measure concentrates on lambda = 0, so
        // E[sum q^p] -> q^N / (1 - q)
        let n = 3;
        let q = 0.55;
        let x = vec![c(0.5, 0.0); 3];
        let y = vec![c(1e-6, 0.0); 3];
        let (val, _) = laplace_observable_bruteforce(n, &x, &y, &[q], Some(6)).unwrap();
        let expect = q.powi(n as i32) / (1.0 - q);
        assert!((val - c(expect, 0.0)).norm() < 1e-4, "{val} vs {expect}");
    }
}
