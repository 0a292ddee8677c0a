//! Numerical contour integrals for the Schur-measure observables, the
//! steepest-descent scaling limit of the one-q observable, and the vertical
//! line formulas for Laplace transforms of the Airy point process.
//!
//! Circle contours are evaluated with the trapezoid rule (spectrally
//! accurate for periodic analytic integrands); vertical lines use panels of
//! Gauss-Legendre nodes with a Gaussian decay certificate for the
//! truncation. Every quadrature doubles its resolution until the value
//! stabilizes and errors out instead of returning a drifting number.

use crate::error::{Error, Result};
use crate::linalg;
use num_complex::Complex64;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Counterclockwise circle |z - center| = radius with a validated
/// pole-separation certificate.
#[derive(Debug, Clone)]
pub struct CircleContour {
    pub center: Complex64,
    pub radius: f64,
    /// (label, distance to the contour, pole must lie inside?) per pole family
    pub certificate: Vec<(String, f64, bool)>,
}

impl CircleContour {
    pub fn around_origin(radius: f64) -> Self {
        CircleContour { center: Complex64::new(0.0, 0.0), radius, certificate: Vec::new() }
    }

    /// Record that `pole` must lie strictly inside/outside the contour and
    /// check the clearance.
    pub fn require(&mut self, label: &str, pole: Complex64, inside: bool) -> Result<()> {
        let dist = (pole - self.center).norm() - self.radius;
        let ok = if inside { dist < 0.0 } else { dist > 0.0 };
        let clearance = dist.abs();
        self.certificate.push((label.to_string(), clearance, inside));
        if !ok || clearance < 1e-6 * self.radius {
            return Err(Error::ContourCertificate(format!(
                "pole {label} at {pole} violates the contour |z| = {} (clearance {clearance:.3e})",
                self.radius
            )));
        }
        Ok(())
    }

    /// (1 / 2 pi i) times the contour integral of f, trapezoid rule with m
    /// nodes.
    pub fn integrate(&self, m: usize, f: &dyn Fn(Complex64) -> Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..m {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            let offset = Complex64::from_polar(self.radius, theta);
            acc += f(self.center + offset) * offset;
        }
        acc / m as f64
    }
}

/// Which point set the q-power sum runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsumForm {
    /// sum over the particle positions {lambda_i + N - i}; contour encloses
    /// the x_i but not 0
    Particles,
    /// sum over the complement Z_{>=0} \ {lambda_i + N - i}; contour
    /// encloses 0 and the x_i
    Complement,
}

fn integrand_factor(
    z: Complex64,
    q: f64,
    x: &[Complex64],
    y: &[Complex64],
) -> Complex64 {
    let mut v = ONE;
    for &xj in x {
        v *= (q * z - xj) / (z - xj);
    }
    for &yj in y {
        v *= (ONE - yj * z) / (ONE - q * yj * z);
    }
    v
}

fn cross_factor(zi: Complex64, qi: f64, zj: Complex64, qj: f64) -> Complex64 {
    (qi * zi - qj * zj) / (zi - qj * zj) * ((zi - zj) / (qi * zi - zj))
}

/// E[prod_m sum q_m^(point)] for the Schur measure with parameters (x, y),
/// via k-fold contour integration (k <= 2). Radii are chosen automatically
/// and certified against every pole family; the node count doubles until
/// the value moves by less than 1e-9.
pub fn schur_qsum_contour(
    x: &[Complex64],
    y: &[Complex64],
    qs: &[f64],
    form: QsumForm,
) -> Result<Complex64> {
    for &q in qs {
        if !(0.0 < q && q < 1.0) {
            return Err(Error::Domain(format!("q = {q} outside (0,1)")));
        }
    }
    let contours = choose_contours(x, y, qs, form)?;
    let eval = |m: usize| -> Complex64 {
        match qs.len() {
            1 => {
                let q = qs[0];
                // particle form integrates dz/((q-1)z), the complement form
                // dz/((1-q)z)
                let sign = match form {
                    QsumForm::Particles => -1.0,
                    QsumForm::Complement => 1.0,
                };
                sign * contours[0].integrate(m, &|z| {
                    integrand_factor(z, q, x, y) / ((1.0 - q) * z)
                })
            }
            2 => {
                let (q1, q2) = (qs[0], qs[1]);
                contours[0].integrate(m, &|z1| {
                    let f1 = integrand_factor(z1, q1, x, y) / ((1.0 - q1) * z1);
                    let inner = contours[1].integrate(m, &|z2| {
                        cross_factor(z1, q1, z2, q2) * integrand_factor(z2, q2, x, y)
                            / ((1.0 - q2) * z2)
                    });
                    f1 * inner
                })
            }
            _ => unreachable!(),
        }
    };
    if qs.is_empty() || qs.len() > 2 {
        return Err(Error::Domain("k must be 1 or 2".into()));
    }
    converge_doubling(64, 16384, eval)
}

fn converge_doubling(
    start: usize,
    cap: usize,
    eval: impl Fn(usize) -> Complex64,
) -> Result<Complex64> {
    let mut m = start;
    let mut prev = eval(m);
    let mut last_delta = f64::INFINITY;
    while m < cap {
        m *= 2;
        let next = eval(m);
        last_delta = (next - prev).norm();
        if last_delta <= 1e-9 * next.norm().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence { delta: last_delta })
}

fn choose_contours(
    x: &[Complex64],
    y: &[Complex64],
    qs: &[f64],
    form: QsumForm,
) -> Result<Vec<CircleContour>> {
    let xmax = x.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let ymax = y.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    match form {
        QsumForm::Particles => {
            if qs.len() != 1 {
                return Err(Error::Domain(
                    "particle-form contours implemented for k = 1 only".into(),
                ));
            }
            // enclose all x_j, exclude 0 and the 1/(q y_j)
            let xmin = x.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
            if xmin <= 0.0 {
                return Err(Error::ContourCertificate(
                    "particle form needs x bounded away from 0".into(),
                ));
            }
            let center = x.iter().sum::<Complex64>() / x.len() as f64;
            let spread = x.iter().map(|v| (v - center).norm()).fold(0.0f64, f64::max);
            let pole_cap = if ymax > 0.0 {
                y.iter()
                    .map(|v| (ONE / (qs[0] * v) - center).norm())
                    .fold(f64::INFINITY, f64::min)
            } else {
                f64::INFINITY
            };
            let room = center.norm().min(pole_cap);
            if spread >= room {
                return Err(Error::ContourCertificate(format!(
                    "no circle separates x (spread {spread:.3}) from 0 and poles (room {room:.3})"
                )));
            }
            let radius = 0.5 * (spread + room);
            let mut c = CircleContour { center, radius, certificate: Vec::new() };
            for (j, &xj) in x.iter().enumerate() {
                c.require(&format!("x_{j}"), xj, true)?;
            }
            c.require("origin", Complex64::new(0.0, 0.0), false)?;
            for (j, &yj) in y.iter().enumerate() {
                if yj.norm() > 0.0 {
                    c.require(&format!("1/(q y_{j})"), ONE / (qs[0] * yj), false)?;
                }
            }
            Ok(vec![c])
        }
        QsumForm::Complement => {
            // concentric circles around 0 with r_j / r_i < q_i for i < j
            let floor = if xmax > 0.0 { xmax } else { 0.0 };
            let caps: Vec<f64> = qs
                .iter()
                .map(|&q| if ymax > 0.0 { 1.0 / (q * ymax) } else { f64::INFINITY })
                .collect();
            let mut radii = Vec::with_capacity(qs.len());
            match qs.len() {
                1 => {
                    let cap = caps[0];
                    let r = pick_radius(floor, cap)?;
                    radii.push(r);
                }
                2 => {
                    // leave room for r_2 in (floor, q_1 r_1)
                    let lo1 = floor / qs[0];
                    let r1 = pick_radius(lo1.max(floor), caps[0])?;
                    let cap2 = caps[1].min(qs[0] * r1);
                    let r2 = pick_radius(floor, cap2)?;
                    radii.push(r1);
                    radii.push(r2);
                }
                _ => return Err(Error::Domain("k must be 1 or 2".into())),
            }
            let mut contours = Vec::new();
            for (idx, &r) in radii.iter().enumerate() {
                let mut c = CircleContour::around_origin(r);
                c.require("origin", Complex64::new(0.0, 0.0), true)?;
                for (j, &xj) in x.iter().enumerate() {
                    c.require(&format!("x_{j}"), xj, true)?;
                }
                for (j, &yj) in y.iter().enumerate() {
                    if yj.norm() > 0.0 {
                        c.require(&format!("1/(q y_{j})"), ONE / (qs[idx] * yj), false)?;
                    }
                }
                // cross-term poles against earlier (larger) contours:
                // worst case over the earlier circle is its radius
                for prev in 0..idx {
                    let clearance_qz = qs[prev] * radii[prev] - r;
                    let clearance_zq = radii[prev] / qs[idx] - r;
                    if clearance_qz < 1e-6 * r || clearance_zq < 1e-6 * r {
                        return Err(Error::ContourCertificate(format!(
                            "nested radii r_{idx} = {r:.4} too close to pole circles of r_{prev}"
                        )));
                    }
                    c.certificate
                        .push((format!("q_{prev} z_{prev} ring"), clearance_qz, false));
                    c.certificate
                        .push((format!("z_{prev}/q_{idx} ring"), clearance_zq, false));
                }
                contours.push(c);
            }
            Ok(contours)
        }
    }
}

fn pick_radius(floor: f64, cap: f64) -> Result<f64> {
    if !(floor < cap) {
        return Err(Error::ContourCertificate(format!(
            "no admissible radius in ({floor}, {cap})"
        )));
    }
    Ok(if floor <= 0.0 {
        if cap.is_finite() {
            0.5 * cap
        } else {
            1.0
        }
    } else if cap.is_finite() {
        (floor * cap).sqrt()
    } else {
        2.0 * floor
    })
}

/// alpha(u) = (1 - sqrt u) / (1 + sqrt u), the height-density constant.
pub fn alpha_const(u: f64) -> f64 {
    (1.0 - u.sqrt()) / (1.0 + u.sqrt())
}

/// sigma(u) = u^{1/6} (1 - sqrt u)^{1/3} / (1 + sqrt u), the N^{1/3}
/// fluctuation scale.
pub fn sigma_const(u: f64) -> f64 {
    u.powf(1.0 / 6.0) * (1.0 - u.sqrt()).powf(1.0 / 3.0) / (1.0 + u.sqrt())
}

/// The same scale written as in the height-fluctuation normalization:
/// (1 - sqrt u)^{4/3} / (u^{1/3} (u^{-1/2} - u^{1/2})).
pub fn sigma_const_height_form(u: f64) -> f64 {
    (1.0 - u.sqrt()).powf(4.0 / 3.0) / (u.powf(1.0 / 3.0) * (1.0 / u.sqrt() - u.sqrt()))
}

/// Steepest-descent phase functions of the one-q analysis.
pub fn f0(z: Complex64, u: f64) -> Complex64 {
    (1.0 - u) * z / ((ONE - z) * (ONE - u * z))
}

pub fn f1(z: Complex64, u: f64) -> Complex64 {
    let a = z / (ONE - z);
    let b = u * z / (ONE - u * z);
    -a * a + b * b
}

pub fn f2_phase(z: Complex64, u: f64) -> Complex64 {
    let a = z / (ONE - z);
    let b = u * z / (ONE - u * z);
    a * a * a - b * b * b
}

/// Critical point z_c = -1/sqrt(u) of F0.
pub fn critical_point(u: f64) -> f64 {
    -1.0 / u.sqrt()
}

/// Limit value and constants of the scaled one-q observable.
#[derive(Debug, Clone, Copy)]
pub struct OneqLimit {
    pub value: f64,
    pub alpha: f64,
    pub sigma: f64,
}

/// (1 / 2 sqrt(pi)) (s sigma)^{-3/2} exp((s sigma)^3 / 12) with
/// sigma = sigma(u), plus the constants used in the scaling.
pub fn oneq_limit_value(s: f64, u: f64) -> Result<OneqLimit> {
    if s <= 0.0 || !(0.0 < u && u < 1.0) {
        return Err(Error::Domain(format!("need s > 0 and 0 < u < 1, got s={s}, u={u}")));
    }
    let sigma = sigma_const(u);
    let ss = s * sigma;
    let value = 0.5 / std::f64::consts::PI.sqrt() * ss.powf(-1.5) * (ss * ss * ss / 12.0).exp();
    Ok(OneqLimit { value, alpha: alpha_const(u), sigma })
}

/// For each N: q = 1 - s N^{-1/3}, evaluate E sum_{p} q^p for the
/// homogeneous Schur measure (x = 1, y = u) through the single contour
/// integral on |z| = 1/sqrt(u), and rescale by (1 - s N^{-1/3})^{-alpha N}.
pub fn oneq_scaling_sequence(s: f64, u: f64, ns: &[usize]) -> Result<Vec<(usize, f64)>> {
    if !(0.0 < u && u < 1.0) || s <= 0.0 {
        return Err(Error::Domain(format!("need s > 0 and 0 < u < 1, got s={s}, u={u}")));
    }
    let alpha = alpha_const(u);
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let q = 1.0 - s * (n as f64).powf(-1.0 / 3.0);
        if !(0.0 < q && q < 1.0) {
            return Err(Error::Domain(format!("q = {q} outside (0,1) at N = {n}")));
        }
        let radius = 1.0 / u.sqrt();
        let mut contour = CircleContour::around_origin(radius);
        contour.require("origin", Complex64::new(0.0, 0.0), true)?;
        contour.require("z = 1", ONE, true)?;
        contour.require("z = 1/(q u)", Complex64::new(1.0 / (q * u), 0.0), false)?;
        let scale = (-alpha * n as f64 * q.ln()).exp(); // q^{-alpha N}
        let eval = |m: usize| -> Complex64 {
            contour.integrate(m, &|z| {
                let ratio = (q * z - ONE) / (z - ONE) * ((ONE - u * z) / (ONE - q * u * z));
                ratio.powi(n as i32) / ((1.0 - q) * z)
            }) * scale
        };
        let mut m = 256;
        let mut prev = eval(m);
        let value = loop {
            m *= 2;
            let next = eval(m);
            if (next - prev).norm() <= 1e-9 * next.norm().max(1e-12) {
                break next;
            }
            if m >= 65536 {
                return Err(Error::NonConvergence { delta: (next - prev).norm() });
            }
            prev = next;
        };
        if value.im.abs() > 1e-8 * value.re.abs().max(1e-12) {
            return Err(Error::Invariant(format!(
                "scaled one-q value has imaginary residue {value}"
            )));
        }
        out.push((n, value.re));
    }
    Ok(out)
}

/// RHS of the Airy Laplace-transform formula for k <= 2: the k-fold
/// vertical-line integral of e^{sum s_i z_i^2} times the cross-ratio
/// product, with prefactor e^{sum s_i^3 / 12} / (2 pi i)^k and measures
/// dz_i / s_i. Contours are Re(z) = v_i, truncated at height T where the
/// Gaussian factor has decayed below 1e-14 of its peak.
pub fn airy_laplace_rhs(ss: &[f64], vs: &[f64], height: f64, m: usize) -> Result<f64> {
    let k = ss.len();
    if k == 0 || k > 2 || vs.len() != k {
        return Err(Error::Domain("need k in {1, 2} with matching v-list".into()));
    }
    for &s in ss {
        if s <= 0.0 {
            return Err(Error::Domain(format!("s = {s} must be positive")));
        }
    }
    if k == 2 && !(vs[1] - ss[1] / 2.0 > vs[0] + ss[0] / 2.0) {
        return Err(Error::Domain(format!(
            "v-conditions violated: v2 - s2/2 = {} must exceed v1 + s1/2 = {}",
            vs[1] - ss[1] / 2.0,
            vs[0] + ss[0] / 2.0
        )));
    }
    // decay certificate: |e^{s z^2}| at the truncation height must be below
    // 1e-14 of its value at the real axis
    for &s in ss {
        if (-s * height * height).exp() > 1e-14 {
            return Err(Error::ContourCertificate(format!(
                "truncation height {height} keeps e^(-s T^2) = {:.2e} above 1e-14",
                (-s * height * height).exp()
            )));
        }
    }
    let pref = (ss.iter().map(|s| s * s * s).sum::<f64>() / 12.0).exp();
    let line = || -> (Vec<f64>, Vec<f64>) {
        let panels = (m / 16).max(4);
        let w = 2.0 * height / panels as f64;
        let mut ys = Vec::new();
        let mut wts = Vec::new();
        for p in 0..panels {
            let (yy, ww) =
                linalg::gauss_legendre_on(16, -height + p as f64 * w, -height + (p + 1) as f64 * w);
            ys.extend_from_slice(&yy);
            wts.extend_from_slice(&ww);
        }
        (ys, wts)
    };
    // On z = v + iy each dz contributes i dy, cancelling one i of each
    // 1/(2 pi i): the k-fold integral reduces to (2 pi)^{-k} real-line sums.
    let value = match k {
        1 => {
            let (ys, wts) = line();
            let mut acc = Complex64::new(0.0, 0.0);
            for (y, w) in ys.iter().zip(&wts) {
                let z = Complex64::new(vs[0], *y);
                acc += *w * (ss[0] * z * z).exp();
            }
            acc / (2.0 * std::f64::consts::PI * ss[0])
        }
        2 => {
            let (ys1, wts1) = line();
            let (ys2, wts2) = line();
            let mut acc = Complex64::new(0.0, 0.0);
            for (y1, w1) in ys1.iter().zip(&wts1) {
                let z1 = Complex64::new(vs[0], *y1);
                let e1 = (ss[0] * z1 * z1).exp();
                let mut inner = Complex64::new(0.0, 0.0);
                for (y2, w2) in ys2.iter().zip(&wts2) {
                    let z2 = Complex64::new(vs[1], *y2);
                    let e2 = (ss[1] * z2 * z2).exp();
                    let a = z2 - ss[1] / 2.0 - z1 + ss[0] / 2.0;
                    let b = z2 + ss[1] / 2.0 - z1 + ss[0] / 2.0;
                    let c = z2 + ss[1] / 2.0 - z1 - ss[0] / 2.0;
                    let d = z2 - ss[1] / 2.0 - z1 - ss[0] / 2.0;
                    inner += *w2 * e2 * (a / b) * (c / d);
                }
                acc += *w1 * e1 * inner;
            }
            acc / (4.0 * std::f64::consts::PI * std::f64::consts::PI * ss[0] * ss[1])
        }
        _ => unreachable!(),
    };
    let value = pref * value;
    if value.im.abs() > 1e-9 * value.re.abs().max(1.0) {
        return Err(Error::Invariant(format!("imaginary residue in Laplace RHS: {value}")));
    }
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur_engine;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reals(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| c(x, 0.0)).collect()
    }

    #[test]
    fn complement_k1_matches_bruteforce() {
        let x = reals(&[0.2, 0.35]);
        let y = reals(&[0.3, 0.45]);
        let q = 0.6;
        let contour = schur_qsum_contour(&x, &y, &[q], QsumForm::Complement).unwrap();
        let (brute, _) =
            schur_engine::laplace_observable_bruteforce(2, &x, &y, &[q], Some(60)).unwrap();
        assert!(
            (contour - brute).norm() < 1e-8,
            "contour {contour} vs brute {brute}"
        );
    }

    #[test]
    fn particles_k1_matches_residue_sum() {
        // the k = 1 particle-form integral equals the explicit residue sum
        // sum_i prod_{j != i} (q x_i - x_j)/(x_i - x_j) prod_j (1 - x_i y_j)/(1 - q x_i y_j)
        let x = reals(&[0.25, 0.4, 0.6]);
        let y = reals(&[0.2, 0.35, 0.5]);
        let q = 0.55;
        let contour = schur_qsum_contour(&x, &y, &[q], QsumForm::Particles).unwrap();
        let mut residues = c(0.0, 0.0);
        for i in 0..3 {
            let mut term = ONE;
            for j in 0..3 {
                if j != i {
                    term *= (q * x[i] - x[j]) / (x[i] - x[j]);
                }
            }
            for &yj in &y {
                term *= (ONE - x[i] * yj) / (ONE - q * x[i] * yj);
            }
            residues += term;
        }
        assert!(
            (contour - residues).norm() < 1e-10,
            "contour {contour} vs residues {residues}"
        );
        // and the particle sum plus complement sum telescope:
        // E[sum_particles q^a] + E[sum_complement q^p] = sum_{j>=0} q^j
        let complement = schur_qsum_contour(&x, &y, &[q], QsumForm::Complement).unwrap();
        let total = (contour + complement).re;
        assert!((total - 1.0 / (1.0 - q)).abs() < 1e-8, "total {total}");
    }

    #[test]
    fn complement_k2_matches_bruteforce() {
        let x = reals(&[0.3, 0.45]);
        let y = reals(&[0.25, 0.4]);
        let qs = [0.9, 0.85];
        let contour = schur_qsum_contour(&x, &y, &qs, QsumForm::Complement).unwrap();
        let (brute, tail) =
            schur_engine::laplace_observable_bruteforce(2, &x, &y, &qs, Some(130)).unwrap();
        assert!(
            (contour - brute).norm() < 1e-7 + tail,
            "contour {contour} vs brute {brute} (tail {tail:.2e})"
        );
    }

    #[test]
    fn contour_independence_within_annulus() {
        // doubling the radius inside the certified pole-free annulus moves
        // the value by < 1e-10
        let x = reals(&[0.2]);
        let y = reals(&[0.1]);
        let q = 0.5;
        let eval_at = |radius: f64| -> Complex64 {
            let mut contour = CircleContour::around_origin(radius);
            contour.require("origin", c(0.0, 0.0), true).unwrap();
            contour.require("x", x[0], true).unwrap();
            contour.require("1/(q y)", ONE / (q * y[0]), false).unwrap();
            contour.integrate(4096, &|z| {
                integrand_factor(z, q, &x, &y) / ((1.0 - q) * z)
            })
        };
        let a = eval_at(1.0);
        let b = eval_at(2.0);
        assert!((a - b).norm() < 1e-10, "radius dependence: {a} vs {b}");
    }

    #[test]
    fn certificate_failures_are_reported() {
        // q far from 1 and nearly equal radii windows: k = 2 needs
        // r2 < q1 r1 while both enclose x; engineered to be impossible
        let x = reals(&[0.9]);
        let y = reals(&[1.2]);
        let qs = [0.3, 0.29];
        let err = schur_qsum_contour(&x, &y, &qs, QsumForm::Complement).unwrap_err();
        assert!(matches!(err, Error::ContourCertificate(_)), "got {err:?}");
    }

    #[test]
    fn oneq_limit_constants_at_quarter() {
        let lim = oneq_limit_value(1.0, 0.25).unwrap();
        assert!((lim.alpha - 1.0 / 3.0).abs() < 1e-15);
        assert!((lim.sigma - 0.41997).abs() < 1e-5, "sigma = {}", lim.sigma);
        assert!((lim.value - 1.043).abs() < 2e-3, "value = {}", lim.value);
    }

    #[test]
    fn oneq_limit_growth_rate() {
        // log-ratio at large s is dominated by the cubic term
        let u = 0.25;
        let sigma = sigma_const(u);
        let v4 = oneq_limit_value(4.0, u).unwrap().value;
        let v5 = oneq_limit_value(5.0, u).unwrap().value;
        let log_ratio = (v5 / v4).ln();
        let expect = ((5.0f64 * sigma).powi(3) - (4.0f64 * sigma).powi(3)) / 12.0
            - 1.5 * (5.0f64 / 4.0).ln();
        assert!((log_ratio - expect).abs() < 1e-12);
        assert!(v5 > v4);
    }

    #[test]
    fn steepest_descent_helpers() {
        for &u in &[0.16, 0.25, 0.49] {
            let zc = c(critical_point(u), 0.0);
            let alpha = alpha_const(u);
            let sigma = sigma_const(u);
            // F0'(z_c) = 0 by centered differences
            let h = 1e-6;
            let d = (f0(zc + c(h, 0.0), u) - f0(zc - c(h, 0.0), u)) / (2.0 * h);
            assert!(d.norm() < 1e-8, "F0'(zc) = {d}");
            assert!((f0(zc, u) + c(alpha, 0.0)).norm() < 1e-13);
            assert!((f1(zc, u) + c(alpha, 0.0)).norm() < 1e-13);
            // F2(z_c) = sigma^3 - alpha
            assert!(
                (f2_phase(zc, u) - c(sigma.powi(3) - alpha, 0.0)).norm() < 1e-13,
                "F2(zc) = {}",
                f2_phase(zc, u)
            );
        }
    }

    #[test]
    fn sigma_forms_agree() {
        for i in 1..100 {
            let u = i as f64 / 100.0;
            let a = sigma_const(u);
            let b = sigma_const_height_form(u);
            assert!((a - b).abs() < 1e-12 * a.max(1e-12), "u={u}: {a} vs {b}");
        }
    }

    #[test]
    fn oneq_finite_n_identity() {
        // before any scaling, the contour value at N = 3 equals the
        // brute-force Schur expectation at x = 1, y = u
        let (s, u, n) = (1.0, 0.25, 3usize);
        let q = 1.0 - s * (n as f64).powf(-1.0 / 3.0);
        let seq = oneq_scaling_sequence(s, u, &[n]).unwrap();
        let scale = (-alpha_const(u) * n as f64 * q.ln()).exp();
        let contour_raw = seq[0].1 / scale;
        let x = reals(&[1.0, 1.0, 1.0]);
        let y = reals(&[u, u, u]);
        let (brute, _) =
            schur_engine::laplace_observable_bruteforce(n, &x, &y, &[q], Some(80)).unwrap();
        assert!(
            (contour_raw - brute.re).abs() < 1e-8,
            "contour {contour_raw} vs brute {brute}"
        );
    }

    #[test]
    fn airy_laplace_k1_closed_form() {
        for &s in &[0.5f64, 1.0, 2.0, 4.0] {
            let height = (34.0f64 / s).sqrt();
            let got = airy_laplace_rhs(&[s], &[0.0], height, 320).unwrap();
            let expect =
                0.5 / std::f64::consts::PI.sqrt() * s.powf(-1.5) * (s * s * s / 12.0).exp();
            assert!(
                (got - expect).abs() < 1e-10 * expect,
                "s={s}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn airy_laplace_k1_value_at_one() {
        let got = airy_laplace_rhs(&[1.0], &[0.0], 6.0, 320).unwrap();
        assert!((got - 0.3066).abs() < 1e-4, "{got}");
        // s = 2 closed-form substitution
        let got2 = airy_laplace_rhs(&[2.0], &[0.0], 4.2, 320).unwrap();
        let expect2 = 0.5 / std::f64::consts::PI.sqrt() * 2.0f64.powf(-1.5) * (8.0f64 / 12.0).exp();
        assert!((got2 - expect2).abs() < 1e-9);
    }

    #[test]
    fn airy_laplace_v_conditions_enforced() {
        let err = airy_laplace_rhs(&[1.0, 1.0], &[0.0, 0.9], 6.0, 160).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        let err = airy_laplace_rhs(&[1.0], &[0.0], 2.0, 160).unwrap_err();
        assert!(matches!(err, Error::ContourCertificate(_)));
    }
}
