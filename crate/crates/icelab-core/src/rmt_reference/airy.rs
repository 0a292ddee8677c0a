//! Airy function, derivative and kernel.
//!
//! Maclaurin series in double-double for |x| <= 9 (the alternating terms
//! reach ~1e4 there, so plain f64 accumulation would lose five digits),
//! asymptotic expansions beyond. At the switch point both branches are good
//! to ~1e-15 relative, so the switchover mismatch stays far below 1e-12.

use crate::dd::Dd;
use crate::error::{Error, Result};

/// Ai(0) = 3^{-2/3} / Gamma(2/3)
pub const AI_ZERO: f64 = 0.355028053887817239;
/// Ai'(0) = -3^{-1/3} / Gamma(1/3)
pub const AIP_ZERO: f64 = -0.258819403792806798;

// The same constants in double-double: the x > 0 series cancels sixteen
// decades at the switch point, so the constants' own rounding would
// otherwise dominate the result.
const AI_ZERO_DD: Dd = Dd { hi: 0.3550280538878172, lo: 2.05233632436212e-17 };
const AIP_ZERO_DD: Dd = Dd { hi: -0.2588194037928068, lo: 2.522243111610832e-17 };

const SERIES_SWITCH: f64 = 9.0;
/// Supported argument range of [`airy_fn`].
pub const AIRY_RANGE: f64 = 40.0;

/// Ai(x) and Ai'(x) for |x| <= 40; a range error outside.
pub fn airy_fn(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() || x.abs() > AIRY_RANGE {
        return Err(Error::Range { value: x, lo: -AIRY_RANGE, hi: AIRY_RANGE });
    }
    Ok(airy_unchecked(x))
}

/// Internal evaluation, additionally treating x > 40 as exactly zero
/// (|Ai(40)| < 1e-74, below any tolerance used here).
pub(crate) fn airy_clamped(x: f64) -> (f64, f64) {
    if x > AIRY_RANGE {
        (0.0, 0.0)
    } else {
        airy_unchecked(x)
    }
}

fn airy_unchecked(x: f64) -> (f64, f64) {
    if x.abs() <= SERIES_SWITCH {
        airy_series_dd(x)
    } else if x > 0.0 {
        airy_asymptotic_pos(x)
    } else {
        airy_asymptotic_neg(-x)
    }
}

/// Maclaurin series: Ai = Ai(0) f + Ai'(0) g with f, g the standard Airy
/// ODE solutions; double-double accumulation.
fn airy_series_dd(x: f64) -> (f64, f64) {
    let xd = Dd::from_f64(x);
    let x3 = xd.mul(xd).mul(xd);

    // f  = 1 + sum_k x^{3k} / prod (3j)(3j-1)
    // g  = x + sum_k x^{3k+1} / prod (3j+1)(3j)
    // f' = sum_{k>=1} d_k x^{3k-1},  d_1 = 1/2,  d_{k+1}/d_k = 1/((3k)(3k+2))
    // g' = 1 + sum_{k>=1} e_k x^{3k}, e_1 = 1/3, e_{k+1}/e_k = 1/((3k+1)(3k+3))
    let mut tf = Dd::ONE;
    let mut sum_f = Dd::ONE;
    let mut tg = xd;
    let mut sum_g = xd;
    let mut tfp = xd.mul(xd).mul_f64(0.5);
    let mut sum_fp = tfp;
    let mut tgp = x3.div(Dd::from_f64(3.0));
    let mut sum_gp = Dd::ONE.add(tgp);

    for k in 1..80usize {
        // denominators are exact small-integer f64s, so dd division keeps
        // every term accurate to ~1e-32 relative
        let k3 = 3.0 * k as f64;
        tf = tf.mul(x3).div(Dd::from_f64(k3 * (k3 - 1.0)));
        sum_f = sum_f.add(tf);
        tg = tg.mul(x3).div(Dd::from_f64((k3 + 1.0) * k3));
        sum_g = sum_g.add(tg);
        // derivative terms for index k+1
        tfp = tfp.mul(x3).div(Dd::from_f64(k3 * (k3 + 2.0)));
        sum_fp = sum_fp.add(tfp);
        tgp = tgp.mul(x3).div(Dd::from_f64((k3 + 1.0) * (k3 + 3.0)));
        sum_gp = sum_gp.add(tgp);
        if tf.hi.abs() < 1e-25 && tg.hi.abs() < 1e-25 {
            break;
        }
    }
    let ai = AI_ZERO_DD.mul(sum_f).add(AIP_ZERO_DD.mul(sum_g));
    let aip = AI_ZERO_DD.mul(sum_fp).add(AIP_ZERO_DD.mul(sum_gp));
    (ai.to_f64(), aip.to_f64())
}

/// Coefficients u_k (and v_k = u_k (6k+1)/(1-6k)) of the Poincare expansions.
fn uv_coefficients(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = Vec::with_capacity(count);
    let mut v = Vec::with_capacity(count);
    u.push(1.0);
    v.push(1.0);
    for k in 1..count {
        let kf = k as f64;
        let prev = u[k - 1];
        let next =
            prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / (216.0 * kf * (2.0 * kf - 1.0));
        u.push(next);
        v.push(next * (6.0 * kf + 1.0) / (1.0 - 6.0 * kf));
    }
    (u, v)
}

fn airy_asymptotic_pos(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = uv_coefficients(26);
    let mut su = 0.0;
    let mut sv = 0.0;
    let mut zp = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..u.len() {
        let term = u[k] * zp;
        if term.abs() > prev {
            break; // past the optimal truncation point
        }
        prev = term.abs();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        su += sign * term;
        sv += sign * v[k] * zp;
        zp /= zeta;
    }
    let pref = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    (pref / x.powf(0.25) * su, -pref * x.powf(0.25) * sv)
}

fn airy_asymptotic_neg(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let (u, v) = uv_coefficients(26);
    let mut p = 0.0;
    let mut q = 0.0;
    let mut r = 0.0;
    let mut s = 0.0;
    for k in 0..u.len() / 2 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        p += sign * u[2 * k] * zeta.powi(-2 * k as i32);
        q += sign * u[2 * k + 1] * zeta.powi(-(2 * k as i32) - 1);
        r += sign * v[2 * k] * zeta.powi(-2 * k as i32);
        s += sign * v[2 * k + 1] * zeta.powi(-(2 * k as i32) - 1);
    }
    let phase = zeta - std::f64::consts::FRAC_PI_4;
    let root_pi = std::f64::consts::PI.sqrt();
    let ai = (phase.cos() * p + phase.sin() * q) / (root_pi * z.powf(0.25));
    let aip = z.powf(0.25) / root_pi * (phase.sin() * r - phase.cos() * s);
    (ai, aip)
}

/// Airy kernel (Ai(x) Ai'(y) - Ai(y) Ai'(x)) / (x - y), with the confluent
/// diagonal value Ai'(x)^2 - x Ai(x)^2 used when |x - y| is tiny.
pub fn airy_kernel(x: f64, y: f64) -> f64 {
    if (x - y).abs() < 1e-7 {
        let m = 0.5 * (x + y);
        let (ai, aip) = airy_clamped(m);
        aip * aip - m * ai * ai
    } else {
        let (ax, apx) = airy_clamped(x);
        let (ay, apy) = airy_clamped(y);
        (ax * apy - ay * apx) / (x - y)
    }
}

/// Integral form of the kernel, int_0^infty Ai(x+a) Ai(y+a) da, by panel
/// Gauss-Legendre quadrature. Slower; used to cross-check the closed form.
pub fn airy_kernel_integral(x: f64, y: f64, panels: usize, nodes: usize) -> f64 {
    let upper = 40.0 - x.max(y); // beyond this the integrand has underflowed
    if upper <= 0.0 {
        return 0.0;
    }
    let mut total = 0.0;
    let width = upper / panels as f64;
    for p in 0..panels {
        let a0 = p as f64 * width;
        let (xs, ws) = crate::linalg::gauss_legendre_on(nodes, a0, a0 + width);
        for (a, w) in xs.iter().zip(&ws) {
            total += w * airy_clamped(x + a).0 * airy_clamped(y + a).0;
        }
    }
    total
}
