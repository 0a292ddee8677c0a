//! Double-double arithmetic (~31 significant digits) for the few places
//! where plain f64 cancellation would eat into verification tolerances:
//! determinant evaluations at nearly coincident parameters and the Airy
//! Maclaurin series at moderate arguments.
//!
//! Standard error-free transformations (Dekker/Knuth), products via FMA.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

// Dekker splitting: exact products without relying on a hardware FMA
// (the libm soft-fma fallback is an order of magnitude slower).
const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1

#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, other);
        let p2 = p2 + self.lo * other;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r = r.sub(other.mul_f64(q2));
        let q3 = r.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }
}

/// Complex number with double-double real and imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub const ZERO: DdComplex = DdComplex { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: DdComplex = DdComplex { re: Dd::ONE, im: Dd::ZERO };

    pub fn from_c64(z: Complex64) -> DdComplex {
        DdComplex { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    pub fn from_f64(x: f64) -> DdComplex {
        DdComplex { re: Dd::from_f64(x), im: Dd::ZERO }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(self, o: DdComplex) -> DdComplex {
        DdComplex { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    pub fn sub(self, o: DdComplex) -> DdComplex {
        DdComplex { re: self.re.sub(o.re), im: self.im.sub(o.im) }
    }

    pub fn neg(self) -> DdComplex {
        DdComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(self, o: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn div(self, o: DdComplex) -> DdComplex {
        let denom = o.re.mul(o.re).add(o.im.mul(o.im));
        let num_re = self.re.mul(o.re).add(self.im.mul(o.im));
        let num_im = self.im.mul(o.re).sub(self.re.mul(o.im));
        DdComplex { re: num_re.div(denom), im: num_im.div(denom) }
    }

    /// |z|^2 rounded to f64, enough for pivot comparisons.
    pub fn norm_sqr_f64(self) -> f64 {
        let r = self.re.to_f64();
        let i = self.im.to_f64();
        r * r + i * i
    }

    pub fn is_zero(self) -> bool {
        self.re.hi == 0.0 && self.re.lo == 0.0 && self.im.hi == 0.0 && self.im.lo == 0.0
    }

    pub fn powi(self, mut e: u32) -> DdComplex {
        let mut base = self;
        let mut acc = DdComplex::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }
}

/// Determinant of a complex matrix in double-double precision, by partially
/// pivoted LU. Entries should be built with dd arithmetic from the exact
/// f64 inputs for full benefit.
pub fn det_complex_dd(a: &mut [DdComplex], n: usize) -> DdComplex {
    debug_assert_eq!(a.len(), n * n);
    let mut det = DdComplex::ONE;
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].norm_sqr_f64();
        for i in k + 1..n {
            let v = a[i * n + k].norm_sqr_f64();
            if v > best {
                best = v;
                p = i;
            }
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = det.neg();
        }
        let piv = a[k * n + k];
        if piv.is_zero() {
            return DdComplex::ZERO;
        }
        det = det.mul(piv);
        for i in k + 1..n {
            let factor = a[i * n + k].div(piv);
            if factor.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let t = factor.mul(a[k * n + j]);
                a[i * n + j] = a[i * n + j].sub(t);
            }
        }
    }
    det
}
