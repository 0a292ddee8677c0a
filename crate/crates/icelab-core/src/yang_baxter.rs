//! The cross-vertex / R-matrix and an exhaustive Yang-Baxter equation
//! checker, plus the partition-function symmetry test it implies.
//!
//! Tensor-leg convention: leg 1 is the bottom line, leg 2 the middle and
//! leg 3 the top line of the three-line diagram; the cross vertex between
//! lines carrying u and v uses the weight family at ratio u/v. The scalar
//! form sums the three-vertex products over internal edges for a fixed
//! 6-bit boundary; the matrix form checks
//! `R23(v) R13(u) R12(u/v) = R12(u/v) R13(u) R23(v)` on (C^2)^{x3}.

use crate::core_model::{SpectralParams, WeightTable};
use crate::error::Result;
use crate::exact_enum;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The cross vertex between lines with spectral parameters u and v: its
/// weight function is the ordinary vertex family evaluated at u/v.
#[derive(Debug, Clone, Copy)]
pub struct CrossVertex {
    pub ratio: Complex64,
    table: WeightTable,
}

impl CrossVertex {
    pub fn new(u: Complex64, v: Complex64, t: Complex64) -> Result<Self> {
        let ratio = u / v;
        let table = WeightTable::from_spectral(SpectralParams::new(ratio, t)?)?;
        Ok(CrossVertex { ratio, table })
    }

    pub fn weight(&self, i1: u8, j1: u8, i2: u8, j2: u8) -> Complex64 {
        self.table.weight_of_edges(i1, j1, i2, j2)
    }
}

/// 4x4 R-matrix at parameter u in the basis {e0e0, e0e1, e1e0, e1e1}.
#[derive(Debug, Clone)]
pub struct RMatrix(pub [[Complex64; 4]; 4]);

impl RMatrix {
    pub fn new(u: Complex64, t: Complex64) -> Result<Self> {
        let w = WeightTable::from_spectral(SpectralParams::new(u, t)?)?;
        let one = Complex64::new(1.0, 0.0);
        let mut m = [[ZERO; 4]; 4];
        m[0][0] = one;
        m[3][3] = one;
        m[1][1] = w.b1;
        m[1][2] = w.c2;
        m[2][1] = w.c1;
        m[2][2] = w.b2;
        Ok(RMatrix(m))
    }

    /// Embed into (C^2)^{x3} acting on tensor legs (p, q), identity on the rest.
    pub fn embed(&self, p: usize, q: usize) -> [[Complex64; 8]; 8] {
        let mut out = [[ZERO; 8]; 8];
        for row in 0..8usize {
            for col in 0..8usize {
                let bits_r = [(row >> 2) & 1, (row >> 1) & 1, row & 1];
                let bits_c = [(col >> 2) & 1, (col >> 1) & 1, col & 1];
                let mut ok = true;
                for l in 0..3 {
                    if l != p && l != q && bits_r[l] != bits_c[l] {
                        ok = false;
                    }
                }
                if !ok {
                    continue;
                }
                let r_idx = 2 * bits_r[p] + bits_r[q];
                let c_idx = 2 * bits_c[p] + bits_c[q];
                out[row][col] = self.0[r_idx][c_idx];
            }
        }
        out
    }
}

fn mat_mul(a: &[[Complex64; 8]; 8], b: &[[Complex64; 8]; 8]) -> [[Complex64; 8]; 8] {
    let mut out = [[ZERO; 8]; 8];
    for (i, row) in out.iter_mut().enumerate() {
        for k in 0..8 {
            let aik = a[i][k];
            if aik == ZERO {
                continue;
            }
            for (j, slot) in row.iter_mut().enumerate() {
                *slot += aik * b[k][j];
            }
        }
    }
    out
}

/// LHS - RHS of the Yang-Baxter equation for one 6-bit boundary
/// `(i1, i2, i3, j1, j2, j3)`, summing internal edges (k1, k2, k3) on the
/// left and (k1', k2', k3') on the right.
pub fn ybe_residual(
    u: Complex64,
    v: Complex64,
    t: Complex64,
    boundary: (u8, u8, u8, u8, u8, u8),
) -> Result<Complex64> {
    let (i1, i2, i3, j1, j2, j3) = boundary;
    let cross = CrossVertex::new(u, v, t)?;
    let wu = WeightTable::from_spectral(SpectralParams::new(u, t)?)?;
    let wv = WeightTable::from_spectral(SpectralParams::new(v, t)?)?;

    let mut lhs = ZERO;
    let mut rhs = ZERO;
    for k1 in 0..2u8 {
        for k2 in 0..2u8 {
            for k3 in 0..2u8 {
                lhs += cross.weight(i2, i1, k2, k1)
                    * wu.weight_of_edges(i3, k1, k3, j1)
                    * wv.weight_of_edges(k3, k2, j3, j2);
                rhs += wv.weight_of_edges(i3, i2, k3, k2)
                    * wu.weight_of_edges(k3, i1, j3, k1)
                    * cross.weight(k2, k1, j2, j1);
            }
        }
    }
    Ok(lhs - rhs)
}

/// Maximum |residual| over all 64 boundaries, with the worst boundary.
pub fn ybe_max_residual(
    u: Complex64,
    v: Complex64,
    t: Complex64,
) -> Result<(f64, (u8, u8, u8, u8, u8, u8))> {
    let mut worst = 0.0f64;
    let mut worst_boundary = (0, 0, 0, 0, 0, 0);
    for bits in 0..64u8 {
        let b = (
            bits & 1,
            (bits >> 1) & 1,
            (bits >> 2) & 1,
            (bits >> 3) & 1,
            (bits >> 4) & 1,
            (bits >> 5) & 1,
        );
        let r = ybe_residual(u, v, t, b)?.norm();
        if r > worst {
            worst = r;
            worst_boundary = b;
        }
    }
    Ok((worst, worst_boundary))
}

/// Max-entry residual of R23(v) R13(u) R12(u/v) = R12(u/v) R13(u) R23(v).
pub fn ybe_matrix_check(u: Complex64, v: Complex64, t: Complex64) -> Result<f64> {
    let r12 = RMatrix::new(u / v, t)?.embed(0, 1);
    let r13 = RMatrix::new(u, t)?.embed(0, 2);
    let r23 = RMatrix::new(v, t)?.embed(1, 2);
    let lhs = mat_mul(&mat_mul(&r23, &r13), &r12);
    let rhs = mat_mul(&mat_mul(&r12, &r13), &r23);
    let mut max = 0.0f64;
    for i in 0..8 {
        for j in 0..8 {
            max = max.max((lhs[i][j] - rhs[i][j]).norm());
        }
    }
    Ok(max)
}

/// |Z(..., y_i, y_{i+1}, ...) - Z(..., y_{i+1}, y_i, ...)| for the DWBC
/// partition function computed by enumeration; `swap` is the 0-based index i.
/// Swapping in x instead is the same check with the roles exchanged.
pub fn z_symmetry_check(
    x: &[Complex64],
    y: &[Complex64],
    t: Complex64,
    swap: usize,
    swap_in_x: bool,
) -> Result<f64> {
    let n = x.len();
    if n < 2 {
        return Ok(0.0);
    }
    let z0 = exact_enum::dwbc_partition(n, x, y, t)?;
    let (xs, ys) = if swap_in_x {
        let mut xs = x.to_vec();
        xs.swap(swap, swap + 1);
        (xs, y.to_vec())
    } else {
        let mut ys = y.to_vec();
        ys.swap(swap, swap + 1);
        (x.to_vec(), ys)
    };
    let z1 = exact_enum::dwbc_partition(n, &xs, &ys, t)?;
    Ok((z0 - z1).norm())
}
