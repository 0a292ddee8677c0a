//! Ground-truth random-matrix stack: GUE and GUE-corners sampling, Airy
//! function/kernel, Fredholm-determinant Tracy-Widom F2, and Airy
//! correlation quadrature.

pub mod airy;
pub mod fredholm;

pub use airy::{airy_fn, airy_kernel, airy_kernel_integral};
pub use fredholm::{
    airy_moment_lhs, airy_rho1_laplace, airy_rho2_laplace, tracy_widom_f2,
    tracy_widom_f2_checked, tw_mean_variance,
};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::CounterRng;
use crate::stats;
use num_complex::Complex64;
use rayon::prelude::*;

/// Hermitian matrix with only the lower triangle stored (row-major, row i
/// holds entries (i,0..=i)); self-adjointness is exact by construction.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    dim: usize,
    lower: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if i >= j {
            self.lower[i * (i + 1) / 2 + j]
        } else {
            self.lower[j * (j + 1) / 2 + i].conj()
        }
    }

    /// Dense row-major copy of the leading k x k corner.
    pub fn corner_dense(&self, k: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); k * k];
        for i in 0..k {
            for j in 0..k {
                out[i * k + j] = self.get(i, j);
            }
        }
        out
    }

    pub fn trace_corner(&self, k: usize) -> f64 {
        (0..k).map(|i| self.get(i, i).re).sum()
    }
}

/// Sample a GUE matrix: A = (X + X*)/2 with X filled by independent standard
/// complex Gaussians, so diagonals are N(0,1) real and off-diagonals have
/// independent N(0,1/2) real and imaginary parts.
pub fn sample_gue(k: usize, seed: u64, stream: u64) -> HermitianMatrix {
    let mut rng = CounterRng::new(seed, stream);
    let mut lower = Vec::with_capacity(k * (k + 1) / 2);
    for i in 0..k {
        for j in 0..=i {
            if i == j {
                let (z, _) = rng.normal_pair();
                lower.push(Complex64::new(z, 0.0));
            } else {
                let (re, im) = rng.normal_pair();
                let s = 0.5f64.sqrt();
                lower.push(Complex64::new(s * re, s * im));
            }
        }
    }
    HermitianMatrix { dim: k, lower }
}

/// Triangular array of corner eigenvalues lambda_i^j, 1 <= i <= j <= k,
/// stored per level in ascending order.
#[derive(Debug, Clone)]
pub struct CornersSample {
    pub levels: Vec<Vec<f64>>,
}

impl CornersSample {
    pub fn level(&self, j: usize) -> &[f64] {
        &self.levels[j - 1]
    }

    /// lambda_i^{j+1} <= lambda_i^j <= lambda_{i+1}^{j+1} for all valid i, j.
    pub fn check_interlacing(&self, tol: f64) -> bool {
        for j in 1..self.levels.len() {
            let upper = &self.levels[j]; // level j+1 (0-based j)
            let lower = &self.levels[j - 1];
            for i in 0..lower.len() {
                if !(upper[i] <= lower[i] + tol && lower[i] <= upper[i + 1] + tol) {
                    return false;
                }
            }
        }
        true
    }
}

/// Eigenvalues of every leading principal corner of M up to k, via
/// Householder tridiagonalization plus implicit-shift QL.
pub fn corners_process(m: &HermitianMatrix, k: usize) -> Result<CornersSample> {
    if k > m.dim() {
        return Err(Error::Domain(format!("k = {k} exceeds dim {}", m.dim())));
    }
    let mut levels = Vec::with_capacity(k);
    for j in 1..=k {
        let dense = m.corner_dense(j);
        levels.push(linalg::hermitian_eigenvalues(&dense, j)?);
    }
    Ok(CornersSample { levels })
}

/// Statistics of the rescaled largest GUE eigenvalue against F2.
#[derive(Debug, Clone)]
pub struct EdgeCheckReport {
    pub samples: usize,
    pub ks_distance: f64,
    pub mean_rescaled: f64,
    pub min_top_gap: f64,
}

/// Sample `samples` GUE matrices of size n, rescale the largest eigenvalue
/// as (lambda_max - 2 sqrt(n)) n^{1/6}, and compare against F2.
pub fn gue_edge_check(n: usize, samples: usize, seed: u64) -> Result<EdgeCheckReport> {
    let rescaled: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let m = sample_gue(n, seed, s as u64);
            let dense = m.corner_dense(n);
            let eig = linalg::hermitian_eigenvalues(&dense, n).expect("eigensolver");
            let top = eig[n - 1];
            let gap = eig[n - 1] - eig[n - 2];
            ((top - 2.0 * (n as f64).sqrt()) * (n as f64).powf(1.0 / 6.0), gap)
        })
        .collect();
    let min_top_gap = rescaled.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let xs: Vec<f64> = rescaled.iter().map(|r| r.0).collect();
    let (mean, _) = stats::mean_var(&xs);

    // reference CDF on a lattice of F2 values, interpolated linearly
    let f2_grid_lo = -10.0;
    let f2_grid_hi = 6.0;
    let f2_step = 0.05;
    let npts = ((f2_grid_hi - f2_grid_lo) / f2_step) as usize + 1;
    let f2_vals: Vec<f64> = (0..npts)
        .map(|i| tracy_widom_f2(f2_grid_lo + i as f64 * f2_step, 48))
        .collect::<Result<_>>()?;
    let cdf = move |x: f64| -> f64 {
        if x <= f2_grid_lo {
            return 0.0;
        }
        if x >= f2_grid_hi {
            return 1.0;
        }
        let pos = (x - f2_grid_lo) / f2_step;
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        f2_vals[i] * (1.0 - frac) + f2_vals[(i + 1).min(npts - 1)] * frac
    };
    let ks = stats::ks_distance(&xs, cdf);
    Ok(EdgeCheckReport { samples, ks_distance: ks, mean_rescaled: mean, min_top_gap })
}
