//! Shared parameter sets for the benchmarks.

use icelab_core::Complex64;

pub fn spectral_vectors(n: usize) -> (Vec<Complex64>, Vec<Complex64>, Complex64) {
    let x = (0..n).map(|i| Complex64::new(0.1 + 0.07 * i as f64, 0.0)).collect();
    let y = (0..n).map(|i| Complex64::new(0.12 + 0.065 * i as f64, 0.0)).collect();
    (x, y, Complex64::new(0.45, 0.0))
}
