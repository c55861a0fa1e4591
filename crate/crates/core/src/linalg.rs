//! Small dense complex linear-algebra helpers shared across the crate.
//!
//! Spectral norms are computed from the symmetric eigendecomposition of the
//! Hermitian square `M†M`, which also yields the top singular triple used by
//! the cutting-plane separation oracle.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

/// Largest singular value of a complex matrix.
pub fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    let h = m.adjoint() * m;
    let eig = SymmetricEigen::new(h);
    eig.eigenvalues
        .iter()
        .cloned()
        .fold(0.0_f64, f64::max)
        .max(0.0)
        .sqrt()
}

/// Top singular triple `(σ, u, v)` with `σ = max ‖M v‖`, `u = M v / σ`.
///
/// For σ = 0 the returned vectors are the first coordinate vectors.
pub fn top_singular_triple(m: &DMatrix<C64>) -> (f64, DVector<C64>, DVector<C64>) {
    let h = m.adjoint() * m;
    let n = h.nrows();
    let eig = SymmetricEigen::new(h);
    let mut best = 0usize;
    for i in 1..eig.eigenvalues.len() {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    let sigma = eig.eigenvalues[best].max(0.0).sqrt();
    let mut v = DVector::from_iterator(n, eig.eigenvectors.column(best).iter().cloned());
    let vnorm = v.norm();
    if vnorm > 0.0 {
        v /= C64::new(vnorm, 0.0);
    } else {
        v = DVector::zeros(n);
        v[0] = C64::new(1.0, 0.0);
    }
    let mv = m * &v;
    let mvnorm = mv.norm();
    let u = if mvnorm > 0.0 {
        mv / C64::new(mvnorm, 0.0)
    } else {
        let mut u = DVector::zeros(m.nrows());
        u[0] = C64::new(1.0, 0.0);
        u
    };
    (sigma, u, v)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Max entrywise deviation from being Hermitian.
pub fn hermitian_defect(m: &DMatrix<C64>) -> f64 {
    let d = m - m.adjoint();
    d.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Max entrywise absolute difference between two matrices.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max)
}
