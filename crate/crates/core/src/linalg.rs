//! Small dense helpers over `nalgebra` complex matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The rank-one operator `f ⊗ g : h ↦ ⟨h, g⟩ f`, i.e. the matrix `f gᴴ`.
pub fn outer(f: &CVector, g: &CVector) -> CMatrix {
    f * g.adjoint()
}

/// `⟨f, g⟩ = Σ f_i conj(g_i)`.
pub fn inner(f: &CVector, g: &CVector) -> Complex64 {
    g.dotc(f)
}

/// Orthogonal projector onto the complement of `span{v}`.
pub fn complement_projector(v: &CVector) -> CMatrix {
    let n = v.len();
    let nn = v.norm_squared();
    if nn == 0.0 {
        return CMatrix::identity(n, n);
    }
    CMatrix::identity(n, n) - outer(v, v).unscale(nn)
}

/// Removes the component of `x` along `v`.
pub fn project_off(x: &CVector, v: &CVector) -> CVector {
    let nn = v.norm_squared();
    if nn == 0.0 {
        return x.clone();
    }
    x - v * (inner(x, v) / nn)
}

pub fn fro(m: &CMatrix) -> f64 {
    m.norm()
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Smallest singular value.
pub fn sigma_min(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Entry-wise complex conjugate.
pub fn conj_vec(v: &CVector) -> CVector {
    v.map(|z| z.conj())
}

/// `p(M)` for a polynomial with ascending coefficients, by Horner.
pub fn poly_of_matrix(coeffs: &[Complex64], m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let mut acc = CMatrix::zeros(n, n);
    for &c in coeffs.iter().rev() {
        acc = &acc * m;
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    acc
}

/// Relative-to-scale comparison used throughout: `‖a − b‖_F ≤ tol · max(scale, tiny)`.
pub fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    let scale = fro(a).max(fro(b)).max(f64::MIN_POSITIVE);
    fro(&(a - b)) <= tol * scale
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn outer_matches_definition() {
        let f = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let g = CVector::from_vec(vec![c(0.0, 2.0), c(3.0, 0.0)]);
        let h = CVector::from_vec(vec![c(1.0, 1.0), c(-1.0, 0.5)]);
        let lhs = outer(&f, &g) * &h;
        let rhs = &f * inner(&h, &g);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn horner_on_matrix() {
        // p(z) = 2 - z + z^2 at a nilpotent 2x2 shift: 2I - S
        let mut s = CMatrix::zeros(2, 2);
        s[(1, 0)] = ONE;
        let p = poly_of_matrix(&[c(2.0, 0.0), c(-1.0, 0.0), ONE], &s);
        assert_eq!(p[(0, 0)], c(2.0, 0.0));
        assert_eq!(p[(1, 0)], c(-1.0, 0.0));
        assert_eq!(p[(0, 1)], ZERO);
    }

    #[test]
    fn projector_kills_direction() {
        let v = CVector::from_vec(vec![c(1.0, 0.0), c(0.5, -0.5), c(0.0, 2.0)]);
        let p = complement_projector(&v);
        assert!((&p * &v).norm() < 1e-14);
        assert!((&p * &p - &p).norm() < 1e-14);
    }
}
