//! The model space `K_u = H² ⊖ uH²` for a finite Blaschke product `u`.
//!
//! Elements are stored as coefficient vectors in the Takenaka–Malmquist basis
//!
//! ```text
//! e_k(z) = √(1 − |a_k|²) / (1 − ā_k z) · ∏_{j<k} (z − a_j)/(1 − ā_j z)
//! ```
//!
//! which is orthonormal in `L²(T)`. For `u = z^n` it is the monomial basis,
//! so truncated Toeplitz operators become literal Toeplitz matrices.
//! Integrals over the circle use the uniform trapezoid rule, which converges
//! geometrically for the rational integrands that occur here.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::error::{Result, TtoError};
use crate::linalg::{conj_vec, inner, CMatrix, CVector, ONE, ZERO};

const MAX_QUAD_POINTS: usize = 1 << 17;
const GRAM_TOL: f64 = 1e-13;

/// Relative tolerances shared by every membership and classification test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// membership in the TTO space, relative to `‖A‖`
    pub tto: f64,
    /// parallelism test in type classification
    pub parallel: f64,
    /// commutator test against `S_α`, relative to `‖A‖`
    pub commutant: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tto: 1e-8,
            parallel: 1e-8,
            commutant: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn scaled(self, factor: f64) -> Self {
        Tolerances {
            tto: self.tto * factor,
            parallel: self.parallel * factor,
            commutant: self.commutant * factor,
        }
    }
}

/// Optional overrides when constructing a [`ModelSpace`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpaceConfig {
    pub quad_points: Option<usize>,
    pub tolerances: Tolerances,
}

/// An element of `K_u`, as coordinates in the Takenaka–Malmquist basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelVector {
    coords: CVector,
}

impl ModelVector {
    pub fn new(coords: CVector) -> Self {
        ModelVector { coords }
    }

    pub fn from_slice(coords: &[Complex64]) -> Self {
        ModelVector::new(CVector::from_column_slice(coords))
    }

    pub fn zeros(n: usize) -> Self {
        ModelVector::new(CVector::zeros(n))
    }

    pub fn coords(&self) -> &CVector {
        &self.coords
    }

    pub fn into_coords(self) -> CVector {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn scale(&self, c: Complex64) -> ModelVector {
        ModelVector::new(&self.coords * c)
    }

    pub fn add(&self, other: &ModelVector) -> ModelVector {
        ModelVector::new(&self.coords + &other.coords)
    }

    pub fn sub(&self, other: &ModelVector) -> ModelVector {
        ModelVector::new(&self.coords - &other.coords)
    }

    /// `⟨self, other⟩` in `K_u`.
    pub fn inner(&self, other: &ModelVector) -> Complex64 {
        inner(&self.coords, &other.coords)
    }
}

impl From<CVector> for ModelVector {
    fn from(coords: CVector) -> Self {
        ModelVector::new(coords)
    }
}

/// `K_u` together with its quadrature grid and the cached operators every
/// downstream computation needs (the conjugation `C` and the compressed shift `S`).
#[derive(Debug, Clone)]
pub struct ModelSpace {
    u: BlaschkeProduct,
    quad_points: usize,
    grid: Vec<Complex64>,
    u_grid: Vec<Complex64>,
    /// n × N table of basis values on the grid
    basis: CMatrix,
    conj: CMatrix,
    shift: CMatrix,
    k0: ModelVector,
    k0_tilde: ModelVector,
    tol: Tolerances,
}

fn next_pow2(n: usize) -> usize {
    n.next_power_of_two()
}

fn unit_grid(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
        .collect()
}

/// `(1/N) Σ f(ζ_j) conj(g(ζ_j))` over the uniform grid.
pub fn inner_product(f_vals: &[Complex64], g_vals: &[Complex64]) -> Result<Complex64> {
    if f_vals.len() != g_vals.len() {
        return Err(TtoError::GridMismatch(f_vals.len(), g_vals.len()));
    }
    if f_vals.is_empty() {
        return Ok(ZERO);
    }
    let s: Complex64 = f_vals.iter().zip(g_vals).map(|(f, g)| f * g.conj()).sum();
    Ok(s / f_vals.len() as f64)
}

/// `∫_T f dm` by the trapezoid rule, doubling the grid from `start` points until
/// successive values agree to `1e-12` (relative to `max(1, |value|)`).
pub fn integrate_adaptive<F>(f: F, start: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut n = next_pow2(start.max(8));
    let eval = |n: usize| -> Result<Complex64> {
        let mut s = ZERO;
        for z in unit_grid(n) {
            s += f(z)?;
        }
        Ok(s / n as f64)
    };
    let mut prev = eval(n)?;
    while n < MAX_QUAD_POINTS {
        n *= 2;
        let next = eval(n)?;
        if (next - prev).norm() < 1e-12 * next.norm().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(TtoError::failure("adaptive quadrature did not converge", f64::NAN))
}

impl ModelSpace {
    pub fn new(u: BlaschkeProduct) -> Result<Self> {
        Self::with_config(u, SpaceConfig::default())
    }

    pub fn with_config(u: BlaschkeProduct, config: SpaceConfig) -> Result<Self> {
        let n = u.degree();
        let min_points = 4 * (2 * n + 1);
        match config.quad_points {
            Some(q) => {
                if !q.is_power_of_two() || q < min_points {
                    return Err(TtoError::InvalidArgument(format!(
                        "quad_points must be a power of two and at least {min_points}, got {q}"
                    )));
                }
                let space = Self::build(u, q, config.tolerances)?;
                let err = space.gram_error();
                if err > 1e-10 {
                    return Err(TtoError::failure("basis Gram matrix at requested grid size", err));
                }
                Ok(space)
            }
            None => {
                let mut q = next_pow2(8 * (2 * n + 1)).max(256);
                let mut space = Self::build(u.clone(), q, config.tolerances)?;
                loop {
                    if q >= MAX_QUAD_POINTS {
                        return Err(TtoError::failure(
                            "quadrature grid refinement",
                            space.gram_error(),
                        ));
                    }
                    let finer = Self::build(u.clone(), 2 * q, config.tolerances)?;
                    let drift = (&finer.conj - &space.conj).norm() + (&finer.shift - &space.shift).norm();
                    if space.gram_error() <= GRAM_TOL && drift <= GRAM_TOL {
                        return Ok(space);
                    }
                    space = finer;
                    q *= 2;
                }
            }
        }
    }

    fn build(u: BlaschkeProduct, quad_points: usize, tol: Tolerances) -> Result<Self> {
        let n = u.degree();
        let grid = unit_grid(quad_points);
        let u_grid = grid.iter().map(|&z| u.evaluate(z)).collect::<Result<Vec<_>>>()?;
        let mut basis = CMatrix::zeros(n, quad_points);
        for (j, &z) in grid.iter().enumerate() {
            let vals = tm_values(&u, z)?;
            basis.set_column(j, &vals);
        }
        let mut space = ModelSpace {
            u,
            quad_points,
            grid,
            u_grid,
            basis,
            conj: CMatrix::zeros(n, n),
            shift: CMatrix::zeros(n, n),
            k0: ModelVector::zeros(n),
            k0_tilde: ModelVector::zeros(n),
            tol,
        };
        // C e_k = u · conj(z e_k) on the circle
        let mut c_table = CMatrix::zeros(n, quad_points);
        for j in 0..quad_points {
            let z = space.grid[j];
            for k in 0..n {
                c_table[(k, j)] = space.u_grid[j] * (z * space.basis[(k, j)]).conj();
            }
        }
        space.conj = space.project_table(&c_table);
        let z_vals: Vec<Complex64> = space.grid.clone();
        space.shift = space.multiplier_matrix(&z_vals);
        space.k0 = space.kernel(ZERO)?;
        space.k0_tilde = space.conjugate(&space.k0);
        Ok(space)
    }

    /// Matrix of `f ↦ P_u(Φ f)` given the values of `Φ` on the grid.
    pub(crate) fn multiplier_matrix(&self, phi: &[Complex64]) -> CMatrix {
        let n = self.dim();
        let mut scaled = self.basis.clone();
        for (j, &p) in phi.iter().enumerate() {
            for k in 0..n {
                scaled[(k, j)] *= p;
            }
        }
        self.project_table(&scaled)
    }

    /// Given an n × N table whose rows are grid values of functions `g_k`,
    /// returns the matrix with entries `⟨g_k, e_j⟩` (column k, row j).
    pub(crate) fn project_table(&self, table: &CMatrix) -> CMatrix {
        (self.basis.conjugate() * table.transpose()).unscale(self.quad_points as f64)
    }

    pub(crate) fn basis_grid(&self) -> &CMatrix {
        &self.basis
    }

    fn gram_error(&self) -> f64 {
        let n = self.dim();
        let g = (self.basis.conjugate() * self.basis.transpose()).unscale(self.quad_points as f64);
        (g - CMatrix::identity(n, n)).camax()
    }

    pub fn u(&self) -> &BlaschkeProduct {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.degree()
    }

    pub fn quad_points(&self) -> usize {
        self.quad_points
    }

    pub fn grid(&self) -> &[Complex64] {
        &self.grid
    }

    /// Values of `u` on the grid.
    pub fn u_on_grid(&self) -> &[Complex64] {
        &self.u_grid
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn u0(&self) -> Complex64 {
        self.u.evaluate(ZERO).expect("zero is never a pole")
    }

    pub fn check_vector(&self, f: &ModelVector) -> Result<()> {
        if f.len() != self.dim() {
            return Err(TtoError::SpaceMismatch {
                expected: self.dim(),
                found: f.len(),
            });
        }
        Ok(())
    }

    pub fn check_matrix(&self, a: &CMatrix) -> Result<()> {
        if a.nrows() != self.dim() || a.ncols() != self.dim() {
            return Err(TtoError::SpaceMismatch {
                expected: self.dim(),
                found: a.nrows().max(a.ncols()),
            });
        }
        Ok(())
    }

    /// Value of the `k`-th Takenaka–Malmquist basis function at `z`.
    pub fn tm_basis_value(&self, k: usize, z: Complex64) -> Result<Complex64> {
        if k >= self.dim() {
            return Err(TtoError::InvalidArgument(format!(
                "basis index {k} out of range for dimension {}",
                self.dim()
            )));
        }
        Ok(tm_values(&self.u, z)?[k])
    }

    /// All basis functions at `z`.
    pub fn basis_at(&self, z: Complex64) -> Result<CVector> {
        tm_values(&self.u, z)
    }

    /// Basis table (n × len) on arbitrary points.
    pub fn basis_table(&self, points: &[Complex64]) -> Result<CMatrix> {
        let mut t = CMatrix::zeros(self.dim(), points.len());
        for (j, &z) in points.iter().enumerate() {
            t.set_column(j, &tm_values(&self.u, z)?);
        }
        Ok(t)
    }

    /// Point evaluation `f(z)`.
    pub fn evaluate(&self, f: &ModelVector, z: Complex64) -> Result<Complex64> {
        self.check_vector(f)?;
        Ok(self.basis_at(z)?.dot(f.coords()))
    }

    /// Values of `f` on the quadrature grid.
    pub fn grid_values(&self, f: &ModelVector) -> Vec<Complex64> {
        (self.basis.transpose() * f.coords()).iter().copied().collect()
    }

    /// Orthogonal projection `P_u F` of a function given by its grid values.
    pub fn project_grid(&self, values: &[Complex64]) -> Result<ModelVector> {
        if values.len() != self.quad_points {
            return Err(TtoError::GridMismatch(values.len(), self.quad_points));
        }
        let v = CVector::from_column_slice(values);
        Ok(ModelVector::new(
            (self.basis.conjugate() * v).unscale(self.quad_points as f64),
        ))
    }

    fn check_closed_disc(lambda: Complex64) -> Result<()> {
        let m = lambda.norm();
        if m > 1.0 + 1e-12 || !m.is_finite() {
            return Err(TtoError::OutsideClosedDisc(m));
        }
        Ok(())
    }

    /// Reproducing kernel `K_λ = (1 − conj(u(λ)) u)/(1 − λ̄ z)`, also for `|λ| = 1`.
    pub fn kernel(&self, lambda: Complex64) -> Result<ModelVector> {
        Self::check_closed_disc(lambda)?;
        Ok(ModelVector::new(conj_vec(&self.basis_at(lambda)?)))
    }

    /// Conjugate kernel `K̃_λ = (u − u(λ))/(z − λ) = C K_λ`.
    pub fn conjugate_kernel(&self, lambda: Complex64) -> Result<ModelVector> {
        let k = self.kernel(lambda)?;
        Ok(self.conjugate(&k))
    }

    /// `M` with `C f` having coordinates `M · conj(f)`.
    pub fn conjugation_matrix(&self) -> &CMatrix {
        &self.conj
    }

    /// The conjugation `C f = u · conj(z f)`.
    pub fn conjugate(&self, f: &ModelVector) -> ModelVector {
        ModelVector::new(&self.conj * conj_vec(f.coords()))
    }

    /// `C f` with a dimension check.
    pub fn conjugation_apply(&self, f: &ModelVector) -> Result<ModelVector> {
        self.check_vector(f)?;
        Ok(self.conjugate(f))
    }

    /// The compressed shift `S = A_z`.
    pub fn shift(&self) -> &CMatrix {
        &self.shift
    }

    /// `S C f`, the antilinear map that appears in every type computation.
    pub fn sc(&self, f: &ModelVector) -> ModelVector {
        ModelVector::new(&self.shift * self.conjugate(f).coords())
    }

    /// `K_0`.
    pub fn k0(&self) -> &ModelVector {
        &self.k0
    }

    /// `K̃_0 = C K_0`.
    pub fn k0_tilde(&self) -> &ModelVector {
        &self.k0_tilde
    }
}

fn tm_values(u: &BlaschkeProduct, z: Complex64) -> Result<CVector> {
    let zeros = u.zeros();
    let mut out = CVector::zeros(zeros.len());
    let mut prefix = ONE;
    for (k, &a) in zeros.iter().enumerate() {
        let d = ONE - a.conj() * z;
        if d.norm() < 1e-14 {
            return Err(TtoError::PoleHit { re: z.re, im: z.im });
        }
        out[k] = prefix * (1.0 - a.norm_sqr()).sqrt() / d;
        prefix *= (z - a) / d;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z2() -> ModelSpace {
        ModelSpace::new(BlaschkeProduct::monomial(2).unwrap()).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn basis_examples() {
        let s = z2();
        assert!(close(s.tm_basis_value(0, c(0.3, 0.0)).unwrap(), ONE, 1e-15));
        assert!(close(s.tm_basis_value(1, c(0.3, 0.0)).unwrap(), c(0.3, 0.0), 1e-15));
        let half = ModelSpace::new(BlaschkeProduct::from_zeros(vec![c(0.5, 0.0)]).unwrap()).unwrap();
        assert!(close(half.tm_basis_value(0, ZERO).unwrap(), c(0.8660254037844386, 0.0), 1e-15));
        assert!(s.tm_basis_value(2, ZERO).is_err());
    }

    #[test]
    fn gram_at_1024_points() {
        let u = BlaschkeProduct::from_zeros(vec![c(0.5, 0.0), c(0.0, -0.3)]).unwrap();
        let s = ModelSpace::with_config(
            u,
            SpaceConfig {
                quad_points: Some(1024),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(s.gram_error() < 1e-10);
    }

    #[test]
    fn rejects_bad_grid() {
        let u = BlaschkeProduct::monomial(3).unwrap();
        let cfg = |q| SpaceConfig {
            quad_points: Some(q),
            ..Default::default()
        };
        assert!(ModelSpace::with_config(u.clone(), cfg(100)).is_err());
        assert!(ModelSpace::with_config(u.clone(), cfg(16)).is_err());
        assert!(ModelSpace::with_config(u, cfg(32)).is_ok());
    }

    #[test]
    fn inner_product_examples() {
        let s = z2();
        let ones = vec![ONE; s.quad_points()];
        assert!(close(inner_product(&ones, &ones).unwrap(), ONE, 1e-15));
        assert!(close(inner_product(s.grid(), &ones).unwrap(), ZERO, 1e-15));
        assert!(matches!(
            inner_product(&ones, &ones[1..]),
            Err(TtoError::GridMismatch(_, _))
        ));
        // <h, K_λ> = h(λ) with h = 1 + z
        let h = ModelVector::from_slice(&[ONE, ONE]);
        let k = s.kernel(c(0.4, 0.0)).unwrap();
        let v = inner_product(&s.grid_values(&h), &s.grid_values(&k)).unwrap();
        assert!(close(v, c(1.4, 0.0), 1e-14));
    }

    #[test]
    fn adaptive_integration_converges() {
        // ∫ 1/(1 − 0.95 z̄) dm = 1
        let v = integrate_adaptive(|z| Ok(ONE / (ONE - 0.95 * z.conj())), 16).unwrap();
        assert!(close(v, ONE, 1e-12));
    }

    #[test]
    fn kernel_examples() {
        let s = z2();
        assert_eq!(s.kernel(ZERO).unwrap().coords().as_slice(), &[ONE, ZERO]);
        let lam = c(0.3, -0.2);
        let k = s.kernel(lam).unwrap();
        assert!(close(k.coords()[1], lam.conj(), 1e-15));
        let k1 = s.kernel(ONE).unwrap();
        assert_eq!(k1.coords().as_slice(), &[ONE, ONE]);
        assert!(matches!(s.kernel(c(1.5, 0.0)), Err(TtoError::OutsideClosedDisc(_))));
    }

    #[test]
    fn conjugate_kernel_examples() {
        let s = z2();
        let kt0 = s.conjugate_kernel(ZERO).unwrap();
        assert!(close(kt0.coords()[0], ZERO, 1e-14) && close(kt0.coords()[1], ONE, 1e-14));
        let kt = s.conjugate_kernel(c(0.5, 0.0)).unwrap();
        assert!(close(kt.coords()[0], c(0.5, 0.0), 1e-14));
        assert!(close(kt.coords()[1], ONE, 1e-14));
        // value at λ is u'(λ) = 1
        assert!(close(s.evaluate(&kt, c(0.5, 0.0)).unwrap(), ONE, 1e-14));
    }

    #[test]
    fn conjugate_kernel_matches_difference_quotient() {
        let u = BlaschkeProduct::new(vec![c(0.5, 0.0), c(0.0, -0.3), c(0.2, 0.2)], c(0.6, 0.8)).unwrap();
        let s = ModelSpace::new(u.clone()).unwrap();
        for lam in [c(0.1, 0.4), c(-0.6, 0.1), Complex64::from_polar(1.0, 0.3)] {
            let ul = u.evaluate(lam).unwrap();
            let vals: Vec<Complex64> = s
                .grid()
                .iter()
                .map(|&z| (u.evaluate(z).unwrap() - ul) / (z - lam))
                .collect();
            let direct = s.project_grid(&vals).unwrap();
            let viac = s.conjugate_kernel(lam).unwrap();
            assert!((direct.coords() - viac.coords()).norm() < 1e-10);
        }
    }

    #[test]
    fn conjugation_examples() {
        let s = z2();
        let m = s.conjugation_matrix();
        assert!(close(m[(0, 1)], ONE, 1e-14) && close(m[(1, 0)], ONE, 1e-14));
        assert!(close(m[(0, 0)], ZERO, 1e-14) && close(m[(1, 1)], ZERO, 1e-14));
        let f = ModelVector::from_slice(&[c(0.0, 1.0), ZERO]);
        let cf = s.conjugate(&f);
        assert!(close(cf.coords()[0], ZERO, 1e-14) && close(cf.coords()[1], c(0.0, -1.0), 1e-14));
        let z3 = ModelSpace::new(BlaschkeProduct::monomial(3).unwrap()).unwrap();
        let m3 = z3.conjugation_matrix();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i + j == 2 { ONE } else { ZERO };
                assert!(close(m3[(i, j)], want, 1e-14));
            }
        }
        assert!(matches!(
            z3.conjugation_apply(&f),
            Err(TtoError::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn conjugation_is_symmetric_unitary_involution() {
        let u = BlaschkeProduct::new(vec![c(0.5, 0.0), c(0.5, 0.0), c(-0.2, 0.0)], c(0.0, 1.0)).unwrap();
        let s = ModelSpace::new(u).unwrap();
        let m = s.conjugation_matrix();
        let n = s.dim();
        assert!((m - m.transpose()).norm() < 1e-12);
        assert!((m * m.conjugate() - CMatrix::identity(n, n)).norm() < 1e-10);
        assert!((m.adjoint() * m - CMatrix::identity(n, n)).norm() < 1e-10);
    }

    #[test]
    fn boundary_kernel_norm_is_derivative_modulus() {
        let u = BlaschkeProduct::from_zeros(vec![c(0.5, 0.0), c(0.0, -0.3)]).unwrap();
        let s = ModelSpace::new(u.clone()).unwrap();
        for t in [0.0, 1.1, 2.5, -0.7] {
            let z = Complex64::from_polar(1.0, t);
            let k = s.kernel(z).unwrap();
            let nn = k.inner(&k).re;
            assert!((nn - u.derivative_at(z).unwrap().norm()).abs() < 1e-8);
        }
    }

    #[test]
    fn near_circle_zero_refines_grid() {
        let u = BlaschkeProduct::from_zeros(vec![c(0.9, 0.0), c(0.0, 0.95)]).unwrap();
        let s = ModelSpace::new(u).unwrap();
        assert!(s.quad_points() > 256);
        assert!(s.gram_error() < 1e-13);
    }
}
