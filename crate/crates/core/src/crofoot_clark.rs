//! The Crofoot transform `T_α : K_{u_α} → K_u`, the symbol calculus
//! `A_{φ/(1−αū)}` it induces, and for unimodular `α` the Clark unitary `S_α`
//! with its spectral data.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TtoError};
use crate::linalg::{fro, poly_of_matrix, sigma_min, spectral_norm, CMatrix, ONE, ZERO};
use crate::model_space::{ModelSpace, ModelVector, SpaceConfig};
use crate::poly::{Poly, RationalPair};
use crate::symbol::{RationalTerm, SymbolExpr};
use crate::tto::{build_tto, generalized_shift, is_tto, multiplier_adaptive, unit_grid};
use crate::type_algebra::{classify_type, typed_symbol, TypeTag, TypeValue};

const UNITARY_TOL: f64 = 1e-9;
const CLARK_TOL: f64 = 1e-9;
const SPECTRAL_TOL: f64 = 1e-8;
const MAX_POINTS: usize = 1 << 17;

fn open_disc(alpha: Complex64) -> Result<()> {
    if alpha.norm() >= 1.0 {
        Err(TtoError::AlphaOnCircle(alpha.norm()))
    } else {
        Ok(())
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Multiplication by `(1−|α|²)^{-1/2}(1 − ᾱu)`, as a unitary from `K_{u_α}` onto `K_u`.
#[derive(Debug, Clone)]
pub struct CrofootTransform {
    alpha: Complex64,
    source: ModelSpace,
    target: ModelSpace,
    mat: CMatrix,
    unitarity: f64,
}

impl CrofootTransform {
    pub fn new(target: &ModelSpace, alpha: Complex64) -> Result<Self> {
        open_disc(alpha)?;
        let u = target.u();
        let ua = u.mobius(alpha)?;
        let mut mismatch: f64 = 0.0;
        for (&z, &uz) in target.grid().iter().zip(target.u_on_grid()) {
            let expect = (uz - alpha) / (ONE - alpha.conj() * uz);
            mismatch = mismatch.max((ua.evaluate(z)? - expect).norm());
        }
        if mismatch > 1e-10 {
            return Err(TtoError::failure("u_alpha pointwise agreement", mismatch));
        }
        let source = ModelSpace::with_config(
            ua,
            SpaceConfig {
                quad_points: None,
                tolerances: *target.tolerances(),
            },
        )?;
        let c = (1.0 - alpha.norm_sqr()).powf(-0.5);
        let matrix_at = |q: usize| -> Result<CMatrix> {
            let grid = unit_grid(q);
            let bt = target.basis_table(&grid)?;
            let mut bs = source.basis_table(&grid)?;
            for (j, &z) in grid.iter().enumerate() {
                let m = (ONE - alpha.conj() * u.evaluate(z)?) * c;
                for k in 0..bs.nrows() {
                    bs[(k, j)] *= m;
                }
            }
            Ok((bt.conjugate() * bs.transpose()).unscale(q as f64))
        };
        let mut q = target.quad_points().max(source.quad_points());
        let mut mat = matrix_at(q)?;
        loop {
            if q >= MAX_POINTS {
                return Err(TtoError::failure("Crofoot matrix quadrature", f64::NAN));
            }
            q *= 2;
            let next = matrix_at(q)?;
            let drift = fro(&(&next - &mat));
            mat = next;
            if drift <= 1e-13 {
                break;
            }
        }
        let n = mat.nrows();
        let unitarity = fro(&(mat.adjoint() * &mat - CMatrix::identity(n, n)));
        if unitarity > UNITARY_TOL {
            return Err(TtoError::failure("Crofoot transform unitarity", unitarity));
        }
        Ok(CrofootTransform {
            alpha,
            source,
            target: target.clone(),
            mat,
            unitarity,
        })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    /// `K_{u_α}`.
    pub fn source(&self) -> &ModelSpace {
        &self.source
    }

    /// `K_u`.
    pub fn target(&self) -> &ModelSpace {
        &self.target
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// `‖TᴴT − I‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        self.unitarity
    }

    /// `T X T⁻¹`.
    pub fn conjugate_into_target(&self, x: &CMatrix) -> CMatrix {
        &self.mat * x * self.mat.adjoint()
    }

    /// `T⁻¹ Y T`.
    pub fn pull_back(&self, y: &CMatrix) -> CMatrix {
        self.mat.adjoint() * y * &self.mat
    }
}

pub fn crofoot(space: &ModelSpace, alpha: Complex64) -> Result<CrofootTransform> {
    CrofootTransform::new(space, alpha)
}

/// `A_{p/(1−αū)}` by direct quadrature of the fraction.
pub fn clark_fraction_quadrature(space: &ModelSpace, p: &Poly, alpha: Complex64) -> Result<CMatrix> {
    open_disc(alpha)?;
    let term = RationalTerm::clark_fraction(RationalPair::polynomial(p.clone()), alpha);
    build_tto(space, &SymbolExpr::rational(term))
}

/// `p(S_α)`, which equals `A_{p/(1−αū)}` for any polynomial `p`.
pub fn clark_fraction_poly(space: &ModelSpace, p: &Poly, alpha: Complex64) -> Result<CMatrix> {
    open_disc(alpha)?;
    Ok(poly_of_matrix(p.coeffs(), &generalized_shift(space, alpha)?))
}

/// `A_{φ/(1−αū)}` for `φ ∈ K_u`, built from the equivalent symbol `φ + α·conj(SCφ)`
/// and cross-checked against direct quadrature of the fraction.
pub fn build_clark_fraction_tto(space: &ModelSpace, phi: &ModelVector, alpha: Complex64) -> Result<CMatrix> {
    open_disc(alpha)?;
    space.check_vector(phi)?;
    let a = build_tto(space, &typed_symbol(space, phi, TypeValue::Finite(alpha), ZERO))?;
    let direct = multiplier_adaptive(space, |_, basis, u_vals| {
        let fv = basis.transpose() * phi.coords();
        Ok(fv
            .iter()
            .zip(u_vals)
            .map(|(f, uz)| f / (ONE - alpha * uz.conj()))
            .collect())
    })?;
    let residual = rel(fro(&(&a - &direct)), fro(&a).max(phi.norm()));
    if residual > 1e-8 {
        return Err(TtoError::failure("fraction symbol against direct quadrature", residual));
    }
    Ok(a)
}

/// Residuals of `T A^{u_α}_φ T⁻¹ = A^u_{φ/(1−αū)}` and its adjoint form
/// `T A^{u_α}_{conj φ} T⁻¹ = A^u_{conj φ/(1−ᾱu)}`, both relative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntertwineReport {
    pub analytic: f64,
    pub coanalytic: f64,
    /// `|‖A^{u_α}_φ‖ − ‖A^u_{φ/(1−αū)}‖|`, operator norms, relative
    pub norm_gap: f64,
}

impl IntertwineReport {
    pub fn max_residual(&self) -> f64 {
        self.analytic.max(self.coanalytic).max(self.norm_gap)
    }
}

pub fn crofoot_intertwine_check(ct: &CrofootTransform, phi: &Poly) -> Result<IntertwineReport> {
    let pair = RationalPair::polynomial(phi.clone());
    let src_a = build_tto(ct.source(), &SymbolExpr::rational(RationalTerm::new(pair.clone())))?;
    let src_c = build_tto(
        ct.source(),
        &SymbolExpr::rational(RationalTerm::new(pair.clone()).conjugated()),
    )?;
    let tgt_a = build_tto(
        ct.target(),
        &SymbolExpr::rational(RationalTerm::clark_fraction(pair.clone(), ct.alpha())),
    )?;
    let tgt_c = build_tto(
        ct.target(),
        &SymbolExpr::rational(RationalTerm::clark_fraction(pair, ct.alpha()).conjugated()),
    )?;
    let floor = phi.coeff_norm();
    let la = ct.conjugate_into_target(&src_a);
    let lc = ct.conjugate_into_target(&src_c);
    let scale_a = fro(&la).max(fro(&tgt_a)).max(floor);
    let scale_c = fro(&lc).max(fro(&tgt_c)).max(floor);
    let (ns, nt) = (spectral_norm(&src_a), spectral_norm(&tgt_a));
    Ok(IntertwineReport {
        analytic: rel(fro(&(&la - &tgt_a)), scale_a),
        coanalytic: rel(fro(&(&lc - &tgt_c)), scale_c),
        norm_gap: (ns - nt).abs() / ns.max(nt).max(1.0),
    })
}

/// `T⁻¹ S_α T` against the compressed shift of `K_{u_α}`, relative.
pub fn crofoot_shift_residual(ct: &CrofootTransform) -> Result<f64> {
    let sa = generalized_shift(ct.target(), ct.alpha())?;
    let lhs = ct.pull_back(&sa);
    let rhs = ct.source().shift();
    Ok(rel(fro(&(&lhs - rhs)), fro(rhs).max(1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultiplicativityReport {
    /// `‖A_{φ/(1−αū)} A_{ψ/(1−αū)} − A_{φψ/(1−αū)}‖ / (‖A_{φ/(1−αū)}‖ ‖A_{ψ/(1−αū)}‖)`
    pub residual: f64,
    /// the same product against `(φψ)(S_α)`
    pub functional_calculus: f64,
}

impl MultiplicativityReport {
    pub fn max_residual(&self) -> f64 {
        self.residual.max(self.functional_calculus)
    }
}

pub fn multiplicativity_check(space: &ModelSpace, phi: &Poly, psi: &Poly, alpha: Complex64) -> Result<MultiplicativityReport> {
    let a = clark_fraction_quadrature(space, phi, alpha)?;
    let b = clark_fraction_quadrature(space, psi, alpha)?;
    let prod = phi.mul(psi);
    let c = clark_fraction_quadrature(space, &prod, alpha)?;
    let h = clark_fraction_poly(space, &prod, alpha)?;
    let ab = &a * &b;
    let scale = (fro(&a) * fro(&b)).max(phi.coeff_norm() * psi.coeff_norm());
    Ok(MultiplicativityReport {
        residual: rel(fro(&(&ab - &c)), scale),
        functional_calculus: rel(fro(&(&ab - &h)), scale),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvertibilityReport {
    pub invertible: bool,
    /// `min_k |φ(z_k)|` over the zeros of `u_α`
    pub min_abs: f64,
    pub threshold: f64,
    pub sigma_min: f64,
}

/// `A_{φ/(1−αū)}` is invertible exactly when `φ` has no zero in common with `u_α`.
pub fn invertibility_criterion(space: &ModelSpace, phi: &Poly, alpha: Complex64) -> Result<InvertibilityReport> {
    open_disc(alpha)?;
    let zeros = space.u().solve_u_equals(alpha)?;
    let min_abs = zeros
        .iter()
        .map(|&z| phi.eval(z).norm())
        .fold(f64::INFINITY, f64::min);
    let threshold = 1e-8 * phi.coeff_norm().max(1.0);
    let sigma_min = sigma_min(&clark_fraction_quadrature(space, phi, alpha)?);
    Ok(InvertibilityReport {
        invertible: min_abs > threshold,
        min_abs,
        threshold,
        sigma_min,
    })
}

/// Spectral data of the Clark unitary `S_α`, `|α| = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClarkData {
    pub alpha: Complex64,
    /// solutions of `u = α` on the circle
    pub points: Vec<Complex64>,
    /// `1/|u′(ζ_j)|`
    pub weights: Vec<f64>,
    /// normalized kernels at the points, as columns
    pub eigenvectors: CMatrix,
    pub total_mass: f64,
    /// `|Σ w_j − ‖K₀‖² / |1 − ᾱu(0)|²|`
    pub mass_residual: f64,
    /// `max_j ‖S_α v_j − ζ_j v_j‖`
    pub eigen_residual: f64,
}

impl Serialize for ClarkData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ClarkData", 3)?;
        st.serialize_field("alpha", &crate::json::pair(self.alpha))?;
        st.serialize_field(
            "points",
            &self.points.iter().map(|&z| crate::json::pair(z)).collect::<Vec<_>>(),
        )?;
        st.serialize_field(
            "weights",
            &self.weights.iter().map(|&w| crate::json::round15(w)).collect::<Vec<_>>(),
        )?;
        st.end()
    }
}

fn fix_phase(v: &mut crate::linalg::CVector) {
    if let Some(first) = v.iter().find(|c| c.norm() > 1e-12).copied() {
        let phase = first.conj() / first.norm();
        *v *= phase;
    }
}

pub fn clark_data(space: &ModelSpace, alpha: Complex64) -> Result<ClarkData> {
    if (alpha.norm() - 1.0).abs() > 1e-12 {
        return Err(TtoError::AlphaNotUnimodular(alpha.norm()));
    }
    let alpha = alpha / alpha.norm();
    let u = space.u();
    let points = u.solve_u_equals(alpha)?;
    let n = space.dim();
    let sa = generalized_shift(space, alpha)?;
    let mut weights = Vec::with_capacity(n);
    let mut eigenvectors = CMatrix::zeros(n, n);
    let mut eigen_residual: f64 = 0.0;
    for (j, &z) in points.iter().enumerate() {
        let gap = (u.evaluate(z)? - alpha).norm();
        if gap > CLARK_TOL {
            return Err(TtoError::failure("Clark point u(zeta) = alpha", gap));
        }
        let d = u.derivative_at(z)?.norm();
        if d < 1e-12 {
            return Err(TtoError::failure("Clark weight: vanishing derivative", d));
        }
        weights.push(1.0 / d);
        let mut v = space.kernel(z)?.into_coords();
        let norm = v.norm();
        v.unscale_mut(norm);
        fix_phase(&mut v);
        eigen_residual = eigen_residual.max((&sa * &v - &v * z).norm());
        eigenvectors.set_column(j, &v);
    }
    if eigen_residual > SPECTRAL_TOL {
        return Err(TtoError::failure("Clark eigen-relation", eigen_residual));
    }
    let gram = fro(&(eigenvectors.adjoint() * &eigenvectors - CMatrix::identity(n, n)));
    if gram > SPECTRAL_TOL {
        return Err(TtoError::failure("Clark eigenvector orthonormality", gram));
    }
    let total_mass: f64 = weights.iter().sum();
    let expected = space.k0().norm().powi(2) / (ONE - alpha.conj() * space.u0()).norm_sqr();
    let mass_residual = (total_mass - expected).abs();
    if mass_residual > CLARK_TOL * expected.max(1.0) {
        return Err(TtoError::failure("Clark total mass", mass_residual));
    }
    Ok(ClarkData {
        alpha,
        points,
        weights,
        eigenvectors,
        total_mass,
        mass_residual,
        eigen_residual,
    })
}

/// `Φ(S_α) = V diag(Φ(ζ_j)) Vᴴ`.
pub fn functional_calculus(cd: &ClarkData, values: &[Complex64]) -> Result<CMatrix> {
    let n = cd.points.len();
    if values.len() != n {
        return Err(TtoError::InvalidArgument(format!(
            "expected {n} values, got {}",
            values.len()
        )));
    }
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(TtoError::InvalidArgument("values must be finite".into()));
    }
    let v = &cd.eigenvectors;
    let d = CMatrix::from_diagonal(&crate::linalg::CVector::from_column_slice(values));
    Ok(v * d * v.adjoint())
}

/// `‖V diag(ζ_j) Vᴴ − S_α‖_F`.
pub fn spectral_reconstruction_residual(space: &ModelSpace, cd: &ClarkData) -> Result<f64> {
    let sa = generalized_shift(space, cd.alpha)?;
    Ok(fro(&(functional_calculus(cd, &cd.points)? - sa)))
}

#[derive(Debug, Clone, PartialEq)]
pub enum UnitaryClass {
    NotUnitary,
    /// `A = Φ(S_α)` with `|Φ(ζ_j)| = 1`; `alpha` is `None` for unimodular scalars.
    Unitary {
        tag: TypeTag,
        alpha: Option<Complex64>,
        values: Vec<Complex64>,
    },
}

/// Decides unitarity of a TTO and, when unitary, recovers its unimodular type
/// and the values `Φ(ζ_j)` on the Clark points.
pub fn classify_unitary(space: &ModelSpace, a: &CMatrix) -> Result<UnitaryClass> {
    let m = is_tto(space, a)?;
    if !m.is_tto {
        return Err(TtoError::NotATto(m.decomposition.residual));
    }
    let n = space.dim();
    let dev = fro(&(a.adjoint() * a - CMatrix::identity(n, n)));
    if dev > SPECTRAL_TOL * (n as f64).sqrt() {
        return Ok(UnitaryClass::NotUnitary);
    }
    let tag = classify_type(space, a)?;
    match tag {
        TypeTag::Scalar => {
            let c = a.trace() / n as f64;
            let gap = (c.norm() - 1.0).abs();
            if gap > SPECTRAL_TOL {
                return Err(TtoError::failure("unitary scalar modulus", gap));
            }
            Ok(UnitaryClass::Unitary {
                tag,
                alpha: None,
                values: vec![c; n],
            })
        }
        TypeTag::Type(TypeValue::Finite(alpha)) if (alpha.norm() - 1.0).abs() <= 1e-8 => {
            let cd = clark_data(space, alpha / alpha.norm())?;
            let d = cd.eigenvectors.adjoint() * a * &cd.eigenvectors;
            let values: Vec<Complex64> = (0..n).map(|j| d[(j, j)]).collect();
            let off = fro(&(&d - CMatrix::from_diagonal(&d.diagonal())));
            if off > SPECTRAL_TOL * fro(a) {
                return Err(TtoError::failure("unitary TTO not diagonal in the Clark basis", off));
            }
            let gap = values
                .iter()
                .map(|v| (v.norm() - 1.0).abs())
                .fold(0.0, f64::max);
            if gap > SPECTRAL_TOL {
                return Err(TtoError::failure("unitary TTO values off the circle", gap));
            }
            Ok(UnitaryClass::Unitary {
                tag,
                alpha: Some(cd.alpha),
                values,
            })
        }
        _ => Err(TtoError::failure(
            "unitary TTO without a unimodular type",
            dev,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::BlaschkeProduct;
    use crate::linalg::CVector;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z2() -> ModelSpace {
        ModelSpace::new(BlaschkeProduct::monomial(2).unwrap()).unwrap()
    }

    fn space3() -> ModelSpace {
        ModelSpace::new(
            BlaschkeProduct::from_zeros(vec![c(0.5, 0.0), c(0.0, -0.3), c(0.2, 0.2)]).unwrap(),
        )
        .unwrap()
    }

    fn mat2(a: [[Complex64; 2]; 2]) -> CMatrix {
        CMatrix::from_fn(2, 2, |i, j| a[i][j])
    }

    #[test]
    fn crofoot_examples() {
        let s = z2();
        let t = crofoot(&s, ZERO).unwrap();
        assert!((t.matrix() - CMatrix::identity(2, 2)).norm() < 1e-12);
        let t = crofoot(&s, c(0.5, 0.0)).unwrap();
        let mut z = t.source().u().zeros().to_vec();
        z.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((z[0] + c(0.5f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!((z[1] - c(0.5f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!(t.unitarity_residual() < 1e-9);
        assert!(crofoot_shift_residual(&t).unwrap() < 1e-9);
        assert!(matches!(crofoot(&s, ONE), Err(TtoError::AlphaOnCircle(_))));
        let t = crofoot(&space3(), c(-0.3, 0.6)).unwrap();
        assert!(crofoot_shift_residual(&t).unwrap() < 1e-9);
    }

    #[test]
    fn clark_fraction_examples() {
        let s = z2();
        let one = ModelVector::from_slice(&[ONE, ZERO]);
        let z = ModelVector::from_slice(&[ZERO, ONE]);
        let a = build_clark_fraction_tto(&s, &one, c(0.4, 0.2)).unwrap();
        assert!((a - CMatrix::identity(2, 2)).norm() < 1e-12);
        let a = build_clark_fraction_tto(&s, &z, c(0.3, 0.0)).unwrap();
        assert!((a - mat2([[ZERO, c(0.3, 0.0)], [ONE, ZERO]])).norm() < 1e-12);
        let t = space3();
        let alpha = c(0.1, -0.7);
        let phi = ModelVector::from_slice(&[c(0.4, -0.2), c(1.0, 0.3), c(-0.6, 0.0)]);
        let a = build_clark_fraction_tto(&t, &phi, alpha).unwrap();
        assert!(crate::type_algebra::commutant_check(&t, &a, alpha).unwrap().commutes);
    }

    #[test]
    fn polynomial_routes_agree() {
        let s = space3();
        let alpha = c(0.35, 0.4);
        let p = Poly::new(vec![c(1.0, 0.5), c(-0.3, 0.0), c(0.0, 2.0), c(0.7, -0.1), c(0.2, 0.0)]);
        let q = clark_fraction_quadrature(&s, &p, alpha).unwrap();
        let h = clark_fraction_poly(&s, &p, alpha).unwrap();
        assert!((&q - &h).norm() < 1e-10 * h.norm());
        let z = Poly::monomial(1);
        let sa = generalized_shift(&s, alpha).unwrap();
        assert!((clark_fraction_quadrature(&s, &z, alpha).unwrap() - sa).norm() < 1e-11);
    }

    #[test]
    fn intertwining_examples() {
        let t = crofoot(&z2(), c(0.5, 0.0)).unwrap();
        let r = crofoot_intertwine_check(&t, &Poly::monomial(1)).unwrap();
        assert!(r.max_residual() < 1e-9, "{r:?}");
        let r = crofoot_intertwine_check(&t, &Poly::constant(ONE)).unwrap();
        assert!(r.max_residual() < 1e-12);
        let t = crofoot(&space3(), c(-0.2, 0.5)).unwrap();
        let p = Poly::new(vec![c(0.3, 0.1), c(-1.0, 0.2), c(0.5, 0.5)]);
        let r = crofoot_intertwine_check(&t, &p).unwrap();
        assert!(r.max_residual() < 1e-8, "{r:?}");
    }

    #[test]
    fn multiplicativity_examples() {
        let s = z2();
        let alpha = c(0.3, 0.0);
        let z = Poly::monomial(1);
        let r = multiplicativity_check(&s, &z, &z, alpha).unwrap();
        assert!(r.max_residual() < 1e-10);
        let sa = generalized_shift(&s, alpha).unwrap();
        assert!((&sa * &sa - CMatrix::identity(2, 2) * c(0.3, 0.0)).norm() < 1e-12);
        let r = multiplicativity_check(&s, &Poly::constant(ONE), &z, alpha).unwrap();
        assert!(r.max_residual() < 1e-10);
    }

    #[test]
    fn invertibility_examples() {
        let s = z2();
        let z = Poly::monomial(1);
        let r = invertibility_criterion(&s, &z, ZERO).unwrap();
        assert!(!r.invertible);
        assert!(r.sigma_min < 1e-12);
        let r = invertibility_criterion(&s, &Poly::new(vec![c(-2.0, 0.0), ONE]), ZERO).unwrap();
        assert!(r.invertible);
        assert!(r.sigma_min > 0.5);
        let r = invertibility_criterion(&s, &Poly::new(vec![c(-0.5, 0.0), ONE]), c(0.25, 0.0)).unwrap();
        assert!(!r.invertible);
        assert!(r.sigma_min < 1e-10);
    }

    #[test]
    fn clark_examples() {
        let s = z2();
        let cd = clark_data(&s, ONE).unwrap();
        assert!((cd.points[0] - ONE).norm() < 1e-12);
        assert!((cd.points[1] + ONE).norm() < 1e-12);
        for w in &cd.weights {
            assert!((w - 0.5).abs() < 1e-12);
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = cd.eigenvectors.column(0).into_owned();
        assert!((v0 - CVector::from_column_slice(&[c(h, 0.0), c(h, 0.0)])).norm() < 1e-12);
        let v1 = cd.eigenvectors.column(1).into_owned();
        assert!((v1 - CVector::from_column_slice(&[c(h, 0.0), c(-h, 0.0)])).norm() < 1e-12);
        assert!(spectral_reconstruction_residual(&s, &cd).unwrap() < 1e-12);
        let s3 = ModelSpace::new(BlaschkeProduct::monomial(3).unwrap()).unwrap();
        let cd = clark_data(&s3, ONE).unwrap();
        for (w, z) in cd.weights.iter().zip(&cd.points) {
            assert!((w - 1.0 / 3.0).abs() < 1e-12);
            assert!((z.powu(3) - ONE).norm() < 1e-12);
        }
        assert!(matches!(clark_data(&s, c(0.5, 0.0)), Err(TtoError::AlphaNotUnimodular(_))));
    }

    #[test]
    fn clark_mass_off_origin() {
        let s = space3();
        let alpha = c(0.6, 0.8);
        let cd = clark_data(&s, alpha).unwrap();
        let u0 = s.u0();
        let expected = (1.0 - u0.norm_sqr()) / (ONE - alpha.conj() * u0).norm_sqr();
        assert!((cd.total_mass - expected).abs() < 1e-10);
        assert!(spectral_reconstruction_residual(&s, &cd).unwrap() < 1e-8);
    }

    #[test]
    fn clark_json() {
        let cd = clark_data(&z2(), ONE).unwrap();
        let v = serde_json::to_value(&cd).unwrap();
        assert_eq!(v["weights"], serde_json::json!([0.5, 0.5]));
        assert_eq!(v["alpha"], serde_json::json!([1.0, 0.0]));
        assert_eq!(v.as_object().unwrap().len(), 3);
    }

    #[test]
    fn functional_calculus_examples() {
        let s = z2();
        let cd = clark_data(&s, ONE).unwrap();
        let id = functional_calculus(&cd, &[ONE, ONE]).unwrap();
        assert!((id - CMatrix::identity(2, 2)).norm() < 1e-12);
        let p = functional_calculus(&cd, &[ONE, ZERO]).unwrap();
        assert!((p - CMatrix::from_element(2, 2, c(0.5, 0.0))).norm() < 1e-12);
        let a = functional_calculus(&cd, &[c(0.0, 1.0), c(2.0, 0.0)]).unwrap();
        let b = functional_calculus(&cd, &[c(3.0, 0.0), c(0.0, -1.0)]).unwrap();
        let ab = functional_calculus(&cd, &[c(0.0, 3.0), c(0.0, -2.0)]).unwrap();
        assert!((&a * &b - ab).norm() < 1e-12);
        assert!(classify_type(&s, &a).unwrap().admits(&TypeValue::Finite(ONE)));
        assert!(functional_calculus(&cd, &[ONE]).is_err());
    }

    #[test]
    fn unitary_examples() {
        let s = z2();
        let sa = generalized_shift(&s, ONE).unwrap();
        match classify_unitary(&s, &sa).unwrap() {
            UnitaryClass::Unitary { alpha, values, .. } => {
                assert!((alpha.unwrap() - ONE).norm() < 1e-12);
                assert!((values[0] - ONE).norm() < 1e-10 && (values[1] + ONE).norm() < 1e-10);
            }
            other => panic!("unexpected {other:?}"),
        }
        match classify_unitary(&s, &CMatrix::identity(2, 2)).unwrap() {
            UnitaryClass::Unitary { tag, values, .. } => {
                assert_eq!(tag, TypeTag::Scalar);
                assert!(values.iter().all(|v| (v - ONE).norm() < 1e-12));
            }
            other => panic!("unexpected {other:?}"),
        }
        let cd = clark_data(&s, ONE).unwrap();
        let inv = functional_calculus(&cd, &[ONE, c(-1.0, 0.0)]).unwrap();
        assert!((&inv - mat2([[ZERO, ONE], [ONE, ZERO]])).norm() < 1e-12);
        assert!(matches!(classify_unitary(&s, &inv).unwrap(), UnitaryClass::Unitary { .. }));
        assert_eq!(classify_unitary(&s, s.shift()).unwrap(), UnitaryClass::NotUnitary);
        let t = space3();
        let alpha = c(0.0, -1.0);
        let cd = clark_data(&t, alpha).unwrap();
        let vals = [c(0.6, 0.8), c(-1.0, 0.0), c(0.0, 1.0)];
        let a = functional_calculus(&cd, &vals).unwrap();
        match classify_unitary(&t, &a).unwrap() {
            UnitaryClass::Unitary { values, .. } => {
                for (v, w) in values.iter().zip(vals) {
                    assert!((v - w).norm() < 1e-8);
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
