//! Classification of truncated Toeplitz operators by type `α ∈ ℂ ∪ {∞}` and
//! the algebraic consequences: commutants of `S_α`, products, inverses,
//! rank-one operators and maximal algebras.
//!
//! With a TTO written as `A = A_{φ₁ + conj(φ₂)}` and `P⊥` the projection off
//! `span K₀`, set `v₁ = P⊥(S C φ₁)` and `v₂ = P⊥ φ₂`. Then `A` has type `α`
//! exactly when `ᾱ v₁ = v₂`, and type `∞` exactly when `v₁ = 0`. The only
//! operators with more than one type are the scalars `cI`, which have every type.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Result, TtoError};
use crate::linalg::{fro, inner, outer, project_off, sigma_min, CMatrix, ONE, ZERO};
use crate::model_space::{ModelSpace, ModelVector};
use crate::poly::{Poly, RationalPair};
use crate::symbol::{RationalTerm, SymbolExpr};
use crate::tto::{build_tto, generalized_shift, is_tto};

/// Relative tolerance when two computed type values are compared.
pub const TYPE_MATCH_TOL: f64 = 1e-6;

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TypeValue {
    Finite(Complex64),
    Infinity,
}

impl TypeValue {
    /// `conj(1/α)`, with `0 ↔ ∞`.
    pub fn adjoint(self) -> TypeValue {
        match self {
            TypeValue::Infinity => TypeValue::Finite(ZERO),
            TypeValue::Finite(a) if a == ZERO => TypeValue::Infinity,
            TypeValue::Finite(a) => TypeValue::Finite((ONE / a).conj()),
        }
    }

    pub fn approx_eq(&self, other: &TypeValue, tol: f64) -> bool {
        match (self, other) {
            (TypeValue::Infinity, TypeValue::Infinity) => true,
            (TypeValue::Finite(a), TypeValue::Finite(b)) => {
                (a - b).norm() <= tol * 1f64.max(a.norm()).max(b.norm())
            }
            _ => false,
        }
    }

    pub fn finite(self) -> Option<Complex64> {
        match self {
            TypeValue::Finite(a) => Some(a),
            TypeValue::Infinity => None,
        }
    }
}

/// Outcome of classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TypeTag {
    NoType,
    Type(TypeValue),
    /// `A = cI`, which is of every type.
    Scalar,
}

impl TypeTag {
    pub fn adjoint(self) -> TypeTag {
        match self {
            TypeTag::Type(v) => TypeTag::Type(v.adjoint()),
            other => other,
        }
    }

    /// Whether an operator with this tag is of type `v`.
    pub fn admits(&self, v: &TypeValue) -> bool {
        match self {
            TypeTag::Scalar => true,
            TypeTag::Type(w) => w.approx_eq(v, TYPE_MATCH_TOL),
            TypeTag::NoType => false,
        }
    }

    pub fn value(&self) -> Option<TypeValue> {
        match self {
            TypeTag::Type(v) => Some(*v),
            _ => None,
        }
    }

    /// Same classification up to [`TYPE_MATCH_TOL`].
    pub fn matches(&self, other: &TypeTag) -> bool {
        match (self, other) {
            (TypeTag::Type(a), TypeTag::Type(b)) => a.approx_eq(b, TYPE_MATCH_TOL),
            (a, b) => std::mem::discriminant(a) == std::mem::discriminant(b),
        }
    }
}

/// Diagnostics produced along with a [`TypeTag`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassificationResiduals {
    /// defect residual of the membership test
    pub membership: f64,
    /// `‖v₂ − proj_{v₁} v₂‖`
    pub parallel: f64,
    pub v1_norm: f64,
    pub v2_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub tag: TypeTag,
    /// `c` when the operator is `cI`
    pub scalar: Option<Complex64>,
    pub residuals: ClassificationResiduals,
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (kind, value) = match self.tag {
            TypeTag::NoType => ("none", None),
            TypeTag::Scalar => ("scalar", None),
            TypeTag::Type(TypeValue::Infinity) => ("infinity", None),
            TypeTag::Type(TypeValue::Finite(a)) => {
                ("alpha", Some(crate::json::pair(crate::json::chop(a, a.norm().max(1.0)))))
            }
        };
        let mut st = s.serialize_struct("Classification", 4)?;
        st.serialize_field("type", kind)?;
        st.serialize_field("value", &value)?;
        st.serialize_field(
            "scalar",
            &self.scalar.map(|c| crate::json::pair(crate::json::chop(c, c.norm().max(1.0)))),
        )?;
        st.serialize_field(
            "residuals",
            &ClassificationResiduals {
                membership: crate::json::round15(self.residuals.membership),
                parallel: crate::json::round15(self.residuals.parallel),
                v1_norm: crate::json::round15(self.residuals.v1_norm),
                v2_norm: crate::json::round15(self.residuals.v2_norm),
            },
        )?;
        st.end()
    }
}

/// The pieces every type test works from.
struct TypeParts {
    phi1: ModelVector,
    v1: crate::linalg::CVector,
    v2: crate::linalg::CVector,
    scale: f64,
    membership: f64,
}

fn type_parts(space: &ModelSpace, a: &CMatrix) -> Result<TypeParts> {
    let m = is_tto(space, a)?;
    if !m.is_tto {
        return Err(TtoError::NotATto(m.decomposition.residual));
    }
    let k0 = space.k0().coords();
    let phi1 = m.decomposition.phi;
    let phi2 = m.decomposition.psi;
    let v1 = project_off(space.sc(&phi1).coords(), k0);
    let v2 = project_off(phi2.coords(), k0);
    Ok(TypeParts {
        phi1,
        v1,
        v2,
        scale: fro(a),
        membership: m.decomposition.residual,
    })
}

/// Full classification with diagnostics.
pub fn classify(space: &ModelSpace, a: &CMatrix) -> Result<Classification> {
    let parts = type_parts(space, a)?;
    let tol = space.tolerances().parallel;
    let n = space.dim();
    let (n1, n2) = (parts.v1.norm(), parts.v2.norm());
    let mut residuals = ClassificationResiduals {
        membership: parts.membership,
        parallel: 0.0,
        v1_norm: n1,
        v2_norm: n2,
    };
    let scalar_value = a.trace() / n as f64;
    let abs_tol = tol * parts.scale;
    let off_k0 = project_off(parts.phi1.coords(), space.k0().coords()).norm();
    if n == 1 || parts.scale == 0.0 || (n1 <= abs_tol && n2 <= abs_tol && off_k0 <= abs_tol) {
        return Ok(Classification {
            tag: TypeTag::Scalar,
            scalar: Some(scalar_value),
            residuals,
        });
    }
    if n1 <= abs_tol {
        return Ok(Classification {
            tag: TypeTag::Type(TypeValue::Infinity),
            scalar: None,
            residuals,
        });
    }
    let ratio = inner(&parts.v2, &parts.v1) / (n1 * n1);
    let parallel = (&parts.v2 - &parts.v1 * ratio).norm();
    residuals.parallel = parallel;
    let tag = if parallel <= tol * (n1 + n2) {
        TypeTag::Type(TypeValue::Finite(ratio.conj()))
    } else {
        TypeTag::NoType
    };
    Ok(Classification {
        tag,
        scalar: None,
        residuals,
    })
}

pub fn classify_type(space: &ModelSpace, a: &CMatrix) -> Result<TypeTag> {
    Ok(classify(space, a)?.tag)
}

/// The direct membership test for a single candidate type `β`.
pub fn is_of_type(space: &ModelSpace, a: &CMatrix, beta: TypeValue) -> Result<bool> {
    let parts = type_parts(space, a)?;
    let tol = space.tolerances().parallel;
    let (n1, n2) = (parts.v1.norm(), parts.v2.norm());
    Ok(match beta {
        TypeValue::Infinity => n1 <= tol * parts.scale,
        TypeValue::Finite(b) => {
            let r = (&parts.v1 * b.conj() - &parts.v2).norm();
            r <= tol * (b.norm() * n1 + n2) + 1e-14 * parts.scale
        }
    })
}

/// Type of `A*` from the type of `A`.
pub fn type_of_adjoint(tag: TypeTag) -> TypeTag {
    tag.adjoint()
}

/// A symbol of the canonical typed form: `φ + α·conj(SCφ) + c` for finite `α`,
/// `conj(φ) + c` for `α = ∞`.
pub fn typed_symbol(space: &ModelSpace, phi: &ModelVector, alpha: TypeValue, c: Complex64) -> SymbolExpr {
    match alpha {
        TypeValue::Finite(a) => {
            SymbolExpr::new(phi.clone(), space.sc(phi).scale(a.conj())).with_constant(c)
        }
        TypeValue::Infinity => SymbolExpr::coanalytic(phi.clone()).with_constant(c),
    }
}

/// Symbol in `K_u + conj(K_u)` form, extracting one from the operator when the
/// symbol carries rational terms.
fn split_symbol(space: &ModelSpace, s: &SymbolExpr) -> Result<(ModelVector, ModelVector)> {
    if s.has_rational_terms() {
        let a = build_tto(space, s)?;
        let m = is_tto(space, &a)?;
        Ok((m.decomposition.phi, m.decomposition.psi))
    } else {
        s.split(space)
    }
}

/// Whether `φ₁ ⊗ ψ₂ − (SCφ₂) ⊗ (SCψ₁)` has the form `Φ₀ ⊗ K₀ + K₀ ⊗ Ψ₀`,
/// which holds exactly when `A_Φ A_Ψ` is again a TTO.
pub fn product_rank2_condition(space: &ModelSpace, s1: &SymbolExpr, s2: &SymbolExpr) -> Result<bool> {
    let (phi1, phi2) = split_symbol(space, s1)?;
    let (psi1, psi2) = split_symbol(space, s2)?;
    let sc_phi2 = space.sc(&phi2);
    let sc_psi1 = space.sc(&psi1);
    let m = outer(phi1.coords(), psi2.coords()) - outer(sc_phi2.coords(), sc_psi1.coords());
    let p = crate::linalg::complement_projector(space.k0().coords());
    let residual = fro(&(&p * &m * &p));
    let scale = phi1.norm() * psi2.norm() + sc_phi2.norm() * sc_psi1.norm();
    let floor = 1e-13 * (phi1.norm() + phi2.norm()) * (psi1.norm() + psi2.norm());
    Ok(residual <= space.tolerances().tto * scale + floor)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProductClass {
    NotTto,
    TrivialCase,
    BothType(TypeValue),
}

fn violation(what: &str, residual: f64) -> TtoError {
    TtoError::failure(what, residual)
}

/// Classifies a product `A·B` of two TTOs according to the product theorem,
/// failing if the computed data contradict it.
pub fn product_classification(space: &ModelSpace, a: &CMatrix, b: &CMatrix) -> Result<ProductClass> {
    let ta = classify_type(space, a)?;
    let tb = classify_type(space, b)?;
    let ab = a * b;
    let prod = is_tto(space, &ab)?;
    if prod.is_tto {
        if ta == TypeTag::Scalar || tb == TypeTag::Scalar {
            return Ok(ProductClass::TrivialCase);
        }
        let alpha = ta
            .value()
            .ok_or_else(|| violation("product theorem: product is a TTO but a factor has no type", prod.decomposition.residual))?;
        if !tb.admits(&alpha) {
            return Err(violation("product theorem: factors of different types", prod.decomposition.residual));
        }
        let tab = classify_type(space, &ab)?;
        if !tab.admits(&alpha) {
            return Err(violation("product theorem: product type differs from factor type", prod.decomposition.residual));
        }
        return Ok(ProductClass::BothType(alpha));
    }
    let shared = match (ta, tb) {
        (TypeTag::Scalar, _) | (_, TypeTag::Scalar) => true,
        (TypeTag::Type(x), TypeTag::Type(y)) => x.approx_eq(&y, TYPE_MATCH_TOL),
        _ => false,
    };
    if shared {
        return Err(violation("product theorem: typed pair with non-TTO product", prod.decomposition.residual));
    }
    Ok(ProductClass::NotTto)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutantReport {
    pub commutes: bool,
    /// `‖A S_α − S_α A‖_F`
    pub residual: f64,
    pub bound: f64,
}

/// Whether `A` commutes with `S_α`, relative to `‖A‖ ‖S_α‖`.
pub fn commutant_check(space: &ModelSpace, a: &CMatrix, alpha: Complex64) -> Result<CommutantReport> {
    space.check_matrix(a)?;
    let sa = generalized_shift(space, alpha)?;
    let residual = fro(&(a * &sa - &sa * a));
    let bound = space.tolerances().commutant * fro(a) * fro(&sa);
    Ok(CommutantReport {
        commutes: residual <= bound,
        residual,
        bound,
    })
}

/// Symbol `φ + α conj(SCφ)` with `φ = A K₀ / (1 − α conj(u(0)))` for an operator commuting with `S_α`.
pub fn commutant_symbol(space: &ModelSpace, a: &CMatrix, alpha: Complex64) -> Result<SymbolExpr> {
    let report = commutant_check(space, a, alpha)?;
    if !report.commutes {
        return Err(TtoError::InvalidArgument(format!(
            "operator does not commute with S_alpha (residual {:e})",
            report.residual
        )));
    }
    let den = ONE - alpha * space.u0().conj();
    let phi = ModelVector::new(a * space.k0().coords() / den);
    Ok(typed_symbol(space, &phi, TypeValue::Finite(alpha), ZERO))
}

/// A rank-one TTO with the symbol it was checked against and its type.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneReport {
    pub matrix: CMatrix,
    pub tag: TypeTag,
    pub expected_type: Complex64,
    /// `‖A_symbol − matrix‖_F / ‖matrix‖_F`
    pub symbol_residual: f64,
    /// `|classified α − expected α|`, zero when the classification is `Scalar`
    pub type_residual: f64,
}

const RANK_ONE_TOL: f64 = 1e-8;

fn rank_one_report(
    space: &ModelSpace,
    matrix: CMatrix,
    symbol: &SymbolExpr,
    expected: Complex64,
) -> Result<RankOneReport> {
    let membership = is_tto(space, &matrix)?;
    if !membership.is_tto {
        return Err(TtoError::NotATto(membership.decomposition.residual));
    }
    let built = build_tto(space, symbol)?;
    let symbol_residual = fro(&(&built - &matrix)) / fro(&matrix).max(f64::MIN_POSITIVE);
    if symbol_residual > RANK_ONE_TOL {
        return Err(violation("rank-one symbol identity", symbol_residual));
    }
    let tag = classify_type(space, &matrix)?;
    let type_residual = match tag {
        TypeTag::Scalar => 0.0,
        TypeTag::Type(TypeValue::Finite(a)) => (a - expected).norm(),
        _ => f64::INFINITY,
    };
    if type_residual > RANK_ONE_TOL {
        return Err(violation("rank-one type", type_residual));
    }
    Ok(RankOneReport {
        matrix,
        tag,
        expected_type: expected,
        symbol_residual,
        type_residual,
    })
}

/// `K̃_λ ⊗ K_λ` for `|λ| < 1`: symbol `u/(z − λ)`, type `u(λ)`.
pub fn rank_one_interior(space: &ModelSpace, lambda: Complex64) -> Result<RankOneReport> {
    if lambda.norm() >= 1.0 {
        return Err(TtoError::InvalidArgument("lambda must lie in the open disc".into()));
    }
    let k = space.kernel(lambda)?;
    let kt = space.conjugate_kernel(lambda)?;
    let matrix = outer(kt.coords(), k.coords());
    let u = space.u();
    let pair = RationalPair::new(
        u.numerator(),
        u.denominator().mul(&Poly::new(vec![-lambda, ONE])),
    );
    let symbol = SymbolExpr::rational(RationalTerm::new(pair));
    rank_one_report(space, matrix, &symbol, u.evaluate(lambda)?)
}

/// `K_ζ ⊗ K_ζ` for `|ζ| = 1`: symbol `K_ζ + conj(K_ζ) − 1`, self-adjoint, type `u(ζ)`.
pub fn rank_one_boundary(space: &ModelSpace, zeta: Complex64) -> Result<RankOneReport> {
    if (zeta.norm() - 1.0).abs() > 1e-12 {
        return Err(TtoError::InvalidArgument("zeta must be unimodular".into()));
    }
    let k = space.kernel(zeta)?;
    let matrix = outer(k.coords(), k.coords());
    let herm = fro(&(&matrix - matrix.adjoint()));
    if herm > 1e-12 * fro(&matrix) {
        return Err(violation("boundary rank-one self-adjointness", herm));
    }
    let symbol = SymbolExpr::new(k.clone(), k).with_constant(-ONE);
    rank_one_report(space, matrix, &symbol, space.u().evaluate(zeta)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseReport {
    pub tag: TypeTag,
    pub inverse_is_tto: bool,
    pub inverse_tag: Option<TypeTag>,
}

/// Checks that `A⁻¹` is a TTO exactly when `A` has a type, and then of the same type.
pub fn inverse_type_check(space: &ModelSpace, a: &CMatrix) -> Result<InverseReport> {
    space.check_matrix(a)?;
    let smin = sigma_min(a);
    if smin <= 1e-8 * fro(a) {
        return Err(TtoError::NotInvertible(smin));
    }
    let tag = classify_type(space, a)?;
    let inv = a
        .clone()
        .try_inverse()
        .ok_or(TtoError::NotInvertible(smin))?;
    let m = is_tto(space, &inv)?;
    let inverse_tag = if m.is_tto {
        Some(classify_type(space, &inv)?)
    } else {
        None
    };
    match (tag, inverse_tag) {
        (TypeTag::NoType, None) => {}
        (TypeTag::NoType, Some(_)) => {
            return Err(violation("inverse theorem: untyped operator with TTO inverse", m.decomposition.residual))
        }
        (_, None) => {
            return Err(violation("inverse theorem: typed operator with non-TTO inverse", m.decomposition.residual))
        }
        (t, Some(ti)) => {
            let same = match t {
                TypeTag::Scalar => ti == TypeTag::Scalar,
                TypeTag::Type(v) => ti.admits(&v),
                TypeTag::NoType => unreachable!(),
            };
            if !same {
                return Err(violation("inverse theorem: inverse has a different type", m.decomposition.residual));
            }
        }
    }
    Ok(InverseReport {
        tag,
        inverse_is_tto: m.is_tto,
        inverse_tag,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraClass {
    ScalarAlgebra,
    SubalgebraOf(TypeValue),
    NotAnAlgebraCandidate { index: usize, reason: String },
}

/// Decides whether a family of TTOs can lie in a common algebra of TTOs, and which `ℬ_α`.
pub fn algebra_containment(space: &ModelSpace, ops: &[CMatrix]) -> Result<AlgebraClass> {
    let tags = ops
        .iter()
        .map(|a| classify_type(space, a))
        .collect::<Result<Vec<_>>>()?;
    let Some(first) = tags.iter().position(|t| *t != TypeTag::Scalar) else {
        return Ok(AlgebraClass::ScalarAlgebra);
    };
    let alpha = match tags[first] {
        TypeTag::Type(v) => v,
        _ => {
            return Ok(AlgebraClass::NotAnAlgebraCandidate {
                index: first,
                reason: "operator has no type".into(),
            })
        }
    };
    if let Some(i) = tags.iter().position(|t| !t.admits(&alpha)) {
        return Ok(AlgebraClass::NotAnAlgebraCandidate {
            index: i,
            reason: "operator is of a different type".into(),
        });
    }
    for (i, a) in ops.iter().enumerate() {
        for b in ops {
            if !is_tto(space, &(a * b))?.is_tto {
                return Ok(AlgebraClass::NotAnAlgebraCandidate {
                    index: i,
                    reason: "a pairwise product is not a TTO".into(),
                });
            }
        }
    }
    Ok(AlgebraClass::SubalgebraOf(alpha))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::BlaschkeProduct;
    use crate::tto::compressed_shift;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z2() -> ModelSpace {
        ModelSpace::new(BlaschkeProduct::monomial(2).unwrap()).unwrap()
    }

    fn mat2(a: [[Complex64; 2]; 2]) -> CMatrix {
        CMatrix::from_fn(2, 2, |i, j| a[i][j])
    }

    fn finite(t: TypeTag) -> Complex64 {
        t.value().and_then(TypeValue::finite).expect("finite type")
    }

    #[test]
    fn classify_examples() {
        let s = z2();
        let alpha = c(2.0, 0.0);
        let t = classify_type(&s, &mat2([[ZERO, alpha], [ONE, ZERO]])).unwrap();
        assert!((finite(t) - alpha).norm() < 1e-12);
        assert_eq!(classify_type(&s, &CMatrix::identity(2, 2)).unwrap(), TypeTag::Scalar);
        assert_eq!(
            classify_type(&s, &mat2([[ZERO, ONE], [ZERO, ZERO]])).unwrap(),
            TypeTag::Type(TypeValue::Infinity)
        );
        let t = classify_type(&s, &mat2([[ZERO, ZERO], [ONE, ZERO]])).unwrap();
        assert!(finite(t).norm() < 1e-12);
        assert!(matches!(
            classify_type(&s, &mat2([[ZERO, ZERO], [ZERO, ONE]])),
            Err(TtoError::NotATto(_))
        ));
    }

    #[test]
    fn one_dimensional_space_is_all_scalar() {
        let s = ModelSpace::new(BlaschkeProduct::from_zeros(vec![c(0.9, 0.0)]).unwrap()).unwrap();
        let a = CMatrix::from_element(1, 1, c(3.0, -1.0));
        let cl = classify(&s, &a).unwrap();
        assert_eq!(cl.tag, TypeTag::Scalar);
        assert_eq!(cl.scalar, Some(c(3.0, -1.0)));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(
            type_of_adjoint(TypeTag::Type(TypeValue::Finite(ZERO))),
            TypeTag::Type(TypeValue::Infinity)
        );
        let t = type_of_adjoint(TypeTag::Type(TypeValue::Finite(c(0.0, 2.0))));
        assert!((finite(t) - c(0.0, 0.5)).norm() < 1e-15);
        assert_eq!(type_of_adjoint(TypeTag::Scalar), TypeTag::Scalar);
        assert_eq!(type_of_adjoint(TypeTag::NoType), TypeTag::NoType);
        // cross-check against the classifier
        let s = z2();
        let a = mat2([[ZERO, c(0.0, 2.0)], [ONE, ZERO]]);
        let ta = classify_type(&s, &a).unwrap();
        let tadj = classify_type(&s, &a.adjoint()).unwrap();
        assert!(tadj.matches(&type_of_adjoint(ta)));
    }

    #[test]
    fn rank2_condition_examples() {
        let s = z2();
        let z = ModelVector::from_slice(&[ZERO, ONE]);
        let alpha = c(0.4, 0.1);
        let sym = typed_symbol(&s, &z, TypeValue::Finite(alpha), ZERO);
        assert!(product_rank2_condition(&s, &sym, &sym).unwrap());
        let a = SymbolExpr::analytic(z.clone());
        let b = SymbolExpr::coanalytic(z.clone());
        assert!(!product_rank2_condition(&s, &a, &b).unwrap());
        assert!(product_rank2_condition(&s, &b, &SymbolExpr::constant(c(3.0, 1.0))).unwrap());
    }

    #[test]
    fn product_examples() {
        let s = z2();
        let sa = generalized_shift(&s, c(0.3, 0.0)).unwrap();
        match product_classification(&s, &sa, &sa).unwrap() {
            ProductClass::BothType(TypeValue::Finite(a)) => assert!((a - c(0.3, 0.0)).norm() < 1e-10),
            other => panic!("unexpected {other:?}"),
        }
        let sh = compressed_shift(&s);
        assert_eq!(product_classification(&s, &sh, &sh.adjoint()).unwrap(), ProductClass::NotTto);
        let two = CMatrix::identity(2, 2) * c(2.0, 0.0);
        assert_eq!(product_classification(&s, &two, &sh).unwrap(), ProductClass::TrivialCase);
    }

    #[test]
    fn commutant_examples() {
        let s = z2();
        let alpha = c(0.5, 0.2);
        let sa = generalized_shift(&s, alpha).unwrap();
        assert!(commutant_check(&s, &sa, alpha).unwrap().commutes);
        assert!(!commutant_check(&s, &sa, c(-0.3, 0.0)).unwrap().commutes);
        assert!(commutant_check(&s, &CMatrix::identity(2, 2), c(0.0, 1.0)).unwrap().commutes);
    }

    #[test]
    fn commutant_symbol_examples() {
        let s = ModelSpace::new(
            BlaschkeProduct::from_zeros(vec![c(0.3, 0.1), c(-0.4, 0.4), c(0.0, -0.5)]).unwrap(),
        )
        .unwrap();
        let alpha = c(0.6, -0.3);
        let id = CMatrix::identity(3, 3);
        let sym = commutant_symbol(&s, &id, alpha).unwrap();
        assert!(crate::tto::symbols_equivalent(&s, &sym, &SymbolExpr::constant(ONE)).unwrap());
        let sa = generalized_shift(&s, alpha).unwrap();
        // p(S_α) with p(z) = 1 - 2z + 0.5z²
        let p = crate::linalg::poly_of_matrix(&[ONE, c(-2.0, 0.0), c(0.5, 0.0)], &sa);
        let sym = commutant_symbol(&s, &p, alpha).unwrap();
        let back = build_tto(&s, &sym).unwrap();
        assert!((back - &p).norm() < 1e-8 * p.norm());
        let t = z2();
        let a = c(0.2, 0.3);
        let sym = commutant_symbol(&t, &generalized_shift(&t, a).unwrap(), a).unwrap();
        assert!((sym.analytic.coords() - ModelVector::from_slice(&[ZERO, ONE]).coords()).norm() < 1e-12);
    }

    #[test]
    fn rank_one_examples() {
        let s = z2();
        let r = rank_one_interior(&s, ZERO).unwrap();
        assert!((&r.matrix - mat2([[ZERO, ZERO], [ONE, ZERO]])).norm() < 1e-12);
        assert!(finite(r.tag).norm() < 1e-10);
        let r = rank_one_interior(&s, c(0.5, 0.0)).unwrap();
        assert!((finite(r.tag) - c(0.25, 0.0)).norm() < 1e-10);
        // M² = u'(λ) M
        let m2 = &r.matrix * &r.matrix;
        assert!((m2 - &r.matrix * ONE).norm() < 1e-12);
        let b = rank_one_boundary(&s, ONE).unwrap();
        assert!((&b.matrix - CMatrix::from_element(2, 2, ONE)).norm() < 1e-12);
        assert!((finite(b.tag) - ONE).norm() < 1e-10);
        let b = rank_one_boundary(&s, c(0.0, 1.0)).unwrap();
        assert!((finite(b.tag) + ONE).norm() < 1e-10);
    }

    #[test]
    fn inverse_examples() {
        let s = z2();
        let alpha = c(0.3, 0.4);
        let a = generalized_shift(&s, alpha).unwrap() + CMatrix::identity(2, 2) * c(2.0, 0.0);
        let r = inverse_type_check(&s, &a).unwrap();
        assert!(r.inverse_is_tto);
        assert!(r.inverse_tag.unwrap().admits(&TypeValue::Finite(alpha)));
        let r = inverse_type_check(&s, &CMatrix::identity(2, 2)).unwrap();
        assert_eq!(r.inverse_tag, Some(TypeTag::Scalar));
        let sh = compressed_shift(&s);
        assert!(matches!(inverse_type_check(&s, &sh), Err(TtoError::NotInvertible(_))));
    }

    #[test]
    fn untyped_inverse_is_not_a_tto() {
        let s = ModelSpace::new(BlaschkeProduct::monomial(3).unwrap()).unwrap();
        // Toeplitz matrix with symbol 3 + z + 2z² + z̄ − z̄²: v₁ and v₂ are not parallel
        let t = |k: i32| match k {
            0 => c(3.0, 0.0),
            1 => ONE,
            2 => c(2.0, 0.0),
            -1 => ONE,
            -2 => c(-1.0, 0.0),
            _ => ZERO,
        };
        let a = CMatrix::from_fn(3, 3, |i, j| t(i as i32 - j as i32));
        assert_eq!(classify_type(&s, &a).unwrap(), TypeTag::NoType);
        let r = inverse_type_check(&s, &a).unwrap();
        assert!(!r.inverse_is_tto);
    }

    #[test]
    fn algebra_examples() {
        let s = z2();
        let alpha = c(-0.2, 0.6);
        let sa = generalized_shift(&s, alpha).unwrap();
        let ops = vec![CMatrix::identity(2, 2), sa.clone(), &sa * &sa];
        match algebra_containment(&s, &ops).unwrap() {
            AlgebraClass::SubalgebraOf(v) => assert!(v.approx_eq(&TypeValue::Finite(alpha), 1e-10)),
            other => panic!("unexpected {other:?}"),
        }
        let sh = compressed_shift(&s);
        assert!(matches!(
            algebra_containment(&s, &[sh.clone(), sh.adjoint()]).unwrap(),
            AlgebraClass::NotAnAlgebraCandidate { .. }
        ));
        let scalars = [CMatrix::identity(2, 2) * c(2.0, 0.0), CMatrix::identity(2, 2) * c(3.0, 0.0)];
        assert_eq!(algebra_containment(&s, &scalars).unwrap(), AlgebraClass::ScalarAlgebra);
    }

    #[test]
    fn uniqueness_of_type() {
        let s = ModelSpace::new(
            BlaschkeProduct::from_zeros(vec![c(0.1, 0.5), c(-0.3, -0.3), c(0.6, 0.0)]).unwrap(),
        )
        .unwrap();
        let phi = ModelVector::from_slice(&[c(0.3, 0.1), c(-1.0, 0.5), c(0.2, 0.9)]);
        let alpha = TypeValue::Finite(c(0.7, -0.1));
        let a = build_tto(&s, &typed_symbol(&s, &phi, alpha, c(0.5, 0.0))).unwrap();
        assert!(is_of_type(&s, &a, alpha).unwrap());
        for beta in [c(0.0, 0.0), c(0.7, 0.0), c(-2.0, 1.0), c(0.69, -0.1)] {
            assert!(!is_of_type(&s, &a, TypeValue::Finite(beta)).unwrap());
        }
        assert!(!is_of_type(&s, &a, TypeValue::Infinity).unwrap());
        assert!(is_of_type(&s, &CMatrix::identity(3, 3), TypeValue::Infinity).unwrap());
    }

    #[test]
    fn classification_json() {
        let s = z2();
        let cl = classify(&s, &mat2([[ZERO, c(2.0, 0.0)], [ONE, ZERO]])).unwrap();
        let v = serde_json::to_value(cl).unwrap();
        assert_eq!(v["type"], "alpha");
        assert_eq!(v["value"], serde_json::json!([2.0, 0.0]));
        let cl = classify(&s, &CMatrix::identity(2, 2)).unwrap();
        let v = serde_json::to_value(cl).unwrap();
        assert_eq!(v["type"], "scalar");
        assert!(v["value"].is_null());
    }
}
