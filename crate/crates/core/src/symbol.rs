//! Formal symbols `Φ = φ₁ + conj(φ₂) + c + Σ rational terms`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TtoError};
use crate::linalg::{CVector, ONE, ZERO};
use crate::model_space::{ModelSpace, ModelVector};
use crate::poly::{Poly, RationalPair};

/// A rational function on the circle, optionally divided by `1 − α·conj(u)`
/// and optionally conjugated as a whole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalTerm {
    pub num: Poly,
    pub den: Poly,
    #[serde(with = "crate::json::complex_opt", default)]
    pub clark_alpha: Option<Complex64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub conjugate: bool,
}

impl RationalTerm {
    pub fn new(pair: RationalPair) -> Self {
        RationalTerm {
            num: pair.num,
            den: pair.den,
            clark_alpha: None,
            conjugate: false,
        }
    }

    /// `r / (1 − α ū)`.
    pub fn clark_fraction(pair: RationalPair, alpha: Complex64) -> Self {
        RationalTerm {
            clark_alpha: Some(alpha),
            ..RationalTerm::new(pair)
        }
    }

    pub fn conjugated(mut self) -> Self {
        self.conjugate = !self.conjugate;
        self
    }

    fn check(&self) -> Result<()> {
        RationalPair::new(self.num.clone(), self.den.clone()).check_circle()?;
        if let Some(a) = self.clark_alpha {
            if a.norm() >= 1.0 - 1e-10 {
                return Err(TtoError::PoleOnCircle);
            }
        }
        Ok(())
    }

    fn value(&self, z: Complex64, uz: Complex64) -> Complex64 {
        let mut v = self.num.eval(z) / self.den.eval(z);
        if let Some(a) = self.clark_alpha {
            v /= ONE - a * uz.conj();
        }
        if self.conjugate {
            v.conj()
        } else {
            v
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolExpr {
    #[serde(with = "model_vector_json", default)]
    pub analytic: ModelVector,
    #[serde(with = "model_vector_json", default)]
    pub coanalytic: ModelVector,
    #[serde(with = "crate::json::complex", default)]
    pub constant: Complex64,
    #[serde(default)]
    pub rational: Vec<RationalTerm>,
}

mod model_vector_json {
    use serde::{Deserializer, Serializer};

    use crate::linalg::CVector;
    use crate::model_space::ModelVector;

    pub fn serialize<S: Serializer>(v: &ModelVector, s: S) -> Result<S::Ok, S::Error> {
        crate::json::complex_vec::serialize(v.coords().as_slice(), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ModelVector, D::Error> {
        let v = crate::json::complex_vec::deserialize(d)?;
        Ok(ModelVector::new(CVector::from_vec(v)))
    }
}

impl Default for ModelVector {
    fn default() -> Self {
        ModelVector::zeros(0)
    }
}

impl SymbolExpr {
    /// `φ₁ + conj(φ₂)`.
    pub fn new(analytic: ModelVector, coanalytic: ModelVector) -> Self {
        SymbolExpr {
            analytic,
            coanalytic,
            constant: ZERO,
            rational: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        SymbolExpr::new(ModelVector::zeros(0), ModelVector::zeros(0))
    }

    pub fn analytic(f: ModelVector) -> Self {
        SymbolExpr::new(f, ModelVector::zeros(0))
    }

    /// `conj(f)`.
    pub fn coanalytic(f: ModelVector) -> Self {
        SymbolExpr::new(ModelVector::zeros(0), f)
    }

    pub fn constant(c: Complex64) -> Self {
        SymbolExpr::zero().with_constant(c)
    }

    pub fn rational(term: RationalTerm) -> Self {
        SymbolExpr::zero().with_term(term)
    }

    pub fn with_constant(mut self, c: Complex64) -> Self {
        self.constant = c;
        self
    }

    pub fn with_term(mut self, term: RationalTerm) -> Self {
        self.rational.push(term);
        self
    }

    pub fn has_rational_terms(&self) -> bool {
        !self.rational.is_empty()
    }

    /// The symbol `conj(Φ)`, whose operator is the adjoint.
    pub fn conj_flip(&self) -> SymbolExpr {
        SymbolExpr {
            analytic: self.coanalytic.clone(),
            coanalytic: self.analytic.clone(),
            constant: self.constant.conj(),
            rational: self.rational.iter().cloned().map(RationalTerm::conjugated).collect(),
        }
    }

    fn part(space: &ModelSpace, v: &ModelVector) -> Result<CVector> {
        match v.len() {
            0 => Ok(CVector::zeros(space.dim())),
            n if n == space.dim() => Ok(v.coords().clone()),
            n => Err(TtoError::SpaceMismatch {
                expected: space.dim(),
                found: n,
            }),
        }
    }

    /// `(φ₁, φ₂)` as full-length vectors, with the constant folded into `φ₁` as `c·K₀`.
    ///
    /// Only meaningful for symbols without rational terms.
    pub fn split(&self, space: &ModelSpace) -> Result<(ModelVector, ModelVector)> {
        let a = Self::part(space, &self.analytic)? + space.k0().coords() * self.constant;
        let b = Self::part(space, &self.coanalytic)?;
        Ok((ModelVector::new(a), ModelVector::new(b)))
    }

    pub fn validate(&self, space: &ModelSpace) -> Result<()> {
        Self::part(space, &self.analytic)?;
        Self::part(space, &self.coanalytic)?;
        self.rational.iter().try_for_each(RationalTerm::check)
    }

    /// Values on an arbitrary set of boundary points with precomputed basis table and `u` values.
    pub(crate) fn values_on(
        &self,
        space: &ModelSpace,
        points: &[Complex64],
        basis: &nalgebra::DMatrix<Complex64>,
        u_vals: &[Complex64],
    ) -> Result<Vec<Complex64>> {
        let a = Self::part(space, &self.analytic)?;
        let b = Self::part(space, &self.coanalytic)?;
        let av = basis.transpose() * a;
        let bv = basis.transpose() * b;
        let mut out = Vec::with_capacity(points.len());
        for (j, &z) in points.iter().enumerate() {
            let mut v = av[j] + bv[j].conj() + self.constant;
            for t in &self.rational {
                v += t.value(z, u_vals[j]);
            }
            if !v.is_finite() {
                return Err(TtoError::PoleOnCircle);
            }
            out.push(v);
        }
        Ok(out)
    }
}
