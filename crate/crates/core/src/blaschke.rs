//! Finite Blaschke products `u(z) = ω ∏ (z − a_k)/(1 − ā_k z)`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TtoError};
use crate::linalg::{ONE, ZERO};
use crate::poly::{Poly, RationalPair};

/// Zeros must stay this far inside the unit circle.
pub const DISC_MARGIN: f64 = 1e-12;
const ROTATION_TOL: f64 = 1e-14;
const POLE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeJson", into = "BlaschkeJson")]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    rotation: Complex64,
}

#[derive(Serialize, Deserialize)]
struct BlaschkeJson {
    #[serde(with = "crate::json::complex_vec")]
    zeros: Vec<Complex64>,
    #[serde(with = "crate::json::complex", default = "default_rotation")]
    rotation: Complex64,
}

fn default_rotation() -> Complex64 {
    ONE
}

impl TryFrom<BlaschkeJson> for BlaschkeProduct {
    type Error = TtoError;

    fn try_from(raw: BlaschkeJson) -> Result<Self> {
        BlaschkeProduct::new(raw.zeros, raw.rotation)
    }
}

impl From<BlaschkeProduct> for BlaschkeJson {
    fn from(u: BlaschkeProduct) -> Self {
        BlaschkeJson {
            zeros: u.zeros,
            rotation: u.rotation,
        }
    }
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>, rotation: Complex64) -> Result<Self> {
        if zeros.is_empty() {
            return Err(TtoError::InvalidBlaschke("degree must be at least one".into()));
        }
        if let Some(a) = zeros.iter().find(|a| !(a.norm() < 1.0 - DISC_MARGIN)) {
            return Err(TtoError::InvalidBlaschke(format!(
                "zero {a} is not inside the unit disc"
            )));
        }
        if !((rotation.norm() - 1.0).abs() <= ROTATION_TOL) {
            return Err(TtoError::InvalidBlaschke(format!(
                "rotation {rotation} is not unimodular"
            )));
        }
        Ok(BlaschkeProduct { zeros, rotation })
    }

    /// Blaschke product with unit rotation.
    pub fn from_zeros(zeros: Vec<Complex64>) -> Result<Self> {
        Self::new(zeros, ONE)
    }

    /// `u(z) = z^n`.
    pub fn monomial(n: usize) -> Result<Self> {
        Self::from_zeros(vec![ZERO; n])
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn rotation(&self) -> Complex64 {
        self.rotation
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    fn factor_den(a: Complex64, z: Complex64) -> Result<Complex64> {
        let d = ONE - a.conj() * z;
        if d.norm() < POLE_TOL {
            return Err(TtoError::PoleHit { re: z.re, im: z.im });
        }
        Ok(d)
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        self.zeros.iter().try_fold(self.rotation, |acc, &a| {
            Ok(acc * (z - a) / Self::factor_den(a, z)?)
        })
    }

    /// `u′(z)`, from the logarithmic derivative away from the zeros and the
    /// product rule near them.
    pub fn derivative_at(&self, z: Complex64) -> Result<Complex64> {
        let near_zero = self.zeros.iter().any(|&a| (z - a).norm() < 1e-8);
        if !near_zero {
            let mut sum = ZERO;
            for &a in &self.zeros {
                sum += (1.0 - a.norm_sqr()) / ((z - a) * Self::factor_den(a, z)?);
            }
            return Ok(self.evaluate(z)? * sum);
        }
        let mut factors = Vec::with_capacity(self.zeros.len());
        let mut dfactors = Vec::with_capacity(self.zeros.len());
        for &a in &self.zeros {
            let d = Self::factor_den(a, z)?;
            factors.push((z - a) / d);
            dfactors.push((1.0 - a.norm_sqr()) / (d * d));
        }
        let mut total = ZERO;
        for k in 0..factors.len() {
            let mut term = dfactors[k];
            for (j, f) in factors.iter().enumerate() {
                if j != k {
                    term *= f;
                }
            }
            total += term;
        }
        Ok(self.rotation * total)
    }

    /// `ω ∏ (z − a_k)`.
    pub fn numerator(&self) -> Poly {
        Poly::from_roots(&self.zeros).scale(self.rotation)
    }

    /// `∏ (1 − ā_k z)`.
    pub fn denominator(&self) -> Poly {
        self.zeros.iter().fold(Poly::constant(ONE), |acc, &a| {
            acc.mul(&Poly::new(vec![ONE, -a.conj()]))
        })
    }

    pub fn as_rational(&self) -> RationalPair {
        RationalPair::new(self.numerator(), self.denominator())
    }

    /// All `n` solutions of `u(z) = α` for `|α| ≤ 1`, sorted by argument then modulus.
    pub fn solve_u_equals(&self, alpha: Complex64) -> Result<Vec<Complex64>> {
        let am = alpha.norm();
        if am > 1.0 + 1e-12 {
            return Err(TtoError::InvalidArgument(format!(
                "|alpha| = {am} exceeds one"
            )));
        }
        let mut roots = if alpha == ZERO {
            self.zeros.clone()
        } else {
            let p = self.numerator().add(&self.denominator().scale(-alpha));
            let n = self.degree();
            let lead = p.coeffs()[n];
            if lead.norm() < 1e-14 * p.coeff_norm().max(1.0) {
                return Err(TtoError::DegenerateLeadingCoefficient(lead.norm()));
            }
            let mut roots = p.roots()?;
            // polish against u itself, which is better conditioned than the expanded polynomial
            for z in roots.iter_mut() {
                self.newton_polish(alpha, z);
            }
            roots
        };
        let on_circle = (am - 1.0).abs() <= 1e-12;
        for z in roots.iter_mut() {
            let m = z.norm();
            if on_circle {
                if (m - 1.0).abs() > 1e-8 {
                    return Err(TtoError::failure("solve_u_equals: root off the circle", (m - 1.0).abs()));
                }
                *z /= m;
            } else if m >= 1.0 {
                return Err(TtoError::failure("solve_u_equals: root outside the disc", m - 1.0));
            }
        }
        roots.sort_by(|a, b| root_order(*a, *b));
        Ok(roots)
    }

    fn newton_polish(&self, alpha: Complex64, z: &mut Complex64) {
        let f = |z: Complex64| self.evaluate(z).map(|v| v - alpha);
        let Ok(mut res) = f(*z).map(|v| v.norm()) else { return };
        for _ in 0..6 {
            let (Ok(v), Ok(d)) = (f(*z), self.derivative_at(*z)) else { return };
            if d.norm() == 0.0 || res == 0.0 {
                return;
            }
            let cand = *z - v / d;
            match f(cand) {
                Ok(cv) if cv.norm() < res => {
                    *z = cand;
                    res = cv.norm();
                }
                _ => return,
            }
        }
    }

    /// `u_α = (u − α)/(1 − ᾱu)` for `|α| < 1`, as a Blaschke product.
    pub fn mobius(&self, alpha: Complex64) -> Result<BlaschkeProduct> {
        if alpha.norm() >= 1.0 {
            return Err(TtoError::AlphaOnCircle(alpha.norm()));
        }
        if alpha == ZERO {
            return Ok(self.clone());
        }
        let zeros = self.solve_u_equals(alpha)?;
        // fix the rotation at z = 1 where every factor is unimodular
        let uz = self.evaluate(ONE)?;
        let target = (uz - alpha) / (ONE - alpha.conj() * uz);
        let unrotated = BlaschkeProduct {
            zeros: zeros.clone(),
            rotation: ONE,
        }
        .evaluate(ONE)?;
        let rot = target / unrotated;
        BlaschkeProduct::new(zeros, rot / rot.norm())
    }
}

/// Ascending principal argument in `(−π, π]`, ties broken by modulus.
fn root_order(a: Complex64, b: Complex64) -> Ordering {
    let arg = |z: Complex64| {
        let t = z.arg();
        if t <= -PI + 1e-12 {
            PI
        } else {
            t
        }
    };
    let (ta, tb) = (arg(a), arg(b));
    if (ta - tb).abs() > 1e-12 {
        ta.total_cmp(&tb)
    } else {
        a.norm().total_cmp(&b.norm())
    }
}
