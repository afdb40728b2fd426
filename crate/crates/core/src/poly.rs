//! Dense complex polynomials and rational functions.
//!
//! Coefficients are stored in ascending degree order. Roots are found as
//! eigenvalues of the companion matrix and then polished with Newton steps.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TtoError};
use crate::linalg::{ONE, ZERO};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    #[serde(with = "crate::json::complex_vec")]
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Poly { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Poly { coeffs: vec![c] }
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = ONE;
        Poly { coeffs }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots
            .iter()
            .fold(Poly::constant(ONE), |acc, &r| acc.mul(&Poly::new(vec![-r, ONE])))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Degree after ignoring exactly-zero trailing coefficients; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != ZERO)
            .unwrap_or(0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::constant(ZERO);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::constant(ZERO);
        }
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, k: usize| p.coeffs.get(k).copied().unwrap_or(ZERO);
        Poly::new((0..len).map(|k| get(self, k) + get(other, k)).collect())
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Drops trailing coefficients with modulus at most `tol` times the largest one.
    pub fn trimmed(&self, tol: f64) -> Poly {
        let big = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let keep = self
            .coeffs
            .iter()
            .rposition(|c| c.norm() > tol * big)
            .map_or(1, |i| i + 1);
        Poly::new(self.coeffs[..keep.min(self.coeffs.len()).max(1)].to_vec())
    }

    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// All roots, via eigenvalues of the companion matrix followed by Newton polishing.
    ///
    /// The leading coefficient must be nonzero; callers that care about
    /// degeneracy check it first.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let n = self.degree();
        if n == 0 {
            return Ok(Vec::new());
        }
        let lead = self.coeffs[n];
        // z^m factors are peeled off exactly so that repeated zero roots stay exact.
        let m = self.coeffs.iter().position(|c| *c != ZERO).unwrap_or(0);
        let mut roots = vec![ZERO; m];
        let deg = n - m;
        if deg == 0 {
            return Ok(roots);
        }
        let reduced: Vec<Complex64> = self.coeffs[m..=n].iter().map(|&c| c / lead).collect();
        if deg == 1 {
            roots.push(-reduced[0]);
            return Ok(roots);
        }
        let mut comp = DMatrix::<Complex64>::zeros(deg, deg);
        for i in 1..deg {
            comp[(i, i - 1)] = ONE;
        }
        for i in 0..deg {
            comp[(i, deg - 1)] = -reduced[i];
        }
        let eig = comp
            .clone()
            .try_schur(1e-15, 10_000)
            .and_then(|s| s.eigenvalues())
            .ok_or_else(|| TtoError::failure("companion eigenvalues", f64::NAN))?;
        let reduced_poly = Poly::new(reduced);
        let dp = reduced_poly.derivative();
        for mut z in eig.iter().copied() {
            polish(&reduced_poly, &dp, &mut z);
            roots.push(z);
        }
        Ok(roots)
    }
}

/// Newton refinement that only accepts steps that reduce the residual.
fn polish(p: &Poly, dp: &Poly, z: &mut Complex64) {
    let mut res = p.eval(*z).norm();
    for _ in 0..8 {
        let d = dp.eval(*z);
        if d.norm() == 0.0 || res == 0.0 {
            break;
        }
        let cand = *z - p.eval(*z) / d;
        let cres = p.eval(cand).norm();
        if !(cres < res) {
            break;
        }
        *z = cand;
        res = cres;
    }
}

/// A rational function `num / den`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalPair {
    pub num: Poly,
    pub den: Poly,
}

impl RationalPair {
    pub fn new(num: Poly, den: Poly) -> Self {
        RationalPair { num, den }
    }

    pub fn polynomial(p: Poly) -> Self {
        RationalPair::new(p, Poly::constant(ONE))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Fails with `PoleOnCircle` if the denominator has a root within `1e-10` of the unit circle.
    pub fn check_circle(&self) -> Result<()> {
        let den = self.den.trimmed(1e-15);
        if den.coeffs.iter().all(|c| *c == ZERO) {
            return Err(TtoError::PoleOnCircle);
        }
        for r in den.roots()? {
            if (r.norm() - 1.0).abs() < 1e-10 {
                return Err(TtoError::PoleOnCircle);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_and_derivative() {
        let p = Poly::new(vec![c(1.0, 0.0), c(0.0, 2.0), c(3.0, 0.0)]);
        assert_eq!(p.eval(c(2.0, 0.0)), c(13.0, 4.0));
        assert_eq!(p.derivative().eval(c(1.0, 0.0)), c(6.0, 2.0));
    }

    #[test]
    fn roots_of_unity() {
        let p = Poly::new(vec![c(-1.0, 0.0), ZERO, ZERO, ONE]);
        let roots = p.roots().unwrap();
        assert_eq!(roots.len(), 3);
        for r in roots {
            assert!((r * r * r - ONE).norm() < 1e-14);
        }
    }

    #[test]
    fn repeated_zero_root_is_exact() {
        let p = Poly::new(vec![ZERO, ZERO, c(-0.25, 0.0), ONE]);
        let mut roots = p.roots().unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert_eq!(roots[0], ZERO);
        assert_eq!(roots[1], ZERO);
        assert!((roots[2] - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn from_roots_round_trip() {
        let rs = [c(0.5, 0.1), c(-0.3, 0.7), c(0.0, -0.2), c(0.9, 0.0)];
        let p = Poly::from_roots(&rs);
        let found = p.roots().unwrap();
        for r in rs {
            assert!(found.iter().any(|f| (f - r).norm() < 1e-12));
        }
    }

    #[test]
    fn pole_on_circle_detected() {
        let r = RationalPair::new(Poly::constant(ONE), Poly::new(vec![c(-1.0, 0.0), ONE]));
        assert_eq!(r.check_circle(), Err(TtoError::PoleOnCircle));
        let ok = RationalPair::new(Poly::constant(ONE), Poly::new(vec![c(-0.5, 0.0), ONE]));
        assert!(ok.check_circle().is_ok());
    }
}
