//! Seeded random generators for spaces, vectors, symbols and TTOs of a
//! prescribed type. Every consumer (property suite, tests, acceptance) draws
//! from here so runs are reproducible from a single seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blaschke::BlaschkeProduct;
use crate::error::Result;
use crate::linalg::{project_off, CMatrix, CVector};
use crate::model_space::{ModelSpace, ModelVector};
use crate::poly::Poly;
use crate::symbol::SymbolExpr;
use crate::tto::build_tto;
use crate::type_algebra::{typed_symbol, TypeValue};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `stream` under `seed`.
    pub fn stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { rng }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.random::<f64>() < p
    }

    /// Uniform on the disc of radius `r`.
    pub fn in_disc(&mut self, r: f64) -> Complex64 {
        let rad = r * self.rng.random::<f64>().sqrt();
        Complex64::from_polar(rad, self.uniform(-std::f64::consts::PI, std::f64::consts::PI))
    }

    pub fn unimodular(&mut self) -> Complex64 {
        Complex64::from_polar(1.0, self.uniform(-std::f64::consts::PI, std::f64::consts::PI))
    }

    /// Real and imaginary parts uniform in `[-1, 1)`.
    pub fn complex(&mut self) -> Complex64 {
        Complex64::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0))
    }

    pub fn blaschke(&mut self, n: usize, rmax: f64) -> Result<BlaschkeProduct> {
        let zeros = (0..n).map(|_| self.in_disc(rmax)).collect();
        let rot = self.unimodular();
        BlaschkeProduct::new(zeros, rot)
    }

    pub fn space(&mut self, n: usize, rmax: f64) -> Result<ModelSpace> {
        ModelSpace::new(self.blaschke(n, rmax)?)
    }

    pub fn cvector(&mut self, n: usize) -> CVector {
        CVector::from_fn(n, |_, _| self.complex())
    }

    pub fn vector(&mut self, n: usize) -> ModelVector {
        ModelVector::new(self.cvector(n))
    }

    pub fn matrix(&mut self, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| self.complex())
    }

    pub fn poly(&mut self, degree: usize) -> Poly {
        Poly::new((0..=degree).map(|_| self.complex()).collect())
    }

    /// `∞` with probability `p_inf`, otherwise a point of the disc of radius 2.
    pub fn type_value(&mut self, p_inf: f64) -> TypeValue {
        if self.coin(p_inf) {
            TypeValue::Infinity
        } else {
            TypeValue::Finite(self.in_disc(2.0))
        }
    }

    /// A non-scalar symbol of type `alpha`. `φ` is kept off `K₀` so the
    /// operator is not accidentally a multiple of the identity.
    pub fn typed_symbol(&mut self, space: &ModelSpace, alpha: TypeValue) -> SymbolExpr {
        let n = space.dim();
        let raw = self.cvector(n);
        let phi = if n > 1 {
            let p = project_off(&raw, space.k0().coords());
            ModelVector::new(raw + p * Complex64::new(1.0, 0.0))
        } else {
            ModelVector::new(raw)
        };
        let c = self.complex();
        typed_symbol(space, &phi, alpha, c)
    }

    pub fn typed_tto(&mut self, space: &ModelSpace, alpha: TypeValue) -> Result<CMatrix> {
        let s = self.typed_symbol(space, alpha);
        build_tto(space, &s)
    }

    /// A symbol `φ₁ + conj(φ₂)` with independent random parts.
    pub fn generic_symbol(&mut self, space: &ModelSpace) -> SymbolExpr {
        let n = space.dim();
        SymbolExpr::new(self.vector(n), self.vector(n))
    }

    /// A TTO with no type, clearly separated from every typed operator.
    /// Requires `dim ≥ 3`; returns `None` otherwise.
    pub fn untyped_tto(&mut self, space: &ModelSpace) -> Result<Option<CMatrix>> {
        if space.dim() < 3 {
            return Ok(None);
        }
        loop {
            let s = self.generic_symbol(space);
            let (phi1, phi2) = s.split(space)?;
            let k0 = space.k0().coords();
            let v1 = project_off(space.sc(&phi1).coords(), k0);
            let v2 = project_off(phi2.coords(), k0);
            let (n1, n2) = (v1.norm(), v2.norm());
            if n1 < 1e-3 || n2 < 1e-3 {
                continue;
            }
            let r = v1.dotc(&v2) / (n1 * n1);
            let sep = (&v2 - &v1 * r).norm() / (n1 + n2);
            if sep > 1e-2 {
                return Ok(Some(build_tto(space, &s)?));
            }
        }
    }

    /// A point of the open disc with modulus at most `rmax`, or a point on the circle.
    pub fn point(&mut self, boundary: bool, rmax: f64) -> Complex64 {
        if boundary {
            self.unimodular()
        } else {
            self.in_disc(rmax)
        }
    }

    pub fn unimodular_values(&mut self, n: usize) -> Vec<Complex64> {
        (0..n).map(|_| self.unimodular()).collect()
    }
}
