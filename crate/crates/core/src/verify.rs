//! The property suite: every structural identity and theorem checked by the
//! crate, run against random data on one space and summarized as one line
//! per check with its worst residual and the bound it must stay under.
//!
//! Checks whose outcome is a prediction (membership of a product, a type
//! match) report the number of mismatches against a bound of zero.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::crofoot_clark::{
    clark_data, classify_unitary, crofoot, crofoot_intertwine_check, crofoot_shift_residual,
    functional_calculus, invertibility_criterion, multiplicativity_check,
    spectral_reconstruction_residual, UnitaryClass,
};
use crate::error::{Result, TtoError};
use crate::json::round15;
use crate::linalg::{fro, outer, project_off, sigma_min, CMatrix, ONE, ZERO};
use crate::model_space::{inner_product, ModelSpace, ModelVector};
use crate::poly::Poly;
use crate::sample::Sampler;
use crate::symbol::SymbolExpr;
use crate::tto::{
    build_tto, c_symmetry_residual, generalized_shift, is_tto, kernel_shift_identities_check,
};
use crate::type_algebra::{
    classify_type, commutant_check, inverse_type_check, is_of_type,
    product_classification, product_rank2_condition, rank_one_boundary, rank_one_interior,
    typed_symbol, ProductClass, TypeTag, TypeValue,
};

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub key: &'static str,
    pub trials: usize,
    pub max_residual: f64,
    pub bound: f64,
    pub pass: bool,
    /// first error encountered, if any
    pub note: Option<String>,
}

impl Serialize for CheckResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CheckResult", 6)?;
        st.serialize_field("key", self.key)?;
        st.serialize_field("trials", &self.trials)?;
        st.serialize_field("max_residual", &round15(self.max_residual))?;
        st.serialize_field("bound", &round15(self.bound))?;
        st.serialize_field("pass", &self.pass)?;
        st.serialize_field("note", &self.note)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub dimension: usize,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn check(&self, key: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.key == key)
    }
}

struct Acc {
    key: &'static str,
    bound: f64,
    trials: usize,
    max: f64,
    note: Option<String>,
}

impl Acc {
    fn new(key: &'static str, bound: f64) -> Self {
        Acc {
            key,
            bound,
            trials: 0,
            max: 0.0,
            note: None,
        }
    }

    fn residual(&mut self, r: f64) {
        self.trials += 1;
        if r.is_nan() || r > self.max {
            self.max = if r.is_nan() { f64::INFINITY } else { r };
        }
    }

    /// Counts a mismatch when `ok` is false.
    fn expect(&mut self, ok: bool) {
        self.trials += 1;
        if !ok {
            self.max += 1.0;
        }
    }

    fn error(&mut self, e: TtoError) {
        self.trials += 1;
        self.max = match e {
            TtoError::NumericalFailure { residual, .. } if residual.is_finite() && self.bound > 0.0 => {
                self.max.max(residual)
            }
            _ if self.bound == 0.0 => self.max + 1.0,
            _ => f64::INFINITY,
        };
        if self.note.is_none() {
            self.note = Some(e.to_string());
        }
    }

    fn run<F: FnMut(&mut Acc) -> Result<()>>(&mut self, mut f: F) {
        if let Err(e) = f(self) {
            self.error(e);
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            key: self.key,
            trials: self.trials,
            max_residual: self.max,
            bound: self.bound,
            pass: self.max <= self.bound && self.note.is_none(),
            note: self.note,
        }
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(1e-300)
}

/// Runs the full property suite on `space`. Deterministic in `(space, seed, trials)`.
pub fn verify_suite(space: &ModelSpace, seed: u64, trials: usize) -> VerifyReport {
    let mut checks = Vec::new();
    let mut stream = 0u64;
    let mut next = || {
        stream += 1;
        Sampler::stream(seed, stream)
    };
    let n = space.dim();
    let u = space.u();

    // Blaschke product
    let mut acc = Acc::new("boundary_modulus", 1e-12);
    let mut rng = next();
    for _ in 0..trials {
        acc.run(|a| {
            a.residual((u.evaluate(rng.unimodular())?.norm() - 1.0).abs());
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("root_residual", 1e-9);
    let mut rng = next();
    for t in 0..trials {
        let alpha = if t % 2 == 0 { rng.unimodular() } else { rng.in_disc(0.95) };
        acc.run(|a| {
            for z in u.solve_u_equals(alpha)? {
                a.residual((u.evaluate(z)? - alpha).norm());
            }
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("schwarz_pick", 0.0);
    let mut rng = next();
    for _ in 0..trials {
        let z = rng.in_disc(0.999);
        acc.run(|a| {
            a.expect(u.evaluate(z)?.norm() < 1.0);
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("derivative_finite_difference", 1e-7);
    let mut rng = next();
    for _ in 0..trials {
        let z = rng.in_disc(0.95);
        acc.run(|a| {
            let h = 1e-6;
            let fd = (u.evaluate(z + h)? - u.evaluate(z - h)?) / (2.0 * h);
            let d = u.derivative_at(z)?;
            a.residual(rel((fd - d).norm(), d.norm().max(1.0)));
            Ok(())
        });
    }
    checks.push(acc.finish());

    // model space
    let mut acc = Acc::new("reproducing_kernel", 1e-9);
    let mut rng = next();
    for t in 0..trials {
        let f = rng.vector(n);
        let lambda = rng.point(t % 4 == 3, 0.95);
        acc.run(|a| {
            let k = space.kernel(lambda)?;
            let lhs = inner_product(&space.grid_values(&f), &space.grid_values(&k))?;
            let rhs = space.evaluate(&f, lambda)?;
            a.residual(rel((lhs - rhs).norm(), f.norm() * k.norm()));
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("conjugation_involution", 1e-10);
    let mut rng = next();
    let m = space.conjugation_matrix();
    acc.residual(fro(&(m * m.conjugate() - CMatrix::identity(n, n))));
    for _ in 0..trials {
        let (f, g) = (rng.vector(n), rng.vector(n));
        let (cf, cg) = (space.conjugate(&f), space.conjugate(&g));
        let iso = (cf.inner(&cg) - g.inner(&f)).norm();
        let inv = space.conjugate(&cf).sub(&f).norm();
        acc.residual(rel(iso, f.norm() * g.norm()).max(rel(inv, f.norm())));
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("conjugate_kernel_pairing", 1e-9);
    let mut rng = next();
    for t in 0..trials {
        let f = rng.vector(n);
        let lambda = rng.point(t % 4 == 3, 0.95);
        acc.run(|a| {
            let kt = space.conjugate_kernel(lambda)?;
            let lhs = space.evaluate(&space.conjugate(&f), lambda)?;
            let rhs = kt.inner(&f);
            a.residual(rel((lhs - rhs).norm(), f.norm() * kt.norm()));
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("boundary_kernel_norm", 1e-8);
    let mut rng = next();
    for _ in 0..trials {
        let zeta = rng.unimodular();
        acc.run(|a| {
            let k = space.kernel(zeta)?;
            let d = u.derivative_at(zeta)?.norm();
            a.residual(rel((k.norm().powi(2) - d).abs(), d));
            Ok(())
        });
    }
    checks.push(acc.finish());

    // operators
    let s = space.shift();
    let k0 = space.k0().coords();
    let kt0 = space.k0_tilde().coords();
    let id = CMatrix::identity(n, n);
    let mut acc = Acc::new("defect_identities", 1e-10);
    acc.residual(fro(&(&id - s * s.adjoint() - outer(k0, k0))));
    acc.residual(fro(&(&id - s.adjoint() * s - outer(kt0, kt0))));
    checks.push(acc.finish());

    let mut acc = Acc::new("kernel_shift_identities", 1e-9);
    let mut rng = next();
    for t in 0..trials {
        let lambda = rng.point(t % 2 == 1, 0.95);
        acc.run(|a| {
            let r = kernel_shift_identities_check(space, lambda)?;
            let scale = space.kernel(lambda)?.norm().max(1.0);
            a.residual(r.max_residual() / scale);
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("c_symmetry", 1e-9);
    let mut rng = next();
    for _ in 0..trials {
        let sym = rng.generic_symbol(space);
        acc.run(|a| {
            let m = build_tto(space, &sym)?;
            a.residual(rel(c_symmetry_residual(space, &m), fro(&m)));
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("sc_squared", 1e-9);
    let mut rng = next();
    for _ in 0..trials {
        let f = rng.vector(n);
        acc.run(|a| {
            let lhs = space.sc(&space.sc(&f));
            let rhs = f.sub(&space.k0().scale(space.evaluate(&f, ZERO)?));
            a.residual(rel(lhs.sub(&rhs).norm(), f.norm()));
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("adjoint_symbol", 1e-9);
    let mut rng = next();
    for _ in 0..trials {
        let sym = rng.generic_symbol(space).with_constant(rng.complex());
        acc.run(|a| {
            let m = build_tto(space, &sym)?;
            let f = build_tto(space, &sym.conj_flip())?;
            a.residual(rel(fro(&(f - m.adjoint())), fro(&m)));
            Ok(())
        });
    }
    checks.push(acc.finish());

    let monomial = u.zeros().iter().all(|z| *z == ZERO);
    let mut acc = Acc::new("toeplitz_oracle", 0.0);
    let mut rng = next();
    if monomial {
        for t in 0..trials {
            let m = if t % 2 == 0 {
                let d: Vec<Complex64> = (0..2 * n - 1).map(|_| rng.complex()).collect();
                CMatrix::from_fn(n, n, |i, j| d[i + n - 1 - j])
            } else {
                rng.matrix(n)
            };
            acc.run(|a| {
                let toeplitz = (1..n).all(|i| {
                    (1..n).all(|j| (m[(i, j)] - m[(i - 1, j - 1)]).norm() <= 1e-12 * fro(&m))
                });
                a.expect(is_tto(space, &m)?.is_tto == toeplitz);
                Ok(())
            });
        }
    }
    checks.push(acc.finish());

    // typed corpus shared by the remaining algebraic checks
    let mut rng = next();
    let corpus: Vec<(TypeValue, SymbolExpr)> = (0..trials)
        .map(|_| {
            let alpha = rng.type_value(0.15);
            (alpha, rng.typed_symbol(space, alpha))
        })
        .collect();

    let mut acc = Acc::new("cso_commutation", 0.0);
    let mut rng = next();
    for t in 0..trials {
        let (alpha, s1) = &corpus[t];
        let s2 = if t % 2 == 0 {
            rng.typed_symbol(space, *alpha)
        } else {
            let beta = rng_other_type(&mut rng, alpha);
            rng.typed_symbol(space, beta)
        };
        acc.run(|a| {
            let (x, y) = (build_tto(space, s1)?, build_tto(space, &s2)?);
            let xy = &x * &y;
            let commute = fro(&(&xy - &y * &x)) <= 1e-8 * fro(&x) * fro(&y);
            a.expect(is_tto(space, &xy)?.is_tto == commute);
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("commutant_theorem", 0.0);
    let mut rng = next();
    for _ in 0..trials {
        let alpha = if rng.coin(0.25) { rng.unimodular() } else { rng.in_disc(1.0) };
        acc.run(|a| {
            let m = rng.typed_tto(space, TypeValue::Finite(alpha))?;
            let commutes = commutant_check(space, &m, alpha)?.commutes;
            let tag = classify_type(space, &m)?;
            a.expect(commutes && tag.admits(&TypeValue::Finite(alpha)));
            Ok(())
        });
    }
    for _ in 0..trials {
        acc.run(|a| {
            if let Some(m) = rng.untyped_tto(space)? {
                for _ in 0..20 {
                    let beta = rng.in_disc(1.0);
                    a.expect(!commutant_check(space, &m, beta)?.commutes);
                }
            }
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("product_theorem", 0.0);
    let mut rng = next();
    for t in 0..trials {
        let (alpha, s1) = &corpus[t];
        let stratum = t % 3;
        let s2 = match stratum {
            0 => rng.typed_symbol(space, *alpha),
            1 => {
                let beta = rng_other_type(&mut rng, alpha);
                rng.typed_symbol(space, beta)
            }
            _ => SymbolExpr::constant(rng.complex()),
        };
        acc.run(|a| {
            let (x, y) = (build_tto(space, s1)?, build_tto(space, &s2)?);
            let got = product_classification(space, &x, &y)?;
            let ok = match (n, stratum, got) {
                (1, _, ProductClass::TrivialCase) => true,
                (_, 0, ProductClass::BothType(v)) => {
                    v.approx_eq(alpha, 1e-6)
                        && classify_type(space, &(&x * &y))?.admits(alpha)
                }
                (_, 1, ProductClass::NotTto) => true,
                (_, 2, ProductClass::TrivialCase) => true,
                _ => false,
            };
            a.expect(ok);
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("rank2_lemma", 0.0);
    let mut rng = next();
    for t in 0..trials {
        let (alpha, s1) = &corpus[t];
        let (s1, s2) = match t % 3 {
            0 => (s1.clone(), rng.typed_symbol(space, *alpha)),
            1 => (s1.clone(), rng.generic_symbol(space)),
            _ => (rng.generic_symbol(space), corpus[rng.index(corpus.len())].1.clone()),
        };
        acc.run(|a| {
            let cond = product_rank2_condition(space, &s1, &s2)?;
            let direct = is_tto(space, &(build_tto(space, &s1)? * build_tto(space, &s2)?))?.is_tto;
            a.expect(cond == direct);
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("uniqueness_of_type", 0.0);
    let mut rng = next();
    if n > 1 {
        for (alpha, sym) in &corpus {
            acc.run(|a| {
                let m = build_tto(space, sym)?;
                a.expect(is_of_type(space, &m, *alpha)?);
                for _ in 0..20 {
                    let beta = rng_other_type(&mut rng, alpha);
                    a.expect(!is_of_type(space, &m, beta)?);
                }
                Ok(())
            });
        }
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("normalization", 1e-9);
    let mut rng = next();
    for _ in 0..trials {
        let alpha = TypeValue::Finite(rng.in_disc(2.0));
        let phi = rng.vector(n);
        let c = rng.complex();
        acc.run(|a| {
            let m = build_tto(space, &typed_symbol(space, &phi, alpha, c))?;
            let (phi0, c0) = normalized(space, &phi, alpha, c)?;
            let m0 = build_tto(space, &typed_symbol(space, &phi0, alpha, c0))?;
            let same = classify_type(space, &m)?.matches(&classify_type(space, &m0)?);
            let r = rel(fro(&(&m - &m0)), fro(&m));
            a.residual(if same { r } else { f64::INFINITY });
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("adjoint_duality", 0.0);
    let mut rng = next();
    for (_, sym) in &corpus {
        acc.run(|a| {
            let m = build_tto(space, sym)?;
            a.expect(classify_type(space, &m.adjoint())?.matches(&classify_type(space, &m)?.adjoint()));
            Ok(())
        });
    }
    for _ in 0..trials / 5 {
        acc.run(|a| {
            if let Some(m) = rng.untyped_tto(space)? {
                a.expect(classify_type(space, &m.adjoint())? == TypeTag::NoType);
            }
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("rank_one_interior", 1e-8);
    let mut rng = next();
    for _ in 0..trials {
        let lambda = rng.in_disc(0.95);
        acc.run(|a| {
            let r = rank_one_interior(space, lambda)?;
            a.residual(r.symbol_residual.max(r.type_residual));
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("rank_one_boundary", 1e-8);
    let mut rng = next();
    for _ in 0..trials {
        let zeta = rng.unimodular();
        acc.run(|a| {
            let r = rank_one_boundary(space, zeta)?;
            a.residual(r.symbol_residual.max(r.type_residual));
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("inverse_theorem", 0.0);
    let mut rng = next();
    for (alpha, _) in corpus.iter() {
        acc.run(|a| {
            let m = invertible(&mut rng, |r| r.typed_tto(space, *alpha))?;
            let r = inverse_type_check(space, &m)?;
            a.expect(r.inverse_is_tto);
            Ok(())
        });
    }
    for _ in 0..trials / 5 {
        acc.run(|a| {
            if space.dim() >= 3 {
                let m = invertible(&mut rng, |r| Ok(r.untyped_tto(space)?.unwrap_or_default()))?;
                a.expect(!inverse_type_check(space, &m)?.inverse_is_tto);
            }
            Ok(())
        });
    }
    checks.push(acc.finish());

    // Crofoot transform and the fraction calculus
    let mut unit = Acc::new("crofoot_unitarity", 1e-9);
    let mut inter = Acc::new("crofoot_intertwining", 1e-8);
    let mut norms = Acc::new("crofoot_norm_equality", 1e-9);
    let mut rng = next();
    for _ in 0..trials.div_ceil(5) {
        let alpha = rng.in_disc(0.9);
        let ct = match crofoot(space, alpha) {
            Ok(ct) => ct,
            Err(e) => {
                unit.error(e);
                continue;
            }
        };
        unit.residual(ct.unitarity_residual());
        unit.run(|a| {
            a.residual(crofoot_shift_residual(&ct)?);
            Ok(())
        });
        for _ in 0..5 {
            let phi = rng.poly(n.saturating_sub(1).max(1));
            match crofoot_intertwine_check(&ct, &phi) {
                Ok(r) => {
                    inter.residual(r.analytic.max(r.coanalytic));
                    norms.residual(r.norm_gap);
                }
                Err(e) => inter.error(e),
            }
        }
    }
    checks.push(unit.finish());
    checks.push(inter.finish());
    checks.push(norms.finish());

    let mut acc = Acc::new("multiplicativity", 1e-8);
    let mut rng = next();
    for _ in 0..trials {
        let alpha = rng.in_disc(0.9);
        let (phi, psi) = (rng.poly(n), rng.poly(n));
        acc.run(|a| {
            a.residual(multiplicativity_check(space, &phi, &psi, alpha)?.max_residual());
            Ok(())
        });
    }
    checks.push(acc.finish());

    let mut acc = Acc::new("invertibility_criterion", 0.0);
    let mut rng = next();
    for t in 0..trials {
        let alpha = rng.in_disc(0.9);
        acc.run(|a| {
            let zeros = u.solve_u_equals(alpha)?;
            let phi = if t % 2 == 0 {
                let root = zeros[rng.index(zeros.len())];
                Poly::new(vec![-root, ONE]).mul(&rng.poly(n.saturating_sub(2)))
            } else {
                loop {
                    let p = rng.poly(n.saturating_sub(1).max(1));
                    if zeros.iter().all(|&z| p.eval(z).norm() >= 0.05) {
                        break p;
                    }
                }
            };
            let r = invertibility_criterion(space, &phi, alpha)?;
            let expected = t % 2 == 1;
            let by_sigma = r.sigma_min > r.threshold;
            a.expect(r.invertible == expected && by_sigma == expected);
            Ok(())
        });
    }
    checks.push(acc.finish());

    // Clark unitaries
    let mut points = Acc::new("clark_points", 1e-9);
    let mut unitary = Acc::new("clark_unitary", 1e-9);
    let mut recon = Acc::new("clark_reconstruction", 1e-8);
    let mut ucls = Acc::new("unitary_classification", 1e-8);
    let mut exhaust = Acc::new("unimodular_exhaustiveness", 1e-8);
    let mut rng = next();
    for _ in 0..trials {
        let alpha = rng.unimodular();
        let cd = match clark_data(space, alpha) {
            Ok(cd) => cd,
            Err(e) => {
                points.error(e);
                continue;
            }
        };
        points.run(|a| {
            for &z in &cd.points {
                a.residual((z.norm() - 1.0).abs().max((u.evaluate(z)? - cd.alpha).norm()));
            }
            Ok(())
        });
        unitary.run(|a| {
            let sa = generalized_shift(space, cd.alpha)?;
            a.residual(fro(&(sa.adjoint() * &sa - &id)));
            Ok(())
        });
        recon.run(|a| {
            a.residual(spectral_reconstruction_residual(space, &cd)?);
            Ok(())
        });
        let values = rng.unimodular_values(n);
        ucls.run(|a| {
            let m = functional_calculus(&cd, &values)?;
            match classify_unitary(space, &m)? {
                UnitaryClass::Unitary { values: got, .. } => {
                    let gap = got
                        .iter()
                        .zip(&values)
                        .map(|(g, v)| (g - v).norm().max((g.norm() - 1.0).abs()))
                        .fold(0.0, f64::max);
                    // a scalar operator carries its value on every point
                    a.residual(gap);
                }
                UnitaryClass::NotUnitary => a.residual(f64::INFINITY),
            }
            Ok(())
        });
        exhaust.run(|a| {
            let m = rng.typed_tto(space, TypeValue::Finite(cd.alpha))?;
            let v = &cd.eigenvectors;
            let d = v.adjoint() * &m * v;
            let diag: Vec<Complex64> = (0..n).map(|j| d[(j, j)]).collect();
            let back = functional_calculus(&cd, &diag)?;
            a.residual(rel(fro(&(back - &m)), fro(&m)));
            Ok(())
        });
    }
    checks.extend([points, unitary, recon, ucls, exhaust].map(Acc::finish));

    let pass = checks.iter().all(|c| c.pass);
    VerifyReport {
        seed,
        trials,
        dimension: n,
        pass,
        checks,
    }
}

/// A type value at distance at least `0.1` from `alpha` (and `∞` only when `alpha` is finite).
fn rng_other_type(rng: &mut Sampler, alpha: &TypeValue) -> TypeValue {
    loop {
        let beta = rng.type_value(0.15);
        match (alpha, beta) {
            (TypeValue::Infinity, TypeValue::Infinity) => continue,
            (TypeValue::Finite(a), TypeValue::Finite(b)) if (a - b).norm() < 0.1 => continue,
            _ => return beta,
        }
    }
}

/// Samples from `draw` until the matrix is comfortably invertible.
fn invertible<F>(rng: &mut Sampler, mut draw: F) -> Result<CMatrix>
where
    F: FnMut(&mut Sampler) -> Result<CMatrix>,
{
    for _ in 0..1000 {
        let m = draw(rng)?;
        if m.nrows() > 0 && sigma_min(&m) > 1e-3 * fro(&m) {
            return Ok(m);
        }
    }
    Err(TtoError::failure("no invertible sample found", f64::NAN))
}

/// Rewrites `φ + α conj(SCφ) + c` as `φ₀ + α conj(SCφ₀) + c₀` with `φ₀(0) = 0`.
fn normalized(
    space: &ModelSpace,
    phi: &ModelVector,
    alpha: TypeValue,
    c: Complex64,
) -> Result<(ModelVector, Complex64)> {
    let k0 = space.k0();
    let t = space.evaluate(phi, ZERO)? / k0.norm().powi(2);
    let phi0 = ModelVector::new(project_off(phi.coords(), k0.coords()));
    let shift = match alpha {
        TypeValue::Finite(a) => t * (ONE - a * space.u0().conj()),
        TypeValue::Infinity => t,
    };
    Ok((phi0, c + shift))
}
