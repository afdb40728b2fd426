//! Truncated Toeplitz operators as matrices: construction from symbols,
//! compressed and generalized shifts, the membership test, and symbol extraction.
//!
//! Membership rests on the defect characterization: `A` is a TTO exactly when
//! `A − S A S*` has the form `φ ⊗ K₀ + K₀ ⊗ ψ`, i.e. when the defect vanishes
//! after compressing both sides to `K₀^⊥`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TtoError};
use crate::linalg::{complement_projector, fro, outer, project_off, CMatrix, ONE};
use crate::model_space::{ModelSpace, ModelVector};
use crate::symbol::SymbolExpr;

const MAX_REFINED_POINTS: usize = 1 << 17;

fn multiplier_on(basis: &CMatrix, phi: &[Complex64]) -> CMatrix {
    let mut scaled = basis.clone();
    for (j, &p) in phi.iter().enumerate() {
        for k in 0..scaled.nrows() {
            scaled[(k, j)] *= p;
        }
    }
    (basis.conjugate() * scaled.transpose()).unscale(phi.len() as f64)
}

/// The matrix of `A_Φ : f ↦ P_u(Φ f)`, entries `⟨Φ e_k, e_j⟩`.
///
/// Symbols with rational terms are integrated on successively doubled grids
/// until the matrix settles.
pub fn build_tto(space: &ModelSpace, sym: &SymbolExpr) -> Result<CMatrix> {
    sym.validate(space)?;
    if !sym.has_rational_terms() {
        let vals = sym.values_on(space, space.grid(), space.basis_grid(), space.u_on_grid())?;
        return Ok(space.multiplier_matrix(&vals));
    }
    multiplier_adaptive(space, |grid, basis, u_vals| sym.values_on(space, grid, basis, u_vals))
}

/// Compression of a multiplier given pointwise by `values(grid, basis, u)`,
/// doubling the grid from the space's own until successive matrices agree.
pub(crate) fn multiplier_adaptive<F>(space: &ModelSpace, values: F) -> Result<CMatrix>
where
    F: Fn(&[Complex64], &CMatrix, &[Complex64]) -> Result<Vec<Complex64>>,
{
    let vals = values(space.grid(), space.basis_grid(), space.u_on_grid())?;
    let mut current = space.multiplier_matrix(&vals);
    let mut q = space.quad_points();
    while q < MAX_REFINED_POINTS {
        q *= 2;
        let grid = unit_grid(q);
        let basis = space.basis_table(&grid)?;
        let u_vals = grid
            .iter()
            .map(|&z| space.u().evaluate(z))
            .collect::<Result<Vec<_>>>()?;
        let vals = values(&grid, &basis, &u_vals)?;
        let next = multiplier_on(&basis, &vals);
        let drift = fro(&(&next - &current));
        current = next;
        if drift <= 1e-13 * fro(&current).max(1.0) {
            return Ok(current);
        }
    }
    Err(TtoError::failure("symbol quadrature did not settle", f64::NAN))
}

pub(crate) fn unit_grid(q: usize) -> Vec<Complex64> {
    (0..q)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / q as f64))
        .collect()
}

/// `max |Φ|` over the quadrature grid.
pub fn symbol_sup_norm(space: &ModelSpace, sym: &SymbolExpr) -> Result<f64> {
    let vals = sym.values_on(space, space.grid(), space.basis_grid(), space.u_on_grid())?;
    Ok(vals.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// The compressed shift `S = A_z`.
pub fn compressed_shift(space: &ModelSpace) -> CMatrix {
    space.shift().clone()
}

/// `S_α = S + α/(1 − α conj(u(0))) · K₀ ⊗ K̃₀` for `|α| ≤ 1`.
pub fn generalized_shift(space: &ModelSpace, alpha: Complex64) -> Result<CMatrix> {
    if alpha.norm() > 1.0 + 1e-12 {
        return Err(TtoError::OutsideClosedDisc(alpha.norm()));
    }
    let den = ONE - alpha * space.u0().conj();
    if den.norm() < 1e-14 {
        return Err(TtoError::InvalidArgument(
            "1 - alpha conj(u(0)) vanishes".into(),
        ));
    }
    Ok(space.shift() + outer(space.k0().coords(), space.k0_tilde().coords()) * (alpha / den))
}

/// `A − S A S*`.
pub fn defect(space: &ModelSpace, a: &CMatrix) -> Result<CMatrix> {
    space.check_matrix(a)?;
    let s = space.shift();
    Ok(a - s * a * s.adjoint())
}

/// `A − S A S* ≈ φ ⊗ K₀ + K₀ ⊗ ψ`, normalized so that `ψ(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectDecomposition {
    pub phi: ModelVector,
    pub psi: ModelVector,
    /// `‖P⊥ (A − S A S*) P⊥‖_F`
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub is_tto: bool,
    pub tolerance: f64,
    pub decomposition: DefectDecomposition,
}

/// Membership test with the space's default relative tolerance.
pub fn is_tto(space: &ModelSpace, a: &CMatrix) -> Result<Membership> {
    is_tto_with(space, a, space.tolerances().tto)
}

/// Membership test at `tol · ‖A‖_F`.
pub fn is_tto_with(space: &ModelSpace, a: &CMatrix, tol: f64) -> Result<Membership> {
    let d = defect(space, a)?;
    let k0 = space.k0().coords();
    let kk = k0.norm_squared();
    let p = complement_projector(k0);
    let residual = fro(&(&p * &d * &p));
    let phi = &d * k0 / Complex64::from(kk);
    // ψ from what is left once φ ⊗ K₀ is removed; this lands ψ ⊥ K₀
    let rest = &d - outer(&phi, k0);
    let psi = rest.adjoint() * k0 / Complex64::from(kk);
    let tolerance = tol * fro(a);
    Ok(Membership {
        is_tto: residual <= tolerance,
        tolerance,
        decomposition: DefectDecomposition {
            phi: ModelVector::new(phi),
            psi: ModelVector::new(psi),
            residual,
        },
    })
}

/// A symbol `φ₁ + conj(φ₂)` for a TTO, normalized by `φ₂(0) = 0`.
pub fn extract_symbol(space: &ModelSpace, a: &CMatrix) -> Result<SymbolExpr> {
    let m = is_tto(space, a)?;
    if !m.is_tto {
        return Err(TtoError::NotATto(m.decomposition.residual));
    }
    Ok(SymbolExpr::new(m.decomposition.phi, m.decomposition.psi))
}

/// Whether two symbols give the same operator.
///
/// For symbols in `K_u + conj(K_u)` the matrix comparison is cross-checked
/// against the algebraic zero-symbol criterion (`φ₁ = cK₀`, `φ₂ = −c̄K₀`);
/// disagreement between the two routes is reported as a numerical failure.
pub fn symbols_equivalent(space: &ModelSpace, s1: &SymbolExpr, s2: &SymbolExpr) -> Result<bool> {
    let a1 = build_tto(space, s1)?;
    let a2 = build_tto(space, s2)?;
    // a symbol of size O(1) can give the zero operator, so the sup norms floor the scale
    let scale = fro(&a1)
        .max(fro(&a2))
        .max(symbol_sup_norm(space, s1)?)
        .max(symbol_sup_norm(space, s2)?);
    let diff = fro(&(&a1 - &a2));
    let by_matrix = diff <= 1e-8 * scale || (scale == 0.0 && diff == 0.0);
    if s1.has_rational_terms() || s2.has_rational_terms() {
        return Ok(by_matrix);
    }
    let (a1v, b1v) = s1.split(space)?;
    let (a2v, b2v) = s2.split(space)?;
    let d1 = a1v.sub(&a2v);
    let d2 = b1v.sub(&b2v);
    let k0 = space.k0().coords();
    let kk = k0.norm_squared();
    let c1 = k0.dotc(d1.coords()) / kk;
    let c2 = k0.dotc(d2.coords()) / kk;
    let off1 = project_off(d1.coords(), k0).norm();
    let off2 = project_off(d2.coords(), k0).norm();
    let sym_scale = d1.norm() + d2.norm() + a1v.norm() + a2v.norm() + b1v.norm() + b2v.norm();
    let tol = 1e-8 * sym_scale.max(f64::MIN_POSITIVE);
    let by_symbol = off1 <= tol && off2 <= tol && (c2 + c1.conj()).norm() * k0.norm() <= tol;
    if by_symbol != by_matrix {
        return Err(TtoError::failure(
            "zero-symbol criterion disagrees with matrix comparison",
            diff,
        ));
    }
    Ok(by_matrix)
}

/// Residuals of the four kernel/shift identities at `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelIdentityReport {
    /// `S* K_λ = λ̄ K_λ − conj(u(λ)) K̃₀`
    pub adjoint_shift_kernel: f64,
    /// `S K̃_λ = λ K̃_λ − u(λ) K₀`
    pub shift_conjugate_kernel: f64,
    /// `S K_λ = (K_λ − K₀)/λ̄`, only for `λ ≠ 0`
    pub shift_kernel: Option<f64>,
    /// `S* K̃_λ = (K̃_λ − K̃₀)/λ`, only for `λ ≠ 0`
    pub adjoint_shift_conjugate_kernel: Option<f64>,
}

impl KernelIdentityReport {
    pub fn max_residual(&self) -> f64 {
        [
            Some(self.adjoint_shift_kernel),
            Some(self.shift_conjugate_kernel),
            self.shift_kernel,
            self.adjoint_shift_conjugate_kernel,
        ]
        .into_iter()
        .flatten()
        .fold(0.0, f64::max)
    }
}

pub fn kernel_shift_identities_check(
    space: &ModelSpace,
    lambda: Complex64,
) -> Result<KernelIdentityReport> {
    let s = space.shift();
    let sa = s.adjoint();
    let k = space.kernel(lambda)?;
    let kt = space.conjugate_kernel(lambda)?;
    let k0 = space.k0().coords();
    let kt0 = space.k0_tilde().coords();
    let ul = space.u().evaluate(lambda)?;
    let (k, kt) = (k.coords(), kt.coords());

    let r1 = (&sa * k - (k * lambda.conj() - kt0 * ul.conj())).norm();
    let r2 = (s * kt - (kt * lambda - k0 * ul)).norm();
    let (r3, r4) = if lambda.norm() > 1e-12 {
        let r3 = (s * k - (k - k0) / lambda.conj()).norm();
        let r4 = (&sa * kt - (kt - kt0) / lambda).norm();
        (Some(r3), Some(r4))
    } else {
        (None, None)
    };
    Ok(KernelIdentityReport {
        adjoint_shift_kernel: r1,
        shift_conjugate_kernel: r2,
        shift_kernel: r3,
        adjoint_shift_conjugate_kernel: r4,
    })
}

/// `‖C A C − A*‖_F`, with `C A C` assembled as `M · conj(A) · conj(M)`.
pub fn c_symmetry_residual(space: &ModelSpace, a: &CMatrix) -> f64 {
    let m = space.conjugation_matrix();
    fro(&(m * a.conjugate() * m.conjugate() - a.adjoint()))
}

/// `C A C` as a matrix.
pub fn conjugate_operator(space: &ModelSpace, a: &CMatrix) -> CMatrix {
    let m = space.conjugation_matrix();
    m * a.conjugate() * m.conjugate()
}

/// The vector `conj(f)` cannot be represented in `K_u`; this returns `A_{conj f}` directly.
pub fn coanalytic_operator(space: &ModelSpace, f: &ModelVector) -> Result<CMatrix> {
    space.check_vector(f)?;
    build_tto(space, &SymbolExpr::coanalytic(f.clone()))
}
