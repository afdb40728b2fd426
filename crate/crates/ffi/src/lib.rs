//! C ABI over `ttolab`.
//!
//! A model space lives behind an opaque `TtoSpace` handle. Matrices cross the
//! boundary as row-major arrays of `TtoComplex` of length `dim * dim`, vectors
//! as arrays of length `dim`. Every fallible call returns a `TtoStatus`; on
//! failure the message is kept per thread and can be read with
//! `tto_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use ttolab::crofoot_clark::{clark_data, crofoot};
use ttolab::tto::{build_tto, generalized_shift, is_tto};
use ttolab::type_algebra::{classify_type, TypeTag, TypeValue};
use ttolab::verify::verify_suite;
use ttolab::{BlaschkeProduct, CMatrix, ModelSpace, ModelVector, SymbolExpr, TtoError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TtoComplex {
    pub re: f64,
    pub im: f64,
}

impl From<TtoComplex> for Complex64 {
    fn from(z: TtoComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for TtoComplex {
    fn from(z: Complex64) -> Self {
        TtoComplex { re: z.re, im: z.im }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TtoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutsideDisc = 3,
    NotATto = 4,
    NumericalFailure = 5,
    Panic = 6,
}

/// Result of `tto_classify`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TtoTypeKind {
    NoType = 0,
    Finite = 1,
    Infinity = 2,
    Scalar = 3,
}

/// Opaque handle to a model space.
pub struct TtoSpace {
    inner: ModelSpace,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(TtoStatus, String);

impl From<TtoError> for Failure {
    fn from(e: TtoError) -> Self {
        let status = match e {
            TtoError::OutsideClosedDisc(_) | TtoError::AlphaOnCircle(_) | TtoError::AlphaNotUnimodular(_) => {
                TtoStatus::OutsideDisc
            }
            TtoError::NotATto(_) => TtoStatus::NotATto,
            TtoError::NumericalFailure { .. } => TtoStatus::NumericalFailure,
            _ => TtoStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TtoStatus::NullPointer, format!("{what} is null"))
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> TtoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TtoStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            TtoStatus::Panic
        }
    }
}

unsafe fn space_ref<'a>(space: *const TtoSpace) -> Result<&'a ModelSpace, Failure> {
    space.as_ref().map(|s| &s.inner).ok_or_else(|| null("space"))
}

unsafe fn read_slice<'a>(p: *const TtoComplex, len: usize, what: &str) -> Result<&'a [TtoComplex], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn read_matrix(p: *const TtoComplex, n: usize) -> Result<CMatrix, Failure> {
    let s = read_slice(p, n * n, "matrix")?;
    Ok(CMatrix::from_fn(n, n, |i, j| s[i * n + j].into()))
}

unsafe fn read_vector(p: *const TtoComplex, n: usize, what: &str) -> Result<ModelVector, Failure> {
    let s = read_slice(p, n, what)?;
    Ok(ModelVector::from_slice(&s.iter().map(|&z| z.into()).collect::<Vec<_>>()))
}

unsafe fn write_matrix(m: &CMatrix, out: *mut TtoComplex) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    let n = m.nrows();
    let dst = std::slice::from_raw_parts_mut(out, n * n);
    for i in 0..n {
        for j in 0..n {
            dst[i * n + j] = m[(i, j)].into();
        }
    }
    Ok(())
}

unsafe fn write_out<T>(p: *mut T, v: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    *p = v;
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length, 0 if there is none.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn tto_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Creates the model space of the Blaschke product with the given zeros
/// (repeated for multiplicity) and unimodular `rotation`.
///
/// # Safety
/// `zeros` must point to `n_zeros` values; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tto_space_new(
    zeros: *const TtoComplex,
    n_zeros: usize,
    rotation: TtoComplex,
    out: *mut *mut TtoSpace,
) -> TtoStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let z = read_slice(zeros, n_zeros, "zeros")?.iter().map(|&z| z.into()).collect();
        let u = BlaschkeProduct::new(z, rotation.into())?;
        let space = ModelSpace::new(u)?;
        *out = Box::into_raw(Box::new(TtoSpace { inner: space }));
        Ok(())
    })
}

/// # Safety
/// `space` must be null or a handle from `tto_space_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tto_space_free(space: *mut TtoSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Dimension of the space, 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tto_space_dim(space: *const TtoSpace) -> usize {
    space.as_ref().map_or(0, |s| s.inner.dim())
}

/// # Safety
/// `space` must be a live handle; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tto_blaschke_eval(space: *const TtoSpace, z: TtoComplex, out: *mut TtoComplex) -> TtoStatus {
    guard(|| {
        let v = space_ref(space)?.u().evaluate(z.into())?;
        write_out(out, v.into(), "out")
    })
}

/// Writes `S_α` (the compressed shift when `alpha` is 0).
///
/// # Safety
/// `space` must be a live handle; `out` must hold `dim * dim` values.
#[no_mangle]
pub unsafe extern "C" fn tto_generalized_shift(
    space: *const TtoSpace,
    alpha: TtoComplex,
    out: *mut TtoComplex,
) -> TtoStatus {
    guard(|| {
        let s = generalized_shift(space_ref(space)?, alpha.into())?;
        write_matrix(&s, out)
    })
}

/// Builds `A_{φ + conj ψ + c}` from coordinate vectors `phi`, `psi` (either
/// may be null for zero) and the constant `c`.
///
/// # Safety
/// `space` must be a live handle; `phi`, `psi` null or of length `dim`; `out`
/// must hold `dim * dim` values.
#[no_mangle]
pub unsafe extern "C" fn tto_build(
    space: *const TtoSpace,
    phi: *const TtoComplex,
    psi: *const TtoComplex,
    c: TtoComplex,
    out: *mut TtoComplex,
) -> TtoStatus {
    guard(|| {
        let sp = space_ref(space)?;
        let n = sp.dim();
        let vec_or_zero = |p: *const TtoComplex, what| {
            if p.is_null() {
                Ok(ModelVector::zeros(n))
            } else {
                read_vector(p, n, what)
            }
        };
        let sym = SymbolExpr::new(vec_or_zero(phi, "phi")?, vec_or_zero(psi, "psi")?).with_constant(c.into());
        write_matrix(&build_tto(sp, &sym)?, out)
    })
}

/// Membership test; `residual` may be null.
///
/// # Safety
/// `space` must be a live handle; `matrix` must hold `dim * dim` values.
#[no_mangle]
pub unsafe extern "C" fn tto_is_tto(
    space: *const TtoSpace,
    matrix: *const TtoComplex,
    is_member: *mut bool,
    residual: *mut f64,
) -> TtoStatus {
    guard(|| {
        let sp = space_ref(space)?;
        let m = is_tto(sp, &read_matrix(matrix, sp.dim())?)?;
        if !residual.is_null() {
            *residual = m.decomposition.residual;
        }
        write_out(is_member, m.is_tto, "is_member")
    })
}

/// Type of a truncated Toeplitz operator. `value` is written only for
/// `TtoTypeKind::Finite` and may be null.
///
/// # Safety
/// `space` must be a live handle; `matrix` must hold `dim * dim` values.
#[no_mangle]
pub unsafe extern "C" fn tto_classify(
    space: *const TtoSpace,
    matrix: *const TtoComplex,
    kind: *mut TtoTypeKind,
    value: *mut TtoComplex,
) -> TtoStatus {
    guard(|| {
        let sp = space_ref(space)?;
        let tag = classify_type(sp, &read_matrix(matrix, sp.dim())?)?;
        let k = match tag {
            TypeTag::NoType => TtoTypeKind::NoType,
            TypeTag::Scalar => TtoTypeKind::Scalar,
            TypeTag::Type(TypeValue::Infinity) => TtoTypeKind::Infinity,
            TypeTag::Type(TypeValue::Finite(a)) => {
                if !value.is_null() {
                    *value = a.into();
                }
                TtoTypeKind::Finite
            }
        };
        write_out(kind, k, "kind")
    })
}

/// Clark points (solutions of `u = α`, sorted by argument) and weights for a
/// unimodular `alpha`. Both buffers must hold `dim` values.
///
/// # Safety
/// `space` must be a live handle; `points` and `weights` must hold `dim` values.
#[no_mangle]
pub unsafe extern "C" fn tto_clark(
    space: *const TtoSpace,
    alpha: TtoComplex,
    points: *mut TtoComplex,
    weights: *mut f64,
) -> TtoStatus {
    guard(|| {
        let cd = clark_data(space_ref(space)?, alpha.into())?;
        if points.is_null() || weights.is_null() {
            return Err(null("output buffer"));
        }
        for (k, (&p, &w)) in cd.points.iter().zip(&cd.weights).enumerate() {
            *points.add(k) = p.into();
            *weights.add(k) = w;
        }
        Ok(())
    })
}

/// Matrix of the Crofoot transform onto `K_u` for `alpha` in the open disc.
///
/// # Safety
/// `space` must be a live handle; `out` must hold `dim * dim` values.
#[no_mangle]
pub unsafe extern "C" fn tto_crofoot_matrix(
    space: *const TtoSpace,
    alpha: TtoComplex,
    out: *mut TtoComplex,
) -> TtoStatus {
    guard(|| {
        let ct = crofoot(space_ref(space)?, alpha.into())?;
        write_matrix(ct.matrix(), out)
    })
}

/// Runs the self-verification suite. `passed` receives the overall verdict;
/// on a failing check its key is available through `tto_last_error_message`.
///
/// # Safety
/// `space` must be a live handle; `passed` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tto_verify_all(
    space: *const TtoSpace,
    seed: u64,
    trials: usize,
    passed: *mut bool,
) -> TtoStatus {
    guard(|| {
        let report = verify_suite(space_ref(space)?, seed, trials);
        if let Some(f) = report.first_failure() {
            set_error(format!("check `{}` failed with residual {:e}", f.key, f.max_residual));
        }
        write_out(passed, report.pass, "passed")
    })
}
