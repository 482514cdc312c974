//! C ABI over `sumpoly`.
//!
//! Objects cross the boundary as opaque handles that the caller releases
//! with the matching `*_free` function. Every fallible call returns a
//! [`SumpolyStatus`]; the message of the most recent failure on the
//! calling thread is available from [`sumpoly_last_error`]. Strings
//! returned through `char **` out-parameters are owned by the caller and
//! released with [`sumpoly_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sumpoly::descent::{BasisKind, DescentSystem};
use sumpoly::experiment::{build_instance, crossover, run_experiment, BoundKind, BoundParams, ExperimentOptions};
use sumpoly::fieldalg::FieldSpec;
use sumpoly::firstfall::first_fall_of;
use sumpoly::groebner::{dff_empirical, dreg_empirical, groebner_log_system, Budget};
use sumpoly::semaev::{semaev_poly, SummationPoly};
use sumpoly::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumpolyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Field = 4,
    TooLarge = 5,
    BudgetExhausted = 6,
    Utf8 = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumpolyBasisKind {
    Canonical = 0,
    Random = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumpolyBoundKind {
    Old = 0,
    New = 1,
}

/// A summation polynomial `S_{m+1}`.
pub struct SumpolySemaev(SummationPoly);

/// A descended Boolean system.
pub struct SumpolyDescent(DescentSystem);

/// A `d_ff` of `0` means no fall up to the degree limit.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SumpolyFirstFall {
    pub d: u32,
    pub dim_drop: bool,
    pub d_ff: u32,
}

/// Degrees of `0` mean the log holds no such step.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SumpolyGroebner {
    pub d_ff: u32,
    pub d_reg: u32,
    pub budget_exhausted: bool,
    pub basis_len: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SumpolyStatus {
    match e {
        Error::Parse(_) => SumpolyStatus::Parse,
        Error::InvalidField(_)
        | Error::FieldMismatch(..)
        | Error::ElementOutOfRange { .. }
        | Error::ZeroInverse
        | Error::NoArtinSchreierSolution => SumpolyStatus::Field,
        Error::MatrixTooLarge(_) | Error::TooManyVariables(_) | Error::ExponentOverflow => SumpolyStatus::TooLarge,
        _ => SumpolyStatus::InvalidArgument,
    }
}

enum Fail {
    Core(Error),
    Status(SumpolyStatus, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SumpolyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SumpolyStatus::Ok,
        Ok(Err(Fail::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            SumpolyStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail::Status(SumpolyStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|e| Fail::Status(SumpolyStatus::Utf8, e.to_string()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|e| Fail::Status(SumpolyStatus::Utf8, e.to_string()))?;
    put(out, c.into_raw())
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, Fail> {
    h.as_ref().ok_or_else(null)
}

fn spec(n: u32, red: u64) -> Result<FieldSpec, Fail> {
    Ok(if red == 0 { FieldSpec::default_for(n)? } else { FieldSpec::new(n, red as u128)? })
}

/// Message of the last failed call on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn sumpoly_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build `S_{m+1}` over GF(2^n) for the curve constant `a6`. A zero
/// `red` selects the default reduction polynomial.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_semaev_new(
    m: usize,
    n: u32,
    red: u64,
    a6: u64,
    out: *mut *mut SumpolySemaev,
) -> SumpolyStatus {
    guard(|| {
        let spec = spec(n, red)?;
        let s = semaev_poly(m + 1, spec.element(a6)?)?;
        put(out, Box::into_raw(Box::new(SumpolySemaev(s))))
    })
}

/// # Safety
/// `h` must be null or a handle from `sumpoly_semaev_new`.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_semaev_free(h: *mut SumpolySemaev) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of terms.
///
/// # Safety
/// `h` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_semaev_len(h: *const SumpolySemaev, out: *mut usize) -> SumpolyStatus {
    guard(|| put(out, handle(h)?.0.poly().len()))
}

/// Evaluate at `count` field elements given as masks.
///
/// # Safety
/// `h` and `out` must be valid; `xs` must point to `count` values.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_semaev_eval(
    h: *const SumpolySemaev,
    xs: *const u64,
    count: usize,
    out: *mut u64,
) -> SumpolyStatus {
    guard(|| {
        let s = &handle(h)?.0;
        if xs.is_null() {
            return Err(null());
        }
        let vals = std::slice::from_raw_parts(xs, count)
            .iter()
            .map(|&v| s.spec().element(v))
            .collect::<Result<Vec<_>, _>>()?;
        put(out, s.eval(&vals)?.value())
    })
}

/// Polynomial text form.
///
/// # Safety
/// `h` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_semaev_to_text(h: *const SumpolySemaev, out: *mut *mut c_char) -> SumpolyStatus {
    guard(|| put_string(out, handle(h)?.0.poly().to_string()))
}

/// Draw a seeded instance and descend it. A zero `c` selects the
/// x-coordinate of a random point.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_descent_new(
    m: usize,
    n: u32,
    np: usize,
    seed: u64,
    basis: SumpolyBasisKind,
    c: u64,
    out: *mut *mut SumpolyDescent,
) -> SumpolyStatus {
    guard(|| {
        let opts = ExperimentOptions {
            basis: match basis {
                SumpolyBasisKind::Canonical => BasisKind::Canonical,
                SumpolyBasisKind::Random => BasisKind::Random,
            },
            c: (c != 0).then_some(c),
            ..Default::default()
        };
        let sys = build_instance(m, n, np, seed, &opts)?;
        put(out, Box::into_raw(Box::new(SumpolyDescent(sys))))
    })
}

/// Parse the descent text format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_descent_parse(text: *const c_char, out: *mut *mut SumpolyDescent) -> SumpolyStatus {
    guard(|| {
        let sys = DescentSystem::parse(self::text(text)?)?;
        put(out, Box::into_raw(Box::new(SumpolyDescent(sys))))
    })
}

/// # Safety
/// `h` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_descent_free(h: *mut SumpolyDescent) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_descent_to_text(h: *const SumpolyDescent, out: *mut *mut c_char) -> SumpolyStatus {
    guard(|| put_string(out, handle(h)?.0.to_text()))
}

/// Number of Boolean variables and polynomials.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_descent_shape(
    h: *const SumpolyDescent,
    num_vars: *mut usize,
    num_polys: *mut usize,
) -> SumpolyStatus {
    guard(|| {
        let sys = &handle(h)?.0;
        put(num_vars, sys.num_vars())?;
        put(num_polys, sys.polys.len())
    })
}

/// Macaulay-rank first fall degree. A zero `j_max` selects `2d`.
///
/// # Safety
/// `h` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_first_fall(
    h: *const SumpolyDescent,
    j_max: u32,
    out: *mut SumpolyFirstFall,
) -> SumpolyStatus {
    guard(|| {
        let r = first_fall_of(&handle(h)?.0, (j_max != 0).then_some(j_max))?;
        put(out, SumpolyFirstFall { d: r.d, dim_drop: r.dim_drop, d_ff: r.d_ff.unwrap_or(0) })
    })
}

/// Run the Gröbner engine. Exhausting the budget fills `out` and returns
/// `BudgetExhausted`. `log_json` may be null; otherwise it receives the
/// step log as JSON.
///
/// # Safety
/// `h` and `out` must be valid; `log_json` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_groebner(
    h: *const SumpolyDescent,
    mem_mib: usize,
    seconds: u64,
    out: *mut SumpolyGroebner,
    log_json: *mut *mut c_char,
) -> SumpolyStatus {
    guard(|| {
        let r = groebner_log_system(&handle(h)?.0, None, Budget::new(mem_mib, seconds))?;
        let res = if r.log.steps.is_empty() {
            SumpolyGroebner { budget_exhausted: r.budget_exhausted, basis_len: r.basis.len(), ..Default::default() }
        } else {
            SumpolyGroebner {
                d_ff: dff_empirical(&r.log)?.unwrap_or(0),
                d_reg: dreg_empirical(&r.log)?,
                budget_exhausted: r.budget_exhausted,
                basis_len: r.basis.len(),
            }
        };
        put(out, res)?;
        if !log_json.is_null() {
            let s = serde_json::to_string(&r.log).map_err(|e| Fail::Status(SumpolyStatus::Parse, e.to_string()))?;
            put_string(log_json, s)?;
        }
        if r.budget_exhausted {
            return Err(Fail::Status(SumpolyStatus::BudgetExhausted, "budget exhausted".into()));
        }
        Ok(())
    })
}

/// Full pipeline for one seed, as a JSON record.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_experiment_json(
    m: usize,
    n: u32,
    np: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> SumpolyStatus {
    guard(|| {
        let rec = run_experiment(m, n, np, seed, &ExperimentOptions::default())?;
        let s = serde_json::to_string(&rec).map_err(|e| Fail::Status(SumpolyStatus::Parse, e.to_string()))?;
        put_string(out, s)
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sumpoly_crossover(omega: f64, kind: SumpolyBoundKind, out: *mut u64) -> SumpolyStatus {
    guard(|| {
        let kind = match kind {
            SumpolyBoundKind::Old => BoundKind::Old,
            SumpolyBoundKind::New => BoundKind::New,
        };
        put(out, crossover(BoundParams::new(omega, kind)?))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::Parse("x".into())), SumpolyStatus::Parse);
        assert_eq!(status_of(&Error::ZeroInverse), SumpolyStatus::Field);
        assert_eq!(status_of(&Error::TooManyVariables(70)), SumpolyStatus::TooLarge);
        assert_eq!(status_of(&Error::ZeroConstant), SumpolyStatus::InvalidArgument);
    }

    #[test]
    fn panics_are_contained() {
        assert_eq!(guard(|| panic!("boom")), SumpolyStatus::Panic);
        let msg = unsafe { CStr::from_ptr(sumpoly_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "internal panic");
    }

    #[test]
    fn null_out_pointer() {
        assert_eq!(
            unsafe { sumpoly_crossover(2.5, SumpolyBoundKind::New, std::ptr::null_mut()) },
            SumpolyStatus::NullPointer
        );
    }
}
