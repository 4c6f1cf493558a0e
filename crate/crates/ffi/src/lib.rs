//! C ABI over `cahiers`.
//!
//! Every fallible function returns a [`CahiersStatus`] and writes its result
//! through an out pointer. On failure the message is kept per thread and can
//! be read with [`cahiers_last_error`]. Handles are opaque and owned by the
//! caller, who releases them with the matching `_free` function. Strings
//! returned by the library are released with [`cahiers_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use cahiers::expr::{parse, Binding, Expr};
use cahiers::jet::{JetContext, JetError};
use cahiers::variational::{euler_lagrange, Lagrangian, VariationalError};
use cahiers::weil::{taylor_extend, WeilAlgebra, WeilElement};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CahiersStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Eval = 4,
    Algebra = 5,
    Jet = 6,
    OutOfRange = 7,
    Panic = 8,
}

pub struct CahiersExpr(Expr);

pub struct CahiersWeilAlgebra(Arc<WeilAlgebra>);

pub struct CahiersWeilElement(WeilElement);

struct Failure(CahiersStatus, String);

impl Failure {
    fn new(status: CahiersStatus, e: impl ToString) -> Failure {
        Failure(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CahiersStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CahiersStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CahiersStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(CahiersStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure::new(CahiersStatus::InvalidUtf8, e))
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(CahiersStatus::NullPointer, "null handle"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(CahiersStatus::NullPointer, "null out pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure::new(CahiersStatus::InvalidUtf8, e))?;
    write(out, c.into_raw())
}

unsafe fn names_arg<'a>(names: *const *const c_char, n: usize) -> Result<Vec<&'a str>, Failure> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if names.is_null() {
        return Err(Failure::new(CahiersStatus::NullPointer, "null name array"));
    }
    std::slice::from_raw_parts(names, n).iter().map(|&p| str_arg(p)).collect()
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn cahiers_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn cahiers_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cahiers_expr_parse(text: *const c_char, out: *mut *mut CahiersExpr) -> CahiersStatus {
    guard(|| {
        let e = parse(str_arg(text)?).map_err(|e| Failure::new(CahiersStatus::Parse, e))?;
        write(out, Box::into_raw(Box::new(CahiersExpr(e))))
    })
}

/// # Safety
/// `e` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cahiers_expr_free(e: *mut CahiersExpr) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// # Safety
/// `e` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cahiers_expr_to_string(e: *const CahiersExpr, out: *mut *mut c_char) -> CahiersStatus {
    guard(|| write_string(out, ref_arg(e)?.0.to_string()))
}

/// # Safety
/// `e` must be a live handle, `var` a NUL-terminated string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn cahiers_expr_differentiate(
    e: *const CahiersExpr,
    var: *const c_char,
    out: *mut *mut CahiersExpr,
) -> CahiersStatus {
    guard(|| {
        let d = ref_arg(e)?.0.differentiate(str_arg(var)?);
        write(out, Box::into_raw(Box::new(CahiersExpr(d))))
    })
}

/// Evaluates with `names[i] = values[i]`.
///
/// # Safety
/// `names` and `values` must each point to `n` elements (or be null when `n`
/// is 0).
#[no_mangle]
pub unsafe extern "C" fn cahiers_expr_eval(
    e: *const CahiersExpr,
    names: *const *const c_char,
    values: *const f64,
    n: usize,
    out: *mut f64,
) -> CahiersStatus {
    guard(|| {
        let e = ref_arg(e)?;
        let names = names_arg(names, n)?;
        if n > 0 && values.is_null() {
            return Err(Failure::new(CahiersStatus::NullPointer, "null value array"));
        }
        let values = if n == 0 { &[][..] } else { std::slice::from_raw_parts(values, n) };
        let binding: Binding = names.iter().map(|s| s.to_string()).zip(values.iter().copied()).collect();
        let v = e.0.eval(&binding).map_err(|e| Failure::new(CahiersStatus::Eval, e))?;
        write(out, v)
    })
}

/// Value and first derivative of a function of one variable at `x`, by
/// evaluation over the dual numbers.
///
/// # Safety
/// `e` must be a live handle, `var` a NUL-terminated string and the out
/// pointers valid.
#[no_mangle]
pub unsafe extern "C" fn cahiers_derivative(
    e: *const CahiersExpr,
    var: *const c_char,
    x: f64,
    value: *mut f64,
    derivative: *mut f64,
) -> CahiersStatus {
    guard(|| {
        let e = ref_arg(e)?;
        let var = str_arg(var)?;
        let d = WeilAlgebra::dual_numbers();
        let eps = WeilElement::generator(&d, 0).map_err(|e| Failure::new(CahiersStatus::Algebra, e))?;
        let arg = WeilElement::from_f64(&d, x).add(&eps).map_err(|e| Failure::new(CahiersStatus::Algebra, e))?;
        let y = taylor_extend(&e.0, &[var], &[arg]).map_err(|e| Failure::new(CahiersStatus::Eval, e))?;
        let coeff = |i| y.coeff_f64(i).ok_or_else(|| Failure::new(CahiersStatus::Eval, "non-numeric result"));
        write(value, coeff(0)?)?;
        write(derivative, coeff(1)?)
    })
}

/// The Weil algebra `D(m, l)` of polynomials in `m` generators truncated
/// above degree `l`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cahiers_weil_disk(m: usize, l: u32, out: *mut *mut CahiersWeilAlgebra) -> CahiersStatus {
    guard(|| {
        let a = WeilAlgebra::disk(m, l).map_err(|e| Failure::new(CahiersStatus::Algebra, e))?;
        write(out, Box::into_raw(Box::new(CahiersWeilAlgebra(a))))
    })
}

/// # Safety
/// `a` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cahiers_weil_algebra_free(a: *mut CahiersWeilAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Dimension over the reals, or 0 for a null handle.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cahiers_weil_algebra_dim(a: *const CahiersWeilAlgebra) -> usize {
    a.as_ref().map_or(0, |a| a.0.dim())
}

/// Parses an element such as `1/2 + 3*e1 - e1*e2`.
///
/// # Safety
/// `a` must be a live handle, `text` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cahiers_weil_element_parse(
    a: *const CahiersWeilAlgebra,
    text: *const c_char,
    out: *mut *mut CahiersWeilElement,
) -> CahiersStatus {
    guard(|| {
        let a = ref_arg(a)?;
        let el = WeilElement::parse(&a.0, str_arg(text)?).map_err(|e| Failure::new(CahiersStatus::Parse, e))?;
        write(out, Box::into_raw(Box::new(CahiersWeilElement(el))))
    })
}

/// # Safety
/// `el` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cahiers_weil_element_free(el: *mut CahiersWeilElement) {
    if !el.is_null() {
        drop(Box::from_raw(el));
    }
}

/// # Safety
/// `el` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cahiers_weil_element_to_string(
    el: *const CahiersWeilElement,
    out: *mut *mut c_char,
) -> CahiersStatus {
    guard(|| write_string(out, ref_arg(el)?.0.to_string()))
}

/// Coefficient of the `i`-th basis monomial as a double.
///
/// # Safety
/// `el` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cahiers_weil_element_coeff(
    el: *const CahiersWeilElement,
    i: usize,
    out: *mut f64,
) -> CahiersStatus {
    guard(|| {
        let el = &ref_arg(el)?.0;
        if i >= el.algebra().dim() {
            return Err(Failure::new(CahiersStatus::OutOfRange, format!("index {i} out of range")));
        }
        let c = el.coeff_f64(i).ok_or_else(|| Failure::new(CahiersStatus::Eval, "coefficient is not numeric"))?;
        write(out, c)
    })
}

/// Applies `f(names[0], ..., names[n-1])` to `args`, all in one algebra.
///
/// # Safety
/// `names` and `args` must each point to `n` valid elements.
#[no_mangle]
pub unsafe extern "C" fn cahiers_weil_extend(
    f: *const CahiersExpr,
    names: *const *const c_char,
    args: *const *const CahiersWeilElement,
    n: usize,
    out: *mut *mut CahiersWeilElement,
) -> CahiersStatus {
    guard(|| {
        let f = ref_arg(f)?;
        let names = names_arg(names, n)?;
        if n == 0 || args.is_null() {
            return Err(Failure::new(CahiersStatus::NullPointer, "no arguments"));
        }
        let args = std::slice::from_raw_parts(args, n)
            .iter()
            .map(|&p| ref_arg(p).map(|a| a.0.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let y = taylor_extend(&f.0, &names, &args).map_err(|e| Failure::new(CahiersStatus::Algebra, e))?;
        write(out, Box::into_raw(Box::new(CahiersWeilElement(y))))
    })
}

/// Euler-Lagrange equations of a Lagrangian density, one `EL_<field> = ...`
/// line per field. `coords` and `fields` are comma separated.
///
/// # Safety
/// The string arguments must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cahiers_el_derive(
    coords: *const c_char,
    fields: *const c_char,
    lagrangian: *const c_char,
    out: *mut *mut c_char,
) -> CahiersStatus {
    guard(|| {
        let list = |s: &str| s.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect::<Vec<_>>();
        let ctx = JetContext::new(list(str_arg(coords)?), list(str_arg(fields)?))
            .map_err(|e| Failure::new(CahiersStatus::Jet, e))?;
        let l = Lagrangian::parse(&ctx, str_arg(lagrangian)?).map_err(|e| match e {
            VariationalError::Jet(JetError::Parse(_)) => Failure::new(CahiersStatus::Parse, e),
            _ => Failure::new(CahiersStatus::Jet, e),
        })?;
        write_string(out, euler_lagrange(&l).to_string())
    })
}
