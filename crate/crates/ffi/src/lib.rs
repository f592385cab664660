//! C ABI for `pblin`.
//!
//! Objects are opaque handles released with their `*_free` function.
//! Every fallible call returns a [`PblinStatus`]; on failure the message is
//! available from [`pblin_last_error`] on the same thread. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`pblin_string_free`]. Variable assignments are passed as masks: bit `i`
//! is `x_{i+1}`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pblin::ipmodels::{fortet_from_certificate, write_lp, write_lp_relaxation, MilpModel};
use pblin::labs::{self, LabsInstance, SpinSequence};
use pblin::lincomplexity::{lc_boolean, lc_monomial, lc_signed_products_exact, LcSearchBudget};
use pblin::pbf::{parse_poly, LinearizationCertificate, MultilinearPoly, PointAssignment};
use pblin::rational::to_f64;
use pblin::{Caps, Error, ErrorKind};

/// Result codes. Values 2 to 4 match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PblinStatus {
    Ok = 0,
    NullPointer = 1,
    BadInput = 2,
    CapExceeded = 3,
    Bridge = 4,
    Panic = 5,
}

/// Function families for [`pblin_lc`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PblinFamily {
    Monomials = 0,
    SignedProducts = 1,
    Boolean = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PblinModelStats {
    pub vars: usize,
    pub cons: usize,
    pub nonzeros: usize,
}

/// A multilinear polynomial with exact rational coefficients.
pub struct PblinPoly(MultilinearPoly);

/// A mixed-integer linear model.
pub struct PblinModel(MilpModel);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(error: Error) -> PblinStatus {
    set_error(&error.to_string());
    match error.kind() {
        ErrorKind::BadInput => PblinStatus::BadInput,
        ErrorKind::CapExceeded => PblinStatus::CapExceeded,
        ErrorKind::Bridge => PblinStatus::Bridge,
    }
}

/// Runs `body`, turning errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), PblinStatus>) -> PblinStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            PblinStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            PblinStatus::Panic
        }
    }
}

fn null(what: &str) -> PblinStatus {
    set_error(&format!("{what} is null"));
    PblinStatus::NullPointer
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, PblinStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        PblinStatus::BadInput
    })
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, PblinStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), PblinStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn pblin_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn pblin_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub unsafe extern "C" fn pblin_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the polynomial text format (`n=<arity>` header, one term per line).
#[no_mangle]
pub unsafe extern "C" fn pblin_poly_parse(text: *const c_char, out: *mut *mut PblinPoly) -> PblinStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let poly = parse_poly(text).map_err(fail)?;
        put(out, Box::into_raw(Box::new(PblinPoly(poly))), "out")
    })
}

/// The LABS objective of length `n` in `x`.
#[no_mangle]
pub unsafe extern "C" fn pblin_poly_labs(n: usize, out: *mut *mut PblinPoly) -> PblinStatus {
    guard(|| {
        let poly = labs::f_bern_poly(n, &Caps::default()).map_err(fail)?;
        put(out, Box::into_raw(Box::new(PblinPoly(poly))), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn pblin_poly_free(poly: *mut PblinPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Number of variables, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn pblin_poly_arity(poly: *const PblinPoly) -> usize {
    poly.as_ref().map_or(0, |p| p.0.arity())
}

/// Canonical text form.
#[no_mangle]
pub unsafe extern "C" fn pblin_poly_to_string(poly: *const PblinPoly, out: *mut *mut c_char) -> PblinStatus {
    guard(|| {
        let poly = handle(poly, "poly")?;
        put(out, c_string(poly.0.to_string()), "out")
    })
}

/// Value at `mask`, as an exact rational string (`out_exact`, may be null)
/// and as a double (`out_value`, may be null).
#[no_mangle]
pub unsafe extern "C" fn pblin_poly_evaluate(
    poly: *const PblinPoly,
    mask: u64,
    out_value: *mut f64,
    out_exact: *mut *mut c_char,
) -> PblinStatus {
    guard(|| {
        let poly = &handle(poly, "poly")?.0;
        if poly.arity() < 64 && mask >> poly.arity() != 0 {
            return Err(fail(Error::InvalidArgument(format!(
                "mask {mask:#x} has bits beyond arity {}",
                poly.arity()
            ))));
        }
        let value = poly.evaluate_mask(mask);
        if !out_value.is_null() {
            out_value.write(to_f64(&value));
        }
        if !out_exact.is_null() {
            out_exact.write(c_string(value.to_string()));
        }
        Ok(())
    })
}

/// Linearization complexity for `family` with default budgets. `out_exact`
/// is false when only an upper bound was established. `out_certificate`
/// may be null.
#[no_mangle]
pub unsafe extern "C" fn pblin_lc(
    poly: *const PblinPoly,
    family: PblinFamily,
    out_k: *mut usize,
    out_exact: *mut bool,
    out_certificate: *mut *mut c_char,
) -> PblinStatus {
    guard(|| {
        let poly = &handle(poly, "poly")?.0;
        if out_k.is_null() || out_exact.is_null() {
            return Err(null("out_k/out_exact"));
        }
        let caps = Caps::default();
        let (k, exact, cert) = match family {
            PblinFamily::Monomials => (
                lc_monomial(poly),
                true,
                LinearizationCertificate::monomial(poly).map_err(fail)?,
            ),
            PblinFamily::SignedProducts => {
                let s = lc_signed_products_exact(poly, &LcSearchBudget::default(), &caps).map_err(fail)?;
                (s.size(), s.optimal, s.certificate)
            }
            PblinFamily::Boolean => {
                let f = |x: &PointAssignment| poly.evaluate(x).expect("arity matches");
                let b = lc_boolean(f, poly.arity(), caps.cover_k, &caps).map_err(fail)?;
                (b.k, b.exact, b.certificate)
            }
        };
        out_k.write(k);
        out_exact.write(exact);
        if !out_certificate.is_null() {
            out_certificate.write(c_string(cert.to_string()));
        }
        Ok(())
    })
}

/// Energy of a `+`/`-` sequence.
#[no_mangle]
pub unsafe extern "C" fn pblin_labs_energy(sequence: *const c_char, out: *mut i64) -> PblinStatus {
    guard(|| {
        let s: SpinSequence = str_arg(sequence, "sequence")?.parse().map_err(fail)?;
        put(out, labs::energy(&s), "out")
    })
}

/// Exact LABS optimum; `out_witness` (may be null) receives the
/// lexicographically smallest optimal sequence starting with `+`.
#[no_mangle]
pub unsafe extern "C" fn pblin_labs_solve(
    n: usize,
    workers: usize,
    out_optimum: *mut i64,
    out_witness: *mut *mut c_char,
) -> PblinStatus {
    guard(|| {
        if out_optimum.is_null() {
            return Err(null("out_optimum"));
        }
        let r = labs::exhaustive_solve(n, workers, &Caps::default()).map_err(fail)?;
        out_optimum.write(r.optimum);
        if !out_witness.is_null() {
            out_witness.write(c_string(r.witness.to_string()));
        }
        Ok(())
    })
}

unsafe fn model_out(out: *mut *mut PblinModel, build: impl FnOnce() -> pblin::Result<MilpModel>) -> PblinStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let model = build().map_err(fail)?;
        out.write(Box::into_raw(Box::new(PblinModel(model))));
        Ok(())
    })
}

/// Fortet linearization of every monomial of the LABS objective.
#[no_mangle]
pub unsafe extern "C" fn pblin_model_labs_standard(n: usize, out: *mut *mut PblinModel) -> PblinStatus {
    model_out(out, || labs::standard_ip(n, &Caps::default()))
}

/// LABS model with correlation-value indicators tied by no-good rows.
#[no_mangle]
pub unsafe extern "C" fn pblin_model_labs_indicator_only(n: usize, out: *mut *mut PblinModel) -> PblinStatus {
    model_out(out, || labs::indicator_only_ip(n, &Caps::default()))
}

/// LABS value-indicator model; `compat` selects the counting with ordered
/// pair variables and full-range value sets.
#[no_mangle]
pub unsafe extern "C" fn pblin_model_labs_value_indicator(
    n: usize,
    compat: bool,
    out: *mut *mut PblinModel,
) -> PblinStatus {
    model_out(out, || {
        let instance = if compat {
            LabsInstance::compat(n)?
        } else {
            LabsInstance::new(n)?
        };
        labs::value_indicator_ip(&instance)
    })
}

/// Fortet model of the monomial linearization of `poly`.
#[no_mangle]
pub unsafe extern "C" fn pblin_model_fortet(poly: *const PblinPoly, out: *mut *mut PblinModel) -> PblinStatus {
    let Some(poly) = poly.as_ref() else {
        return null("poly");
    };
    model_out(out, || {
        fortet_from_certificate(&LinearizationCertificate::monomial(&poly.0)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn pblin_model_free(model: *mut PblinModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

#[no_mangle]
pub unsafe extern "C" fn pblin_model_stats(model: *const PblinModel, out: *mut PblinModelStats) -> PblinStatus {
    guard(|| {
        let s = handle(model, "model")?.0.stats();
        put(
            out,
            PblinModelStats {
                vars: s.vars,
                cons: s.cons,
                nonzeros: s.nonzeros,
            },
            "out",
        )
    })
}

/// The model in CPLEX LP format, or its LP relaxation.
#[no_mangle]
pub unsafe extern "C" fn pblin_model_write_lp(
    model: *const PblinModel,
    relaxation: bool,
    out: *mut *mut c_char,
) -> PblinStatus {
    guard(|| {
        let model = &handle(model, "model")?.0;
        let text = if relaxation {
            write_lp_relaxation(model)
        } else {
            write_lp(model)
        }
        .map_err(fail)?;
        put(out, c_string(text), "out")
    })
}
