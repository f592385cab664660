use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use pblin_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    pblin_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(pblin_last_error()).to_str().unwrap().to_owned()
}

#[test]
fn poly_round_trip_and_evaluate() {
    unsafe {
        let text = CString::new("n=3\nx1*x2\nx1*x3\nx2*x3\n-1 * x1*x2*x3\n").unwrap();
        let mut poly = ptr::null_mut();
        assert_eq!(pblin_poly_parse(text.as_ptr(), &mut poly), PblinStatus::Ok);
        assert_eq!(pblin_poly_arity(poly), 3);

        let mut value = 0.0;
        let mut exact = ptr::null_mut();
        assert_eq!(
            pblin_poly_evaluate(poly, 0b111, &mut value, &mut exact),
            PblinStatus::Ok
        );
        assert_eq!((value, take(exact)), (2.0, "2".to_string()));
        assert_eq!(
            pblin_poly_evaluate(poly, 0b1000, &mut value, ptr::null_mut()),
            PblinStatus::BadInput
        );

        let mut s = ptr::null_mut();
        assert_eq!(pblin_poly_to_string(poly, &mut s), PblinStatus::Ok);
        assert!(take(s).starts_with("n=3\n"));

        let (mut k, mut exact_flag) = (0usize, false);
        let mut cert = ptr::null_mut();
        assert_eq!(
            pblin_lc(poly, PblinFamily::SignedProducts, &mut k, &mut exact_flag, &mut cert),
            PblinStatus::Ok
        );
        assert_eq!((k, exact_flag), (1, true));
        assert!(take(cert).contains("J={1,2,3}"));
        assert_eq!(
            pblin_lc(poly, PblinFamily::Monomials, &mut k, &mut exact_flag, ptr::null_mut()),
            PblinStatus::Ok
        );
        assert_eq!(k, 4);
        assert_eq!(
            pblin_lc(poly, PblinFamily::Boolean, &mut k, &mut exact_flag, ptr::null_mut()),
            PblinStatus::Ok
        );
        assert_eq!(k, 1);

        let mut model = ptr::null_mut();
        assert_eq!(pblin_model_fortet(poly, &mut model), PblinStatus::Ok);
        let mut stats = PblinModelStats::default();
        assert_eq!(pblin_model_stats(model, &mut stats), PblinStatus::Ok);
        assert_eq!((stats.vars, stats.cons), (7, 13));
        pblin_model_free(model);
        pblin_poly_free(poly);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let bad = CString::new("n=2\nx3\n").unwrap();
        let mut poly = ptr::null_mut();
        assert_eq!(pblin_poly_parse(bad.as_ptr(), &mut poly), PblinStatus::BadInput);
        assert!(poly.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(pblin_poly_parse(ptr::null(), &mut poly), PblinStatus::NullPointer);
        assert_eq!(pblin_poly_labs(21, &mut poly), PblinStatus::CapExceeded);
        let mut model = ptr::null_mut();
        assert_eq!(pblin_model_labs_indicator_only(9, &mut model), PblinStatus::CapExceeded);
        assert_eq!(
            pblin_model_stats(ptr::null(), ptr::null_mut()),
            PblinStatus::NullPointer
        );
        pblin_poly_free(ptr::null_mut());
        pblin_model_free(ptr::null_mut());
        pblin_string_free(ptr::null_mut());
    }
}

#[test]
fn labs_calls() {
    unsafe {
        let seq = CString::new("+++-").unwrap();
        let mut e = 0;
        assert_eq!(pblin_labs_energy(seq.as_ptr(), &mut e), PblinStatus::Ok);
        assert_eq!(e, 2);
        assert!(last_error().is_empty());

        let mut opt = 0;
        let mut witness = ptr::null_mut();
        assert_eq!(pblin_labs_solve(13, 2, &mut opt, &mut witness), PblinStatus::Ok);
        assert_eq!(opt, 6);
        let w = CString::new(take(witness)).unwrap();
        assert_eq!(pblin_labs_energy(w.as_ptr(), &mut e), PblinStatus::Ok);
        assert_eq!(e, 6);

        let mut model = ptr::null_mut();
        assert_eq!(pblin_model_labs_value_indicator(10, true, &mut model), PblinStatus::Ok);
        let mut stats = PblinModelStats::default();
        pblin_model_stats(model, &mut stats);
        assert_eq!((stats.vars, stats.cons), (199, 198));
        let mut lp = ptr::null_mut();
        assert_eq!(pblin_model_write_lp(model, false, &mut lp), PblinStatus::Ok);
        let lp = take(lp);
        assert!(lp.starts_with("\\ model: labs_value_indicator_10\n"));
        assert!(lp.ends_with("End\n"));
        pblin_model_free(model);

        assert_eq!(pblin_model_labs_standard(4, &mut model), PblinStatus::Ok);
        pblin_model_stats(model, &mut stats);
        assert_eq!((stats.vars, stats.cons), (15, 39));
        pblin_model_free(model);

        let mut poly = ptr::null_mut();
        assert_eq!(pblin_poly_labs(3, &mut poly), PblinStatus::Ok);
        let mut value = 0.0;
        assert_eq!(
            pblin_poly_evaluate(poly, 0b011, &mut value, ptr::null_mut()),
            PblinStatus::Ok
        );
        assert_eq!(value, 1.0);
        pblin_poly_free(poly);
        assert_eq!(
            CStr::from_ptr(pblin_version()).to_str().unwrap(),
            env!("CARGO_PKG_VERSION")
        );
    }
}

/// The generated header parses as C and C++ when a compiler is available.
#[test]
fn header_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/pblin.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for symbol in [
        "pblin_poly_parse",
        "pblin_lc",
        "pblin_model_write_lp",
        "PBLIN_STATUS_CAP_EXCEEDED",
        "PblinModelStats",
    ] {
        assert!(text.contains(symbol), "{symbol} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{}\"\nint main(void) {{ PblinPoly *p = 0; PblinStatus s = pblin_poly_parse(\"n=1\", &p); pblin_poly_free(p); return s == PBLIN_STATUS_OK ? 0 : 1; }}\n",
            header.display()
        ),
    )
    .unwrap();
    for (compiler, args) in [
        ("cc", vec!["-std=c99", "-Wall", "-Werror"]),
        ("c++", vec!["-x", "c++", "-Wall", "-Werror"]),
    ] {
        let Ok(out) = Command::new(compiler)
            .args(&args)
            .arg("-fsyntax-only")
            .arg(&src)
            .output()
        else {
            eprintln!("{compiler} not found; skipping");
            continue;
        };
        assert!(
            out.status.success(),
            "{compiler}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}
