use std::ffi::{CStr, CString};
use std::ptr;

use delaycas_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    ddea_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = ddea_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn demo_corpus_classify() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(ddea_corpus_demo(&mut c), DdeaStatus::Ok);
        assert!(ddea_corpus_len(c) >= 3);
        let cmd = CString::new("classify").unwrap();
        let mut out = ptr::null_mut();
        let mut pass = false;
        assert_eq!(ddea_run_json(c, cmd.as_ptr(), 1, 0, &mut out, &mut pass), DdeaStatus::Ok);
        assert!(pass);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["command"], "classify");
        ddea_corpus_free(c);
    }
}

#[test]
fn schema_error_sets_message() {
    unsafe {
        let bad = CString::new(r#"{"schema_version": 9, "entries": []}"#).unwrap();
        let mut c = ptr::null_mut();
        assert_eq!(ddea_corpus_parse(bad.as_ptr(), &mut c), DdeaStatus::Schema);
        assert!(c.is_null());
        assert!(last_error().contains("schema"));
        assert_eq!(ddea_corpus_parse(ptr::null(), &mut c), DdeaStatus::NullPointer);
    }
}

#[test]
fn unknown_command_and_index() {
    unsafe {
        let mut c = ptr::null_mut();
        assert_eq!(ddea_corpus_demo(&mut c), DdeaStatus::Ok);
        let cmd = CString::new("frobnicate").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(
            ddea_run_json(c, cmd.as_ptr(), 1, 0, &mut out, ptr::null_mut()),
            DdeaStatus::OutOfRange
        );
        let mut eq = ptr::null_mut();
        assert_eq!(ddea_equation_from_corpus(c, 10_000, &mut eq), DdeaStatus::OutOfRange);
        assert_eq!(ddea_equation_from_corpus(c, 0, &mut eq), DdeaStatus::Ok);
        ddea_equation_free(eq);
        ddea_corpus_free(c);
    }
}

#[test]
fn inverse_square_equation() {
    unsafe {
        let (a, b, c0) = (CString::new("1").unwrap(), CString::new("0").unwrap(), CString::new("0").unwrap());
        let mut eq = ptr::null_mut();
        assert_eq!(
            ddea_equation_inverse_square(a.as_ptr(), b.as_ptr(), c0.as_ptr(), &mut eq),
            DdeaStatus::Ok
        );
        let mut out = ptr::null_mut();
        assert_eq!(ddea_equation_classify_json(eq, &mut out), DdeaStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["outcome"]["outcome"], "ConsistentBranchA", "{v}");
        assert_eq!(ddea_cascade_json(eq, 1, 4, 0, false, &mut out), DdeaStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["confinement"]["kind"]["value"], 3, "{v}");
        assert_eq!(ddea_cascade_json(eq, 0, 4, 0, false, &mut out), DdeaStatus::OutOfRange);
        ddea_equation_free(eq);

        let bad = CString::new("1/(").unwrap();
        assert_eq!(
            ddea_equation_inverse_square(bad.as_ptr(), b.as_ptr(), c0.as_ptr(), &mut eq),
            DdeaStatus::Parse
        );
        assert!(!last_error().is_empty());
    }
}

#[test]
fn limit_and_wp() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(ddea_continuum_limit(7, &mut out), DdeaStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["coefficients"]["5"], "-1/3*y3 + 4*y0*y1 + 1/3");
        assert_eq!(ddea_continuum_limit(3, &mut out), DdeaStatus::Hypothesis);

        let mut w = [0.0f64; 4];
        assert_eq!(ddea_wp_eval(2.0, 0.0, 1.0, 0.0, 0.3, 0.2, w.as_mut_ptr()), DdeaStatus::Ok);
        // (wp')^2 = 4 wp^3 - g2 wp - g3
        let p = num_complex::Complex64::new(w[0], w[1]);
        let dp = num_complex::Complex64::new(w[2], w[3]);
        assert!((dp * dp - (4.0 * p * p * p - 2.0 * p - 1.0)).norm() < 1e-9);
        assert_eq!(ddea_wp_eval(0.0, 0.0, 0.0, 0.0, 0.3, 0.2, w.as_mut_ptr()), DdeaStatus::Numeric);
        assert_eq!(ddea_wp_eval(2.0, 0.0, 1.0, 0.0, 0.0, 0.0, w.as_mut_ptr()), DdeaStatus::Numeric);
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/delaycas.h");
    let src =
        format!("#include \"{header}\"\nint main(void) {{ DdeaCorpus *c = 0; return ddea_corpus_demo(&c) == DDEA_STATUS_OK ? 0 : 1; }}\n");
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.c");
    std::fs::write(&file, src).unwrap();
    let status = match std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"])
        .arg(&file)
        .status()
    {
        Ok(s) => s,
        Err(_) => return, // no C compiler available
    };
    assert!(status.success());
}
