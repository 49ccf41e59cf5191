use std::ffi::{CStr, CString};
use std::ptr;

use gsp4_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn selfcheck_and_adm() {
    assert_eq!(gsp4_selfcheck(), Gsp4Status::Ok);
    let mut n = 0usize;
    assert_eq!(unsafe { gsp4_adm_count(2, 1, 0, &mut n) }, Gsp4Status::Ok);
    assert_eq!(n, 63);
    assert_eq!(unsafe { gsp4_adm_count(1, 2, 0, &mut n) }, Gsp4Status::Validation);
    let msg = unsafe { CStr::from_ptr(gsp4_last_error()) }.to_str().unwrap();
    assert!(msg.contains("not dominant"), "{msg}");
    assert_eq!(unsafe { gsp4_adm_count(2, 1, 0, ptr::null_mut()) }, Gsp4Status::NullPointer);
}

#[test]
fn presentation_and_graph() {
    let mut h = ptr::null_mut();
    let json = c(r#"{"p":37,"s":["s1"],"mu":[[16,8,0]]}"#);
    assert_eq!(unsafe { gsp4_presentation_from_json(json.as_ptr(), &mut h) }, Gsp4Status::Ok);
    let mut d = 0i64;
    assert_eq!(unsafe { gsp4_presentation_depth(h, &mut d) }, Gsp4Status::Ok);
    assert_eq!(d, 8);
    let mut n = 0usize;
    assert_eq!(unsafe { gsp4_weight_count(h, &mut n) }, Gsp4Status::Ok);
    assert_eq!(n, 20);
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { gsp4_graph_build(h, &mut g) }, Gsp4Status::Ok);
    let (mut v, mut e, mut conn) = (0usize, 0usize, false);
    assert_eq!(unsafe { gsp4_graph_stats(g, &mut v, &mut e, &mut conn) }, Gsp4Status::Ok);
    assert_eq!((v, e, conn), (20, 23, true));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { gsp4_graph_dot(g, &mut s) }, Gsp4Status::Ok);
    let dot = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    assert!(dot.starts_with("graph W {"));
    assert_eq!(dot.matches(" -- ").count(), 23);
    unsafe {
        gsp4_string_free(s);
        gsp4_graph_free(g);
        gsp4_presentation_free(h);
    }
}

#[test]
fn bad_inputs() {
    let mut h = ptr::null_mut();
    let json = c(r#"{"p":37,"s":["s1"],"mu":[[40,8,0]]}"#);
    assert_eq!(unsafe { gsp4_presentation_from_json(json.as_ptr(), &mut h) }, Gsp4Status::Validation);
    assert!(h.is_null());
    let junk = c("{");
    assert_eq!(unsafe { gsp4_presentation_from_json(junk.as_ptr(), &mut h) }, Gsp4Status::Validation);
    assert_eq!(unsafe { gsp4_presentation_from_json(ptr::null(), &mut h) }, Gsp4Status::NullPointer);
    let bytes = [0xffu8, 0];
    assert_eq!(unsafe { gsp4_presentation_from_json(bytes.as_ptr() as *const _, &mut h) }, Gsp4Status::InvalidUtf8);
    unsafe {
        gsp4_presentation_free(ptr::null_mut());
        gsp4_graph_free(ptr::null_mut());
        gsp4_string_free(ptr::null_mut());
    }
}

#[test]
fn shape_through_abi() {
    let m = c(r#"[[{"coeffs":{}},{"coeffs":{}},{"coeffs":{}},{"coeffs":{"2":"-1"}}],
                 [{"coeffs":{}},{"coeffs":{"2":"1"}},{"coeffs":{}},{"coeffs":{}}],
                 [{"coeffs":{}},{"coeffs":{}},{"coeffs":{"1":"1"}},{"coeffs":{}}],
                 [{"coeffs":{"1":"1"}},{"coeffs":{}},{"coeffs":{}},{"coeffs":{}}]]"#);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { gsp4_shape_of(m.as_ptr(), 37, &mut s) }, Gsp4Status::Ok);
    assert_eq!(unsafe { CStr::from_ptr(s) }.to_str().unwrap(), "t(1,0;1)·s2s1s2∨");
    unsafe { gsp4_string_free(s) };
    assert_eq!(unsafe { gsp4_shape_of(m.as_ptr(), 36, &mut s) }, Gsp4Status::Validation);
}
