use std::ffi::{c_char, CStr};
use std::ptr;

use kovtop_ffi::*;

fn model() -> *mut KovtopModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { kovtop_model_new(1.0, 1.0, &mut m) }, KovtopStatus::Ok);
    assert!(!m.is_null());
    m
}

fn text(buf: &[c_char]) -> String {
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn last_error() -> String {
    let mut buf = [0 as c_char; 512];
    let mut n = 0;
    unsafe { kovtop_last_error(buf.as_mut_ptr(), buf.len(), &mut n) };
    text(&buf)
}

#[test]
fn classify_and_code() {
    let m = model();
    let mut buf = [0 as c_char; 128];
    let mut n = 0;
    let s = unsafe { kovtop_classify(m, 10.0, 0.1, buf.as_mut_ptr(), buf.len(), &mut n) };
    assert_eq!(s, KovtopStatus::Ok);
    assert_eq!(text(&buf), "V.11");
    assert_eq!(n, 5);

    let s = unsafe { kovtop_code(m, 10.0, 0.1, buf.as_mut_ptr(), buf.len(), &mut n) };
    assert_eq!(s, KovtopStatus::Ok);
    assert_eq!(text(&buf), "y1 1 y6 2 y2 3 y3 4 z4 17 z6 5 z5 6 z2 7 z1");
    unsafe { kovtop_model_free(m) };
}

#[test]
fn short_buffer_reports_size() {
    let m = model();
    let mut buf = [0 as c_char; 4];
    let mut n = 0;
    let s = unsafe { kovtop_code(m, 10.0, 0.1, buf.as_mut_ptr(), buf.len(), &mut n) };
    assert_eq!(s, KovtopStatus::BufferTooSmall);
    assert_eq!(n, "y1 1 y6 2 y2 3 y3 4 z4 17 z6 5 z5 6 z2 7 z1".len() + 1);
    // size query with no buffer
    let s = unsafe { kovtop_code(m, 10.0, 0.1, ptr::null_mut(), 0, &mut n) };
    assert_eq!(s, KovtopStatus::BufferTooSmall);
    unsafe { kovtop_model_free(m) };
}

#[test]
fn errors_map_to_codes() {
    let m = model();
    let mut buf = [0 as c_char; 64];
    let mut n = 0;
    let s = unsafe { kovtop_classify(m, 1.0, 5.0, buf.as_mut_ptr(), buf.len(), &mut n) };
    assert_eq!(s, KovtopStatus::InvalidOrbit);
    assert!(last_error().contains("invalid orbit"));

    let s = unsafe { kovtop_classify(ptr::null(), 1.0, 0.1, buf.as_mut_ptr(), buf.len(), &mut n) };
    assert_eq!(s, KovtopStatus::NullPointer);

    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { kovtop_model_new(f64::NAN, 1.0, &mut bad) }, KovtopStatus::InvalidParams);
    assert!(bad.is_null());
    unsafe { kovtop_model_free(m) };
}

#[test]
fn isoenergy_class() {
    let m = model();
    let (a, b) = kovtop::separating::sample_orbit("VIII", &kovtop::ModelParams::default()).unwrap();
    let (mut g, mut c) = (0u8, 0u8);
    assert_eq!(unsafe { kovtop_isoenergy(m, a, b, 0.0, &mut g, &mut c) }, KovtopStatus::Ok);
    assert_eq!((g, c), (13, 10));
    unsafe { kovtop_model_free(m) };
}

#[test]
fn diagram_points_match_library() {
    let m = model();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { kovtop_diagram_new(m, 10.0, 0.1, &mut d) }, KovtopStatus::Ok);
    let mut count = 0;
    assert_eq!(unsafe { kovtop_diagram_point_count(d, &mut count) }, KovtopStatus::Ok);
    let lib = kovtop::bifurcation::diagram(10.0, 0.1, &kovtop::ModelParams::default()).unwrap();
    assert_eq!(count, lib.singular_points.len());
    for (i, q) in lib.singular_points.iter().enumerate() {
        let mut p = KovtopPoint {
            family: [0; 8],
            h: 0.0,
            k: 0.0,
            z: 0.0,
            has_z: false,
        };
        assert_eq!(unsafe { kovtop_diagram_point(d, i, &mut p) }, KovtopStatus::Ok);
        assert_eq!(text(&p.family), q.family.to_string());
        assert_eq!((p.h, p.k, p.has_z), (q.h, q.k, q.z.is_some()));
    }
    let mut p = std::mem::MaybeUninit::<KovtopPoint>::uninit();
    assert_eq!(unsafe { kovtop_diagram_point(d, count, p.as_mut_ptr()) }, KovtopStatus::OutOfRange);

    let mut n = 0;
    unsafe { kovtop_diagram_csv(m, d, ptr::null_mut(), 0, &mut n) };
    let mut buf = vec![0 as c_char; n];
    assert_eq!(unsafe { kovtop_diagram_csv(m, d, buf.as_mut_ptr(), n, &mut n) }, KovtopStatus::Ok);
    assert!(text(&buf).starts_with(kovtop::export::DIAGRAM_HEADER));
    unsafe {
        kovtop_diagram_free(d);
        kovtop_model_free(m);
    }
}

#[test]
fn verify_region_viii() {
    let m = model();
    let (a, b) = kovtop::separating::sample_orbit("VIII", &kovtop::ModelParams::default()).unwrap();
    let mut s = KovtopVerifySummary {
        passed: false,
        missing: 99,
        spurious: 99,
        max_mismatch: f64::NAN,
    };
    assert_eq!(unsafe { kovtop_verify(m, a, b, 200, 500, 1, &mut s) }, KovtopStatus::Ok);
    assert!(s.passed, "{s:?}");
    assert_eq!((s.missing, s.spurious), (0, 0));
    unsafe { kovtop_model_free(m) };
}

#[test]
fn free_accepts_null() {
    unsafe {
        kovtop_model_free(ptr::null_mut());
        kovtop_diagram_free(ptr::null_mut());
    }
}
