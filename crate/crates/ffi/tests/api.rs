use std::ffi::{c_char, CStr, CString};
use std::ptr;

use greendecay_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    unsafe {
        gd_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

/// `[[2, 0], [1, 2]]`
fn two_by_two() -> *mut GdMatrix {
    let values = [2.0, 0.0, 1.0, 2.0];
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { gd_matrix_new(2, 1, 0, values.as_ptr(), &mut m) }, GdStatus::Ok);
    m
}

#[test]
fn generators_reproduce_small_inverse() {
    let m = two_by_two();
    unsafe {
        let (mut n, mut rl, mut ru) = (0, 0, 0);
        assert_eq!(gd_matrix_shape(m, &mut n, &mut rl, &mut ru), GdStatus::Ok);
        assert_eq!((n, rl, ru), (2, 1, 0));

        let mut g = ptr::null_mut();
        assert_eq!(gd_inverse_generators(m, &mut g), GdStatus::Ok);
        let mut v = 0.0;
        assert_eq!(gd_generators_entry(g, 2, 1, &mut v), GdStatus::Ok);
        assert_eq!(v, -0.25);
        assert_eq!(gd_generators_entry(g, 1, 1, &mut v), GdStatus::Ok);
        assert_eq!(v, 0.5);
        assert_eq!(gd_generators_entry(g, 3, 1, &mut v), GdStatus::NotRepresented);
        gd_generators_free(g);
        gd_matrix_free(m);
    }
}

#[test]
fn bounds_of_tridiagonal() {
    let n = 5;
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        values[i * n + i] = 4.0;
        if i + 1 < n {
            values[i * n + i + 1] = -1.0;
            values[(i + 1) * n + i] = -1.0;
        }
    }
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(gd_matrix_new(n, 1, 1, values.as_ptr(), &mut m), GdStatus::Ok);
        let (mut mu, mut dmin, mut sat) = (0.0, 0.0, 0);
        assert_eq!(gd_dominance(m, &mut mu, &mut dmin, &mut sat), GdStatus::Ok);
        assert_eq!((mu, dmin, sat), (0.5, 4.0, 1));
        let (mut big_m, mut gamma) = (0.0, 0.0);
        assert_eq!(gd_lu_bound(m, &mut big_m, &mut gamma), GdStatus::Ok);
        assert_eq!(gamma, 0.5);
        assert!((big_m - 1.25 / 1.5).abs() < 1e-15);
        let mut v = 0.0;
        assert_eq!(gd_varah_bound(m, &mut v), GdStatus::Ok);
        assert_eq!(v, 0.5);
        gd_matrix_free(m);
    }
}

#[test]
fn failures_set_status_and_message() {
    let values = [1.0, 0.0, 2.0, 1.0];
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(gd_matrix_new(2, 1, 0, values.as_ptr(), &mut m), GdStatus::Ok);
        let (mut big_m, mut gamma) = (0.0, 0.0);
        assert_eq!(gd_lu_bound(m, &mut big_m, &mut gamma), GdStatus::DominanceViolated);
        assert!(last_error().contains("mu = 2"), "{}", last_error());
        let mut v = 0.0;
        assert_eq!(gd_varah_bound(m, &mut v), GdStatus::DominanceViolated);
        gd_matrix_free(m);

        assert_eq!(gd_lu_bound(ptr::null(), &mut big_m, &mut gamma), GdStatus::NullPointer);
        assert_eq!(gd_matrix_new(2, 1, 0, ptr::null(), &mut m), GdStatus::NullPointer);
        // r_lower = 0 is not a banded matrix of positive order
        assert_eq!(gd_matrix_new(2, 0, 0, values.as_ptr(), &mut m), GdStatus::InvalidArgument);

        let singular = [0.0, 0.0, 1.0, 1.0];
        assert_eq!(gd_matrix_new(2, 1, 1, singular.as_ptr(), &mut m), GdStatus::Ok);
        let mut g = ptr::null_mut();
        assert_eq!(gd_inverse_generators(m, &mut g), GdStatus::ZeroPivot);
        assert!(g.is_null());
        gd_matrix_free(m);

        gd_matrix_free(ptr::null_mut());
        gd_generators_free(ptr::null_mut());
    }
}

#[test]
fn matrix_market_loading() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.mtx");
    std::fs::write(&path, "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 2\n2 1 1\n2 2 2\n").unwrap();
    let cpath = CString::new(path.to_str().unwrap()).unwrap();
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(gd_matrix_from_mtx(cpath.as_ptr(), &mut m), GdStatus::Ok);
        let (mut n, mut rl, mut ru) = (0, 0, 0);
        gd_matrix_shape(m, &mut n, &mut rl, &mut ru);
        assert_eq!((n, rl, ru), (2, 1, 0));
        gd_matrix_free(m);

        let missing = CString::new("/nonexistent/a.mtx").unwrap();
        assert_eq!(gd_matrix_from_mtx(missing.as_ptr(), &mut m), GdStatus::Io);
        std::fs::write(&path, "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 2\n").unwrap();
        assert_eq!(gd_matrix_from_mtx(cpath.as_ptr(), &mut m), GdStatus::Parse);
        assert!(last_error().contains(":3:"), "{}", last_error());
    }
}

#[test]
fn error_message_truncates() {
    let values = [1.0, 0.0, 2.0, 1.0];
    let mut m = ptr::null_mut();
    unsafe {
        gd_matrix_new(2, 1, 0, values.as_ptr(), &mut m);
        let mut v = 0.0;
        gd_varah_bound(m, &mut v);
        let full = gd_last_error_message(ptr::null_mut(), 0);
        let mut buf = [0 as c_char; 8];
        assert_eq!(gd_last_error_message(buf.as_mut_ptr(), buf.len()), full);
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_bytes().len(), 7);
        gd_matrix_free(m);
    }
    let s = unsafe { CStr::from_ptr(gd_status_str(GdStatus::ZeroPivot)) };
    assert_eq!(s.to_str().unwrap(), "zero pivot");
}
