use std::ffi::{c_char, CStr, CString};
use std::ptr;

use trajsim_ffi::*;

fn matrix(rows: usize, cols: usize, data: &[f64]) -> *mut TrajsimMatrix {
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { trajsim_matrix_new(rows, cols, data.as_ptr(), &mut m) },
        TrajsimStatus::Ok
    );
    m
}

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    unsafe { trajsim_last_error_message(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn matrix_round_trip_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("m.trjl").to_str().unwrap()).unwrap();
    let m = matrix(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.5]);
    assert_eq!(unsafe { trajsim_matrix_write(m, path.as_ptr()) }, TrajsimStatus::Ok);
    let mut back = ptr::null_mut();
    assert_eq!(
        unsafe { trajsim_matrix_read(path.as_ptr(), &mut back) },
        TrajsimStatus::Ok
    );
    let (mut r, mut c) = (0, 0);
    assert_eq!(unsafe { trajsim_matrix_shape(back, &mut r, &mut c) }, TrajsimStatus::Ok);
    assert_eq!((r, c), (2, 3));
    let mut buf = [0.0; 6];
    assert_eq!(
        unsafe { trajsim_matrix_copy_data(back, buf.as_mut_ptr(), 6) },
        TrajsimStatus::Ok
    );
    assert_eq!(buf, [1.0, 2.0, 3.0, 4.0, 5.0, 6.5]);
    assert_eq!(
        unsafe { trajsim_matrix_copy_data(back, buf.as_mut_ptr(), 5) },
        TrajsimStatus::InvalidArgument
    );
    unsafe {
        trajsim_matrix_free(m);
        trajsim_matrix_free(back);
    }
}

#[test]
fn missing_file_is_io_status() {
    let path = CString::new("/nonexistent/dir/x.trjl").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { trajsim_matrix_read(path.as_ptr(), &mut m) }, TrajsimStatus::Io);
    assert!(m.is_null());
    assert!(last_error().contains("missing file"));
}

#[test]
fn null_pointers_are_reported() {
    let mut out = 0.0;
    assert_eq!(
        unsafe { trajsim_cka(ptr::null(), ptr::null(), &mut out) },
        TrajsimStatus::NullPointer
    );
    assert_eq!(
        unsafe { trajsim_lyapunov(ptr::null(), 10, &mut out) },
        TrajsimStatus::NullPointer
    );
    let m = matrix(2, 2, &[1.0, 0.0, 0.0, 1.0]);
    assert_eq!(
        unsafe { trajsim_matrix_entropy(m, 1.0, ptr::null_mut()) },
        TrajsimStatus::NullPointer
    );
    unsafe { trajsim_matrix_free(m) };
}

#[test]
fn scores_and_entropy() {
    let a = matrix(4, 2, &[1.0, 0.0, 0.0, 2.0, 3.0, 1.0, -1.0, 0.5]);
    let mut v = 0.0;
    assert_eq!(unsafe { trajsim_cka(a, a, &mut v) }, TrajsimStatus::Ok);
    assert!((v - 1.0).abs() < 1e-12);
    assert_eq!(
        unsafe { trajsim_rsa(a, a, TrajsimDistance::Euclidean, &mut v) },
        TrajsimStatus::Ok
    );
    assert!((v - 1.0).abs() < 1e-12);
    let eye = matrix(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
    assert_eq!(unsafe { trajsim_matrix_entropy(eye, 1.0, &mut v) }, TrajsimStatus::Ok);
    assert!((v - 3f64.ln()).abs() < 1e-12);
    assert_eq!(
        unsafe { trajsim_matrix_entropy(eye, -1.0, &mut v) },
        TrajsimStatus::InvalidArgument
    );
    unsafe {
        trajsim_matrix_free(a);
        trajsim_matrix_free(eye);
    }
}

#[test]
fn ridge_fit_predict() {
    // y = 2x + 1 exactly; tiny penalty recovers it
    let x = matrix(4, 1, &[0.0, 1.0, 2.0, 3.0]);
    let y = matrix(4, 1, &[1.0, 3.0, 5.0, 7.0]);
    let mut fit = ptr::null_mut();
    assert_eq!(unsafe { trajsim_ridge_fit(x, y, 1e-12, &mut fit) }, TrajsimStatus::Ok);
    let mut pred = ptr::null_mut();
    assert_eq!(unsafe { trajsim_ridge_predict(fit, x, &mut pred) }, TrajsimStatus::Ok);
    let mut buf = [0.0; 4];
    unsafe { trajsim_matrix_copy_data(pred, buf.as_mut_ptr(), 4) };
    for (p, t) in buf.iter().zip([1.0, 3.0, 5.0, 7.0]) {
        assert!((p - t).abs() < 1e-9);
    }
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { trajsim_ridge_weights(fit, &mut w) }, TrajsimStatus::Ok);
    let mut wv = [0.0];
    unsafe { trajsim_matrix_copy_data(w, wv.as_mut_ptr(), 1) };
    assert!((wv[0] - 2.0).abs() < 1e-9);
    unsafe {
        trajsim_matrix_free(x);
        trajsim_matrix_free(y);
        trajsim_matrix_free(pred);
        trajsim_matrix_free(w);
        trajsim_ridge_free(fit);
    }
}

#[test]
fn dra_identity_and_bad_config() {
    let states = [1.0, 0.5, 2.0, 0.7, 2.5, 1.5];
    let mut e = ptr::null_mut();
    assert_eq!(
        unsafe { trajsim_trajectory_new(3, 2, states.as_ptr(), &mut e) },
        TrajsimStatus::Ok
    );
    let mut cfg = trajsim_dra_config_default();
    let mut v = 0.0;
    assert_eq!(unsafe { trajsim_dra(e, e, &cfg, &mut v) }, TrajsimStatus::Ok);
    assert!((v - 1.0).abs() < 1e-6);
    cfg.alpha_penalty = 6.0;
    assert_eq!(
        unsafe { trajsim_dra(e, e, &cfg, &mut v) },
        TrajsimStatus::InvalidArgument
    );
    assert!(last_error().contains("alpha_penalty"));
    let mut short = ptr::null_mut();
    assert_eq!(
        unsafe { trajsim_trajectory_new(1, 2, states.as_ptr(), &mut short) },
        TrajsimStatus::Data
    );
    unsafe { trajsim_trajectory_free(e) };
}

#[test]
fn mutual_info_and_lyapunov() {
    let rows: Vec<f64> = (0..40).map(|i| ((i * 17) % 23) as f64).collect();
    let x = matrix(40, 1, &rows);
    let mut v = 0.0;
    assert_eq!(unsafe { trajsim_mutual_info(x, x, 0, &mut v) }, TrajsimStatus::Ok);
    assert!(v > 0.0);
    let mut s = vec![0.1234];
    for _ in 1..2000 {
        let p = *s.last().unwrap();
        s.push(4.0 * p * (1.0 - p));
    }
    assert_eq!(
        unsafe { trajsim_lyapunov(s.as_ptr(), s.len(), &mut v) },
        TrajsimStatus::Ok
    );
    assert!((v - 2f64.ln()).abs() < 0.1);
    assert_eq!(unsafe { trajsim_lyapunov(s.as_ptr(), 3, &mut v) }, TrajsimStatus::Data);
    unsafe { trajsim_matrix_free(x) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(trajsim_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
