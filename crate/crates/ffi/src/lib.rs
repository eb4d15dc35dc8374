//! C ABI over the `trajsim` library.
//!
//! Objects cross the boundary as opaque handles created by `*_new` /
//! `*_read` functions and released with the matching `*_free`. Every
//! fallible call returns a [`TrajsimStatus`]; on failure the message is
//! available from [`trajsim_last_error_message`] on the same thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use trajsim::encoding::{fit_ridge, predict, RidgeFit};
use trajsim::ingest::{read_tensor, write_tensor, TensorData};
use trajsim::ltc::{self, Axis, DraConfig, DraNormalization, Trajectory};
use trajsim::numcore::Matrix;
use trajsim::repsim::{self, Distance};
use trajsim::Error;

/// Result of every fallible call. Values 2–5 match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrajsimStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Data = 4,
    Numeric = 5,
    Panic = 6,
}

/// Dense row-major matrix of doubles.
pub struct TrajsimMatrix(Matrix);

/// Ordered sequence of equal-length state vectors.
pub struct TrajsimTrajectory(Trajectory);

/// Fitted ridge regression.
pub struct TrajsimRidge(RidgeFit);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrajsimDistance {
    Euclidean = 0,
    Cosine = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrajsimNormalization {
    Convex = 0,
    L2 = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajsimDraConfig {
    pub beta: f64,
    pub alpha_penalty: f64,
    pub epsilon: f64,
    pub normalization: TrajsimNormalization,
    /// Nonzero clamps negative per-step scores to zero.
    pub clamp_negative: u8,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> TrajsimStatus {
    match e.exit_code() {
        2 => TrajsimStatus::InvalidArgument,
        3 => TrajsimStatus::Io,
        4 => TrajsimStatus::Data,
        _ => TrajsimStatus::Numeric,
    }
}

struct Failure(TrajsimStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TrajsimStatus::NullPointer, format!("null pointer: {what}"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TrajsimStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            TrajsimStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TrajsimStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a>(data: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn path_arg(path: *const c_char) -> Result<String, Failure> {
    if path.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(path)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| Failure(TrajsimStatus::InvalidArgument, "path is not valid UTF-8".into()))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the length needed including the NUL.
#[no_mangle]
pub unsafe extern "C" fn trajsim_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len() + 1
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn trajsim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub unsafe extern "C" fn trajsim_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut TrajsimMatrix,
) -> TrajsimStatus {
    guard(|| {
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| Failure(TrajsimStatus::InvalidArgument, "rows × cols overflows".into()))?;
        let values = slice(data, len, "data")?.to_vec();
        let m = Matrix::new(rows, cols, values)?;
        write_out(out, boxed(TrajsimMatrix(m)), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn trajsim_matrix_free(m: *mut TrajsimMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

#[no_mangle]
pub unsafe extern "C" fn trajsim_matrix_shape(
    m: *const TrajsimMatrix,
    rows: *mut usize,
    cols: *mut usize,
) -> TrajsimStatus {
    guard(|| {
        let m = borrow(m, "matrix")?;
        write_out(rows, m.0.rows(), "rows")?;
        write_out(cols, m.0.cols(), "cols")
    })
}

/// Copies the row-major values into `out`, which must hold `len ≥ rows·cols` doubles.
#[no_mangle]
pub unsafe extern "C" fn trajsim_matrix_copy_data(m: *const TrajsimMatrix, out: *mut f64, len: usize) -> TrajsimStatus {
    guard(|| {
        let m = borrow(m, "matrix")?;
        let src = m.0.as_slice();
        if len < src.len() {
            return Err(Failure(
                TrajsimStatus::InvalidArgument,
                format!("buffer holds {len} values, need {}", src.len()),
            ));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
        Ok(())
    })
}

/// Reads a two-axis tensor file as a matrix.
#[no_mangle]
pub unsafe extern "C" fn trajsim_matrix_read(path: *const c_char, out: *mut *mut TrajsimMatrix) -> TrajsimStatus {
    guard(|| {
        let p = path_arg(path)?;
        let m = read_tensor(&p)?.to_matrix()?;
        write_out(out, boxed(TrajsimMatrix(m)), "out")
    })
}

/// Writes a matrix as a double-precision tensor file.
#[no_mangle]
pub unsafe extern "C" fn trajsim_matrix_write(m: *const TrajsimMatrix, path: *const c_char) -> TrajsimStatus {
    guard(|| {
        let m = borrow(m, "matrix")?;
        let p = path_arg(path)?;
        write_tensor(&p, &TensorData::from_matrix(&m.0))?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn trajsim_cka(a: *const TrajsimMatrix, b: *const TrajsimMatrix, out: *mut f64) -> TrajsimStatus {
    guard(|| {
        let v = repsim::cka(&borrow(a, "a")?.0, &borrow(b, "b")?.0)?;
        write_out(out, v, "out")
    })
}

/// Spearman correlation between the RDMs of the rows of `a` and `b`.
#[no_mangle]
pub unsafe extern "C" fn trajsim_rsa(
    a: *const TrajsimMatrix,
    b: *const TrajsimMatrix,
    distance: TrajsimDistance,
    out: *mut f64,
) -> TrajsimStatus {
    guard(|| {
        let metric = match distance {
            TrajsimDistance::Euclidean => Distance::Euclidean,
            TrajsimDistance::Cosine => Distance::Cosine,
        };
        let ra = repsim::compute_rdm_with(&borrow(a, "a")?.0, metric)?;
        let rb = repsim::compute_rdm_with(&borrow(b, "b")?.0, metric)?;
        write_out(out, repsim::rsa_score(&ra, &rb)?, "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn trajsim_ridge_fit(
    features: *const TrajsimMatrix,
    targets: *const TrajsimMatrix,
    alpha: f64,
    out: *mut *mut TrajsimRidge,
) -> TrajsimStatus {
    guard(|| {
        let fit = fit_ridge(&borrow(features, "features")?.0, &borrow(targets, "targets")?.0, alpha)?;
        write_out(out, boxed(TrajsimRidge(fit)), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn trajsim_ridge_predict(
    fit: *const TrajsimRidge,
    features: *const TrajsimMatrix,
    out: *mut *mut TrajsimMatrix,
) -> TrajsimStatus {
    guard(|| {
        let p = predict(&borrow(fit, "fit")?.0, &borrow(features, "features")?.0)?;
        write_out(out, boxed(TrajsimMatrix(p)), "out")
    })
}

/// Weight matrix of a fit, `features × targets`.
#[no_mangle]
pub unsafe extern "C" fn trajsim_ridge_weights(
    fit: *const TrajsimRidge,
    out: *mut *mut TrajsimMatrix,
) -> TrajsimStatus {
    guard(|| {
        let w = borrow(fit, "fit")?.0.weights.clone();
        write_out(out, boxed(TrajsimMatrix(w)), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn trajsim_ridge_free(fit: *mut TrajsimRidge) {
    if !fit.is_null() {
        drop(Box::from_raw(fit));
    }
}

/// Matrix-based Rényi entropy (nats) of the rows of `z`.
#[no_mangle]
pub unsafe extern "C" fn trajsim_matrix_entropy(z: *const TrajsimMatrix, alpha: f64, out: *mut f64) -> TrajsimStatus {
    guard(|| write_out(out, ltc::matrix_entropy(&borrow(z, "z")?.0, alpha)?, "out"))
}

/// Binned mutual information (nats) between two per-sample state matrices.
/// `bins = 0` selects the default bin count.
#[no_mangle]
pub unsafe extern "C" fn trajsim_mutual_info(
    x: *const TrajsimMatrix,
    y: *const TrajsimMatrix,
    bins: usize,
    out: *mut f64,
) -> TrajsimStatus {
    guard(|| {
        let x = &borrow(x, "x")?.0;
        let bins = if bins == 0 { ltc::default_bins(x.rows()) } else { bins };
        let est = ltc::mutual_info(x, &borrow(y, "y")?.0, bins)?;
        write_out(out, est.value, "out")
    })
}

/// Largest Lyapunov exponent (nats per step) of a scalar series.
#[no_mangle]
pub unsafe extern "C" fn trajsim_lyapunov(series: *const f64, len: usize, out: *mut f64) -> TrajsimStatus {
    guard(|| {
        let est = ltc::lyapunov_exponent(slice(series, len, "series")?)?;
        write_out(out, est.exponent, "out")
    })
}

/// Trajectory from `steps` row-major states of length `dim`.
#[no_mangle]
pub unsafe extern "C" fn trajsim_trajectory_new(
    steps: usize,
    dim: usize,
    states: *const f64,
    out: *mut *mut TrajsimTrajectory,
) -> TrajsimStatus {
    guard(|| {
        let len = steps
            .checked_mul(dim)
            .ok_or_else(|| Failure(TrajsimStatus::InvalidArgument, "steps × dim overflows".into()))?;
        let data = slice(states, len, "states")?;
        let rows = if dim == 0 {
            vec![Vec::new(); steps]
        } else {
            data.chunks(dim).map(<[f64]>::to_vec).collect()
        };
        let t = Trajectory::unlabeled(rows, Axis::Time)?;
        write_out(out, boxed(TrajsimTrajectory(t)), "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn trajsim_trajectory_free(t: *mut TrajsimTrajectory) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Default DRA configuration.
#[no_mangle]
pub extern "C" fn trajsim_dra_config_default() -> TrajsimDraConfig {
    let d = DraConfig::default();
    TrajsimDraConfig {
        beta: d.beta,
        alpha_penalty: d.alpha_penalty,
        epsilon: d.epsilon,
        normalization: TrajsimNormalization::Convex,
        clamp_negative: u8::from(d.clamp_negative),
    }
}

/// DRA of two same-shape trajectories with unit-covariance step summaries.
#[no_mangle]
pub unsafe extern "C" fn trajsim_dra(
    e: *const TrajsimTrajectory,
    l: *const TrajsimTrajectory,
    cfg: *const TrajsimDraConfig,
    out: *mut f64,
) -> TrajsimStatus {
    guard(|| {
        let c = borrow(cfg, "cfg")?;
        let cfg = DraConfig {
            beta: c.beta,
            alpha_penalty: c.alpha_penalty,
            epsilon: c.epsilon,
            normalization: match c.normalization {
                TrajsimNormalization::Convex => DraNormalization::Convex,
                TrajsimNormalization::L2 => DraNormalization::L2,
            },
            clamp_negative: c.clamp_negative != 0,
            common_dim: None,
        };
        let r = ltc::dra(&borrow(e, "e")?.0, &borrow(l, "l")?.0, &cfg)?;
        write_out(out, r.value, "out")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::BadMagic), TrajsimStatus::Io);
        assert_eq!(status_of(&Error::ZeroTrace), TrajsimStatus::Numeric);
        assert_eq!(status_of(&Error::TooShort { needed: 1, got: 0 }), TrajsimStatus::Data);
    }

    #[test]
    fn error_message_truncates() {
        set_error("abcdef".into());
        let mut buf = [0 as c_char; 4];
        let need = unsafe { trajsim_last_error_message(buf.as_mut_ptr(), buf.len()) };
        assert_eq!(need, 7);
        let s = unsafe { CStr::from_ptr(buf.as_ptr()) };
        assert_eq!(s.to_str().unwrap(), "abc");
    }
}
