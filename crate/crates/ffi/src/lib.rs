//! C interface to `gausscap`.
//!
//! Every fallible function returns a [`GcStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and can
//! be read with [`gc_last_error`]. Handles are created by `*_new` functions
//! and released by the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gausscap::channel::ChannelParams;
use gausscap::coherent::{self, Capacity};
use gausscap::error::Error;
use gausscap::gaussian::{self, CovarianceMatrix, GaussianInputParams, ThermalSpec};
use gausscap::perturbation::{self, PerturbationSpec};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Validation = 3,
    Singular = 4,
    Convergence = 5,
    Cutoff = 6,
    InvalidState = 7,
    Conditioning = 8,
    NonQuadratic = 9,
    Panic = 10,
}

impl From<&Error> for GcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => GcStatus::Domain,
            Error::Validation(_) => GcStatus::Validation,
            Error::Singular(_) => GcStatus::Singular,
            Error::Convergence { .. } => GcStatus::Convergence,
            Error::Cutoff(_) => GcStatus::Cutoff,
            Error::InvalidState(_) => GcStatus::InvalidState,
            Error::Conditioning(_) => GcStatus::Conditioning,
            Error::NonQuadratic(_) => GcStatus::NonQuadratic,
        }
    }
}

/// Lossy channel with additive Gaussian noise.
pub struct GcChannel {
    params: ChannelParams,
}

/// Polynomial perturbation of a thermal product state.
pub struct GcPerturbation {
    spec: PerturbationSpec,
}

/// Coherent information in bits with its entropy terms.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GcCoherentInfo {
    pub value: f64,
    pub term_out: f64,
    pub term_a: f64,
    pub term_b: f64,
}

/// Second-order entropy shifts in nats.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GcShifts {
    pub d_s_in: f64,
    pub d_s_out: f64,
    pub d_s_joint: f64,
    pub d_ic: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GcStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            GcStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            GcStatus::from(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            GcStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write<T>(p: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    let slot = p.as_mut().ok_or(Failure::Null(what))?;
    *slot = value;
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn gc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gc_channel_new(eta: f64, n_noise: f64, out: *mut *mut GcChannel) -> GcStatus {
    guard(|| {
        let params = ChannelParams::new(eta, n_noise)?;
        write(out, Box::into_raw(Box::new(GcChannel { params })), "out")
    })
}

/// # Safety
/// `channel` must come from [`gc_channel_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gc_channel_free(channel: *mut GcChannel) {
    if !channel.is_null() {
        drop(Box::from_raw(channel));
    }
}

/// Capacity formula value in bits; `+INFINITY` for the noiseless identity.
///
/// # Safety
/// `channel` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gc_capacity(channel: *const GcChannel, out: *mut f64) -> GcStatus {
    guard(|| {
        let ch = deref(channel, "channel")?;
        let bits = match coherent::capacity_conjecture(ch.params) {
            Capacity::Bits(b) => b,
            Capacity::Unbounded => f64::INFINITY,
        };
        write(out, bits, "out")
    })
}

/// # Safety
/// `channel` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gc_thermal_coherent_info(
    channel: *const GcChannel,
    n_mean: f64,
    out: *mut GcCoherentInfo,
) -> GcStatus {
    guard(|| {
        let ch = deref(channel, "channel")?;
        let r = coherent::thermal_coherent_info(ch.params, ThermalSpec::new(n_mean)?);
        write(out, report(r), "out")
    })
}

/// # Safety
/// `channel` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gc_gaussian_coherent_info(
    channel: *const GcChannel,
    energy: f64,
    x: f64,
    out: *mut GcCoherentInfo,
) -> GcStatus {
    guard(|| {
        let ch = deref(channel, "channel")?;
        let r = coherent::gaussian_coherent_info(ch.params, GaussianInputParams::new(energy, x, 0.0)?)?;
        write(out, report(r), "out")
    })
}

/// Derivative of the coherent information in `x` at fixed energy, in bits.
///
/// # Safety
/// `channel` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gc_coherent_info_dx(
    channel: *const GcChannel,
    energy: f64,
    x: f64,
    out: *mut f64,
) -> GcStatus {
    guard(|| {
        let ch = deref(channel, "channel")?;
        let d = coherent::coherent_info_dx(ch.params, GaussianInputParams::new(energy, x, 0.0)?)?;
        write(out, d, "out")
    })
}

fn report(r: coherent::CoherentInfoReport) -> GcCoherentInfo {
    GcCoherentInfo {
        value: r.value,
        term_out: r.term_out,
        term_a: r.term_a,
        term_b: r.term_b,
    }
}

/// Williamson spectrum of a `2n x 2n` covariance matrix given row-major,
/// written in descending order to `out[0..n]`.
///
/// # Safety
/// `cov` must hold `4 n²` readable values and `out` `n` writable values.
#[no_mangle]
pub unsafe extern "C" fn gc_symplectic_eigenvalues(cov: *const f64, n_modes: usize, out: *mut f64) -> GcStatus {
    guard(|| {
        if cov.is_null() {
            return Err(Failure::Null("cov"));
        }
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let dim = 2 * n_modes;
        let entries = std::slice::from_raw_parts(cov, dim * dim);
        let m = CovarianceMatrix::new(DMatrix::from_row_slice(dim, dim, entries))?;
        let nu = gaussian::symplectic_eigenvalues(&m)?;
        std::slice::from_raw_parts_mut(out, n_modes).copy_from_slice(&nu);
        Ok(())
    })
}

/// Perturbation with exponents `k[0..n_modes]`, `l[0..n_modes]`, amplitude
/// `c_re + i c_im` and strength `epsilon`.
///
/// # Safety
/// `k` and `l` must hold `n_modes` readable values; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn gc_perturbation_new(
    k: *const u32,
    l: *const u32,
    n_modes: usize,
    c_re: f64,
    c_im: f64,
    epsilon: f64,
    out: *mut *mut GcPerturbation,
) -> GcStatus {
    guard(|| {
        if k.is_null() {
            return Err(Failure::Null("k"));
        }
        if l.is_null() {
            return Err(Failure::Null("l"));
        }
        let k = std::slice::from_raw_parts(k, n_modes).to_vec();
        let l = std::slice::from_raw_parts(l, n_modes).to_vec();
        let spec = PerturbationSpec::new(k, l, Complex64::new(c_re, c_im), epsilon)?;
        write(out, Box::into_raw(Box::new(GcPerturbation { spec })), "out")
    })
}

/// # Safety
/// `p` must come from [`gc_perturbation_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gc_perturbation_free(p: *mut GcPerturbation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `Tr(φ²/ρ)` for the perturbation on a thermal product of mean `n_mean`.
///
/// # Safety
/// `p` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gc_moment_trace(p: *const GcPerturbation, n_mean: f64, out: *mut f64) -> GcStatus {
    guard(|| {
        let p = deref(p, "perturbation")?;
        write(out, perturbation::moment_trace(&p.spec, n_mean)?, "out")
    })
}

/// # Safety
/// Both handles must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gc_entropy_shifts(
    p: *const GcPerturbation,
    channel: *const GcChannel,
    n_mean: f64,
    out: *mut GcShifts,
) -> GcStatus {
    guard(|| {
        let p = deref(p, "perturbation")?;
        let ch = deref(channel, "channel")?;
        let r = perturbation::coherent_info_shift(&p.spec, n_mean, ch.params)?;
        let shifts = GcShifts {
            d_s_in: r.d_s_in,
            d_s_out: r.d_s_out,
            d_s_joint: r.d_s_joint,
            d_ic: r.d_ic,
        };
        write(out, shifts, "out")
    })
}
