//! C ABI for the micromaser field simulator.
//!
//! The surface is a small set of functions over an opaque state handle,
//! with flat scalar arguments so any language with a C FFI can build a
//! field state, drive the kick evolution, and read statistics back out.
//! Every function returns an [`MmStatus`]; out-parameters are written only
//! on `MM_STATUS_OK`. Panics are caught at the boundary and reported as
//! `MM_STATUS_INTERNAL`.
//!
//! Handles are created and released only through this API. A handle may be
//! used from one thread at a time; sharing one across threads without
//! synchronization is a data race.

use std::os::raw::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};

use micromaser::{
    apply_kicks, quasiprob_value, AtomPreparation, DensityMatrix, Error, InteractionParams,
    DEFAULT_TAIL_TOL,
};
use num_complex::Complex64;

/// Result code of every call. Out-parameters are written only on
/// `MM_STATUS_OK`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MmStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A value argument is outside the operation's domain.
    InvalidParameter = 2,
    /// An internal invariant failed or a panic was caught at the boundary.
    Internal = 3,
}

/// Scalar field statistics.
///
/// `mandel_q` is meaningful only when `has_mandel_q` is 1; the Mandel Q
/// parameter is undefined for a state with zero mean photon number.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct MmDiagnostics {
    /// Purity deficit 1 - tr(rho^2).
    pub zeta: f64,
    /// Mean photon number.
    pub mean_n: f64,
    /// Photon-number variance.
    pub variance_n: f64,
    /// Mandel Q parameter, or 0 when `has_mandel_q` is 0.
    pub mandel_q: f64,
    /// 1 when `mandel_q` holds a defined value.
    pub has_mandel_q: u8,
}

/// Opaque handle to a cavity-field density matrix. Created by the
/// `mm_*_state` constructors and released by [`mm_state_free`].
pub struct MmState {
    inner: DensityMatrix,
}

fn status_of(err: &Error) -> MmStatus {
    match err {
        Error::InvalidParameter(_) => MmStatus::InvalidParameter,
        _ => MmStatus::Internal,
    }
}

fn guarded(body: impl FnOnce() -> MmStatus) -> MmStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(MmStatus::Internal)
}

fn emit_state(result: micromaser::Result<DensityMatrix>, out: *mut *mut MmState) -> MmStatus {
    match result {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(MmState { inner })) };
            MmStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

fn resolve_tail_tol(tail_tol: f64) -> f64 {
    if tail_tol == 0.0 {
        DEFAULT_TAIL_TOL
    } else {
        tail_tol
    }
}

/// Create a thermal field state with mean photon number `mean_n`.
///
/// `tail_tol` is the truncation budget for neglected Fock-space mass; pass
/// 0 to use the library default.
///
/// # Safety
///
/// `out` must be a valid pointer. On `MM_STATUS_OK` it receives an owned
/// handle that must be released with [`mm_state_free`].
#[no_mangle]
pub unsafe extern "C" fn mm_thermal_state(
    mean_n: f64,
    tail_tol: f64,
    out: *mut *mut MmState,
) -> MmStatus {
    if out.is_null() {
        return MmStatus::NullArgument;
    }
    guarded(|| {
        emit_state(
            DensityMatrix::thermal_state(mean_n, resolve_tail_tol(tail_tol)),
            out,
        )
    })
}

/// Create a phase-averaged coherent state with mean photon number `mean_n`
/// (a Poissonian photon-number mixture with no off-diagonal coherence).
///
/// `tail_tol` is the truncation budget for neglected Fock-space mass; pass
/// 0 to use the library default.
///
/// # Safety
///
/// `out` must be a valid pointer. On `MM_STATUS_OK` it receives an owned
/// handle that must be released with [`mm_state_free`].
#[no_mangle]
pub unsafe extern "C" fn mm_dephased_coherent_state(
    mean_n: f64,
    tail_tol: f64,
    out: *mut *mut MmState,
) -> MmStatus {
    if out.is_null() {
        return MmStatus::NullArgument;
    }
    guarded(|| {
        emit_state(
            DensityMatrix::dephased_coherent_state(mean_n, resolve_tail_tol(tail_tol)),
            out,
        )
    })
}

/// Create the photon-number eigenstate |n> stored with at least `dim`
/// Fock levels. Fails unless n < dim.
///
/// # Safety
///
/// `out` must be a valid pointer. On `MM_STATUS_OK` it receives an owned
/// handle that must be released with [`mm_state_free`].
#[no_mangle]
pub unsafe extern "C" fn mm_fock_state(n: usize, dim: usize, out: *mut *mut MmState) -> MmStatus {
    if out.is_null() {
        return MmStatus::NullArgument;
    }
    guarded(|| emit_state(DensityMatrix::fock_state(n, dim), out))
}

/// Duplicate a state handle. The copy evolves independently.
///
/// # Safety
///
/// `state` must be a live handle from this API and `out` a valid pointer.
/// On `MM_STATUS_OK`, `out` receives an owned handle that must be released
/// with [`mm_state_free`].
#[no_mangle]
pub unsafe extern "C" fn mm_state_clone(state: *const MmState, out: *mut *mut MmState) -> MmStatus {
    if state.is_null() || out.is_null() {
        return MmStatus::NullArgument;
    }
    guarded(|| {
        let inner = unsafe { &(*state).inner }.clone();
        unsafe { *out = Box::into_raw(Box::new(MmState { inner })) };
        MmStatus::Ok
    })
}

/// Release a state handle. Null is a no-op. The handle must not be used
/// afterwards.
///
/// # Safety
///
/// `state` must be null or a live handle from this API that is released
/// exactly once.
#[no_mangle]
pub unsafe extern "C" fn mm_state_free(state: *mut MmState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// Number of Fock levels the state currently stores.
///
/// # Safety
///
/// `state` must be a live handle from this API and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mm_state_dim(state: *const MmState, out: *mut usize) -> MmStatus {
    if state.is_null() || out.is_null() {
        return MmStatus::NullArgument;
    }
    guarded(|| {
        unsafe { *out = (*state).inner.dim() };
        MmStatus::Ok
    })
}

/// Read purity deficit, photon-number mean and variance, and the Mandel Q
/// parameter of the state.
///
/// # Safety
///
/// `state` must be a live handle from this API and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mm_state_diagnostics(
    state: *const MmState,
    out: *mut MmDiagnostics,
) -> MmStatus {
    if state.is_null() || out.is_null() {
        return MmStatus::NullArgument;
    }
    guarded(|| {
        let d = unsafe { &(*state).inner }.diagnostics();
        unsafe {
            *out = MmDiagnostics {
                zeta: d.purity_deficit,
                mean_n: d.mean_n,
                variance_n: d.variance_n,
                mandel_q: d.mandel_q.unwrap_or(0.0),
                has_mandel_q: u8::from(d.mandel_q.is_some()),
            };
        }
        MmStatus::Ok
    })
}

/// Probability of finding exactly `n` photons. Indices at or beyond the
/// stored cutoff read as 0.
///
/// # Safety
///
/// `state` must be a live handle from this API and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mm_photon_probability(
    state: *const MmState,
    n: usize,
    out: *mut f64,
) -> MmStatus {
    if state.is_null() || out.is_null() {
        return MmStatus::NullArgument;
    }
    guarded(|| {
        let inner = unsafe { &(*state).inner };
        let p = if n < inner.dim() {
            inner.element(n, n).re
        } else {
            0.0
        };
        unsafe { *out = p };
        MmStatus::Ok
    })
}

/// Send `n_atoms` identically prepared atoms through the cavity, updating
/// the state in place.
///
/// The atom enters as atom_a |excited> + atom_b e^{i atom_phi} |ground>
/// with atom_a^2 + atom_b^2 = 1. `delta_over_lambda` and
/// `chi_over_lambda` are the two-photon detuning and the Stark-shift
/// slope in units of the coupling; `lambda_t` is the transit time in the
/// same units. On any error the state is left unchanged.
///
/// # Safety
///
/// `state` must be a live handle from this API, not aliased by a
/// concurrent call.
#[no_mangle]
pub unsafe extern "C" fn mm_apply_kicks(
    state: *mut MmState,
    atom_a: f64,
    atom_b: f64,
    atom_phi: f64,
    delta_over_lambda: f64,
    chi_over_lambda: f64,
    lambda_t: f64,
    n_atoms: usize,
) -> MmStatus {
    if state.is_null() {
        return MmStatus::NullArgument;
    }
    guarded(|| {
        let atom = match AtomPreparation::new(atom_a, atom_b, atom_phi) {
            Ok(a) => a,
            Err(e) => return status_of(&e),
        };
        let params = match InteractionParams::new(delta_over_lambda, chi_over_lambda, lambda_t) {
            Ok(p) => p,
            Err(e) => return status_of(&e),
        };
        let inner = unsafe { &mut (*state).inner };
        match apply_kicks(inner, &atom, &params, n_atoms) {
            Ok(next) => {
                *inner = next;
                MmStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Evaluate the s-parameterized quasiprobability of the state at the
/// phase-space point beta_re + i beta_im. `s` must lie in [-1, 1); -1 is
/// the Husimi function and 0 the Wigner function.
///
/// # Safety
///
/// `state` must be a live handle from this API and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mm_quasiprob_value(
    state: *const MmState,
    beta_re: f64,
    beta_im: f64,
    s: f64,
    out: *mut f64,
) -> MmStatus {
    if state.is_null() || out.is_null() {
        return MmStatus::NullArgument;
    }
    guarded(|| {
        let inner = unsafe { &(*state).inner };
        match quasiprob_value(inner, Complex64::new(beta_re, beta_im), s) {
            Ok(v) => {
                unsafe { *out = v };
                MmStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Static description of a status code. Unrecognized codes are reported
/// as such; the returned string is never null and lives for the lifetime
/// of the program.
#[no_mangle]
pub extern "C" fn mm_status_message(status: c_int) -> *const c_char {
    let msg: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null argument\0",
        2 => b"invalid parameter\0",
        3 => b"internal error\0",
        _ => b"unrecognized status code\0",
    };
    msg.as_ptr().cast()
}
