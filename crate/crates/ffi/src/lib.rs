//! C ABI for `ftconsensus`.
//!
//! Objects are opaque handles created by `ftc_*_new`/`_from_json`/`_builtin`
//! and released with the matching `_free`. Every fallible function returns an
//! [`FtcStatus`]; on failure [`ftc_last_error`] describes what went wrong on
//! the calling thread. Strings handed out by the library are NUL-terminated
//! UTF-8 and must be released with [`ftc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ftconsensus::graph::WeightedDigraph;
use ftconsensus::scenario::{analyze_graph, bound_report, builtin_scenario, parse_scenario, Scenario};
use ftconsensus::spectral::algebraic_connectivity;
use ftconsensus::{simulate, ScenarioError, SimError, Trajectory};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FtcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    BufferTooSmall = 4,
    Diverged = 5,
    NotConverged = 6,
    Panic = 7,
}

/// Communication graph.
pub struct FtcGraph(WeightedDigraph);

/// Validated scenario.
pub struct FtcScenario(Scenario);

/// Result of [`ftc_simulate`].
pub struct FtcTrajectory(Trajectory);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: FtcStatus, msg: impl Into<String>) -> FtcStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> FtcStatus) -> FtcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(FtcStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, FtcStatus> {
    if p.is_null() {
        return Err(fail(FtcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(FtcStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> FtcStatus {
    *out = Box::into_raw(Box::new(value));
    FtcStatus::Ok
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> FtcStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            FtcStatus::Ok
        }
        Err(_) => fail(FtcStatus::InvalidArgument, "output contains a NUL byte"),
    }
}

unsafe fn copy_out(values: &[f64], out: *mut f64, len: usize) -> FtcStatus {
    if out.is_null() {
        return fail(FtcStatus::NullPointer, "output buffer is null");
    }
    if len < values.len() {
        return fail(
            FtcStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", values.len()),
        );
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    FtcStatus::Ok
}

fn scenario_status(e: &ScenarioError) -> FtcStatus {
    match e {
        ScenarioError::Sim(SimError::Diverged { .. }) => FtcStatus::Diverged,
        ScenarioError::Json { .. } => FtcStatus::Parse,
        _ => FtcStatus::InvalidArgument,
    }
}

macro_rules! check_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(FtcStatus::NullPointer, concat!(stringify!($p), " is null"));
        })+
    };
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ftc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ftc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a graph from a row-major `n x n` weight matrix; `weights[i*n+j] > 0`
/// means agent `i` hears agent `j`.
///
/// # Safety
/// `weights` must point to `n*n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ftc_graph_new(n: usize, weights: *const f64, out: *mut *mut FtcGraph) -> FtcStatus {
    guard(|| {
        check_null!(weights, out);
        let Some(len) = n.checked_mul(n) else {
            return fail(FtcStatus::InvalidArgument, "n*n overflows");
        };
        let w = std::slice::from_raw_parts(weights, len);
        let rows: Vec<Vec<f64>> = w.chunks(n.max(1)).map(<[f64]>::to_vec).collect();
        match WeightedDigraph::from_rows(&rows) {
            Ok(g) => put(out, FtcGraph(g)),
            Err(e) => fail(FtcStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Parses `{"n": .., "weights": [[..]]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ftc_graph_from_json(json: *const c_char, out: *mut *mut FtcGraph) -> FtcStatus {
    guard(|| {
        check_null!(out);
        let text = match str_arg(json, "json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match serde_json::from_str::<WeightedDigraph>(text) {
            Ok(g) => put(out, FtcGraph(g)),
            Err(e) => fail(FtcStatus::Parse, e.to_string()),
        }
    })
}

/// # Safety
/// `g` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ftc_graph_free(g: *mut FtcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Agent count, or 0 for a null handle.
///
/// # Safety
/// `g` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ftc_graph_n(g: *const FtcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Writes the Laplacian row-major into `out` (`len >= n*n`).
///
/// # Safety
/// `g` must be live; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ftc_graph_laplacian(g: *const FtcGraph, out: *mut f64, len: usize) -> FtcStatus {
    guard(|| {
        check_null!(g);
        let l = (*g).0.laplacian();
        let n = l.nrows();
        let flat: Vec<f64> = (0..n * n).map(|k| l[(k / n, k % n)]).collect();
        copy_out(&flat, out, len)
    })
}

/// `lambda_2` of the Laplacian of an undirected graph.
///
/// # Safety
/// `g` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ftc_graph_algebraic_connectivity(g: *const FtcGraph, out: *mut f64) -> FtcStatus {
    guard(|| {
        check_null!(g, out);
        match algebraic_connectivity(&(*g).0) {
            Ok(v) => {
                *out = v;
                FtcStatus::Ok
            }
            Err(e) => fail(FtcStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Positive `w` with `w^T L = 0` and `sum(w) = 1`; strongly connected graphs
/// only.
///
/// # Safety
/// `g` must be live; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ftc_graph_left_null_vector(g: *const FtcGraph, out: *mut f64, len: usize) -> FtcStatus {
    guard(|| {
        check_null!(g);
        match (*g).0.left_null_vector() {
            Ok(w) => copy_out(w.as_slice(), out, len),
            Err(e) => fail(FtcStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Structural and spectral report as JSON.
///
/// # Safety
/// `g` must be live; `out` must be writable. Free the result with
/// [`ftc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ftc_graph_analyze_json(g: *const FtcGraph, out: *mut *mut c_char) -> FtcStatus {
    guard(|| {
        check_null!(g, out);
        match analyze_graph(&(*g).0) {
            Ok(r) => put_string(out, serde_json::to_string(&r).expect("report serializes")),
            Err(e) => fail(scenario_status(&e), e.to_string()),
        }
    })
}

/// Parses and validates a scenario document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ftc_scenario_from_json(json: *const c_char, out: *mut *mut FtcScenario) -> FtcStatus {
    guard(|| {
        check_null!(out);
        let text = match str_arg(json, "json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_scenario(text) {
            Ok(s) => put(out, FtcScenario(s)),
            Err(e) => fail(scenario_status(&e), e.to_string()),
        }
    })
}

/// Looks up a built-in scenario by name.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ftc_scenario_builtin(name: *const c_char, out: *mut *mut FtcScenario) -> FtcStatus {
    guard(|| {
        check_null!(out);
        let name = match str_arg(name, "name") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match builtin_scenario(name) {
            Ok(s) => put(out, FtcScenario(s)),
            Err(e) => fail(FtcStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ftc_scenario_free(s: *mut FtcScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Scenario document as JSON.
///
/// # Safety
/// `s` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ftc_scenario_to_json(s: *const FtcScenario, out: *mut *mut c_char) -> FtcStatus {
    guard(|| {
        check_null!(s, out);
        put_string(out, (*s).0.to_json())
    })
}

/// Convergence-time bound report as JSON.
///
/// # Safety
/// `s` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ftc_scenario_bound_json(s: *const FtcScenario, out: *mut *mut c_char) -> FtcStatus {
    guard(|| {
        check_null!(s, out);
        match bound_report(&(*s).0) {
            Ok(r) => put_string(out, serde_json::to_string(&r).expect("report serializes")),
            Err(e) => fail(scenario_status(&e), e.to_string()),
        }
    })
}

/// Integrates a scenario with its own integrator settings.
///
/// # Safety
/// `s` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ftc_simulate(s: *const FtcScenario, out: *mut *mut FtcTrajectory) -> FtcStatus {
    guard(|| {
        check_null!(s, out);
        let sc = &(*s).0;
        match simulate(&sc.schedule, &sc.protocol, &sc.x0, &sc.integrator) {
            Ok(t) => put(out, FtcTrajectory(t)),
            Err(e) => {
                let status = match e {
                    SimError::Diverged { .. } => FtcStatus::Diverged,
                    _ => FtcStatus::InvalidArgument,
                };
                fail(status, e.to_string())
            }
        }
    })
}

/// # Safety
/// `t` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ftc_trajectory_free(t: *mut FtcTrajectory) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of recorded samples, or 0 for a null handle.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ftc_trajectory_len(t: *const FtcTrajectory) -> usize {
    t.as_ref().map_or(0, |t| t.0.times.len())
}

/// Agent count, or 0 for a null handle.
///
/// # Safety
/// `t` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ftc_trajectory_n(t: *const FtcTrajectory) -> usize {
    t.as_ref().map_or(0, |t| t.0.n())
}

/// Sample times (`len >= ftc_trajectory_len`).
///
/// # Safety
/// `t` must be live; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ftc_trajectory_times(t: *const FtcTrajectory, out: *mut f64, len: usize) -> FtcStatus {
    guard(|| {
        check_null!(t);
        copy_out(&(*t).0.times, out, len)
    })
}

/// State at sample `k` (`len >= ftc_trajectory_n`).
///
/// # Safety
/// `t` must be live; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ftc_trajectory_state(
    t: *const FtcTrajectory,
    k: usize,
    out: *mut f64,
    len: usize,
) -> FtcStatus {
    guard(|| {
        check_null!(t);
        let traj = &(*t).0;
        match traj.states.get(k) {
            Some(x) => copy_out(x, out, len),
            None => fail(FtcStatus::InvalidArgument, format!("sample {k} out of range")),
        }
    })
}

/// Detected convergence time; `FtcStatus::NotConverged` when the run ended
/// above the tolerance.
///
/// # Safety
/// `t` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ftc_trajectory_convergence_time(t: *const FtcTrajectory, out: *mut f64) -> FtcStatus {
    guard(|| {
        check_null!(t, out);
        match (*t).0.convergence_time {
            Some(v) => {
                *out = v;
                FtcStatus::Ok
            }
            None => fail(
                FtcStatus::NotConverged,
                "disagreement stayed above consensus_tol up to t_max",
            ),
        }
    })
}

/// Trajectory as CSV (`t,x_1..x_n,disagreement,conserved`).
///
/// # Safety
/// `t` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ftc_trajectory_csv(t: *const FtcTrajectory, out: *mut *mut c_char) -> FtcStatus {
    guard(|| {
        check_null!(t, out);
        put_string(out, (*t).0.to_csv())
    })
}

/// Run summary as JSON.
///
/// # Safety
/// `t` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ftc_trajectory_diagnostics_json(t: *const FtcTrajectory, out: *mut *mut c_char) -> FtcStatus {
    guard(|| {
        check_null!(t, out);
        put_string(
            out,
            serde_json::to_string(&(*t).0.diagnostics()).expect("diagnostics serialize"),
        )
    })
}
