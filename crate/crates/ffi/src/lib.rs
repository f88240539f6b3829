//! C ABI for the drproj feasibility toolkit.
//!
//! Handles are opaque; every function returns a status code and reports
//! detail through `drproj_last_error_message`. Callers own returned handles
//! and must release them with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use drproj::analysis::{classify_fixed_point, radius_certified, radius_sampled, FixStatus};
use drproj::engine::{dr_run, map_run, SelectionPolicy, StopReason, StoppingConfig, Trajectory};
use drproj::error::Error;
use drproj::point::Point;
use drproj::scenario::{builtin_scenario, parse_scenario, BuiltProblem, BuiltinParams, Scenario};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DrStatus {
    Ok = 0,
    NullArgument = 1,
    ParseError = 2,
    NumericError = 3,
    InvalidArgument = 4,
    Utf8Error = 5,
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> DrStatus {
    match err {
        Error::Scenario(_) | Error::Trace(_) => DrStatus::ParseError,
        Error::DimensionMismatch { .. } | Error::InvalidConfig(_) | Error::InvalidPiece(_) => {
            DrStatus::InvalidArgument
        }
        _ => DrStatus::NumericError,
    }
}

fn guard(f: impl FnOnce() -> DrStatus + std::panic::UnwindSafe) -> DrStatus {
    match catch_unwind(f) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            DrStatus::Panic
        }
    }
}

/// An opaque feasibility problem: the pair of sets a scenario describes.
pub struct DrProblem {
    scenario: Scenario,
    problem: BuiltProblem,
}

/// An opaque recorded trajectory.
pub struct DrTrajectory {
    trajectory: Trajectory,
    dim: usize,
}

/// Options for a run. `algorithm`: 0 = Douglas-Rachford, 1 = alternating
/// projections. `policy`: 0 = lowest index, 1 = nearest, 2 = seeded random.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct DrRunOptions {
    pub algorithm: c_int,
    pub policy: c_int,
    pub seed: u64,
    pub max_iter: usize,
    pub tol_step: c_double,
    pub confirm_window: usize,
}

/// Diagnostics snapshot of a finished run. `cycle_period` is 0 when no cycle
/// was detected; `converged` and `steps_vanish` are 0/1 flags.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct DrDiagnostics {
    pub converged: c_int,
    pub cycle_period: usize,
    pub steps_vanish: c_int,
    pub tail_diameter: c_double,
    pub feasibility_gap: c_double,
}

/// Which point of a step record to read.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DrPointKind {
    Iterate = 0,
    Shadow = 1,
    ReflectedShadow = 2,
    NextIterate = 3,
}

/// Classification outcomes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DrFixStatus {
    NotFixed = 0,
    Fixed = 1,
    StrongFixed = 2,
}

unsafe fn cstr<'a>(ptr: *const c_char) -> Result<&'a str, DrStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(DrStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        DrStatus::Utf8Error
    })
}

unsafe fn point_from(ptr: *const c_double, len: usize) -> Result<Point, DrStatus> {
    if ptr.is_null() {
        set_error("null coordinate buffer");
        return Err(DrStatus::NullArgument);
    }
    let coords = std::slice::from_raw_parts(ptr, len).to_vec();
    Point::new(coords).map_err(|e| {
        set_error(&e.to_string());
        DrStatus::InvalidArgument
    })
}

fn build_problem(scenario: Scenario, out: *mut *mut DrProblem) -> DrStatus {
    match scenario.build() {
        Ok(problem) => {
            let handle = Box::new(DrProblem { scenario, problem });
            unsafe { *out = Box::into_raw(handle) };
            DrStatus::Ok
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Parse a scenario JSON document into a problem handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn drproj_problem_from_json(
    json: *const c_char,
    out: *mut *mut DrProblem,
) -> DrStatus {
    guard(AssertUnwindSafe(|| {
        if out.is_null() {
            set_error("null output pointer");
            return DrStatus::NullArgument;
        }
        let text = match cstr(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_scenario(text) {
            Ok(scenario) => build_problem(scenario, out),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    }))
}

/// Construct a built-in scenario by name with default parameters.
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn drproj_problem_builtin(
    name: *const c_char,
    out: *mut *mut DrProblem,
) -> DrStatus {
    guard(AssertUnwindSafe(|| {
        if out.is_null() {
            set_error("null output pointer");
            return DrStatus::NullArgument;
        }
        let name = match cstr(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match builtin_scenario(name, &BuiltinParams::default()) {
            Ok(scenario) => build_problem(scenario, out),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    }))
}

/// Release a problem handle.
///
/// # Safety
/// `problem` must come from a `drproj_problem_*` constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn drproj_problem_free(problem: *mut DrProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Ambient dimension of the iteration space (0 on null input).
///
/// # Safety
/// `problem` must be a live problem handle or null.
#[no_mangle]
pub unsafe extern "C" fn drproj_problem_dimension(problem: *const DrProblem) -> usize {
    if problem.is_null() {
        return 0;
    }
    let (a, _) = (*problem).problem.sets();
    a.dim()
}

fn policy_from(options: &DrRunOptions) -> Result<SelectionPolicy, DrStatus> {
    Ok(match options.policy {
        0 => SelectionPolicy::LowestIndex,
        1 => SelectionPolicy::NearestThenLowestIndex,
        2 => SelectionPolicy::SeededRandom(options.seed),
        other => {
            set_error(&format!("unknown policy code {other}"));
            return Err(DrStatus::InvalidArgument);
        }
    })
}

/// Run the configured iteration from `x0` and return a trajectory handle.
///
/// # Safety
/// All pointers must be valid; `x0` must point to `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn drproj_run(
    problem: *const DrProblem,
    x0: *const c_double,
    dim: usize,
    options: *const DrRunOptions,
    out: *mut *mut DrTrajectory,
) -> DrStatus {
    guard(AssertUnwindSafe(|| {
        if problem.is_null() || options.is_null() || out.is_null() {
            set_error("null argument");
            return DrStatus::NullArgument;
        }
        let handle = &*problem;
        let options = &*options;
        let x0 = match point_from(x0, dim) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let policy = match policy_from(options) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let config = StoppingConfig {
            max_iter: options.max_iter.max(1),
            tol_step: if options.tol_step > 0.0 {
                options.tol_step
            } else {
                StoppingConfig::default().tol_step
            },
            confirm_window: options.confirm_window.max(1),
            ..StoppingConfig::default()
        };
        let (a, b) = handle.problem.sets();
        let result = match options.algorithm {
            0 => dr_run(a, b, &x0, &config, &policy),
            1 => map_run(a, b, &x0, &config, &policy),
            other => {
                set_error(&format!("unknown algorithm code {other}"));
                return DrStatus::InvalidArgument;
            }
        };
        match result {
            Ok(trajectory) => {
                let dim = a.dim();
                *out = Box::into_raw(Box::new(DrTrajectory { trajectory, dim }));
                DrStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    }))
}

/// Release a trajectory handle.
///
/// # Safety
/// `trajectory` must come from `drproj_run`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn drproj_trajectory_free(trajectory: *mut DrTrajectory) {
    if !trajectory.is_null() {
        drop(Box::from_raw(trajectory));
    }
}

/// Number of recorded steps (0 on null input).
///
/// # Safety
/// `trajectory` must be a live trajectory handle or null.
#[no_mangle]
pub unsafe extern "C" fn drproj_trajectory_len(trajectory: *const DrTrajectory) -> usize {
    if trajectory.is_null() {
        0
    } else {
        (*trajectory).trajectory.records.len()
    }
}

/// Stop reason: 0 converged, 1 iteration cap, 2 cycle detected, -1 on null.
///
/// # Safety
/// `trajectory` must be a live trajectory handle or null.
#[no_mangle]
pub unsafe extern "C" fn drproj_trajectory_stop_reason(
    trajectory: *const DrTrajectory,
) -> c_int {
    if trajectory.is_null() {
        return -1;
    }
    match (*trajectory).trajectory.stop_reason {
        StopReason::Converged => 0,
        StopReason::MaxIter => 1,
        StopReason::CycleDetected { .. } => 2,
    }
}

/// Copy diagnostics of a finished run.
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn drproj_trajectory_diagnostics(
    trajectory: *const DrTrajectory,
    out: *mut DrDiagnostics,
) -> DrStatus {
    if trajectory.is_null() || out.is_null() {
        set_error("null argument");
        return DrStatus::NullArgument;
    }
    let d = &(*trajectory).trajectory.diagnostics;
    *out = DrDiagnostics {
        converged: d.converged as c_int,
        cycle_period: d.cycle_period.unwrap_or(0),
        steps_vanish: d.steps_vanish as c_int,
        tail_diameter: d.tail_diameter,
        feasibility_gap: d.feasibility_gap,
    };
    DrStatus::Ok
}

/// Copy one point of a step record into `buf` (which holds `len >= dim`
/// doubles).
///
/// # Safety
/// `trajectory` must be live and `buf` must point to at least `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn drproj_trajectory_point(
    trajectory: *const DrTrajectory,
    index: usize,
    kind: DrPointKind,
    buf: *mut c_double,
    len: usize,
) -> DrStatus {
    guard(AssertUnwindSafe(|| {
        if trajectory.is_null() || buf.is_null() {
            set_error("null argument");
            return DrStatus::NullArgument;
        }
        let handle = &*trajectory;
        if len < handle.dim {
            set_error(&format!("buffer holds {len} doubles, need {}", handle.dim));
            return DrStatus::InvalidArgument;
        }
        let Some(rec) = handle.trajectory.records.get(index) else {
            set_error(&format!("step index {index} out of range"));
            return DrStatus::InvalidArgument;
        };
        let point = match kind {
            DrPointKind::Iterate => &rec.x,
            DrPointKind::Shadow => &rec.a,
            DrPointKind::ReflectedShadow => &rec.b,
            DrPointKind::NextIterate => &rec.x_next,
        };
        ptr::copy_nonoverlapping(point.coords().as_ptr(), buf, handle.dim);
        DrStatus::Ok
    }))
}

/// Active pair chosen at a step.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn drproj_trajectory_pair(
    trajectory: *const DrTrajectory,
    index: usize,
    i_out: *mut usize,
    j_out: *mut usize,
) -> DrStatus {
    if trajectory.is_null() || i_out.is_null() || j_out.is_null() {
        set_error("null argument");
        return DrStatus::NullArgument;
    }
    let handle = &*trajectory;
    let Some(rec) = handle.trajectory.records.get(index) else {
        set_error(&format!("step index {index} out of range"));
        return DrStatus::InvalidArgument;
    };
    *i_out = rec.pair.0;
    *j_out = rec.pair.1;
    DrStatus::Ok
}

/// Classify a point under the step operator; also reports how many distinct
/// image points the operator has there.
///
/// # Safety
/// All pointers must be valid; `point` must hold `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn drproj_classify(
    problem: *const DrProblem,
    point: *const c_double,
    dim: usize,
    status_out: *mut DrFixStatus,
    image_size_out: *mut usize,
) -> DrStatus {
    guard(AssertUnwindSafe(|| {
        if problem.is_null() || status_out.is_null() {
            set_error("null argument");
            return DrStatus::NullArgument;
        }
        let x = match point_from(point, dim) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let (a, b) = (*problem).problem.sets();
        match classify_fixed_point(a, b, &x) {
            Ok(c) => {
                *status_out = match c.status {
                    FixStatus::NotFixed => DrFixStatus::NotFixed,
                    FixStatus::Fixed => DrFixStatus::Fixed,
                    FixStatus::StrongFixed => DrFixStatus::StrongFixed,
                };
                if !image_size_out.is_null() {
                    *image_size_out = c.image.len();
                }
                DrStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    }))
}

/// Certified lower bound on the radius of attraction (may be infinite).
/// Fails unless the point is a strong fixed point.
///
/// # Safety
/// All pointers must be valid; `point` must hold `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn drproj_radius_certified(
    problem: *const DrProblem,
    point: *const c_double,
    dim: usize,
    out: *mut c_double,
) -> DrStatus {
    guard(AssertUnwindSafe(|| {
        if problem.is_null() || out.is_null() {
            set_error("null argument");
            return DrStatus::NullArgument;
        }
        let x = match point_from(point, dim) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let (a, b) = (*problem).problem.sets();
        match radius_certified(a, b, &x) {
            Ok(r) => {
                *out = r;
                DrStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    }))
}

/// Sampled (probabilistic, one-sided) radius estimate.
///
/// # Safety
/// All pointers must be valid; `point` must hold `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn drproj_radius_sampled(
    problem: *const DrProblem,
    point: *const c_double,
    dim: usize,
    eps_hi: c_double,
    samples: usize,
    bisection_steps: usize,
    seed: u64,
    out: *mut c_double,
) -> DrStatus {
    guard(AssertUnwindSafe(|| {
        if problem.is_null() || out.is_null() {
            set_error("null argument");
            return DrStatus::NullArgument;
        }
        let x = match point_from(point, dim) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let (a, b) = (*problem).problem.sets();
        match radius_sampled(a, b, &x, eps_hi, samples, bisection_steps, seed) {
            Ok(est) => {
                *out = est.sampled;
                DrStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    }))
}

/// Name of the scenario backing a problem handle. Borrowed thread-local
/// pointer, valid until the next call to this function on the same thread.
///
/// # Safety
/// `problem` must be a live problem handle or null.
#[no_mangle]
pub unsafe extern "C" fn drproj_problem_name(problem: *const DrProblem) -> *const c_char {
    if problem.is_null() {
        return ptr::null();
    }
    thread_local! {
        static NAME: RefCell<CString> = RefCell::new(CString::new("").unwrap());
    }
    let name = (*problem).scenario.name.replace('\0', " ");
    NAME.with(|slot| {
        *slot.borrow_mut() = CString::new(name).unwrap_or_default();
        slot.borrow().as_ptr()
    })
}

/// Message describing the most recent error on this thread. Borrowed
/// pointer, valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn drproj_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Crate version as a static string.
#[no_mangle]
pub extern "C" fn drproj_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
