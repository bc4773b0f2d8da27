//! C interface. Every function returns a `KovtopStatus`; results go through
//! out-pointers. Strings are copied into caller buffers: the required size
//! (with the terminating NUL) is always written to `*needed`, and
//! `KOVTOP_BUFFER_TOO_SMALL` is returned when `cap` is short.
//!
//! Model and diagram handles are opaque and must be released with their
//! `_free` function. The message of the last failure on the calling thread
//! is available from `kovtop_last_error`.

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kovtop::bifurcation::{self, BifurcationDiagram};
use kovtop::code;
use kovtop::oracle::{self, Budget};
use kovtop::separating;
use kovtop::{Error, ModelParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KovtopStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    InvalidOrbit = 3,
    Domain = 4,
    OnSeparatingSet = 5,
    SingularEnergy = 6,
    EmptySurface = 7,
    NoMatch = 8,
    DataIntegrity = 9,
    Precondition = 10,
    BufferTooSmall = 11,
    OutOfRange = 12,
    Panic = 13,
}

/// Model parameters (kappa, c1).
pub struct KovtopModel(ModelParams);

/// Bifurcation diagram of one orbit.
pub struct KovtopDiagram(BifurcationDiagram);

/// Singular point of a diagram. `family` is a NUL-terminated tag such as
/// "y3"; `has_z` tells whether `z` is meaningful.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KovtopPoint {
    pub family: [c_char; 8],
    pub h: f64,
    pub k: f64,
    pub z: f64,
    pub has_z: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KovtopVerifySummary {
    pub passed: bool,
    pub missing: usize,
    pub spurious: usize,
    pub max_mismatch: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn status_of(e: &Error) -> KovtopStatus {
    match e {
        Error::InvalidParams(_) => KovtopStatus::InvalidParams,
        Error::InvalidOrbit { .. } => KovtopStatus::InvalidOrbit,
        Error::Domain(_) | Error::UnknownArc(_) => KovtopStatus::Domain,
        Error::OnSeparatingSet { .. } => KovtopStatus::OnSeparatingSet,
        Error::SingularH { .. } => KovtopStatus::SingularEnergy,
        Error::EmptyQ { .. } => KovtopStatus::EmptySurface,
        Error::NoMatch(_) => KovtopStatus::NoMatch,
        Error::DataIntegrity(_) => KovtopStatus::DataIntegrity,
        Error::RadiusTooSmall(_) | Error::Precondition(_) => KovtopStatus::Precondition,
    }
}

fn fail(status: KovtopStatus, msg: impl Into<String>) -> KovtopStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
    status
}

/// Runs `f`, recording errors and turning panics into `Panic`.
fn guard(f: impl FnOnce() -> Result<(), KovtopStatus>) -> KovtopStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KovtopStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(KovtopStatus::Panic, "internal panic"),
    }
}

fn lib<T>(r: kovtop::Result<T>) -> Result<T, KovtopStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, KovtopStatus> {
    p.as_ref().ok_or_else(|| fail(KovtopStatus::NullPointer, "null pointer argument"))
}

unsafe fn write_out<T>(p: *mut T, v: T) -> Result<(), KovtopStatus> {
    if p.is_null() {
        return Err(fail(KovtopStatus::NullPointer, "null output pointer"));
    }
    p.write(v);
    Ok(())
}

unsafe fn copy_str(s: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Result<(), KovtopStatus> {
    let n = s.len() + 1;
    write_out(needed, n)?;
    if cap < n {
        return Err(fail(KovtopStatus::BufferTooSmall, format!("buffer needs {n} bytes")));
    }
    if buf.is_null() {
        return Err(fail(KovtopStatus::NullPointer, "null buffer"));
    }
    ptr::copy_nonoverlapping(s.as_ptr().cast::<c_char>(), buf, s.len());
    buf.add(s.len()).write(0);
    Ok(())
}

/// Copies the last error message of this thread into `buf`.
///
/// # Safety
/// `buf` must hold `cap` writable bytes; `needed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kovtop_last_error(buf: *mut c_char, cap: usize, needed: *mut usize) -> KovtopStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    guard(|| copy_str(&msg, buf, cap, needed))
}

/// # Safety
/// `out` must be writable. The handle is freed with `kovtop_model_free`.
#[no_mangle]
pub unsafe extern "C" fn kovtop_model_new(kappa: f64, c1: f64, out: *mut *mut KovtopModel) -> KovtopStatus {
    guard(|| {
        let m = lib(ModelParams::new(kappa, c1))?;
        write_out(out, Box::into_raw(Box::new(KovtopModel(m))))
    })
}

/// # Safety
/// `model` must be null or come from `kovtop_model_new` and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn kovtop_model_free(model: *mut KovtopModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Subregion label of the orbit (a, b), e.g. "V.11" or "XII".
///
/// # Safety
/// `model` must be a live handle; `buf` must hold `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn kovtop_classify(
    model: *const KovtopModel,
    a: f64,
    b: f64,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> KovtopStatus {
    guard(|| {
        let m = &deref(model)?.0;
        let r = lib(separating::classify(a, b, m))?;
        copy_str(&r.region.to_string(), buf, cap, needed)
    })
}

/// Code of the orbit as space-separated families and graph numbers.
///
/// # Safety
/// As for `kovtop_classify`.
#[no_mangle]
pub unsafe extern "C" fn kovtop_code(
    model: *const KovtopModel,
    a: f64,
    b: f64,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> KovtopStatus {
    guard(|| {
        let m = &deref(model)?.0;
        let c = lib(code::code_for_orbit(a, b, m))?;
        let words: Vec<String> = c
            .entries()
            .iter()
            .map(|e| match e {
                code::CodeEntry::Family(f) => f.to_string(),
                code::CodeEntry::Graph(g) => g.to_string(),
            })
            .collect();
        copy_str(&words.join(" "), buf, cap, needed)
    })
}

/// Graph number and Liouville class of the isoenergy surface at h.
///
/// # Safety
/// `model` must be a live handle; `graph` and `class` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kovtop_isoenergy(
    model: *const KovtopModel,
    a: f64,
    b: f64,
    h: f64,
    graph: *mut u8,
    class: *mut u8,
) -> KovtopStatus {
    guard(|| {
        let m = &deref(model)?.0;
        let c = lib(code::isoenergy_class(a, b, h, m))?;
        write_out(graph, c.graph)?;
        write_out(class, c.liouville_class)
    })
}

/// # Safety
/// `model` must be a live handle; `out` must be writable. The diagram is
/// freed with `kovtop_diagram_free`.
#[no_mangle]
pub unsafe extern "C" fn kovtop_diagram_new(
    model: *const KovtopModel,
    a: f64,
    b: f64,
    out: *mut *mut KovtopDiagram,
) -> KovtopStatus {
    guard(|| {
        let m = &deref(model)?.0;
        let d = lib(bifurcation::diagram(a, b, m))?;
        write_out(out, Box::into_raw(Box::new(KovtopDiagram(d))))
    })
}

/// # Safety
/// `diagram` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kovtop_diagram_free(diagram: *mut KovtopDiagram) {
    if !diagram.is_null() {
        drop(Box::from_raw(diagram));
    }
}

/// # Safety
/// `diagram` must be a live handle; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kovtop_diagram_point_count(diagram: *const KovtopDiagram, count: *mut usize) -> KovtopStatus {
    guard(|| write_out(count, deref(diagram)?.0.singular_points.len()))
}

/// Singular point `index`, in increasing h.
///
/// # Safety
/// `diagram` must be a live handle; `point` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kovtop_diagram_point(
    diagram: *const KovtopDiagram,
    index: usize,
    point: *mut KovtopPoint,
) -> KovtopStatus {
    guard(|| {
        let d = &deref(diagram)?.0;
        let p = d
            .singular_points
            .get(index)
            .ok_or_else(|| fail(KovtopStatus::OutOfRange, format!("point {index} of {}", d.singular_points.len())))?;
        let mut family = [0 as c_char; 8];
        for (dst, src) in family.iter_mut().zip(p.family.to_string().bytes().take(7)) {
            *dst = src as c_char;
        }
        write_out(
            point,
            KovtopPoint {
                family,
                h: p.h,
                k: p.k,
                z: p.z.unwrap_or(f64::NAN),
                has_z: p.z.is_some(),
            },
        )
    })
}

/// Diagram as CSV text.
///
/// # Safety
/// `model` and `diagram` must be live handles; `buf` must hold `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn kovtop_diagram_csv(
    model: *const KovtopModel,
    diagram: *const KovtopDiagram,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> KovtopStatus {
    guard(|| {
        let m = &deref(model)?.0;
        let text = lib(kovtop::export::diagram_csv(&deref(diagram)?.0, m))?;
        copy_str(&text, buf, cap, needed)
    })
}

/// Compares the analytic singular points with critical values found
/// numerically on the orbit.
///
/// # Safety
/// `model` must be a live handle; `summary` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kovtop_verify(
    model: *const KovtopModel,
    a: f64,
    b: f64,
    restarts: usize,
    samples: usize,
    seed: u64,
    summary: *mut KovtopVerifySummary,
) -> KovtopStatus {
    guard(|| {
        let m = &deref(model)?.0;
        let budget = Budget { restarts, samples, seed };
        let r = lib(oracle::verify_diagram(a, b, budget, m))?;
        write_out(
            summary,
            KovtopVerifySummary {
                passed: r.passed,
                missing: r.missing.len(),
                spurious: r.spurious.len(),
                max_mismatch: r.max_mismatch,
            },
        )
    })
}
