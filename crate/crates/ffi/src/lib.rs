//! C ABI for gsp4-core.
//!
//! Every fallible function returns a [`Gsp4Status`]. Outputs go through
//! pointer arguments and are only written on success. Handles are opaque
//! and must be released with their `_free` function. Strings returned to the
//! caller are NUL-terminated UTF-8 and must be released with
//! [`gsp4_string_free`]. The message of the most recent failure on the
//! calling thread is available from [`gsp4_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gsp4_core::adjacency::{build_graph, WeightGraph};
use gsp4_core::admissible::adm_set;
use gsp4_core::cli::{default_floors, graph_to_dot};
use gsp4_core::gsp4_base::{self_check, Weight};
use gsp4_core::local_model::matrix::EntryJson;
use gsp4_core::local_model::{shape_of, ExactField, PolyMat};
use gsp4_core::serre_weights::{w_question, PresentationKind, TamePresentation};
use gsp4_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gsp4Status {
    Ok = 0,
    NullPointer = 1,
    Validation = 2,
    Invariant = 3,
    InvalidUtf8 = 4,
    Panic = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> Gsp4Status {
    let status = if e.is_validation() { Gsp4Status::Validation } else { Gsp4Status::Invariant };
    set_error(e.to_string());
    status
}

/// Runs `f`, converting panics into [`Gsp4Status::Panic`].
fn guard(f: impl FnOnce() -> Gsp4Status) -> Gsp4Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".into());
            Gsp4Status::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Gsp4Status> {
    if s.is_null() {
        set_error("null string argument".into());
        return Err(Gsp4Status::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        Gsp4Status::InvalidUtf8
    })
}

fn give_string(s: String, out: *mut *mut c_char) -> Gsp4Status {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            Gsp4Status::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte".into());
            Gsp4Status::Invariant
        }
    }
}

/// The message of the last failure on this thread, or NULL. Owned by the library;
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gsp4_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gsp4_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs the root-datum self check.
#[no_mangle]
pub extern "C" fn gsp4_selfcheck() -> Gsp4Status {
    guard(|| match self_check() {
        Ok(()) => Gsp4Status::Ok,
        Err(e) => fail(e),
    })
}

/// |Adm(λ)| for dominant λ = (a,b;c).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gsp4_adm_count(a: i64, b: i64, c: i64, out: *mut usize) -> Gsp4Status {
    if out.is_null() {
        return Gsp4Status::NullPointer;
    }
    guard(|| match adm_set(Weight::new(a, b, c)) {
        Ok(s) => {
            *out = s.elements.len();
            Gsp4Status::Ok
        }
        Err(e) => fail(e),
    })
}

/// A validated tame presentation.
pub struct Gsp4Presentation(TamePresentation);

/// Parses a presentation from JSON of the form {"p":37,"s":["s1"],"mu":[[16,8,0]]}.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gsp4_presentation_from_json(
    json: *const c_char,
    out: *mut *mut Gsp4Presentation,
) -> Gsp4Status {
    if out.is_null() {
        return Gsp4Status::NullPointer;
    }
    let text = match read_str(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    guard(|| {
        let mut t: TamePresentation = match serde_json::from_str(text) {
            Ok(t) => t,
            Err(e) => return fail(Error::Validation(format!("malformed presentation: {e}"))),
        };
        t.kind = PresentationKind::Parameter;
        if let Err(e) = t.validate() {
            return fail(e);
        }
        *out = Box::into_raw(Box::new(Gsp4Presentation(t)));
        Gsp4Status::Ok
    })
}

/// # Safety
/// `h` must come from [`gsp4_presentation_from_json`] and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn gsp4_presentation_free(h: *mut Gsp4Presentation) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Depth of the presentation's μ in the lowest alcove.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gsp4_presentation_depth(h: *const Gsp4Presentation, out: *mut i64) -> Gsp4Status {
    if h.is_null() || out.is_null() {
        return Gsp4Status::NullPointer;
    }
    *out = (*h).0.depth();
    Gsp4Status::Ok
}

/// |W?(ρ̄)|.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gsp4_weight_count(h: *const Gsp4Presentation, out: *mut usize) -> Gsp4Status {
    if h.is_null() || out.is_null() {
        return Gsp4Status::NullPointer;
    }
    guard(|| match w_question(&(*h).0) {
        Ok(w) => {
            *out = w.len();
            Gsp4Status::Ok
        }
        Err(e) => fail(e),
    })
}

/// The adjacency graph on W?(ρ̄).
pub struct Gsp4Graph(WeightGraph);

/// Builds the graph with the default depth floors for the presentation's p.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gsp4_graph_build(h: *const Gsp4Presentation, out: *mut *mut Gsp4Graph) -> Gsp4Status {
    if h.is_null() || out.is_null() {
        return Gsp4Status::NullPointer;
    }
    guard(|| {
        let t = &(*h).0;
        match build_graph(t, default_floors(t.p)) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(Gsp4Graph(g)));
                Gsp4Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `g` must come from [`gsp4_graph_build`] and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn gsp4_graph_free(g: *mut Gsp4Graph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex and edge counts, and whether the graph is connected.
///
/// # Safety
/// `g` must be a live handle; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gsp4_graph_stats(
    g: *const Gsp4Graph,
    vertices: *mut usize,
    edges: *mut usize,
    connected: *mut bool,
) -> Gsp4Status {
    if g.is_null() || vertices.is_null() || edges.is_null() || connected.is_null() {
        return Gsp4Status::NullPointer;
    }
    let g = &(*g).0;
    *vertices = g.vertices.len();
    *edges = g.edges.len();
    *connected = g.is_connected();
    Gsp4Status::Ok
}

/// The graph in Graphviz DOT form. Free the result with [`gsp4_string_free`].
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gsp4_graph_dot(g: *const Gsp4Graph, out: *mut *mut c_char) -> Gsp4Status {
    if g.is_null() || out.is_null() {
        return Gsp4Status::NullPointer;
    }
    guard(|| give_string(graph_to_dot(&(*g).0), out))
}

/// The Iwahori shape of a 4×4 matrix over F_q, given as JSON rows of
/// {"coeffs": {exponent: "num/den"}}. Writes the shape as text, e.g. "t(1,0;1)·s2s1s2∨".
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gsp4_shape_of(json: *const c_char, q: u64, out: *mut *mut c_char) -> Gsp4Status {
    if out.is_null() {
        return Gsp4Status::NullPointer;
    }
    let text = match read_str(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    guard(|| {
        let rows: Vec<Vec<EntryJson>> = match serde_json::from_str(text) {
            Ok(r) => r,
            Err(e) => return fail(Error::Validation(format!("malformed matrix: {e}"))),
        };
        let shape = ExactField::prime(q).and_then(|f| PolyMat::from_json(f, &rows)).and_then(|a| shape_of(&a));
        match shape {
            Ok(z) => give_string(z.to_string(), out),
            Err(e) => fail(e),
        }
    })
}
