//! C ABI over `dilab`.
//!
//! Every function returns an `int32_t` status. On failure the message is kept per
//! thread and can be read with [`dilab_last_error`]. Strings handed out by the
//! library are freed with [`dilab_string_free`], handles with their `_free`
//! function. Panics never cross the boundary; they come back as
//! [`DILAB_ERR_PANIC`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dilab::casework::{self, builtin_case, MinimizeOptions};
use dilab::digraph::{Digraph, DigraphError};
use dilab::foldcalc::Script;
use dilab::wgraph::{GraphError, WeightedGraph};

pub const DILAB_OK: i32 = 0;
pub const DILAB_ERR_NULL_POINTER: i32 = 1;
pub const DILAB_ERR_INVALID_UTF8: i32 = 2;
pub const DILAB_ERR_PARSE: i32 = 3;
pub const DILAB_ERR_DOMAIN: i32 = 4;
pub const DILAB_ERR_NOT_FOUND: i32 = 5;
pub const DILAB_ERR_COMPUTATION: i32 = 6;
pub const DILAB_ERR_PANIC: i32 = 7;

/// Opaque weighted graph.
pub struct DilabGraph {
    inner: WeightedGraph,
}

/// Opaque non-negative integer matrix read as a digraph.
pub struct DilabDigraph {
    inner: Digraph,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(i32, String);

fn set_last_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("nul bytes removed"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error(None);
            DILAB_OK
        }
        Ok(Err(Failure(code, msg))) => {
            set_last_error(Some(msg));
            code
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(Some(format!("panic: {msg}")));
            DILAB_ERR_PANIC
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(DILAB_ERR_NULL_POINTER, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(DILAB_ERR_INVALID_UTF8, format!("{what}: {e}")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

fn graph_failure(e: GraphError) -> Failure {
    let code = match e {
        GraphError::Json(_) | GraphError::BadLiteral(_) => DILAB_ERR_PARSE,
        GraphError::NoRoot | GraphError::Poly(_) => DILAB_ERR_COMPUTATION,
        _ => DILAB_ERR_DOMAIN,
    };
    Failure(code, e.to_string())
}

fn digraph_failure(e: DigraphError) -> Failure {
    let code = match e {
        DigraphError::Json(_) => DILAB_ERR_PARSE,
        DigraphError::NoPositiveRoot | DigraphError::Poly(_) | DigraphError::Graph(_) => DILAB_ERR_COMPUTATION,
        _ => DILAB_ERR_DOMAIN,
    };
    Failure(code, e.to_string())
}

fn case_failure(e: casework::CaseError) -> Failure {
    let code = match e {
        casework::CaseError::Parse(_) => DILAB_ERR_PARSE,
        casework::CaseError::Computation(_) | casework::CaseError::Infeasible(_) => DILAB_ERR_COMPUTATION,
        _ => DILAB_ERR_DOMAIN,
    };
    Failure(code, e.to_string())
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn dilab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn dilab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"vertices": [{"id", "weight"}], "edges": [[a, b]]}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out_graph` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilab_graph_from_json(json: *const c_char, out_graph: *mut *mut DilabGraph) -> i32 {
    guard(|| {
        let slot = out(out_graph, "out_graph")?;
        *slot = ptr::null_mut();
        let text = str_arg(json, "json")?;
        let inner = WeightedGraph::from_json(text).map_err(graph_failure)?;
        *slot = Box::into_raw(Box::new(DilabGraph { inner }));
        Ok(())
    })
}

/// # Safety
/// `graph` must be null or a handle from [`dilab_graph_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dilab_graph_free(graph: *mut DilabGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilab_graph_vertex_count(graph: *const DilabGraph, out_count: *mut usize) -> i32 {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        *out(out_count, "out_count")? = g.inner.vertex_count();
        Ok(())
    })
}

/// Reciprocal of the smallest positive root of the clique polynomial.
///
/// # Safety
/// `graph` must be a live handle and `out_rate` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilab_graph_growth_rate(graph: *const DilabGraph, out_rate: *mut f64) -> i32 {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        let slot = out(out_rate, "out_rate")?;
        *slot = g.inner.growth_rate().map_err(graph_failure)?;
        Ok(())
    })
}

/// The clique polynomial as text. Free the result with [`dilab_string_free`].
///
/// # Safety
/// `graph` must be a live handle and `out_text` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilab_graph_clique_polynomial(graph: *const DilabGraph, out_text: *mut *mut c_char) -> i32 {
    guard(|| {
        let slot = out(out_text, "out_text")?;
        *slot = ptr::null_mut();
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        let q = g.inner.clique_polynomial().map_err(graph_failure)?;
        *slot = string_out(q.to_string());
        Ok(())
    })
}

/// Parses `{"matrix": [[...]]}`, entry `(j, i)` counting arcs `i -> j`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out_digraph` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilab_digraph_from_json(json: *const c_char, out_digraph: *mut *mut DilabDigraph) -> i32 {
    guard(|| {
        let slot = out(out_digraph, "out_digraph")?;
        *slot = ptr::null_mut();
        let text = str_arg(json, "json")?;
        let inner = Digraph::from_json(text).map_err(digraph_failure)?;
        *slot = Box::into_raw(Box::new(DilabDigraph { inner }));
        Ok(())
    })
}

/// # Safety
/// `digraph` must be null or a handle from [`dilab_digraph_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dilab_digraph_free(digraph: *mut DilabDigraph) {
    if !digraph.is_null() {
        drop(Box::from_raw(digraph));
    }
}

/// # Safety
/// `digraph` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilab_digraph_curve_count(digraph: *const DilabDigraph, out_count: *mut usize) -> i32 {
    guard(|| {
        let d = digraph.as_ref().ok_or_else(|| null("digraph"))?;
        let slot = out(out_count, "out_count")?;
        *slot = d.inner.enumerate_curves().map_err(digraph_failure)?.len();
        Ok(())
    })
}

/// # Safety
/// `digraph` must be a live handle and `out_radius` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilab_digraph_spectral_radius(digraph: *const DilabDigraph, out_radius: *mut f64) -> i32 {
    guard(|| {
        let d = digraph.as_ref().ok_or_else(|| null("digraph"))?;
        let slot = out(out_radius, "out_radius")?;
        *slot = d.inner.spectral_radius().map_err(digraph_failure)?.radius;
        Ok(())
    })
}

/// Writes 1 to `out_equal` when the characteristic polynomial equals the
/// reciprocal of the curve-complex clique polynomial, 0 otherwise.
///
/// # Safety
/// `digraph` must be a live handle and `out_equal` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilab_digraph_verify_mcmullen(digraph: *const DilabDigraph, out_equal: *mut i32) -> i32 {
    guard(|| {
        let d = digraph.as_ref().ok_or_else(|| null("digraph"))?;
        let slot = out(out_equal, "out_equal")?;
        *slot = d.inner.verify_mcmullen().map_err(digraph_failure)?.equal as i32;
        Ok(())
    })
}

/// Largest real root of the δ̲ₙ polynomial, `n >= 3`.
///
/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilab_underline_delta(n: u32, out_value: *mut f64) -> i32 {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        *slot = casework::underline_delta(n).map_err(case_failure)?;
        Ok(())
    })
}

/// `min(14.5^(1/n), δ̲ₙ)`.
///
/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilab_lower_bound(n: u32, out_value: *mut f64) -> i32 {
    guard(|| {
        let slot = out(out_value, "out_value")?;
        *slot = casework::lower_bound(n).map_err(case_failure)?;
        Ok(())
    })
}

/// Minimizes a bundled case and returns the result as JSON. `n` only matters for
/// the δ̲ₙ case. Free the result with [`dilab_string_free`].
///
/// # Safety
/// `id` must be a nul-terminated string and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilab_minimize_builtin(id: *const c_char, n: u32, out_json: *mut *mut c_char) -> i32 {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        *slot = ptr::null_mut();
        let id = str_arg(id, "id")?;
        let case = builtin_case(id).ok_or_else(|| Failure(DILAB_ERR_NOT_FOUND, format!("no builtin case {id:?}")))?;
        let opts = MinimizeOptions {
            n,
            ..MinimizeOptions::default()
        };
        let res = casework::minimize(&case, &opts).map_err(case_failure)?;
        *slot = string_out(serde_json::to_string(&res).expect("result serializes"));
        Ok(())
    })
}

/// Runs a fold script and writes 1 to `out_ok` when the closed state has unit
/// determinant, role-preserving ζ and no parity violations.
///
/// # Safety
/// `json` must be a nul-terminated string and `out_ok` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dilab_fold_script_check(json: *const c_char, out_ok: *mut i32) -> i32 {
    guard(|| {
        let slot = out(out_ok, "out_ok")?;
        let text = str_arg(json, "json")?;
        let parse = |e: dilab::foldcalc::FoldError| Failure(DILAB_ERR_PARSE, e.to_string());
        let script = Script::from_json(text).map_err(parse)?;
        let run = script
            .run()
            .map_err(|e| Failure(DILAB_ERR_DOMAIN, e.to_string()))?;
        let st = &run.closed;
        *slot = (st.det_is_unit() && st.zeta_preserves_roles() && st.check_parity().is_empty()) as i32;
        Ok(())
    })
}
