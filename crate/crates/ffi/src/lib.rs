//! C ABI for the flagq library.
//!
//! All objects are opaque handles created and destroyed by this interface;
//! every fallible call returns a [`FlagqStatus`] and leaves a description
//! of the last failure retrievable via [`flagq_last_error_message`].
//! Strings returned by `*_json` functions are owned by the caller and must
//! be released with [`flagq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use flagq::digraph::{Digraph, LoadOptions};
use flagq::flagcomplex::DirectedFlagComplex;
use flagq::paths::longest_simplicial_path;
use flagq::qclassic::{structure_vectors, SimplicialComplexView};
use flagq::qdirected::{condense, summarize, ConnectionSpec, ConnectivityDigraph};
use flagq::topology::{betti_z2, order_complex, poset_height};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlagqStatus {
    Ok = 0,
    NullArgument = 1,
    Io = 2,
    Parse = 3,
    GuardExceeded = 4,
    Infeasible = 5,
    InvalidArgument = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guarded<F: FnOnce() -> FlagqStatus>(f: F) -> FlagqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic".to_string());
            FlagqStatus::Panic
        }
    }
}

/// An immutable digraph handle.
pub struct FlagqDigraph(Digraph);

/// An immutable directed flag complex handle.
pub struct FlagqComplex(DirectedFlagComplex);

/// A built (q,i,j)-connectivity digraph handle.
pub struct FlagqConnectivity(ConnectivityDigraph);

/// Returns the message of the most recent failure on this thread, or NULL.
/// The caller owns the string and must free it with `flagq_string_free`.
#[no_mangle]
pub extern "C" fn flagq_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by a flagq function and not
/// yet freed, or NULL.
#[no_mangle]
pub unsafe extern "C" fn flagq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a digraph from an edge-list file (one "src dst" per line, `#`
/// comments).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn flagq_digraph_from_edge_list_path(
    path: *const c_char,
    out: *mut *mut FlagqDigraph,
) -> FlagqStatus {
    if path.is_null() || out.is_null() {
        return FlagqStatus::NullArgument;
    }
    guarded(|| {
        let path = match CStr::from_ptr(path).to_str() {
            Ok(p) => p,
            Err(_) => {
                set_error("path is not valid UTF-8".into());
                return FlagqStatus::InvalidArgument;
            }
        };
        let file = match std::fs::File::open(path) {
            Ok(f) => f,
            Err(e) => {
                set_error(format!("{path}: {e}"));
                return FlagqStatus::Io;
            }
        };
        match Digraph::from_edge_list(std::io::BufReader::new(file), &LoadOptions::default()) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(FlagqDigraph(g)));
                FlagqStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                FlagqStatus::Parse
            }
        }
    })
}

/// Builds a digraph from parallel edge arrays. Self-loops and out-of-range
/// endpoints are rejected.
///
/// # Safety
/// `sources` and `targets` must point to `num_edges` readable elements;
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn flagq_digraph_from_edges(
    num_vertices: u32,
    sources: *const u32,
    targets: *const u32,
    num_edges: usize,
    out: *mut *mut FlagqDigraph,
) -> FlagqStatus {
    if out.is_null() || (num_edges > 0 && (sources.is_null() || targets.is_null())) {
        return FlagqStatus::NullArgument;
    }
    guarded(|| {
        let src = std::slice::from_raw_parts(sources, num_edges);
        let dst = std::slice::from_raw_parts(targets, num_edges);
        for k in 0..num_edges {
            if src[k] == dst[k] {
                set_error(format!("self-loop ({},{})", src[k], dst[k]));
                return FlagqStatus::Parse;
            }
            if src[k] >= num_vertices || dst[k] >= num_vertices {
                set_error(format!("edge ({},{}) out of range", src[k], dst[k]));
                return FlagqStatus::Parse;
            }
        }
        let edges: Vec<(u32, u32)> = src.iter().copied().zip(dst.iter().copied()).collect();
        let g = Digraph::from_edges(num_vertices as usize, &edges);
        *out = Box::into_raw(Box::new(FlagqDigraph(g)));
        FlagqStatus::Ok
    })
}

/// # Safety
/// `g` must be a live digraph handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn flagq_digraph_free(g: *mut FlagqDigraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live digraph handle.
#[no_mangle]
pub unsafe extern "C" fn flagq_digraph_num_vertices(g: *const FlagqDigraph) -> u64 {
    if g.is_null() {
        return 0;
    }
    (*g).0.num_vertices() as u64
}

/// # Safety
/// `g` must be a live digraph handle.
#[no_mangle]
pub unsafe extern "C" fn flagq_digraph_num_edges(g: *const FlagqDigraph) -> u64 {
    if g.is_null() {
        return 0;
    }
    (*g).0.num_edges() as u64
}

/// Enumerates the directed flag complex. `max_dim < 0` means unbounded;
/// `ceiling` caps the per-dimension simplex count.
///
/// # Safety
/// `g` must be a live digraph handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn flagq_complex_build(
    g: *const FlagqDigraph,
    max_dim: i32,
    ceiling: u64,
    out: *mut *mut FlagqComplex,
) -> FlagqStatus {
    if g.is_null() || out.is_null() {
        return FlagqStatus::NullArgument;
    }
    guarded(|| {
        let cap = if max_dim < 0 { None } else { Some(max_dim as usize) };
        match DirectedFlagComplex::build(&(*g).0, cap, ceiling) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(FlagqComplex(c)));
                FlagqStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                FlagqStatus::GuardExceeded
            }
        }
    })
}

/// # Safety
/// `c` must be a live complex handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn flagq_complex_free(c: *mut FlagqComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Dimension of the complex; -1 when empty.
///
/// # Safety
/// `c` must be a live complex handle.
#[no_mangle]
pub unsafe extern "C" fn flagq_complex_dim(c: *const FlagqComplex) -> i64 {
    if c.is_null() || (*c).0.is_empty() {
        return -1;
    }
    (*c).0.dim() as i64
}

/// Copies per-dimension simplex counts into `buf` (up to `cap` entries)
/// and stores the true length in `written`.
///
/// # Safety
/// `buf` must point to `cap` writable elements; `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn flagq_complex_counts(
    c: *const FlagqComplex,
    buf: *mut u64,
    cap: usize,
    written: *mut usize,
) -> FlagqStatus {
    if c.is_null() || written.is_null() || (cap > 0 && buf.is_null()) {
        return FlagqStatus::NullArgument;
    }
    guarded(|| {
        let counts = (*c).0.simplex_counts();
        *written = counts.len();
        let n = counts.len().min(cap);
        let slice = std::slice::from_raw_parts_mut(buf, n);
        for (dst, &src) in slice.iter_mut().zip(&counts) {
            *dst = src as u64;
        }
        FlagqStatus::Ok
    })
}

fn json_out(json: String, out: *mut *mut c_char) -> FlagqStatus {
    match CString::new(json) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            FlagqStatus::Ok
        }
        Err(_) => {
            set_error("report contained an interior NUL".into());
            FlagqStatus::InvalidArgument
        }
    }
}

/// Classical structure vectors (Q, N, T, Qhat) as a JSON object.
///
/// # Safety
/// `c` must be a live complex handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn flagq_structure_vectors_json(
    c: *const FlagqComplex,
    out: *mut *mut c_char,
) -> FlagqStatus {
    if c.is_null() || out.is_null() {
        return FlagqStatus::NullArgument;
    }
    guarded(|| {
        let view = SimplicialComplexView::from_flag_complex(&(*c).0);
        if view.is_empty() {
            set_error("empty complex has no structure vectors".into());
            return FlagqStatus::Infeasible;
        }
        let sv = structure_vectors(&view);
        json_out(serde_json::to_string(&sv).expect("serializable"), out)
    })
}

/// Builds the (q,i,j)-connectivity digraph.
///
/// # Safety
/// `c` must be a live complex handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn flagq_connectivity_build(
    c: *const FlagqComplex,
    q: u32,
    i: u32,
    j: u32,
    out: *mut *mut FlagqConnectivity,
) -> FlagqStatus {
    if c.is_null() || out.is_null() {
        return FlagqStatus::NullArgument;
    }
    guarded(|| {
        let spec = ConnectionSpec::new(q as usize, i as usize, j as usize);
        match ConnectivityDigraph::build(&(*c).0, spec) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(FlagqConnectivity(g)));
                FlagqStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                FlagqStatus::Infeasible
            }
        }
    })
}

/// # Safety
/// `g` must be a live connectivity handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn flagq_connectivity_free(g: *mut FlagqConnectivity) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live connectivity handle.
#[no_mangle]
pub unsafe extern "C" fn flagq_connectivity_num_nodes(g: *const FlagqConnectivity) -> u64 {
    if g.is_null() {
        return 0;
    }
    (*g).0.num_nodes() as u64
}

/// # Safety
/// `g` must be a live connectivity handle.
#[no_mangle]
pub unsafe extern "C" fn flagq_connectivity_num_edges(g: *const FlagqConnectivity) -> u64 {
    if g.is_null() {
        return 0;
    }
    (*g).0.num_edges() as u64
}

/// Summary of the digraph and its condensation as JSON:
/// `{q,i,j,nodes,edges,scc_count,condensation_edges}`.
///
/// # Safety
/// `g` must be a live connectivity handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn flagq_connectivity_summary_json(
    g: *const FlagqConnectivity,
    out: *mut *mut c_char,
) -> FlagqStatus {
    if g.is_null() || out.is_null() {
        return FlagqStatus::NullArgument;
    }
    guarded(|| {
        let cond = condense(&(*g).0);
        let summary = summarize(&(*g).0, &cond);
        json_out(serde_json::to_string(&summary).expect("serializable"), out)
    })
}

/// Longest simplicial path under (q,i,j). On success writes the number of
/// simplices to `length`, the path fraction to `fraction`, and, when
/// `json_report` is non-NULL, the full path report as JSON.
///
/// # Safety
/// `c` must be a live complex handle; `length` and `fraction` must be
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn flagq_longest_simplicial_path(
    c: *const FlagqComplex,
    q: u32,
    i: u32,
    j: u32,
    retries: u32,
    length: *mut u64,
    fraction: *mut f64,
    json_report: *mut *mut c_char,
) -> FlagqStatus {
    if c.is_null() || length.is_null() || fraction.is_null() {
        return FlagqStatus::NullArgument;
    }
    guarded(|| {
        let spec = ConnectionSpec::new(q as usize, i as usize, j as usize);
        match longest_simplicial_path(&(*c).0, spec, retries as usize) {
            Ok(p) => {
                *length = p.length as u64;
                *fraction = p.fraction;
                if !json_report.is_null() {
                    return json_out(serde_json::to_string(&p).expect("serializable"), json_report);
                }
                FlagqStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                FlagqStatus::Infeasible
            }
        }
    })
}

/// Betti numbers and height of the condensed (q,i,j)-poset as JSON:
/// `{q,i,j,betti,height}`.
///
/// # Safety
/// `c` must be a live complex handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn flagq_condensed_topology_json(
    c: *const FlagqComplex,
    q: u32,
    i: u32,
    j: u32,
    chain_ceiling: u64,
    out: *mut *mut c_char,
) -> FlagqStatus {
    if c.is_null() || out.is_null() {
        return FlagqStatus::NullArgument;
    }
    guarded(|| {
        let spec = ConnectionSpec::new(q as usize, i as usize, j as usize);
        let g = match ConnectivityDigraph::build(&(*c).0, spec) {
            Ok(g) => g,
            Err(e) => {
                set_error(e.to_string());
                return FlagqStatus::Infeasible;
            }
        };
        let poset = condense(&g).to_poset();
        let oc = match order_complex(&poset, None, chain_ceiling) {
            Ok(oc) => oc,
            Err(e) => {
                set_error(e.to_string());
                return FlagqStatus::GuardExceeded;
            }
        };
        let report = serde_json::json!({
            "q": q,
            "i": i,
            "j": j,
            "betti": betti_z2(&oc, oc.dim()),
            "height": poset_height(&poset),
        });
        json_out(report.to_string(), out)
    })
}
