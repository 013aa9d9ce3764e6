//! C interface to the `dpsbm` library.
//!
//! Graphs and partitions cross the boundary as opaque handles that the caller
//! releases with the matching `*_free` function. Model parameters are passed
//! as JSON objects such as `{"variant": "basbm", "n": 300, "a": 20, "b": 2,
//! "rho": 0.5}`. Every fallible call returns a [`DpsbmStatus`]; on failure
//! [`dpsbm_last_error_message`] describes the most recent error on the
//! calling thread. Strings returned by the library are freed with
//! [`dpsbm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dpsbm::certificates::certify;
use dpsbm::concentration::{check, default_constants};
use dpsbm::privacy::{stbl_fast, FastConfig, PrivacyParams};
use dpsbm::sbm::generate;
use dpsbm::sdp::{recover, SolverOptions};
use dpsbm::{Error, Graph, GroundTruth, SbmParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Result codes of the C interface.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DpsbmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    ShapeMismatch = 4,
    Numerical = 5,
    Infeasible = 6,
    BudgetExceeded = 7,
    Io = 8,
    Panic = 9,
}

/// Opaque graph handle.
pub struct DpsbmGraph(Graph);

/// Opaque partition handle.
pub struct DpsbmPartition(GroundTruth);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> DpsbmStatus {
    match e {
        Error::IndexOutOfRange { .. }
        | Error::AlphabetViolation { .. }
        | Error::InvalidParams(_)
        | Error::Config(_)
        | Error::Domain(_)
        | Error::InvalidShift(_) => DpsbmStatus::InvalidArgument,
        Error::Parse { .. } | Error::DuplicateEdge { .. } | Error::Json(_) | Error::Csv(_) => DpsbmStatus::Parse,
        Error::ShapeMismatch(_) => DpsbmStatus::ShapeMismatch,
        Error::NonFinite
        | Error::NotSymmetric(_)
        | Error::Eigensolver(_)
        | Error::DegenerateSpectrum { .. }
        | Error::InconsistentRelation
        | Error::SizeMismatch { .. }
        | Error::DegenerateEstimate { .. } => DpsbmStatus::Numerical,
        Error::InfeasibleProblem(_) | Error::InfeasibleRegime(_) | Error::TooLarge { .. } => DpsbmStatus::Infeasible,
        Error::BudgetExceeded { .. } => DpsbmStatus::BudgetExceeded,
        Error::Io(_) => DpsbmStatus::Io,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, mapping errors and panics to a status and recording the message.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> DpsbmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DpsbmStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer passed as `{what}`"));
            DpsbmStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            DpsbmStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Lib(Error::InvalidParams(format!("`{what}` is not valid UTF-8"))))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

fn params_from(json: &str) -> Result<SbmParams, Fail> {
    let p: SbmParams = serde_json::from_str(json).map_err(|e| Error::InvalidParams(format!("model parameters: {e}")))?;
    p.validate()?;
    Ok(p)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message of the last failed call on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn dpsbm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn dpsbm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Samples a graph and its planted partition. `out_truth` may be null.
///
/// # Safety
/// `params_json` must be a NUL-terminated string; out-pointers must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_generate(
    params_json: *const c_char,
    seed: u64,
    out_graph: *mut *mut DpsbmGraph,
    out_truth: *mut *mut DpsbmPartition,
) -> DpsbmStatus {
    guard(|| {
        let params = params_from(str_arg(params_json, "params_json")?)?;
        let out_graph = out_arg(out_graph, "out_graph")?;
        let (g, truth) = generate(&params, seed)?;
        *out_graph = Box::into_raw(Box::new(DpsbmGraph(g)));
        if let Some(t) = out_truth.as_mut() {
            *t = Box::into_raw(Box::new(DpsbmPartition(truth)));
        }
        Ok(())
    })
}

/// Parses the edge-list format (`n <count> <simple|censored>` header, then
/// `i j [label]` lines).
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_graph_from_edge_list(text: *const c_char, out: *mut *mut DpsbmGraph) -> DpsbmStatus {
    guard(|| {
        let g = Graph::from_edge_list(str_arg(text, "text")?)?;
        *out_arg(out, "out")? = Box::into_raw(Box::new(DpsbmGraph(g)));
        Ok(())
    })
}

/// Serializes a graph; free the result with [`dpsbm_string_free`].
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_graph_to_edge_list(g: *const DpsbmGraph, out: *mut *mut c_char) -> DpsbmStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        *out_arg(out, "out")? = into_c_string(g.0.to_edge_list());
        Ok(())
    })
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_graph_n(g: *const DpsbmGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Reads entry `(i, j)`.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_graph_get(g: *const DpsbmGraph, i: usize, j: usize, out: *mut i8) -> DpsbmStatus {
    guard(|| {
        let g = &ref_arg(g, "g")?.0;
        let n = g.n();
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange { i, j, n }.into());
        }
        *out_arg(out, "out")? = g.get(i, j);
        Ok(())
    })
}

/// Copy of `g` with entry `{i, j}` set to `v`.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_graph_set_entry(
    g: *const DpsbmGraph,
    i: usize,
    j: usize,
    v: i8,
    out: *mut *mut DpsbmGraph,
) -> DpsbmStatus {
    guard(|| {
        let h = ref_arg(g, "g")?.0.set_entry(i, j, v)?;
        *out_arg(out, "out")? = Box::into_raw(Box::new(DpsbmGraph(h)));
        Ok(())
    })
}

/// Releases a graph handle. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_graph_free(g: *mut DpsbmGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Parses a partition from JSON, e.g. `{"kind": "binary", "sigma": [1, -1]}`.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_partition_from_json(json: *const c_char, out: *mut *mut DpsbmPartition) -> DpsbmStatus {
    guard(|| {
        let t: GroundTruth = serde_json::from_str(str_arg(json, "json")?).map_err(Error::from)?;
        *out_arg(out, "out")? = Box::into_raw(Box::new(DpsbmPartition(t)));
        Ok(())
    })
}

/// JSON form of a partition; free the result with [`dpsbm_string_free`].
///
/// # Safety
/// `p` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_partition_to_json(p: *const DpsbmPartition, out: *mut *mut c_char) -> DpsbmStatus {
    guard(|| {
        let text = serde_json::to_string(&ref_arg(p, "p")?.0).map_err(Error::from)?;
        *out_arg(out, "out")? = into_c_string(text);
        Ok(())
    })
}

/// Writes canonical labels (equal for partitions that agree up to relabeling
/// and sign) into `labels[0..len]`; `len` must equal the vertex count.
///
/// # Safety
/// `p` must be a live handle; `labels` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_partition_labels(p: *const DpsbmPartition, labels: *mut u32, len: usize) -> DpsbmStatus {
    guard(|| {
        let canon = ref_arg(p, "p")?.0.canonical().0;
        if labels.is_null() {
            return Err(Fail::Null("labels"));
        }
        if len != canon.len() {
            return Err(Error::ShapeMismatch(format!("buffer of {len} for {} vertices", canon.len())).into());
        }
        std::slice::from_raw_parts_mut(labels, len).copy_from_slice(&canon);
        Ok(())
    })
}

/// Whether two partitions agree up to relabeling and sign.
///
/// # Safety
/// Both handles must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_partition_equal(
    p: *const DpsbmPartition,
    q: *const DpsbmPartition,
    out: *mut bool,
) -> DpsbmStatus {
    guard(|| {
        let (p, q) = (ref_arg(p, "p")?, ref_arg(q, "q")?);
        *out_arg(out, "out")? = p.0.canonical() == q.0.canonical();
        Ok(())
    })
}

/// Releases a partition handle. Null is ignored.
///
/// # Safety
/// `p` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_partition_free(p: *mut DpsbmPartition) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Non-private estimate: solve the relaxation and round it.
///
/// # Safety
/// `g` must be a live handle, `params_json` NUL-terminated and `out` valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_recover(
    g: *const DpsbmGraph,
    params_json: *const c_char,
    out: *mut *mut DpsbmPartition,
) -> DpsbmStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let params = params_from(str_arg(params_json, "params_json")?)?;
        let out = out_arg(out, "out")?;
        let (t, _) = recover(&g.0, &params, &SolverOptions::default())?;
        *out = Box::into_raw(Box::new(DpsbmPartition(t)));
        Ok(())
    })
}

/// Fast stability mechanism with known parameters and Laplace noise seeded
/// by `seed`. On release `*out` receives a partition, otherwise null.
/// `out_trace_json`, if not null, receives the mechanism trace as JSON.
///
/// # Safety
/// `g` must be a live handle, `params_json` NUL-terminated; out-pointers
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_private_recover(
    g: *const DpsbmGraph,
    params_json: *const c_char,
    eps: f64,
    delta: f64,
    c_delta: f64,
    seed: u64,
    out: *mut *mut DpsbmPartition,
    out_trace_json: *mut *mut c_char,
) -> DpsbmStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let params = params_from(str_arg(params_json, "params_json")?)?;
        let out = out_arg(out, "out")?;
        if !(c_delta > 0.0) {
            return Err(Error::InvalidParams(format!("c_delta = {c_delta} must be positive")).into());
        }
        let privacy = PrivacyParams::new(eps, delta)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let outcome = stbl_fast(&g.0, &FastConfig::known(params, c_delta), &privacy, &mut rng)?;
        if let Some(t) = out_trace_json.as_mut() {
            *t = into_c_string(serde_json::to_string(&outcome.trace).map_err(Error::from)?);
        }
        *out = match outcome.result {
            Some(t) => Box::into_raw(Box::new(DpsbmPartition(t))),
            None => ptr::null_mut(),
        };
        Ok(())
    })
}

/// Concentration check of `g` around `p` under the default constants at
/// (`eps`, `c_delta`).
///
/// # Safety
/// Handles must be live, `params_json` NUL-terminated, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_check_concentration(
    g: *const DpsbmGraph,
    p: *const DpsbmPartition,
    params_json: *const c_char,
    eps: f64,
    c_delta: f64,
    out: *mut bool,
) -> DpsbmStatus {
    guard(|| {
        let (g, p) = (ref_arg(g, "g")?, ref_arg(p, "p")?);
        let params = params_from(str_arg(params_json, "params_json")?)?;
        let out = out_arg(out, "out")?;
        let c = default_constants(&params, eps, c_delta)?;
        *out = check(&g.0, &p.0, &params, &c)?.pass;
        Ok(())
    })
}

/// Builds and verifies the dual certificate of `p`. `tau_tilde` is used by
/// the general model only; pass NaN elsewhere.
///
/// # Safety
/// Handles must be live, `params_json` NUL-terminated, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dpsbm_certify(
    g: *const DpsbmGraph,
    p: *const DpsbmPartition,
    params_json: *const c_char,
    tau_tilde: f64,
    out: *mut bool,
) -> DpsbmStatus {
    guard(|| {
        let (g, p) = (ref_arg(g, "g")?, ref_arg(p, "p")?);
        let params = params_from(str_arg(params_json, "params_json")?)?;
        let out = out_arg(out, "out")?;
        let t = (!tau_tilde.is_nan()).then_some(tau_tilde);
        *out = certify(&g.0, &p.0, &params, t)?;
        Ok(())
    })
}
