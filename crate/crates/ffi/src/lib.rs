//! C interface to the team-recognition library.
//!
//! Conventions, mirrored in the generated `include/moto.h`:
//!
//! * Functions that return a pointer return `NULL` on failure; counters
//!   return a negative value on failure.
//! * After a failed call, [`moto_last_error`] describes the problem and
//!   [`moto_last_error_code`] classifies it (`MOTO_ERR_*`). Both are
//!   thread-local and reflect the most recent library call on the calling
//!   thread; the message pointer stays valid until that next call.
//! * Strings returned by the library belong to the caller and must be
//!   released with [`moto_string_free`]; graphs with [`moto_graph_free`].
//!   The two `free` functions and the two error accessors never touch the
//!   error state.
//! * Configuration arguments accept the same `key = value` text as the
//!   command-line tool's `--config` file. Pass `NULL` for the documented
//!   defaults.

use std::cell::{Cell, RefCell};
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use moto::config::{parse_config_text, RunConfig, OCCUPANCY_BAND};
use moto::corpus;
use moto::density::suggest_dc;
use moto::distance::all_pairs;
use moto::error::Error;
use moto::evaluation::{evaluate_teams, summarize};
use moto::graph::{CollaborationGraph, NodeId};
use moto::motif::motif_significance;
use moto::team::{recognition_to_json, recognize, TeamJson};
use moto::trac::{trac_recognize, trac_to_json};

/// The last call on this thread succeeded.
pub const MOTO_OK: c_int = 0;
/// An argument was outside its documented domain.
pub const MOTO_ERR_INVALID_ARGUMENT: c_int = 1;
/// Input data was missing, unreadable, or failed validation.
pub const MOTO_ERR_DATA: c_int = 2;
/// An internal invariant was violated; always a bug.
pub const MOTO_ERR_INTERNAL: c_int = 3;
/// A required pointer was `NULL` or a string was not valid UTF-8.
pub const MOTO_ERR_POINTER: c_int = 4;

/// Opaque handle to a loaded collaboration graph.
pub struct MotoGraph {
    inner: CollaborationGraph,
}

thread_local! {
    static LAST_MESSAGE: RefCell<Option<CString>> = const { RefCell::new(None) };
    static LAST_CODE: Cell<c_int> = const { Cell::new(MOTO_OK) };
}

type Failure = (c_int, String);

fn record_success() {
    LAST_MESSAGE.with(|slot| *slot.borrow_mut() = None);
    LAST_CODE.with(|code| code.set(MOTO_OK));
}

fn record_failure(code: c_int, message: &str) {
    let text = CString::new(message.replace('\0', "?")).unwrap_or_default();
    LAST_MESSAGE.with(|slot| *slot.borrow_mut() = Some(text));
    LAST_CODE.with(|slot| slot.set(code));
}

fn failure(err: Error) -> Failure {
    let code = match err {
        Error::InvalidArgument(_) => MOTO_ERR_INVALID_ARGUMENT,
        Error::Data(_) | Error::Io(_) => MOTO_ERR_DATA,
        Error::Internal(_) => MOTO_ERR_INTERNAL,
    };
    (code, err.to_string())
}

/// Run `body` with panic isolation, then update the thread-local error
/// state and map failures to `fallback`.
fn ffi_call<T>(fallback: T, body: impl FnOnce() -> Result<T, Failure>) -> T {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(value)) => {
            record_success();
            value
        }
        Ok(Err((code, message))) => {
            record_failure(code, &message);
            fallback
        }
        Err(_) => {
            record_failure(MOTO_ERR_INTERNAL, "panic inside library call");
            fallback
        }
    }
}

/// # Safety
/// `ptr` must be NULL or a NUL-terminated string valid for reads.
unsafe fn required_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err((MOTO_ERR_POINTER, format!("{what} pointer is NULL")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| (MOTO_ERR_POINTER, format!("{what} is not valid UTF-8")))
}

/// # Safety
/// `ptr` must be NULL or a live handle from [`moto_graph_load`].
unsafe fn graph_ref<'a>(ptr: *const MotoGraph) -> Result<&'a CollaborationGraph, Failure> {
    ptr.as_ref()
        .map(|handle| &handle.inner)
        .ok_or((MOTO_ERR_POINTER, "graph handle is NULL".to_string()))
}

/// # Safety
/// See [`required_str`]; NULL yields the default configuration.
unsafe fn config_arg(ptr: *const c_char) -> Result<RunConfig, Failure> {
    if ptr.is_null() {
        return Ok(RunConfig::default());
    }
    parse_config_text(required_str(ptr, "config text")?).map_err(failure)
}

fn leak_string(text: String) -> Result<*mut c_char, Failure> {
    CString::new(text).map(CString::into_raw).map_err(|_| {
        (
            MOTO_ERR_INTERNAL,
            "output contains an interior NUL byte".into(),
        )
    })
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<*mut c_char, Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|err| (MOTO_ERR_INTERNAL, format!("cannot serialize result: {err}")))?;
    text.push('\n');
    leak_string(text)
}

/// The cutoff distance for this run: the configured value, or the
/// occupancy scan when the configuration says `auto`.
fn resolve_cutoff(graph: &CollaborationGraph, config: &RunConfig) -> Result<f64, Failure> {
    if let Some(value) = config.d_c.fixed_value() {
        return Ok(value);
    }
    let distances = all_pairs(graph, config.cap).map_err(failure)?;
    suggest_dc(&distances, OCCUPANCY_BAND.0, OCCUPANCY_BAND.1)
        .map(|scan| scan.chosen_d_c)
        .map_err(failure)
}

/// Classification of the most recent library call on this thread: `MOTO_OK`
/// or one of the `MOTO_ERR_*` constants.
#[no_mangle]
pub extern "C" fn moto_last_error_code() -> c_int {
    LAST_CODE.with(|code| code.get())
}

/// Message for the most recent failure on this thread, or `NULL` if the
/// last call succeeded. Owned by the library; do not free.
#[no_mangle]
pub extern "C" fn moto_last_error() -> *const c_char {
    LAST_MESSAGE.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(std::ptr::null(), |message| message.as_ptr())
    })
}

/// Load a graph snapshot (`nodes.tsv` + `edges.tsv`) from a directory.
/// Returns `NULL` on failure.
///
/// # Safety
/// `dir` must be a NUL-terminated string valid for reads.
#[no_mangle]
pub unsafe extern "C" fn moto_graph_load(dir: *const c_char) -> *mut MotoGraph {
    ffi_call(std::ptr::null_mut(), || {
        let dir = required_str(dir, "snapshot directory")?;
        let inner = CollaborationGraph::read_snapshot(Path::new(dir)).map_err(failure)?;
        Ok(Box::into_raw(Box::new(MotoGraph { inner })))
    })
}

/// Release a graph handle. `NULL` is ignored.
///
/// # Safety
/// `graph` must be `NULL` or a handle from [`moto_graph_load`] that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn moto_graph_free(graph: *mut MotoGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of scholars in the graph, or -1 on failure.
///
/// # Safety
/// `graph` must be `NULL` or a live handle from [`moto_graph_load`].
#[no_mangle]
pub unsafe extern "C" fn moto_graph_node_count(graph: *const MotoGraph) -> i64 {
    ffi_call(-1, || Ok(graph_ref(graph)?.node_count() as i64))
}

/// Number of collaboration edges in the graph, or -1 on failure.
///
/// # Safety
/// `graph` must be `NULL` or a live handle from [`moto_graph_load`].
#[no_mangle]
pub unsafe extern "C" fn moto_graph_edge_count(graph: *const MotoGraph) -> i64 {
    ffi_call(-1, || Ok(graph_ref(graph)?.edge_count() as i64))
}

/// Headline statistics of the graph (node, edge, and triangle counts,
/// degree and clustering summaries) as a JSON document.
///
/// # Safety
/// `graph` must be `NULL` or a live handle from [`moto_graph_load`].
#[no_mangle]
pub unsafe extern "C" fn moto_graph_profile_json(graph: *const MotoGraph) -> *mut c_char {
    ffi_call(std::ptr::null_mut(), || {
        to_json(&corpus::profile(graph_ref(graph)?))
    })
}

/// Run density-peak team recognition and return the team list as JSON, in
/// the same schema the command-line tool writes to `teams.json`.
///
/// # Safety
/// `graph` must be a live handle from [`moto_graph_load`]; `config` must be
/// `NULL` or a NUL-terminated string valid for reads.
#[no_mangle]
pub unsafe extern "C" fn moto_recognize_json(
    graph: *const MotoGraph,
    config: *const c_char,
) -> *mut c_char {
    ffi_call(std::ptr::null_mut(), || {
        let graph = graph_ref(graph)?;
        let config = config_arg(config)?;
        let d_c = resolve_cutoff(graph, &config)?;
        let recognition = recognize(graph, &config.recognize_config(d_c)).map_err(failure)?;
        to_json(&recognition_to_json(graph, &recognition))
    })
}

/// Run the threshold-based baseline recognizer and return its team list as
/// JSON, in the same schema as [`moto_recognize_json`].
///
/// # Safety
/// Same contract as [`moto_recognize_json`].
#[no_mangle]
pub unsafe extern "C" fn moto_trac_json(
    graph: *const MotoGraph,
    config: *const c_char,
) -> *mut c_char {
    ffi_call(std::ptr::null_mut(), || {
        let graph = graph_ref(graph)?;
        let config = config_arg(config)?;
        let teams = trac_recognize(graph, &config.trac).map_err(failure)?;
        to_json(&trac_to_json(graph, &teams))
    })
}

/// Score a team list against the graph. `teams_json` takes the JSON schema
/// produced by [`moto_recognize_json`] or [`moto_trac_json`]; the result is
/// a JSON object with per-team `metrics` and an aggregate `summary`.
///
/// # Safety
/// `graph` must be a live handle from [`moto_graph_load`]; `teams_json` must
/// be a NUL-terminated string valid for reads; `config` must be `NULL` or
/// such a string.
#[no_mangle]
pub unsafe extern "C" fn moto_evaluate_json(
    graph: *const MotoGraph,
    teams_json: *const c_char,
    config: *const c_char,
) -> *mut c_char {
    ffi_call(std::ptr::null_mut(), || {
        let graph = graph_ref(graph)?;
        let config = config_arg(config)?;
        let teams: Vec<TeamJson> = serde_json::from_str(required_str(teams_json, "team list")?)
            .map_err(|err| (MOTO_ERR_DATA, format!("malformed team list: {err}")))?;
        let resolved: Vec<(String, Vec<NodeId>)> = teams
            .iter()
            .map(|team| {
                Ok((
                    team.team_id.clone(),
                    team.member_nodes(graph).map_err(failure)?,
                ))
            })
            .collect::<Result<_, Failure>>()?;
        let metrics = evaluate_teams(graph, &resolved, config.ccr_mode).map_err(failure)?;
        let summary = summarize(graph, &resolved, &metrics);
        to_json(&serde_json::json!({"metrics": metrics, "summary": summary}))
    })
}

/// Test whether the triangle count of the graph is significant against a
/// degree-preserving rewired ensemble; returns the parameters and verdict
/// as JSON.
///
/// # Safety
/// Same contract as [`moto_recognize_json`].
#[no_mangle]
pub unsafe extern "C" fn moto_motif_test_json(
    graph: *const MotoGraph,
    config: *const c_char,
) -> *mut c_char {
    ffi_call(std::ptr::null_mut(), || {
        let graph = graph_ref(graph)?;
        let config = config_arg(config)?;
        let significance = motif_significance(graph, &config.motif).map_err(failure)?;
        to_json(&serde_json::json!({
            "params": config.motif,
            "verdict": significance.verdict,
        }))
    })
}

/// Release a string returned by this library. `NULL` is ignored.
///
/// # Safety
/// `text` must be `NULL` or a string returned by this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn moto_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}
