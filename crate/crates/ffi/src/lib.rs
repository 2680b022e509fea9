//! C interface to `densebandit`.
//!
//! Graphs and weight vectors are opaque handles created by `db_*_new` or
//! `db_*_load` functions and released with the matching `db_*_free`. Every
//! fallible function returns a [`DbStatus`]; on failure a message is
//! available from [`db_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use densebandit::bench::{experiment_family, knockout_weights, ALGORITHM_SEED_MIX};
use densebandit::dslin::{run_dslin, DsLinParams};
use densebandit::dssr::run_dssr;
use densebandit::io::load_edge_list;
use densebandit::{
    exact_densest, greedy_peeling, Error, Graph, NoiseModel, SamplingOracle, VertexSet,
    WeightVector,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    WeightMismatch = 5,
    BudgetTooSmall = 6,
    BudgetExceeded = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

/// Opaque graph handle.
pub struct DbGraph(Graph);

/// Opaque weight-vector handle.
pub struct DbWeights(WeightVector);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn fail(status: DbStatus, message: impl AsRef<str>) -> DbStatus {
    set_error(message.as_ref());
    status
}

fn status_of(error: &Error) -> DbStatus {
    match error {
        Error::Io { .. } => DbStatus::Io,
        Error::Parse { .. } => DbStatus::Parse,
        Error::WeightMismatch(_) => DbStatus::WeightMismatch,
        Error::BudgetTooSmall { .. } => DbStatus::BudgetTooSmall,
        Error::BudgetExceeded { .. } => DbStatus::BudgetExceeded,
        Error::Inconsistent(_) | Error::Csv(_) => DbStatus::Internal,
        _ => DbStatus::InvalidArgument,
    }
}

fn guard(body: impl FnOnce() -> Result<(), DbStatus>) -> DbStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DbStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(DbStatus::Internal, "panic inside densebandit"),
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, DbStatus>;
}

impl<T> OrStatus<T> for densebandit::Result<T> {
    fn or_status(self) -> Result<T, DbStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, DbStatus> {
    p.as_ref()
        .ok_or_else(|| fail(DbStatus::NullPointer, format!("{name} is null")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], DbStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(DbStatus::NullPointer, format!("{name} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write<T>(p: *mut T, value: T, name: &str) -> Result<(), DbStatus> {
    if p.is_null() {
        return Err(fail(DbStatus::NullPointer, format!("{name} is null")));
    }
    p.write(value);
    Ok(())
}

/// Copies `set` into `members[..capacity]` and its size into `len`.
unsafe fn write_set(
    set: &VertexSet,
    members: *mut usize,
    capacity: usize,
    len: *mut usize,
) -> Result<(), DbStatus> {
    write(len, set.len(), "len")?;
    if set.len() > capacity {
        return Err(fail(
            DbStatus::BufferTooSmall,
            format!(
                "the set has {} members but capacity is {capacity}",
                set.len()
            ),
        ));
    }
    if !set.is_empty() {
        if members.is_null() {
            return Err(fail(DbStatus::NullPointer, "members is null"));
        }
        ptr::copy_nonoverlapping(set.as_slice().as_ptr(), members, set.len());
    }
    Ok(())
}

fn noise(scale: f64) -> densebandit::Result<NoiseModel> {
    if scale == 0.0 {
        Ok(NoiseModel::None)
    } else {
        NoiseModel::gaussian(scale)
    }
}

/// Message of the last failure on this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn db_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Loads a whitespace-separated edge list.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn db_graph_load(path: *const c_char, out: *mut *mut DbGraph) -> DbStatus {
    guard(|| {
        if path.is_null() {
            return Err(fail(DbStatus::NullPointer, "path is null"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| fail(DbStatus::InvalidArgument, "path is not UTF-8"))?;
        let graph = load_edge_list(path).or_status()?.graph;
        write(out, Box::into_raw(Box::new(DbGraph(graph))), "out")
    })
}

/// Builds a graph on `n` vertices from `m` edges `(us[i], vs[i])`.
///
/// # Safety
/// `us` and `vs` must point to `m` readable values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn db_graph_new(
    n: usize,
    us: *const usize,
    vs: *const usize,
    m: usize,
    out: *mut *mut DbGraph,
) -> DbStatus {
    guard(|| {
        let us = slice(us, m, "us")?;
        let vs = slice(vs, m, "vs")?;
        let edges: Vec<(usize, usize)> = us.iter().copied().zip(vs.iter().copied()).collect();
        let graph = Graph::from_edges(n, &edges).or_status()?;
        write(out, Box::into_raw(Box::new(DbGraph(graph))), "out")
    })
}

/// # Safety
/// `graph` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn db_graph_free(graph: *mut DbGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn db_graph_vertex_count(graph: *const DbGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.n())
}

/// Number of edges, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn db_graph_edge_count(graph: *const DbGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.m())
}

/// Copies `len` nonnegative weights into a new handle.
///
/// # Safety
/// `values` must point to `len` readable doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn db_weights_new(
    values: *const f64,
    len: usize,
    out: *mut *mut DbWeights,
) -> DbStatus {
    guard(|| {
        let values = slice(values, len, "values")?.to_vec();
        let weights = WeightVector::new(values).or_status()?;
        write(out, Box::into_raw(Box::new(DbWeights(weights))), "out")
    })
}

/// Knockout weights for `graph` drawn with `seed`.
///
/// # Safety
/// `graph` must be a live handle and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn db_weights_knockout(
    graph: *const DbGraph,
    seed: u64,
    out: *mut *mut DbWeights,
) -> DbStatus {
    guard(|| {
        let graph = handle(graph, "graph")?;
        let weights = knockout_weights(&graph.0, seed).or_status()?;
        write(out, Box::into_raw(Box::new(DbWeights(weights))), "out")
    })
}

/// # Safety
/// `weights` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn db_weights_free(weights: *mut DbWeights) {
    if !weights.is_null() {
        drop(Box::from_raw(weights));
    }
}

/// Number of weights, or 0 for a null handle.
///
/// # Safety
/// `weights` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn db_weights_len(weights: *const DbWeights) -> usize {
    weights.as_ref().map_or(0, |w| w.0.len())
}

/// Copies the weights into `values[..capacity]`.
///
/// # Safety
/// `weights` must be a live handle and `values` must have room for
/// `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn db_weights_copy(
    weights: *const DbWeights,
    values: *mut f64,
    capacity: usize,
) -> DbStatus {
    guard(|| {
        let w = handle(weights, "weights")?;
        if w.0.len() > capacity {
            return Err(fail(
                DbStatus::BufferTooSmall,
                format!("{} weights do not fit in {capacity}", w.0.len()),
            ));
        }
        if !w.0.is_empty() {
            if values.is_null() {
                return Err(fail(DbStatus::NullPointer, "values is null"));
            }
            ptr::copy_nonoverlapping(w.0.as_slice().as_ptr(), values, w.0.len());
        }
        Ok(())
    })
}

/// Exact densest subgraph. The members are written in increasing order.
///
/// # Safety
/// Handles must be live; `members` must have room for `capacity` entries;
/// `len` and `density` must be valid.
#[no_mangle]
pub unsafe extern "C" fn db_exact_densest(
    graph: *const DbGraph,
    weights: *const DbWeights,
    members: *mut usize,
    capacity: usize,
    len: *mut usize,
    density: *mut f64,
) -> DbStatus {
    guard(|| {
        let (g, w) = (handle(graph, "graph")?, handle(weights, "weights")?);
        let best = exact_densest(&g.0, &w.0).or_status()?;
        write(density, best.density, "density")?;
        write_set(&best.set, members, capacity, len)
    })
}

/// Greedy peeling.
///
/// # Safety
/// Same contract as [`db_exact_densest`].
#[no_mangle]
pub unsafe extern "C" fn db_greedy_peeling(
    graph: *const DbGraph,
    weights: *const DbWeights,
    members: *mut usize,
    capacity: usize,
    len: *mut usize,
    density: *mut f64,
) -> DbStatus {
    guard(|| {
        let (g, w) = (handle(graph, "graph")?, handle(weights, "weights")?);
        let peel = greedy_peeling(&g.0, &w.0).or_status()?;
        write(density, peel.density, "density")?;
        write_set(&peel.set, members, capacity, len)
    })
}

/// DS-SR against a simulated oracle with per-edge Gaussian noise of scale
/// `noise_scale` (0 for none). Writes the output set and the number of
/// queries issued.
///
/// # Safety
/// Handles must be live; `members` must have room for `capacity` entries;
/// `len` and `queries` must be valid.
#[no_mangle]
pub unsafe extern "C" fn db_run_dssr(
    graph: *const DbGraph,
    weights: *const DbWeights,
    noise_scale: f64,
    seed: u64,
    budget: u64,
    members: *mut usize,
    capacity: usize,
    len: *mut usize,
    queries: *mut u64,
) -> DbStatus {
    guard(|| {
        let (g, w) = (handle(graph, "graph")?, handle(weights, "weights")?);
        let mut oracle =
            SamplingOracle::new(&g.0, &w.0, noise(noise_scale).or_status()?, seed).or_status()?;
        let out = run_dssr(&g.0, &mut oracle, budget).or_status()?;
        write(queries, out.queries, "queries")?;
        write_set(&out.set, members, capacity, len)
    })
}

/// DS-Lin with default hyperparameters on a random arm family of `arms`
/// arms (0 for `2m`) of size at least `k`, capped at `max_iters` rounds
/// (0 for `m + 10000`). Writes the output set and the rounds played.
///
/// # Safety
/// Same contract as [`db_run_dssr`], with `rounds` in place of `queries`.
#[no_mangle]
pub unsafe extern "C" fn db_run_dslin(
    graph: *const DbGraph,
    weights: *const DbWeights,
    noise_scale: f64,
    seed: u64,
    k: usize,
    arms: usize,
    max_iters: u64,
    members: *mut usize,
    capacity: usize,
    len: *mut usize,
    rounds: *mut u64,
) -> DbStatus {
    guard(|| {
        let (g, w) = (handle(graph, "graph")?, handle(weights, "weights")?);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ALGORITHM_SEED_MIX);
        let count = (arms > 0).then_some(arms);
        let family = experiment_family(&g.0, k, count, &mut rng).or_status()?;
        let mut params = DsLinParams::defaults(g.0.m());
        if max_iters > 0 {
            params.max_iters = max_iters;
        }
        let mut oracle =
            SamplingOracle::new(&g.0, &w.0, noise(noise_scale).or_status()?, seed).or_status()?;
        let out = run_dslin(&g.0, &family, &mut oracle, &params, None).or_status()?;
        write(rounds, out.iterations, "rounds")?;
        write_set(&out.set, members, capacity, len)
    })
}
