//! C ABI for the `prar` samplers.
//!
//! Graphs and samplers are opaque handles created by `*_new` functions and
//! released with the matching `*_free`. Every fallible call returns a
//! [`PrarStatus`]; on failure a message is kept per thread and can be read
//! with [`prar_last_error`]. Panics never cross the boundary: they are
//! reported as `PRAR_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use prar::engine::{EngineOptions, SampleStats, DEFAULT_BUDGET};
use prar::graph::{Generator, Graph};
use prar::models::{critical_lambda_hardcore, gamma_hardcore, ModelSpec};
use prar::rng::RngStream;
use prar::sampler::{Draw, Method, Sampler};
use prar::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrarStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGraph = 3,
    Disconnected = 4,
    BudgetExceeded = 5,
    BufferTooSmall = 6,
    ParseError = 7,
    IoError = 8,
    WrongModelKind = 9,
    Panic = 10,
}

/// An undirected simple graph.
pub struct PrarGraph {
    graph: Graph,
}

/// A model bound to a graph, with its own random stream.
pub struct PrarSampler {
    graph: Graph,
    spec: ModelSpec,
    options: EngineOptions,
    method: Method,
    rng: RngStream,
    last: SampleStats,
}

/// Counters for the most recent sample.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PrarStats {
    pub attempts: u64,
    pub rejections: u64,
    pub proposals: u64,
    pub recursion_depth_max: u64,
    pub bernoulli_draws: u64,
    pub uniform_draws: u64,
    pub normal_draws: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> PrarStatus {
    match err {
        Error::NodeOutOfRange { .. } | Error::SelfLoop(_) | Error::DuplicateEdge(..) | Error::InvalidGenerator(_) => {
            PrarStatus::InvalidGraph
        }
        Error::Disconnected => PrarStatus::Disconnected,
        Error::BudgetExceeded { .. } => PrarStatus::BudgetExceeded,
        Error::Parse(_) => PrarStatus::ParseError,
        Error::Io { .. } => PrarStatus::IoError,
        _ => PrarStatus::InvalidArgument,
    }
}

/// Run `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), (PrarStatus, String)>) -> PrarStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PrarStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PrarStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (PrarStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (PrarStatus, String) {
    (PrarStatus::NullPointer, format!("{what} is null"))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (PrarStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (PrarStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], (PrarStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], (PrarStatus, String)> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn prar_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn prar_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Build a graph on `n` nodes from `m` pairs stored flat in `pairs`
/// (`2·m` entries).
///
/// # Safety
/// `pairs` must point to `2·m` readable values (or be NULL when `m` is 0);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prar_graph_new(n: usize, pairs: *const usize, m: usize, out: *mut *mut PrarGraph) -> PrarStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let flat = slice(pairs, m.checked_mul(2).ok_or_else(|| null("pairs"))?, "pairs")?;
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let graph = Graph::new(n, &pairs).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(PrarGraph { graph }));
        Ok(())
    })
}

/// Build a named graph: `grid:RxC`, `cycle:N`, `path:N` or `complete:N`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prar_graph_generate(spec: *const c_char, out: *mut *mut PrarGraph) -> PrarStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let kind: Generator = c_str(spec, "spec")?.parse().map_err(lib_err)?;
        let graph = Graph::generate(kind).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(PrarGraph { graph }));
        Ok(())
    })
}

/// Read an edge-list file: a `n m` header, then `m` lines `i j`; `#`
/// starts a comment line.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prar_graph_read(path: *const c_char, out: *mut *mut PrarGraph) -> PrarStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let graph = Graph::read_edge_list(Path::new(c_str(path, "path")?)).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(PrarGraph { graph }));
        Ok(())
    })
}

/// # Safety
/// `g` must come from a `prar_graph_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn prar_graph_free(g: *mut PrarGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle or NULL (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn prar_graph_node_count(g: *const PrarGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.node_count())
}

/// # Safety
/// `g` must be a live graph handle or NULL (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn prar_graph_edge_count(g: *const PrarGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.edge_count())
}

/// # Safety
/// `g` must be a live graph handle or NULL (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn prar_graph_max_degree(g: *const PrarGraph) -> usize {
    g.as_ref().map_or(0, |g| g.graph.max_degree())
}

/// Endpoints of edge `id` (edges are numbered in sorted `(i, j)`, `i < j`,
/// order).
///
/// # Safety
/// `g` must be a live graph handle; `i` and `j` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prar_graph_edge(g: *const PrarGraph, id: usize, i: *mut usize, j: *mut usize) -> PrarStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        if i.is_null() || j.is_null() {
            return Err(null("output"));
        }
        if id >= g.graph.edge_count() {
            return Err((PrarStatus::InvalidArgument, format!("edge {id} out of range")));
        }
        (*i, *j) = g.graph.edge(id);
        Ok(())
    })
}

/// Connected components using only edges whose byte in `bits` is nonzero.
///
/// # Safety
/// `g` must be a live graph handle; `bits` must hold `len` bytes; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn prar_graph_count_components(
    g: *const PrarGraph,
    bits: *const u8,
    len: usize,
    out: *mut usize,
) -> PrarStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let bits: Vec<bool> = slice(bits, len, "bits")?.iter().map(|&b| b != 0).collect();
        *out = g.graph.count_components(&bits).map_err(lib_err)?;
        Ok(())
    })
}

/// Bind a model (for example `hardcore:lambda=1` or `rc:p=0.25,q=2`) to a
/// copy of `g`. `method` is `prar`, `backbone`, `ar`, or NULL for `prar`.
/// `budget` caps primitive draws per sample; 0 selects the default.
///
/// # Safety
/// `g` must be a live graph handle; strings must be NUL-terminated; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn prar_sampler_new(
    g: *const PrarGraph,
    model: *const c_char,
    method: *const c_char,
    seed: u64,
    budget: u64,
    out: *mut *mut PrarSampler,
) -> PrarStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec: ModelSpec = c_str(model, "model")?.parse().map_err(lib_err)?;
        let method = if method.is_null() {
            Method::Prar
        } else {
            c_str(method, "method")?.parse().map_err(lib_err)?
        };
        let options = EngineOptions::with_budget(if budget == 0 { DEFAULT_BUDGET } else { budget });
        Sampler::new(spec.clone(), &g.graph, options, method).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(PrarSampler {
            graph: g.graph.clone(),
            spec,
            options,
            method,
            rng: RngStream::new(seed),
            last: SampleStats::default(),
        }));
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`prar_sampler_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn prar_sampler_free(s: *mut PrarSampler) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of nodes or edges the model labels; 0 for NULL.
///
/// # Safety
/// `s` must be a live sampler handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn prar_sampler_dimension_count(s: *const PrarSampler) -> usize {
    s.as_ref().map_or(0, |s| s.spec.dimension_count(&s.graph))
}

fn target_dims(s: &PrarSampler, target: &[usize]) -> Result<Vec<usize>, (PrarStatus, String)> {
    let dims = s.spec.dimension_count(&s.graph);
    if target.is_empty() {
        return Ok((0..dims).collect());
    }
    if let Some(&bad) = target.iter().find(|&&d| d >= dims) {
        return Err((PrarStatus::InvalidArgument, format!("target {bad} out of range ({dims} dimensions)")));
    }
    Ok(target.to_vec())
}

fn draw(s: &mut PrarSampler, dims: &[usize]) -> Result<Draw, (PrarStatus, String)> {
    let sampler = Sampler::new(s.spec.clone(), &s.graph, s.options, s.method).map_err(lib_err)?;
    let (draw, stats) = sampler.draw(Some(dims), &mut s.rng).map_err(lib_err)?;
    s.last = stats;
    Ok(draw)
}

fn check_len(have: usize, need: usize) -> Result<(), (PrarStatus, String)> {
    if have < need {
        return Err((PrarStatus::BufferTooSmall, format!("buffer holds {have}, need {need}")));
    }
    Ok(())
}

/// Draw one sample of a binary model. Labels of `target` (or of every
/// dimension when `target_len` is 0) are written to `out` in the order
/// given, as 0 or 1.
///
/// # Safety
/// `s` must be a live sampler handle; `target` must hold `target_len`
/// values; `out` must hold `out_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn prar_sampler_sample_bits(
    s: *mut PrarSampler,
    target: *const usize,
    target_len: usize,
    out: *mut u8,
    out_len: usize,
) -> PrarStatus {
    guard(|| {
        let s = s.as_mut().ok_or_else(|| null("sampler"))?;
        if !s.spec.is_binary() {
            return Err((PrarStatus::WrongModelKind, format!("{} does not have bit labels", s.spec.name())));
        }
        let dims = target_dims(s, slice(target, target_len, "target")?)?;
        check_len(out_len, dims.len())?;
        let out = slice_mut(out, out_len, "out")?;
        let bits = draw(s, &dims)?.bits(&dims).expect("binary draw covers its target");
        for (o, b) in out.iter_mut().zip(bits) {
            *o = u8::from(b);
        }
        Ok(())
    })
}

/// Like [`prar_sampler_sample_bits`] for the autonormal model.
///
/// # Safety
/// As for [`prar_sampler_sample_bits`], with `out` holding `out_len`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn prar_sampler_sample_reals(
    s: *mut PrarSampler,
    target: *const usize,
    target_len: usize,
    out: *mut f64,
    out_len: usize,
) -> PrarStatus {
    guard(|| {
        let s = s.as_mut().ok_or_else(|| null("sampler"))?;
        if !matches!(s.spec, ModelSpec::Autonormal(_)) {
            return Err((PrarStatus::WrongModelKind, format!("{} does not have real labels", s.spec.name())));
        }
        let dims = target_dims(s, slice(target, target_len, "target")?)?;
        check_len(out_len, dims.len())?;
        let out = slice_mut(out, out_len, "out")?;
        let xs = draw(s, &dims)?.reals(&dims).expect("real draw covers its target");
        out[..xs.len()].copy_from_slice(&xs);
        Ok(())
    })
}

/// Draw a spanning tree (model `wilson:root=R`). `parent[v]` receives the
/// parent of node `v`, and -1 for the root.
///
/// # Safety
/// `s` must be a live sampler handle; `parent` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn prar_sampler_sample_tree(s: *mut PrarSampler, parent: *mut i64, len: usize) -> PrarStatus {
    guard(|| {
        let s = s.as_mut().ok_or_else(|| null("sampler"))?;
        if !matches!(s.spec, ModelSpec::Wilson { .. }) {
            return Err((PrarStatus::WrongModelKind, format!("{} does not sample trees", s.spec.name())));
        }
        let n = s.graph.node_count();
        check_len(len, n)?;
        let out = slice_mut(parent, len, "parent")?;
        let draw = draw(s, &[])?;
        let tree = draw.tree().expect("tree model");
        for (v, o) in out.iter_mut().take(n).enumerate() {
            *o = tree.parent(v).map_or(-1, |p| p as i64);
        }
        Ok(())
    })
}

/// Counters of the most recent successful sample.
///
/// # Safety
/// `s` must be a live sampler handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prar_sampler_last_stats(s: *const PrarSampler, out: *mut PrarStats) -> PrarStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("sampler"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let l = &s.last;
        *out = PrarStats {
            attempts: l.attempts,
            rejections: l.rejections,
            proposals: l.proposals,
            recursion_depth_max: l.recursion_depth_max as u64,
            bernoulli_draws: l.draws.bernoulli,
            uniform_draws: l.draws.uniform,
            normal_draws: l.draws.normal,
        };
        Ok(())
    })
}

/// The hard-core drift `γ(λ, Δ)`; NaN for negative or non-finite `λ`.
#[no_mangle]
pub extern "C" fn prar_gamma_hardcore(lambda: f64, delta: usize) -> f64 {
    if !lambda.is_finite() || lambda < 0.0 {
        return f64::NAN;
    }
    gamma_hardcore(lambda, delta)
}

/// The hard-core critical activity for maximum degree `delta >= 2`
/// (infinite for 2).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prar_critical_lambda_hardcore(delta: usize, out: *mut f64) -> PrarStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = critical_lambda_hardcore(delta).map_err(lib_err)?;
        Ok(())
    })
}
