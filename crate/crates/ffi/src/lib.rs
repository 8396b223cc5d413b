//! C interface to `upag`.
//!
//! Graphs are opaque `UpagGraph` handles created by one of the constructors
//! and released with [`upag_free`]. Every fallible call returns a
//! [`UpagStatus`]; on failure a message is kept per thread and can be read
//! with [`upag_last_error`]. Results are written through out-pointers, which
//! are left untouched on failure, except that constructors set the handle to
//! null.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use upag::generate::{generate, GenConfig};
use upag::{CompressedGraph, Dag, Error};

/// Opaque handle to an immutable compressed graph.
pub struct UpagGraph {
    inner: CompressedGraph,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpagStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    NotPeelable = 4,
    MalformedGraph = 5,
    BadMagic = 6,
    VersionMismatch = 7,
    Truncated = 8,
    ChecksumMismatch = 9,
    Corrupt = 10,
    Io = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> UpagStatus {
    match e {
        Error::InvalidParameter(_)
        | Error::UnequalBlocks { .. }
        | Error::TooLarge { .. }
        | Error::Parse { .. } => UpagStatus::InvalidArgument,
        Error::OutOfRange { .. } => UpagStatus::OutOfRange,
        Error::MalformedGraph(_) => UpagStatus::MalformedGraph,
        Error::NotPeelable(_) => UpagStatus::NotPeelable,
        Error::BadMagic => UpagStatus::BadMagic,
        Error::VersionMismatch { .. } => UpagStatus::VersionMismatch,
        Error::Truncated { .. } => UpagStatus::Truncated,
        Error::ChecksumMismatch { .. } => UpagStatus::ChecksumMismatch,
        Error::Corrupt(_) => UpagStatus::Corrupt,
        Error::Io(_) => UpagStatus::Io,
    }
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), UpagStatus>) -> UpagStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UpagStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            UpagStatus::Panic
        }
    }
}

fn fail(e: Error) -> UpagStatus {
    set_error(e.to_string());
    status_of(&e)
}

unsafe fn graph<'a>(g: *const UpagGraph) -> Result<&'a CompressedGraph, UpagStatus> {
    if g.is_null() {
        set_error("graph handle is null");
        return Err(UpagStatus::NullPointer);
    }
    Ok(&(*g).inner)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), UpagStatus> {
    if out.is_null() {
        set_error("output pointer is null");
        return Err(UpagStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

/// Nulls `*out` so a failed constructor never leaves a stale handle behind.
unsafe fn clear(out: *mut *mut UpagGraph) {
    if !out.is_null() {
        *out = ptr::null_mut();
    }
}

unsafe fn emit(out: *mut *mut UpagGraph, g: CompressedGraph) -> Result<(), UpagStatus> {
    if out.is_null() {
        set_error("output pointer is null");
        return Err(UpagStatus::NullPointer);
    }
    *out = Box::into_raw(Box::new(UpagGraph { inner: g }));
    Ok(())
}

unsafe fn build_from(dag: Dag, labelled: bool, out: *mut *mut UpagGraph) -> Result<(), UpagStatus> {
    let g = if labelled {
        CompressedGraph::build_labelled(&dag)
    } else {
        CompressedGraph::build(&dag)
    }
    .map_err(fail)?;
    emit(out, g)
}

/// Builds from an adjacency string: `len = n * m` targets, the `m`
/// out-neighbours of vertex 1, then of vertex 2, and so on; every target of
/// vertex `t` must be smaller than `t`. In the unlabelled layout vertices are
/// renamed; see [`upag_relabel`].
#[no_mangle]
pub unsafe extern "C" fn upag_build(
    m: usize,
    targets: *const usize,
    len: usize,
    labelled: bool,
    out: *mut *mut UpagGraph,
) -> UpagStatus {
    clear(out);
    guard(|| {
        if targets.is_null() && len > 0 {
            set_error("targets is null");
            return Err(UpagStatus::NullPointer);
        }
        let slice = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(targets, len)
        };
        let dag = Dag::new(m, slice.to_vec()).map_err(fail)?;
        build_from(dag, labelled, out)
    })
}

/// Samples a PA(m; n) graph with the given seed and builds it.
#[no_mangle]
pub unsafe extern "C" fn upag_generate(
    m: usize,
    n: usize,
    seed: u64,
    labelled: bool,
    out: *mut *mut UpagGraph,
) -> UpagStatus {
    clear(out);
    guard(|| {
        let g = generate(&GenConfig::new(m, n, seed)).map_err(fail)?;
        build_from(g.into_dag(), labelled, out)
    })
}

/// Reads a graph from a `.upag` byte buffer.
#[no_mangle]
pub unsafe extern "C" fn upag_from_bytes(
    data: *const u8,
    len: usize,
    out: *mut *mut UpagGraph,
) -> UpagStatus {
    clear(out);
    guard(|| {
        if data.is_null() && len > 0 {
            set_error("data is null");
            return Err(UpagStatus::NullPointer);
        }
        let bytes = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(data, len)
        };
        let g = CompressedGraph::from_bytes(bytes).map_err(fail)?;
        emit(out, g)
    })
}

/// Serialises into `buf`. `*written` receives the encoded size; when `cap` is
/// too small nothing is copied and `UPAG_STATUS_BUFFER_TOO_SMALL` is
/// returned, so a call with `cap = 0` queries the size.
#[no_mangle]
pub unsafe extern "C" fn upag_to_bytes(
    g: *const UpagGraph,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> UpagStatus {
    guard(|| {
        let bytes = graph(g)?.to_bytes();
        write_out(written, bytes.len())?;
        if cap < bytes.len() {
            set_error(format!("buffer holds {cap} bytes, need {}", bytes.len()));
            return Err(UpagStatus::BufferTooSmall);
        }
        if buf.is_null() {
            set_error("buffer is null");
            return Err(UpagStatus::NullPointer);
        }
        ptr::copy_nonoverlapping(bytes.as_ptr(), buf, bytes.len());
        Ok(())
    })
}

unsafe fn path_arg<'a>(path: *const c_char) -> Result<&'a str, UpagStatus> {
    if path.is_null() {
        set_error("path is null");
        return Err(UpagStatus::NullPointer);
    }
    CStr::from_ptr(path).to_str().map_err(|_| {
        set_error("path is not valid UTF-8");
        UpagStatus::InvalidArgument
    })
}

#[no_mangle]
pub unsafe extern "C" fn upag_load(path: *const c_char, out: *mut *mut UpagGraph) -> UpagStatus {
    clear(out);
    guard(|| {
        let path = path_arg(path)?;
        let bytes = std::fs::read(path).map_err(|e| fail(e.into()))?;
        let g = CompressedGraph::from_bytes(&bytes).map_err(fail)?;
        emit(out, g)
    })
}

#[no_mangle]
pub unsafe extern "C" fn upag_save(g: *const UpagGraph, path: *const c_char) -> UpagStatus {
    guard(|| {
        let g = graph(g)?;
        let path = path_arg(path)?;
        std::fs::write(path, g.to_bytes()).map_err(|e| fail(e.into()))
    })
}

/// Releases a handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn upag_free(g: *mut UpagGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Writes `M` and `n`; vertices are `0..=n`.
#[no_mangle]
pub unsafe extern "C" fn upag_shape(
    g: *const UpagGraph,
    m: *mut usize,
    n: *mut usize,
) -> UpagStatus {
    guard(|| {
        let g = graph(g)?;
        write_out(m, g.m())?;
        write_out(n, g.n())
    })
}

#[no_mangle]
pub unsafe extern "C" fn upag_is_labelled(g: *const UpagGraph, out: *mut bool) -> UpagStatus {
    guard(|| write_out(out, graph(g)?.is_labelled()))
}

/// The `i`-th out-neighbour of `v`, `1 <= i <= M`.
#[no_mangle]
pub unsafe extern "C" fn upag_out_neighbour(
    g: *const UpagGraph,
    v: usize,
    i: usize,
    out: *mut usize,
) -> UpagStatus {
    guard(|| {
        let x = graph(g)?.out_neighbour(v, i).map_err(fail)?;
        write_out(out, x)
    })
}

/// The `i`-th in-neighbour of `v`, `1 <= i <= degree_in(v)`.
#[no_mangle]
pub unsafe extern "C" fn upag_in_neighbour(
    g: *const UpagGraph,
    v: usize,
    i: usize,
    out: *mut usize,
) -> UpagStatus {
    guard(|| {
        let x = graph(g)?.in_neighbour(v, i).map_err(fail)?;
        write_out(out, x)
    })
}

#[no_mangle]
pub unsafe extern "C" fn upag_degree(
    g: *const UpagGraph,
    v: usize,
    in_degree: *mut usize,
    out_degree: *mut usize,
) -> UpagStatus {
    guard(|| {
        let g = graph(g)?;
        let din = g.degree_in(v).map_err(fail)?;
        let dout = g.degree_out(v).map_err(fail)?;
        write_out(in_degree, din)?;
        write_out(out_degree, dout)
    })
}

#[no_mangle]
pub unsafe extern "C" fn upag_adjacent(
    g: *const UpagGraph,
    u: usize,
    v: usize,
    out: *mut bool,
) -> UpagStatus {
    guard(|| {
        let x = graph(g)?.adjacent(u, v).map_err(fail)?;
        write_out(out, x)
    })
}

/// Copies the input-to-stored label map (`n + 1` entries) into `buf`. Fails
/// with `UPAG_STATUS_INVALID_ARGUMENT` when the handle carries no map (graphs
/// read from bytes); `*written` receives the required length either way.
#[no_mangle]
pub unsafe extern "C" fn upag_relabel(
    g: *const UpagGraph,
    buf: *mut usize,
    cap: usize,
    written: *mut usize,
) -> UpagStatus {
    guard(|| {
        let g = graph(g)?;
        write_out(written, g.vertex_count())?;
        let Some(map) = g.relabel() else {
            set_error("no relabel map retained");
            return Err(UpagStatus::InvalidArgument);
        };
        if cap < map.len() {
            set_error(format!("buffer holds {cap} entries, need {}", map.len()));
            return Err(UpagStatus::BufferTooSmall);
        }
        if buf.is_null() {
            set_error("buffer is null");
            return Err(UpagStatus::NullPointer);
        }
        ptr::copy_nonoverlapping(map.as_ptr(), buf, map.len());
        Ok(())
    })
}

/// Total bits of the structure (payload, directories and metadata).
#[no_mangle]
pub unsafe extern "C" fn upag_total_bits(g: *const UpagGraph, out: *mut u64) -> UpagStatus {
    guard(|| write_out(out, graph(g)?.space_report().total_bits))
}

/// Copies the calling thread's last error message, NUL-terminated and
/// truncated to `cap` bytes. Returns the full message length in bytes.
#[no_mangle]
pub unsafe extern "C" fn upag_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn upag_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
