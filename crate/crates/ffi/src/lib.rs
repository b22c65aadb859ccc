//! C ABI for `torsion-core`.
//!
//! Every function returns a [`TorsionStatus`]; results come back through out
//! pointers. Handles are opaque and must be released with the matching
//! `*_free` function. Strings returned through `char **` are owned by the
//! caller and released with [`torsion_string_free`]. After a nonzero status,
//! [`torsion_last_error`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};

use torsion_core::complexes::{search_presentation, A2Complex, QuotientGraph};
use torsion_core::exactint::{snf, IntMatrix, SnfResult};
use torsion_core::ktheory::{a2_relations, bound, tree_relations};
use torsion_core::weyl::cycle_perm;
use torsion_core::Error;

/// Status codes. `TORSION_STATUS_OK` is zero; the others mirror the error
/// kinds of the core library plus three ABI-level failures.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorsionStatus {
    Ok = 0,
    Dimension = 1,
    Index = 2,
    Field = 3,
    ReducibleModulus = 4,
    Size = 5,
    IncompleteLink = 6,
    Structure = 7,
    LinkAxiom = 8,
    InconsistentOrder = 9,
    Multiplicity = 10,
    InvalidInput = 11,
    Parse = 12,
    Disconnected = 13,
    Exhausted = 14,
    Io = 15,
    NullPointer = 16,
    Utf8 = 17,
    Panic = 18,
}

impl From<&Error> for TorsionStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Dimension(_) => TorsionStatus::Dimension,
            Error::IndexOutOfRange { .. } => TorsionStatus::Index,
            Error::Field(_) => TorsionStatus::Field,
            Error::ReducibleModulus(_) => TorsionStatus::ReducibleModulus,
            Error::SizeGuard(_) => TorsionStatus::Size,
            Error::IncompleteLink(_) => TorsionStatus::IncompleteLink,
            Error::Structure(_) => TorsionStatus::Structure,
            Error::LinkAxiom(_) => TorsionStatus::LinkAxiom,
            Error::InconsistentOrder(_) => TorsionStatus::InconsistentOrder,
            Error::Multiplicity(_) => TorsionStatus::Multiplicity,
            Error::InvalidInput(_) => TorsionStatus::InvalidInput,
            Error::Parse { .. } => TorsionStatus::Parse,
            Error::Disconnected(_) => TorsionStatus::Disconnected,
            Error::Exhausted(_) => TorsionStatus::Exhausted,
            Error::Io(_) => TorsionStatus::Io,
        }
    }
}

/// An integer matrix together with its Smith decomposition.
pub struct TorsionMatrix {
    matrix: IntMatrix,
    snf: SnfResult,
}

/// A finite quotient graph of a tree.
pub struct TorsionGraph {
    graph: QuotientGraph,
}

/// A finite Ã₂ quotient complex.
pub struct TorsionComplex {
    complex: A2Complex,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(TorsionStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), format!("{}: {}", e.kind(), e.detail()))
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure> + UnwindSafe) -> TorsionStatus {
    let outcome = catch_unwind(f).unwrap_or_else(|_| Err(Failure(TorsionStatus::Panic, "panic: internal error".into())));
    match outcome {
        Ok(()) => {
            set_last_error("");
            TorsionStatus::Ok
        }
        Err(Failure(status, msg)) => {
            set_last_error(&msg);
            status
        }
    }
}

fn null() -> Failure {
    Failure(TorsionStatus::NullPointer, "null-pointer: required pointer argument is null".into())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(TorsionStatus::Utf8, format!("utf8: {e}")))
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, Failure> {
    h.as_ref().ok_or_else(null)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(TorsionStatus::Utf8, "utf8: interior nul".into()))?;
    write(out, c.into_raw())
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn torsion_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn torsion_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn new_matrix(matrix: IntMatrix) -> Result<*mut TorsionMatrix, Failure> {
    let snf = snf(&matrix)?;
    Ok(Box::into_raw(Box::new(TorsionMatrix { matrix, snf })))
}

/// Builds a `rows x cols` matrix from row-major entries and decomposes it.
///
/// # Safety
/// `entries` must point to `rows * cols` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_matrix_new(
    rows: usize,
    cols: usize,
    entries: *const i64,
    out: *mut *mut TorsionMatrix,
) -> TorsionStatus {
    guard(move || {
        let len = rows.checked_mul(cols).ok_or_else(|| Failure::from(Error::Dimension("size overflows".into())))?;
        let slice = if len == 0 {
            &[][..]
        } else if entries.is_null() {
            return Err(null());
        } else {
            std::slice::from_raw_parts(entries, len)
        };
        let m = IntMatrix::new(rows, cols, slice.iter().map(|&x| x.into()).collect())?;
        write(out, new_matrix(m)?)
    })
}

/// Parses the text matrix format (`rows cols` header, then one row per line).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_matrix_parse(text_ptr: *const c_char, out: *mut *mut TorsionMatrix) -> TorsionStatus {
    guard(move || {
        let m = IntMatrix::parse(text(text_ptr)?)?;
        write(out, new_matrix(m)?)
    })
}

/// # Safety
/// `m` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn torsion_matrix_free(m: *mut TorsionMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Writes the row and column counts.
///
/// # Safety
/// `m` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_matrix_shape(m: *const TorsionMatrix, rows: *mut usize, cols: *mut usize) -> TorsionStatus {
    guard(move || {
        let m = handle(m)?;
        write(rows, m.matrix.rows())?;
        write(cols, m.matrix.cols())
    })
}

/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_matrix_rank(m: *const TorsionMatrix, out: *mut usize) -> TorsionStatus {
    guard(move || write(out, handle(m)?.snf.rank()))
}

/// Invariant factors as a space-separated decimal string, zeros included.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_matrix_invariant_factors(m: *const TorsionMatrix, out: *mut *mut c_char) -> TorsionStatus {
    guard(move || {
        let f: Vec<String> = handle(m)?.snf.invariant_factors.iter().map(|d| d.to_string()).collect();
        write_string(out, f.join(" "))
    })
}

/// Order of generator `index` in the cokernel, as a decimal string or
/// `"infinite"`.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_matrix_element_order(
    m: *const TorsionMatrix,
    index: usize,
    out: *mut *mut c_char,
) -> TorsionStatus {
    guard(move || {
        let order = handle(m)?.snf.order_of(index)?;
        write_string(out, order.to_string())
    })
}

/// Parses the graph format (`vertex <id>`, `geom-edge <id> <u> <v>`).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_graph_parse(text_ptr: *const c_char, out: *mut *mut TorsionGraph) -> TorsionStatus {
    guard(move || {
        let graph = QuotientGraph::parse(text(text_ptr)?)?;
        write(out, Box::into_raw(Box::new(TorsionGraph { graph })))
    })
}

/// # Safety
/// `g` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn torsion_graph_free(g: *mut TorsionGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Order of `[I]` in the universal group of the tree relations.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_graph_identity_order(g: *const TorsionGraph, out: *mut *mut c_char) -> TorsionStatus {
    guard(move || {
        let order = tree_relations(&handle(g)?.graph)?.order_of_identity()?;
        write_string(out, order.to_string())
    })
}

fn new_complex(complex: A2Complex) -> *mut TorsionComplex {
    Box::into_raw(Box::new(TorsionComplex { complex }))
}

/// Parses the complex format (`vertex`, `edge`, `chamber` lines).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_complex_parse(text_ptr: *const c_char, out: *mut *mut TorsionComplex) -> TorsionStatus {
    guard(move || {
        let c = A2Complex::parse(text(text_ptr)?)?;
        write(out, new_complex(c))
    })
}

/// First one-vertex complex found by the chamber-system search for `q`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_complex_search(q: u64, out: *mut *mut TorsionComplex) -> TorsionStatus {
    guard(move || {
        let found = search_presentation(q, false)?;
        write(out, new_complex(found.complex))
    })
}

/// # Safety
/// `c` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn torsion_complex_free(c: *mut TorsionComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Vertex, edge and chamber counts.
///
/// # Safety
/// `c` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_complex_counts(
    c: *const TorsionComplex,
    n0: *mut usize,
    n1: *mut usize,
    n2: *mut usize,
) -> TorsionStatus {
    guard(move || {
        let c = &handle(c)?.complex;
        write(n0, c.n0())?;
        write(n1, c.n1())?;
        write(n2, c.n2())
    })
}

/// Checks every vertex link and writes the common projective plane order.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_complex_link_order(c: *const TorsionComplex, out: *mut u64) -> TorsionStatus {
    guard(move || write(out, handle(c)?.complex.validate_links()?))
}

/// Text form of the complex, readable by [`torsion_complex_parse`].
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_complex_to_text(c: *const TorsionComplex, out: *mut *mut c_char) -> TorsionStatus {
    guard(move || write_string(out, handle(c)?.complex.to_text()))
}

/// Order of `[I]` under the Ã₂ relations, with the M_k rows when
/// `with_mk` is true.
///
/// # Safety
/// `c` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_complex_identity_order(
    c: *const TorsionComplex,
    with_mk: bool,
    out: *mut *mut c_char,
) -> TorsionStatus {
    guard(move || {
        let order = a2_relations(&handle(c)?.complex, with_mk)?.order_of_identity()?;
        write_string(out, order.to_string())
    })
}

/// The annihilator bound `m` for `(n, q, n0)` as a decimal string.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_bound(n: u64, q: u64, n0: u64, out: *mut *mut c_char) -> TorsionStatus {
    guard(move || write_string(out, bound(n, q, n0)?.m.to_string()))
}

/// Coxeter length of the cyclic permutation `cycle_perm(n, k)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn torsion_weyl_length(n: usize, k: usize, out: *mut usize) -> TorsionStatus {
    guard(move || write(out, cycle_perm(n, k)?.length()))
}
