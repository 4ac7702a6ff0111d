//! C ABI over `newton-graph`.
//!
//! Every function returns an [`NgStatus`]; on failure the message is
//! available from [`ng_last_error`] on the same thread. Handles are opaque
//! and released with their `_free` function; strings returned through
//! `char **` are released with [`ng_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use newton_graph::cli_io::{canonical_json, cmd_analyze};
use newton_graph::complex_poly::{newton_map, newton_map_from_roots, Complex64, Polynomial, RationalMap, RootSpec, SpecRoot, SpherePoint};
use newton_graph::newton_graph::{newton_graph_level, NewtonGraphRun};
use newton_graph::planar_graph::io::graph_to_json;
use newton_graph::thurston::{is_irreducible, leading_eigenvalue, NonnegMatrix};
use newton_graph::{Error, Tolerances};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NgStatus {
    Ok = 0,
    /// Bad input data or arguments.
    Input = 1,
    /// A negative mathematical verdict, such as a map that is not
    /// postcritically fixed.
    Verdict = 2,
    /// A numerical failure.
    Numerical = 3,
    NullPointer = 4,
    Panic = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NgStatus {
    match e.exit_code() {
        2 => NgStatus::Verdict,
        3 => NgStatus::Numerical,
        _ => NgStatus::Input,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (NgStatus, String)>) -> NgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NgStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            NgStatus::Panic
        }
    }
}

fn lib(e: Error) -> (NgStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (NgStatus, String) {
    (NgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn slice<'a, T>(p: *const T, n: usize, what: &str) -> Result<&'a [T], (NgStatus, String)> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (NgStatus, String)> {
    p.as_mut().ok_or_else(|| null(what))
}

fn give_string(s: String, dst: &mut *mut c_char) -> Result<(), (NgStatus, String)> {
    *dst = CString::new(s).map_err(|_| (NgStatus::Input, "string with interior nul".to_string()))?.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn ng_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static version string.
#[no_mangle]
pub extern "C" fn ng_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ng_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A Newton map.
pub struct NgMap {
    map: RationalMap,
    tol: Tolerances,
}

/// Newton map of the polynomial with the given roots. `mult` may be null
/// for simple roots.
///
/// # Safety
/// `re`, `im` (and `mult` when not null) must point to `n` values; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ng_map_from_roots(
    re: *const f64,
    im: *const f64,
    mult: *const u32,
    n: usize,
    out_map: *mut *mut NgMap,
) -> NgStatus {
    guard(|| {
        let dst = out(out_map, "out_map")?;
        *dst = ptr::null_mut();
        let (re, im) = (slice(re, n, "re")?, slice(im, n, "im")?);
        let mult = if mult.is_null() { vec![1; n] } else { slice(mult, n, "mult")?.to_vec() };
        let roots = (0..n).map(|i| SpecRoot { z: Complex64::new(re[i], im[i]), mult: mult[i] }).collect();
        let spec = RootSpec::new(roots).map_err(lib)?;
        *dst = Box::into_raw(Box::new(NgMap { map: newton_map_from_roots(&spec), tol: Tolerances::default() }));
        Ok(())
    })
}

/// Newton map of the polynomial with coefficients in ascending degree.
///
/// # Safety
/// `re` and `im` must point to `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ng_map_from_coeffs(re: *const f64, im: *const f64, n: usize, out_map: *mut *mut NgMap) -> NgStatus {
    guard(|| {
        let dst = out(out_map, "out_map")?;
        *dst = ptr::null_mut();
        let (re, im) = (slice(re, n, "re")?, slice(im, n, "im")?);
        let p = Polynomial::new((0..n).map(|i| Complex64::new(re[i], im[i])).collect());
        *dst = Box::into_raw(Box::new(NgMap { map: newton_map(&p).map_err(lib)?, tol: Tolerances::default() }));
        Ok(())
    })
}

/// Overrides the fixed-point tolerance used by later calls on `map`.
///
/// # Safety
/// `map` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ng_map_set_tol_fix(map: *mut NgMap, tol_fix: f64) -> NgStatus {
    guard(|| {
        let m = out(map, "map")?;
        if !(tol_fix.is_finite() && tol_fix > 0.0) {
            return Err((NgStatus::Input, format!("tolerance must be positive, got {tol_fix}")));
        }
        m.tol.eps_fix = tol_fix;
        Ok(())
    })
}

/// # Safety
/// `map` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ng_map_free(map: *mut NgMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// # Safety
/// `map` must be a live handle and `degree` writable.
#[no_mangle]
pub unsafe extern "C" fn ng_map_degree(map: *const NgMap, degree: *mut usize) -> NgStatus {
    guard(|| {
        let m = map.as_ref().ok_or_else(|| null("map"))?;
        *out(degree, "degree")? = m.map.degree();
        Ok(())
    })
}

/// Evaluates the map; `is_infinite` is set when the value is infinity.
///
/// # Safety
/// `map` must be a live handle and the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn ng_map_eval(
    map: *const NgMap,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    is_infinite: *mut bool,
) -> NgStatus {
    guard(|| {
        let m = map.as_ref().ok_or_else(|| null("map"))?;
        let (r, i, inf) = (out(out_re, "out_re")?, out(out_im, "out_im")?, out(is_infinite, "is_infinite")?);
        match m.map.eval(SpherePoint::Finite(Complex64::new(re, im))).map_err(lib)? {
            SpherePoint::Finite(w) => {
                (*r, *i, *inf) = (w.re, w.im, false);
            }
            SpherePoint::Infinity => {
                (*r, *i, *inf) = (f64::INFINITY, f64::INFINITY, true);
            }
        }
        Ok(())
    })
}

/// Analysis report as canonical JSON.
///
/// # Safety
/// `map` must be a live handle and `json` writable.
#[no_mangle]
pub unsafe extern "C" fn ng_map_analyze(map: *const NgMap, json: *mut *mut c_char) -> NgStatus {
    guard(|| {
        let m = map.as_ref().ok_or_else(|| null("map"))?;
        let dst = out(json, "json")?;
        *dst = ptr::null_mut();
        give_string(canonical_json(&cmd_analyze(&m.map, &m.tol).map_err(lib)?), dst)
    })
}

/// Pullback levels up to the Newton graph.
pub struct NgNewtonGraph {
    run: NewtonGraphRun,
}

/// # Safety
/// `map` must be a live handle and `out_graph` writable.
#[no_mangle]
pub unsafe extern "C" fn ng_newton_graph_compute(
    map: *const NgMap,
    max_level: usize,
    out_graph: *mut *mut NgNewtonGraph,
) -> NgStatus {
    guard(|| {
        let m = map.as_ref().ok_or_else(|| null("map"))?;
        let dst = out(out_graph, "out_graph")?;
        *dst = ptr::null_mut();
        let run = newton_graph_level(&m.map, max_level, &m.tol).map_err(lib)?;
        *dst = Box::into_raw(Box::new(NgNewtonGraph { run }));
        Ok(())
    })
}

/// # Safety
/// `graph` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ng_newton_graph_free(graph: *mut NgNewtonGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// The level `N` and whether `(ΔN, f)` passed validation.
///
/// # Safety
/// `graph` must be a live handle and the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn ng_newton_graph_level(graph: *const NgNewtonGraph, level: *mut usize, valid: *mut bool) -> NgStatus {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        *out(level, "level")? = g.run.n;
        *out(valid, "valid")? = g.run.report.overall;
        Ok(())
    })
}

/// Vertex and edge counts of level `n`.
///
/// # Safety
/// `graph` must be a live handle and the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn ng_newton_graph_counts(
    graph: *const NgNewtonGraph,
    n: usize,
    vertices: *mut usize,
    edges: *mut usize,
) -> NgStatus {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        let l = g.run.levels.get(n).ok_or_else(|| (NgStatus::Input, format!("no level {n}")))?;
        *out(vertices, "vertices")? = l.graph.vertex_count();
        *out(edges, "edges")? = l.graph.edge_count();
        Ok(())
    })
}

/// Level `n` with its self-map in the graph JSON schema.
///
/// # Safety
/// `graph` must be a live handle and `json` writable.
#[no_mangle]
pub unsafe extern "C" fn ng_newton_graph_json(graph: *const NgNewtonGraph, n: usize, json: *mut *mut c_char) -> NgStatus {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        let dst = out(json, "json")?;
        *dst = ptr::null_mut();
        let l = g.run.levels.get(n).ok_or_else(|| (NgStatus::Input, format!("no level {n}")))?;
        give_string(canonical_json(&graph_to_json(&l.graph, Some(&l.map), false)), dst)
    })
}

/// The validation report of the final level.
///
/// # Safety
/// `graph` must be a live handle and `json` writable.
#[no_mangle]
pub unsafe extern "C" fn ng_newton_graph_report(graph: *const NgNewtonGraph, json: *mut *mut c_char) -> NgStatus {
    guard(|| {
        let g = graph.as_ref().ok_or_else(|| null("graph"))?;
        let dst = out(json, "json")?;
        *dst = ptr::null_mut();
        give_string(canonical_json(&g.run.report.to_json()), dst)
    })
}

unsafe fn matrix(entries: *const f64, n: usize) -> Result<NonnegMatrix, (NgStatus, String)> {
    let flat = slice(entries, n * n, "entries")?;
    NonnegMatrix::new(flat.chunks(n.max(1)).map(<[f64]>::to_vec).collect()).map_err(lib)
}

/// Spectral radius of the nonnegative `n` by `n` row-major matrix.
///
/// # Safety
/// `entries` must point to `n * n` values and `value` be writable.
#[no_mangle]
pub unsafe extern "C" fn ng_leading_eigenvalue(entries: *const f64, n: usize, value: *mut f64) -> NgStatus {
    guard(|| {
        let m = matrix(entries, n)?;
        *out(value, "value")? = leading_eigenvalue(&m).map_err(lib)?;
        Ok(())
    })
}

/// # Safety
/// `entries` must point to `n * n` values and `irreducible` be writable.
#[no_mangle]
pub unsafe extern "C" fn ng_is_irreducible(entries: *const f64, n: usize, irreducible: *mut bool) -> NgStatus {
    guard(|| {
        let m = matrix(entries, n)?;
        *out(irreducible, "irreducible")? = is_irreducible(&m);
        Ok(())
    })
}

/// Copies the last error into a caller buffer, truncating; returns the
/// full length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ng_last_error_copy(buf: *mut c_char, len: usize) -> usize {
    let msg = ng_last_error();
    if msg.is_null() {
        return 0;
    }
    let bytes = CStr::from_ptr(msg).to_bytes();
    if !buf.is_null() && len > 0 {
        let k = bytes.len().min(len - 1);
        ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, k);
        *buf.add(k) = 0;
    }
    bytes.len()
}
