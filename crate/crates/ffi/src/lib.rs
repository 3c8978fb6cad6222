//! C ABI over `negdep`.
//!
//! Every fallible function returns an [`NdStatus`]; on failure the message is
//! kept per thread and read back with [`nd_last_error_message`]. Handles are
//! opaque and owned by the caller, who releases them with the matching
//! `*_free` function. Exact probabilities cross the boundary as `"num/den"`
//! strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use negdep::analyzer::{Analyzer, AnchoredBox, Budget};
use negdep::numeric::Rational;
use negdep::samplers::{generate, Generator, PointSet, SchemeSpec, Shift};
use negdep::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BudgetExceeded = 3,
    Unsupported = 4,
    HypothesisViolated = 5,
    BufferTooSmall = 6,
    OutOfRange = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NdScheme {
    Stratified = 0,
    Lhs = 1,
    Patterson = 2,
    Rsj = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NdShift {
    Grid = 0,
    Torus = 1,
    None = 2,
}

/// A scheme description under construction.
pub struct NdSpec(SchemeSpec);

/// A generated point set.
pub struct NdPointSet(PointSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> NdStatus {
    match err {
        Error::BudgetExceeded { .. } => NdStatus::BudgetExceeded,
        Error::Unsupported(_) => NdStatus::Unsupported,
        Error::HypothesisViolated(_) => NdStatus::HypothesisViolated,
        Error::Io(_) | Error::Json(_) | Error::Csv(_) => NdStatus::Internal,
        _ => NdStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and panics.
fn guard(f: impl FnOnce() -> Result<(), (NdStatus, String)>) -> NdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            NdStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            NdStatus::Internal
        }
    }
}

fn lib<T>(r: negdep::Result<T>) -> Result<T, (NdStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (NdStatus, String) {
    (NdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (NdStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (NdStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Copies `s` and a terminating nul into `buf`.
unsafe fn write_str(s: &str, buf: *mut c_char, cap: usize) -> Result<(), (NdStatus, String)> {
    if buf.is_null() {
        return Err(null("output buffer"));
    }
    if s.len() + 1 > cap {
        return Err((
            NdStatus::BufferTooSmall,
            format!("need {} bytes, buffer has {cap}", s.len() + 1),
        ));
    }
    ptr::copy_nonoverlapping(s.as_ptr().cast::<c_char>(), buf, s.len());
    *buf.add(s.len()) = 0;
    Ok(())
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn nd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf`. Returns the
/// buffer size the message needs (0 when there is no error).
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn nd_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| match &*e.borrow() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes_with_nul();
            if !buf.is_null() && cap > 0 {
                let n = bytes.len().min(cap);
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n - 1) = 0;
            }
            bytes.len()
        }
    })
}

/// New scheme with the default flags for its kind (the full construction).
/// Returns null for `dim == 0`.
#[no_mangle]
pub extern "C" fn nd_spec_new(scheme: NdScheme, n: u64, dim: u32) -> *mut NdSpec {
    if dim == 0 {
        set_error("dim must be positive".into());
        return ptr::null_mut();
    }
    let dim = dim as usize;
    let spec = match scheme {
        NdScheme::Stratified => SchemeSpec::stratified(n),
        NdScheme::Lhs => SchemeSpec::lhs(n, dim),
        NdScheme::Patterson => SchemeSpec::patterson(n, dim),
        NdScheme::Rsj => SchemeSpec::rsj(n, dim),
    };
    Box::into_raw(Box::new(NdSpec(spec)))
}

/// # Safety
/// `spec` must be null or a pointer from [`nd_spec_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nd_spec_free(spec: *mut NdSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Fixes the lattice generator to the residues `g[0..len]`.
///
/// # Safety
/// `spec` must be a live handle and `g` valid for `len` reads.
#[no_mangle]
pub unsafe extern "C" fn nd_spec_set_generator(spec: *mut NdSpec, g: *const u64, len: usize) -> NdStatus {
    guard(|| {
        let spec = spec.as_mut().ok_or_else(|| null("spec"))?;
        if g.is_null() {
            return Err(null("generator"));
        }
        spec.0.generator = Generator::Fixed(std::slice::from_raw_parts(g, len).to_vec());
        Ok(())
    })
}

/// # Safety
/// `spec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nd_spec_set_shift(spec: *mut NdSpec, shift: NdShift) -> NdStatus {
    guard(|| {
        let spec = spec.as_mut().ok_or_else(|| null("spec"))?;
        spec.0.shift = match shift {
            NdShift::Grid => Shift::Grid,
            NdShift::Torus => Shift::ContinuousTorus,
            NdShift::None => Shift::None,
        };
        Ok(())
    })
}

/// # Safety
/// `spec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn nd_spec_set_jitter(spec: *mut NdSpec, jitter: bool) -> NdStatus {
    guard(|| {
        let spec = spec.as_mut().ok_or_else(|| null("spec"))?;
        spec.0.jitter = jitter;
        Ok(())
    })
}

/// Draws one point set; `*out` receives a handle for [`nd_pointset_free`].
///
/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nd_generate(spec: *const NdSpec, seed: u64, out: *mut *mut NdPointSet) -> NdStatus {
    guard(|| {
        let spec = spec.as_ref().ok_or_else(|| null("spec"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let set = lib(generate(&spec.0, seed))?;
        *out = Box::into_raw(Box::new(NdPointSet(set)));
        Ok(())
    })
}

/// # Safety
/// `set` must be null or a handle from [`nd_generate`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nd_pointset_free(set: *mut NdPointSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nd_pointset_len(set: *const NdPointSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.n())
}

/// Dimension, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn nd_pointset_dim(set: *const NdPointSet) -> usize {
    set.as_ref().map_or(0, |s| s.0.dim())
}

/// Coordinate `coord` of point `point` as the nearest double.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn nd_pointset_get(
    set: *const NdPointSet,
    point: usize,
    coord: usize,
    out: *mut f64,
) -> NdStatus {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("point set"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if point >= set.0.n() || coord >= set.0.dim() {
            return Err((
                NdStatus::OutOfRange,
                format!("({point}, {coord}) outside {}x{}", set.0.n(), set.0.dim()),
            ));
        }
        *out = set.0.value(point, coord);
        Ok(())
    })
}

/// Copies all coordinates row-major into `buf`, which must hold
/// `len * dim` doubles.
///
/// # Safety
/// `set` must be a live handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn nd_pointset_copy(set: *const NdPointSet, buf: *mut f64, cap: usize) -> NdStatus {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("point set"))?;
        if buf.is_null() {
            return Err(null("buffer"));
        }
        let need = set.0.n() * set.0.dim();
        if cap < need {
            return Err((
                NdStatus::BufferTooSmall,
                format!("need {need} doubles, buffer has {cap}"),
            ));
        }
        for (k, x) in set.0.rows().flatten().enumerate() {
            *buf.add(k) = x;
        }
        Ok(())
    })
}

fn parse_box(s: &str, dim: usize) -> Result<AnchoredBox, (NdStatus, String)> {
    let xs = lib(s
        .split(',')
        .map(|x| x.trim().parse::<Rational>())
        .collect::<negdep::Result<Vec<_>>>())?;
    let xs = if xs.len() == 1 { vec![xs[0].clone(); dim] } else { xs };
    if xs.len() != dim {
        return Err((
            NdStatus::InvalidArgument,
            format!("anchor {s:?} does not have {dim} entries"),
        ));
    }
    lib(AnchoredBox::new(xs))
}

/// Exact `P(p_1 in Q, p_2 in R)` and `P(p_1 in Q) P(p_2 in R)` for the
/// anchored boxes `Q = [q, 1)`, `R = [r, 1)`. Anchors are comma lists of
/// fractions or decimals (`"3/5,0.6"`), or a single value for every
/// coordinate. The results are written as `"num/den"`. The enumeration budget
/// follows `ND_BUDGET`.
///
/// # Safety
/// `spec` must be a live handle, `q` and `r` nul-terminated strings, and the
/// output buffers valid for their capacities.
#[no_mangle]
pub unsafe extern "C" fn nd_pair_box_prob(
    spec: *const NdSpec,
    q: *const c_char,
    r: *const c_char,
    joint: *mut c_char,
    joint_cap: usize,
    product: *mut c_char,
    product_cap: usize,
) -> NdStatus {
    guard(|| {
        let spec = spec.as_ref().ok_or_else(|| null("spec"))?;
        let dim = spec.0.dim;
        let q = parse_box(str_arg(q, "q")?, dim)?;
        let r = parse_box(str_arg(r, "r")?, dim)?;
        let analyzer = Analyzer::new(lib(Budget::from_env())?);
        let law = lib(analyzer.pair_law(&spec.0))?;
        let j = lib(law.box_prob(&q, &r))?;
        let p = lib(law.marginal_product(&q, &r))?;
        write_str(&j.to_string(), joint, joint_cap)?;
        write_str(&p.to_string(), product, product_cap)
    })
}

/// Scans the corner grid `(1/resolution) Z^d` for pairwise-dependence
/// violations. `*violations` receives their count.
///
/// # Safety
/// `spec` must be a live handle and `violations` writable.
#[no_mangle]
pub unsafe extern "C" fn nd_nuod_scan(spec: *const NdSpec, resolution: u64, violations: *mut u64) -> NdStatus {
    guard(|| {
        let spec = spec.as_ref().ok_or_else(|| null("spec"))?;
        if violations.is_null() {
            return Err(null("violations"));
        }
        let analyzer = Analyzer::new(lib(Budget::from_env())?);
        let report = lib(analyzer.nuod_scan(&spec.0, resolution))?;
        *violations = report.violations.len() as u64;
        Ok(())
    })
}
