//! C ABI over the `twostring` library.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! a [`TsStatus`]; on failure a description is available from
//! [`ts_last_error`] until the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use twostring::compression::{commutator_check, Thresholds, Verdict};
use twostring::diagram::relations::check_relation;
use twostring::diagram::{builtin, evaluate, parse_diagram, Backend, Builtin, Diagram};
use twostring::protocol::io::{random_blocks, random_input};
use twostring::protocol::{run_mct_controlled, Mode};
use twostring::qudit::io::{operator_from_json, operator_to_json};
use twostring::qudit::{Operator, Pauli};
use twostring::scalar::Tolerance;
use twostring::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Shape = 4,
    NonUnitary = 5,
    NotCompressed = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsBackend {
    Dense = 0,
    Symbolic = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsAxis {
    X = 0,
    Y = 1,
    Z = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsVerdict {
    Compressed = 0,
    NotCompressed = 1,
    Indeterminate = 2,
}

/// Opaque matrix handle.
pub struct TsOperator(Operator);

/// Opaque diagram handle.
pub struct TsDiagram(Diagram);

/// Summary of a batch of protocol runs.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TsMctSummary {
    pub pass: bool,
    pub runs: usize,
    pub branches: usize,
    pub max_dev: f64,
    pub resource_states: usize,
    pub resource_qudits: usize,
    pub cdits: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TsStatus {
    match e {
        Error::InvalidDimension(_)
        | Error::QuditOutOfRange { .. }
        | Error::InvalidTolerance(_)
        | Error::UnknownBuiltin(_)
        | Error::UnknownRelation(_) => TsStatus::InvalidArgument,
        Error::Json(_) | Error::Malformed(_) | Error::WidthViolation { .. } | Error::OddBoundary(_) => {
            TsStatus::Parse
        }
        Error::ShapeMismatch { .. } => TsStatus::Shape,
        Error::NonUnitary(_) => TsStatus::NonUnitary,
        Error::NotBlockDiagonal { .. } | Error::NotXCompressed { .. } => TsStatus::NotCompressed,
        Error::Io(_) => TsStatus::Io,
    }
}

/// Runs `f`, mapping library errors and panics to status codes.
fn guard<F>(f: F) -> TsStatus
where
    F: FnOnce() -> Result<(), TsFail>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TsStatus::Ok,
        Ok(Err(TsFail::Null)) => {
            set_error("null pointer argument".into());
            TsStatus::NullPointer
        }
        Ok(Err(TsFail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(TsFail::Arg(msg))) => {
            set_error(msg);
            TsStatus::InvalidArgument
        }
        Err(_) => {
            set_error("internal panic".into());
            TsStatus::Panic
        }
    }
}

enum TsFail {
    Null,
    Lib(Error),
    Arg(String),
}

impl From<Error> for TsFail {
    fn from(e: Error) -> Self {
        TsFail::Lib(e)
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, TsFail> {
    if s.is_null() {
        return Err(TsFail::Null);
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| TsFail::Arg("string argument is not UTF-8".into()))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, TsFail> {
    p.as_mut().ok_or(TsFail::Null)
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, TsFail> {
    p.as_ref().ok_or(TsFail::Null)
}

/// Message of the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ts_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ts_status_str(status: TsStatus) -> *const c_char {
    let s: &'static CStr = match status {
        TsStatus::Ok => c"ok",
        TsStatus::NullPointer => c"null pointer",
        TsStatus::InvalidArgument => c"invalid argument",
        TsStatus::Parse => c"parse error",
        TsStatus::Shape => c"shape mismatch",
        TsStatus::NonUnitary => c"non-unitary input",
        TsStatus::NotCompressed => c"not compressed",
        TsStatus::Io => c"i/o error",
        TsStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from a `ts_*` function returning an owned string, or be NULL.
#[no_mangle]
pub unsafe extern "C" fn ts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a diagram JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_diagram_parse(json: *const c_char, out: *mut *mut TsDiagram) -> TsStatus {
    guard(|| {
        let out = out_arg(out)?;
        let diag = parse_diagram(str_arg(json)?)?;
        *out = Box::into_raw(Box::new(TsDiagram(diag)));
        Ok(())
    })
}

/// Builds a named diagram such as `"X"`, `"bell"` or `"max(3)"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_diagram_builtin(
    name: *const c_char,
    d: usize,
    out: *mut *mut TsDiagram,
) -> TsStatus {
    guard(|| {
        let out = out_arg(out)?;
        let which: Builtin = str_arg(name)?.parse()?;
        *out = Box::into_raw(Box::new(TsDiagram(builtin(&which, d)?)));
        Ok(())
    })
}

/// # Safety
/// `diag` must come from this library or be NULL; it must not be used again.
#[no_mangle]
pub unsafe extern "C" fn ts_diagram_free(diag: *mut TsDiagram) {
    if !diag.is_null() {
        drop(Box::from_raw(diag));
    }
}

/// Evaluates a diagram to its matrix.
///
/// # Safety
/// `diag` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_diagram_evaluate(
    diag: *const TsDiagram,
    backend: TsBackend,
    out: *mut *mut TsOperator,
) -> TsStatus {
    guard(|| {
        let diag = ref_arg(diag)?;
        let out = out_arg(out)?;
        let b = match backend {
            TsBackend::Dense => Backend::Dense,
            TsBackend::Symbolic => Backend::Symbolic,
        };
        *out = Box::into_raw(Box::new(TsOperator(evaluate(&diag.0, b)?)));
        Ok(())
    })
}

/// Parses a matrix JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_operator_from_json(
    json: *const c_char,
    out: *mut *mut TsOperator,
) -> TsStatus {
    guard(|| {
        let out = out_arg(out)?;
        let op = operator_from_json(str_arg(json)?)?;
        *out = Box::into_raw(Box::new(TsOperator(op)));
        Ok(())
    })
}

/// Serializes a matrix to JSON; free the result with [`ts_string_free`].
///
/// # Safety
/// `op` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_operator_to_json(op: *const TsOperator, out: *mut *mut c_char) -> TsStatus {
    guard(|| {
        let op = ref_arg(op)?;
        let out = out_arg(out)?;
        let text = operator_to_json(&op.0).to_string();
        *out = CString::new(text)
            .map_err(|_| TsFail::Arg("interior NUL".into()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `op` must come from this library or be NULL; it must not be used again.
#[no_mangle]
pub unsafe extern "C" fn ts_operator_free(op: *mut TsOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Local dimension and output/input qudit counts.
///
/// # Safety
/// `op` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ts_operator_shape(
    op: *const TsOperator,
    d: *mut usize,
    n_out: *mut usize,
    n_in: *mut usize,
) -> TsStatus {
    guard(|| {
        let op = ref_arg(op)?;
        *out_arg(d)? = op.0.d();
        *out_arg(n_out)? = op.0.n_out();
        *out_arg(n_in)? = op.0.n_in();
        Ok(())
    })
}

/// Copies the row-major entries into `re` and `im`, each of length `len`,
/// which must equal rows·cols.
///
/// # Safety
/// `re` and `im` must each point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn ts_operator_entries(
    op: *const TsOperator,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> TsStatus {
    guard(|| {
        let op = ref_arg(op)?;
        if re.is_null() || im.is_null() {
            return Err(TsFail::Null);
        }
        let data = op.0.data();
        if len != data.len() {
            return Err(TsFail::Lib(Error::ShapeMismatch {
                expected: data.len().to_string(),
                found: len.to_string(),
            }));
        }
        let re = std::slice::from_raw_parts_mut(re, len);
        let im = std::slice::from_raw_parts_mut(im, len);
        for (i, z) in data.iter().enumerate() {
            re[i] = z.re;
            im[i] = z.im;
        }
        Ok(())
    })
}

/// Commutator test of `op` against a Pauli on qudit `j` (1-based) with the
/// relative pass threshold `tol`.
///
/// # Safety
/// `op` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ts_compression_check(
    op: *const TsOperator,
    j: usize,
    axis: TsAxis,
    tol: f64,
    verdict: *mut TsVerdict,
    norm: *mut f64,
) -> TsStatus {
    guard(|| {
        let op = ref_arg(op)?;
        let verdict = out_arg(verdict)?;
        let norm = out_arg(norm)?;
        let p = match axis {
            TsAxis::X => Pauli::X,
            TsAxis::Y => Pauli::Y,
            TsAxis::Z => Pauli::Z,
        };
        let c = commutator_check(&op.0, j, p, Thresholds::with_pass(tol)?)?;
        *norm = c.norm;
        *verdict = match c.verdict {
            Verdict::Compressed => TsVerdict::Compressed,
            Verdict::NotCompressed => TsVerdict::NotCompressed,
            Verdict::Indeterminate => TsVerdict::Indeterminate,
        };
        Ok(())
    })
}

/// Checks one planar relation by id in dimension `d`.
///
/// # Safety
/// `id` must be a NUL-terminated string; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ts_relation_check(
    id: *const c_char,
    d: usize,
    tol: f64,
    pass: *mut bool,
    max_dev: *mut f64,
) -> TsStatus {
    guard(|| {
        let pass = out_arg(pass)?;
        let max_dev = out_arg(max_dev)?;
        let r = check_relation(str_arg(id)?, d, Tolerance::new(tol)?)?;
        *pass = r.pass;
        *max_dev = r.max_dev_dense.max(r.max_dev_symbolic);
        Ok(())
    })
}

/// Runs the controlled protocol on `trials` seeded random instances with
/// every measurement branch enumerated.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_mct_random(
    d: usize,
    n: usize,
    trials: usize,
    seed: u64,
    out: *mut TsMctSummary,
) -> TsStatus {
    guard(|| {
        let out = out_arg(out)?;
        if n == 0 || trials == 0 {
            return Err(TsFail::Arg("n and trials must be positive".into()));
        }
        let mut rng = twostring::random::rng(seed);
        let mut s = TsMctSummary {
            pass: true,
            ..Default::default()
        };
        for _ in 0..trials {
            let blocks = random_blocks(&mut rng, d, n);
            let input = random_input(&mut rng, d, n);
            let run = run_mct_controlled(d, &blocks, &input, &Mode::AllBranches)?;
            s.runs += 1;
            s.branches += run.branches.len();
            s.max_dev = s.max_dev.max(run.max_dev());
            s.pass &= run.all_matched() && run.cost.matches_expected_cost(n);
            s.resource_states = run.cost.resource_states;
            s.resource_qudits = run.cost.resource_qudits;
            s.cdits = run.cost.cdits;
        }
        *out = s;
        Ok(())
    })
}
