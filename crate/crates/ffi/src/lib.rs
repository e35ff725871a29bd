//! C interface to `realab`.
//!
//! Lattices live behind the opaque [`RlLattice`] handle. Every fallible call
//! returns an [`RlStatus`]; on failure `rl_last_error` describes the problem
//! until the next call on the same thread. Strings handed out by the library
//! must be released with `rl_string_free`, handles with `rl_lattice_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use realab::components::{pi0_via_cohomology, pi0_via_glue};
use realab::io::{emit_lattice, parse_documents, Document, LatticeDocument};
use realab::isogeny::{decide_imaginary_isogeny, normal_form_1d, Decision, NoIsogeny};
use realab::lattice::split;
use realab::polarization::{
    decide_polarizable, dual_lattice, verify_polarization, PolarizabilityCertificate, SearchBudget,
};

/// Opaque lattice handle.
pub struct RlLattice {
    doc: LatticeDocument,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RlStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Input text is not UTF-8.
    Utf8 = 2,
    /// Syntax error or invalid lattice data.
    Parse = 3,
    /// Input text holds no lattice, or more than one.
    DocumentCount = 4,
    /// The operation does not apply to this input (wrong genus, field mismatch, missing form).
    Invalid = 5,
    /// Computation failed unexpectedly.
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RlVerdict {
    Yes = 0,
    No = 1,
    Unknown = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: RlStatus, msg: impl Into<String>) -> RlStatus {
    set_error(msg);
    status
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

unsafe fn lattice_ref<'a>(p: *const RlLattice) -> Option<&'a RlLattice> {
    p.as_ref()
}

fn verdict_text(decision: &Decision) -> (RlVerdict, String) {
    match decision {
        Decision::Yes(u) => (RlVerdict::Yes, u.to_string()),
        Decision::No(NoIsogeny::IrrationalRatio(r)) => (RlVerdict::No, format!("ratio {r} is irrational")),
        Decision::No(NoIsogeny::TrivialSolutionSpace) => (RlVerdict::No, "no nonzero U maps QM into QM'".into()),
        Decision::No(NoIsogeny::SingularSolutionSpace { dimension }) => {
            (RlVerdict::No, format!("all {dimension}-parameter solutions are singular"))
        }
        Decision::Unknown { candidates_tried } => {
            (RlVerdict::Unknown, format!("{candidates_tried} candidates tried"))
        }
    }
}

/// Parse exactly one `lattice` or `descended` block. Descended blocks are
/// split into real form.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_lattice_parse(text: *const c_char, out: *mut *mut RlLattice) -> RlStatus {
    clear_error();
    if text.is_null() || out.is_null() {
        return fail(RlStatus::NullArgument, "null argument");
    }
    *out = ptr::null_mut();
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        return fail(RlStatus::Utf8, "input is not valid UTF-8");
    };
    let docs = match parse_documents(text) {
        Ok(d) => d,
        Err(e) => return fail(RlStatus::Parse, format!("{e} [{}]", e.code())),
    };
    if docs.len() != 1 {
        return fail(RlStatus::DocumentCount, format!("expected one document, found {}", docs.len()));
    }
    let doc = match docs.into_iter().next().unwrap() {
        Document::Real(l) => l,
        Document::Descended(d) => match split(&d.lattice) {
            Ok((lattice, _)) => LatticeDocument::new(d.name, lattice),
            Err(e) => return fail(RlStatus::Invalid, e.to_string()),
        },
    };
    *out = Box::into_raw(Box::new(RlLattice { doc }));
    RlStatus::Ok
}

/// # Safety
/// `lattice` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rl_lattice_free(lattice: *mut RlLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn rl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next library call on this thread.
#[no_mangle]
pub extern "C" fn rl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `lattice` must be a live handle; returns 0 for null.
#[no_mangle]
pub unsafe extern "C" fn rl_lattice_genus(lattice: *const RlLattice) -> usize {
    lattice_ref(lattice).map_or(0, |l| l.doc.lattice.g())
}

/// Text form of the lattice, including any attached forms.
///
/// # Safety
/// `lattice` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_lattice_emit(lattice: *const RlLattice, out: *mut *mut c_char) -> RlStatus {
    clear_error();
    let (Some(l), false) = (lattice_ref(lattice), out.is_null()) else {
        return fail(RlStatus::NullArgument, "null argument");
    };
    *out = into_c_string(emit_lattice(&l.doc));
    RlStatus::Ok
}

/// Rank over 𝔽₂ of the component group of the real points.
///
/// # Safety
/// `lattice` must be a live handle and `f2_rank` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_components(lattice: *const RlLattice, f2_rank: *mut usize) -> RlStatus {
    clear_error();
    let (Some(l), false) = (lattice_ref(lattice), f2_rank.is_null()) else {
        return fail(RlStatus::NullArgument, "null argument");
    };
    let glue = match pi0_via_glue(&l.doc.lattice) {
        Ok(c) => c,
        Err(e) => return fail(RlStatus::Invalid, e.to_string()),
    };
    match pi0_via_cohomology(&l.doc.lattice) {
        Ok(c) if c == glue => {}
        Ok(c) => {
            return fail(RlStatus::Internal, format!("component computations disagree ({} vs {})", glue.f2_rank, c.f2_rank))
        }
        Err(e) => return fail(RlStatus::Internal, e.to_string()),
    }
    *f2_rank = glue.f2_rank;
    RlStatus::Ok
}

/// # Safety
/// `lattice` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_lattice_dual(lattice: *const RlLattice, out: *mut *mut RlLattice) -> RlStatus {
    clear_error();
    let (Some(l), false) = (lattice_ref(lattice), out.is_null()) else {
        return fail(RlStatus::NullArgument, "null argument");
    };
    *out = ptr::null_mut();
    match dual_lattice(&l.doc.lattice) {
        Ok(d) => {
            let doc = LatticeDocument::new(format!("{}-dual", l.doc.name), d.lattice);
            *out = Box::into_raw(Box::new(RlLattice { doc }));
            RlStatus::Ok
        }
        Err(e) => fail(RlStatus::Invalid, e.to_string()),
    }
}

/// Check the `S =` form attached to the lattice. `valid` is set to 1 when it
/// is a polarization and 0 otherwise.
///
/// # Safety
/// `lattice` must be a live handle and `valid` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_polarize_verify(lattice: *const RlLattice, valid: *mut i32) -> RlStatus {
    clear_error();
    let (Some(l), false) = (lattice_ref(lattice), valid.is_null()) else {
        return fail(RlStatus::NullArgument, "null argument");
    };
    let Some(s) = &l.doc.polarization else {
        return fail(RlStatus::Invalid, "no S attached");
    };
    match verify_polarization(&l.doc.lattice, s) {
        Ok(ok) => {
            *valid = i32::from(ok);
            RlStatus::Ok
        }
        Err(e) => fail(RlStatus::Invalid, e.to_string()),
    }
}

/// Search for a polarization. On `Yes` the witness is the S matrix, on `No`
/// the certificate Q, on `Unknown` null. `witness` may be null if the caller
/// only wants the verdict.
///
/// # Safety
/// `lattice` must be a live handle; `verdict` must be valid; `witness` null or valid.
#[no_mangle]
pub unsafe extern "C" fn rl_polarize_find(
    lattice: *const RlLattice,
    iterations: usize,
    restarts: usize,
    seed: u64,
    verdict: *mut RlVerdict,
    witness: *mut *mut c_char,
) -> RlStatus {
    clear_error();
    let (Some(l), false) = (lattice_ref(lattice), verdict.is_null()) else {
        return fail(RlStatus::NullArgument, "null argument");
    };
    let budget = SearchBudget { iterations, restarts, seed };
    let cert = match decide_polarizable(&l.doc.lattice, &budget) {
        Ok(c) => c,
        Err(e) => return fail(RlStatus::Invalid, e.to_string()),
    };
    let (v, text) = match cert {
        PolarizabilityCertificate::Yes(s) => (RlVerdict::Yes, Some(s.matrix().to_string())),
        PolarizabilityCertificate::No(q) => (RlVerdict::No, Some(q.to_string())),
        PolarizabilityCertificate::Unknown(_) => (RlVerdict::Unknown, None),
    };
    *verdict = v;
    if !witness.is_null() {
        *witness = text.map_or(ptr::null_mut(), into_c_string);
    }
    RlStatus::Ok
}

/// Decide whether two lattices are imaginary isogenous. `detail` receives the
/// witness matrix U on `Yes` and a short certificate description otherwise.
///
/// # Safety
/// `a`, `b` must be live handles; `verdict` valid; `detail` null or valid.
#[no_mangle]
pub unsafe extern "C" fn rl_isogeny_decide(
    a: *const RlLattice,
    b: *const RlLattice,
    budget: u64,
    verdict: *mut RlVerdict,
    detail: *mut *mut c_char,
) -> RlStatus {
    clear_error();
    let (Some(a), Some(b), false) = (lattice_ref(a), lattice_ref(b), verdict.is_null()) else {
        return fail(RlStatus::NullArgument, "null argument");
    };
    let decision = match decide_imaginary_isogeny(&a.doc.lattice, &b.doc.lattice, budget) {
        Ok(d) => d,
        Err(e) => return fail(RlStatus::Invalid, e.to_string()),
    };
    let (v, text) = verdict_text(&decision);
    *verdict = v;
    if !detail.is_null() {
        *detail = into_c_string(text);
    }
    RlStatus::Ok
}

/// Normal form of a one-dimensional lattice, e.g. `rectangular alpha = 2`.
///
/// # Safety
/// `lattice` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rl_normal_form_1d(lattice: *const RlLattice, out: *mut *mut c_char) -> RlStatus {
    clear_error();
    let (Some(l), false) = (lattice_ref(lattice), out.is_null()) else {
        return fail(RlStatus::NullArgument, "null argument");
    };
    match normal_form_1d(&l.doc.lattice) {
        Ok(nf) => {
            *out = into_c_string(nf.to_string());
            RlStatus::Ok
        }
        Err(e) => fail(RlStatus::Invalid, e.to_string()),
    }
}
