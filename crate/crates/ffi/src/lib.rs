//! C interface to the mgmmf matched filter.
//!
//! Graphs and rankings are opaque heap handles released with their `_free`
//! function. Every fallible call returns an [`MgmmfStatus`]; on failure the
//! message is available from [`mgmmf_last_error`] on the same thread.
//! Labels crossing the boundary are 1-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use mgmmf::filter::{dedup_matchings, mgmmf, MatchRanking};
use mgmmf::io::{parse_mx, read_mx};
use mgmmf::{Error, MultiplexGraph, PaddingScheme, SeedSpec, SolverConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgmmfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed graph, bad parameter or infeasible request.
    InvalidInput = 3,
    /// Template and background do not fit together.
    ShapeMismatch = 4,
    Io = 5,
    /// Numerical failure inside the solver.
    Runtime = 6,
    Panic = 7,
    IndexOutOfRange = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgmmfPadding {
    Naive = 0,
    Centered = 1,
    Generalized = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MgmmfMatchOptions {
    /// One of the `MgmmfPadding` values.
    pub padding: u32,
    /// Template non-edge weight for generalized padding, in `[0, 1]`.
    pub w: f64,
    pub restarts: usize,
    pub seed: u64,
    /// 0 selects the default.
    pub max_iters: usize,
    /// Non-positive selects the default.
    pub epsilon: f64,
    /// Merge restarts that found the same matching.
    pub dedup: bool,
}

pub struct MgmmfGraph(MultiplexGraph);

pub struct MgmmfRanking(MatchRanking);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &Error) -> MgmmfStatus {
    if matches!(e, Error::Io(_)) {
        return MgmmfStatus::Io;
    }
    match e.exit_code() {
        2 => MgmmfStatus::InvalidInput,
        3 => MgmmfStatus::ShapeMismatch,
        _ => MgmmfStatus::Runtime,
    }
}

/// Runs `f`, turning errors and panics into a status plus a stored message.
fn guarded<F: FnOnce() -> Result<(), (MgmmfStatus, String)>>(f: F) -> MgmmfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MgmmfStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MgmmfStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (MgmmfStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (MgmmfStatus, String) {
    (MgmmfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (MgmmfStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (MgmmfStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call into this library on the thread.
#[no_mangle]
pub extern "C" fn mgmmf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn mgmmf_match_options_default() -> MgmmfMatchOptions {
    MgmmfMatchOptions {
        padding: MgmmfPadding::Centered as u32,
        w: 1.0,
        restarts: 100,
        seed: 0,
        max_iters: 0,
        epsilon: 0.0,
        dedup: false,
    }
}

/// Parses a graph from `.mx` text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mgmmf_graph_from_mx(text: *const c_char, out: *mut *mut MgmmfGraph) -> MgmmfStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let g = parse_mx(str_arg(text, "text")?).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(MgmmfGraph(g)));
        Ok(())
    })
}

/// Reads a graph from an `.mx` file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mgmmf_graph_load(path: *const c_char, out: *mut *mut MgmmfGraph) -> MgmmfStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let g = read_mx(Path::new(str_arg(path, "path")?)).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(MgmmfGraph(g)));
        Ok(())
    })
}

/// Number of labels, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn mgmmf_graph_order(g: *const MgmmfGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n_total())
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn mgmmf_graph_channel_count(g: *const MgmmfGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.channel_count())
}

/// # Safety
/// `g` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mgmmf_graph_free(g: *mut MgmmfGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Runs the matched filter. `options` may be null for the defaults.
///
/// # Safety
/// `template` and `background` must be live graph handles, `options` null or
/// valid, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mgmmf_match(
    template: *const MgmmfGraph,
    background: *const MgmmfGraph,
    options: *const MgmmfMatchOptions,
    out: *mut *mut MgmmfRanking,
) -> MgmmfStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let tpl = &template.as_ref().ok_or_else(|| null("template"))?.0;
        let bg = &background.as_ref().ok_or_else(|| null("background"))?.0;
        let opts = options.as_ref().copied().unwrap_or_else(|| mgmmf_match_options_default());
        if tpl.channel_count() != bg.channel_count() {
            return Err(lib_err(Error::ChannelCountMismatch {
                template: tpl.channel_count(),
                background: bg.channel_count(),
            }));
        }
        let scheme = match opts.padding {
            0 => PaddingScheme::Naive,
            1 => PaddingScheme::Centered,
            2 => PaddingScheme::generalized(opts.w).map_err(lib_err)?,
            other => return Err((MgmmfStatus::InvalidInput, format!("unknown padding {other}"))),
        };
        let mut cfg = SolverConfig::for_problem(bg.n_total(), bg.channel_count());
        if opts.max_iters > 0 {
            cfg.max_iters = opts.max_iters;
        }
        if opts.epsilon > 0.0 {
            cfg.epsilon = opts.epsilon;
        }
        let ranking = mgmmf(tpl, bg, scheme, &cfg, opts.restarts, &SeedSpec::default(), opts.seed).map_err(lib_err)?;
        let ranking = if opts.dedup { dedup_matchings(&ranking) } else { ranking };
        *out = Box::into_raw(Box::new(MgmmfRanking(ranking)));
        Ok(())
    })
}

/// Number of entries, or 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live ranking handle.
#[no_mangle]
pub unsafe extern "C" fn mgmmf_ranking_len(r: *const MgmmfRanking) -> usize {
    r.as_ref().map_or(0, |r| r.0.entries.len())
}

/// Length of each matching (the template order), or 0.
///
/// # Safety
/// `r` must be null or a live ranking handle.
#[no_mangle]
pub unsafe extern "C" fn mgmmf_ranking_template_order(r: *const MgmmfRanking) -> usize {
    r.as_ref()
        .and_then(|r| r.0.entries.first())
        .map_or(0, |e| e.matching.len())
}

/// Objective, restart id and multiplicity of entry `index` (0 is rank 1).
/// Any of the output pointers may be null.
///
/// # Safety
/// `r` must be a live ranking handle; non-null outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn mgmmf_ranking_entry(
    r: *const MgmmfRanking,
    index: usize,
    objective: *mut f64,
    restart_id: *mut usize,
    multiplicity: *mut usize,
) -> MgmmfStatus {
    guarded(|| {
        let r = &r.as_ref().ok_or_else(|| null("ranking"))?.0;
        let e = r.entries.get(index).ok_or((
            MgmmfStatus::IndexOutOfRange,
            format!("entry {index} of {}", r.entries.len()),
        ))?;
        if let Some(o) = objective.as_mut() {
            *o = e.objective;
        }
        if let Some(o) = restart_id.as_mut() {
            *o = e.restart_id;
        }
        if let Some(o) = multiplicity.as_mut() {
            *o = e.multiplicity;
        }
        Ok(())
    })
}

/// Copies the 1-based background labels matched to template labels
/// `1..=len` of entry `index` into `labels`. `len` must equal the template
/// order.
///
/// # Safety
/// `r` must be a live ranking handle and `labels` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn mgmmf_ranking_matching(
    r: *const MgmmfRanking,
    index: usize,
    labels: *mut usize,
    len: usize,
) -> MgmmfStatus {
    guarded(|| {
        let r = &r.as_ref().ok_or_else(|| null("ranking"))?.0;
        let e = r.entries.get(index).ok_or((
            MgmmfStatus::IndexOutOfRange,
            format!("entry {index} of {}", r.entries.len()),
        ))?;
        if labels.is_null() {
            return Err(null("labels"));
        }
        if len != e.matching.len() {
            return Err((
                MgmmfStatus::ShapeMismatch,
                format!("buffer holds {len} labels, matching has {}", e.matching.len()),
            ));
        }
        let out = std::slice::from_raw_parts_mut(labels, len);
        for (o, &v) in out.iter_mut().zip(&e.matching) {
            *o = v + 1;
        }
        Ok(())
    })
}

/// Per-channel recovered signal of entry `index`, written to `values`
/// (`len` must equal the channel count).
///
/// # Safety
/// `r` must be a live ranking handle and `values` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn mgmmf_ranking_recovery(
    r: *const MgmmfRanking,
    index: usize,
    values: *mut f64,
    len: usize,
) -> MgmmfStatus {
    guarded(|| {
        let r = &r.as_ref().ok_or_else(|| null("ranking"))?.0;
        let e = r.entries.get(index).ok_or((
            MgmmfStatus::IndexOutOfRange,
            format!("entry {index} of {}", r.entries.len()),
        ))?;
        if values.is_null() {
            return Err(null("values"));
        }
        if len != e.recovery.len() {
            return Err((
                MgmmfStatus::ShapeMismatch,
                format!("buffer holds {len} values, ranking has {} channels", e.recovery.len()),
            ));
        }
        std::slice::from_raw_parts_mut(values, len).copy_from_slice(&e.recovery);
        Ok(())
    })
}

/// The ranking as JSON. Release the string with [`mgmmf_string_free`].
/// Returns null for a null handle.
///
/// # Safety
/// `r` must be null or a live ranking handle.
#[no_mangle]
pub unsafe extern "C" fn mgmmf_ranking_to_json(r: *const MgmmfRanking) -> *mut c_char {
    match r.as_ref() {
        Some(r) => CString::new(r.0.to_json()).map_or(ptr::null_mut(), CString::into_raw),
        None => {
            set_error("ranking is null");
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `r` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mgmmf_ranking_free(r: *mut MgmmfRanking) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mgmmf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_map_to_status_classes() {
        assert_eq!(status_of(&Error::NoChannels), MgmmfStatus::InvalidInput);
        assert_eq!(
            status_of(&Error::OrderMismatch { template: 1, background: 2 }),
            MgmmfStatus::ShapeMismatch
        );
    }

    #[test]
    fn last_error_tracks_failures() {
        let mut g = ptr::null_mut();
        let bad = CString::new("not a graph").unwrap();
        let st = unsafe { mgmmf_graph_from_mx(bad.as_ptr(), &mut g) };
        assert_eq!(st, MgmmfStatus::InvalidInput);
        assert!(g.is_null());
        let msg = unsafe { CStr::from_ptr(mgmmf_last_error()) };
        assert!(!msg.to_bytes().is_empty());
    }
}
