//! C ABI for the zimin crate: opaque handles, integer status codes, and a
//! thread-local last-error message. The generated header lives in
//! `include/zimin.h`.
//!
//! Conventions: every fallible function returns a `ZwStatus`; results come
//! back through out-pointers, which are written only on `ZW_OK`. Handles
//! are freed with their matching `_free` function; passing null to a
//! `_free` is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use zimin::construct::{euler_construct_improved, euler_construct_p, CrtSchedule, IntervalModel};
use zimin::pattern::{
    contains_pattern_budgeted, is_unavoidable_budgeted, MatchOutcome, Pattern, Unavoidability,
    DEFAULT_NODE_BUDGET,
};
use zimin::word::Word;
use zimin::zimin_check::{contains_zimin, scan_free};
use zimin::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZwStatus {
    ZwOk = 0,
    ZwErrNull = 1,
    ZwErrInvalid = 2,
    ZwErrLimit = 3,
    ZwErrParse = 4,
    ZwErrVerify = 5,
    ZwErrBuffer = 6,
    ZwErrPanic = 7,
}

/// Three-valued answers: no, yes, or undecided within the node budget.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZwTri {
    ZwNo = 0,
    ZwYes = 1,
    ZwUndecided = 2,
}

/// An immutable word over an explicit alphabet (opaque).
pub struct ZwWord {
    inner: Word,
}

/// A pattern over variables (opaque).
pub struct ZwPattern {
    inner: Pattern,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let owned = CString::new(msg.replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn status_of(err: &Error) -> ZwStatus {
    match err {
        Error::SizeLimit { .. } => ZwStatus::ZwErrLimit,
        Error::Parse { .. } => ZwStatus::ZwErrParse,
        Error::Verification(_) => ZwStatus::ZwErrVerify,
        _ => ZwStatus::ZwErrInvalid,
    }
}

fn guarded(f: impl FnOnce() -> ZwStatus) -> ZwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            ZwStatus::ZwErrPanic
        }
    }
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn zw_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn write_out<T>(out: *mut T, value: T) -> ZwStatus {
    if out.is_null() {
        set_error("null output pointer");
        return ZwStatus::ZwErrNull;
    }
    unsafe { out.write(value) };
    ZwStatus::ZwOk
}

fn word_result(r: Result<Word, Error>, out: *mut *mut ZwWord) -> ZwStatus {
    match r {
        Ok(word) => unsafe {
            write_out(out, Box::into_raw(Box::new(ZwWord { inner: word })))
        },
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

unsafe fn word_ref<'a>(w: *const ZwWord) -> Option<&'a Word> {
    unsafe { w.as_ref() }.map(|w| &w.inner)
}

/// The Zimin word of level `n` (1 through 30).
#[no_mangle]
pub extern "C" fn zw_zimin(n: u32, out: *mut *mut ZwWord) -> ZwStatus {
    guarded(|| word_result(zimin::word::zimin(n), out))
}

/// Parse a word from `a..z` or space-separated decimal ids, inferring the
/// alphabet from the content.
///
/// # Safety
/// `text` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn zw_word_parse(text: *const c_char, out: *mut *mut ZwWord) -> ZwStatus {
    guarded(|| {
        if text.is_null() {
            set_error("null text");
            return ZwStatus::ZwErrNull;
        }
        let text = match unsafe { CStr::from_ptr(text) }.to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("text is not valid UTF-8");
                return ZwStatus::ZwErrParse;
            }
        };
        word_result(Word::parse_infer(text), out)
    })
}

#[no_mangle]
pub extern "C" fn zw_word_free(w: *mut ZwWord) {
    if !w.is_null() {
        drop(unsafe { Box::from_raw(w) });
    }
}

/// Number of symbols in the word; 0 for null.
#[no_mangle]
pub extern "C" fn zw_word_len(w: *const ZwWord) -> usize {
    unsafe { word_ref(w) }.map_or(0, |w| w.len())
}

/// Alphabet size of the word; 0 for null.
#[no_mangle]
pub extern "C" fn zw_word_alphabet_size(w: *const ZwWord) -> u32 {
    unsafe { word_ref(w) }.map_or(0, |w| w.alphabet().size())
}

/// Render the word into `buf` (NUL-terminated). `*written` receives the
/// required size including the terminator; when `cap` is too small the
/// status is `ZW_ERR_BUFFER` and nothing is written.
#[no_mangle]
pub extern "C" fn zw_word_render(
    w: *const ZwWord,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> ZwStatus {
    guarded(|| {
        let Some(word) = (unsafe { word_ref(w) }) else {
            set_error("null word");
            return ZwStatus::ZwErrNull;
        };
        let text = word.render();
        let needed = text.len() + 1;
        if !written.is_null() {
            unsafe { written.write(needed) };
        }
        if buf.is_null() || cap < needed {
            set_error("buffer too small");
            return ZwStatus::ZwErrBuffer;
        }
        unsafe {
            std::ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
            buf.add(text.len()).write(0);
        }
        ZwStatus::ZwOk
    })
}

/// Does the word contain an image of the level-`n` Zimin word?
#[no_mangle]
pub extern "C" fn zw_contains_zimin(w: *const ZwWord, n: u32, out: *mut bool) -> ZwStatus {
    guarded(|| {
        let Some(word) = (unsafe { word_ref(w) }) else {
            set_error("null word");
            return ZwStatus::ZwErrNull;
        };
        unsafe { write_out(out, contains_zimin(word, n)) }
    })
}

/// Least prefix end (inclusive) whose prefix contains the level-`n` Zimin
/// word, or -1 when the word is free of it.
#[no_mangle]
pub extern "C" fn zw_scan_free(w: *const ZwWord, n: u32, out_end: *mut i64) -> ZwStatus {
    guarded(|| {
        let Some(word) = (unsafe { word_ref(w) }) else {
            set_error("null word");
            return ZwStatus::ZwErrNull;
        };
        let v = scan_free(word, n).map_or(-1, |e| e as i64);
        unsafe { write_out(out_end, v) }
    })
}

/// Parse a pattern, relabeling variables canonically.
///
/// # Safety
/// `text` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn zw_pattern_parse(
    text: *const c_char,
    out: *mut *mut ZwPattern,
) -> ZwStatus {
    guarded(|| {
        if text.is_null() {
            set_error("null text");
            return ZwStatus::ZwErrNull;
        }
        let text = match unsafe { CStr::from_ptr(text) }.to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("text is not valid UTF-8");
                return ZwStatus::ZwErrParse;
            }
        };
        match Pattern::parse(text) {
            Ok(p) => unsafe {
                write_out(out, Box::into_raw(Box::new(ZwPattern { inner: p })))
            },
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

#[no_mangle]
pub extern "C" fn zw_pattern_free(p: *mut ZwPattern) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Number of distinct variables in the pattern; 0 for null.
#[no_mangle]
pub extern "C" fn zw_pattern_var_count(p: *const ZwPattern) -> u32 {
    unsafe { p.as_ref() }.map_or(0, |p| p.inner.var_count())
}

/// Pattern containment with a node budget (0 means the default).
#[no_mangle]
pub extern "C" fn zw_contains_pattern(
    w: *const ZwWord,
    p: *const ZwPattern,
    budget: u64,
    out: *mut ZwTri,
) -> ZwStatus {
    guarded(|| {
        let (Some(word), Some(pattern)) = (unsafe { word_ref(w) }, unsafe { p.as_ref() }) else {
            set_error("null word or pattern");
            return ZwStatus::ZwErrNull;
        };
        let budget = if budget == 0 { DEFAULT_NODE_BUDGET } else { budget };
        let tri = match contains_pattern_budgeted(word, &pattern.inner, budget) {
            MatchOutcome::Found(_) => ZwTri::ZwYes,
            MatchOutcome::Absent => ZwTri::ZwNo,
            MatchOutcome::Undecided { .. } => ZwTri::ZwUndecided,
        };
        unsafe { write_out(out, tri) }
    })
}

/// Unavoidability of a pattern with at most 12 distinct variables.
#[no_mangle]
pub extern "C" fn zw_is_unavoidable(
    p: *const ZwPattern,
    budget: u64,
    out: *mut ZwTri,
) -> ZwStatus {
    guarded(|| {
        let Some(pattern) = (unsafe { p.as_ref() }) else {
            set_error("null pattern");
            return ZwStatus::ZwErrNull;
        };
        let budget = if budget == 0 { DEFAULT_NODE_BUDGET } else { budget };
        match is_unavoidable_budgeted(&pattern.inner, budget) {
            Ok(Unavoidability::Unavoidable) => unsafe { write_out(out, ZwTri::ZwYes) },
            Ok(Unavoidability::Avoidable) => unsafe { write_out(out, ZwTri::ZwNo) },
            Ok(Unavoidability::Undecided) => unsafe { write_out(out, ZwTri::ZwUndecided) },
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// The property-P Eulerian construction (length `2*q! + q - 1`).
#[no_mangle]
pub extern "C" fn zw_construct_euler(q: u32, out: *mut *mut ZwWord) -> ZwStatus {
    guarded(|| word_result(euler_construct_p(q), out))
}

/// The doubled-symbol Eulerian construction (length `3*2^(q-2)*q! + 2q-4`).
#[no_mangle]
pub extern "C" fn zw_construct_euler_improved(q: u32, out: *mut *mut ZwWord) -> ZwStatus {
    guarded(|| word_result(euler_construct_improved(q), out))
}

/// The periodic-permutation construction over `t` parts of size `s`.
#[no_mangle]
pub extern "C" fn zw_construct_crt(t: u32, s: u32, out: *mut *mut ZwWord) -> ZwStatus {
    guarded(|| word_result(CrtSchedule::new(t, s).and_then(|c| c.materialize()), out))
}

/// The random interval model with default part layout.
#[no_mangle]
pub extern "C" fn zw_construct_interval(
    q: u32,
    num_intervals: usize,
    seed: u64,
    distinguished: bool,
    out: *mut *mut ZwWord,
) -> ZwStatus {
    guarded(|| {
        word_result(
            IntervalModel::with_defaults(q, distinguished).map(|m| m.generate(num_intervals, seed)),
            out,
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn render(w: *const ZwWord) -> String {
        let mut needed = 0usize;
        assert_eq!(
            zw_word_render(w, ptr::null_mut(), 0, &mut needed),
            ZwStatus::ZwErrBuffer
        );
        let mut buf = vec![0i8; needed];
        assert_eq!(
            zw_word_render(w, buf.as_mut_ptr() as *mut c_char, needed, &mut needed),
            ZwStatus::ZwOk
        );
        unsafe { CStr::from_ptr(buf.as_ptr() as *const c_char) }
            .to_str()
            .unwrap()
            .to_string()
    }

    #[test]
    fn zimin_round_trip() {
        let mut w: *mut ZwWord = ptr::null_mut();
        assert_eq!(zw_zimin(3, &mut w), ZwStatus::ZwOk);
        assert_eq!(zw_word_len(w), 7);
        assert_eq!(zw_word_alphabet_size(w), 3);
        assert_eq!(render(w), "abacaba");
        zw_word_free(w);
    }

    #[test]
    fn zimin_limit_is_reported() {
        let mut w: *mut ZwWord = ptr::null_mut();
        assert_eq!(zw_zimin(31, &mut w), ZwStatus::ZwErrLimit);
        let msg = unsafe { CStr::from_ptr(zw_last_error()) }.to_str().unwrap();
        assert!(msg.contains("30"), "{msg}");
    }

    #[test]
    fn containment_over_ffi() {
        let text = CString::new("abacaba").unwrap();
        let mut w: *mut ZwWord = ptr::null_mut();
        assert_eq!(unsafe { zw_word_parse(text.as_ptr(), &mut w) }, ZwStatus::ZwOk);
        let mut yes = false;
        assert_eq!(zw_contains_zimin(w, 3, &mut yes), ZwStatus::ZwOk);
        assert!(yes);
        let mut end = 0i64;
        assert_eq!(zw_scan_free(w, 3, &mut end), ZwStatus::ZwOk);
        assert_eq!(end, 6);
        assert_eq!(zw_scan_free(w, 4, &mut end), ZwStatus::ZwOk);
        assert_eq!(end, -1);
        zw_word_free(w);
    }

    #[test]
    fn null_handles_do_not_crash() {
        assert_eq!(zw_word_len(ptr::null()), 0);
        let mut yes = false;
        assert_eq!(zw_contains_zimin(ptr::null(), 2, &mut yes), ZwStatus::ZwErrNull);
        assert_eq!(zw_zimin(3, ptr::null_mut()), ZwStatus::ZwErrNull);
        zw_word_free(ptr::null_mut());
        zw_pattern_free(ptr::null_mut());
    }

    #[test]
    fn pattern_classifier_over_ffi() {
        let text = CString::new("aba").unwrap();
        let mut p: *mut ZwPattern = ptr::null_mut();
        assert_eq!(unsafe { zw_pattern_parse(text.as_ptr(), &mut p) }, ZwStatus::ZwOk);
        assert_eq!(zw_pattern_var_count(p), 2);
        let mut tri = ZwTri::ZwUndecided;
        assert_eq!(zw_is_unavoidable(p, 0, &mut tri), ZwStatus::ZwOk);
        assert_eq!(tri, ZwTri::ZwYes);
        zw_pattern_free(p);

        let text = CString::new("xx").unwrap();
        let mut p: *mut ZwPattern = ptr::null_mut();
        assert_eq!(unsafe { zw_pattern_parse(text.as_ptr(), &mut p) }, ZwStatus::ZwOk);
        let mut tri = ZwTri::ZwUndecided;
        assert_eq!(zw_is_unavoidable(p, 0, &mut tri), ZwStatus::ZwOk);
        assert_eq!(tri, ZwTri::ZwNo);
        zw_pattern_free(p);
    }

    #[test]
    fn constructions_over_ffi() {
        let mut w: *mut ZwWord = ptr::null_mut();
        assert_eq!(zw_construct_euler(4, &mut w), ZwStatus::ZwOk);
        assert_eq!(zw_word_len(w), 51);
        zw_word_free(w);

        let mut w: *mut ZwWord = ptr::null_mut();
        assert_eq!(zw_construct_crt(2, 4, &mut w), ZwStatus::ZwOk);
        assert_eq!(zw_word_len(w), 168);
        zw_word_free(w);

        let mut w: *mut ZwWord = ptr::null_mut();
        assert_eq!(zw_construct_crt(2, 2, &mut w), ZwStatus::ZwErrInvalid);

        let mut w2: *mut ZwWord = ptr::null_mut();
        assert_eq!(zw_construct_interval(8, 9, 1, true, &mut w2), ZwStatus::ZwOk);
        assert_eq!(zw_word_len(w2), 21);
        zw_word_free(w2);
        let _ = w;
    }

    #[test]
    fn parse_rejects_garbage() {
        let text = CString::new("ab!").unwrap();
        let mut w: *mut ZwWord = ptr::null_mut();
        assert_eq!(unsafe { zw_word_parse(text.as_ptr(), &mut w) }, ZwStatus::ZwErrInvalid);
        assert!(w.is_null());
    }
}
