//! C interface to `malle-core`.
//!
//! Every fallible function returns a [`MalleStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can be
//! read with [`malle_last_error`]. Handles are opaque and must be released
//! with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use malle_core::census::{count_n, count_n_truncated, Dataset, WildOverrides};
use malle_core::group::{abelian_counting_constants, malle_invariants_product, AbelianGroup};
use malle_core::index::{beta, ExponentMap, TailParams};
use malle_core::perm::{pair_index, CycleType};
use malle_core::splitting::generate_table;
use malle_core::{Error, Rational};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MalleStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Validation = 4,
    Io = 5,
    Internal = 6,
}

/// Opaque finite abelian group.
pub struct MalleGroup(AbelianGroup);

/// Opaque field dataset.
pub struct MalleDataset(Dataset);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MalleInvariants {
    pub a: u64,
    pub exponent_num: i64,
    pub exponent_den: i64,
    pub b: u64,
    pub a_abelian_num: i64,
    pub a_abelian_den: i64,
    pub b_abelian: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MalleCensus {
    pub count: u64,
    pub flagged_wild_pairs: u64,
    pub non_disjoint: u64,
    pub fit_constant: f64,
    pub complete: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: MalleStatus,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } | Error::MalformedPattern { .. } | Error::InvalidGroupLabel { .. } => MalleStatus::Parse,
            Error::InvalidRecord { .. } | Error::InsufficientData { .. } | Error::UnknownRecord(_) => {
                MalleStatus::Validation
            }
            Error::Io { .. } => MalleStatus::Io,
            _ => MalleStatus::InvalidArgument,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn null(what: &str) -> Failure {
    Failure {
        status: MalleStatus::NullPointer,
        message: format!("{what} is null"),
    }
}

fn set_error(message: Option<String>) {
    let c = message.map(|m| CString::new(m.replace('\0', " ")).expect("no interior nul"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MalleStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        Err(Failure {
            status: MalleStatus::Internal,
            message: "internal panic".into(),
        })
    });
    match outcome {
        Ok(()) => {
            set_error(None);
            MalleStatus::Ok
        }
        Err(f) => {
            set_error(Some(f.message));
            f.status
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure {
        status: MalleStatus::InvalidArgument,
        message: format!("{what} is not valid UTF-8"),
    })
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn group<'a>(p: *const MalleGroup) -> Result<&'a AbelianGroup, Failure> {
    p.as_ref().map(|g| &g.0).ok_or_else(|| null("group"))
}

unsafe fn target<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn cycle_type(parts: &[u32]) -> Result<CycleType, Failure> {
    Ok(CycleType::new(parts.to_vec())?)
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message of the last failed call on this thread, or NULL after a
/// successful call. Valid until the next call into this library.
#[no_mangle]
pub extern "C" fn malle_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a group label such as `C6` or `C2xC4`.
///
/// # Safety
/// `label` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn malle_group_parse(label: *const c_char, out: *mut *mut MalleGroup) -> MalleStatus {
    guard(|| {
        let slot = target(out, "out")?;
        let g: AbelianGroup = text(label, "label")?.parse()?;
        *slot = Box::into_raw(Box::new(MalleGroup(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must come from [`malle_group_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn malle_group_free(g: *mut MalleGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Order of the group, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn malle_group_order(g: *const MalleGroup) -> u64 {
    g.as_ref().map_or(0, |g| g.0.order())
}

/// `ind(g, h)` in the product action, given the cycle lengths of `g` and `h`.
///
/// # Safety
/// `g` and `h` must point to `g_len` and `h_len` integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn malle_pair_index(
    g: *const u32,
    g_len: usize,
    h: *const u32,
    h_len: usize,
    out: *mut u64,
) -> MalleStatus {
    guard(|| {
        let slot = target(out, "out")?;
        let g = cycle_type(slice(g, g_len, "g")?)?;
        let h = cycle_type(slice(h, h_len, "h")?)?;
        *slot = pair_index(&g, &h);
        Ok(())
    })
}

/// `Delta(g, h)` for `g` in `S_d` given by its cycle lengths and `h` given by
/// its residues modulo the invariant factors of the group.
///
/// # Safety
/// Pointers must be valid for the given lengths; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn malle_delta(
    d: usize,
    a: *const MalleGroup,
    g: *const u32,
    g_len: usize,
    h: *const u64,
    h_len: usize,
    out: *mut u64,
) -> MalleStatus {
    guard(|| {
        let slot = target(out, "out")?;
        let a = group(a)?;
        let g = cycle_type(slice(g, g_len, "g")?)?;
        let h = a.element(slice(h, h_len, "h")?)?;
        *slot = malle_core::index::delta(d, a, &g, &h)?;
        Ok(())
    })
}

/// Malle's invariants of `S_d x A` and the abelian constants of `A`.
///
/// # Safety
/// `a` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn malle_invariants(d: usize, a: *const MalleGroup, out: *mut MalleInvariants) -> MalleStatus {
    guard(|| {
        let slot = target(out, "out")?;
        let a = group(a)?;
        let m = malle_invariants_product(d, a)?;
        let c = abelian_counting_constants(a)?;
        *slot = MalleInvariants {
            a: m.a,
            exponent_num: *m.exponent.numer(),
            exponent_den: *m.exponent.denom(),
            b: m.b,
            a_abelian_num: *c.a_a.numer(),
            a_abelian_den: *c.a_a.denom(),
            b_abelian: c.b_a,
        };
        Ok(())
    })
}

/// `beta` under the preset exponents for `d` in {3, 4, 5}, as an exact
/// fraction in lowest terms.
///
/// # Safety
/// `a` must be a live group handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn malle_beta(
    d: usize,
    a: *const MalleGroup,
    epsilon_num: i64,
    epsilon_den: i64,
    num: *mut i64,
    den: *mut i64,
) -> MalleStatus {
    guard(|| {
        let num = target(num, "num")?;
        let den = target(den, "den")?;
        let a = group(a)?;
        if epsilon_den == 0 {
            return Err(Error::InvalidArgument("epsilon denominator is zero".into()).into());
        }
        let epsilon = Rational::new(epsilon_num, epsilon_den);
        let params = TailParams {
            d,
            group: a.clone(),
            r: ExponentMap::sieve_preset(d, epsilon)?,
            epsilon,
            y: 2.0,
        };
        let b = beta(&params)?.beta;
        *num = *b.numer();
        *den = *b.denom();
        Ok(())
    })
}

/// The discriminant valuation table for `S_d x C_p` as TSV. Release the
/// string with [`malle_string_free`].
///
/// # Safety
/// `a` must be a live group handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn malle_delta_table_tsv(d: usize, a: *const MalleGroup, out: *mut *mut c_char) -> MalleStatus {
    guard(|| {
        let slot = target(out, "out")?;
        let table = generate_table(d, group(a)?)?;
        *slot = owned_string(table.to_tsv());
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn malle_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reads a dataset file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn malle_dataset_load(path: *const c_char, out: *mut *mut MalleDataset) -> MalleStatus {
    guard(|| {
        let slot = target(out, "out")?;
        let data = Dataset::ingest(text(path, "path")?)?;
        *slot = Box::into_raw(Box::new(MalleDataset(data)));
        Ok(())
    })
}

/// Parses dataset text held in memory.
///
/// # Safety
/// `contents` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn malle_dataset_parse(contents: *const c_char, out: *mut *mut MalleDataset) -> MalleStatus {
    guard(|| {
        let slot = target(out, "out")?;
        let data: Dataset = text(contents, "contents")?.parse()?;
        *slot = Box::into_raw(Box::new(MalleDataset(data)));
        Ok(())
    })
}

/// # Safety
/// `data` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn malle_dataset_free(data: *mut MalleDataset) {
    if !data.is_null() {
        drop(Box::from_raw(data));
    }
}

/// Number of records, or 0 for NULL.
///
/// # Safety
/// `data` must be NULL or a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn malle_dataset_len(data: *const MalleDataset) -> usize {
    data.as_ref().map_or(0, |d| d.0.len())
}

/// Counts composita with `|Disc| < x`; with `y > 0` the truncated
/// discriminant is used instead.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn malle_census_count(
    data: *const MalleDataset,
    d: usize,
    a: *const MalleGroup,
    x: u64,
    y: u64,
    out: *mut MalleCensus,
) -> MalleStatus {
    guard(|| {
        let slot = target(out, "out")?;
        let data = &data.as_ref().ok_or_else(|| null("dataset"))?.0;
        let a = group(a)?;
        let none = WildOverrides::new();
        let r = if y == 0 {
            count_n(data, d, a, x as u128, &none)?
        } else {
            count_n_truncated(data, d, a, x as u128, y, &none)?
        };
        *slot = MalleCensus {
            count: r.count,
            flagged_wild_pairs: r.flagged_wild_pairs,
            non_disjoint: r.non_disjoint,
            fit_constant: r.fit_constant,
            complete: r.complete,
        };
        Ok(())
    })
}
