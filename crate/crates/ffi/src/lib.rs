//! C ABI over `billiard-core`.
//!
//! Tables are opaque handles created by the `billiard_table_*` constructors and
//! released with [`billiard_table_free`]. Every other function returns a
//! [`BilliardStatus`]; on failure a message for the calling thread is available from
//! [`billiard_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use billiard_core::cli::config::RunConfig;
use billiard_core::coding::{count_words, is_admissible, log_biguint, SymbolWord};
use billiard_core::geometry::{make_mushroom, make_stadium, next_collision, ArcId, PhasePoint, Table, TableClass};
use billiard_core::sft::{certify_table, entropy_lower_bound, largest_root_eq0, EntropyCertificate};
use billiard_core::shooting::{realize_word, ShootingError};

/// Opaque billiard table.
pub struct BilliardTable {
    inner: Table,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilliardStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidConfig = 3,
    Geometry = 4,
    Inadmissible = 5,
    TargetUnreachable = 6,
    BisectionStall = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilliardArc {
    Bottom = 0,
    Top = 1,
    Left = 2,
    Right = 3,
    Flat = 4,
}

impl From<ArcId> for BilliardArc {
    fn from(a: ArcId) -> Self {
        match a {
            ArcId::Bottom => Self::Bottom,
            ArcId::Top => Self::Top,
            ArcId::Left => Self::Left,
            ArcId::Right => Self::Right,
            ArcId::Flat => Self::Flat,
        }
    }
}

impl From<BilliardArc> for ArcId {
    fn from(a: BilliardArc) -> Self {
        match a {
            BilliardArc::Bottom => Self::Bottom,
            BilliardArc::Top => Self::Top,
            BilliardArc::Left => Self::Left,
            BilliardArc::Right => Self::Right,
            BilliardArc::Flat => Self::Flat,
        }
    }
}

/// Collision state: arc, position along it, reflection angle.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilliardPhasePoint {
    pub arc: BilliardArc,
    pub r: f64,
    pub phi: f64,
}

impl From<PhasePoint> for BilliardPhasePoint {
    fn from(p: PhasePoint) -> Self {
        Self { arc: p.arc.into(), r: p.r, phi: p.phi }
    }
}

/// Entropy lower bound. `root` is 0 and `n` may be negative when nothing is certified.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilliardCertificate {
    pub bound_nats: f64,
    pub bound_bits: f64,
    pub root: f64,
    pub ell: f64,
    pub eps: f64,
    pub n: i64,
    pub certified: bool,
    pub semistadium: bool,
    pub rigorous_geometry: bool,
}

impl From<&EntropyCertificate> for BilliardCertificate {
    fn from(c: &EntropyCertificate) -> Self {
        Self {
            bound_nats: c.bound,
            bound_bits: c.bound_bits(),
            root: c.root.unwrap_or(0.0),
            ell: c.ell,
            eps: c.eps,
            n: c.n,
            certified: c.certified,
            semistadium: c.class == TableClass::Semistadium,
            rigorous_geometry: c.rigorous_geometry,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(BilliardStatus, String);

fn fail(status: BilliardStatus, msg: impl Into<String>) -> Fail {
    Fail(status, msg.into())
}

/// Runs `f`, recording failures and converting panics.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BilliardStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            BilliardStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BilliardStatus::Panic
        }
    }
}

fn out_ptr<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Fail> {
    // SAFETY: the caller passes either null or a valid, aligned pointer.
    unsafe { p.as_mut() }.ok_or_else(|| fail(BilliardStatus::NullPointer, format!("{name} is null")))
}

fn table_ref<'a>(t: *const BilliardTable) -> Result<&'a Table, Fail> {
    // SAFETY: non-null handles come from the constructors below.
    unsafe { t.as_ref() }.map(|t| &t.inner).ok_or_else(|| fail(BilliardStatus::NullPointer, "table is null"))
}

fn store(out: *mut *mut BilliardTable, table: Result<Table, Fail>) -> Result<(), Fail> {
    let slot = out_ptr(out, "out")?;
    *slot = Box::into_raw(Box::new(BilliardTable { inner: table? }));
    Ok(())
}

/// Message describing the last failure on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn billiard_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Classical stadium with rectangle `length` by `width`.
#[no_mangle]
pub extern "C" fn billiard_table_stadium(length: f64, width: f64, out: *mut *mut BilliardTable) -> BilliardStatus {
    guard(|| store(out, make_stadium(length, width).map_err(|e| fail(BilliardStatus::InvalidArgument, e.to_string()))))
}

/// Mushroom with stalk length `stalk` (unit width) and cap radius `radius`.
#[no_mangle]
pub extern "C" fn billiard_table_mushroom(stalk: f64, radius: f64, out: *mut *mut BilliardTable) -> BilliardStatus {
    guard(|| store(out, make_mushroom(stalk, radius).map_err(|e| fail(BilliardStatus::InvalidArgument, e.to_string()))))
}

/// Table from the text of a TOML run configuration; its `eps`, when given, replaces
/// the table's own.
///
/// # Safety
/// `config` must be a NUL-terminated string or null.
#[no_mangle]
pub unsafe extern "C" fn billiard_table_from_config(
    config: *const c_char,
    out: *mut *mut BilliardTable,
) -> BilliardStatus {
    guard(|| {
        if config.is_null() {
            return Err(fail(BilliardStatus::NullPointer, "config is null"));
        }
        // SAFETY: checked non-null; the caller guarantees termination.
        let text = unsafe { CStr::from_ptr(config) }
            .to_str()
            .map_err(|_| fail(BilliardStatus::InvalidConfig, "config is not UTF-8"))?;
        let bad = |e: String| fail(BilliardStatus::InvalidConfig, e);
        let cfg = RunConfig::parse(text).map_err(|e| bad(e.to_string()))?;
        let spec = cfg.table.as_ref().ok_or_else(|| bad("config has no [table]".into()))?;
        let mut table = spec.build().map_err(|e| bad(e.to_string()))?;
        if let Some(eps) = cfg.eps {
            table = table.with_eps(eps).map_err(|e| bad(e.to_string()))?;
        }
        store(out, Ok(table))
    })
}

/// Releases a table; null is ignored.
///
/// # Safety
/// `table` must come from a constructor above and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn billiard_table_free(table: *mut BilliardTable) {
    if !table.is_null() {
        // SAFETY: created by Box::into_raw in `store`.
        drop(unsafe { Box::from_raw(table) });
    }
}

/// Horizontal cap distance `ell` and the table's `eps`.
#[no_mangle]
pub extern "C" fn billiard_table_parameters(
    table: *const BilliardTable,
    ell: *mut f64,
    eps: *mut f64,
) -> BilliardStatus {
    guard(|| {
        let t = table_ref(table)?;
        *out_ptr(ell, "ell")? = t.ell();
        *out_ptr(eps, "eps")? = t.eps();
        Ok(())
    })
}

/// One step of the billiard map.
///
/// # Safety
/// `input` must be null or point to a valid phase point.
#[no_mangle]
pub unsafe extern "C" fn billiard_next_collision(
    table: *const BilliardTable,
    input: *const BilliardPhasePoint,
    output: *mut BilliardPhasePoint,
) -> BilliardStatus {
    guard(|| {
        let t = table_ref(table)?;
        // SAFETY: caller guarantees validity when non-null.
        let p = unsafe { input.as_ref() }.ok_or_else(|| fail(BilliardStatus::NullPointer, "input is null"))?;
        let out = out_ptr(output, "output")?;
        let (next, _) = next_collision(t, &PhasePoint::new(p.arc.into(), p.r, p.phi))
            .map_err(|e| fail(BilliardStatus::Geometry, e.to_string()))?;
        *out = next.into();
        Ok(())
    })
}

/// Best available entropy bound for the table.
#[no_mangle]
pub extern "C" fn billiard_certify(table: *const BilliardTable, out: *mut BilliardCertificate) -> BilliardStatus {
    guard(|| {
        let t = table_ref(table)?;
        let cert = certify_table(t).map_err(|e| fail(BilliardStatus::InvalidArgument, e.to_string()))?;
        *out_ptr(out, "out")? = (&cert).into();
        Ok(())
    })
}

/// Generic bound from the cap distance `ell` and free-arc angle `eps`.
#[no_mangle]
pub extern "C" fn billiard_entropy_lower_bound(
    ell: f64,
    eps: f64,
    semistadium: bool,
    out: *mut BilliardCertificate,
) -> BilliardStatus {
    guard(|| {
        let class = if semistadium { TableClass::Semistadium } else { TableClass::Full };
        let cert =
            entropy_lower_bound(ell, eps, class).map_err(|e| fail(BilliardStatus::InvalidArgument, e.to_string()))?;
        *out_ptr(out, "out")? = (&cert).into();
        Ok(())
    })
}

/// Largest root of `x^2 - 2x - 1 = -2 x^-n`.
#[no_mangle]
pub extern "C" fn billiard_largest_root(n: u32, out: *mut f64) -> BilliardStatus {
    guard(|| {
        if n == 0 {
            return Err(fail(BilliardStatus::InvalidArgument, "n must be at least 1"));
        }
        *out_ptr(out, "out")? = largest_root_eq0(n);
        Ok(())
    })
}

/// Number of admissible words of length `n` over `-bound..=bound`, as a decimal string.
///
/// `*needed` receives the string length including the terminating NUL. With a null
/// or short buffer the call returns `BufferTooSmall` and writes nothing else.
///
/// # Safety
/// `buffer` must be null or valid for `capacity` bytes.
#[no_mangle]
pub unsafe extern "C" fn billiard_count_words(
    bound: u32,
    n: usize,
    buffer: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> BilliardStatus {
    guard(|| {
        let text = count_words(bound, n).to_string();
        let len = text.len() + 1;
        *out_ptr(needed, "needed")? = len;
        if buffer.is_null() || capacity < len {
            return Err(fail(BilliardStatus::BufferTooSmall, format!("need {len} bytes")));
        }
        // SAFETY: capacity checked above.
        unsafe {
            ptr::copy_nonoverlapping(text.as_ptr().cast::<c_char>(), buffer, text.len());
            *buffer.add(text.len()) = 0;
        }
        Ok(())
    })
}

/// Natural logarithm of the word count, for callers that do not want strings.
#[no_mangle]
pub extern "C" fn billiard_count_words_log(bound: u32, n: usize, out: *mut f64) -> BilliardStatus {
    guard(|| {
        *out_ptr(out, "out")? = log_biguint(&count_words(bound, n));
        Ok(())
    })
}

/// Orbit whose code contains the word `symbols[0..len]`, written to `orbit`.
///
/// `eps <= 0` selects the table's own `eps`. `*written` receives the orbit length;
/// when it exceeds `capacity` the call returns `BufferTooSmall` and writes no points.
///
/// # Safety
/// `symbols` must be valid for `len` reads and `orbit` for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn billiard_realize(
    table: *const BilliardTable,
    symbols: *const i32,
    len: usize,
    eps: f64,
    orbit: *mut BilliardPhasePoint,
    capacity: usize,
    written: *mut usize,
) -> BilliardStatus {
    guard(|| {
        let t = table_ref(table)?;
        if symbols.is_null() && len > 0 {
            return Err(fail(BilliardStatus::NullPointer, "symbols is null"));
        }
        let word: Vec<i32> = if len == 0 {
            Vec::new()
        } else {
            // SAFETY: non-null and valid for `len` reads per the contract.
            unsafe { std::slice::from_raw_parts(symbols, len) }.to_vec()
        };
        let top = word.iter().map(|s| s.unsigned_abs()).max().unwrap_or(0);
        if !is_admissible(&word, top) {
            return Err(fail(BilliardStatus::Inadmissible, "word is not admissible"));
        }
        let word = SymbolWord::new(word, top).map_err(|e| fail(BilliardStatus::InvalidArgument, e.to_string()))?;
        let eps = if eps > 0.0 { eps } else { t.eps() };
        let realized = realize_word(t, &word, eps).map_err(|e| {
            let status = match e {
                ShootingError::Inadmissible(_) => BilliardStatus::Inadmissible,
                ShootingError::TargetUnreachable { .. } => BilliardStatus::TargetUnreachable,
                ShootingError::BisectionStall { .. } => BilliardStatus::BisectionStall,
                _ => BilliardStatus::Geometry,
            };
            fail(status, e.to_string())
        })?;
        let count = realized.orbit.len();
        *out_ptr(written, "written")? = count;
        if orbit.is_null() || capacity < count {
            return Err(fail(BilliardStatus::BufferTooSmall, format!("need room for {count} points")));
        }
        for (i, p) in realized.orbit.iter().enumerate() {
            // SAFETY: i < count <= capacity.
            unsafe { *orbit.add(i) = (*p).into() };
        }
        Ok(())
    })
}
