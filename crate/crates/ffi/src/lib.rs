//! C ABI over `moneygas`.
//!
//! Every fallible function returns an [`MgStatus`]; on failure the message
//! is available from [`mg_last_error_message`] on the same thread until the
//! next failing call. Simulations are opaque handles created by
//! [`mg_simulation_new_from_scenario`] and released with
//! [`mg_simulation_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use moneygas::energy::{weighted_gini, EnergyRecord};
use moneygas::stats::{exponential_lorenz, lorenz_curve, summarize, SummaryOptions};
use moneygas::{parse_scenario_str, Error, Overrides, Simulation, TemperatureSet};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Ledger = 4,
    Banking = 5,
    Stats = 6,
    Energy = 7,
    Io = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

/// Simulation handle.
pub struct MgSimulation {
    sim: Simulation,
    opts: SummaryOptions,
}

/// Snapshot statistics. Money values are in cents; fields that do not
/// apply are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgSummary {
    pub n_agents: u64,
    pub transactions: u64,
    pub applied: u64,
    pub blocked: u64,
    pub total_cents: i64,
    pub min_cents: i64,
    pub max_cents: i64,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub entropy: f64,
    pub fit_temperature: f64,
    pub ks: f64,
    pub t_plus: f64,
    pub t_minus: f64,
    pub gini: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgTemperatureKind {
    Exponential = 0,
    TwoSided = 1,
    NonStationary = 2,
}

/// Theoretical temperatures in cents. `Exponential` fills `t_plus` and
/// `floor_cents`; `TwoSided` fills `t_plus` and `t_minus`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgTemperatures {
    pub kind: MgTemperatureKind,
    pub t_plus: f64,
    pub t_minus: f64,
    pub floor_cents: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn fail(status: MgStatus, message: impl Into<String>) -> MgStatus {
    set_error(message);
    status
}

fn status_of(err: &Error) -> MgStatus {
    match err {
        Error::Config(_) => MgStatus::Config,
        Error::Ledger(_) => MgStatus::Ledger,
        Error::Banking(_) => MgStatus::Banking,
        Error::Stats(_) => MgStatus::Stats,
        Error::Energy(_) | Error::EnergyFile { .. } => MgStatus::Energy,
        Error::Io { .. } | Error::Csv { .. } | Error::Json { .. } => MgStatus::Io,
    }
}

fn from_error(err: Error) -> MgStatus {
    fail(status_of(&err), err.to_string())
}

fn guarded(f: impl FnOnce() -> MgStatus) -> MgStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(MgStatus::Panic, "internal panic"))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, MgStatus> {
    if s.is_null() {
        return Err(fail(MgStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(MgStatus::InvalidUtf8, "scenario text is not UTF-8"))
}

unsafe fn slice<'a, T>(data: *const T, len: usize) -> Result<&'a [T], MgStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(fail(MgStatus::NullPointer, "null array"));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(MgStatus::NullPointer, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

/// Creates a simulation from scenario-file text.
///
/// # Safety
/// `scenario` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mg_simulation_new_from_scenario(
    scenario: *const c_char,
    out: *mut *mut MgSimulation,
) -> MgStatus {
    guarded(|| {
        non_null!(out);
        *out = ptr::null_mut();
        let text = try_ffi!(text(scenario));
        let built = parse_scenario_str(text, &Overrides::default()).and_then(|config| {
            let opts = config.summary_options()?;
            Ok(MgSimulation {
                sim: Simulation::new(config)?,
                opts,
            })
        });
        match built {
            Ok(handle) => {
                *out = Box::into_raw(Box::new(handle));
                MgStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Runs `count` more transactions.
///
/// # Safety
/// `sim` must come from [`mg_simulation_new_from_scenario`].
#[no_mangle]
pub unsafe extern "C" fn mg_simulation_step(sim: *mut MgSimulation, count: u64) -> MgStatus {
    guarded(|| {
        non_null!(sim);
        let s = &mut (*sim).sim;
        let target = s.transactions().saturating_add(count);
        match s.advance_to(target) {
            Ok(()) => MgStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}

/// Number of agents, or 0 for a null handle.
///
/// # Safety
/// `sim` must be null or come from [`mg_simulation_new_from_scenario`].
#[no_mangle]
pub unsafe extern "C" fn mg_simulation_agent_count(sim: *const MgSimulation) -> usize {
    if sim.is_null() {
        return 0;
    }
    (*sim).sim.ledger().len()
}

/// Copies every balance, in cents, into `out[0..len]`.
///
/// # Safety
/// `out` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn mg_simulation_balances(
    sim: *const MgSimulation,
    out: *mut i64,
    len: usize,
) -> MgStatus {
    guarded(|| {
        non_null!(sim, out);
        let balances = (*sim).sim.ledger().balances();
        if len < balances.len() {
            return fail(
                MgStatus::BufferTooSmall,
                format!("buffer holds {len} balances, need {}", balances.len()),
            );
        }
        for (i, m) in balances.iter().enumerate() {
            *out.add(i) = m.cents();
        }
        MgStatus::Ok
    })
}

/// Sum of all balances in cents.
///
/// # Safety
/// `sim` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mg_simulation_total(sim: *const MgSimulation, out: *mut i64) -> MgStatus {
    guarded(|| {
        non_null!(sim, out);
        match (*sim).sim.ledger().total() {
            Some(total) => {
                *out = total.cents();
                MgStatus::Ok
            }
            None => fail(MgStatus::Ledger, "balance total overflows"),
        }
    })
}

/// Statistics of the current balances.
///
/// # Safety
/// `sim` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mg_simulation_summary(
    sim: *const MgSimulation,
    out: *mut MgSummary,
) -> MgStatus {
    guarded(|| {
        non_null!(sim, out);
        let handle = &*sim;
        let s = &handle.sim;
        let total = match s.ledger().total() {
            Some(t) => t.cents(),
            None => return fail(MgStatus::Ledger, "balance total overflows"),
        };
        let d = summarize(s.ledger().balances(), &handle.opts);
        *out = MgSummary {
            n_agents: s.ledger().len() as u64,
            transactions: s.transactions(),
            applied: s.applied(),
            blocked: s.blocked(),
            total_cents: total,
            min_cents: d.moments.min.cents(),
            max_cents: d.moments.max.cents(),
            mean: d.moments.mean,
            variance: d.moments.variance,
            skewness: d.moments.skewness,
            entropy: d.entropy,
            fit_temperature: d.fit.map_or(f64::NAN, |f| f.temperature),
            ks: d.ks.unwrap_or(f64::NAN),
            t_plus: d.two_sided_fit.map_or(f64::NAN, |f| f.t_plus),
            t_minus: d.two_sided_fit.map_or(f64::NAN, |f| f.t_minus),
            gini: d.gini.unwrap_or(f64::NAN),
        };
        MgStatus::Ok
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `sim` must be null or an unreleased handle.
#[no_mangle]
pub unsafe extern "C" fn mg_simulation_free(sim: *mut MgSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Gini coefficient of `values[0..len]`, which must be non-negative.
///
/// # Safety
/// `values` must be valid for `len` reads and `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn mg_gini(values: *const f64, len: usize, out: *mut f64) -> MgStatus {
    guarded(|| {
        non_null!(out);
        let values = try_ffi!(slice(values, len));
        match lorenz_curve(values) {
            Ok(curve) => {
                *out = curve.gini;
                MgStatus::Ok
            }
            Err(e) => fail(MgStatus::Stats, e.to_string()),
        }
    })
}

/// Population-weighted Gini of per-capita values.
///
/// # Safety
/// `kw_per_capita` and `population` must be valid for `len` reads.
#[no_mangle]
pub unsafe extern "C" fn mg_weighted_gini(
    kw_per_capita: *const f64,
    population: *const u64,
    len: usize,
    out: *mut f64,
) -> MgStatus {
    guarded(|| {
        non_null!(out);
        let kw = try_ffi!(slice(kw_per_capita, len));
        let pop = try_ffi!(slice(population, len));
        let mut records = Vec::with_capacity(len);
        for (i, (&k, &p)) in kw.iter().zip(pop).enumerate() {
            if p == 0 || !k.is_finite() || k < 0.0 {
                return fail(
                    MgStatus::Energy,
                    format!("row {i}: need population > 0 and finite kw >= 0"),
                );
            }
            records.push(EnergyRecord::new(0, format!("{i:08}"), p, k));
        }
        match weighted_gini(&records) {
            Ok(g) => {
                *out = g;
                MgStatus::Ok
            }
            Err(e) => fail(MgStatus::Energy, e.to_string()),
        }
    })
}

/// `x + (1 - x) ln(1 - x)` for `x` in `[0, 1]`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mg_exponential_lorenz(x: f64, out: *mut f64) -> MgStatus {
    guarded(|| {
        non_null!(out);
        match exponential_lorenz(x) {
            Ok(y) => {
                *out = y;
                MgStatus::Ok
            }
            Err(e) => fail(MgStatus::Stats, e.to_string()),
        }
    })
}

/// Theoretical temperatures of a scenario given as text.
///
/// # Safety
/// `scenario` must be NUL-terminated and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mg_theoretical_temperatures(
    scenario: *const c_char,
    out: *mut MgTemperatures,
) -> MgStatus {
    guarded(|| {
        non_null!(out);
        let text = try_ffi!(text(scenario));
        let set = parse_scenario_str(text, &Overrides::default())
            .and_then(|c| c.theoretical_temperatures());
        *out = match set {
            Ok(TemperatureSet::Exponential { temperature, floor }) => MgTemperatures {
                kind: MgTemperatureKind::Exponential,
                t_plus: temperature,
                t_minus: f64::NAN,
                floor_cents: floor.cents(),
            },
            Ok(TemperatureSet::TwoSided { t_plus, t_minus }) => MgTemperatures {
                kind: MgTemperatureKind::TwoSided,
                t_plus,
                t_minus,
                floor_cents: 0,
            },
            Ok(TemperatureSet::NonStationary) => MgTemperatures {
                kind: MgTemperatureKind::NonStationary,
                t_plus: f64::NAN,
                t_minus: f64::NAN,
                floor_cents: 0,
            },
            Err(e) => return from_error(e),
        };
        MgStatus::Ok
    })
}

/// Message of the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
