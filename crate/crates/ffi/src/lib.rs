//! C ABI over `zmd-core`.
//!
//! Conventions:
//! - Every fallible call returns a [`ZmdStatus`]; on failure a message is
//!   available from [`zmd_last_error`] on the same thread.
//! - Graphs and experiments are opaque handles released with the matching
//!   `*_free`. Freeing NULL is a no-op.
//! - Strings returned through `char **` are owned by the caller and must be
//!   released with [`zmd_string_free`].
//! - Probabilities that are undefined at an operating point are reported as NaN.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use zmd_core::analysis::{self, Ensemble};
use zmd_core::detector::{self, ChannelParams, DetectionReport};
use zmd_core::experiments::{self, csv, presets, ConfigFile, ExperimentConfig, SweepAxis};
use zmd_core::graph::{self, DegreeDistribution, SensingGraph};
use zmd_core::operator::{build_sensing_matrix, measure, MeasurementVector};
use zmd_core::spectrum::sample_spectrum;
use zmd_core::ZmdError;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZmdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidProbability = 3,
    NonIntegralDegree = 4,
    InfeasibleGraph = 5,
    UnrealizableDistribution = 6,
    DimensionMismatch = 7,
    DegenerateChannel = 8,
    IndeterminateRatio = 9,
    UnreachableTarget = 10,
    UnknownPreset = 11,
    ParseError = 12,
    IoError = 13,
    BufferTooSmall = 14,
    Panic = 15,
}

impl From<&ZmdError> for ZmdStatus {
    fn from(e: &ZmdError) -> Self {
        match e {
            ZmdError::NonIntegralDegree { .. } => ZmdStatus::NonIntegralDegree,
            ZmdError::InfeasibleGraph(_) => ZmdStatus::InfeasibleGraph,
            ZmdError::UnrealizableDistribution(_) => ZmdStatus::UnrealizableDistribution,
            ZmdError::InvalidProbability { .. } => ZmdStatus::InvalidProbability,
            ZmdError::InvalidParameter(_) => ZmdStatus::InvalidArgument,
            ZmdError::DimensionMismatch(_) => ZmdStatus::DimensionMismatch,
            ZmdError::DegenerateChannel(_) => ZmdStatus::DegenerateChannel,
            ZmdError::IndeterminateRatio(_) => ZmdStatus::IndeterminateRatio,
            ZmdError::UnreachableTarget { .. } => ZmdStatus::UnreachableTarget,
            ZmdError::UnknownPreset(_) => ZmdStatus::UnknownPreset,
            ZmdError::Parse(_) => ZmdStatus::ParseError,
            ZmdError::Io(_) => ZmdStatus::IoError,
        }
    }
}

/// Sensing graph handle.
pub struct ZmdGraph(Arc<SensingGraph>);

/// Experiment handle: a validated configuration plus an optional sweep.
pub struct ZmdExperiment {
    cfg: ExperimentConfig,
    sweep: Option<(SweepAxis, Vec<f64>)>,
}

/// Closed-form probabilities at one operating point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZmdPrediction {
    pub p_zd: f64,
    pub p_wzd: f64,
    pub p_d: f64,
    pub p_fa: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(ZmdStatus, String);

impl From<ZmdError> for Failure {
    fn from(e: ZmdError) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

type FfiResult = Result<(), Failure>;

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> FfiResult) -> ZmdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ZmdStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            ZmdStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(ZmdStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn graph_ref<'a>(g: *const ZmdGraph) -> Result<&'a SensingGraph, Failure> {
    g.as_ref().map(|g| &*g.0).ok_or_else(|| null("graph"))
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

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(ZmdStatus::ParseError, format!("{what} is not UTF-8")))
}

fn give_string(s: String, out: &mut *mut c_char) -> FfiResult {
    let c = CString::new(s).map_err(|_| Failure(ZmdStatus::InvalidArgument, "string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn give_graph(g: SensingGraph, out: &mut *mut ZmdGraph) {
    *out = Box::into_raw(Box::new(ZmdGraph(Arc::new(g))));
}

fn nan_if_none(v: Option<f64>) -> f64 {
    v.unwrap_or(f64::NAN)
}

/// Message for the last failed call on this thread ("" after a success).
/// Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn zmd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn zmd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zmd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ------------------------------------------------------------------ graphs

/// Random graph with every measurement of degree `dm`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zmd_graph_regular(
    l: usize,
    m: usize,
    dm: usize,
    seed: u64,
    out: *mut *mut ZmdGraph,
) -> ZmdStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        give_graph(graph::build_regular_graph(l, m, dm, seed)?, out);
        Ok(())
    })
}

/// Random graph from node-perspective degree fractions.
///
/// # Safety
/// Each degree/fraction array must hold its stated number of elements.
#[no_mangle]
pub unsafe extern "C" fn zmd_graph_irregular(
    l: usize,
    m: usize,
    variable_degrees: *const usize,
    variable_fractions: *const f64,
    num_variable_degrees: usize,
    measurement_degrees: *const usize,
    measurement_fractions: *const f64,
    num_measurement_degrees: usize,
    seed: u64,
    out: *mut *mut ZmdGraph,
) -> ZmdStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let dist = |d: *const usize, f: *const f64, n: usize| -> Result<BTreeMap<usize, f64>, Failure> {
            let d = slice(d, n, "degrees")?;
            let f = slice(f, n, "fractions")?;
            Ok(d.iter().copied().zip(f.iter().copied()).collect())
        };
        let dist = DegreeDistribution::new(
            dist(variable_degrees, variable_fractions, num_variable_degrees)?,
            dist(measurement_degrees, measurement_fractions, num_measurement_degrees)?,
        )?;
        give_graph(graph::build_irregular_graph(l, m, &dist, seed)?, out);
        Ok(())
    })
}

/// Random matching of `m` measurements to distinct variables.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zmd_graph_one_to_one(l: usize, m: usize, seed: u64, out: *mut *mut ZmdGraph) -> ZmdStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        give_graph(graph::build_one_to_one_graph(l, m, seed)?, out);
        Ok(())
    })
}

/// Parses the text format produced by [`zmd_graph_to_text`].
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zmd_graph_from_text(text: *const c_char, out: *mut *mut ZmdGraph) -> ZmdStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        give_graph(SensingGraph::from_text(str_arg(text, "text")?)?, out);
        Ok(())
    })
}

/// Serializes a graph; free the result with [`zmd_string_free`].
///
/// # Safety
/// `g` must be a live graph handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zmd_graph_to_text(g: *const ZmdGraph, out: *mut *mut c_char) -> ZmdStatus {
    guard(|| {
        let g = graph_ref(g)?;
        give_string(g.to_text(), out_ref(out, "out")?)
    })
}

/// # Safety
/// `g` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zmd_graph_free(g: *mut ZmdGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of variable nodes (0 for NULL).
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zmd_graph_num_variables(g: *const ZmdGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.num_variables())
}

/// Number of measurement nodes (0 for NULL).
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zmd_graph_num_measurements(g: *const ZmdGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.num_measurements())
}

/// Number of edges (0 for NULL).
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zmd_graph_num_edges(g: *const ZmdGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.num_edges())
}

/// Copies the variables adjacent to measurement `m` into `buf`. `len`
/// receives the degree; if it exceeds `cap`, nothing is copied and
/// `BufferTooSmall` is returned.
///
/// # Safety
/// `buf` must hold `cap` elements; `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn zmd_graph_neighbors(
    g: *const ZmdGraph,
    m: usize,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> ZmdStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let len = out_ref(len, "len")?;
        if m >= g.num_measurements() {
            return Err(Failure(ZmdStatus::InvalidArgument, format!("measurement {m} out of range")));
        }
        let n = g.variables_of(m);
        *len = n.len();
        if n.len() > cap {
            return Err(Failure(ZmdStatus::BufferTooSmall, format!("need {} slots", n.len())));
        }
        slice_mut(buf, n.len(), "buf")?.copy_from_slice(n);
        Ok(())
    })
}

// -------------------------------------------------------- signal and detection

/// Draws a spectrum for `occupancy` (`L` bytes, nonzero = occupied), a sensing
/// matrix with block length `block_len`, and writes the `M` measurements.
///
/// # Safety
/// `occupancy` must hold `L` bytes and `y_out` `M` doubles.
#[no_mangle]
pub unsafe extern "C" fn zmd_measure(
    g: *const ZmdGraph,
    block_len: usize,
    occupancy: *const u8,
    sigma_s: f64,
    sigma_n: f64,
    seed: u64,
    y_out: *mut f64,
) -> ZmdStatus {
    guard(|| {
        let handle = g.as_ref().ok_or_else(|| null("graph"))?;
        let g = &handle.0;
        let occ: Vec<bool> = slice(occupancy, g.num_variables(), "occupancy")?
            .iter()
            .map(|&b| b != 0)
            .collect();
        let seeds = |k| zmd_core::rng::derive_seed(seed, &[k]);
        let s = sample_spectrum(&occ, block_len, sigma_s, seeds(1))?;
        let a = build_sensing_matrix(g.clone(), block_len, seeds(2))?;
        let y = measure(&a, &s, sigma_n, seeds(3))?;
        slice_mut(y_out, g.num_measurements(), "y_out")?.copy_from_slice(&y.values);
        Ok(())
    })
}

unsafe fn finish_detection(g: &SensingGraph, r: DetectionReport, vacant_out: *mut u8) -> FfiResult {
    let out = slice_mut(vacant_out, g.num_variables(), "vacant_out")?;
    out.fill(0);
    for v in r.vacant_channels {
        out[v] = 1;
    }
    Ok(())
}

unsafe fn measurements(g: &SensingGraph, y: *const f64, len: usize, sigma_n: f64) -> Result<MeasurementVector, Failure> {
    if len != g.num_measurements() {
        return Err(Failure(
            ZmdStatus::DimensionMismatch,
            format!("{len} measurements for M = {}", g.num_measurements()),
        ));
    }
    Ok(MeasurementVector {
        values: slice(y, len, "y")?.to_vec(),
        sigma_n,
        seed: 0,
    })
}

/// Exact-zero rule: flags the neighbors of every `|y_m| <= eps`.
/// `vacant_out` receives `L` bytes (1 = flagged vacant).
///
/// # Safety
/// `y` must hold `len` doubles and `vacant_out` `L` bytes.
#[no_mangle]
pub unsafe extern "C" fn zmd_detect_noiseless(
    g: *const ZmdGraph,
    y: *const f64,
    len: usize,
    eps: f64,
    vacant_out: *mut u8,
) -> ZmdStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let r = detector::detect_noiseless(&measurements(g, y, len, 0.0)?, g, eps)?;
        finish_detection(g, r, vacant_out)
    })
}

/// Threshold rule: flags the neighbors of every `|y_m| < c_prime`.
///
/// # Safety
/// `y` must hold `len` doubles and `vacant_out` `L` bytes.
#[no_mangle]
pub unsafe extern "C" fn zmd_detect_threshold(
    g: *const ZmdGraph,
    y: *const f64,
    len: usize,
    c_prime: f64,
    vacant_out: *mut u8,
) -> ZmdStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let r = detector::detect_threshold(&measurements(g, y, len, 0.0)?, g, c_prime)?;
        finish_detection(g, r, vacant_out)
    })
}

/// Likelihood-ratio rule with cut `c`.
///
/// # Safety
/// `y` must hold `len` doubles and `vacant_out` `L` bytes.
#[no_mangle]
pub unsafe extern "C" fn zmd_detect_lrt(
    g: *const ZmdGraph,
    y: *const f64,
    len: usize,
    c: f64,
    alpha: f64,
    sigma_s: f64,
    sigma_n: f64,
    vacant_out: *mut u8,
) -> ZmdStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let p = ChannelParams::new(alpha, sigma_s, sigma_n)?;
        let r = detector::detect_lrt(&measurements(g, y, len, sigma_n)?, g, c, &p)?;
        finish_detection(g, r, vacant_out)
    })
}

/// Likelihood ratio of a single measurement of degree `d`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zmd_likelihood_ratio(
    y: f64,
    d: usize,
    alpha: f64,
    sigma_s: f64,
    sigma_n: f64,
    out: *mut f64,
) -> ZmdStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = detector::likelihood_ratio(y, d, &ChannelParams::new(alpha, sigma_s, sigma_n)?)?;
        Ok(())
    })
}

/// Largest threshold whose closed-form P_WZD on a `(dv, dm)`-regular graph
/// does not exceed `target`. `c_prime_out` is +infinity when every threshold
/// qualifies; `UnreachableTarget` when none does.
///
/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn zmd_calibrate_regular(
    dm: usize,
    dv: usize,
    alpha: f64,
    sigma_s: f64,
    sigma_n: f64,
    target: f64,
    c_prime_out: *mut f64,
    p_wzd_out: *mut f64,
) -> ZmdStatus {
    guard(|| {
        let c_out = out_ref(c_prime_out, "c_prime_out")?;
        let w_out = out_ref(p_wzd_out, "p_wzd_out")?;
        let cal = detector::calibrate_threshold(dm, dv, &ChannelParams::new(alpha, sigma_s, sigma_n)?, target)?;
        *c_out = cal.c_prime;
        *w_out = cal.p_wzd;
        Ok(())
    })
}

// ---------------------------------------------------------------- analysis

/// Error function.
#[no_mangle]
pub extern "C" fn zmd_erf(x: f64) -> f64 {
    analysis::erf(x)
}

/// Closed-form probabilities on a `(dv, dm)`-regular graph. Pass NaN for
/// `c_prime` to evaluate exact-zero (noiseless) detection.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zmd_predict_regular(
    alpha: f64,
    dm: usize,
    dv: usize,
    sigma_s: f64,
    sigma_n: f64,
    c_prime: f64,
    out: *mut ZmdPrediction,
) -> ZmdStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let c = (!c_prime.is_nan()).then_some(c_prime);
        let p = analysis::predict(alpha, &Ensemble::Regular { dv, dm }, sigma_s, sigma_n, c)?;
        *out = ZmdPrediction {
            p_zd: p.p_zd,
            p_wzd: nan_if_none(p.p_wzd),
            p_d: p.p_d,
            p_fa: nan_if_none(p.p_fa),
        };
        Ok(())
    })
}

// ------------------------------------------------------------- experiments

/// Parses a TOML experiment description (same keys as the `--config` file).
///
/// # Safety
/// `toml` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn zmd_experiment_from_toml(toml: *const c_char, out: *mut *mut ZmdExperiment) -> ZmdStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let file = ConfigFile::parse(str_arg(toml, "toml")?)?;
        let exp = ZmdExperiment {
            cfg: file.build()?,
            sweep: file.sweep_axis()?,
        };
        *out = Box::into_raw(Box::new(exp));
        Ok(())
    })
}

/// # Safety
/// `e` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zmd_experiment_free(e: *mut ZmdExperiment) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Runs the experiment on `jobs` threads (0 = all cores) and returns the CSV
/// table; free it with [`zmd_string_free`].
///
/// # Safety
/// `e` must be a live handle and `csv_out` valid.
#[no_mangle]
pub unsafe extern "C" fn zmd_experiment_run(e: *const ZmdExperiment, jobs: usize, csv_out: *mut *mut c_char) -> ZmdStatus {
    guard(|| {
        let e = e.as_ref().ok_or_else(|| null("experiment"))?;
        let out = out_ref(csv_out, "csv_out")?;
        let pool = experiments::thread_pool(jobs)?;
        let rows = match &e.sweep {
            Some((axis, values)) => experiments::run_sweep(&e.cfg, *axis, values, &pool)?,
            None => vec![experiments::run_point(&e.cfg, &pool)?],
        };
        give_string(csv::to_csv(&rows), out)
    })
}

/// Runs a named figure preset (`fig2`, `fig3-zmd`, `fig4`, `fig5`) and
/// returns its CSV table; free it with [`zmd_string_free`].
///
/// # Safety
/// `name` must be NUL-terminated and `csv_out` valid.
#[no_mangle]
pub unsafe extern "C" fn zmd_figure(
    name: *const c_char,
    seed: u64,
    trials: usize,
    jobs: usize,
    csv_out: *mut *mut c_char,
) -> ZmdStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let out = out_ref(csv_out, "csv_out")?;
        let opts = presets::PresetOptions { seed, trials, jobs };
        let rows = presets::reproduce_figure(name, &opts, &experiments::thread_pool(jobs)?)?;
        give_string(csv::to_csv(&rows), out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn status_mapping_covers_errors() {
        assert_eq!(ZmdStatus::from(&ZmdError::UnknownPreset("x".into())), ZmdStatus::UnknownPreset);
        assert_eq!(
            ZmdStatus::from(&ZmdError::UnreachableTarget { target: 0.1, floor: 0.2 }),
            ZmdStatus::UnreachableTarget
        );
    }

    #[test]
    fn panics_are_contained() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, ZmdStatus::Panic);
        let msg = unsafe { CStr::from_ptr(zmd_last_error()) };
        assert_eq!(msg.to_str().unwrap(), "internal panic");
    }

    #[test]
    fn null_outputs_are_rejected() {
        let s = unsafe { zmd_graph_regular(10, 5, 2, 1, ptr::null_mut()) };
        assert_eq!(s, ZmdStatus::NullPointer);
    }
}
