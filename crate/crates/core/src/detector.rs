//! Zero-measurement detection.
//!
//! Every detector decides which measurements are zero; the sub-channels
//! attached to those measurements are then declared vacant. Three deciders
//! are provided:
//!
//! - exact zero (`|y_m| <= eps`) for noiseless measurements;
//! - the likelihood-ratio test between "all neighbors vacant" and "at least
//!   one neighbor occupied" under the Gaussian signal model;
//! - the magnitude threshold `|y_m| < c'`, which is the same test written in
//!   terms of `y_m` since the likelihood ratio is increasing in `|y_m|`.

use crate::analysis::{self, binomial_pmf};
use crate::error::{check_probability, Result, ZmdError};
use crate::graph::{DegreeDistribution, SensingGraph};
use crate::operator::MeasurementVector;

/// Measurements judged zero and the sub-channels they certify as vacant.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionReport {
    /// Ascending measurement indices judged zero.
    pub zero_measurements: Vec<usize>,
    /// Ascending variable indices flagged vacant.
    pub vacant_channels: Vec<usize>,
    /// Magnitude threshold, when the threshold rule was used.
    pub threshold_used: Option<f64>,
}

impl DetectionReport {
    /// Applies the neighborhood rule: every neighbor of a zero measurement is
    /// vacant.
    pub fn from_zero_measurements(
        g: &SensingGraph,
        zero_measurements: Vec<usize>,
        threshold_used: Option<f64>,
    ) -> Self {
        let mut vacant = vec![false; g.num_variables()];
        for &m in &zero_measurements {
            for &v in g.variables_of(m) {
                vacant[v] = true;
            }
        }
        DetectionReport {
            zero_measurements,
            vacant_channels: vacant
                .iter()
                .enumerate()
                .filter_map(|(v, &f)| f.then_some(v))
                .collect(),
            threshold_used,
        }
    }

    /// Per-variable vacant flags.
    pub fn vacant_mask(&self, num_variables: usize) -> Vec<bool> {
        let mut mask = vec![false; num_variables];
        for &v in &self.vacant_channels {
            mask[v] = true;
        }
        mask
    }
}

/// Occupancy probability and signal/noise levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub alpha: f64,
    pub sigma_s: f64,
    pub sigma_n: f64,
}

impl ChannelParams {
    pub fn new(alpha: f64, sigma_s: f64, sigma_n: f64) -> Result<Self> {
        check_probability("alpha", alpha)?;
        if !(sigma_s > 0.0) || !sigma_s.is_finite() {
            return Err(ZmdError::InvalidParameter(format!("sigma_s = {sigma_s}")));
        }
        if !(sigma_n >= 0.0) || !sigma_n.is_finite() {
            return Err(ZmdError::InvalidParameter(format!("sigma_n = {sigma_n}")));
        }
        Ok(ChannelParams {
            alpha,
            sigma_s,
            sigma_n,
        })
    }

    /// Noise level for `snr_db = 10 log10(sigma_s^2 / sigma_n^2)`.
    pub fn from_snr_db(alpha: f64, sigma_s: f64, snr_db: f64) -> Result<Self> {
        Self::new(alpha, sigma_s, sigma_n_for_snr_db(sigma_s, snr_db))
    }

    pub fn snr_db(&self) -> f64 {
        snr_db(self.sigma_s, self.sigma_n)
    }
}

pub fn sigma_n_for_snr_db(sigma_s: f64, snr_db: f64) -> f64 {
    sigma_s * 10f64.powf(-snr_db / 20.0)
}

pub fn snr_db(sigma_s: f64, sigma_n: f64) -> f64 {
    20.0 * (sigma_s / sigma_n).log10()
}

/// Default "exactly zero" tolerance: `1e-12 * sigma_s * sqrt(B) * max d_M`.
pub fn default_zero_tolerance(sigma_s: f64, block_len: usize, max_dm: usize) -> f64 {
    1e-12 * sigma_s * (block_len as f64).sqrt() * max_dm.max(1) as f64
}

fn check_len(y: &MeasurementVector, g: &SensingGraph) -> Result<()> {
    if y.len() == g.num_measurements() {
        Ok(())
    } else {
        Err(ZmdError::DimensionMismatch(format!(
            "{} measurements for a graph with M = {}",
            y.len(),
            g.num_measurements()
        )))
    }
}

/// Noiseless rule: a measurement is zero when `|y_m| <= eps`.
pub fn detect_noiseless(y: &MeasurementVector, g: &SensingGraph, eps: f64) -> Result<DetectionReport> {
    check_len(y, g)?;
    let zeros = y
        .values
        .iter()
        .enumerate()
        .filter_map(|(m, v)| (v.abs() <= eps).then_some(m))
        .collect();
    Ok(DetectionReport::from_zero_measurements(g, zeros, None))
}

/// Prior probability that exactly `i` of `d` neighbors are occupied.
pub fn hypothesis_prior(i: usize, d: usize, alpha: f64) -> Result<f64> {
    check_probability("alpha", alpha)?;
    if i > d {
        return Err(ZmdError::InvalidParameter(format!("i = {i} > d = {d}")));
    }
    Ok(binomial_pmf(i, d, alpha))
}

fn check_lrt(d: usize, p: &ChannelParams) -> Result<()> {
    if p.sigma_n == 0.0 {
        return Err(ZmdError::DegenerateChannel("likelihood ratio needs sigma_n > 0".into()));
    }
    if p.alpha == 0.0 || p.alpha == 1.0 {
        return Err(ZmdError::DegenerateChannel(format!(
            "likelihood ratio needs 0 < alpha < 1 (got {})",
            p.alpha
        )));
    }
    if d == 0 {
        return Err(ZmdError::DegenerateChannel("degree-0 measurement is always zero".into()));
    }
    Ok(())
}

/// `ln Lambda(y_m)`, evaluated with log-sum-exp over the occupied-neighbor
/// count `i = 1..d`.
pub fn log_likelihood_ratio(y: f64, d: usize, p: &ChannelParams) -> Result<f64> {
    check_lrt(d, p)?;
    let s2 = p.sigma_s * p.sigma_s;
    let n2 = p.sigma_n * p.sigma_n;
    let terms: Vec<f64> = (1..=d)
        .map(|i| {
            let v = 4.0 * i as f64 * s2 + n2;
            binomial_pmf(i, d, p.alpha).ln() + 0.5 * (n2 / v).ln() + 2.0 * i as f64 * s2 * y * y / (v * n2)
        })
        .collect();
    let peak = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = peak + terms.iter().map(|t| (t - peak).exp()).sum::<f64>().ln();
    let nonzero_prior = -(d as f64 * (-p.alpha).ln_1p()).exp_m1();
    Ok(lse - nonzero_prior.ln())
}

/// `Lambda(y_m) = P(y_m | some neighbor occupied) / P(y_m | all vacant)`.
pub fn likelihood_ratio(y: f64, d: usize, p: &ChannelParams) -> Result<f64> {
    log_likelihood_ratio(y, d, p).map(f64::exp)
}

/// Likelihood-ratio test: measurement `m` is zero when `Lambda(y_m) < c`,
/// using its own degree `d(m)`. Degree-0 measurements are always zero.
pub fn detect_lrt(y: &MeasurementVector, g: &SensingGraph, c: f64, p: &ChannelParams) -> Result<DetectionReport> {
    check_len(y, g)?;
    if !(c > 0.0) {
        return Err(ZmdError::InvalidParameter(format!("LRT threshold c = {c} must be > 0")));
    }
    let log_c = c.ln();
    let mut zeros = Vec::new();
    for (m, &v) in y.values.iter().enumerate() {
        let d = g.measurement_degree(m);
        if d == 0 || log_likelihood_ratio(v, d, p)? < log_c {
            zeros.push(m);
        }
    }
    Ok(DetectionReport::from_zero_measurements(g, zeros, None))
}

/// The magnitude `c'` with `Lambda(c') = c` for degree `d`: the LRT with
/// cut `c` and the threshold rule with `c'` flag the same measurements.
/// Returns 0 when `c <= Lambda(0)` (nothing is flagged).
pub fn lrt_equivalent_threshold(c: f64, d: usize, p: &ChannelParams) -> Result<f64> {
    if !(c > 0.0) {
        return Err(ZmdError::InvalidParameter(format!("LRT threshold c = {c} must be > 0")));
    }
    if c == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let target = c.ln();
    let f = |y: f64| log_likelihood_ratio(y, d, p);
    if f(0.0)? >= target {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = p.sigma_n.max(1e-300);
    while f(hi)? < target {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Threshold rule: measurement `m` is zero when `|y_m| < c'`.
pub fn detect_threshold(y: &MeasurementVector, g: &SensingGraph, c_prime: f64) -> Result<DetectionReport> {
    check_len(y, g)?;
    if !(c_prime >= 0.0) {
        return Err(ZmdError::InvalidParameter(format!("c' = {c_prime} must be >= 0")));
    }
    let zeros = y
        .values
        .iter()
        .enumerate()
        .filter_map(|(m, v)| (v.abs() < c_prime).then_some(m))
        .collect();
    Ok(DetectionReport::from_zero_measurements(g, zeros, Some(c_prime)))
}

/// Result of threshold calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    /// Largest threshold meeting the target; infinite when every threshold does.
    pub c_prime: f64,
    /// Analytic `P_WZD` at `c_prime`.
    pub p_wzd: f64,
    /// `false` when `P_WZD(c')` was not monotone on the bracket and the grid
    /// fallback located the crossing.
    pub monotone: bool,
}

/// Absolute tolerance on the calibrated `P_WZD`.
pub const CALIBRATION_TOL: f64 = 1e-6;
const CALIBRATION_GRID: usize = 256;

/// Largest `c'` whose analytic `P_WZD` on a `(d_V, d_M)`-regular graph does
/// not exceed `target`.
pub fn calibrate_threshold(dm: usize, dv: usize, p: &ChannelParams, target: f64) -> Result<Calibration> {
    let pwzd = |c: f64| {
        let pd = analysis::p_d(c, p.sigma_n)?;
        let pfa = analysis::p_fa(c, p.alpha, dm, p.sigma_s, p.sigma_n)?;
        analysis::pwzd_regular_noisy(p.alpha, dm, dv, pd, pfa)
    };
    calibrate_with(p, dm, target, pwzd)
}

/// As [`calibrate_threshold`] for an irregular ensemble.
pub fn calibrate_threshold_irregular(
    dist: &DegreeDistribution,
    p: &ChannelParams,
    target: f64,
) -> Result<Calibration> {
    let pwzd = |c: f64| {
        let pd = analysis::p_d(c, p.sigma_n)?;
        let pfa = analysis::p_fa_irregular(c, p.alpha, dist, p.sigma_s, p.sigma_n)?;
        analysis::pwzd_irregular_noisy(p.alpha, dist, pd, pfa)
    };
    let max_dm = dist.measurement.keys().copied().max().unwrap_or(1);
    calibrate_with(p, max_dm, target, pwzd)
}

fn calibrate_with(
    p: &ChannelParams,
    max_dm: usize,
    target: f64,
    pwzd: impl Fn(f64) -> Result<f64>,
) -> Result<Calibration> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(ZmdError::InvalidProbability {
            name: "target P_WZD",
            value: target,
        });
    }
    if p.alpha == 0.0 {
        return Err(ZmdError::DegenerateChannel("alpha = 0: nothing to protect".into()));
    }
    if target >= p.alpha {
        // P_WZD never exceeds alpha.
        return Ok(Calibration {
            c_prime: f64::INFINITY,
            p_wzd: p.alpha,
            monotone: true,
        });
    }
    let small = if p.sigma_n > 0.0 { p.sigma_n.min(p.sigma_s) } else { p.sigma_s };
    let lo = 1e-9 * small;
    let floor = pwzd(lo)?;
    if floor > target {
        return Err(ZmdError::UnreachableTarget { target, floor });
    }
    let mut hi = 12.0 * (4.0 * max_dm as f64 * p.sigma_s * p.sigma_s + p.sigma_n * p.sigma_n).sqrt();
    while pwzd(hi)? <= target {
        hi *= 2.0;
        if !hi.is_finite() {
            return Ok(Calibration {
                c_prime: f64::INFINITY,
                p_wzd: p.alpha,
                monotone: true,
            });
        }
    }

    let ratio = (hi / lo).powf(1.0 / (CALIBRATION_GRID - 1) as f64);
    let grid: Vec<f64> = (0..CALIBRATION_GRID).map(|i| lo * ratio.powi(i as i32)).collect();
    let values = grid.iter().map(|&c| pwzd(c)).collect::<Result<Vec<_>>>()?;
    let monotone = values.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    let (mut a, mut b) = if monotone {
        (lo, hi)
    } else {
        let i = values.iter().position(|&v| v > target).expect("hi exceeds target");
        (grid[i - 1], grid[i])
    };
    for _ in 0..300 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if pwzd(mid)? <= target {
            a = mid;
        } else {
            b = mid;
        }
    }
    let achieved = pwzd(a)?;
    debug_assert!(achieved <= target);
    if monotone && target - achieved > CALIBRATION_TOL {
        return Err(ZmdError::InvalidParameter(format!(
            "calibration stalled at P_WZD = {achieved} for target {target}"
        )));
    }
    Ok(Calibration {
        c_prime: a,
        p_wzd: achieved,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_regular_graph;
    use crate::operator::{build_sensing_matrix, measure};
    use crate::spectrum::{sample_occupancy, sample_spectrum};
    use proptest::prelude::*;

    fn mv(values: Vec<f64>) -> MeasurementVector {
        MeasurementVector {
            values,
            sigma_n: 0.0,
            seed: 0,
        }
    }

    fn params() -> ChannelParams {
        ChannelParams::new(0.25, 1.0, 0.1).unwrap()
    }

    #[test]
    fn noiseless_all_zero_flags_everything_connected() {
        let g = crate::graph::build_one_to_one_graph(5, 3, 0).unwrap();
        let r = detect_noiseless(&mv(vec![0.0; 3]), &g, 1e-12).unwrap();
        assert_eq!(r.zero_measurements, vec![0, 1, 2]);
        let connected: Vec<usize> = (0..5).filter(|&v| g.variable_degree(v) > 0).collect();
        assert_eq!(r.vacant_channels, connected);
    }

    #[test]
    fn noiseless_single_occupied_block() {
        // L = 4, M = 2, d_M = 2: block j's measurement is non-zero, the other
        // measurement is zero, so exactly the two blocks on it are flagged.
        let g = build_regular_graph(4, 2, 2, 3).unwrap();
        let a = build_sensing_matrix(g.clone(), 2, 1).unwrap();
        for j in 0..4 {
            let mut occ = vec![false; 4];
            occ[j] = true;
            let s = sample_spectrum(&occ, 2, 1.0, j as u64).unwrap();
            let y = measure(&a, &s, 0.0, 0).unwrap();
            let r = detect_noiseless(&y, &g, 1e-12).unwrap();
            let other = 1 - g.measurements_of(j)[0];
            assert_eq!(r.zero_measurements, vec![other]);
            assert_eq!(r.vacant_channels, g.variables_of(other).to_vec());
            assert!(!r.vacant_channels.contains(&j));
        }
    }

    #[test]
    fn noiseless_all_occupied_finds_nothing() {
        let g = build_regular_graph(40, 20, 4, 3).unwrap();
        let a = build_sensing_matrix(g.clone(), 3, 1).unwrap();
        let s = sample_spectrum(&[true; 40], 3, 1.0, 2).unwrap();
        let y = measure(&a, &s, 0.0, 0).unwrap();
        let r = detect_noiseless(&y, &g, default_zero_tolerance(1.0, 3, 4)).unwrap();
        assert!(r.zero_measurements.is_empty());
        assert!(r.vacant_channels.is_empty());
    }

    #[test]
    fn priors() {
        assert!((hypothesis_prior(0, 2, 0.25).unwrap() - 0.5625).abs() < 1e-15);
        assert!((hypothesis_prior(1, 2, 0.25).unwrap() - 0.375).abs() < 1e-15);
        for d in 0..10 {
            let total: f64 = (0..=d).map(|i| hypothesis_prior(i, d, 0.3).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        assert!(hypothesis_prior(3, 2, 0.5).is_err());
    }

    #[test]
    fn likelihood_ratio_at_zero() {
        // Single hypothesis: ratio of N(0; 0, 4 + 0.01) to N(0; 0, 0.01).
        let pdf = |v: f64| 1.0 / (2.0 * std::f64::consts::PI * v).sqrt();
        let expect = pdf(4.01) / pdf(0.01);
        let got = likelihood_ratio(0.0, 1, &params()).unwrap();
        assert!((got - expect).abs() < 1e-14);
        assert!((got - 0.049_937_616).abs() < 1e-8);
    }

    #[test]
    fn likelihood_ratio_matches_density_ratio() {
        let p = ChannelParams::new(0.3, 1.0, 0.2).unwrap();
        let pdf = |y: f64, v: f64| (-y * y / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt();
        for &y in &[0.0, 0.1, 0.4, 1.0] {
            let d = 3;
            let num: f64 = (1..=d)
                .map(|i| binomial_pmf(i, d, 0.3) * pdf(y, 4.0 * i as f64 + 0.04))
                .sum::<f64>()
                / (1.0 - 0.7f64.powi(3));
            let expect = num / pdf(y, 0.04);
            let got = likelihood_ratio(y, d, &p).unwrap();
            assert!((got / expect - 1.0).abs() < 1e-12, "y={y}");
        }
    }

    #[test]
    fn likelihood_ratio_degenerate() {
        assert!(matches!(
            likelihood_ratio(0.1, 2, &ChannelParams::new(0.25, 1.0, 0.0).unwrap()),
            Err(ZmdError::DegenerateChannel(_))
        ));
        assert!(matches!(
            likelihood_ratio(0.1, 2, &ChannelParams::new(1.0, 1.0, 0.1).unwrap()),
            Err(ZmdError::DegenerateChannel(_))
        ));
        // Huge |y| stays finite in the log domain.
        assert!(log_likelihood_ratio(1e3, 4, &params()).unwrap().is_finite());
    }

    #[test]
    fn lrt_extremes() {
        let g = build_regular_graph(6, 3, 2, 0).unwrap();
        let y = mv(vec![0.0, 0.3, -2.0]);
        let p = params();
        let l0 = likelihood_ratio(0.0, 2, &p).unwrap();
        let r = detect_lrt(&y, &g, l0, &p).unwrap();
        assert!(r.zero_measurements.is_empty());
        let r = detect_lrt(&y, &g, f64::INFINITY, &p).unwrap();
        assert_eq!(r.zero_measurements, vec![0, 1, 2]);
        assert_eq!(r.vacant_channels, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn threshold_extremes_and_nesting() {
        let g = build_regular_graph(6, 3, 2, 0).unwrap();
        let y = mv(vec![0.05, -0.3, 2.0]);
        assert!(detect_threshold(&y, &g, 0.0).unwrap().vacant_channels.is_empty());
        assert_eq!(detect_threshold(&y, &g, f64::INFINITY).unwrap().zero_measurements.len(), 3);
        let mut prev = 0;
        for c in [0.0, 0.01, 0.1, 0.31, 1.0, 3.0] {
            let r = detect_threshold(&y, &g, c).unwrap();
            assert!(r.vacant_channels.len() >= prev);
            prev = r.vacant_channels.len();
            assert_eq!(r.threshold_used, Some(c));
        }
        assert!(detect_threshold(&y, &g, -1.0).is_err());
    }

    #[test]
    fn threshold_near_zero_matches_noiseless() {
        let g = build_regular_graph(20, 10, 4, 1).unwrap();
        let a = build_sensing_matrix(g.clone(), 2, 1).unwrap();
        let s = sample_spectrum(&sample_occupancy(20, 0.2, 4).unwrap(), 2, 1.0, 5).unwrap();
        let y = measure(&a, &s, 0.0, 0).unwrap();
        let eps = 1e-12;
        let a = detect_noiseless(&y, &g, eps).unwrap();
        let b = detect_threshold(&y, &g, eps).unwrap();
        assert_eq!(a.vacant_channels, b.vacant_channels);
        assert_eq!(a.zero_measurements, b.zero_measurements);
    }

    #[test]
    fn calibration_hits_target() {
        let p = ChannelParams::from_snr_db(0.25, 1.0, 25.0).unwrap();
        let cal = calibrate_threshold(2, 1, &p, 0.02).unwrap();
        assert!(cal.monotone);
        assert!((cal.p_wzd - 0.02).abs() <= CALIBRATION_TOL);
        assert!(cal.c_prime > 0.0 && cal.c_prime.is_finite());
        // Just above the returned threshold the target is violated.
        let pd = analysis::p_d(cal.c_prime * 1.001, p.sigma_n).unwrap();
        let pfa = analysis::p_fa(cal.c_prime * 1.001, p.alpha, 2, 1.0, p.sigma_n).unwrap();
        assert!(analysis::pwzd_regular_noisy(0.25, 2, 1, pd, pfa).unwrap() > 0.02);
    }

    #[test]
    fn calibration_limits() {
        let p = ChannelParams::from_snr_db(0.25, 1.0, 25.0).unwrap();
        let near = calibrate_threshold(2, 1, &p, 0.2499).unwrap();
        let mid = calibrate_threshold(2, 1, &p, 0.1).unwrap();
        assert!(near.c_prime > mid.c_prime);
        assert_eq!(calibrate_threshold(2, 1, &p, 0.3).unwrap().c_prime, f64::INFINITY);
        // At very low SNR a tiny target is unreachable.
        let noisy = ChannelParams::from_snr_db(0.5, 1.0, -10.0).unwrap();
        assert!(matches!(
            calibrate_threshold(2, 1, &noisy, 1e-4),
            Err(ZmdError::UnreachableTarget { .. })
        ));
        // Noiseless: small thresholds already give P_WZD near 0.
        let clean = ChannelParams::new(0.25, 1.0, 0.0).unwrap();
        let cal = calibrate_threshold(2, 1, &clean, 0.01).unwrap();
        assert!(cal.c_prime > 0.0);
        let pfa = analysis::p_fa(1e-6, 0.25, 2, 1.0, 0.0).unwrap();
        assert!(analysis::pwzd_regular_noisy(0.25, 2, 1, 1.0, pfa).unwrap() < 1e-6);
    }

    #[test]
    fn irregular_calibration_matches_regular_for_point_masses() {
        let p = ChannelParams::from_snr_db(0.2, 1.0, 20.0).unwrap();
        let a = calibrate_threshold(4, 2, &p, 0.05).unwrap();
        let b = calibrate_threshold_irregular(&DegreeDistribution::regular(2, 4), &p, 0.05).unwrap();
        assert!((a.c_prime - b.c_prime).abs() < 1e-9 * a.c_prime);
    }

    proptest! {
        #[test]
        fn lrt_is_even_and_increasing(y in 0.0f64..3.0, dy in 1e-6f64..1.0, d in 1usize..6) {
            let p = params();
            let l = log_likelihood_ratio(y, d, &p).unwrap();
            prop_assert_eq!(l, log_likelihood_ratio(-y, d, &p).unwrap());
            prop_assert!(log_likelihood_ratio(y + dy, d, &p).unwrap() > l);
        }

        #[test]
        fn lrt_equivalent_threshold_inverts(c in 0.5f64..1e6, d in 1usize..5) {
            let p = params();
            let t = lrt_equivalent_threshold(c, d, &p).unwrap();
            if t > 0.0 {
                let l = likelihood_ratio(t, d, &p).unwrap();
                prop_assert!((l / c - 1.0).abs() < 1e-9);
            } else {
                prop_assert!(likelihood_ratio(0.0, d, &p).unwrap() >= c);
            }
        }
    }
}
