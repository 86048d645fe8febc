//! Closed-form detection probabilities.
//!
//! Notation used throughout: `alpha` is the occupancy probability, `d_M`/`d_V`
//! the measurement/variable degrees of a regular graph, `P_D` the probability
//! that a zero measurement is flagged, `P_FA` the probability that a non-zero
//! one is, `P_ZD` the fraction of vacant sub-channels detected and `P_WZD` the
//! fraction of flagged sub-channels that are actually occupied.
//!
//! Degenerate inputs return their limit values rather than NaN where a limit
//! exists; otherwise a [`ZmdError::DegenerateChannel`] or
//! [`ZmdError::IndeterminateRatio`] is returned.

mod erf;

pub use erf::{erf, erfc};

use crate::error::{check_probability, Result, ZmdError};
use crate::graph::DegreeDistribution;

/// `1 - (1 - eps)^d`, accurate for tiny `eps`.
fn one_minus_pow(eps: f64, d: usize) -> f64 {
    if d == 0 {
        return 0.0;
    }
    -(d as f64 * (-eps).ln_1p()).exp_m1()
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `C(d, i) alpha^i (1 - alpha)^(d - i)`: prior of exactly `i` occupied
/// neighbors among `d`.
pub fn binomial_pmf(i: usize, d: usize, alpha: f64) -> f64 {
    if i > d {
        return 0.0;
    }
    binomial(d, i) * alpha.powi(i as i32) * (1.0 - alpha).powi((d - i) as i32)
}

fn check_sigma(name: &str, value: f64, allow_zero: bool) -> Result<()> {
    let ok = value.is_finite() && (value > 0.0 || (allow_zero && value == 0.0));
    if ok {
        Ok(())
    } else {
        Err(ZmdError::InvalidParameter(format!("{name} = {value}")))
    }
}

/// Probability that a degree-`d_M` measurement is exactly zero: `(1-alpha)^d_M`.
pub fn p_zero_measurement(alpha: f64, dm: usize) -> Result<f64> {
    check_probability("alpha", alpha)?;
    Ok((1.0 - alpha).powi(dm as i32))
}

/// Noiseless `P_ZD` of a `(d_V, d_M)`-regular graph:
/// `1 - (1 - (1-alpha)^(d_M-1))^d_V`.
pub fn pzd_regular_noiseless(alpha: f64, dm: usize, dv: usize) -> Result<f64> {
    check_probability("alpha", alpha)?;
    if dm == 0 || dv == 0 {
        return Err(ZmdError::InvalidParameter("regular degrees must be >= 1".into()));
    }
    Ok(one_minus_pow((1.0 - alpha).powi(dm as i32 - 1), dv))
}

/// Edge-perspective probability that the measurement end of an edge from a
/// vacant variable node is zero:
/// `sum_i i rho_i (1-alpha)^(i-1) / sum_i i rho_i`.
pub fn edge_zero_probability(alpha: f64, dist: &DegreeDistribution) -> f64 {
    let (num, den) = dist
        .measurement
        .iter()
        .filter(|(&d, _)| d > 0)
        .fold((0.0, 0.0), |(n, s), (&d, &f)| {
            let w = d as f64 * f;
            (n + w * (1.0 - alpha).powi(d as i32 - 1), s + w)
        });
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Noiseless `P_ZD` of an irregular ensemble: `1 - sum_i lambda_i (1 - p0')^i`.
pub fn pzd_irregular_noiseless(alpha: f64, dist: &DegreeDistribution) -> Result<f64> {
    check_probability("alpha", alpha)?;
    let p0 = edge_zero_probability(alpha, dist);
    Ok(dist
        .variable
        .iter()
        .map(|(&d, &f)| f * one_minus_pow(p0, d))
        .sum())
}

/// Threshold false-alarm probability for a degree-`d_M` measurement: the
/// probability that `|y_m| < c'` given at least one occupied neighbor.
pub fn p_fa(c_prime: f64, alpha: f64, dm: usize, sigma_s: f64, sigma_n: f64) -> Result<f64> {
    check_probability("alpha", alpha)?;
    check_sigma("sigma_s", sigma_s, false)?;
    check_sigma("sigma_n", sigma_n, true)?;
    if !(c_prime >= 0.0) {
        return Err(ZmdError::InvalidParameter(format!("c' = {c_prime}")));
    }
    if alpha == 0.0 || dm == 0 {
        return Err(ZmdError::DegenerateChannel(
            "no measurement can have an occupied neighbor".into(),
        ));
    }
    let nonzero_prior = 1.0 - (1.0 - alpha).powi(dm as i32);
    let mass: f64 = (1..=dm)
        .map(|i| {
            let var = 4.0 * i as f64 * sigma_s * sigma_s + sigma_n * sigma_n;
            binomial_pmf(i, dm, alpha) * erf(c_prime / (2.0 * var).sqrt())
        })
        .sum();
    Ok((mass / nonzero_prior).clamp(0.0, 1.0))
}

/// False-alarm probability averaged over the measurement degrees of an
/// irregular ensemble, each degree weighted by its share of non-zero
/// measurements.
pub fn p_fa_irregular(
    c_prime: f64,
    alpha: f64,
    dist: &DegreeDistribution,
    sigma_s: f64,
    sigma_n: f64,
) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for (&d, &f) in dist.measurement.iter().filter(|(&d, &f)| d > 0 && f > 0.0) {
        let w = f * (1.0 - (1.0 - alpha).powi(d as i32));
        if w > 0.0 {
            num += w * p_fa(c_prime, alpha, d, sigma_s, sigma_n)?;
            den += w;
        }
    }
    if den > 0.0 {
        Ok(num / den)
    } else {
        Err(ZmdError::DegenerateChannel(
            "no measurement can have an occupied neighbor".into(),
        ))
    }
}

/// Detection probability of a zero measurement: `erf(c' / sqrt(2 sigma_n^2))`.
/// For `sigma_n = 0` the limit (1 for `c' > 0`, 0 for `c' = 0`) is returned.
pub fn p_d(c_prime: f64, sigma_n: f64) -> Result<f64> {
    check_sigma("sigma_n", sigma_n, true)?;
    if !(c_prime >= 0.0) {
        return Err(ZmdError::InvalidParameter(format!("c' = {c_prime}")));
    }
    if sigma_n == 0.0 {
        return Ok(if c_prime > 0.0 { 1.0 } else { 0.0 });
    }
    Ok(erf(c_prime / (2.0 * sigma_n * sigma_n).sqrt()))
}

fn check_rates(p_d: f64, p_fa: f64) -> Result<()> {
    check_probability("P_D", p_d)?;
    check_probability("P_FA", p_fa)
}

fn ratio(num: f64, den: f64) -> Result<f64> {
    if den > 0.0 {
        Ok((num / den).clamp(0.0, 1.0))
    } else {
        Err(ZmdError::IndeterminateRatio(
            "no sub-channel is ever flagged vacant".into(),
        ))
    }
}

/// `P_WZD` of a regular graph given per-measurement `P_D` and `P_FA`:
/// `alpha (1 - (1-P_FA)^d_V) / (1 - (1 - q P_D - (1-q) P_FA)^d_V)`, `q = (1-alpha)^d_M`.
pub fn pwzd_regular_noisy(alpha: f64, dm: usize, dv: usize, p_d: f64, p_fa: f64) -> Result<f64> {
    check_probability("alpha", alpha)?;
    check_rates(p_d, p_fa)?;
    let q = (1.0 - alpha).powi(dm as i32);
    let num = alpha * one_minus_pow(p_fa, dv);
    let den = one_minus_pow(q * p_d + (1.0 - q) * p_fa, dv);
    ratio(num, den)
}

/// `P_ZD` of a regular graph given `P_D` and `P_FA`:
/// `1 - (1 - q' P_D - (1-q') P_FA)^d_V`, `q' = (1-alpha)^(d_M-1)`.
pub fn pzd_regular_noisy(alpha: f64, dm: usize, dv: usize, p_d: f64, p_fa: f64) -> Result<f64> {
    check_probability("alpha", alpha)?;
    check_rates(p_d, p_fa)?;
    if dm == 0 {
        return Err(ZmdError::InvalidParameter("d_M must be >= 1".into()));
    }
    let q = (1.0 - alpha).powi(dm as i32 - 1);
    Ok(one_minus_pow(q * p_d + (1.0 - q) * p_fa, dv))
}

/// Irregular-ensemble `P_WZD`:
/// `alpha (1 - sum_i lambda_i (1-P_FA)^i) /
///  (1 - sum_i lambda_i (1 - P_FA - (P_D - P_FA) sum_j rho_j (1-alpha)^j)^i)`.
pub fn pwzd_irregular_noisy(alpha: f64, dist: &DegreeDistribution, p_d: f64, p_fa: f64) -> Result<f64> {
    check_probability("alpha", alpha)?;
    check_rates(p_d, p_fa)?;
    let zero_mass: f64 = dist
        .measurement
        .iter()
        .map(|(&j, &f)| f * (1.0 - alpha).powi(j as i32))
        .sum();
    let eps = p_fa + (p_d - p_fa) * zero_mass;
    let (num, den) = dist.variable.iter().fold((0.0, 0.0), |(n, s), (&i, &f)| {
        (n + f * one_minus_pow(p_fa, i), s + f * one_minus_pow(eps, i))
    });
    ratio(alpha * num, den)
}

/// Irregular-ensemble `P_ZD`:
/// `1 - sum_i lambda_i (1 - P_FA - (P_D - P_FA) p0')^i`.
pub fn pzd_irregular_noisy(alpha: f64, dist: &DegreeDistribution, p_d: f64, p_fa: f64) -> Result<f64> {
    check_probability("alpha", alpha)?;
    check_rates(p_d, p_fa)?;
    let eps = p_fa + (p_d - p_fa) * edge_zero_probability(alpha, dist);
    Ok(dist
        .variable
        .iter()
        .map(|(&i, &f)| f * one_minus_pow(eps, i))
        .sum())
}

/// The sensing-graph ensemble a prediction refers to.
#[derive(Debug, Clone, PartialEq)]
pub enum Ensemble {
    Regular { dv: usize, dm: usize },
    Irregular(DegreeDistribution),
}

impl Ensemble {
    pub fn distribution(&self) -> DegreeDistribution {
        match self {
            Ensemble::Regular { dv, dm } => DegreeDistribution::regular(*dv, *dm),
            Ensemble::Irregular(d) => d.clone(),
        }
    }
}

/// Predicted detection probabilities for one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticalPrediction {
    pub alpha: f64,
    pub ensemble: Ensemble,
    pub sigma_s: f64,
    pub sigma_n: f64,
    /// Threshold; `None` means exact-zero detection (noiseless ZMD).
    pub c_prime: Option<f64>,
    pub p_zd: f64,
    /// `None` when no sub-channel can ever be flagged.
    pub p_wzd: Option<f64>,
    /// `None` when no measurement can have an occupied neighbor (`alpha = 0`).
    pub p_fa: Option<f64>,
    pub p_d: f64,
}

/// Evaluates every probability for `ensemble` at one operating point.
pub fn predict(
    alpha: f64,
    ensemble: &Ensemble,
    sigma_s: f64,
    sigma_n: f64,
    c_prime: Option<f64>,
) -> Result<AnalyticalPrediction> {
    check_probability("alpha", alpha)?;
    let (pd, pfa) = match c_prime {
        None => (1.0, Some(0.0)),
        Some(c) => {
            let pd = p_d(c, sigma_n)?;
            let pfa = match ensemble {
                Ensemble::Regular { dm, .. } => p_fa(c, alpha, *dm, sigma_s, sigma_n),
                Ensemble::Irregular(d) => p_fa_irregular(c, alpha, d, sigma_s, sigma_n),
            };
            match pfa {
                Ok(v) => (pd, Some(v)),
                Err(ZmdError::DegenerateChannel(_)) => (pd, None),
                Err(e) => return Err(e),
            }
        }
    };
    // With no occupied mass the false-alarm rate never enters the formulas.
    let pfa_used = pfa.unwrap_or(0.0);
    let (p_zd, p_wzd) = match ensemble {
        Ensemble::Regular { dv, dm } => (
            pzd_regular_noisy(alpha, *dm, *dv, pd, pfa_used)?,
            pwzd_regular_noisy(alpha, *dm, *dv, pd, pfa_used),
        ),
        Ensemble::Irregular(d) => (
            pzd_irregular_noisy(alpha, d, pd, pfa_used)?,
            pwzd_irregular_noisy(alpha, d, pd, pfa_used),
        ),
    };
    let p_wzd = match p_wzd {
        Ok(v) => Some(v),
        Err(ZmdError::IndeterminateRatio(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(AnalyticalPrediction {
        alpha,
        ensemble: ensemble.clone(),
        sigma_s,
        sigma_n,
        c_prime,
        p_zd,
        p_wzd,
        p_fa: pfa,
        p_d: pd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    const TOL: f64 = 1e-12;

    #[test]
    fn zero_measurement_probability() {
        assert_eq!(p_zero_measurement(0.0, 5).unwrap(), 1.0);
        assert!((p_zero_measurement(0.25, 2).unwrap() - 0.5625).abs() < TOL);
    }

    #[test]
    fn regular_noiseless_values() {
        assert_eq!(pzd_regular_noiseless(0.0, 4, 2).unwrap(), 1.0);
        assert!((pzd_regular_noiseless(0.5, 2, 1).unwrap() - 0.5).abs() < TOL);
        // 1 - (1 - 27/64)^2 = 1 - (37/64)^2 = 2727/4096.
        assert!((pzd_regular_noiseless(0.25, 4, 2).unwrap() - 2727.0 / 4096.0).abs() < TOL);
    }

    #[test]
    fn irregular_noiseless_reductions() {
        for &(a, dm, dv) in &[(0.1, 2, 1), (0.25, 4, 2), (0.3, 6, 3)] {
            let dist = DegreeDistribution::regular(dv, dm);
            let irr = pzd_irregular_noiseless(a, &dist).unwrap();
            assert!((irr - pzd_regular_noiseless(a, dm, dv).unwrap()).abs() < TOL);
        }
        let dist = DegreeDistribution::new(
            BTreeMap::from([(0, 0.5), (2, 0.5)]),
            BTreeMap::from([(2, 1.0)]),
        )
        .unwrap();
        // Degree-0 nodes are never detected; degree-2 nodes: 1 - alpha^2.
        let a = 0.25;
        let expect = 0.5 * (1.0 - a * a);
        assert!((pzd_irregular_noiseless(a, &dist).unwrap() - expect).abs() < TOL);
    }

    #[test]
    fn detection_rates() {
        assert_eq!(p_d(0.0, 0.3).unwrap(), 0.0);
        assert!((p_d(2f64.sqrt() * 0.3, 0.3).unwrap() - 0.842_700_792_949_714_9).abs() < 1e-14);
        assert_eq!(p_d(0.5, 0.0).unwrap(), 1.0);
        assert_eq!(p_d(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(p_fa(0.0, 0.25, 2, 1.0, 0.1).unwrap(), 0.0);
        assert_eq!(p_fa(f64::INFINITY, 0.25, 2, 1.0, 0.1).unwrap(), 1.0);
        assert!(matches!(p_fa(1.0, 0.0, 2, 1.0, 0.1), Err(ZmdError::DegenerateChannel(_))));
        assert!(p_d(-1.0, 0.1).is_err());
    }

    #[test]
    fn limit_identities() {
        for &(a, dm, dv) in &[(0.1, 2, 1), (0.25, 4, 2), (0.5, 3, 3)] {
            assert_eq!(pwzd_regular_noisy(a, dm, dv, 1.0, 0.0).unwrap(), 0.0);
            let noiseless = pzd_regular_noiseless(a, dm, dv).unwrap();
            assert!((pzd_regular_noisy(a, dm, dv, 1.0, 0.0).unwrap() - noiseless).abs() < TOL);
            assert!((pwzd_regular_noisy(a, dm, dv, 1.0, 1.0).unwrap() - a).abs() < TOL);
            assert!((pzd_regular_noisy(a, dm, dv, 1.0, 1.0).unwrap() - 1.0).abs() < TOL);
        }
        assert!(matches!(
            pwzd_regular_noisy(0.25, 2, 1, 0.0, 0.0),
            Err(ZmdError::IndeterminateRatio(_))
        ));
    }

    #[test]
    fn irregular_noiseless_limit() {
        let dist = DegreeDistribution::new(
            BTreeMap::from([(1, 0.3), (2, 0.7)]),
            BTreeMap::from([(3, 0.5), (4, 0.5)]),
        )
        .unwrap();
        let a = 0.2;
        assert_eq!(pwzd_irregular_noisy(a, &dist, 1.0, 0.0).unwrap(), 0.0);
        let pzd = pzd_irregular_noisy(a, &dist, 1.0, 0.0).unwrap();
        assert!((pzd - pzd_irregular_noiseless(a, &dist).unwrap()).abs() < TOL);
    }

    #[test]
    fn small_rates_keep_precision() {
        // Near c' = 0 the ratio tends to a finite limit instead of 0/0.
        let w = pwzd_regular_noisy(0.25, 2, 1, 1e-18, 2e-19).unwrap();
        assert!(w > 0.0 && w < 0.25);
    }

    #[test]
    fn prediction_noiseless_and_noisy() {
        let ens = Ensemble::Regular { dv: 1, dm: 2 };
        let p = predict(0.25, &ens, 1.0, 0.0, None).unwrap();
        assert!((p.p_zd - 0.75).abs() < TOL);
        assert_eq!(p.p_wzd, Some(0.0));
        let p = predict(0.25, &ens, 1.0, 0.1, Some(0.2)).unwrap();
        assert!(p.p_wzd.unwrap() > 0.0);
        let p = predict(0.0, &ens, 1.0, 0.1, Some(0.2)).unwrap();
        assert_eq!(p.p_fa, None);
        assert_eq!(p.p_wzd, Some(0.0));
    }

    fn arb_dist() -> impl Strategy<Value = DegreeDistribution> {
        let side = || {
            prop::collection::vec((1usize..8, 0.01f64..1.0), 1..4).prop_map(|v| {
                let mut m = BTreeMap::new();
                for (d, w) in v {
                    *m.entry(d).or_insert(0.0) += w;
                }
                let total: f64 = m.values().sum();
                m.values_mut().for_each(|w| *w /= total);
                m
            })
        };
        (side(), side()).prop_map(|(v, m)| DegreeDistribution::new(v, m).unwrap())
    }

    proptest! {
        #[test]
        fn outputs_are_probabilities(
            alpha in 0.0f64..=1.0,
            dm in 1usize..12,
            dv in 1usize..8,
            pd in 0.0f64..=1.0,
            pfa in 0.0f64..=1.0,
            dist in arb_dist(),
        ) {
            let in_unit = |x: f64| (0.0..=1.0).contains(&x);
            prop_assert!(in_unit(pzd_regular_noiseless(alpha, dm, dv).unwrap()));
            prop_assert!(in_unit(pzd_regular_noisy(alpha, dm, dv, pd, pfa).unwrap()));
            if let Ok(w) = pwzd_regular_noisy(alpha, dm, dv, pd, pfa) {
                prop_assert!(in_unit(w));
                // Thresholding always has P_FA <= P_D, which bounds P_WZD by alpha.
                if pfa <= pd {
                    prop_assert!(w <= alpha + 1e-12);
                }
            }
            prop_assert!(in_unit(pzd_irregular_noiseless(alpha, &dist).unwrap()));
            prop_assert!(in_unit(pzd_irregular_noisy(alpha, &dist, pd, pfa).unwrap()));
            if let Ok(w) = pwzd_irregular_noisy(alpha, &dist, pd, pfa) {
                prop_assert!(in_unit(w));
            }
        }

        #[test]
        fn pzd_monotone_in_rates(
            alpha in 0.0f64..=1.0,
            dm in 1usize..10,
            dv in 1usize..6,
            pd in 0.0f64..=1.0,
            pfa in 0.0f64..=1.0,
            bump in 0.0f64..=1.0,
        ) {
            let base = pzd_regular_noisy(alpha, dm, dv, pd, pfa).unwrap();
            let more_d = pzd_regular_noisy(alpha, dm, dv, pd + (1.0 - pd) * bump, pfa).unwrap();
            let more_fa = pzd_regular_noisy(alpha, dm, dv, pd, pfa + (1.0 - pfa) * bump).unwrap();
            prop_assert!(more_d >= base - 1e-12);
            prop_assert!(more_fa >= base - 1e-12);
        }

        #[test]
        fn irregular_point_masses_reduce(
            alpha in 0.0f64..=1.0,
            dm in 1usize..10,
            dv in 1usize..6,
            pd in 0.0f64..=1.0,
            pfa in 0.0f64..=1.0,
        ) {
            let dist = DegreeDistribution::regular(dv, dm);
            let a = pzd_irregular_noisy(alpha, &dist, pd, pfa).unwrap();
            let b = pzd_regular_noisy(alpha, dm, dv, pd, pfa).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            match (pwzd_irregular_noisy(alpha, &dist, pd, pfa), pwzd_regular_noisy(alpha, dm, dv, pd, pfa)) {
                (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-12),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
            }
        }
    }
}
