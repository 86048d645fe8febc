//! Per-trial counts and their pooled estimates.

use crate::detector::DetectionReport;
use crate::graph::SensingGraph;

/// 95% two-sided normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Counts from one trial.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrialMetrics {
    pub vacant_channels: usize,
    pub occupied_channels: usize,
    /// Flagged and vacant.
    pub correct_detections: usize,
    /// Flagged but occupied.
    pub wrong_detections: usize,
    /// Zero measurements judged zero.
    pub zero_detected: usize,
    /// Zero measurements judged nonzero.
    pub zero_missed: usize,
    /// Nonzero measurements judged zero (false alarms).
    pub nonzero_flagged: usize,
    /// Nonzero measurements judged nonzero.
    pub nonzero_kept: usize,
}

impl TrialMetrics {
    /// Scores `report` against the true occupancy. A measurement is truly
    /// zero when none of its neighbors is occupied.
    pub fn tally(g: &SensingGraph, occupancy: &[bool], report: &DetectionReport) -> Self {
        let mut t = TrialMetrics::default();
        let flagged = report.vacant_mask(g.num_variables());
        for (v, &occ) in occupancy.iter().enumerate() {
            match (occ, flagged[v]) {
                (false, true) => t.correct_detections += 1,
                (true, true) => t.wrong_detections += 1,
                _ => {}
            }
            if occ {
                t.occupied_channels += 1;
            } else {
                t.vacant_channels += 1;
            }
        }
        let mut judged_zero = vec![false; g.num_measurements()];
        for &m in &report.zero_measurements {
            judged_zero[m] = true;
        }
        for (m, &z) in judged_zero.iter().enumerate() {
            let truly_zero = g.variables_of(m).iter().all(|&v| !occupancy[v]);
            match (truly_zero, z) {
                (true, true) => t.zero_detected += 1,
                (true, false) => t.zero_missed += 1,
                (false, true) => t.nonzero_flagged += 1,
                (false, false) => t.nonzero_kept += 1,
            }
        }
        t
    }

    pub fn num_channels(&self) -> usize {
        self.vacant_channels + self.occupied_channels
    }

    pub fn num_measurements(&self) -> usize {
        self.zero_detected + self.zero_missed + self.nonzero_flagged + self.nonzero_kept
    }

    pub fn detections(&self) -> usize {
        self.correct_detections + self.wrong_detections
    }

    pub fn p_zd(&self) -> Option<f64> {
        ratio(self.correct_detections, self.vacant_channels)
    }

    /// `None` when nothing was flagged.
    pub fn p_wzd(&self) -> Option<f64> {
        ratio(self.wrong_detections, self.detections())
    }

    pub fn p_d(&self) -> Option<f64> {
        ratio(self.zero_detected, self.zero_detected + self.zero_missed)
    }

    pub fn p_fa(&self) -> Option<f64> {
        ratio(self.nonzero_flagged, self.nonzero_flagged + self.nonzero_kept)
    }
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Pooled ratio `sum(a_t) / sum(b_t)` over trials with its standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEstimate {
    /// `None` when every denominator was zero.
    pub value: Option<f64>,
    pub numerator: u64,
    pub denominator: u64,
    /// Trials with a nonzero denominator.
    pub defined_trials: usize,
    /// Between-trial (delta-method) standard error of the pooled ratio.
    pub se_trial: f64,
}

impl RatioEstimate {
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        let num: u64 = pairs.iter().map(|p| p.0 as u64).sum();
        let den: u64 = pairs.iter().map(|p| p.1 as u64).sum();
        let defined_trials = pairs.iter().filter(|p| p.1 > 0).count();
        if den == 0 {
            return RatioEstimate {
                value: None,
                numerator: num,
                denominator: 0,
                defined_trials,
                se_trial: 0.0,
            };
        }
        let r = num as f64 / den as f64;
        let n = pairs.len() as f64;
        let se_trial = if pairs.len() > 1 {
            let mean_den = den as f64 / n;
            let ss: f64 = pairs
                .iter()
                .map(|&(a, b)| (a as f64 - r * b as f64).powi(2))
                .sum();
            (ss / (n - 1.0)).sqrt() / (n.sqrt() * mean_den)
        } else {
            0.0
        };
        RatioEstimate {
            value: Some(r),
            numerator: num,
            denominator: den,
            defined_trials,
            se_trial,
        }
    }

    /// Standard error taking the larger of the between-trial and binomial
    /// errors, the latter evaluated at `p`.
    pub fn se_at(&self, p: f64) -> f64 {
        if self.denominator == 0 {
            return f64::INFINITY;
        }
        let binom = (p * (1.0 - p) / self.denominator as f64).max(0.0).sqrt();
        self.se_trial.max(binom)
    }

    /// 95% half-width around the estimate itself.
    pub fn half_width(&self) -> Option<f64> {
        self.value.map(|v| Z95 * self.se_at(v))
    }

    /// `|estimate - p| <= k * 95% half-width`, with the binomial error
    /// evaluated at the hypothesized `p`.
    pub fn agrees_with(&self, p: f64, k: f64) -> bool {
        match self.value {
            Some(v) => (v - p).abs() <= k * Z95 * self.se_at(p),
            None => false,
        }
    }
}

/// Pooled estimates over all trials of one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSummary {
    pub trials: usize,
    pub p_zd: RatioEstimate,
    pub p_wzd: RatioEstimate,
    pub p_d: RatioEstimate,
    pub p_fa: RatioEstimate,
    /// Trials where nothing was flagged, so `P_WZD` was undefined.
    pub undefined_pwzd_trials: usize,
}

impl PointSummary {
    pub fn from_trials(trials: &[TrialMetrics]) -> Self {
        let est = |f: &dyn Fn(&TrialMetrics) -> (usize, usize)| {
            RatioEstimate::from_pairs(&trials.iter().map(f).collect::<Vec<_>>())
        };
        PointSummary {
            trials: trials.len(),
            p_zd: est(&|t| (t.correct_detections, t.vacant_channels)),
            p_wzd: est(&|t| (t.wrong_detections, t.detections())),
            p_d: est(&|t| (t.zero_detected, t.zero_detected + t.zero_missed)),
            p_fa: est(&|t| (t.nonzero_flagged, t.nonzero_flagged + t.nonzero_kept)),
            undefined_pwzd_trials: trials.iter().filter(|t| t.detections() == 0).count(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn graph() -> SensingGraph {
        SensingGraph::from_measurement_adjacency(4, vec![vec![0, 1], vec![2, 3]]).unwrap()
    }

    #[test]
    fn tally_counts() {
        let g = graph();
        let occ = [false, false, true, false];
        let report = DetectionReport::from_zero_measurements(&g, vec![0, 1], None);
        let t = TrialMetrics::tally(&g, &occ, &report);
        assert_eq!(
            t,
            TrialMetrics {
                vacant_channels: 3,
                occupied_channels: 1,
                correct_detections: 3,
                wrong_detections: 1,
                zero_detected: 1,
                zero_missed: 0,
                nonzero_flagged: 1,
                nonzero_kept: 0,
            }
        );
        assert_eq!(t.p_zd(), Some(1.0));
        assert_eq!(t.p_wzd(), Some(0.25));
        assert_eq!(t.p_fa(), Some(1.0));
    }

    #[test]
    fn undefined_ratios() {
        let g = graph();
        let report = DetectionReport::from_zero_measurements(&g, vec![], None);
        let t = TrialMetrics::tally(&g, &[true; 4], &report);
        assert_eq!(t.p_zd(), None);
        assert_eq!(t.p_wzd(), None);
        assert_eq!(t.p_d(), None);
        let s = PointSummary::from_trials(&[t, t]);
        assert_eq!(s.undefined_pwzd_trials, 2);
        assert_eq!(s.p_wzd.value, None);
        assert!(!s.p_wzd.agrees_with(0.0, 4.0));
    }

    #[test]
    fn ratio_se_matches_binomial_for_bernoulli_trials() {
        // One unit per trial: the delta-method error is the binomial error
        // with the n - 1 sample-variance divisor.
        let pairs: Vec<(usize, usize)> = (0..1000).map(|i| ((i % 4 == 0) as usize, 1)).collect();
        let e = RatioEstimate::from_pairs(&pairs);
        assert_eq!(e.value, Some(0.25));
        let binom = (0.25f64 * 0.75 / 1000.0).sqrt();
        assert!((e.se_trial / binom - (1000.0f64 / 999.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn agreement_at_extremes() {
        let e = RatioEstimate::from_pairs(&[(500, 500), (300, 300)]);
        assert!(e.agrees_with(1.0, 1.0));
        assert!(!e.agrees_with(0.9, 1.0));
    }

    proptest! {
        #[test]
        fn counts_partition_nodes(
            occ in proptest::collection::vec(any::<bool>(), 4),
            zeros in proptest::sample::subsequence(vec![0usize, 1], 0..=2),
        ) {
            let g = graph();
            let report = DetectionReport::from_zero_measurements(&g, zeros, None);
            let t = TrialMetrics::tally(&g, &occ, &report);
            prop_assert_eq!(t.num_channels(), 4);
            prop_assert_eq!(t.num_measurements(), 2);
            for p in [t.p_zd(), t.p_wzd(), t.p_d(), t.p_fa()].into_iter().flatten() {
                prop_assert!((0.0..=1.0).contains(&p));
            }
        }
    }
}
