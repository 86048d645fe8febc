//! Seeded Monte Carlo harness, sweeps and figure presets.
//!
//! Every trial draws its graph, occupancy, coefficients, sensing matrix and
//! noise from separate streams keyed by `(seed, trial index)`, so results do
//! not depend on thread count or on parameters that only touch other streams.

pub mod config;
pub mod csv;
pub mod metrics;
pub mod presets;

use std::sync::Arc;

use rayon::prelude::*;

use crate::analysis::{predict, AnalyticalPrediction};
use crate::detector::{
    calibrate_threshold, calibrate_threshold_irregular, default_zero_tolerance, detect_lrt,
    detect_noiseless, detect_threshold, lrt_equivalent_threshold, ChannelParams,
};
use crate::error::{Result, ZmdError};
use crate::graph::{build_irregular_graph, build_one_to_one_graph, build_regular_graph, SensingGraph};
use crate::operator::{build_sensing_matrix, measure, synth_time_domain_rows, verify_block_support};
use crate::rng::{stream_seed, Stream};
use crate::spectrum::{assemble_full_spectrum, forward_transform, sample_occupancy, sample_spectrum};

pub use config::{ConfigFile, DetectorMode, ExperimentConfig, GraphSpec, SweepAxis};
pub use metrics::{PointSummary, RatioEstimate, TrialMetrics, Z95};

/// Detector with its parameters resolved for one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Rule {
    ExactZero,
    Lrt(f64, ChannelParams),
    Threshold(f64),
}

/// A config with everything shared by its trials precomputed.
#[derive(Debug, Clone)]
pub struct PreparedPoint {
    pub cfg: ExperimentConfig,
    /// Threshold the analysis and the threshold rule use, if any.
    pub c_prime: Option<f64>,
    /// `None` for irregular LRT, which has no single threshold, and for
    /// calibration targets that no threshold meets.
    pub prediction: Option<AnalyticalPrediction>,
    rule: Rule,
    graph: Option<Arc<SensingGraph>>,
}

impl PreparedPoint {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let ensemble = cfg.ensemble();
        let params = || ChannelParams::new(cfg.alpha, cfg.sigma_s, cfg.sigma_n);
        let (rule, c_prime, analyzable) = match cfg.detector {
            DetectorMode::Noiseless => (Rule::ExactZero, None, true),
            DetectorMode::Threshold(c) => (Rule::Threshold(c), Some(c), true),
            DetectorMode::Lrt(c) => {
                let p = params()?;
                let c_prime = match cfg.regular_degrees() {
                    Some((_, dm)) => Some(lrt_equivalent_threshold(c, dm, &p)?),
                    None => None,
                };
                (Rule::Lrt(c, p), c_prime, c_prime.is_some())
            }
            DetectorMode::Calibrated(target) => {
                let p = params()?;
                let cal = match cfg.regular_degrees() {
                    Some((dv, dm)) => calibrate_threshold(dm, dv, &p, target),
                    None => calibrate_threshold_irregular(&ensemble.distribution(), &p, target),
                };
                match cal {
                    Ok(c) => (Rule::Threshold(c.c_prime), Some(c.c_prime), true),
                    // No threshold meets the target: flag nothing.
                    Err(ZmdError::UnreachableTarget { .. }) => (Rule::Threshold(0.0), None, false),
                    Err(e) => return Err(e),
                }
            }
        };
        let prediction = if analyzable {
            let analytic_c = match rule {
                Rule::ExactZero if cfg.sigma_n > 0.0 => {
                    Some(default_zero_tolerance(cfg.sigma_s, cfg.block_len, max_degree(cfg)))
                }
                Rule::ExactZero => None,
                _ => c_prime,
            };
            Some(predict(cfg.alpha, &ensemble, cfg.sigma_s, cfg.sigma_n, analytic_c)?)
        } else {
            None
        };
        let graph = match &cfg.graph_override {
            Some(g) => Some(g.clone()),
            None if cfg.fixed_graph => Some(Arc::new(sample_graph(cfg, 0)?)),
            None => None,
        };
        Ok(PreparedPoint {
            cfg: cfg.clone(),
            c_prime,
            prediction,
            rule,
            graph,
        })
    }

    /// Graph used by `trial`.
    pub fn graph_for(&self, trial: u64) -> Result<Arc<SensingGraph>> {
        match &self.graph {
            Some(g) => Ok(g.clone()),
            None => Ok(Arc::new(sample_graph(&self.cfg, trial)?)),
        }
    }

    /// Runs one trial.
    pub fn trial(&self, trial: u64) -> Result<TrialMetrics> {
        let cfg = &self.cfg;
        let seed = |s| stream_seed(cfg.seed, trial, s);
        let g = self.graph_for(trial)?;
        let occupancy = sample_occupancy(cfg.l, cfg.alpha, seed(Stream::Occupancy))?;
        let s = sample_spectrum(&occupancy, cfg.block_len, cfg.sigma_s, seed(Stream::Coefficients))?;
        let a = build_sensing_matrix(g.clone(), cfg.block_len, seed(Stream::Matrix))?;
        let y = measure(&a, &s, cfg.sigma_n, seed(Stream::Noise))?;
        let report = match self.rule {
            Rule::ExactZero => {
                let eps = default_zero_tolerance(cfg.sigma_s, cfg.block_len, g.max_measurement_degree());
                detect_noiseless(&y, &g, eps)?
            }
            Rule::Lrt(c, p) => detect_lrt(&y, &g, c, &p)?,
            Rule::Threshold(c) => detect_threshold(&y, &g, c)?,
        };
        Ok(TrialMetrics::tally(&g, &occupancy, &report))
    }

    /// Runs every trial on `pool`; the result is ordered by trial index.
    pub fn run(&self, pool: &rayon::ThreadPool) -> Result<Vec<TrialMetrics>> {
        pool.install(|| {
            (0..self.cfg.trials as u64)
                .into_par_iter()
                .map(|t| self.trial(t))
                .collect()
        })
    }
}

fn max_degree(cfg: &ExperimentConfig) -> usize {
    match &cfg.graph {
        GraphSpec::Regular { dm } => *dm,
        GraphSpec::Irregular(d) => d.measurement.keys().copied().max().unwrap_or(1),
        GraphSpec::OneToOne => 1,
    }
}

/// Fresh graph for `trial` from the graph stream.
pub fn sample_graph(cfg: &ExperimentConfig, trial: u64) -> Result<SensingGraph> {
    let seed = stream_seed(cfg.seed, trial, Stream::Graph);
    match &cfg.graph {
        GraphSpec::Regular { dm } => build_regular_graph(cfg.l, cfg.m, *dm, seed),
        GraphSpec::Irregular(d) => build_irregular_graph(cfg.l, cfg.m, d, seed),
        GraphSpec::OneToOne => build_one_to_one_graph(cfg.l, cfg.m, seed),
    }
}

/// Occupancy pattern of `trial`.
pub fn sample_trial_occupancy(cfg: &ExperimentConfig, trial: u64) -> Result<Vec<bool>> {
    sample_occupancy(cfg.l, cfg.alpha, stream_seed(cfg.seed, trial, Stream::Occupancy))
}

/// Runs a single trial of `cfg`.
pub fn run_trial(cfg: &ExperimentConfig, trial: u64) -> Result<TrialMetrics> {
    PreparedPoint::new(cfg)?.trial(trial)
}

/// Thread pool with `jobs` workers (0 picks the machine default).
pub fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ZmdError::InvalidParameter(format!("thread pool: {e}")))
}

/// One row of a sweep table.
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// Series label; the plain axis name for single-series sweeps.
    pub axis_name: String,
    pub axis_value: f64,
    pub point: PreparedPoint,
    pub summary: PointSummary,
}

impl SweepRow {
    pub fn cfg(&self) -> &ExperimentConfig {
        &self.point.cfg
    }

    pub fn prediction(&self) -> Option<&AnalyticalPrediction> {
        self.point.prediction.as_ref()
    }
}

/// Runs `cfg` once per value of `axis`.
pub fn run_sweep(
    cfg: &ExperimentConfig,
    axis: SweepAxis,
    values: &[f64],
    pool: &rayon::ThreadPool,
) -> Result<Vec<SweepRow>> {
    run_series(cfg, axis, axis.name(), values, pool)
}

/// As [`run_sweep`] with a custom series label.
pub fn run_series(
    cfg: &ExperimentConfig,
    axis: SweepAxis,
    label: &str,
    values: &[f64],
    pool: &rayon::ThreadPool,
) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .map(|&v| {
            let point = PreparedPoint::new(&cfg.with_axis(axis, v)?)?;
            let trials = point.run(pool)?;
            Ok(SweepRow {
                axis_name: label.to_string(),
                axis_value: v,
                summary: PointSummary::from_trials(&trials),
                point,
            })
        })
        .collect()
}

/// Runs `cfg` as a single-point table.
pub fn run_point(cfg: &ExperimentConfig, pool: &rayon::ThreadPool) -> Result<SweepRow> {
    let point = PreparedPoint::new(cfg)?;
    let trials = point.run(pool)?;
    Ok(SweepRow {
        axis_name: "alpha".into(),
        axis_value: cfg.alpha,
        summary: PointSummary::from_trials(&trials),
        point,
    })
}

/// Worst-case figures from [`validate_operator`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorValidation {
    pub trials: usize,
    pub max_imag_residue: f64,
    pub max_leakage: f64,
    /// Largest error when recovering `+Theta` from the transform of `Phi`.
    pub max_roundtrip_error: f64,
    /// Largest `|Phi r - y|_inf / |y|_inf` against the frequency-domain path.
    pub max_relative_error: f64,
}

impl OperatorValidation {
    pub fn passed(&self) -> bool {
        self.max_imag_residue < 1e-10
            && self.max_leakage < 1e-10
            && self.max_roundtrip_error < 1e-10
            && self.max_relative_error < 1e-8
    }
}

/// Builds time-domain sampling waveforms for random `(d_V, d_M)`-regular
/// operators and checks them against the frequency-domain model.
pub fn validate_operator(
    l: usize,
    m: usize,
    dm: usize,
    block_len: usize,
    alpha: f64,
    trials: usize,
    seed: u64,
) -> Result<OperatorValidation> {
    let mut out = OperatorValidation {
        trials,
        max_imag_residue: 0.0,
        max_leakage: 0.0,
        max_roundtrip_error: 0.0,
        max_relative_error: 0.0,
    };
    for t in 0..trials as u64 {
        let s = |stream| stream_seed(seed, t, stream);
        let g = Arc::new(build_regular_graph(l, m, dm, s(Stream::Graph))?);
        let a = build_sensing_matrix(g.clone(), block_len, s(Stream::Matrix))?;
        let phi = synth_time_domain_rows(&a, a.nyquist_len())?;
        out.max_imag_residue = out.max_imag_residue.max(phi.max_imag_residue);
        out.max_leakage = out.max_leakage.max(verify_block_support(&phi.rows, &g, 1e-10)?.leakage);
        for (mi, row) in phi.rows.iter().enumerate() {
            let spectrum = forward_transform(
                &row.iter().map(|&v| num_complex::Complex64::new(v, 0.0)).collect::<Vec<_>>(),
            );
            let theta = a.positive_row(mi);
            for (k, th) in theta.iter().enumerate() {
                out.max_roundtrip_error = out.max_roundtrip_error.max((spectrum[k].conj() - th).norm());
            }
        }
        let occupancy = sample_occupancy(l, alpha, s(Stream::Occupancy))?;
        let spec = sample_spectrum(&occupancy, block_len, 1.0, s(Stream::Coefficients))?;
        let y = measure(&a, &spec, 0.0, 0)?;
        let y_time = phi.apply(&assemble_full_spectrum(&spec).to_real_signal())?;
        let scale = y.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if scale > 0.0 {
            let err = y_time
                .iter()
                .zip(&y.values)
                .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
            out.max_relative_error = out.max_relative_error.max(err / scale);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool() -> rayon::ThreadPool {
        thread_pool(2).unwrap()
    }

    #[test]
    fn vacant_spectrum_detects_everything() {
        let mut cfg = ExperimentConfig::regular(100, 50, 2, 0.0);
        cfg.trials = 20;
        let s = run_point(&cfg, &pool()).unwrap().summary;
        assert_eq!(s.p_zd.value, Some(1.0));
        assert_eq!(s.p_wzd.value, Some(0.0));
        for t in 0..5 {
            assert_eq!(run_trial(&cfg, t).unwrap().p_zd(), Some(1.0));
        }
    }

    #[test]
    fn full_occupancy_leaves_pzd_undefined() {
        let mut cfg = ExperimentConfig::regular(100, 50, 2, 1.0);
        cfg.trials = 10;
        let s = run_point(&cfg, &pool()).unwrap().summary;
        assert_eq!(s.p_zd.value, None);
        assert_eq!(s.undefined_pwzd_trials, 10);
    }

    #[test]
    fn trials_are_deterministic() {
        let mut cfg = ExperimentConfig::regular(200, 100, 4, 0.2);
        cfg.sigma_n = 0.05;
        cfg.detector = DetectorMode::Threshold(0.1);
        assert_eq!(run_trial(&cfg, 7).unwrap(), run_trial(&cfg, 7).unwrap());
        assert_ne!(run_trial(&cfg, 7).unwrap(), run_trial(&cfg, 8).unwrap());
    }

    #[test]
    fn fixed_graph_reuses_trial_zero_graph() {
        let mut cfg = ExperimentConfig::regular(40, 20, 4, 0.2);
        cfg.fixed_graph = true;
        let p = PreparedPoint::new(&cfg).unwrap();
        assert_eq!(*p.graph_for(5).unwrap(), sample_graph(&cfg, 0).unwrap());
        cfg.fixed_graph = false;
        let p = PreparedPoint::new(&cfg).unwrap();
        assert_eq!(*p.graph_for(5).unwrap(), sample_graph(&cfg, 5).unwrap());
    }

    #[test]
    fn one_to_one_and_irregular_points_run() {
        let mut cfg = ExperimentConfig::regular(50, 10, 1, 0.25);
        cfg.graph = GraphSpec::OneToOne;
        cfg.trials = 50;
        let row = run_point(&cfg, &pool()).unwrap();
        assert!((row.prediction().unwrap().p_zd - 0.2).abs() < 1e-12);
        assert!(row.summary.p_zd.agrees_with(0.2, 4.0));

        let f = ConfigFile::parse(
            "L = 60\nM = 30\ngraph = \"irregular\"\nvariable_degrees = { \"1\" = 0.5, \"3\" = 0.5 }\n\
             measurement_degrees = { \"4\" = 1.0 }\ntrials = 50",
        )
        .unwrap();
        let row = run_point(&f.build().unwrap(), &pool()).unwrap();
        assert!(row.prediction().is_some());
        assert_eq!(row.summary.p_wzd.value, Some(0.0));
    }

    #[test]
    fn unreachable_calibration_flags_nothing() {
        let mut cfg = ExperimentConfig::regular(100, 50, 2, 0.5);
        cfg.sigma_n = 0.3;
        cfg.detector = DetectorMode::Calibrated(1e-4);
        cfg.trials = 5;
        let row = run_point(&cfg, &pool()).unwrap();
        assert!(row.point.c_prime.is_none());
        assert!(row.prediction().is_none());
        assert_eq!(row.summary.undefined_pwzd_trials, 5);
    }

    #[test]
    fn lrt_point_has_equivalent_threshold() {
        let mut cfg = ExperimentConfig::regular(100, 50, 2, 0.25);
        cfg.sigma_n = 0.05;
        cfg.detector = DetectorMode::Lrt(1.0);
        cfg.trials = 5;
        let p = PreparedPoint::new(&cfg).unwrap();
        assert!(p.c_prime.unwrap() > 0.0);
        assert_eq!(p.prediction.as_ref().unwrap().c_prime, p.c_prime);
    }

    #[test]
    fn operator_validation_small() {
        let v = validate_operator(8, 4, 4, 2, 0.5, 3, 1).unwrap();
        assert!(v.passed(), "{v:?}");
    }
}
