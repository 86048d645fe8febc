//! Experiment configuration and its plain-text (TOML) file form.
//!
//! Recognized keys, all optional in a file (CLI flags override them):
//!
//! ```toml
//! L = 1000            # sub-channels (variable nodes)
//! M = 500             # measurements
//! B = 1               # coefficients per sub-channel
//! alpha = 0.25        # occupancy probability
//! sigma_s = 1.0       # per-component signal standard deviation
//! sigma_n = 0.0       # noise standard deviation (or give snr_db instead)
//! snr_db = 25.0       # 10 log10(sigma_s^2 / sigma_n^2)
//! graph = "regular"   # regular | irregular | one-to-one
//! d_M = 2             # measurement degree of a regular graph
//! variable_degrees = { "1" = 0.5, "2" = 0.5 }     # irregular only
//! measurement_degrees = { "3" = 1.0 }             # irregular only
//! detector = "noiseless"  # noiseless | lrt:<c> | threshold:<c'> | calibrated:<target P_WZD>
//! trials = 1000
//! seed = 1
//! fixed_graph = false     # reuse one graph for every trial
//!
//! [sweep]
//! axis = "alpha"          # alpha | d_M | M | B | c_prime | snr_db
//! values = [0.05, 0.1, 0.2]
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Deserialize;

use crate::analysis::Ensemble;
use crate::detector::sigma_n_for_snr_db;
use crate::error::{check_probability, Result, ZmdError};
use crate::graph::{DegreeDistribution, SensingGraph};

pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_SEED: u64 = 1;

/// Sensing-graph ensemble drawn afresh for each trial.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    /// Every measurement node has degree `dm`; `d_V = M dm / L`.
    Regular { dm: usize },
    Irregular(DegreeDistribution),
    OneToOne,
}

/// How measurements are judged zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorMode {
    Noiseless,
    Lrt(f64),
    Threshold(f64),
    /// Threshold calibrated analytically to a target `P_WZD`.
    Calibrated(f64),
}

impl FromStr for DetectorMode {
    type Err = ZmdError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "noiseless" {
            return Ok(DetectorMode::Noiseless);
        }
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| ZmdError::Parse(format!("unknown detector `{s}`")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| ZmdError::Parse(format!("bad detector parameter `{value}`")))?;
        match kind.trim() {
            "lrt" => Ok(DetectorMode::Lrt(v)),
            "threshold" => Ok(DetectorMode::Threshold(v)),
            "calibrated" => Ok(DetectorMode::Calibrated(v)),
            other => Err(ZmdError::Parse(format!("unknown detector `{other}`"))),
        }
    }
}

impl fmt::Display for DetectorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DetectorMode::Noiseless => write!(f, "noiseless"),
            DetectorMode::Lrt(c) => write!(f, "lrt:{c}"),
            DetectorMode::Threshold(c) => write!(f, "threshold:{c}"),
            DetectorMode::Calibrated(t) => write!(f, "calibrated:{t}"),
        }
    }
}

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Alpha,
    MeasurementDegree,
    Measurements,
    BlockLen,
    Threshold,
    SnrDb,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Alpha => "alpha",
            SweepAxis::MeasurementDegree => "d_M",
            SweepAxis::Measurements => "M",
            SweepAxis::BlockLen => "B",
            SweepAxis::Threshold => "c_prime",
            SweepAxis::SnrDb => "snr_db",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = ZmdError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "alpha" => SweepAxis::Alpha,
            "d_M" | "dm" => SweepAxis::MeasurementDegree,
            "M" => SweepAxis::Measurements,
            "B" => SweepAxis::BlockLen,
            "c_prime" | "threshold" => SweepAxis::Threshold,
            "snr_db" | "snr" => SweepAxis::SnrDb,
            other => return Err(ZmdError::Parse(format!("unknown sweep axis `{other}`"))),
        })
    }
}

/// One fully specified Monte Carlo operating point.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub l: usize,
    pub m: usize,
    pub block_len: usize,
    pub alpha: f64,
    pub sigma_s: f64,
    pub sigma_n: f64,
    pub detector: DetectorMode,
    pub trials: usize,
    pub seed: u64,
    /// Reuse the trial-0 graph for every trial.
    pub fixed_graph: bool,
    /// Use this graph for every trial instead of sampling one.
    pub graph_override: Option<Arc<SensingGraph>>,
}

impl ExperimentConfig {
    /// Noiseless regular-graph defaults; adjust fields as needed.
    pub fn regular(l: usize, m: usize, dm: usize, alpha: f64) -> Self {
        ExperimentConfig {
            graph: GraphSpec::Regular { dm },
            l,
            m,
            block_len: 1,
            alpha,
            sigma_s: 1.0,
            sigma_n: 0.0,
            detector: DetectorMode::Noiseless,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            fixed_graph: false,
            graph_override: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("alpha", self.alpha)?;
        if self.l == 0 || self.m == 0 || self.block_len == 0 {
            return Err(ZmdError::InvalidParameter("L, M and B must be >= 1".into()));
        }
        if self.trials == 0 {
            return Err(ZmdError::InvalidParameter("trials must be >= 1".into()));
        }
        if !(self.sigma_s > 0.0) || !(self.sigma_n >= 0.0) {
            return Err(ZmdError::InvalidParameter(format!(
                "need sigma_s > 0 and sigma_n >= 0 (got {}, {})",
                self.sigma_s, self.sigma_n
            )));
        }
        match &self.graph {
            GraphSpec::Regular { dm } => {
                if *dm == 0 || !(self.m * dm).is_multiple_of(self.l) {
                    return Err(ZmdError::NonIntegralDegree {
                        product: self.m * dm,
                        l: self.l,
                    });
                }
            }
            GraphSpec::Irregular(dist) => {
                if !dist.balances(self.l, self.m) {
                    return Err(ZmdError::UnrealizableDistribution(format!(
                        "mean degrees do not balance at L = {}, M = {}",
                        self.l, self.m
                    )));
                }
            }
            GraphSpec::OneToOne => {
                if self.m > self.l {
                    return Err(ZmdError::InfeasibleGraph("one-to-one needs M <= L".into()));
                }
            }
        }
        match self.detector {
            DetectorMode::Lrt(c) if !(c > 0.0) => {
                Err(ZmdError::InvalidParameter(format!("LRT threshold {c}")))
            }
            DetectorMode::Threshold(c) if !(c >= 0.0) => {
                Err(ZmdError::InvalidParameter(format!("threshold {c}")))
            }
            DetectorMode::Calibrated(t) => check_probability("target P_WZD", t),
            _ => Ok(()),
        }?;
        if let Some(g) = &self.graph_override {
            if g.num_variables() != self.l || g.num_measurements() != self.m {
                return Err(ZmdError::DimensionMismatch(format!(
                    "supplied graph is {}x{}, config is L={} M={}",
                    g.num_variables(),
                    g.num_measurements(),
                    self.l,
                    self.m
                )));
            }
        }
        Ok(())
    }

    /// `(d_V, d_M)` for regular ensembles.
    pub fn regular_degrees(&self) -> Option<(usize, usize)> {
        match self.graph {
            GraphSpec::Regular { dm } => Some((self.m * dm / self.l, dm)),
            _ => None,
        }
    }

    /// The ensemble the analytic formulas should describe.
    pub fn ensemble(&self) -> Ensemble {
        match &self.graph {
            GraphSpec::Regular { dm } => Ensemble::Regular {
                dv: self.m * dm / self.l,
                dm: *dm,
            },
            GraphSpec::Irregular(d) => Ensemble::Irregular(d.clone()),
            GraphSpec::OneToOne => {
                let matched = self.m as f64 / self.l as f64;
                let variable: BTreeMap<usize, f64> = [(0, 1.0 - matched), (1, matched)]
                    .into_iter()
                    .filter(|&(_, f)| f > 0.0)
                    .collect();
                Ensemble::Irregular(DegreeDistribution {
                    variable,
                    measurement: BTreeMap::from([(1, 1.0)]),
                })
            }
        }
    }

    /// Copy with the sweep parameter set to `value`.
    pub fn with_axis(&self, axis: SweepAxis, value: f64) -> Result<Self> {
        let mut c = self.clone();
        let as_count = |v: f64| -> Result<usize> {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(ZmdError::InvalidParameter(format!(
                    "{} must be a non-negative integer (got {v})",
                    axis.name()
                )))
            }
        };
        match axis {
            SweepAxis::Alpha => c.alpha = value,
            SweepAxis::MeasurementDegree => match c.graph {
                GraphSpec::Regular { .. } => c.graph = GraphSpec::Regular { dm: as_count(value)? },
                _ => {
                    return Err(ZmdError::InvalidParameter(
                        "d_M sweeps need a regular graph".into(),
                    ))
                }
            },
            SweepAxis::Measurements => c.m = as_count(value)?,
            SweepAxis::BlockLen => c.block_len = as_count(value)?,
            SweepAxis::Threshold => c.detector = DetectorMode::Threshold(value),
            SweepAxis::SnrDb => c.sigma_n = sigma_n_for_snr_db(c.sigma_s, value),
        }
        c.validate()?;
        Ok(c)
    }
}

/// Sweep section of a config file.
#[derive(Debug, Clone, Deserialize, Default, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: Option<String>,
    pub values: Option<Vec<f64>>,
}

/// Raw config file; every key optional.
#[derive(Debug, Clone, Deserialize, Default, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "L")]
    pub l: Option<usize>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    #[serde(rename = "B")]
    pub block_len: Option<usize>,
    pub alpha: Option<f64>,
    pub sigma_s: Option<f64>,
    pub sigma_n: Option<f64>,
    pub snr_db: Option<f64>,
    pub graph: Option<String>,
    #[serde(rename = "d_M")]
    pub dm: Option<usize>,
    pub variable_degrees: Option<BTreeMap<String, f64>>,
    pub measurement_degrees: Option<BTreeMap<String, f64>>,
    pub detector: Option<String>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub fixed_graph: Option<bool>,
    pub sweep: Option<SweepSection>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| ZmdError::Parse(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Fills every key set in `other` over `self`.
    pub fn overlay(mut self, other: ConfigFile) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            l, m, block_len, alpha, sigma_s, sigma_n, snr_db, graph, dm, variable_degrees,
            measurement_degrees, detector, trials, seed, fixed_graph
        );
        if let Some(s) = other.sweep {
            let mut base = self.sweep.take().unwrap_or_default();
            if s.axis.is_some() {
                base.axis = s.axis;
            }
            if s.values.is_some() {
                base.values = s.values;
            }
            self.sweep = Some(base);
        }
        if other.snr_db.is_some() && other.sigma_n.is_none() {
            self.sigma_n = None;
        }
        if other.sigma_n.is_some() && other.snr_db.is_none() {
            self.snr_db = None;
        }
        self
    }

    /// Resolves defaults and validates.
    pub fn build(&self) -> Result<ExperimentConfig> {
        let parse_dist = |m: &BTreeMap<String, f64>| -> Result<BTreeMap<usize, f64>> {
            m.iter()
                .map(|(k, v)| {
                    k.trim()
                        .parse::<usize>()
                        .map(|d| (d, *v))
                        .map_err(|_| ZmdError::Parse(format!("bad degree key `{k}`")))
                })
                .collect()
        };
        let graph = match self.graph.as_deref().unwrap_or("regular") {
            "regular" => GraphSpec::Regular {
                dm: self.dm.unwrap_or(2),
            },
            "one-to-one" | "1to1" => GraphSpec::OneToOne,
            "irregular" => {
                let v = self
                    .variable_degrees
                    .as_ref()
                    .ok_or_else(|| ZmdError::Parse("irregular graph needs variable_degrees".into()))?;
                let m = self
                    .measurement_degrees
                    .as_ref()
                    .ok_or_else(|| ZmdError::Parse("irregular graph needs measurement_degrees".into()))?;
                GraphSpec::Irregular(DegreeDistribution::new(parse_dist(v)?, parse_dist(m)?)?)
            }
            other => return Err(ZmdError::Parse(format!("unknown graph kind `{other}`"))),
        };
        let sigma_s = self.sigma_s.unwrap_or(1.0);
        let sigma_n = match (self.sigma_n, self.snr_db) {
            (Some(_), Some(_)) => {
                return Err(ZmdError::Parse("give sigma_n or snr_db, not both".into()))
            }
            (Some(n), None) => n,
            (None, Some(snr)) => sigma_n_for_snr_db(sigma_s, snr),
            (None, None) => 0.0,
        };
        let cfg = ExperimentConfig {
            graph,
            l: self.l.unwrap_or(1000),
            m: self.m.unwrap_or(500),
            block_len: self.block_len.unwrap_or(1),
            alpha: self.alpha.unwrap_or(0.25),
            sigma_s,
            sigma_n,
            detector: match &self.detector {
                Some(d) => d.parse()?,
                None => DetectorMode::Noiseless,
            },
            trials: self.trials.unwrap_or(DEFAULT_TRIALS),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            fixed_graph: self.fixed_graph.unwrap_or(false),
            graph_override: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sweep axis and values, if configured.
    pub fn sweep_axis(&self) -> Result<Option<(SweepAxis, Vec<f64>)>> {
        match &self.sweep {
            Some(SweepSection {
                axis: Some(a),
                values: Some(v),
            }) => Ok(Some((a.parse()?, v.clone()))),
            Some(SweepSection { axis: None, values: None }) | None => Ok(None),
            Some(_) => Err(ZmdError::Parse("sweep needs both axis and values".into())),
        }
    }
}
