//! Bipartite sensing graphs.
//!
//! Variable nodes are sub-channels (`0..L`), measurement nodes are the
//! measurements (`0..M`). The adjacency of a measurement node is the block
//! support of the corresponding row of the sensing matrix.
//!
//! Random graphs come from a configuration model: variable-node stubs are
//! shuffled onto measurement-node stubs, and any parallel edge is removed by
//! switching its endpoint with a random stub elsewhere in the graph. Node
//! degrees are therefore exact.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Result, ZmdError};
use crate::rng::{rng_from_seed, ZmdRng};

/// Restarts of the stub matching before giving up.
pub const RETRY_BUDGET: usize = 1000;

/// Tolerance on the sum of each degree distribution.
const DIST_SUM_TOL: f64 = 1e-9;
/// Relative tolerance on the edge-count balance of a distribution.
const EDGE_BALANCE_TOL: f64 = 1e-6;

/// Bipartite graph between `L` variable nodes and `M` measurement nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensingGraph {
    num_variables: usize,
    /// Sorted neighbors of each measurement node.
    measurement_adj: Vec<Vec<usize>>,
    /// Sorted neighbors of each variable node.
    variable_adj: Vec<Vec<usize>>,
}

impl SensingGraph {
    /// Builds a graph from the neighbor lists of the measurement nodes.
    ///
    /// Fails on out-of-range indices and on parallel edges.
    pub fn from_measurement_adjacency(
        num_variables: usize,
        mut measurement_adj: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let mut variable_adj = vec![Vec::new(); num_variables];
        for (m, nbrs) in measurement_adj.iter_mut().enumerate() {
            nbrs.sort_unstable();
            for w in nbrs.windows(2) {
                if w[0] == w[1] {
                    return Err(ZmdError::InfeasibleGraph(format!(
                        "parallel edge between measurement {m} and variable {}",
                        w[0]
                    )));
                }
            }
            for &v in nbrs.iter() {
                if v >= num_variables {
                    return Err(ZmdError::InfeasibleGraph(format!(
                        "measurement {m} references variable {v} >= L = {num_variables}"
                    )));
                }
                variable_adj[v].push(m);
            }
        }
        let g = SensingGraph {
            num_variables,
            measurement_adj,
            variable_adj,
        };
        g.check_invariants();
        Ok(g)
    }

    fn check_invariants(&self) {
        let forward: usize = self.measurement_adj.iter().map(Vec::len).sum();
        let backward: usize = self.variable_adj.iter().map(Vec::len).sum();
        assert_eq!(forward, backward, "edge-count mismatch");
        for (v, ms) in self.variable_adj.iter().enumerate() {
            for &m in ms {
                assert!(m < self.num_measurements());
                assert!(self.measurement_adj[m].binary_search(&v).is_ok());
            }
        }
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn num_measurements(&self) -> usize {
        self.measurement_adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.measurement_adj.iter().map(Vec::len).sum()
    }

    /// Variable nodes attached to measurement `m`, ascending.
    pub fn variables_of(&self, m: usize) -> &[usize] {
        &self.measurement_adj[m]
    }

    /// Measurement nodes attached to variable `v`, ascending.
    pub fn measurements_of(&self, v: usize) -> &[usize] {
        &self.variable_adj[v]
    }

    pub fn measurement_degree(&self, m: usize) -> usize {
        self.measurement_adj[m].len()
    }

    pub fn variable_degree(&self, v: usize) -> usize {
        self.variable_adj[v].len()
    }

    pub fn max_measurement_degree(&self) -> usize {
        self.measurement_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, m: usize, v: usize) -> bool {
        self.measurement_adj
            .get(m)
            .is_some_and(|n| n.binary_search(&v).is_ok())
    }

    /// All edges as `(measurement, variable)` pairs, measurement-major.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.measurement_adj
            .iter()
            .enumerate()
            .flat_map(|(m, n)| n.iter().map(move |&v| (m, v)))
    }

    /// `(d_V, d_M)` when every node on each side has the same degree.
    pub fn regular_degrees(&self) -> Option<(usize, usize)> {
        let dv = self.variable_adj.first()?.len();
        let dm = self.measurement_adj.first()?.len();
        let regular = self.variable_adj.iter().all(|n| n.len() == dv)
            && self.measurement_adj.iter().all(|n| n.len() == dm);
        regular.then_some((dv, dm))
    }

    /// Plain-text adjacency: a header `L M`, then one `m: v1 v2 ...` line per
    /// measurement node.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.num_variables, self.num_measurements());
        for (m, nbrs) in self.measurement_adj.iter().enumerate() {
            let _ = write!(s, "{m}:");
            for v in nbrs {
                let _ = write!(s, " {v}");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| ZmdError::Parse("empty graph file".into()))?;
        let mut hdr = header.split_whitespace().map(str::parse::<usize>);
        let (l, m) = match (hdr.next(), hdr.next(), hdr.next()) {
            (Some(Ok(l)), Some(Ok(m)), None) => (l, m),
            _ => return Err(ZmdError::Parse(format!("bad header `{header}`"))),
        };
        let mut adj: Vec<Option<Vec<usize>>> = vec![None; m];
        for line in lines {
            let (idx, rest) = line
                .split_once(':')
                .ok_or_else(|| ZmdError::Parse(format!("missing `:` in `{line}`")))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| ZmdError::Parse(format!("bad measurement index in `{line}`")))?;
            let slot = adj
                .get_mut(idx)
                .ok_or_else(|| ZmdError::Parse(format!("measurement {idx} >= M = {m}")))?;
            if slot.is_some() {
                return Err(ZmdError::Parse(format!("measurement {idx} listed twice")));
            }
            let nbrs = rest
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| ZmdError::Parse(format!("bad variable index `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            *slot = Some(nbrs);
        }
        let adj = adj
            .into_iter()
            .enumerate()
            .map(|(i, a)| a.ok_or_else(|| ZmdError::Parse(format!("measurement {i} missing"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_measurement_adjacency(l, adj)
    }
}

/// Node-perspective degree distributions: the fraction of variable
/// (measurement) nodes having each degree.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    pub variable: BTreeMap<usize, f64>,
    pub measurement: BTreeMap<usize, f64>,
}

impl DegreeDistribution {
    pub fn new(variable: BTreeMap<usize, f64>, measurement: BTreeMap<usize, f64>) -> Result<Self> {
        for (side, map) in [("variable", &variable), ("measurement", &measurement)] {
            if map.values().any(|&f| !(f >= 0.0) || !f.is_finite()) {
                return Err(ZmdError::UnrealizableDistribution(format!(
                    "{side} fractions must be finite and non-negative"
                )));
            }
            let total: f64 = map.values().sum();
            if (total - 1.0).abs() > DIST_SUM_TOL {
                return Err(ZmdError::UnrealizableDistribution(format!(
                    "{side} fractions sum to {total}, not 1"
                )));
            }
        }
        Ok(DegreeDistribution {
            variable,
            measurement,
        })
    }

    /// Point masses at `(d_V, d_M)`.
    pub fn regular(dv: usize, dm: usize) -> Self {
        DegreeDistribution {
            variable: BTreeMap::from([(dv, 1.0)]),
            measurement: BTreeMap::from([(dm, 1.0)]),
        }
    }

    pub fn mean_variable_degree(&self) -> f64 {
        self.variable.iter().map(|(&d, &f)| d as f64 * f).sum()
    }

    pub fn mean_measurement_degree(&self) -> f64 {
        self.measurement.iter().map(|(&d, &f)| d as f64 * f).sum()
    }

    /// Whether the mean degrees balance the edge count for `(L, M)`.
    pub fn balances(&self, l: usize, m: usize) -> bool {
        let lhs = self.mean_variable_degree() * l as f64;
        let rhs = self.mean_measurement_degree() * m as f64;
        (lhs - rhs).abs() <= EDGE_BALANCE_TOL * lhs.abs().max(rhs.abs()).max(1.0)
    }

    /// `(d_V, d_M)` when both sides are point masses.
    pub fn as_regular(&self) -> Option<(usize, usize)> {
        let point = |m: &BTreeMap<usize, f64>| {
            let mut nz = m.iter().filter(|(_, &f)| f > 0.0);
            match (nz.next(), nz.next()) {
                (Some((&d, _)), None) => Some(d),
                _ => None,
            }
        };
        Some((point(&self.variable)?, point(&self.measurement)?))
    }
}

/// Splits `total` nodes among degrees in proportion to `fractions` using
/// largest-remainder rounding (ties broken by smaller degree).
pub fn largest_remainder_counts(fractions: &BTreeMap<usize, f64>, total: usize) -> Vec<(usize, usize)> {
    let mut rows: Vec<(usize, usize, f64)> = fractions
        .iter()
        .map(|(&d, &f)| {
            let exact = f * total as f64;
            let floor = exact.floor();
            (d, floor as usize, exact - floor)
        })
        .collect();
    let assigned: usize = rows.iter().map(|r| r.1).sum();
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| {
        rows[b]
            .2
            .partial_cmp(&rows[a].2)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(rows[a].0.cmp(&rows[b].0))
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        rows[i].1 += 1;
    }
    rows.into_iter().map(|(d, n, _)| (d, n)).collect()
}

/// Random regular graph: every measurement node has degree `dm`, every
/// variable node degree `M*dm/L`.
pub fn build_regular_graph(l: usize, m: usize, dm: usize, seed: u64) -> Result<SensingGraph> {
    if l == 0 || m == 0 || dm == 0 {
        return Err(ZmdError::InvalidParameter(format!(
            "regular graph needs L, M, d_M >= 1 (got {l}, {m}, {dm})"
        )));
    }
    if !(m * dm).is_multiple_of(l) {
        return Err(ZmdError::NonIntegralDegree { product: m * dm, l });
    }
    let dv = m * dm / l;
    if dm > l || dv > m {
        return Err(ZmdError::InfeasibleGraph(format!(
            "degrees (d_V={dv}, d_M={dm}) exceed node counts (L={l}, M={m})"
        )));
    }
    let mut rng = rng_from_seed(seed);
    match_stubs(&vec![dv; l], &vec![dm; m], &mut rng)
}

/// Random irregular graph whose node-degree histograms are the
/// largest-remainder roundings of `dist` at `(L, M)`.
pub fn build_irregular_graph(
    l: usize,
    m: usize,
    dist: &DegreeDistribution,
    seed: u64,
) -> Result<SensingGraph> {
    if l == 0 || m == 0 {
        return Err(ZmdError::InvalidParameter("L and M must be >= 1".into()));
    }
    let var_counts = largest_remainder_counts(&dist.variable, l);
    let meas_counts = largest_remainder_counts(&dist.measurement, m);
    let var_stubs: usize = var_counts.iter().map(|&(d, n)| d * n).sum();
    let meas_stubs: usize = meas_counts.iter().map(|&(d, n)| d * n).sum();
    if var_stubs != meas_stubs {
        return Err(ZmdError::UnrealizableDistribution(format!(
            "rounded stub totals differ: {var_stubs} variable vs {meas_stubs} measurement"
        )));
    }
    let expand = |counts: &[(usize, usize)]| -> Vec<usize> {
        counts
            .iter()
            .flat_map(|&(d, n)| std::iter::repeat_n(d, n))
            .collect()
    };
    let mut var_deg = expand(&var_counts);
    let mut meas_deg = expand(&meas_counts);
    if var_deg.iter().any(|&d| d > m) || meas_deg.iter().any(|&d| d > l) {
        return Err(ZmdError::InfeasibleGraph(
            "a node degree exceeds the size of the opposite side".into(),
        ));
    }
    let mut rng = rng_from_seed(seed);
    var_deg.shuffle(&mut rng);
    meas_deg.shuffle(&mut rng);
    match_stubs(&var_deg, &meas_deg, &mut rng)
}

/// Random matching of `M` measurement nodes onto distinct variable nodes.
pub fn build_one_to_one_graph(l: usize, m: usize, seed: u64) -> Result<SensingGraph> {
    if m > l {
        return Err(ZmdError::InfeasibleGraph(format!(
            "one-to-one graph needs M <= L (got M={m}, L={l})"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let chosen = rand::seq::index::sample(&mut rng, l, m);
    let adj = chosen.into_iter().map(|v| vec![v]).collect();
    SensingGraph::from_measurement_adjacency(l, adj)
}

/// Exact empirical node-perspective degree fractions.
pub fn degree_distribution_of(g: &SensingGraph) -> DegreeDistribution {
    fn hist(degrees: impl Iterator<Item = usize>, n: usize) -> BTreeMap<usize, f64> {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for d in degrees {
            *counts.entry(d).or_default() += 1;
        }
        counts
            .into_iter()
            .map(|(d, c)| (d, c as f64 / n as f64))
            .collect()
    }
    let l = g.num_variables();
    let m = g.num_measurements();
    DegreeDistribution {
        variable: hist((0..l).map(|v| g.variable_degree(v)), l),
        measurement: hist((0..m).map(|i| g.measurement_degree(i)), m),
    }
}

/// Configuration-model matching with parallel-edge repair by stub switching.
fn match_stubs(var_deg: &[usize], meas_deg: &[usize], rng: &mut ZmdRng) -> Result<SensingGraph> {
    let l = var_deg.len();
    let mut stubs: Vec<usize> = var_deg
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    let edges = stubs.len();
    debug_assert_eq!(edges, meas_deg.iter().sum::<usize>());

    // owner[k] is the measurement node of stub k; ranges[m] its stub span.
    let mut owner = Vec::with_capacity(edges);
    let mut ranges = Vec::with_capacity(meas_deg.len());
    for (m, &d) in meas_deg.iter().enumerate() {
        ranges.push(owner.len()..owner.len() + d);
        owner.extend(std::iter::repeat_n(m, d));
    }
    let holds = |stubs: &[usize], m: usize, v: usize, skip: usize| {
        ranges[m].clone().any(|k| k != skip && stubs[k] == v)
    };
    let max_switches = 64 * edges + 1024;

    for _ in 0..RETRY_BUDGET {
        stubs.shuffle(rng);
        let mut pending: Vec<usize> = Vec::new();
        for r in &ranges {
            for k in r.clone() {
                if stubs[r.start..k].contains(&stubs[k]) {
                    pending.push(k);
                }
            }
        }
        let mut switches = 0;
        while let Some(&k) = pending.last() {
            let m = owner[k];
            if !holds(&stubs, m, stubs[k], k) {
                pending.pop();
                continue;
            }
            if switches == max_switches {
                break;
            }
            switches += 1;
            let j = rng.random_range(0..edges);
            let other = owner[j];
            if other == m
                || holds(&stubs, m, stubs[j], k)
                || holds(&stubs, other, stubs[k], j)
            {
                continue;
            }
            stubs.swap(k, j);
            pending.pop();
        }
        if pending.is_empty() {
            let adj = ranges.iter().map(|r| stubs[r.clone()].to_vec()).collect();
            return SensingGraph::from_measurement_adjacency(l, adj);
        }
    }
    Err(ZmdError::InfeasibleGraph(format!(
        "no simple graph found after {RETRY_BUDGET} matchings"
    )))
}
