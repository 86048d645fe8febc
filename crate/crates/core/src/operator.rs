//! Block-sparse sensing matrix and the sampling waveforms that realize it.
//!
//! Row `m` of the positive-frequency sensing matrix is non-zero only on the
//! blocks `V(m)` of the sensing graph. Each such block is an i.i.d. complex
//! Gaussian vector scaled to unit norm, so a single occupied neighbor with
//! `N(0, sigma_s^2)` coefficients contributes `N(0, 4 sigma_s^2)` to `y_m`.
//!
//! The time-domain sampling waveforms are synthesized directly in frequency:
//! the spectrum of `Phi_m` is `conj(Theta_m)` on the positive half and its
//! mirror on the negative half, then transformed back. This stands in for the
//! analog chain (noise source, ideal low-pass, carrier modulation, summation
//! over `V(m)`); an `M`-multiplier variant of that chain yields the same rows.

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rand_distr::{Distribution, Normal};

use crate::error::{Result, ZmdError};
use crate::graph::SensingGraph;
use crate::rng::rng_from_seed;
use crate::spectrum::{forward_transform, inverse_transform, GaussianCoefficients, CoefficientDistribution, SpectrumRealization};

/// Positive-frequency sensing matrix with block support equal to a graph.
#[derive(Debug, Clone)]
pub struct BlockSensingMatrix {
    graph: Arc<SensingGraph>,
    block_len: usize,
    /// Start of each measurement node's edges in `blocks` (in units of edges).
    edge_offsets: Vec<usize>,
    /// One length-`B` block per edge, measurement-major, in adjacency order.
    blocks: Vec<Complex64>,
}

impl BlockSensingMatrix {
    pub fn graph(&self) -> &SensingGraph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<SensingGraph> {
        Arc::clone(&self.graph)
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Nyquist-rate length `N = 2 L B`.
    pub fn nyquist_len(&self) -> usize {
        2 * self.graph.num_variables() * self.block_len
    }

    /// Block `(m, l)`, or `None` when `(m, l)` is not an edge.
    pub fn block(&self, m: usize, l: usize) -> Option<&[Complex64]> {
        let pos = self.graph.variables_of(m).binary_search(&l).ok()?;
        let e = self.edge_offsets[m] + pos;
        Some(&self.blocks[e * self.block_len..(e + 1) * self.block_len])
    }

    /// Dense positive-frequency row `+Theta_m` of length `L B`.
    pub fn positive_row(&self, m: usize) -> Vec<Complex64> {
        let b = self.block_len;
        let mut row = vec![Complex64::ZERO; self.graph.num_variables() * b];
        for &l in self.graph.variables_of(m) {
            let blk = self.block(m, l).expect("adjacent block");
            row[l * b..(l + 1) * b].copy_from_slice(blk);
        }
        row
    }
}

/// Draws one unit-norm complex Gaussian block per graph edge.
pub fn build_sensing_matrix(
    graph: impl Into<Arc<SensingGraph>>,
    block_len: usize,
    seed: u64,
) -> Result<BlockSensingMatrix> {
    if block_len == 0 {
        return Err(ZmdError::InvalidParameter("block length must be >= 1".into()));
    }
    let graph = graph.into();
    let mut rng = rng_from_seed(seed);
    let gauss = GaussianCoefficients { sigma: 1.0 };
    let mut edge_offsets = Vec::with_capacity(graph.num_measurements());
    let mut blocks = Vec::with_capacity(graph.num_edges() * block_len);
    for m in 0..graph.num_measurements() {
        edge_offsets.push(blocks.len() / block_len);
        for _ in graph.variables_of(m) {
            let start = blocks.len();
            blocks.extend((0..block_len).map(|_| gauss.sample(&mut rng)));
            let norm = blocks[start..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            for c in &mut blocks[start..] {
                *c /= norm;
            }
        }
    }
    Ok(BlockSensingMatrix {
        graph,
        block_len,
        edge_offsets,
        blocks,
    })
}

/// Real measurements plus the noise parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementVector {
    pub values: Vec<f64>,
    pub sigma_n: f64,
    pub seed: u64,
}

impl MeasurementVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `y_m = 2 Re(sum_{l in V(m)} Theta_m^(l) . u^(l)) + n_m`, `n_m ~ N(0, sigma_n^2)`.
pub fn measure(
    a: &BlockSensingMatrix,
    s: &SpectrumRealization,
    sigma_n: f64,
    seed: u64,
) -> Result<MeasurementVector> {
    if a.block_len != s.block_len() || a.graph.num_variables() != s.num_blocks() {
        return Err(ZmdError::DimensionMismatch(format!(
            "operator is {} blocks x {} but spectrum is {} blocks x {}",
            a.graph.num_variables(),
            a.block_len,
            s.num_blocks(),
            s.block_len()
        )));
    }
    if !(sigma_n >= 0.0) || !sigma_n.is_finite() {
        return Err(ZmdError::InvalidParameter(format!("sigma_n must be >= 0 (got {sigma_n})")));
    }
    let mut values: Vec<f64> = (0..a.graph.num_measurements())
        .map(|m| {
            let acc: Complex64 = a
                .graph
                .variables_of(m)
                .iter()
                .filter(|&&l| s.is_occupied(l))
                .map(|&l| {
                    let theta = a.block(m, l).expect("adjacent block");
                    theta.iter().zip(s.block(l)).map(|(t, u)| t * u).sum::<Complex64>()
                })
                .sum();
            2.0 * acc.re
        })
        .collect();
    if sigma_n > 0.0 {
        let mut rng = rng_from_seed(seed);
        let noise = Normal::new(0.0, sigma_n).expect("valid sigma");
        for y in &mut values {
            *y += noise.sample(&mut rng);
        }
    }
    Ok(MeasurementVector {
        values,
        sigma_n,
        seed,
    })
}

/// Time-domain measurement matrix `Phi` (`M x N`, row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeDomainOperator {
    pub rows: Vec<Vec<f64>>,
    /// Largest imaginary part discarded when taking the rows real.
    pub max_imag_residue: f64,
}

impl TimeDomainOperator {
    /// `Phi r`.
    pub fn apply(&self, signal: &[f64]) -> Result<Vec<f64>> {
        self.rows
            .iter()
            .map(|row| {
                if row.len() != signal.len() {
                    return Err(ZmdError::DimensionMismatch(format!(
                        "row length {} vs signal length {}",
                        row.len(),
                        signal.len()
                    )));
                }
                Ok(row.iter().zip(signal).map(|(a, b)| a * b).sum())
            })
            .collect()
    }
}

/// Real sampling waveforms whose transform is `conj(+Theta_m)` on the
/// positive half (mirrored on the negative half).
pub fn synth_time_domain_rows(a: &BlockSensingMatrix, n: usize) -> Result<TimeDomainOperator> {
    if n != a.nyquist_len() {
        return Err(ZmdError::DimensionMismatch(format!(
            "N = {n} but 2 L B = {}",
            a.nyquist_len()
        )));
    }
    let mut max_imag_residue = 0.0f64;
    let rows = (0..a.graph.num_measurements())
        .map(|m| {
            let theta = a.positive_row(m);
            let mut spectrum = vec![Complex64::ZERO; n];
            for (k, t) in theta.iter().enumerate() {
                spectrum[k] = t.conj();
                spectrum[n - 1 - k] = *t;
            }
            let row = inverse_transform(&spectrum);
            max_imag_residue = row.iter().map(|c| c.im.abs()).fold(max_imag_residue, f64::max);
            row.into_iter().map(|c| c.re).collect()
        })
        .collect();
    Ok(TimeDomainOperator {
        rows,
        max_imag_residue,
    })
}

/// Outcome of [`verify_block_support`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportCheck {
    pub passed: bool,
    /// Worst row's spectral energy outside its blocks, as a fraction of the
    /// row's total spectral energy.
    pub leakage: f64,
}

/// Checks that every row of `phi` is spectrally confined to the blocks of its
/// measurement node (and their mirrors).
pub fn verify_block_support(phi: &[Vec<f64>], g: &SensingGraph, tol: f64) -> Result<SupportCheck> {
    if phi.len() != g.num_measurements() {
        return Err(ZmdError::DimensionMismatch(format!(
            "{} rows for {} measurements",
            phi.len(),
            g.num_measurements()
        )));
    }
    let l = g.num_variables();
    let mut leakage = 0.0f64;
    for (m, row) in phi.iter().enumerate() {
        let n = row.len();
        if l == 0 || n % (2 * l) != 0 {
            return Err(ZmdError::DimensionMismatch(format!(
                "row length {n} is not a multiple of 2 L = {}",
                2 * l
            )));
        }
        let b = n / (2 * l);
        let signal: Vec<Complex64> = row.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let spectrum = forward_transform(&signal);
        let (mut inside, mut outside) = (0.0, 0.0);
        for (k, c) in spectrum.iter().enumerate() {
            let pos = if k < n / 2 { k } else { n - 1 - k };
            if g.has_edge(m, pos / b) {
                inside += c.norm_sqr();
            } else {
                outside += c.norm_sqr();
            }
        }
        let total = inside + outside;
        if total > 0.0 {
            leakage = leakage.max(outside / total);
        }
    }
    Ok(SupportCheck {
        passed: leakage < tol,
        leakage,
    })
}

/// Writes `Phi` (reals) and `+Theta` (complex as `re,im` pairs) as row-major CSV.
pub fn write_operator_csv(
    a: &BlockSensingMatrix,
    phi: &TimeDomainOperator,
    phi_path: &Path,
    theta_path: &Path,
) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(phi_path)?);
    for row in &phi.rows {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()?;
    let mut out = std::io::BufWriter::new(std::fs::File::create(theta_path)?);
    for m in 0..a.graph.num_measurements() {
        let line: Vec<String> = a
            .positive_row(m)
            .iter()
            .map(|c| format!("{},{}", c.re, c.im))
            .collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()?;
    Ok(())
}
