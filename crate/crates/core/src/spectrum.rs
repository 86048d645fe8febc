//! Block-sparse spectrum realizations.
//!
//! The positive-frequency half of the spectrum is split into `L` blocks of
//! `B` complex coefficients. Each block is occupied independently with
//! probability `alpha`; occupied blocks hold i.i.d. complex coefficients.
//!
//! The full spectrum lives on the half-bin-offset frequency grid
//! `f_k = (k + 1/2) / N`, `N = 2 L B`. On that grid every bin has a distinct
//! mirror (`x[N-1-k] = conj(x[k])`), so the positive half is exactly `L*B`
//! bins and there is no self-conjugate DC or Nyquist bin.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;

use crate::error::{check_probability, Result, ZmdError};
use crate::rng::{rng_from_seed, ZmdRng};

/// I.i.d. Bernoulli(`alpha`) occupancy flags for `l` sub-channels.
pub fn sample_occupancy(l: usize, alpha: f64, seed: u64) -> Result<Vec<bool>> {
    check_probability("alpha", alpha)?;
    let mut rng = rng_from_seed(seed);
    Ok((0..l).map(|_| rng.random::<f64>() < alpha).collect())
}

/// Renders occupancy as a `0`/`1` string.
pub fn occupancy_string(occupancy: &[bool]) -> String {
    occupancy.iter().map(|&o| if o { '1' } else { '0' }).collect()
}

/// Distribution of the non-zero spectrum coefficients. Zero-block detection
/// only needs it to be continuous.
pub trait CoefficientDistribution {
    fn sample(&self, rng: &mut ZmdRng) -> Complex64;
}

/// Real and imaginary parts i.i.d. `N(0, sigma^2)`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianCoefficients {
    pub sigma: f64,
}

impl CoefficientDistribution for GaussianCoefficients {
    fn sample(&self, rng: &mut ZmdRng) -> Complex64 {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(self.sigma * re, self.sigma * im)
    }
}

/// Unit-modulus coefficients with uniform phase.
#[derive(Debug, Clone, Copy)]
pub struct UniformPhaseCoefficients;

impl CoefficientDistribution for UniformPhaseCoefficients {
    fn sample(&self, rng: &mut ZmdRng) -> Complex64 {
        Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU)
    }
}

/// Positive-frequency spectrum `[u_0; u_1; ...; u_{L-1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRealization {
    block_len: usize,
    occupancy: Vec<bool>,
    /// `L * B` coefficients, block-major; vacant blocks are exactly zero.
    coefficients: Vec<Complex64>,
    sigma_s: f64,
}

impl SpectrumRealization {
    pub fn new(
        block_len: usize,
        occupancy: Vec<bool>,
        coefficients: Vec<Complex64>,
        sigma_s: f64,
    ) -> Result<Self> {
        if block_len == 0 {
            return Err(ZmdError::InvalidParameter("block length must be >= 1".into()));
        }
        if coefficients.len() != occupancy.len() * block_len {
            return Err(ZmdError::DimensionMismatch(format!(
                "{} coefficients for {} blocks of length {block_len}",
                coefficients.len(),
                occupancy.len()
            )));
        }
        let s = SpectrumRealization {
            block_len,
            occupancy,
            coefficients,
            sigma_s,
        };
        if (0..s.num_blocks()).any(|i| !s.occupancy[i] && s.block(i).iter().any(|c| *c != Complex64::ZERO)) {
            return Err(ZmdError::InvalidParameter(
                "vacant blocks must have zero coefficients".into(),
            ));
        }
        Ok(s)
    }

    pub fn num_blocks(&self) -> usize {
        self.occupancy.len()
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Nyquist-rate length `N = 2 L B`.
    pub fn nyquist_len(&self) -> usize {
        2 * self.coefficients.len()
    }

    pub fn sigma_s(&self) -> f64 {
        self.sigma_s
    }

    pub fn occupancy(&self) -> &[bool] {
        &self.occupancy
    }

    pub fn is_occupied(&self, i: usize) -> bool {
        self.occupancy[i]
    }

    pub fn num_occupied(&self) -> usize {
        self.occupancy.iter().filter(|&&o| o).count()
    }

    pub fn block(&self, i: usize) -> &[Complex64] {
        &self.coefficients[i * self.block_len..(i + 1) * self.block_len]
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Block-wise sum; a block is occupied if it is occupied in either term.
    pub fn superpose(&self, other: &Self) -> Result<Self> {
        if self.block_len != other.block_len || self.num_blocks() != other.num_blocks() {
            return Err(ZmdError::DimensionMismatch("spectra differ in shape".into()));
        }
        Ok(SpectrumRealization {
            block_len: self.block_len,
            occupancy: self
                .occupancy
                .iter()
                .zip(&other.occupancy)
                .map(|(a, b)| *a || *b)
                .collect(),
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
            sigma_s: self.sigma_s,
        })
    }
}

/// Fills occupied blocks with complex Gaussian coefficients
/// (real and imaginary parts each `N(0, sigma_s^2)`).
pub fn sample_spectrum(
    occupancy: &[bool],
    block_len: usize,
    sigma_s: f64,
    seed: u64,
) -> Result<SpectrumRealization> {
    if !(sigma_s > 0.0) || !sigma_s.is_finite() {
        return Err(ZmdError::InvalidParameter(format!("sigma_s must be > 0 (got {sigma_s})")));
    }
    let mut rng = rng_from_seed(seed);
    sample_spectrum_with(
        occupancy,
        block_len,
        &GaussianCoefficients { sigma: sigma_s },
        sigma_s,
        &mut rng,
    )
}

/// As [`sample_spectrum`] with a caller-supplied coefficient distribution.
pub fn sample_spectrum_with(
    occupancy: &[bool],
    block_len: usize,
    dist: &dyn CoefficientDistribution,
    sigma_s: f64,
    rng: &mut ZmdRng,
) -> Result<SpectrumRealization> {
    if block_len == 0 {
        return Err(ZmdError::InvalidParameter("block length must be >= 1".into()));
    }
    let mut coefficients = vec![Complex64::ZERO; occupancy.len() * block_len];
    for (i, _) in occupancy.iter().enumerate().filter(|(_, &o)| o) {
        for c in &mut coefficients[i * block_len..(i + 1) * block_len] {
            *c = dist.sample(rng);
        }
    }
    SpectrumRealization::new(block_len, occupancy.to_vec(), coefficients, sigma_s)
}

/// Conjugate-symmetric length-`N` spectrum of a real signal.
#[derive(Debug, Clone, PartialEq)]
pub struct FullSpectrum {
    pub bins: Vec<Complex64>,
}

impl FullSpectrum {
    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Largest `|x[N-1-k] - conj(x[k])|`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.bins.len();
        (0..n)
            .map(|k| (self.bins[n - 1 - k] - self.bins[k].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Time-domain signal `F^{-1} x` (complex; real up to rounding).
    pub fn to_time_domain(&self) -> Vec<Complex64> {
        inverse_transform(&self.bins)
    }

    /// Real part of [`Self::to_time_domain`].
    pub fn to_real_signal(&self) -> Vec<f64> {
        self.to_time_domain().into_iter().map(|c| c.re).collect()
    }
}

/// Places the blocks on the positive half and mirrors them.
pub fn assemble_full_spectrum(s: &SpectrumRealization) -> FullSpectrum {
    let half = s.coefficients.len();
    let n = 2 * half;
    let mut bins = vec![Complex64::ZERO; n];
    for (k, c) in s.coefficients.iter().enumerate() {
        bins[k] = *c;
        bins[n - 1 - k] = c.conj();
    }
    FullSpectrum { bins }
}

/// Unitary transform on the offset grid:
/// `X[k] = N^{-1/2} sum_n x[n] exp(-2 pi i (k + 1/2) n / N)`.
pub fn forward_transform(signal: &[Complex64]) -> Vec<Complex64> {
    let n = signal.len();
    if n == 0 {
        return Vec::new();
    }
    let scale = 1.0 / (n as f64).sqrt();
    let mut buf: Vec<Complex64> = signal
        .iter()
        .enumerate()
        .map(|(t, x)| x * Complex64::from_polar(scale, -std::f64::consts::PI * t as f64 / n as f64))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf
}

/// Inverse of [`forward_transform`].
pub fn inverse_transform(spectrum: &[Complex64]) -> Vec<Complex64> {
    let n = spectrum.len();
    if n == 0 {
        return Vec::new();
    }
    let mut buf = spectrum.to_vec();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    buf.iter()
        .enumerate()
        .map(|(t, x)| x * Complex64::from_polar(scale, std::f64::consts::PI * t as f64 / n as f64))
        .collect()
}
