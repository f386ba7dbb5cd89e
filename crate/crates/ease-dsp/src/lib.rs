//! Deterministic signal-processing layer: framing, STFT/iSTFT, LPS and FBANK
//! features, SNR mixing, IRM computation, mask application and waveform
//! resynthesis.
//!
//! Every operation here is a pure function of its inputs; there is no shared
//! mutable state and everything is safe to call concurrently.

mod features;
mod mel;
mod mix;
mod stft;
pub mod wav;

pub use features::{fbank, lps, normalize, normalize_with_floor, FbankFeatures, LpsFeatures, NormStats};
pub use mel::MelFilterbank;
pub use mix::{compute_irm, mix_at_snr, mix_at_snr_with_offset, snr_db, Mask};
pub use stft::{apply_mask, hanning, istft, stft, SpectrogramComplex, StftConfig};

use thiserror::Error;

/// Pipeline sample rate; all entry points expect 16 kHz audio.
pub const SAMPLE_RATE: u32 = 16_000;
/// STFT size in samples (25 ms at 16 kHz).
pub const N_FFT: usize = 400;
/// Analysis hop in samples (10 ms at 16 kHz).
pub const HOP: usize = 160;
/// One-sided spectrum size, `N_FFT / 2 + 1`.
pub const N_FREQ: usize = 201;
/// Number of mel filters for FBANK features.
pub const N_MEL: usize = 40;
/// Floor applied inside log compressors.
pub const LOG_EPS: f64 = 1e-12;
/// Floor added to variances before normalization.
pub const VAR_FLOOR: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum DspError {
    #[error("signal too short: {len} samples, need at least {min}")]
    TooShort { len: usize, min: usize },
    #[error("unexpected sample rate {got}, pipeline requires {want} Hz")]
    SampleRate { got: u32, want: u32 },
    #[error("shape mismatch: {context} (got {got:?}, expected {expected:?})")]
    ShapeMismatch {
        context: &'static str,
        got: (usize, usize),
        expected: (usize, usize),
    },
    #[error("{0} has zero power")]
    ZeroPower(&'static str),
    #[error("negative power-spectrum entry at ({0}, {1})")]
    NegativePower(usize, usize),
    #[error("mask entry {value} at ({t}, {f}) outside [0, 1]")]
    MaskRange { value: f64, t: usize, f: usize },
    #[error("noise shorter than clean signal: {noise} < {clean}")]
    NoiseTooShort { noise: usize, clean: usize },
    #[error("noise crop offset {offset} out of range (max {max})")]
    BadOffset { offset: usize, max: usize },
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("wav: {0}")]
    Wav(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, DspError>;

/// Mono audio signal with its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

impl Waveform {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Self {
        Self { samples, sample_rate }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean-square power over the whole signal.
    pub fn power(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|s| s * s).sum::<f64>() / self.samples.len() as f64
    }

    /// Errors if any sample is non-finite.
    pub fn check_finite(&self) -> Result<()> {
        for (i, s) in self.samples.iter().enumerate() {
            if !s.is_finite() {
                return Err(DspError::NonFinite(i));
            }
        }
        Ok(())
    }
}
