//! Short-time analysis/synthesis with a Hanning window and weighted
//! overlap-add reconstruction.

use ndarray::Array2;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::{DspError, Mask, Result, Waveform, HOP, N_FFT, SAMPLE_RATE};

/// Analysis configuration. `n_fft == win_length` and `n_freq()` is 201 for
/// the pipeline default (400-point transform, 25 ms window, 10 ms hop).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StftConfig {
    pub n_fft: usize,
    pub win_length: usize,
    pub hop: usize,
}

impl Default for StftConfig {
    fn default() -> Self {
        Self { n_fft: N_FFT, win_length: N_FFT, hop: HOP }
    }
}

impl StftConfig {
    pub fn n_freq(&self) -> usize {
        self.n_fft / 2 + 1
    }

    /// Frame count for a signal of `len` samples; no centering padding.
    pub fn n_frames(&self, len: usize) -> Result<usize> {
        if len < self.win_length {
            return Err(DspError::TooShort { len, min: self.win_length });
        }
        Ok(1 + (len - self.win_length) / self.hop)
    }

    /// Number of samples covered by `t` frames.
    pub fn n_samples(&self, t: usize) -> usize {
        if t == 0 {
            0
        } else {
            (t - 1) * self.hop + self.win_length
        }
    }
}

/// Hanning window without zero endpoints:
/// `w[n] = 0.5 (1 - cos(2 pi (n+1) / (N+1)))`. Nonzero everywhere, which
/// keeps the overlap-add normalization denominator strictly positive.
pub fn hanning(n: usize) -> Vec<f64> {
    let denom = (n + 1) as f64;
    (0..n)
        .map(|i| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * (i + 1) as f64 / denom).cos()))
        .collect()
}

/// Complex spectrogram, one row per frame, `n_freq` one-sided bins.
#[derive(Debug, Clone)]
pub struct SpectrogramComplex {
    pub frames: Array2<Complex64>,
    pub config: StftConfig,
}

impl SpectrogramComplex {
    pub fn n_frames(&self) -> usize {
        self.frames.nrows()
    }

    pub fn n_freq(&self) -> usize {
        self.frames.ncols()
    }

    /// Per-cell squared magnitude.
    pub fn power(&self) -> Array2<f64> {
        self.frames.mapv(|c| c.norm_sqr())
    }

    /// Per-cell magnitude.
    pub fn magnitude(&self) -> Array2<f64> {
        self.frames.mapv(|c| c.norm())
    }
}

/// Short-time Fourier transform. The signal must be at 16 kHz and at least
/// one window long; frames are laid out without centering padding, so
/// `T = 1 + floor((len - win) / hop)`.
pub fn stft(w: &Waveform, cfg: StftConfig) -> Result<SpectrogramComplex> {
    if w.sample_rate != SAMPLE_RATE {
        return Err(DspError::SampleRate { got: w.sample_rate, want: SAMPLE_RATE });
    }
    let t = cfg.n_frames(w.len())?;
    let f = cfg.n_freq();
    let window = hanning(cfg.win_length);
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(cfg.n_fft);
    let mut frames = Array2::zeros((t, f));
    let mut buf = vec![Complex64::default(); cfg.n_fft];
    for ti in 0..t {
        let start = ti * cfg.hop;
        for (i, b) in buf.iter_mut().enumerate() {
            *b = Complex64::new(w.samples[start + i] * window[i], 0.0);
        }
        fft.process(&mut buf);
        for fi in 0..f {
            frames[[ti, fi]] = buf[fi];
        }
    }
    Ok(SpectrogramComplex { frames, config: cfg })
}

/// Inverse STFT by weighted overlap-add with synthesis-window normalization.
/// Reconstructs `(T-1)*hop + win` samples; for a spectrogram produced by
/// [`stft`] the covered samples match the original to machine precision.
pub fn istft(s: &SpectrogramComplex) -> Result<Waveform> {
    let cfg = s.config;
    let t = s.n_frames();
    let f = s.n_freq();
    let window = hanning(cfg.win_length);
    let out_len = cfg.n_samples(t);
    let mut num = vec![0.0f64; out_len];
    let mut den = vec![0.0f64; out_len];

    let mut planner = FftPlanner::new();
    let ifft = planner.plan_fft_inverse(cfg.n_fft);
    let scale = 1.0 / cfg.n_fft as f64;
    let mut buf = vec![Complex64::default(); cfg.n_fft];
    for ti in 0..t {
        // Rebuild the two-sided spectrum from the one-sided bins.
        for fi in 0..f {
            buf[fi] = s.frames[[ti, fi]];
        }
        for fi in f..cfg.n_fft {
            buf[fi] = s.frames[[ti, cfg.n_fft - fi]].conj();
        }
        ifft.process(&mut buf);
        let start = ti * cfg.hop;
        for i in 0..cfg.win_length {
            let y = buf[i].re * scale;
            num[start + i] += window[i] * y;
            den[start + i] += window[i] * window[i];
        }
    }
    // The Hanning window here has no zero taps, so every covered sample has a
    // strictly positive denominator.
    let mut samples = Vec::with_capacity(out_len);
    for i in 0..out_len {
        assert!(den[i] > 0.0, "overlap-add normalization denominator is zero");
        samples.push(num[i] / den[i]);
    }
    Ok(Waveform::new(samples, SAMPLE_RATE))
}

/// Scale the noisy spectrogram magnitude by a `[0, 1]` mask, keep the noisy
/// phase, and resynthesize.
pub fn apply_mask(noisy: &SpectrogramComplex, m: &Mask) -> Result<Waveform> {
    let got = (m.values.nrows(), m.values.ncols());
    let expected = (noisy.n_frames(), noisy.n_freq());
    if got != expected {
        return Err(DspError::ShapeMismatch { context: "mask vs spectrogram", got, expected });
    }
    m.check_range()?;
    let mut masked = noisy.clone();
    ndarray::Zip::from(&mut masked.frames)
        .and(&m.values)
        .for_each(|c, &g| *c *= g);
    istft(&masked)
}
