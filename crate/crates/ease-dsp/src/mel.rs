//! Triangular mel filterbank on the HTK mel curve.

use ndarray::Array2;

use crate::{DspError, Result, N_FREQ, N_MEL, SAMPLE_RATE};

fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

fn mel_to_hz(m: f64) -> f64 {
    700.0 * (10f64.powf(m / 2595.0) - 1.0)
}

/// `F_mel x F` nonnegative filter matrix. The first filter is flattened to 1
/// below its peak and the last above its peak so that every frequency bin in
/// `[fmin, fmax)` carries weight from at least one filter.
#[derive(Debug, Clone, PartialEq)]
pub struct MelFilterbank {
    pub weights: Array2<f64>,
    pub fmin: f64,
    pub fmax: f64,
}

impl MelFilterbank {
    /// Pipeline default: 40 filters over 201 bins, 0..8000 Hz, 16 kHz audio.
    pub fn pipeline_default() -> Self {
        Self::new(N_MEL, N_FREQ, SAMPLE_RATE, 0.0, 8000.0)
    }

    pub fn new(n_mel: usize, n_freq: usize, sample_rate: u32, fmin: f64, fmax: f64) -> Self {
        assert!(n_mel >= 2 && n_freq >= 2);
        assert!(fmin >= 0.0 && fmax > fmin);
        let mel_lo = hz_to_mel(fmin);
        let mel_hi = hz_to_mel(fmax);
        // n_mel + 2 knots; filter m spans knots (m, m+1, m+2).
        let knots: Vec<f64> = (0..n_mel + 2)
            .map(|i| mel_to_hz(mel_lo + (mel_hi - mel_lo) * i as f64 / (n_mel + 1) as f64))
            .collect();
        let bin_hz = sample_rate as f64 / ((n_freq - 1) * 2) as f64;
        let mut weights = Array2::zeros((n_mel, n_freq));
        for m in 0..n_mel {
            let (lo, mid, hi) = (knots[m], knots[m + 1], knots[m + 2]);
            for k in 0..n_freq {
                let f = k as f64 * bin_hz;
                if f < lo || f > hi {
                    continue;
                }
                let w = if f <= mid {
                    if m == 0 {
                        1.0 // low shelf keeps the DC-side bins covered
                    } else {
                        (f - lo) / (mid - lo)
                    }
                } else if m == n_mel - 1 {
                    1.0 // high shelf covers bins up to fmax
                } else {
                    (hi - f) / (hi - mid)
                };
                weights[[m, k]] = w;
            }
        }
        Self { weights, fmin, fmax }
    }

    pub fn n_mel(&self) -> usize {
        self.weights.nrows()
    }

    pub fn n_freq(&self) -> usize {
        self.weights.ncols()
    }

    /// Row sums positive, column coverage inside `[fmin, fmax)`.
    pub fn validate(&self, sample_rate: u32) -> Result<()> {
        let bin_hz = sample_rate as f64 / ((self.n_freq() - 1) * 2) as f64;
        for m in 0..self.n_mel() {
            let sum: f64 = self.weights.row(m).sum();
            if sum <= 0.0 {
                return Err(DspError::Wav(format!("mel filter {m} has nonpositive sum")));
            }
        }
        for k in 0..self.n_freq() {
            let f = k as f64 * bin_hz;
            if f >= self.fmin && f < self.fmax {
                let col: f64 = self.weights.column(k).sum();
                if col <= 0.0 {
                    return Err(DspError::Wav(format!("bin {k} ({f} Hz) uncovered")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_shape_and_coverage() {
        let fb = MelFilterbank::pipeline_default();
        assert_eq!(fb.n_mel(), 40);
        assert_eq!(fb.n_freq(), 201);
        fb.validate(SAMPLE_RATE).unwrap();
        assert!(fb.weights.iter().all(|&w| w >= 0.0));
    }

    #[test]
    fn mel_curve_roundtrip() {
        for f in [0.0, 100.0, 1000.0, 4000.0, 7999.0] {
            assert!((mel_to_hz(hz_to_mel(f)) - f).abs() < 1e-6);
        }
    }

    #[test]
    fn peaks_ascend_in_frequency() {
        let fb = MelFilterbank::pipeline_default();
        let mut last_peak = 0usize;
        for m in 0..fb.n_mel() {
            let peak = fb
                .weights
                .row(m)
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap()
                .0;
            assert!(peak >= last_peak, "filter {m}");
            last_peak = peak;
        }
    }
}
