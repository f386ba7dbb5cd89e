//! Log-power spectra, FBANK features, and mean/variance normalization.

use ndarray::{Array2, ArrayView2};

use crate::{DspError, MelFilterbank, Result, SpectrogramComplex, VAR_FLOOR};

/// Per-dimension mean and variance, computed once over a training set and
/// applied unchanged at validation/test time.
#[derive(Debug, Clone, PartialEq)]
pub struct NormStats {
    pub mean: Vec<f64>,
    pub var: Vec<f64>,
}

impl NormStats {
    /// Accumulate stats over row-major feature matrices (rows are frames).
    pub fn compute<'a, I>(mats: I) -> Option<Self>
    where
        I: IntoIterator<Item = ArrayView2<'a, f64>>,
    {
        let mut count = 0usize;
        let mut sum: Vec<f64> = Vec::new();
        let mut sumsq: Vec<f64> = Vec::new();
        for m in mats {
            if sum.is_empty() {
                sum = vec![0.0; m.ncols()];
                sumsq = vec![0.0; m.ncols()];
            }
            assert_eq!(sum.len(), m.ncols(), "inconsistent feature width");
            for row in m.rows() {
                for (j, &v) in row.iter().enumerate() {
                    sum[j] += v;
                    sumsq[j] += v * v;
                }
            }
            count += m.nrows();
        }
        if count == 0 {
            return None;
        }
        let n = count as f64;
        let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();
        let var: Vec<f64> = sumsq
            .iter()
            .zip(&mean)
            .map(|(sq, m)| (sq / n - m * m).max(0.0))
            .collect();
        Some(Self { mean, var })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// Log-power spectra, `T x F`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpsFeatures {
    pub values: Array2<f64>,
    pub normalized: bool,
    pub norm_stats: Option<NormStats>,
}

/// Log mel-filterbank energies, `T x F_mel`.
#[derive(Debug, Clone, PartialEq)]
pub struct FbankFeatures {
    pub values: Array2<f64>,
    pub normalized: bool,
    pub norm_stats: Option<NormStats>,
}

/// `ln(max(|s|^2, eps))` per cell.
pub fn lps(s: &SpectrogramComplex, eps: f64) -> LpsFeatures {
    assert!(eps > 0.0);
    let values = s.frames.mapv(|c| c.norm_sqr().max(eps).ln());
    LpsFeatures { values, normalized: false, norm_stats: None }
}

/// `ln(max(fb . |s|^2, eps))` per cell; frame count preserved.
pub fn fbank(s: &SpectrogramComplex, fb: &MelFilterbank, eps: f64) -> Result<FbankFeatures> {
    assert!(eps > 0.0);
    if fb.n_freq() != s.n_freq() {
        return Err(DspError::ShapeMismatch {
            context: "filterbank vs spectrogram",
            got: (fb.n_mel(), fb.n_freq()),
            expected: (fb.n_mel(), s.n_freq()),
        });
    }
    let power = s.power();
    let mut values = power.dot(&fb.weights.t());
    values.mapv_inplace(|v| v.max(eps).ln());
    Ok(FbankFeatures { values, normalized: false, norm_stats: None })
}

/// `(x - mean) / sqrt(var + floor)` per dimension with the default floor.
pub fn normalize(x: &Array2<f64>, stats: &NormStats) -> Array2<f64> {
    normalize_with_floor(x, stats, VAR_FLOOR)
}

pub fn normalize_with_floor(x: &Array2<f64>, stats: &NormStats, floor: f64) -> Array2<f64> {
    assert_eq!(x.ncols(), stats.dim(), "stats dimension mismatch");
    let inv_std: Vec<f64> = stats.var.iter().map(|v| 1.0 / (v + floor).sqrt()).collect();
    let mut out = x.clone();
    for mut row in out.rows_mut() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (*v - stats.mean[j]) * inv_std[j];
        }
    }
    out
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::{stft, StftConfig, Waveform, SAMPLE_RATE};
    use ndarray::array;
    use rand::{Rng, SeedableRng};

    #[test]
    fn lps_of_unit_magnitude_is_zero() {
        let cfg = StftConfig::default();
        let frames = Array2::from_elem((4, cfg.n_freq()), rustfft::num_complex::Complex64::new(1.0, 0.0));
        let s = SpectrogramComplex { frames, config: cfg };
        let f = lps(&s, LOG_EPS);
        assert!(f.values.iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn lps_floor_on_silence() {
        let cfg = StftConfig::default();
        let s = SpectrogramComplex { frames: Array2::zeros((2, cfg.n_freq())), config: cfg };
        let f = lps(&s, 1e-12);
        let want = (1e-12f64).ln();
        assert!((want + 27.631).abs() < 1e-3);
        assert!(f.values.iter().all(|&v| (v - want).abs() < 1e-12));
    }

    #[test]
    fn lps_shape_one_second() {
        let w = Waveform::new(
            (0..16000).map(|i| (i as f64 * 0.01).sin()).collect(),
            SAMPLE_RATE,
        );
        let s = stft(&w, StftConfig::default()).unwrap();
        let f = lps(&s, LOG_EPS);
        assert_eq!(f.values.dim(), (98, 201));
    }

    #[test]
    fn fbank_width_and_floor() {
        let cfg = StftConfig::default();
        let fb = MelFilterbank::pipeline_default();
        let s = SpectrogramComplex { frames: Array2::zeros((3, cfg.n_freq())), config: cfg };
        let f = fbank(&s, &fb, LOG_EPS).unwrap();
        assert_eq!(f.values.dim(), (3, 40));
        assert!(f.values.iter().all(|&v| (v - LOG_EPS.ln()).abs() < 1e-12));
    }

    #[test]
    fn fbank_white_noise_is_finite_above_floor() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let w = Waveform::new((0..8000).map(|_| rng.random_range(-0.5..0.5)).collect(), SAMPLE_RATE);
        let s = stft(&w, StftConfig::default()).unwrap();
        let fb = MelFilterbank::pipeline_default();
        let f = fbank(&s, &fb, LOG_EPS).unwrap();
        assert_eq!(f.values.nrows(), s.n_frames());
        for &v in f.values.iter() {
            assert!(v.is_finite());
            assert!(v > LOG_EPS.ln());
        }
    }

    #[test]
    fn fbank_shape_mismatch_errors() {
        let fb = MelFilterbank::new(10, 33, SAMPLE_RATE, 0.0, 8000.0);
        let cfg = StftConfig::default();
        let s = SpectrogramComplex { frames: Array2::zeros((3, cfg.n_freq())), config: cfg };
        assert!(matches!(fbank(&s, &fb, LOG_EPS), Err(DspError::ShapeMismatch { .. })));
    }

    #[test]
    fn normalize_reference_points() {
        let stats = NormStats { mean: vec![1.0], var: vec![4.0] };
        let x = array![[3.0]];
        let out = normalize(&x, &stats);
        assert!((out[[0, 0]] - 1.0).abs() < 1e-6);

        // x equal to the mean everywhere maps to zeros.
        let x = array![[1.0], [1.0]];
        let out = normalize(&x, &stats);
        assert!(out.iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn normalize_with_own_stats_is_near_identity() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(9);
        let mut x = Array2::zeros((500, 3));
        for v in x.iter_mut() {
            *v = rng.random_range(-1.0..1.0);
        }
        // Standardize first, then re-normalize with its own stats.
        let stats = NormStats::compute([x.view()]).unwrap();
        let z = normalize(&x, &stats);
        let stats2 = NormStats::compute([z.view()]).unwrap();
        let z2 = normalize(&z, &stats2);
        for (a, b) in z2.iter().zip(z.iter()) {
            assert!((a - b).abs() < 1e-3);
        }
    }
}
