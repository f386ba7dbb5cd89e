//! SNR mixing and ideal ratio masks.

use ndarray::Array2;
use rand::Rng;

use crate::{DspError, Result, Waveform};

/// T x F real mask with all entries in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    pub values: Array2<f64>,
}

impl Mask {
    pub fn new(values: Array2<f64>) -> Result<Self> {
        let m = Self { values };
        m.check_range()?;
        Ok(m)
    }

    pub fn check_range(&self) -> Result<()> {
        for ((t, f), &v) in self.values.indexed_iter() {
            if !(0.0..=1.0).contains(&v) || !v.is_finite() {
                return Err(DspError::MaskRange { value: v, t, f });
            }
        }
        Ok(())
    }
}

/// SNR in dB of a (clean, noise) pair, measured over whole signals.
pub fn snr_db(clean: &Waveform, noise: &Waveform) -> f64 {
    10.0 * (clean.power() / noise.power()).log10()
}

/// Scale `noise` so the mixture hits `snr_db` exactly, cropping it at a
/// random offset when it is longer than `clean`. Returns the mixture and the
/// scaled, cropped noise (the IRM target needs the aligned pair).
pub fn mix_at_snr<R: Rng>(
    clean: &Waveform,
    noise: &Waveform,
    snr_db: f64,
    rng: &mut R,
) -> Result<(Waveform, Waveform)> {
    if noise.len() < clean.len() {
        return Err(DspError::NoiseTooShort { noise: noise.len(), clean: clean.len() });
    }
    let max_offset = noise.len() - clean.len();
    let offset = if max_offset == 0 { 0 } else { rng.random_range(0..=max_offset) };
    mix_at_snr_with_offset(clean, noise, snr_db, offset)
}

/// Deterministic variant of [`mix_at_snr`] with an explicit crop offset, used
/// when the offset is recorded in a corpus manifest.
pub fn mix_at_snr_with_offset(
    clean: &Waveform,
    noise: &Waveform,
    snr_db: f64,
    offset: usize,
) -> Result<(Waveform, Waveform)> {
    if noise.len() < clean.len() {
        return Err(DspError::NoiseTooShort { noise: noise.len(), clean: clean.len() });
    }
    let max_offset = noise.len() - clean.len();
    if offset > max_offset {
        return Err(DspError::BadOffset { offset, max: max_offset });
    }
    let p_clean = clean.power();
    if p_clean <= 0.0 {
        return Err(DspError::ZeroPower("clean signal"));
    }
    let crop = &noise.samples[offset..offset + clean.len()];
    let p_noise = crop.iter().map(|s| s * s).sum::<f64>() / crop.len() as f64;
    if p_noise <= 0.0 {
        return Err(DspError::ZeroPower("noise crop"));
    }
    // 10 log10(P_clean / (alpha^2 P_noise)) = snr_db
    let alpha = (p_clean / (p_noise * 10f64.powf(snr_db / 10.0))).sqrt();
    let scaled: Vec<f64> = crop.iter().map(|s| s * alpha).collect();
    let noisy: Vec<f64> =
        clean.samples.iter().zip(&scaled).map(|(c, n)| c + n).collect();
    Ok((
        Waveform::new(noisy, clean.sample_rate),
        Waveform::new(scaled, clean.sample_rate),
    ))
}

/// Ideal ratio mask `sqrt(C / (C + D))` from aligned clean and noise power
/// spectrograms; cells where both powers are zero are defined as 0.
pub fn compute_irm(clean_ps: &Array2<f64>, noise_ps: &Array2<f64>) -> Result<Mask> {
    if clean_ps.dim() != noise_ps.dim() {
        return Err(DspError::ShapeMismatch {
            context: "clean vs noise power spectrogram",
            got: noise_ps.dim(),
            expected: clean_ps.dim(),
        });
    }
    for ((t, f), &v) in clean_ps.indexed_iter() {
        if v < 0.0 {
            return Err(DspError::NegativePower(t, f));
        }
        let d = noise_ps[[t, f]];
        if d < 0.0 {
            return Err(DspError::NegativePower(t, f));
        }
    }
    let mut values = Array2::zeros(clean_ps.dim());
    ndarray::Zip::from(&mut values)
        .and(clean_ps)
        .and(noise_ps)
        .for_each(|m, &c, &d| {
            let den = c + d;
            *m = if den == 0.0 { 0.0 } else { (c / den).sqrt() };
        });
    Mask::new(values)
}
