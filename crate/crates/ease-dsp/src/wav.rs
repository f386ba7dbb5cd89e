//! Minimal 16-bit PCM mono WAV reader/writer.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::{DspError, Result, Waveform};

fn bad(msg: impl Into<String>) -> DspError {
    DspError::Wav(msg.into())
}

/// Write a waveform as 16-bit PCM mono. Samples are clamped to `[-1, 1)`.
pub fn write_wav(path: impl AsRef<Path>, w: &Waveform) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    let n = w.samples.len() as u32;
    let data_bytes = n * 2;
    let byte_rate = w.sample_rate * 2;

    f.write_all(b"RIFF")?;
    f.write_all(&(36 + data_bytes).to_le_bytes())?;
    f.write_all(b"WAVE")?;
    f.write_all(b"fmt ")?;
    f.write_all(&16u32.to_le_bytes())?;
    f.write_all(&1u16.to_le_bytes())?; // PCM
    f.write_all(&1u16.to_le_bytes())?; // mono
    f.write_all(&w.sample_rate.to_le_bytes())?;
    f.write_all(&byte_rate.to_le_bytes())?;
    f.write_all(&2u16.to_le_bytes())?; // block align
    f.write_all(&16u16.to_le_bytes())?; // bits per sample
    f.write_all(b"data")?;
    f.write_all(&data_bytes.to_le_bytes())?;
    for &s in &w.samples {
        let v = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        f.write_all(&v.to_le_bytes())?;
    }
    f.flush()?;
    Ok(())
}

/// Read a 16-bit PCM mono WAV file. Unknown chunks are skipped.
pub fn read_wav(path: impl AsRef<Path>) -> Result<Waveform> {
    let mut f = BufReader::new(File::open(path)?);
    let mut hdr = [0u8; 12];
    f.read_exact(&mut hdr)?;
    if &hdr[0..4] != b"RIFF" || &hdr[8..12] != b"WAVE" {
        return Err(bad("not a RIFF/WAVE file"));
    }
    let mut sample_rate = 0u32;
    let mut bits = 0u16;
    let mut channels = 0u16;
    let mut data: Option<Vec<u8>> = None;
    loop {
        let mut chunk_hdr = [0u8; 8];
        match f.read_exact(&mut chunk_hdr) {
            Ok(()) => {}
            Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(e.into()),
        }
        let id = &chunk_hdr[0..4];
        let size = u32::from_le_bytes(chunk_hdr[4..8].try_into().unwrap()) as usize;
        if id == b"fmt " {
            let mut body = vec![0u8; size];
            f.read_exact(&mut body)?;
            if body.len() < 16 {
                return Err(bad("fmt chunk too small"));
            }
            let format = u16::from_le_bytes(body[0..2].try_into().unwrap());
            if format != 1 {
                return Err(bad(format!("unsupported wav format tag {format}, need PCM")));
            }
            channels = u16::from_le_bytes(body[2..4].try_into().unwrap());
            sample_rate = u32::from_le_bytes(body[4..8].try_into().unwrap());
            bits = u16::from_le_bytes(body[14..16].try_into().unwrap());
        } else if id == b"data" {
            let mut body = vec![0u8; size];
            f.read_exact(&mut body)?;
            data = Some(body);
        } else {
            let mut skip = vec![0u8; size + (size & 1)];
            f.read_exact(&mut skip)?;
            continue;
        }
        if size & 1 == 1 {
            let mut pad = [0u8; 1];
            let _ = f.read_exact(&mut pad);
        }
    }
    let data = data.ok_or_else(|| bad("missing data chunk"))?;
    if channels != 1 {
        return Err(bad(format!("need mono, got {channels} channels")));
    }
    if bits != 16 {
        return Err(bad(format!("need 16-bit PCM, got {bits}")));
    }
    let samples = data
        .chunks_exact(2)
        .map(|b| i16::from_le_bytes([b[0], b[1]]) as f64 / 32768.0)
        .collect();
    Ok(Waveform::new(samples, sample_rate))
}
