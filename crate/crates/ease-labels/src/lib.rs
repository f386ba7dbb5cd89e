//! Phone and articulation-place label spaces, the phone-to-place projection,
//! and alignment of symbolic segments to audio/video frame grids.

mod align;
mod mapping;

pub use align::{align_to_frames, downsample_labels, parse_segments, write_segments, Segment};
pub use mapping::{validate_mapping, MappingReport, PhoneToPlaceMap};

use ndarray::Array2;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabelError {
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("phone {0:?} has no place mapping")]
    Unmapped(String),
    #[error("label index {idx} out of range for {n} classes")]
    IndexRange { idx: usize, n: usize },
    #[error("segments overlap near {0:.4} s")]
    Overlap(f64),
    #[error("segments not sorted at {0:.4} s")]
    Unsorted(f64),
    #[error("sequence length {0} not divisible by {1}")]
    NotDivisible(usize, usize),
    #[error("bad segment line {line}: {msg}")]
    BadSegmentLine { line: usize, msg: String },
    #[error("bad mapping line {line}: {msg}")]
    BadMappingLine { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, LabelError>;

/// An ordered, indexable label inventory.
pub trait LabelSet {
    fn symbols(&self) -> &[String];

    fn len(&self) -> usize {
        self.symbols().len()
    }

    fn is_empty(&self) -> bool {
        self.symbols().is_empty()
    }

    fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols().iter().position(|s| s == symbol)
    }

    fn symbol(&self, idx: usize) -> &str {
        &self.symbols()[idx]
    }

    /// Index used for unlabeled gaps.
    fn silence_index(&self) -> usize;
}

/// The 39 CMU context-independent phones plus "sil", in alphabetical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhoneSet {
    symbols: Vec<String>,
}

pub const CMU_PHONES: [&str; 39] = [
    "aa", "ae", "ah", "ao", "aw", "ay", "b", "ch", "d", "dh", "eh", "er", "ey", "f", "g", "hh",
    "ih", "iy", "jh", "k", "l", "m", "n", "ng", "ow", "oy", "p", "r", "s", "sh", "t", "th", "uh",
    "uw", "v", "w", "y", "z", "zh",
];

impl PhoneSet {
    pub fn cmu39() -> Self {
        let mut symbols: Vec<String> = CMU_PHONES.iter().map(|s| s.to_string()).collect();
        symbols.push("sil".to_string());
        Self { symbols }
    }
}

impl LabelSet for PhoneSet {
    fn symbols(&self) -> &[String] {
        &self.symbols
    }

    fn silence_index(&self) -> usize {
        self.symbols.len() - 1
    }
}

/// The ten articulation place classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceSet {
    symbols: Vec<String>,
}

pub const PLACES: [&str; 10] = [
    "Coronal", "High", "Dental", "Glottal", "Labial", "Low", "Mid", "Retroflex", "Velar",
    "Silence",
];

impl PlaceSet {
    pub fn ten() -> Self {
        Self { symbols: PLACES.iter().map(|s| s.to_string()).collect() }
    }
}

impl LabelSet for PlaceSet {
    fn symbols(&self) -> &[String] {
        &self.symbols
    }

    fn silence_index(&self) -> usize {
        PLACES.len() - 1
    }
}

/// Frame grid a label sequence is aligned to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameRate {
    /// 100 frames/s (10 ms hop).
    Audio,
    /// 25 frames/s (40 ms).
    Video,
}

impl FrameRate {
    pub fn fps(self) -> f64 {
        match self {
            FrameRate::Audio => 100.0,
            FrameRate::Video => 25.0,
        }
    }
}

/// Per-frame class indices on a fixed frame grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameLabelSeq {
    pub labels: Vec<usize>,
    pub frame_rate: FrameRate,
    pub n_classes: usize,
}

impl FrameLabelSeq {
    pub fn new(labels: Vec<usize>, frame_rate: FrameRate, n_classes: usize) -> Result<Self> {
        for &idx in &labels {
            if idx >= n_classes {
                return Err(LabelError::IndexRange { idx, n: n_classes });
            }
        }
        Ok(Self { labels, frame_rate, n_classes })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// T x K one-hot distribution matrix; every row sums to 1.
    pub fn onehot(&self) -> Array2<f64> {
        let mut m = Array2::zeros((self.labels.len(), self.n_classes));
        for (t, &k) in self.labels.iter().enumerate() {
            m[[t, k]] = 1.0;
        }
        m
    }
}

/// Project a phone-label sequence to place labels; length and frame rate are
/// preserved.
pub fn phone_to_place(
    seq: &FrameLabelSeq,
    map: &PhoneToPlaceMap,
    phones: &PhoneSet,
    places: &PlaceSet,
) -> Result<FrameLabelSeq> {
    let proj = map.projection_vector(phones, places)?;
    let labels = seq.labels.iter().map(|&p| proj[p]).collect();
    FrameLabelSeq::new(labels, seq.frame_rate, places.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phone_set_has_40_unique_lowercase_symbols() {
        let p = PhoneSet::cmu39();
        assert_eq!(p.len(), 40);
        let mut sorted = p.symbols().to_vec();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 40);
        assert!(p.symbols().iter().all(|s| s.chars().all(|c| c.is_ascii_lowercase())));
        assert_eq!(p.symbol(p.silence_index()), "sil");
    }

    #[test]
    fn place_set_has_10_unique_symbols() {
        let p = PlaceSet::ten();
        assert_eq!(p.len(), 10);
        assert_eq!(p.symbol(p.silence_index()), "Silence");
    }

    #[test]
    fn onehot_rows_sum_to_one() {
        let seq = FrameLabelSeq::new(vec![0, 3, 9, 9], FrameRate::Audio, 10).unwrap();
        let m = seq.onehot();
        assert_eq!(m.dim(), (4, 10));
        for row in m.rows() {
            assert_eq!(row.sum(), 1.0);
        }
        assert_eq!(m[[1, 3]], 1.0);
    }

    #[test]
    fn out_of_range_label_rejected() {
        assert!(FrameLabelSeq::new(vec![10], FrameRate::Audio, 10).is_err());
    }
}
