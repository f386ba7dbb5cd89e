//! Aligning symbolic time segments to frame grids.

use crate::{FrameLabelSeq, FrameRate, LabelError, LabelSet, Result};

/// A labeled time span in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub symbol: String,
}

impl Segment {
    pub fn new(start: f64, end: f64, symbol: impl Into<String>) -> Self {
        Self { start, end, symbol: symbol.into() }
    }
}

/// Label frame `t` with the segment containing its center `(t + 0.5) / fps`;
/// gaps fall back to the set's silence symbol. Segments must be sorted and
/// non-overlapping.
pub fn align_to_frames<S: LabelSet>(
    segments: &[Segment],
    frame_rate: FrameRate,
    n_frames: usize,
    set: &S,
) -> Result<FrameLabelSeq> {
    let mut prev_start = f64::NEG_INFINITY;
    let mut prev_end = f64::NEG_INFINITY;
    for seg in segments {
        if seg.start < prev_start {
            return Err(LabelError::Unsorted(seg.start));
        }
        if seg.start < prev_end - 1e-9 {
            return Err(LabelError::Overlap(seg.start));
        }
        prev_start = seg.start;
        prev_end = seg.end;
    }
    let fps = frame_rate.fps();
    let sil = set.silence_index();
    let mut labels = Vec::with_capacity(n_frames);
    let mut cursor = 0usize;
    for t in 0..n_frames {
        let center = (t as f64 + 0.5) / fps;
        while cursor < segments.len() && segments[cursor].end <= center {
            cursor += 1;
        }
        let label = if cursor < segments.len()
            && segments[cursor].start <= center
            && center < segments[cursor].end
        {
            set.index_of(&segments[cursor].symbol)
                .ok_or_else(|| LabelError::UnknownSymbol(segments[cursor].symbol.clone()))?
        } else {
            sil
        };
        labels.push(label);
    }
    FrameLabelSeq::new(labels, frame_rate, set.len())
}

/// Reduce an audio-rate sequence to video rate: each video frame takes the
/// majority label of its 4 audio frames; ties go to the earliest label in
/// the group.
pub fn downsample_labels(seq: &FrameLabelSeq) -> Result<FrameLabelSeq> {
    assert!(matches!(seq.frame_rate, FrameRate::Audio), "expected an audio-rate sequence");
    const FACTOR: usize = 4;
    if seq.len() % FACTOR != 0 {
        return Err(LabelError::NotDivisible(seq.len(), FACTOR));
    }
    let mut labels = Vec::with_capacity(seq.len() / FACTOR);
    for group in seq.labels.chunks_exact(FACTOR) {
        let mut best = group[0];
        let mut best_count = 0usize;
        for &cand in group {
            let count = group.iter().filter(|&&g| g == cand).count();
            if count > best_count {
                best = cand;
                best_count = count;
            }
        }
        labels.push(best);
    }
    FrameLabelSeq::new(labels, FrameRate::Video, seq.n_classes)
}

/// Parse tab-separated "start<TAB>end<TAB>symbol" lines (seconds).
pub fn parse_segments(text: &str) -> Result<Vec<Segment>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split('\t');
        let bad = |msg: &str| LabelError::BadSegmentLine { line: lineno + 1, msg: msg.into() };
        let start: f64 = it
            .next()
            .ok_or_else(|| bad("missing start"))?
            .parse()
            .map_err(|_| bad("bad start"))?;
        let end: f64 = it
            .next()
            .ok_or_else(|| bad("missing end"))?
            .parse()
            .map_err(|_| bad("bad end"))?;
        let symbol = it.next().ok_or_else(|| bad("missing symbol"))?.to_string();
        if end < start {
            return Err(bad("end before start"));
        }
        out.push(Segment { start, end, symbol });
    }
    Ok(out)
}

pub fn write_segments(segments: &[Segment]) -> String {
    let mut out = String::new();
    for s in segments {
        out.push_str(&format!("{:.6}\t{:.6}\t{}\n", s.start, s.end, s.symbol));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PlaceSet;

    #[test]
    fn single_segment_covers_all() {
        let places = PlaceSet::ten();
        let segs = vec![Segment::new(0.0, 1.0, "Labial")];
        let seq = align_to_frames(&segs, FrameRate::Audio, 100, &places).unwrap();
        assert!(seq.labels.iter().all(|&l| l == 4));
    }

    #[test]
    fn empty_list_is_all_silence() {
        let places = PlaceSet::ten();
        let seq = align_to_frames(&[], FrameRate::Audio, 10, &places).unwrap();
        assert!(seq.labels.iter().all(|&l| l == places.silence_index()));
    }

    #[test]
    fn two_equal_segments_split_at_frame_50() {
        // Frame centers at (t + 0.5) / 100; frame 49 center 0.495 < 0.5,
        // frame 50 center 0.505 >= 0.5.
        let places = PlaceSet::ten();
        let segs = vec![
            Segment::new(0.0, 0.5, "Low"),
            Segment::new(0.5, 1.0, "Mid"),
        ];
        let seq = align_to_frames(&segs, FrameRate::Audio, 100, &places).unwrap();
        for t in 0..50 {
            assert_eq!(seq.labels[t], 5, "frame {t}");
        }
        for t in 50..100 {
            assert_eq!(seq.labels[t], 6, "frame {t}");
        }
    }

    #[test]
    fn gaps_become_silence() {
        let places = PlaceSet::ten();
        let segs = vec![
            Segment::new(0.0, 0.2, "Low"),
            Segment::new(0.5, 1.0, "Mid"),
        ];
        let seq = align_to_frames(&segs, FrameRate::Audio, 100, &places).unwrap();
        assert_eq!(seq.labels[30], places.silence_index());
    }

    #[test]
    fn overlapping_segments_error() {
        let places = PlaceSet::ten();
        let segs = vec![
            Segment::new(0.0, 0.6, "Low"),
            Segment::new(0.5, 1.0, "Mid"),
        ];
        assert!(align_to_frames(&segs, FrameRate::Audio, 100, &places).is_err());
    }

    #[test]
    fn unknown_symbol_errors() {
        let places = PlaceSet::ten();
        let segs = vec![Segment::new(0.0, 1.0, "Sideways")];
        let err = align_to_frames(&segs, FrameRate::Audio, 100, &places).unwrap_err();
        assert!(matches!(err, LabelError::UnknownSymbol(s) if s == "Sideways"));
    }

    #[test]
    fn downsample_majority_and_ties() {
        let seq = FrameLabelSeq::new(vec![1, 1, 1, 1, 1, 1, 1, 1], FrameRate::Audio, 10).unwrap();
        let d = downsample_labels(&seq).unwrap();
        assert_eq!(d.labels, vec![1, 1]);
        assert!(matches!(d.frame_rate, FrameRate::Video));

        // Majority.
        let seq = FrameLabelSeq::new(vec![2, 2, 2, 3], FrameRate::Audio, 10).unwrap();
        assert_eq!(downsample_labels(&seq).unwrap().labels, vec![2]);

        // Tie goes to the earliest label.
        let seq = FrameLabelSeq::new(vec![2, 2, 3, 3], FrameRate::Audio, 10).unwrap();
        assert_eq!(downsample_labels(&seq).unwrap().labels, vec![2]);
        let seq = FrameLabelSeq::new(vec![3, 2, 2, 3], FrameRate::Audio, 10).unwrap();
        assert_eq!(downsample_labels(&seq).unwrap().labels, vec![3]);
    }

    #[test]
    fn downsample_requires_divisible_length() {
        let seq = FrameLabelSeq::new(vec![1, 1, 1], FrameRate::Audio, 10).unwrap();
        assert!(matches!(downsample_labels(&seq), Err(LabelError::NotDivisible(3, 4))));
    }

    #[test]
    fn segment_file_roundtrip() {
        let segs = vec![
            Segment::new(0.0, 0.25, "Low"),
            Segment::new(0.25, 0.5, "sil"),
        ];
        let text = write_segments(&segs);
        let parsed = parse_segments(&text).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0].symbol, "Low");
        assert!((parsed[1].start - 0.25).abs() < 1e-9);
    }
}
