//! The phone-to-place mapping: plain-text data file, projection, validation.

use std::collections::BTreeMap;

use ndarray::Array2;

use crate::{LabelError, LabelSet, PhoneSet, PlaceSet, Result};

/// Ships with the crate; core table plus the two marked extensions (ao, zh)
/// that complete coverage of the 39-phone CMU set.
pub const DEFAULT_MAPPING: &str = include_str!("../data/phone_to_place.txt");

/// Total mapping from phone symbols to place symbols. Entries carrying a
/// trailing `# extension` marker in the data file are tracked separately so
/// reports can distinguish them from the core table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhoneToPlaceMap {
    entries: BTreeMap<String, String>,
    extensions: Vec<String>,
}

impl PhoneToPlaceMap {
    pub fn default_table() -> Self {
        Self::parse(DEFAULT_MAPPING).expect("bundled mapping parses")
    }

    /// Parse "phone place" pairs, one per line, '#' comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut extensions = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let (body, comment) = match raw.find('#') {
                Some(pos) => (&raw[..pos], &raw[pos + 1..]),
                None => (raw, ""),
            };
            let body = body.trim();
            if body.is_empty() {
                continue;
            }
            let mut it = body.split_whitespace();
            let phone = it.next().unwrap().to_string();
            let place = it
                .next()
                .ok_or_else(|| LabelError::BadMappingLine {
                    line: lineno + 1,
                    msg: "expected \"phone place\"".into(),
                })?
                .to_string();
            if it.next().is_some() {
                return Err(LabelError::BadMappingLine {
                    line: lineno + 1,
                    msg: "trailing tokens".into(),
                });
            }
            if entries.insert(phone.clone(), place).is_some() {
                return Err(LabelError::BadMappingLine {
                    line: lineno + 1,
                    msg: format!("duplicate phone {phone:?}"),
                });
            }
            if comment.to_ascii_lowercase().contains("extension") {
                extensions.push(phone);
            }
        }
        Ok(Self { entries, extensions })
    }

    pub fn from_file(path: impl AsRef<std::path::Path>) -> std::io::Result<Result<Self>> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    pub fn get(&self, phone: &str) -> Option<&str> {
        self.entries.get(phone).map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn extensions(&self) -> &[String] {
        &self.extensions
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Per-phone place index, errors on the first unmapped phone.
    pub fn projection_vector(&self, phones: &PhoneSet, places: &PlaceSet) -> Result<Vec<usize>> {
        phones
            .symbols()
            .iter()
            .map(|p| {
                let place = self
                    .entries
                    .get(p)
                    .ok_or_else(|| LabelError::Unmapped(p.clone()))?;
                places
                    .index_of(place)
                    .ok_or_else(|| LabelError::UnknownSymbol(place.clone()))
            })
            .collect()
    }

    /// The 40 x 10 0/1 projection matrix: row per phone, single 1 at its
    /// place column.
    pub fn projection_matrix(&self, phones: &PhoneSet, places: &PlaceSet) -> Result<Array2<f64>> {
        let proj = self.projection_vector(phones, places)?;
        let mut m = Array2::zeros((phones.len(), places.len()));
        for (p, &q) in proj.iter().enumerate() {
            m[[p, q]] = 1.0;
        }
        Ok(m)
    }
}

/// Validation report: totality, image coverage, per-class membership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingReport {
    /// Phones of the phone set with no mapping entry.
    pub uncovered: Vec<String>,
    /// Mapped places that are not in the place set.
    pub bad_places: Vec<(String, String)>,
    /// Mapping entries whose phone is not in the phone set.
    pub alien_phones: Vec<String>,
    /// Core (non-extension) phone count per place, in place-set order.
    pub class_counts: Vec<usize>,
    /// Phones flagged as extensions in the mapping file.
    pub extensions: Vec<String>,
}

impl MappingReport {
    pub fn is_total(&self) -> bool {
        self.uncovered.is_empty() && self.bad_places.is_empty()
    }

    pub fn render(&self, places: &PlaceSet) -> String {
        let mut out = String::new();
        out.push_str("place class sizes (core table):\n");
        for (i, sym) in places.symbols().iter().enumerate() {
            out.push_str(&format!("  {sym}: {}\n", self.class_counts[i]));
        }
        if !self.extensions.is_empty() {
            out.push_str(&format!("extensions beyond the core table: {}\n", self.extensions.join(", ")));
        }
        if !self.uncovered.is_empty() {
            out.push_str(&format!("UNCOVERED phones: {}\n", self.uncovered.join(", ")));
        }
        if !self.bad_places.is_empty() {
            for (p, pl) in &self.bad_places {
                out.push_str(&format!("UNKNOWN place {pl:?} for phone {p:?}\n"));
            }
        }
        if !self.alien_phones.is_empty() {
            out.push_str(&format!("entries outside the phone set: {}\n", self.alien_phones.join(", ")));
        }
        out
    }
}

/// Check totality over the phone set and image coverage in the place set;
/// violations are listed in the report, never raised.
pub fn validate_mapping(
    map: &PhoneToPlaceMap,
    phones: &PhoneSet,
    places: &PlaceSet,
) -> MappingReport {
    let mut uncovered = Vec::new();
    let mut bad_places = Vec::new();
    let mut class_counts = vec![0usize; places.len()];
    for phone in phones.symbols() {
        match map.get(phone) {
            None => uncovered.push(phone.clone()),
            Some(place) => match places.index_of(place) {
                None => bad_places.push((phone.clone(), place.to_string())),
                Some(q) => {
                    if !map.extensions.iter().any(|e| e == phone) {
                        class_counts[q] += 1;
                    }
                }
            },
        }
    }
    let alien_phones = map
        .entries
        .keys()
        .filter(|p| phones.index_of(p).is_none())
        .cloned()
        .collect();
    MappingReport {
        uncovered,
        bad_places,
        alien_phones,
        class_counts,
        extensions: map.extensions.clone(),
    }
}
