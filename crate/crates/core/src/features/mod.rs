//! The feature catalog and per-domain extraction.
//!
//! Linguistic features and n-gram statistics read the concatenated
//! subdomains / second-level label, suffix features read the suffix, the
//! structural group reads the parsed parts, and `first-character-pair`
//! reads the full sanitized domain. Bit-level features encode the
//! second-level label (see [`crate::randtests`]).

mod catalog;
pub mod ops;

pub use catalog::{
    FeatureGroup, FeatureKind, FeatureSpec, NgramStat, OutputKind, CATALOG, SET_MULTISURF,
    SET_RELIEFF, SET_RFE_MDI, SET_RFE_PI, SET_UNION_SPEARMAN,
};

use crate::dataset::{FeatureMatrix, LabeledDataset};
use crate::domains::{self, ParsedDomain, SuffixDatabase};
use crate::error::FeatureError;
use crate::randtests::{
    binary_matrix_rank_test, bits_entropy, deflate_bits_compression_ratio, longest_run_of_ones_test,
    BitEncoding, BitSequence,
};
use ops::NgramStats;
use rayon::prelude::*;
use std::collections::HashSet;
use std::io::{self, Write};

/// Handle to the fixed feature catalog.
#[derive(Debug, Clone, Copy, Default)]
pub struct FeatureCatalog;

impl FeatureCatalog {
    pub fn standard() -> Self {
        FeatureCatalog
    }

    pub fn specs(&self) -> &'static [FeatureSpec] {
        &CATALOG
    }

    pub fn len(&self) -> usize {
        CATALOG.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ids(&self) -> Vec<String> {
        CATALOG.iter().map(|f| f.id.to_string()).collect()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        CATALOG.iter().position(|f| f.id == id)
    }
}

/// A named subset of the catalog, kept in catalog order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSetSelection {
    name: String,
    /// Indices into [`CATALOG`], strictly increasing.
    members: Vec<usize>,
}

impl FeatureSetSelection {
    /// The built-in selections: `rfe-mdi`, `rfe-pi`, `relieff`,
    /// `multisurf`, `union`, `intersection`, and `union-spearman`.
    pub fn named(name: &str) -> Option<Self> {
        let mask_filter: Box<dyn Fn(&FeatureSpec) -> bool> = match name {
            "rfe-mdi" => Box::new(|f: &FeatureSpec| f.sets & SET_RFE_MDI != 0),
            "rfe-pi" => Box::new(|f: &FeatureSpec| f.sets & SET_RFE_PI != 0),
            "relieff" => Box::new(|f: &FeatureSpec| f.sets & SET_RELIEFF != 0),
            "multisurf" => Box::new(|f: &FeatureSpec| f.sets & SET_MULTISURF != 0),
            "union" => Box::new(|_| true),
            "union-spearman" => Box::new(|f: &FeatureSpec| f.sets & SET_UNION_SPEARMAN != 0),
            "intersection" => {
                let all = SET_RFE_MDI | SET_RFE_PI | SET_RELIEFF | SET_MULTISURF;
                Box::new(move |f: &FeatureSpec| f.sets & all == all)
            }
            _ => return None,
        };
        let members = CATALOG
            .iter()
            .enumerate()
            .filter(|(_, f)| mask_filter(f))
            .map(|(i, _)| i)
            .collect();
        Some(FeatureSetSelection { name: name.to_string(), members })
    }

    /// Builds a selection from explicit feature ids; the result is ordered
    /// by catalog position regardless of input order.
    pub fn from_ids<I, S>(name: &str, ids: I) -> Result<Self, FeatureError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let catalog = FeatureCatalog::standard();
        let mut index_set = HashSet::new();
        for id in ids {
            let idx = catalog
                .index_of(id.as_ref())
                .ok_or_else(|| FeatureError::UnknownFeature(id.as_ref().to_string()))?;
            index_set.insert(idx);
        }
        if index_set.is_empty() {
            return Err(FeatureError::EmptySelection);
        }
        let mut members: Vec<usize> = index_set.into_iter().collect();
        members.sort_unstable();
        Ok(FeatureSetSelection { name: name.to_string(), members })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member_indices(&self) -> &[usize] {
        &self.members
    }

    pub fn member_ids(&self) -> Vec<String> {
        self.members.iter().map(|&i| CATALOG[i].id.to_string()).collect()
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.members.iter().any(|&i| CATALOG[i].id == id)
    }
}

/// One extracted numeric row, aligned with a selection's members.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    values: Vec<f64>,
}

impl FeatureVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Memoized per-domain intermediate results so that features sharing a
/// profile compute it once.
struct ExtractionContext<'a> {
    domain: &'a ParsedDomain,
    char_profile: Option<ops::CharClassProfile>,
    streaks: Option<ops::MaxStreaks>,
    duplication: Option<ops::DuplicationProfile>,
    alphabet: Option<[u32; 26]>,
    digit_edges: Option<(i64, i64)>,
    ngrams: [Option<NgramStats>; 3],
    structural: Option<ops::StructuralProfile>,
    suffix: Option<ops::SuffixStats>,
    ascii_bits: Option<BitSequence>,
    wide_bits: Option<BitSequence>,
}

impl<'a> ExtractionContext<'a> {
    fn new(domain: &'a ParsedDomain) -> Self {
        ExtractionContext {
            domain,
            char_profile: None,
            streaks: None,
            duplication: None,
            alphabet: None,
            digit_edges: None,
            ngrams: [None; 3],
            structural: None,
            suffix: None,
            ascii_bits: None,
            wide_bits: None,
        }
    }

    fn concat(&self) -> &'a str {
        &self.domain.subdomains_concat
    }

    fn char_profile(&mut self) -> Result<ops::CharClassProfile, FeatureError> {
        if self.char_profile.is_none() {
            self.char_profile = Some(ops::char_class_profile(self.concat())?);
        }
        Ok(self.char_profile.unwrap())
    }

    fn streaks(&mut self) -> Result<ops::MaxStreaks, FeatureError> {
        if self.streaks.is_none() {
            self.streaks = Some(ops::max_streaks(self.concat())?);
        }
        Ok(self.streaks.unwrap())
    }

    fn duplication(&mut self) -> Result<ops::DuplicationProfile, FeatureError> {
        if self.duplication.is_none() {
            self.duplication = Some(ops::duplication_profile(self.concat())?);
        }
        Ok(self.duplication.unwrap())
    }

    fn alphabet(&mut self) -> [u32; 26] {
        *self.alphabet.get_or_insert_with(|| ops::alphabet_counts(&self.domain.subdomains_concat))
    }

    fn digit_edges(&mut self) -> Result<(i64, i64), FeatureError> {
        if self.digit_edges.is_none() {
            self.digit_edges = Some(ops::digit_edge_distances(self.concat())?);
        }
        Ok(self.digit_edges.unwrap())
    }

    /// N-gram statistics of the second-level label; a label shorter than
    /// `n` yields the all-zero record so short domains stay classifiable.
    fn ngrams(&mut self, n: usize) -> NgramStats {
        if self.ngrams[n - 1].is_none() {
            let stats = ops::ngram_stats(&self.domain.second_level, n).unwrap_or_default();
            self.ngrams[n - 1] = Some(stats);
        }
        self.ngrams[n - 1].unwrap()
    }

    fn structural(&mut self) -> ops::StructuralProfile {
        *self.structural.get_or_insert_with(|| ops::structural_profile(self.domain))
    }

    fn suffix(&mut self) -> ops::SuffixStats {
        *self.suffix.get_or_insert_with(|| ops::suffix_stats(&self.domain.suffix))
    }

    fn bits(&mut self, encoding: BitEncoding) -> Result<&BitSequence, FeatureError> {
        let slot = match encoding {
            BitEncoding::Ascii8 => &mut self.ascii_bits,
            BitEncoding::Wide16 => &mut self.wide_bits,
        };
        if slot.is_none() {
            *slot = Some(BitSequence::from_str(&self.domain.second_level, encoding)?);
        }
        Ok(slot.as_ref().unwrap())
    }

    fn value(&mut self, kind: FeatureKind) -> Result<f64, FeatureError> {
        use FeatureKind::*;
        Ok(match kind {
            AdjacentDuplicatesRatio => self.duplication()?.adjacent_duplicates_ratio,
            AlphabetCount(letter) => self.alphabet()[letter as usize] as f64,
            ConsecutiveRatio(class) => ops::consecutive_class_ratio(self.concat(), class)?,
            ConsonantToVowelRatio => self.char_profile()?.consonant_to_vowel_ratio,
            CharRatio(class) => {
                let p = self.char_profile()?;
                match class {
                    ops::CharClass::Vowel => p.vowels_ratio,
                    ops::CharClass::Consonant => p.consonants_ratio,
                    ops::CharClass::DecimalDigit => p.decimal_digits_ratio,
                    ops::CharClass::HexDigit => p.hex_digits_ratio,
                    ops::CharClass::PrimeDigit => p.prime_digits_ratio,
                }
            }
            MaxStreak(class) => {
                let s = self.streaks()?;
                (match class {
                    ops::CharClass::Vowel => s.vowels,
                    ops::CharClass::Consonant => s.consonants,
                    ops::CharClass::DecimalDigit => s.decimal_digits,
                    ops::CharClass::HexDigit => s.hex_digits,
                    ops::CharClass::PrimeDigit => s.prime_digits,
                }) as f64
            }
            ContainsDigits => f64::from(self.char_profile()?.contains_digits),
            StartDigitEdgeDistance => self.digit_edges()?.0 as f64,
            EndDigitEdgeDistance => self.digit_edges()?.1 as f64,
            FirstCharacterPair => ops::first_character_pair(&self.domain.raw) as f64,
            InverseHammingDistance => ops::inverse_hamming_distance(&self.domain.subdomain_labels),
            RepeatedCharactersRatio => self.duplication()?.repeated_characters_ratio,
            SubdomainDigitSum => ops::digit_sum(self.concat()) as f64,
            SuffixDigitSum => self.suffix().digit_sum as f64,
            SuffixStdDev => self.suffix().std_dev,
            SyllableCount => ops::syllable_count(self.concat())? as f64,
            WeightedStreaks => ops::weighted_streaks(self.concat())?,
            DomainNameLength => self.structural().domain_name_length as f64,
            HexExclusiveSubdomainsRatio => self.structural().hex_exclusive_subdomains_ratio,
            SecondLevelLength => self.structural().second_level_length as f64,
            SubdomainsLength => self.structural().subdomains_length as f64,
            SubdomainsMeanLength => self.structural().subdomains_mean_length,
            SuffixLength => self.structural().suffix_length as f64,
            Ngram(n, stat) => {
                let s = self.ngrams(n as usize);
                match stat {
                    NgramStat::AlphabetDiversity => s.alphabet_diversity,
                    NgramStat::AlphabetSize => s.alphabet_size as f64,
                    NgramStat::ArithmeticMean => s.arithmetic_mean,
                    NgramStat::HarmonicMean => s.harmonic_mean,
                    NgramStat::Kurtosis => s.kurtosis,
                    NgramStat::Max => s.max as f64,
                    NgramStat::ShannonEntropy => s.entropy,
                    NgramStat::Skewness => s.skewness,
                    NgramStat::StdDev => s.std_dev,
                }
            }
            // Single-character labels encode to 8 bits, one short of a 3x3
            // matrix; treat that as a failing verdict rather than an error.
            MatrixRankTest(encoding) => {
                let bits = self.bits(encoding)?;
                binary_matrix_rank_test(bits).map(f64::from).unwrap_or(0.0)
            }
            LongestRunTest(encoding) => f64::from(longest_run_of_ones_test(self.bits(encoding)?)),
            BitsEntropy => bits_entropy(self.bits(BitEncoding::Ascii8)?)?,
            DeflateRatio => deflate_bits_compression_ratio(&self.domain.second_level)?,
        })
    }
}

/// Extracts the selected features of one domain, in catalog order.
pub fn extract(
    domain: &ParsedDomain,
    selection: &FeatureSetSelection,
) -> Result<FeatureVector, FeatureError> {
    if selection.is_empty() {
        return Err(FeatureError::EmptySelection);
    }
    let mut ctx = ExtractionContext::new(domain);
    let mut values = Vec::with_capacity(selection.len());
    for &idx in selection.member_indices() {
        let v = ctx.value(CATALOG[idx].kind)?;
        debug_assert!(v.is_finite(), "feature {} produced {v}", CATALOG[idx].id);
        values.push(v);
    }
    Ok(FeatureVector { values })
}

/// Parses and extracts every domain of a labeled dataset into a feature
/// matrix, in dataset order. Returns the matrix together with the total
/// extraction wall time in microseconds.
pub fn extract_matrix(
    dataset: &LabeledDataset,
    suffix_db: &SuffixDatabase,
    selection: &FeatureSetSelection,
) -> Result<(FeatureMatrix, f64), FeatureError> {
    let parsed: Result<Vec<ParsedDomain>, _> = dataset
        .domains()
        .par_iter()
        .map(|d| domains::parse(d, suffix_db).map_err(FeatureError::Domain))
        .collect();
    let parsed = parsed?;

    let started = std::time::Instant::now();
    let rows: Result<Vec<Vec<f64>>, FeatureError> = parsed
        .par_iter()
        .map(|d| extract(d, selection).map(FeatureVector::into_values))
        .collect();
    let rows = rows?;
    let elapsed_us = started.elapsed().as_secs_f64() * 1e6;

    let matrix = FeatureMatrix::from_rows(
        selection.member_ids(),
        dataset.class_names().to_vec(),
        rows,
        dataset.labels().to_vec(),
    );
    Ok((matrix, elapsed_us))
}

/// Writes the feature-vector dump: a header row of feature ids, one row per
/// domain with values rendered to 6 decimal places, and a final `label`
/// column when labels are given.
pub fn write_feature_csv<W: Write>(
    mut w: W,
    selection: &FeatureSetSelection,
    rows: &[FeatureVector],
    labels: Option<&[String]>,
) -> io::Result<()> {
    let mut header = selection.member_ids().join(",");
    if labels.is_some() {
        header.push_str(",label");
    }
    writeln!(w, "{header}")?;
    for (i, row) in rows.iter().enumerate() {
        let mut line = row
            .values()
            .iter()
            .map(|v| format!("{v:.6}"))
            .collect::<Vec<_>>()
            .join(",");
        if let Some(labels) = labels {
            line.push(',');
            line.push_str(&labels[i]);
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}
