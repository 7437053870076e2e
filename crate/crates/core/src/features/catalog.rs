//! The ordered catalog of the 76 selected features.
//!
//! Row order, groups, output kinds, and the per-selector membership flags
//! are fixed; selections are defined as bit masks over the four selector
//! columns plus the Spearman-collapsed union.

use super::ops::CharClass;
use crate::randtests::BitEncoding;

/// Feature group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureGroup {
    Linguistic,
    Structural,
    Statistical,
}

/// Output kind of a feature value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputKind {
    Binary,
    Integer,
    Rational,
}

/// Which statistic of the n-gram count multiset a feature reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NgramStat {
    AlphabetDiversity,
    AlphabetSize,
    ArithmeticMean,
    HarmonicMean,
    Kurtosis,
    Max,
    ShannonEntropy,
    Skewness,
    StdDev,
}

/// How a feature value is computed from a parsed domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    AdjacentDuplicatesRatio,
    /// Count of one letter (0 = 'a') over the concatenated subdomains.
    AlphabetCount(u8),
    ConsecutiveRatio(CharClass),
    ConsonantToVowelRatio,
    CharRatio(CharClass),
    MaxStreak(CharClass),
    ContainsDigits,
    StartDigitEdgeDistance,
    EndDigitEdgeDistance,
    FirstCharacterPair,
    InverseHammingDistance,
    RepeatedCharactersRatio,
    SubdomainDigitSum,
    SuffixDigitSum,
    SuffixStdDev,
    SyllableCount,
    WeightedStreaks,
    DomainNameLength,
    HexExclusiveSubdomainsRatio,
    SecondLevelLength,
    SubdomainsLength,
    SubdomainsMeanLength,
    SuffixLength,
    /// Statistic of the n-gram windows of the second-level label.
    Ngram(u8, NgramStat),
    MatrixRankTest(BitEncoding),
    LongestRunTest(BitEncoding),
    BitsEntropy,
    DeflateRatio,
}

/// Membership bit for the RFE-MDI selection.
pub const SET_RFE_MDI: u8 = 1 << 0;
/// Membership bit for the RFE-PI selection.
pub const SET_RFE_PI: u8 = 1 << 1;
/// Membership bit for the ReliefF selection.
pub const SET_RELIEFF: u8 = 1 << 2;
/// Membership bit for the MultiSURF selection.
pub const SET_MULTISURF: u8 = 1 << 3;
/// Membership bit for the Spearman-collapsed union.
pub const SET_UNION_SPEARMAN: u8 = 1 << 4;

/// One catalog row: stable id, group, output kind, computation, and the
/// selection sets the feature belongs to.
#[derive(Debug, Clone, Copy)]
pub struct FeatureSpec {
    pub id: &'static str,
    pub group: FeatureGroup,
    pub output: OutputKind,
    pub kind: FeatureKind,
    pub sets: u8,
}

use BitEncoding::{Ascii8, Wide16};
use CharClass::{Consonant, DecimalDigit, HexDigit, PrimeDigit, Vowel};
use FeatureGroup::{Linguistic, Statistical, Structural};
use FeatureKind::*;
use NgramStat::*;
use OutputKind::{Binary, Integer, Rational};

macro_rules! feat {
    ($id:literal, $group:expr, $output:expr, $kind:expr, $sets:expr) => {
        FeatureSpec { id: $id, group: $group, output: $output, kind: $kind, sets: $sets }
    };
}

/// The full catalog, in fixed row order.
pub const CATALOG: [FeatureSpec; 76] = [
    feat!("adjacent-duplicates-ratio", Linguistic, Rational, AdjacentDuplicatesRatio, 0b11001),
    feat!("alphabet-a", Linguistic, Integer, AlphabetCount(0), 0b11111),
    feat!("alphabet-b", Linguistic, Integer, AlphabetCount(1), 0b11010),
    feat!("alphabet-c", Linguistic, Integer, AlphabetCount(2), 0b11000),
    feat!("alphabet-d", Linguistic, Integer, AlphabetCount(3), 0b11100),
    feat!("alphabet-e", Linguistic, Integer, AlphabetCount(4), 0b11100),
    feat!("alphabet-f", Linguistic, Integer, AlphabetCount(5), 0b11000),
    feat!("alphabet-g", Linguistic, Integer, AlphabetCount(6), 0b11000),
    feat!("alphabet-h", Linguistic, Integer, AlphabetCount(7), 0b11000),
    feat!("alphabet-i", Linguistic, Integer, AlphabetCount(8), 0b11000),
    feat!("alphabet-j", Linguistic, Integer, AlphabetCount(9), 0b11011),
    feat!("alphabet-k", Linguistic, Integer, AlphabetCount(10), 0b11010),
    feat!("alphabet-l", Linguistic, Integer, AlphabetCount(11), 0b11001),
    feat!("alphabet-m", Linguistic, Integer, AlphabetCount(12), 0b11011),
    feat!("alphabet-n", Linguistic, Integer, AlphabetCount(13), 0b11011),
    feat!("alphabet-o", Linguistic, Integer, AlphabetCount(14), 0b11100),
    feat!("alphabet-p", Linguistic, Integer, AlphabetCount(15), 0b11000),
    feat!("alphabet-q", Linguistic, Integer, AlphabetCount(16), 0b11001),
    feat!("alphabet-r", Linguistic, Integer, AlphabetCount(17), 0b11001),
    feat!("alphabet-s", Linguistic, Integer, AlphabetCount(18), 0b11011),
    feat!("alphabet-t", Linguistic, Integer, AlphabetCount(19), 0b11001),
    feat!("alphabet-u", Linguistic, Integer, AlphabetCount(20), 0b11000),
    feat!("alphabet-v", Linguistic, Integer, AlphabetCount(21), 0b11000),
    feat!("alphabet-w", Linguistic, Integer, AlphabetCount(22), 0b11001),
    feat!("alphabet-x", Linguistic, Integer, AlphabetCount(23), 0b11001),
    feat!("alphabet-y", Linguistic, Integer, AlphabetCount(24), 0b11011),
    feat!("alphabet-z", Linguistic, Integer, AlphabetCount(25), 0b10011),
    feat!("consecutive-consonant-ratio", Linguistic, Rational, ConsecutiveRatio(Consonant), 0b10111),
    feat!("consecutive-digit-ratio", Linguistic, Rational, ConsecutiveRatio(DecimalDigit), 0b10100),
    feat!("consonant-to-vowel-ratio", Linguistic, Rational, ConsonantToVowelRatio, 0b10101),
    feat!("consonants-character-ratio", Linguistic, Rational, CharRatio(Consonant), 0b10111),
    feat!("consonants-max-streak-length", Linguistic, Integer, MaxStreak(Consonant), 0b10011),
    feat!("contains-digits", Linguistic, Binary, ContainsDigits, 0b00100),
    feat!("decimaldigits-character-ratio", Linguistic, Rational, CharRatio(DecimalDigit), 0b10111),
    feat!("decimaldigits-max-streak-length", Linguistic, Integer, MaxStreak(DecimalDigit), 0b00101),
    feat!("end-digit-edge-distance", Linguistic, Integer, EndDigitEdgeDistance, 0b01101),
    feat!("first-character-pair", Linguistic, Integer, FirstCharacterPair, 0b11011),
    feat!("hexadecimaldigits-character-ratio", Linguistic, Rational, CharRatio(HexDigit), 0b10111),
    feat!("hexadecimaldigits-max-streak-length", Linguistic, Integer, MaxStreak(HexDigit), 0b10110),
    feat!("inverse-hamming-distance", Linguistic, Rational, InverseHammingDistance, 0b11001),
    feat!("primedigits-character-ratio", Linguistic, Rational, CharRatio(PrimeDigit), 0b11001),
    feat!("primedigits-max-streak-length", Linguistic, Integer, MaxStreak(PrimeDigit), 0b10011),
    feat!("repeated-characters-ratio", Linguistic, Rational, RepeatedCharactersRatio, 0b01100),
    feat!("start-digit-edge-distance", Linguistic, Integer, StartDigitEdgeDistance, 0b11111),
    feat!("subdomain-digit-sum", Linguistic, Integer, SubdomainDigitSum, 0b11011),
    feat!("suffix-digit-sum", Linguistic, Integer, SuffixDigitSum, 0b11111),
    feat!("suffix-standard-deviation", Linguistic, Rational, SuffixStdDev, 0b11111),
    feat!("syllable-count", Linguistic, Integer, SyllableCount, 0b11101),
    feat!("vowels-character-ratio", Linguistic, Rational, CharRatio(Vowel), 0b11101),
    feat!("vowels-max-streak-length", Linguistic, Integer, MaxStreak(Vowel), 0b11111),
    feat!("weighted-streaks", Linguistic, Rational, WeightedStreaks, 0b10001),
    feat!("domain-name-length", Structural, Integer, DomainNameLength, 0b11111),
    feat!("hex-exclusive-subdomains-ratio", Structural, Rational, HexExclusiveSubdomainsRatio, 0b11101),
    feat!("second-level-length", Structural, Integer, SecondLevelLength, 0b11111),
    feat!("subdomains-length", Structural, Integer, SubdomainsLength, 0b11111),
    feat!("subdomains-mean-length", Structural, Rational, SubdomainsMeanLength, 0b11111),
    feat!("suffix-length", Structural, Integer, SuffixLength, 0b11111),
    feat!("1-gram-alphabet-diversity", Statistical, Rational, Ngram(1, AlphabetDiversity), 0b11101),
    feat!("1-gram-alphabet-size", Statistical, Integer, Ngram(1, AlphabetSize), 0b01101),
    feat!("1-gram-arithmetic-mean", Statistical, Rational, Ngram(1, ArithmeticMean), 0b00001),
    feat!("1-gram-harmonic-mean", Statistical, Rational, Ngram(1, HarmonicMean), 0b10101),
    feat!("1-gram-kurtosis", Statistical, Rational, Ngram(1, Kurtosis), 0b11000),
    feat!("1-gram-max", Statistical, Integer, Ngram(1, Max), 0b11100),
    feat!("1-gram-shannon-entropy", Statistical, Rational, Ngram(1, ShannonEntropy), 0b11101),
    feat!("1-gram-skewness", Statistical, Rational, Ngram(1, Skewness), 0b11000),
    feat!("1-gram-standard-deviation", Statistical, Rational, Ngram(1, StdDev), 0b10001),
    feat!("2-gram-alphabet-size", Statistical, Integer, Ngram(2, AlphabetSize), 0b01101),
    feat!("2-gram-shannon-entropy", Statistical, Rational, Ngram(2, ShannonEntropy), 0b01111),
    feat!("3-gram-alphabet-size", Statistical, Integer, Ngram(3, AlphabetSize), 0b01101),
    feat!("3-gram-shannon-entropy", Statistical, Rational, Ngram(3, ShannonEntropy), 0b01101),
    feat!("binary-matrix-rank-test", Statistical, Binary, MatrixRankTest(Ascii8), 0b11100),
    feat!("binary-matrix-rank-test-unicode", Statistical, Binary, MatrixRankTest(Wide16), 0b11100),
    feat!("bits-entropy", Statistical, Rational, BitsEntropy, 0b01101),
    feat!("longest-run-of-ones-test", Statistical, Binary, LongestRunTest(Ascii8), 0b11100),
    feat!("longest-run-of-ones-test-unicode", Statistical, Binary, LongestRunTest(Wide16), 0b11000),
    feat!("zlib-bits-compression-ratio", Statistical, Rational, DeflateRatio, 0b00101),
];
