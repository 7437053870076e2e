//! Character-level feature operations over sanitized domain parts.
//!
//! All string arguments are ASCII (guaranteed by `domains::validate`), so
//! byte-wise scans are exact. Character classes:
//!
//! - vowels: `aeiou`
//! - consonants: letters that are not vowels (`y` is a consonant)
//! - decimal digits: `0-9`
//! - hexadecimal characters: `0-9a-f`
//! - prime characters: characters whose base-36 value is prime
//!
//! `-`, `_`, and `.` belong to no class and have base-36 value 0, but they
//! count toward every length denominator.

use crate::error::FeatureError;
use std::collections::BTreeMap;

/// Character classes shared by ratio, streak, and run features.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharClass {
    Vowel,
    Consonant,
    DecimalDigit,
    HexDigit,
    PrimeDigit,
}

/// Base-36 character value: '0'..'9' map to 0..9, 'a'..'z' to 10..35,
/// anything else to 0.
pub fn base36_value(c: u8) -> u32 {
    match c {
        b'0'..=b'9' => (c - b'0') as u32,
        b'a'..=b'z' => (c - b'a') as u32 + 10,
        _ => 0,
    }
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn is_consonant(c: u8) -> bool {
    c.is_ascii_lowercase() && !is_vowel(c)
}

fn is_hex(c: u8) -> bool {
    matches!(c, b'0'..=b'9' | b'a'..=b'f')
}

/// Base-36 values that are prime: 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31,
/// i.e. the characters 2 3 5 7 b d h j n t v.
fn is_prime_char(c: u8) -> bool {
    matches!(base36_value(c), 2 | 3 | 5 | 7 | 11 | 13 | 17 | 19 | 23 | 29 | 31)
}

pub(crate) fn in_class(c: u8, class: CharClass) -> bool {
    match class {
        CharClass::Vowel => is_vowel(c),
        CharClass::Consonant => is_consonant(c),
        CharClass::DecimalDigit => c.is_ascii_digit(),
        CharClass::HexDigit => is_hex(c),
        CharClass::PrimeDigit => is_prime_char(c),
    }
}

/// Lengths of the maximal runs of `class` characters in `s`, in order.
fn class_runs(s: &str, class: CharClass) -> Vec<usize> {
    let mut runs = Vec::new();
    let mut current = 0usize;
    for b in s.bytes() {
        if in_class(b, class) {
            current += 1;
        } else if current > 0 {
            runs.push(current);
            current = 0;
        }
    }
    if current > 0 {
        runs.push(current);
    }
    runs
}

/// Sum of base-36 values over all characters of `s`.
pub fn digit_sum(s: &str) -> u64 {
    s.bytes().map(|b| base36_value(b) as u64).sum()
}

/// Character-class ratios and flags over a non-empty string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharClassProfile {
    pub vowels_ratio: f64,
    pub consonants_ratio: f64,
    pub decimal_digits_ratio: f64,
    pub hex_digits_ratio: f64,
    pub prime_digits_ratio: f64,
    pub contains_digits: bool,
    /// consonant count / vowel count; equals the consonant count when the
    /// string has no vowels.
    pub consonant_to_vowel_ratio: f64,
}

pub fn char_class_profile(s: &str) -> Result<CharClassProfile, FeatureError> {
    if s.is_empty() {
        return Err(FeatureError::EmptyInput);
    }
    let len = s.len() as f64;
    let mut vowels = 0u32;
    let mut consonants = 0u32;
    let mut decimals = 0u32;
    let mut hexes = 0u32;
    let mut primes = 0u32;
    for b in s.bytes() {
        if is_vowel(b) {
            vowels += 1;
        } else if is_consonant(b) {
            consonants += 1;
        }
        if b.is_ascii_digit() {
            decimals += 1;
        }
        if is_hex(b) {
            hexes += 1;
        }
        if is_prime_char(b) {
            primes += 1;
        }
    }
    let consonant_to_vowel_ratio = if vowels == 0 {
        consonants as f64
    } else {
        consonants as f64 / vowels as f64
    };
    Ok(CharClassProfile {
        vowels_ratio: vowels as f64 / len,
        consonants_ratio: consonants as f64 / len,
        decimal_digits_ratio: decimals as f64 / len,
        hex_digits_ratio: hexes as f64 / len,
        prime_digits_ratio: primes as f64 / len,
        contains_digits: decimals > 0,
        consonant_to_vowel_ratio,
    })
}

/// Longest run length per character class; 0 when the class is absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxStreaks {
    pub vowels: usize,
    pub consonants: usize,
    pub decimal_digits: usize,
    pub hex_digits: usize,
    pub prime_digits: usize,
}

pub fn max_streaks(s: &str) -> Result<MaxStreaks, FeatureError> {
    if s.is_empty() {
        return Err(FeatureError::EmptyInput);
    }
    let longest = |class| class_runs(s, class).into_iter().max().unwrap_or(0);
    Ok(MaxStreaks {
        vowels: longest(CharClass::Vowel),
        consonants: longest(CharClass::Consonant),
        decimal_digits: longest(CharClass::DecimalDigit),
        hex_digits: longest(CharClass::HexDigit),
        prime_digits: longest(CharClass::PrimeDigit),
    })
}

/// Fraction of characters of `class` that sit inside a maximal same-class
/// run of length >= 2.
pub fn consecutive_class_ratio(s: &str, class: CharClass) -> Result<f64, FeatureError> {
    if s.is_empty() {
        return Err(FeatureError::EmptyInput);
    }
    let in_runs: usize = class_runs(s, class).into_iter().filter(|&r| r >= 2).sum();
    Ok(in_runs as f64 / s.len() as f64)
}

/// Adjacent-pair and repeated-character ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuplicationProfile {
    /// Positions i with s[i] == s[i+1], divided by |s|.
    pub adjacent_duplicates_ratio: f64,
    /// Distinct characters occurring at least twice, divided by the number
    /// of distinct characters.
    pub repeated_characters_ratio: f64,
}

pub fn duplication_profile(s: &str) -> Result<DuplicationProfile, FeatureError> {
    if s.is_empty() {
        return Err(FeatureError::EmptyInput);
    }
    let bytes = s.as_bytes();
    let adjacent = bytes.windows(2).filter(|w| w[0] == w[1]).count();
    let mut counts = [0u32; 256];
    for &b in bytes {
        counts[b as usize] += 1;
    }
    let distinct = counts.iter().filter(|&&c| c > 0).count();
    let repeated = counts.iter().filter(|&&c| c >= 2).count();
    Ok(DuplicationProfile {
        adjacent_duplicates_ratio: adjacent as f64 / s.len() as f64,
        repeated_characters_ratio: repeated as f64 / distinct as f64,
    })
}

/// Occurrence count of each letter a-z.
pub fn alphabet_counts(s: &str) -> [u32; 26] {
    let mut counts = [0u32; 26];
    for b in s.bytes() {
        if b.is_ascii_lowercase() {
            counts[(b - b'a') as usize] += 1;
        }
    }
    counts
}

/// Distance of the first decimal digit from the start and of the last
/// decimal digit from the end; both -1 when no digit occurs.
pub fn digit_edge_distances(s: &str) -> Result<(i64, i64), FeatureError> {
    if s.is_empty() {
        return Err(FeatureError::EmptyInput);
    }
    let first = s.bytes().position(|b| b.is_ascii_digit());
    match first {
        None => Ok((-1, -1)),
        Some(start) => {
            let last = s.bytes().rposition(|b| b.is_ascii_digit()).unwrap();
            Ok((start as i64, (s.len() - 1 - last) as i64))
        }
    }
}

/// Packs the first two characters of `s` into 256 * code(c1) + code(c2);
/// a missing second character contributes code 0.
pub fn first_character_pair(s: &str) -> u32 {
    let bytes = s.as_bytes();
    let c1 = bytes.first().copied().unwrap_or(0) as u32;
    let c2 = bytes.get(1).copied().unwrap_or(0) as u32;
    256 * c1 + c2
}

/// 1 / (1 + H) where H is the minimum Hamming distance over all unordered
/// pairs of equal-length labels; H = 0 when fewer than two equal-length
/// labels exist.
pub fn inverse_hamming_distance(labels: &[String]) -> f64 {
    let mut min_h: Option<usize> = None;
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            if labels[i].len() != labels[j].len() {
                continue;
            }
            let h = labels[i]
                .bytes()
                .zip(labels[j].bytes())
                .filter(|(a, b)| a != b)
                .count();
            min_h = Some(min_h.map_or(h, |m| m.min(h)));
        }
    }
    1.0 / (1.0 + min_h.unwrap_or(0) as f64)
}

/// Number of maximal vowel runs.
pub fn syllable_count(s: &str) -> Result<usize, FeatureError> {
    if s.is_empty() {
        return Err(FeatureError::EmptyInput);
    }
    Ok(class_runs(s, CharClass::Vowel).len())
}

/// Sum of squared lengths of maximal consonant runs and maximal
/// decimal-digit runs, divided by |s|.
pub fn weighted_streaks(s: &str) -> Result<f64, FeatureError> {
    if s.is_empty() {
        return Err(FeatureError::EmptyInput);
    }
    let sq_sum: usize = class_runs(s, CharClass::Consonant)
        .into_iter()
        .chain(class_runs(s, CharClass::DecimalDigit))
        .map(|r| r * r)
        .sum();
    Ok(sq_sum as f64 / s.len() as f64)
}

/// Statistics over the multiset of sliding-window counts of length-`n`
/// substrings. Moments are population moments over the per-window counts;
/// the entropy is over the window probability distribution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NgramStats {
    pub alphabet_size: usize,
    pub alphabet_diversity: f64,
    pub max: usize,
    pub arithmetic_mean: f64,
    pub harmonic_mean: f64,
    pub std_dev: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub entropy: f64,
}

pub fn ngram_stats(s: &str, n: usize) -> Result<NgramStats, FeatureError> {
    assert!((1..=3).contains(&n), "n must be in 1..=3");
    if s.len() < n {
        return Err(FeatureError::TooShort { len: s.len(), need: n });
    }
    let bytes = s.as_bytes();
    // Ordered map: the accumulation order below must not depend on hash
    // seeds or extraction would not be bitwise reproducible.
    let mut counts: BTreeMap<&[u8], u64> = BTreeMap::new();
    for w in bytes.windows(n) {
        *counts.entry(w).or_insert(0) += 1;
    }
    let total = (bytes.len() - n + 1) as f64;
    let distinct = counts.len();

    let mean = total / distinct as f64;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    let mut recip_sum = 0.0;
    let mut entropy = 0.0;
    let mut max = 0u64;
    for &c in counts.values() {
        let d = c as f64 - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
        recip_sum += 1.0 / c as f64;
        let p = c as f64 / total;
        entropy -= p * p.log2();
        max = max.max(c);
    }
    m2 /= distinct as f64;
    m3 /= distinct as f64;
    m4 /= distinct as f64;

    let (skewness, kurtosis) = if m2 == 0.0 {
        (0.0, 0.0)
    } else {
        (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
    };

    Ok(NgramStats {
        alphabet_size: distinct,
        alphabet_diversity: distinct as f64 / total,
        max: max as usize,
        arithmetic_mean: mean,
        harmonic_mean: distinct as f64 / recip_sum,
        std_dev: m2.sqrt(),
        skewness,
        kurtosis,
        entropy: entropy.max(0.0),
    })
}

/// Length- and shape-based properties of a parsed domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralProfile {
    /// |raw|, dots included.
    pub domain_name_length: usize,
    pub second_level_length: usize,
    /// Sum of all subdomain label lengths, without separators.
    pub subdomains_length: usize,
    pub subdomains_mean_length: f64,
    /// |suffix|, dots inside multi-label suffixes included.
    pub suffix_length: usize,
    /// Fraction of subdomain labels consisting only of `[0-9a-f]`.
    pub hex_exclusive_subdomains_ratio: f64,
}

pub fn structural_profile(domain: &crate::domains::ParsedDomain) -> StructuralProfile {
    let subdomains_length: usize = domain.subdomain_labels.iter().map(|l| l.len()).sum();
    let n_labels = domain.subdomain_labels.len();
    let hex_exclusive = domain
        .subdomain_labels
        .iter()
        .filter(|l| l.bytes().all(is_hex))
        .count();
    StructuralProfile {
        domain_name_length: domain.raw.len(),
        second_level_length: domain.second_level.len(),
        subdomains_length,
        subdomains_mean_length: subdomains_length as f64 / n_labels as f64,
        suffix_length: domain.suffix.len(),
        hex_exclusive_subdomains_ratio: hex_exclusive as f64 / n_labels as f64,
    }
}

/// Suffix digit sum and population standard deviation of the suffix's
/// 8-bit character codes; dots are removed first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuffixStats {
    pub digit_sum: u64,
    pub std_dev: f64,
}

pub fn suffix_stats(suffix: &str) -> SuffixStats {
    let codes: Vec<f64> = suffix
        .bytes()
        .filter(|&b| b != b'.')
        .map(|b| b as f64)
        .collect();
    let sum: u64 = suffix
        .bytes()
        .filter(|&b| b != b'.')
        .map(|b| base36_value(b) as u64)
        .sum();
    let std_dev = if codes.is_empty() {
        0.0
    } else {
        let mean = codes.iter().sum::<f64>() / codes.len() as f64;
        let var = codes.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / codes.len() as f64;
        var.sqrt()
    };
    SuffixStats { digit_sum: sum, std_dev }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{parse, SuffixDatabase};

    const D0: &str = "iee-security"; // subdomains of iee-security.org
    const D1: &str = "mwkwhvkdpp"; // subdomains of mwkwhvkdpp.info

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() < 1e-4, "{a} != {b}");
    }

    #[test]
    fn base36_values() {
        assert_eq!(base36_value(b'o'), 24);
        assert_eq!(base36_value(b'r'), 27);
        assert_eq!(base36_value(b'g'), 16);
        assert_eq!(base36_value(b'7'), 7);
        assert_eq!(base36_value(b'-'), 0);
        assert_eq!(base36_value(b'_'), 0);
    }

    #[test]
    fn digit_sums() {
        assert_eq!(digit_sum(D0), 238);
        assert_eq!(digit_sum(D1), 237);
        assert_eq!(digit_sum(""), 0);
    }

    #[test]
    fn digit_sum_is_additive() {
        assert_eq!(digit_sum("abc1"), digit_sum("ab") + digit_sum("c1"));
    }

    #[test]
    fn char_profile_d0() {
        let p = char_class_profile(D0).unwrap();
        close(p.vowels_ratio, 0.5);
        close(p.consonants_ratio, 0.41667);
        close(p.hex_digits_ratio, 0.33333);
        close(p.prime_digits_ratio, 0.08333);
        close(p.consonant_to_vowel_ratio, 0.83333);
        assert!(!p.contains_digits);
    }

    #[test]
    fn char_profile_d1() {
        let p = char_class_profile(D1).unwrap();
        close(p.vowels_ratio, 0.0);
        close(p.consonants_ratio, 1.0);
        close(p.prime_digits_ratio, 0.3); // h=17, v=31, d=13 are prime
        close(p.consonant_to_vowel_ratio, 10.0);
    }

    #[test]
    fn char_profile_all_digits() {
        let p = char_class_profile("12345").unwrap();
        close(p.decimal_digits_ratio, 1.0);
        close(p.vowels_ratio, 0.0);
        assert!(p.contains_digits);
    }

    #[test]
    fn char_profile_empty_errors() {
        assert_eq!(char_class_profile("").unwrap_err(), FeatureError::EmptyInput);
    }

    #[test]
    fn streaks_d0() {
        let m = max_streaks(D0).unwrap();
        assert_eq!(m.vowels, 3); // "iee"
        assert_eq!(m.consonants, 2); // "ty"
        assert_eq!(m.hex_digits, 2); // "ee"
        assert_eq!(m.prime_digits, 1);
        assert_eq!(m.decimal_digits, 0);
    }

    #[test]
    fn streaks_d1() {
        let m = max_streaks(D1).unwrap();
        assert_eq!(m.consonants, 10);
        assert_eq!(m.prime_digits, 2); // "hv"
        assert_eq!(m.hex_digits, 1); // "d"
        assert_eq!(m.vowels, 0);
    }

    #[test]
    fn streaks_single_class() {
        let m = max_streaks("aaa").unwrap();
        assert_eq!(m.vowels, 3);
        assert_eq!(m.consonants, 0);
    }

    #[test]
    fn consecutive_ratios() {
        close(consecutive_class_ratio(D0, CharClass::Consonant).unwrap(), 0.16667);
        close(consecutive_class_ratio(D1, CharClass::Consonant).unwrap(), 1.0);
        close(consecutive_class_ratio(D0, CharClass::DecimalDigit).unwrap(), 0.0);
    }

    #[test]
    fn duplication_profiles() {
        let d = duplication_profile(D0).unwrap();
        close(d.adjacent_duplicates_ratio, 0.08333);
        close(d.repeated_characters_ratio, 0.22222); // i, e of 9 distinct
        let d = duplication_profile(D1).unwrap();
        close(d.adjacent_duplicates_ratio, 0.1);
        close(d.repeated_characters_ratio, 0.42857); // w, k, p of 7
        let d = duplication_profile("abc").unwrap();
        close(d.adjacent_duplicates_ratio, 0.0);
        close(d.repeated_characters_ratio, 0.0);
    }

    #[test]
    fn alphabet_count_values() {
        let c = alphabet_counts(D0);
        assert_eq!(c[(b'e' - b'a') as usize], 3);
        assert_eq!(c[(b'i' - b'a') as usize], 2);
        assert_eq!(c[(b'r' - b'a') as usize], 1);
        assert_eq!(c[(b'o' - b'a') as usize], 0);
        let c = alphabet_counts(D1);
        assert_eq!(c[(b'k' - b'a') as usize], 2);
        assert_eq!(c[(b'w' - b'a') as usize], 2);
        assert_eq!(c[(b'p' - b'a') as usize], 2);
        assert_eq!(c[(b'm' - b'a') as usize], 1);
        assert_eq!(c[(b'a' - b'a') as usize], 0);
        assert_eq!(alphabet_counts(""), [0; 26]);
    }

    #[test]
    fn alphabet_counts_sum_to_letter_count() {
        let s = "ab1-cd_ef";
        let letters = s.bytes().filter(|b| b.is_ascii_lowercase()).count() as u32;
        assert_eq!(alphabet_counts(s).iter().sum::<u32>(), letters);
    }

    #[test]
    fn digit_edges() {
        assert_eq!(digit_edge_distances(D0).unwrap(), (-1, -1));
        assert_eq!(digit_edge_distances("ab1cd").unwrap(), (2, 2));
        assert_eq!(digit_edge_distances("7abc").unwrap(), (0, 3));
    }

    #[test]
    fn first_pair_encoding() {
        assert_eq!(first_character_pair("iee-security.org"), 105 * 256 + 101);
        assert_eq!(first_character_pair("mwkwhvkdpp.info"), 109 * 256 + 119);
        assert_eq!(first_character_pair("a"), 97 * 256);
        // Constant prefixes map to a constant value.
        assert_eq!(first_character_pair("xxabc.com"), first_character_pair("xxzzz.net"));
    }

    #[test]
    fn inverse_hamming() {
        let one = vec!["iee-security".to_string()];
        close(inverse_hamming_distance(&one), 1.0);
        let pair = vec!["abc".to_string(), "abd".to_string()];
        close(inverse_hamming_distance(&pair), 0.5);
        let unequal = vec!["abc".to_string(), "abcd".to_string()];
        close(inverse_hamming_distance(&unequal), 1.0);
    }

    #[test]
    fn syllables() {
        assert_eq!(syllable_count(D0).unwrap(), 4); // iee, e, u, i
        assert_eq!(syllable_count("banana").unwrap(), 3);
        assert_eq!(syllable_count("bcd").unwrap(), 0);
        assert!(syllable_count("").is_err());
    }

    #[test]
    fn weighted_streak_values() {
        close(weighted_streaks(D1).unwrap(), 10.0); // 10^2 / 10
        close(weighted_streaks(D0).unwrap(), 7.0 / 12.0); // 1+1+1+4 over 12
        close(weighted_streaks("aeiou").unwrap(), 0.0);
    }

    #[test]
    fn ngram_1_d0() {
        let s = ngram_stats(D0, 1).unwrap();
        assert_eq!(s.alphabet_size, 9);
        close(s.alphabet_diversity, 0.75);
        assert_eq!(s.max, 3);
        close(s.arithmetic_mean, 1.33333);
        close(s.harmonic_mean, 1.14894);
        close(s.std_dev, 0.66667);
        close(s.skewness, 1.75);
        close(s.kurtosis, 1.5);
        close(s.entropy, 3.02206);
    }

    #[test]
    fn ngram_1_d1() {
        let s = ngram_stats(D1, 1).unwrap();
        assert_eq!(s.alphabet_size, 7);
        close(s.alphabet_diversity, 0.7);
        assert_eq!(s.max, 2);
        close(s.arithmetic_mean, 1.42857);
        close(s.harmonic_mean, 1.27273);
        close(s.std_dev, 0.49487);
        close(s.skewness, 0.28868);
        close(s.kurtosis, -1.91667);
        close(s.entropy, 2.72193);
    }

    #[test]
    #[allow(clippy::approx_constant)] // 3.32193 is the published 5-decimal value
    fn ngram_2_and_3() {
        let s = ngram_stats(D0, 2).unwrap();
        assert_eq!(s.alphabet_size, 11);
        close(s.entropy, 3.45943); // log2 11, all bigrams distinct
        let s = ngram_stats(D1, 2).unwrap();
        assert_eq!(s.alphabet_size, 9);
        close(s.entropy, 3.16993); // log2 9
        let s = ngram_stats(D0, 3).unwrap();
        assert_eq!(s.alphabet_size, 10);
        close(s.entropy, 3.32193); // log2 10
        let s = ngram_stats(D1, 3).unwrap();
        assert_eq!(s.alphabet_size, 8);
        close(s.entropy, 3.0);
    }

    #[test]
    fn ngram_too_short() {
        assert_eq!(
            ngram_stats("a", 2).unwrap_err(),
            FeatureError::TooShort { len: 1, need: 2 }
        );
    }

    #[test]
    fn ngram_single_distinct_window() {
        let s = ngram_stats("aaaa", 1).unwrap();
        assert_eq!(s.alphabet_size, 1);
        close(s.std_dev, 0.0);
        close(s.skewness, 0.0);
        close(s.kurtosis, 0.0);
        close(s.entropy, 0.0);
        close(s.harmonic_mean, 4.0);
    }

    #[test]
    fn structural_profiles() {
        let db = SuffixDatabase::bundled();
        let p = structural_profile(&parse("iee-security.org", &db).unwrap());
        assert_eq!(p.domain_name_length, 16);
        assert_eq!(p.second_level_length, 12);
        assert_eq!(p.subdomains_length, 12);
        close(p.subdomains_mean_length, 12.0);
        assert_eq!(p.suffix_length, 3);
        close(p.hex_exclusive_subdomains_ratio, 0.0);

        let p = structural_profile(&parse("mwkwhvkdpp.info", &db).unwrap());
        assert_eq!(p.domain_name_length, 15);
        assert_eq!(p.second_level_length, 10);
        assert_eq!(p.subdomains_length, 10);
        close(p.subdomains_mean_length, 10.0);
        assert_eq!(p.suffix_length, 4);

        let p = structural_profile(&parse("deadbeef.example.com", &db).unwrap());
        close(p.hex_exclusive_subdomains_ratio, 0.5);
    }

    #[test]
    fn suffix_stat_values() {
        let s = suffix_stats("org");
        assert_eq!(s.digit_sum, 67);
        close(s.std_dev, 4.64280);
        let s = suffix_stats("info");
        assert_eq!(s.digit_sum, 80);
        close(s.std_dev, 3.67423);
        let s = suffix_stats("aa");
        assert_eq!(s.digit_sum, 20);
        close(s.std_dev, 0.0);
    }
}
