//! Domain-name sanitization, validation, and structural decomposition.
//!
//! Every feature downstream consumes a [`ParsedDomain`]: the public suffix,
//! the second-level label, and the remaining subdomain labels of a sanitized
//! domain string. Suffixes are resolved against a bundled public-suffix
//! snapshot with longest-match-wins semantics.

use crate::error::DomainError;
use std::collections::HashSet;

/// Maximum total length of a domain name.
pub const MAX_DOMAIN_LEN: usize = 253;
/// Maximum length of a single label.
pub const MAX_LABEL_LEN: usize = 63;

const BUNDLED_SUFFIXES: &str = include_str!("../assets/suffix_list.txt");

/// Immutable set of known public suffixes, matched longest-first.
#[derive(Debug, Clone)]
pub struct SuffixDatabase {
    suffixes: HashSet<String>,
    /// Largest number of labels in any entry; bounds the match scan.
    max_labels: usize,
}

impl SuffixDatabase {
    /// Loads the bundled public-suffix snapshot.
    pub fn bundled() -> Self {
        Self::from_text(BUNDLED_SUFFIXES)
    }

    /// Parses a suffix list: one lowercase suffix per line, `#` comments
    /// and blank lines ignored.
    pub fn from_text(text: &str) -> Self {
        let mut suffixes = HashSet::new();
        let mut max_labels = 1;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            max_labels = max_labels.max(line.split('.').count());
            suffixes.insert(line.to_string());
        }
        SuffixDatabase { suffixes, max_labels }
    }

    pub fn contains(&self, suffix: &str) -> bool {
        self.suffixes.contains(suffix)
    }

    pub fn len(&self) -> usize {
        self.suffixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.suffixes.is_empty()
    }
}

/// A sanitized domain split into suffix, second-level label, and subdomains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedDomain {
    /// The sanitized full domain (lowercase, no trailing dot).
    pub raw: String,
    /// The public suffix, without a leading dot.
    pub suffix: String,
    /// The label immediately left of the suffix.
    pub second_level: String,
    /// All labels left of the suffix, leftmost first; the second-level
    /// label is the last element.
    pub subdomain_labels: Vec<String>,
    /// All subdomain labels concatenated without separators.
    pub subdomains_concat: String,
}

/// Lowercases and strips a single trailing dot. Idempotent; validity is
/// checked separately by [`validate`].
pub fn sanitize(raw: &str) -> String {
    let lower = raw.to_ascii_lowercase();
    match lower.strip_suffix('.') {
        Some(stripped) => stripped.to_string(),
        None => lower,
    }
}

/// Checks a sanitized string against the DNS shape rules used for data
/// cleaning: total length <= 253, at least two labels, label lengths in
/// 1..=63, charset `[a-z0-9_-]`, and no label starting or ending with `-`.
///
/// Underscores are accepted because real resolver logs contain underscored
/// service labels.
pub fn validate(s: &str) -> bool {
    if s.is_empty() || s.len() > MAX_DOMAIN_LEN {
        return false;
    }
    let labels: Vec<&str> = s.split('.').collect();
    if labels.len() < 2 {
        return false;
    }
    for label in labels {
        if label.is_empty() || label.len() > MAX_LABEL_LEN {
            return false;
        }
        if label.starts_with('-') || label.ends_with('-') {
            return false;
        }
        if !label.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-' || b == b'_') {
            return false;
        }
    }
    true
}

/// Splits a validated domain at the longest suffix found in `suffix_db`.
/// Unmatched domains fall back to the last label as suffix.
///
/// Fails with [`DomainError::NoSubdomain`] when the whole domain is itself
/// a public suffix, and with [`DomainError::Invalid`] when `s` does not
/// pass [`validate`].
pub fn parse(s: &str, suffix_db: &SuffixDatabase) -> Result<ParsedDomain, DomainError> {
    if !validate(s) {
        return Err(DomainError::Invalid(s.to_string()));
    }
    let labels: Vec<&str> = s.split('.').collect();
    let n = labels.len();

    if suffix_db.contains(s) {
        return Err(DomainError::NoSubdomain(s.to_string()));
    }

    // Longest match: try the suffix candidate starting at the earliest
    // label first, bounded by the longest entry in the database.
    let start_min = n.saturating_sub(suffix_db.max_labels).max(1);
    let mut split_at = n - 1;
    for start in start_min..n - 1 {
        if suffix_db.contains(&labels[start..].join(".")) {
            split_at = start;
            break;
        }
    }

    let suffix = labels[split_at..].join(".");
    let subdomain_labels: Vec<String> = labels[..split_at].iter().map(|l| l.to_string()).collect();
    let second_level = subdomain_labels
        .last()
        .ok_or_else(|| DomainError::NoSubdomain(s.to_string()))?
        .clone();
    let subdomains_concat = subdomain_labels.concat();

    Ok(ParsedDomain {
        raw: s.to_string(),
        suffix,
        second_level,
        subdomain_labels,
        subdomains_concat,
    })
}

/// Convenience: sanitize, then parse against the given database.
pub fn sanitize_and_parse(raw: &str, suffix_db: &SuffixDatabase) -> Result<ParsedDomain, DomainError> {
    parse(&sanitize(raw), suffix_db)
}
