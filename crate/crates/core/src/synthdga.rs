//! Deterministic synthetic corpus generator.
//!
//! The families are caricatures of common DGA styles (arithmetic streams,
//! hex streams, wordlist concatenation, constant prefixes) plus a benign
//! class built by applying typing errors to real-looking names. Generation
//! is a pure function of (family spec, index), so corpora are reproducible
//! and trivially parallel.

use crate::dataset::LabeledDataset;
use crate::error::SynthError;
use crate::util::{derive_seed, splitmix64};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::sync::OnceLock;

const WORDLIST: &str = include_str!("../assets/wordlist.txt");
const BENIGN_NAMES: &str = include_str!("../assets/benign_names.txt");

fn asset_lines(text: &'static str) -> Vec<&'static str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn words() -> &'static [&'static str] {
    static WORDS: OnceLock<Vec<&'static str>> = OnceLock::new();
    WORDS.get_or_init(|| asset_lines(WORDLIST))
}

fn benign_names() -> &'static [&'static str] {
    static NAMES: OnceLock<Vec<&'static str>> = OnceLock::new();
    NAMES.get_or_init(|| asset_lines(BENIGN_NAMES))
}

/// Generator style of one synthetic family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Seeded linear-congruential stream mapped to `[a-z]`.
    Arithmetic,
    /// Seeded stream mapped to `[0-9a-f]`.
    Hex,
    /// Two or three words concatenated from the bundled word list.
    Wordlist,
    /// Constant prefix followed by a hex tail.
    FixedPrefix,
    /// Single-character drop/duplicate/transpose on bundled benign names.
    BenignTypo,
}

/// Specification of one synthetic domain family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub name: String,
    pub kind: FamilyKind,
    /// Second-level length bounds for the stream-based kinds.
    pub min_length: usize,
    pub max_length: usize,
    pub suffixes: Vec<String>,
    /// Only used by `FixedPrefix`.
    #[serde(default)]
    pub prefix: String,
    /// Character set for `Arithmetic` streams; defaults to `a-z`.
    #[serde(default)]
    pub alphabet: Option<String>,
    pub seed: u64,
}

/// Knuth's MMIX linear congruential step.
struct Lcg {
    state: u64,
}

impl Lcg {
    fn new(seed: u64) -> Self {
        Lcg { state: splitmix64(seed) }
    }

    fn next(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.state >> 33
    }

    fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }
}

fn typo(name: &str, stream: &mut Lcg) -> String {
    let bytes = name.as_bytes();
    let mut out = bytes.to_vec();
    match stream.below(3) {
        // drop one character
        0 => {
            let pos = stream.below(out.len() as u64) as usize;
            out.remove(pos);
        }
        // duplicate one character
        1 => {
            let pos = stream.below(out.len() as u64) as usize;
            out.insert(pos, out[pos]);
        }
        // transpose two adjacent characters
        _ => {
            let pos = stream.below((out.len() - 1) as u64) as usize;
            out.swap(pos, pos + 1);
        }
    }
    String::from_utf8(out).expect("ascii input stays ascii")
}

/// The domain a family produces at `index`; pure in `(spec, index)`.
pub fn domain_at(spec: &FamilySpec, index: u64) -> String {
    let mut stream = Lcg::new(derive_seed(spec.seed, index));
    let span = (spec.max_length - spec.min_length + 1) as u64;
    let length = spec.min_length + stream.below(span) as usize;

    let label = match spec.kind {
        FamilyKind::Arithmetic => match &spec.alphabet {
            Some(alphabet) => {
                let bytes = alphabet.as_bytes();
                (0..length)
                    .map(|_| char::from(bytes[stream.below(bytes.len() as u64) as usize]))
                    .collect()
            }
            None => (0..length)
                .map(|_| char::from(b'a' + stream.below(26) as u8))
                .collect(),
        },
        FamilyKind::Hex => (0..length)
            .map(|_| char::from(b"0123456789abcdef"[stream.below(16) as usize]))
            .collect(),
        FamilyKind::Wordlist => {
            let words = words();
            let n_words = 2 + stream.below(2) as usize;
            let mut label = String::new();
            for _ in 0..n_words {
                label.push_str(words[stream.below(words.len() as u64) as usize]);
            }
            label
        }
        FamilyKind::FixedPrefix => {
            let tail = length.saturating_sub(spec.prefix.len()).max(1);
            let mut label = spec.prefix.clone();
            for _ in 0..tail {
                label.push(char::from(b"0123456789abcdef"[stream.below(16) as usize]));
            }
            label
        }
        FamilyKind::BenignTypo => {
            let names = benign_names();
            let name = names[stream.below(names.len() as u64) as usize];
            let label = typo(name, &mut stream);
            // A quarter of benign NXDs carry a service subdomain.
            match stream.below(8) {
                0 => return format!("www.{label}.{}", pick_suffix(spec, &mut stream)),
                1 => return format!("mail.{label}.{}", pick_suffix(spec, &mut stream)),
                _ => label,
            }
        }
    };
    let suffix = pick_suffix(spec, &mut stream);
    format!("{label}.{suffix}")
}

fn pick_suffix<'a>(spec: &'a FamilySpec, stream: &mut Lcg) -> &'a str {
    &spec.suffixes[stream.below(spec.suffixes.len() as u64) as usize]
}

/// Attempt budget per requested domain before generation gives up.
const ATTEMPT_FACTOR: u64 = 64;

/// Generates `count` unique domains, skipping any that collide with
/// `taken` (shared across families for global deduplication).
fn generate_unique(
    spec: &FamilySpec,
    count: usize,
    taken: &mut HashSet<String>,
) -> Result<Vec<String>, SynthError> {
    let mut out = Vec::with_capacity(count);
    let budget = count as u64 * ATTEMPT_FACTOR + 4096;
    let mut index = 0u64;
    while out.len() < count {
        if index >= budget {
            return Err(SynthError::ExhaustedSpace {
                family: spec.name.clone(),
                produced: out.len(),
                wanted: count,
            });
        }
        let domain = domain_at(spec, index);
        index += 1;
        debug_assert!(crate::domains::validate(&domain), "generated invalid {domain}");
        if taken.insert(domain.clone()) {
            out.push(domain);
        }
    }
    Ok(out)
}

/// Generates `count` unique domains for one family.
pub fn generate(spec: &FamilySpec, count: usize) -> Result<Vec<String>, SynthError> {
    let mut taken = HashSet::new();
    generate_unique(spec, count, &mut taken)
}

/// Builds a labeled corpus: one class per family, globally deduplicated.
/// The corpus seed perturbs every family seed, so different corpus seeds
/// give disjoint-looking data with the same family shapes.
pub fn build_corpus(
    specs: &[FamilySpec],
    per_family: usize,
    seed: u64,
) -> Result<LabeledDataset, SynthError> {
    if per_family < 10 {
        return Err(SynthError::TooFewPerFamily(per_family));
    }
    {
        let mut names = HashSet::new();
        for spec in specs {
            if !names.insert(&spec.name) {
                return Err(SynthError::DuplicateFamily(spec.name.clone()));
            }
        }
    }
    let mut taken = HashSet::new();
    let mut pairs = Vec::with_capacity(specs.len() * per_family);
    for spec in specs {
        let mut seeded = spec.clone();
        seeded.seed = derive_seed(seed, spec.seed);
        for domain in generate_unique(&seeded, per_family, &mut taken)? {
            pairs.push((domain, spec.name.clone()));
        }
    }
    Ok(LabeledDataset::from_pairs(pairs))
}

/// The five pinned families used throughout tests and benchmarks: four
/// malicious caricatures plus the benign class.
pub fn pinned_families() -> Vec<FamilySpec> {
    vec![
        FamilySpec {
            name: "rotalpha".into(),
            kind: FamilyKind::Arithmetic,
            min_length: 12,
            max_length: 18,
            suffixes: vec!["com".into(), "net".into(), "biz".into()],
            prefix: String::new(),
            alphabet: None,
            seed: 0xA1,
        },
        FamilySpec {
            name: "hexstream".into(),
            kind: FamilyKind::Hex,
            min_length: 12,
            max_length: 16,
            suffixes: vec!["info".into(), "com".into()],
            prefix: String::new(),
            alphabet: None,
            seed: 0xB2,
        },
        FamilySpec {
            name: "wordcat".into(),
            kind: FamilyKind::Wordlist,
            min_length: 8,
            max_length: 24,
            suffixes: vec!["net".into(), "org".into()],
            prefix: String::new(),
            alphabet: None,
            seed: 0xC3,
        },
        FamilySpec {
            name: "xxhex".into(),
            kind: FamilyKind::FixedPrefix,
            min_length: 10,
            max_length: 14,
            suffixes: vec!["top".into(), "xyz".into()],
            prefix: "xx".into(),
            alphabet: None,
            seed: 0xD4,
        },
        FamilySpec {
            name: "benign".into(),
            kind: FamilyKind::BenignTypo,
            min_length: 4,
            max_length: 24,
            suffixes: vec!["com".into(), "org".into(), "de".into(), "co.uk".into()],
            prefix: String::new(),
            alphabet: None,
            seed: 0xE5,
        },
    ]
}

/// The pinned five-family corpus at a given size per family.
pub fn pinned_corpus(per_family: usize, seed: u64) -> Result<LabeledDataset, SynthError> {
    build_corpus(&pinned_families(), per_family, seed)
}
