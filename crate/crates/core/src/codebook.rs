//! Base substitution-correcting codes: loading, bundled fixtures, greedy
//! Gilbert–Varshamov construction and brute-force edit-ball oracles.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bitword::BitWord;
use crate::error::{Error, Result};
use crate::golden;

/// A finite set of distinct equal-length words. The minimum distance is
/// computed once at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    n: usize,
    words: Vec<BitWord>,
    d_min: Option<usize>,
}

impl Codebook {
    /// Builds a codebook, rejecting ragged lengths and duplicates. Order is
    /// kept as given.
    pub fn from_words(words: Vec<BitWord>) -> Result<Self> {
        let n = words.first().ok_or(Error::EmptyCodebook)?.len();
        let mut seen = HashSet::with_capacity(words.len());
        for (k, w) in words.iter().enumerate() {
            if w.len() != n {
                return Err(Error::RaggedCodebook { line: k + 1, expected: n, found: w.len() });
            }
            if !seen.insert(w) {
                return Err(Error::DuplicateWord { line: k + 1, word: w.to_string() });
            }
        }
        let d_min = exact_min_distance(&words);
        Ok(Codebook { n, words, d_min })
    }

    /// Parses the text form: one word per line, `#` comments and blank lines
    /// ignored. Line numbers in errors refer to the input text.
    pub fn parse(text: &str) -> Result<Self> {
        let mut words = Vec::new();
        let mut seen = HashSet::new();
        let mut n = None;
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let w: BitWord = line.parse()?;
            let expected = *n.get_or_insert(w.len());
            if w.len() != expected {
                return Err(Error::RaggedCodebook { line: k + 1, expected, found: w.len() });
            }
            if !seen.insert(w.clone()) {
                return Err(Error::DuplicateWord { line: k + 1, word: line.to_string() });
            }
            words.push(w);
        }
        Codebook::from_words(words)
    }

    /// Canonical text form: one word per line, trailing newline.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.words.len() * (self.n + 1));
        for w in &self.words {
            let _ = writeln!(out, "{w}");
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[BitWord] {
        &self.words
    }

    pub fn contains(&self, w: &BitWord) -> bool {
        self.words.contains(w)
    }

    pub fn min_distance(&self) -> Result<usize> {
        self.d_min.ok_or(Error::TooFewWords)
    }
}

fn exact_min_distance(words: &[BitWord]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            let d = a
                .bits()
                .iter()
                .zip(b.bits())
                .filter(|(x, y)| x != y)
                .count();
            best = Some(best.map_or(d, |cur| cur.min(d)));
        }
    }
    best
}

/// Names accepted by [`builtin_fixture`].
pub const FIXTURE_NAMES: [&str; 2] = ["hamming_7_16_3", "bch_15_32_7"];

/// The codeword columns of the bundled balancing tables.
pub fn builtin_fixture(name: &str) -> Result<Codebook> {
    let words: Vec<&str> = match name {
        "hamming_7_16_3" => golden::TABLE_I.iter().map(|r| r.word).collect(),
        "bch_15_32_7" => golden::TABLE_III.iter().map(|r| r.word).collect(),
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    let words = words
        .into_iter()
        .map(str::parse)
        .collect::<Result<Vec<BitWord>>>()?;
    Codebook::from_words(words)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    Lexicographic,
    Gray,
}

/// Greedy Gilbert–Varshamov code: sweep all `2^n` words in `ordering` and
/// admit each one at distance `≥ d` from everything admitted so far.
pub fn gv_greedy(n: usize, d: usize, ordering: Ordering) -> Result<Codebook> {
    if n > 20 {
        return Err(Error::SweepTooLarge(n));
    }
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameters(format!("gv_greedy needs n ≥ 1 and d ≥ 1 (n={n}, d={d})")));
    }
    let mut admitted: Vec<u32> = Vec::new();
    for k in 0u32..(1u32 << n) {
        let v = match ordering {
            Ordering::Lexicographic => k,
            Ordering::Gray => k ^ (k >> 1),
        };
        if admitted.iter().all(|&u| (u ^ v).count_ones() as usize >= d) {
            admitted.push(v);
        }
    }
    let words = admitted
        .into_iter()
        .map(|v| BitWord::from_bits((0..n).map(|i| v >> (n - 1 - i) & 1 == 1).collect()))
        .collect::<Result<Vec<_>>>()?;
    Codebook::from_words(words)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EditKind {
    Deletion,
    Insertion,
}

/// Two codewords whose single-edit balls share `common`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub first: BitWord,
    pub second: BitWord,
    pub common: BitWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectabilityVerdict {
    pub correctable: bool,
    pub witness: Option<Witness>,
}

/// Distinct words reachable from `w` by one edit of `kind`, sorted.
pub fn edit_ball(w: &BitWord, kind: EditKind) -> BTreeSet<BitWord> {
    let n = w.len();
    let mut out = BTreeSet::new();
    match kind {
        EditKind::Deletion => {
            if n > 1 {
                for i in 1..=n {
                    out.insert(w.delete(i).expect("index in range"));
                }
            }
        }
        EditKind::Insertion => {
            for i in 1..=n + 1 {
                for bit in [false, true] {
                    out.insert(w.insert(i, bit).expect("index in range"));
                }
            }
        }
    }
    out
}

/// Exhaustive single-edit correctability check. Codewords are visited in
/// lexicographic order and the first collision found is reported.
pub fn single_edit_correctable(words: &[BitWord], kind: EditKind) -> CorrectabilityVerdict {
    let mut sorted: Vec<&BitWord> = words.iter().collect();
    sorted.sort();
    let mut owner: HashMap<BitWord, &BitWord> = HashMap::new();
    for &w in &sorted {
        for e in edit_ball(w, kind) {
            match owner.get(&e) {
                Some(&prev) if prev != w => {
                    return CorrectabilityVerdict {
                        correctable: false,
                        witness: Some(Witness { first: prev.clone(), second: w.clone(), common: e }),
                    };
                }
                Some(_) => {}
                None => {
                    owner.insert(e, w);
                }
            }
        }
    }
    CorrectabilityVerdict { correctable: true, witness: None }
}
