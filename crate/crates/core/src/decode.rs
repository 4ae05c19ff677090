//! Decoding for balanced codes.
//!
//! A frame whose length is one short (or one long) of the code length is
//! treated as carrying a single deletion (insertion) and is repaired inside
//! the moment class. A frame of the right length goes to bounded-distance
//! substitution decoding against the base code.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::balance::{mbt_extract, BalancedCode, Scheme};
use crate::bitword::{power_of_two_positions, BitWord, ResidueSystem, Support};
use crate::codebook::{edit_ball, Codebook, EditKind};
use crate::error::{Error, Result};

/// Positions whose received values are ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ErasureSet(Support);

impl ErasureSet {
    pub fn none() -> Self {
        ErasureSet::default()
    }

    /// `{1, 2, 4, …, 2^⌊log2 n⌋}`, the flip positions of the fixed-index scheme.
    pub fn fixed_indices(n: usize) -> Self {
        ErasureSet(Support::new(power_of_two_positions(n), Some(n)).expect("powers of two are increasing"))
    }

    pub fn new(support: Support) -> Self {
        ErasureSet(support)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn support(&self) -> &Support {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    DeletionCorrected,
    InsertionCorrected,
    SubstitutionsCorrected,
    Failure,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeDetail {
    /// Positions where the received frame differed from the recovered word
    /// (substitution path only).
    pub error_positions: Vec<usize>,
    /// Candidates that survived the class/membership filter (edit path) or
    /// codewords inside the radius (substitution path).
    pub candidates: usize,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub kind: OutcomeKind,
    pub word: Option<BitWord>,
    pub original: Option<BitWord>,
    pub detail: DecodeDetail,
}

impl DecodeOutcome {
    fn failure(reason: impl Into<String>) -> Self {
        DecodeOutcome {
            kind: OutcomeKind::Failure,
            word: None,
            original: None,
            detail: DecodeDetail { reason: Some(reason.into()), ..Default::default() },
        }
    }

    pub fn is_success(&self) -> bool {
        self.kind != OutcomeKind::Failure
    }
}

fn unique_candidate(
    candidates: impl IntoIterator<Item = BitWord>,
    rs: ResidueSystem,
    code: Option<&HashSet<BitWord>>,
) -> Result<BitWord> {
    let mut hits = candidates
        .into_iter()
        .filter(|x| x.in_class(rs) && code.is_none_or(|c| c.contains(x)));
    let first = hits.next().ok_or(Error::NoCandidate)?;
    let extra = hits.count();
    if extra > 0 {
        return Err(Error::AmbiguousCandidates(extra + 1));
    }
    Ok(first)
}

/// Repairs a single deletion: tries every distinct one-bit insertion into `y`
/// and returns the unique result in the residue class (and in `code`, when
/// given). Unique whenever `m ≥ len(y) + 2`.
pub fn vt_reinsert(y: &BitWord, rs: ResidueSystem, code: Option<&HashSet<BitWord>>) -> Result<BitWord> {
    unique_candidate(edit_ball(y, EditKind::Insertion), rs, code)
}

/// Repairs a single insertion by trying every distinct one-bit deletion.
pub fn vt_delete(y: &BitWord, rs: ResidueSystem, code: Option<&HashSet<BitWord>>) -> Result<BitWord> {
    unique_candidate(edit_ball(y, EditKind::Deletion), rs, code)
}

/// Linear-time deletion repair for the full class with `m ≥ len(y) + 2`.
///
/// Inserting a 0 with `r` ones to its right raises the moment by `r`;
/// inserting a 1 with `z` zeros to its left raises it by `w + 1 + z`, where
/// `w` is the weight of `y`. Together these cover `0..=n` exactly once.
pub fn levenshtein_reinsert(y: &BitWord, rs: ResidueSystem) -> Result<BitWord> {
    let n = y.len() + 1;
    if rs.modulus() < n as u64 + 1 {
        return Err(Error::InvalidParameters(format!("modulus {} below n + 1 = {}", rs.modulus(), n + 1)));
    }
    let weight = y.weight();
    let deficit = rs.deficit(y.raw_moment()) as usize;
    if deficit > n {
        return Err(Error::NoCandidate);
    }
    let bits = y.bits();
    let (pos, bit) = if deficit <= weight {
        // leftmost slot with exactly `deficit` ones to its right
        let mut ones_right = weight;
        let mut slot = 0;
        while ones_right > deficit {
            if bits[slot] {
                ones_right -= 1;
            }
            slot += 1;
        }
        (slot + 1, false)
    } else {
        let zeros_left = deficit - weight - 1;
        let mut seen = 0;
        let mut slot = 0;
        while seen < zeros_left {
            if !bits[slot] {
                seen += 1;
            }
            slot += 1;
        }
        (slot + 1, true)
    };
    y.insert(pos, bit)
}

/// Punctured Hamming distance ignoring erased positions.
fn punctured_distance(a: &BitWord, b: &BitWord, erasures: &ErasureSet) -> usize {
    a.bits()
        .iter()
        .zip(b.bits())
        .enumerate()
        .filter(|(i, (x, y))| x != y && !erasures.contains(i + 1))
        .count()
}

/// Bounded-distance decoding: the unique codeword within punctured distance
/// `radius` of `y`. Beyond the radius this fails rather than guessing.
pub fn nearest_codeword(cb: &Codebook, y: &BitWord, erasures: &ErasureSet, radius: usize) -> Result<DecodeOutcome> {
    if y.len() != cb.n() {
        return Err(Error::LengthMismatch { left: y.len(), right: cb.n() });
    }
    let mut best: Option<(usize, &BitWord)> = None;
    let mut tied = false;
    let mut within = 0;
    for c in cb.words() {
        let d = punctured_distance(c, y, erasures);
        if d <= radius {
            within += 1;
        }
        match best {
            Some((bd, _)) if d > bd => {}
            Some((bd, _)) if d == bd => tied = true,
            _ => {
                best = Some((d, c));
                tied = false;
            }
        }
    }
    let (dist, word) = best.expect("codebook is non-empty");
    if dist > radius {
        return Err(Error::NoCodewordWithinRadius(radius));
    }
    if tied {
        return Err(Error::AmbiguousNearest(dist));
    }
    let error_positions = (1..=y.len())
        .filter(|&i| !erasures.contains(i) && y.get(i) != word.get(i))
        .collect();
    Ok(DecodeOutcome {
        kind: OutcomeKind::SubstitutionsCorrected,
        word: Some(word.clone()),
        original: None,
        detail: DecodeDetail { error_positions, candidates: within, reason: None },
    })
}

/// Everything a frame decoder needs, derived once from a [`BalancedCode`].
#[derive(Debug, Clone)]
pub struct DecodeContext {
    code: BalancedCode,
    original: Codebook,
    members: HashSet<BitWord>,
    by_balanced: HashMap<BitWord, usize>,
    by_original: HashMap<BitWord, Vec<usize>>,
    erasures: ErasureSet,
    radius: usize,
}

impl DecodeContext {
    pub fn new(code: BalancedCode) -> Result<Self> {
        let original = code.original_codebook()?;
        let members = code.entries.iter().map(|e| e.balanced.clone()).collect();
        let by_balanced = code.entries.iter().enumerate().map(|(i, e)| (e.balanced.clone(), i)).collect();
        let mut by_original: HashMap<BitWord, Vec<usize>> = HashMap::new();
        for (i, e) in code.entries.iter().enumerate() {
            by_original.entry(e.original.clone()).or_default().push(i);
        }
        let d_min = original.min_distance().ok();
        let (erasures, radius) = match code.scheme {
            Scheme::Fixed => {
                let e = ErasureSet::fixed_indices(code.n());
                let r = d_min.map_or(0, |d| d.saturating_sub(e.len() + 1) / 2);
                (e, r)
            }
            _ => (ErasureSet::none(), d_min.map_or(0, |d| (d - 1) / 2)),
        };
        Ok(DecodeContext { code, original, members, by_balanced, by_original, erasures, radius })
    }

    pub fn code(&self) -> &BalancedCode {
        &self.code
    }

    pub fn original(&self) -> &Codebook {
        &self.original
    }

    pub fn expected_n(&self) -> usize {
        self.code.n()
    }

    pub fn rs(&self) -> ResidueSystem {
        self.code.rs
    }

    /// Erasures applied on the substitution path (fixed-index scheme only).
    pub fn erasures(&self) -> &ErasureSet {
        &self.erasures
    }

    /// Substitution radius used against the base code.
    pub fn radius(&self) -> usize {
        self.radius
    }

    fn edit_outcome(&self, kind: OutcomeKind, found: Result<BitWord>) -> DecodeOutcome {
        match found {
            Ok(word) => {
                let entry = &self.code.entries[self.by_balanced[&word]];
                DecodeOutcome {
                    kind,
                    original: Some(entry.original.clone()),
                    word: Some(word),
                    detail: DecodeDetail { candidates: 1, ..Default::default() },
                }
            }
            Err(e) => DecodeOutcome::failure(e.to_string()),
        }
    }

    fn substitution_outcome(&self, received: &BitWord) -> DecodeOutcome {
        let (probe, erasures) = match self.code.scheme {
            Scheme::Mbt => match mbt_extract(received) {
                Ok(inner) => (inner, ErasureSet::none()),
                Err(e) => return DecodeOutcome::failure(e.to_string()),
            },
            _ => (received.clone(), self.erasures.clone()),
        };
        let base = match nearest_codeword(&self.original, &probe, &erasures, self.radius) {
            Ok(o) => o,
            Err(e) => return DecodeOutcome::failure(e.to_string()),
        };
        let original = base.word.expect("success carries a word");
        let Some(slots) = self.by_original.get(&original) else {
            return DecodeOutcome::failure(format!("{original} is excluded from the balanced code"));
        };
        // several entries per original only under the multi-variant policy
        let entry = slots
            .iter()
            .map(|&i| &self.code.entries[i])
            .min_by_key(|e| e.balanced.hamming_distance(received).unwrap_or(usize::MAX))
            .expect("slots are non-empty");
        let error_positions = received.diff_support(&entry.balanced).map(|s| s.indices().to_vec()).unwrap_or_default();
        DecodeOutcome {
            kind: OutcomeKind::SubstitutionsCorrected,
            word: Some(entry.balanced.clone()),
            original: Some(original),
            detail: DecodeDetail { error_positions, candidates: base.detail.candidates, reason: None },
        }
    }
}

/// Decodes one frame whose boundaries are known.
pub fn framed_decode(received: &BitWord, ctx: &DecodeContext) -> DecodeOutcome {
    let n = ctx.expected_n();
    let len = received.len();
    if len + 1 == n {
        ctx.edit_outcome(OutcomeKind::DeletionCorrected, vt_reinsert(received, ctx.rs(), Some(&ctx.members)))
    } else if len == n + 1 {
        ctx.edit_outcome(OutcomeKind::InsertionCorrected, vt_delete(received, ctx.rs(), Some(&ctx.members)))
    } else if len == n {
        ctx.substitution_outcome(received)
    } else {
        DecodeOutcome::failure(format!("out of model: received length {len}, expected {n} ± 1"))
    }
}
