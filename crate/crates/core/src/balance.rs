//! Moment balancing schemes.
//!
//! Every scheme maps codewords of a substitution-correcting code onto words
//! whose moment is `a (mod m)`, which makes the image a single
//! insertion/deletion correcting code when `m ≥ n + 1`:
//!
//! * [`mfmb_construct`]: flip a minimal number of bits at arbitrary indices.
//! * [`ofmb_construct`]: one flip at most, keeping the largest residue class.
//! * [`fixed_construct`]: flips confined to positions `2^0, 2^1, …`, which the
//!   decoder treats as erasures.
//! * [`mbt_construct`]: the systematic template with balancing bits inserted
//!   at the power-of-two positions.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::bitword::{floor_log2, power_of_two_positions, BitWord, ResidueSystem, Support};
use crate::codebook::Codebook;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "MFMB")]
    Mfmb,
    #[serde(rename = "OFMB")]
    Ofmb,
    #[serde(rename = "FIXED")]
    Fixed,
    #[serde(rename = "MBT")]
    Mbt,
}

/// How many balanced variants a codeword may contribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantPolicy {
    /// One canonical balanced word per codeword.
    Single,
    /// Every minimal-size variant. Distance guarantees do not apply.
    Multi,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedEntry {
    pub original: BitWord,
    pub balanced: BitWord,
    pub support: Support,
}

/// Output of a balancing scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedCode {
    pub scheme: Scheme,
    pub rs: ResidueSystem,
    pub policy: VariantPolicy,
    pub entries: Vec<BalancedEntry>,
    /// Codewords dropped because they could not be balanced within budget
    /// (MFMB) or fell outside the kept residue class (OFMB).
    pub excluded: Vec<BitWord>,
    pub d_min_balanced: Option<usize>,
}

impl BalancedCode {
    fn assemble(
        scheme: Scheme,
        rs: ResidueSystem,
        policy: VariantPolicy,
        entries: Vec<BalancedEntry>,
        excluded: Vec<BitWord>,
    ) -> Result<Self> {
        let mut seen = HashSet::with_capacity(entries.len());
        for e in &entries {
            if !seen.insert(&e.balanced) {
                return Err(Error::Collision(format!("{} produced twice", e.balanced)));
            }
        }
        let d_min_balanced = min_distance_of(entries.iter().map(|e| &e.balanced));
        Ok(BalancedCode { scheme, rs, policy, entries, excluded, d_min_balanced })
    }

    /// Length of the balanced words.
    pub fn n(&self) -> usize {
        self.entries
            .first()
            .map(|e| e.balanced.len())
            .unwrap_or_else(|| self.excluded.first().map_or(0, BitWord::len))
    }

    pub fn balanced_words(&self) -> Vec<BitWord> {
        self.entries.iter().map(|e| e.balanced.clone()).collect()
    }

    /// Largest number of flips (or balancing ones, for MBT) used by an entry.
    pub fn max_support(&self) -> usize {
        self.entries.iter().map(|e| e.support.len()).max().unwrap_or(0)
    }

    /// The base code: every distinct original, entries first, then excluded
    /// words, in first-seen order.
    pub fn original_codebook(&self) -> Result<Codebook> {
        let mut seen = HashSet::new();
        let words: Vec<BitWord> = self
            .entries
            .iter()
            .map(|e| &e.original)
            .chain(&self.excluded)
            .filter(|w| seen.insert(*w))
            .cloned()
            .collect();
        Codebook::from_words(words)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(BalancedCodeRecord::from(self)).expect("record serializes")
    }

    /// Parses and validates a serialized balanced code. Every structural
    /// invariant is rechecked, so the input may be untrusted.
    pub fn from_json(text: &str) -> Result<Self> {
        let rec: BalancedCodeRecord =
            serde_json::from_str(text).map_err(|e| Error::MalformedBalancedCode(e.to_string()))?;
        rec.try_into()
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<Self> {
        let rec: BalancedCodeRecord =
            serde_json::from_value(value).map_err(|e| Error::MalformedBalancedCode(e.to_string()))?;
        rec.try_into()
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::MalformedBalancedCode(msg));
        let n = self.n();
        let k = self.entries.first().map(|e| e.original.len());
        for e in &self.entries {
            if e.balanced.len() != n || Some(e.original.len()) != k {
                return bad("ragged entry lengths".into());
            }
            if !e.balanced.in_class(self.rs) {
                return bad(format!("{} is not in the residue class", e.balanced));
            }
            match self.scheme {
                Scheme::Mbt => {
                    let layout = MbtLayout::for_output_len(n)?;
                    if layout.code_positions.len() != e.original.len() {
                        return bad(format!("original length {} does not fit an MBT word of length {n}", e.original.len()));
                    }
                    if mbt_extract(&e.balanced)? != e.original {
                        return bad(format!("{} does not carry {}", e.balanced, e.original));
                    }
                    let ones: Vec<usize> =
                        layout.balancing_positions.iter().copied().filter(|&p| e.balanced.get(p) == Ok(true)).collect();
                    if e.support.indices() != ones.as_slice() {
                        return bad(format!("support of {} does not match its balancing ones", e.balanced));
                    }
                }
                _ => {
                    if e.original.diff_support(&e.balanced)? != e.support {
                        return bad(format!("support of {} does not match its original", e.balanced));
                    }
                    if self.scheme == Scheme::Fixed {
                        let fixed = Support::new(power_of_two_positions(n), None)?;
                        if !e.support.is_subset_of(&fixed) {
                            return bad(format!("fixed-index support {} leaves the fixed positions", e.support));
                        }
                    }
                }
            }
        }
        for w in &self.excluded {
            if Some(w.len()) != k && k.is_some() {
                return bad("excluded word has the wrong length".into());
            }
        }
        let recomputed = Self::assemble(self.scheme, self.rs, self.policy, self.entries.clone(), vec![])?;
        if recomputed.d_min_balanced != self.d_min_balanced {
            return bad(format!(
                "recorded d_min_balanced {:?} but words give {:?}",
                self.d_min_balanced, recomputed.d_min_balanced
            ));
        }
        Ok(())
    }
}

/// Wire form of [`BalancedCode`].
#[derive(Serialize, Deserialize)]
struct BalancedCodeRecord {
    scheme: Scheme,
    m: u64,
    a: u64,
    #[serde(default = "default_policy")]
    variant_policy: VariantPolicy,
    entries: Vec<BalancedEntry>,
    excluded: Vec<BitWord>,
    d_min_balanced: Option<usize>,
}

fn default_policy() -> VariantPolicy {
    VariantPolicy::Single
}

impl From<&BalancedCode> for BalancedCodeRecord {
    fn from(b: &BalancedCode) -> Self {
        BalancedCodeRecord {
            scheme: b.scheme,
            m: b.rs.modulus(),
            a: b.rs.target(),
            variant_policy: b.policy,
            entries: b.entries.clone(),
            excluded: b.excluded.clone(),
            d_min_balanced: b.d_min_balanced,
        }
    }
}

impl TryFrom<BalancedCodeRecord> for BalancedCode {
    type Error = Error;

    fn try_from(r: BalancedCodeRecord) -> Result<Self> {
        if r.entries.is_empty() {
            return Err(Error::MalformedBalancedCode("no entries".into()));
        }
        let code = BalancedCode {
            scheme: r.scheme,
            rs: ResidueSystem::new(r.m, r.a)?,
            policy: r.variant_policy,
            entries: r.entries,
            excluded: r.excluded,
            d_min_balanced: r.d_min_balanced,
        };
        code.validate()?;
        Ok(code)
    }
}

fn min_distance_of<'a>(words: impl Iterator<Item = &'a BitWord>) -> Option<usize> {
    let words: Vec<&BitWord> = words.collect();
    let mut best = None;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            let d = a.hamming_distance(b).expect("equal lengths");
            best = Some(best.map_or(d, |cur: usize| cur.min(d)));
        }
    }
    best
}

/// All minimal flip sets reaching the target residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipSearchResult {
    /// `None` when no support of size `≤ k_max` works.
    pub minimal_size: Option<usize>,
    /// Every support of the minimal size, lexicographically sorted.
    pub supports: Vec<Support>,
}

impl FlipSearchResult {
    /// Smallest cardinality, then lexicographically smallest.
    pub fn canonical(&self) -> Option<&Support> {
        self.supports.first()
    }
}

/// Bitset over residues `0..m`.
#[derive(Clone)]
struct ResidueSet(Vec<u64>);

impl ResidueSet {
    fn empty(m: usize) -> Self {
        ResidueSet(vec![0; m.div_ceil(64)])
    }
    fn insert(&mut self, r: usize) {
        self.0[r / 64] |= 1 << (r % 64);
    }
    fn contains(&self, r: usize) -> bool {
        self.0[r / 64] >> (r % 64) & 1 == 1
    }
    fn union_shifted(&mut self, other: &ResidueSet, shift: usize, m: usize) {
        for r in 0..m {
            if other.contains(r) {
                self.insert((r + shift) % m);
            }
        }
    }
}

/// Finds every smallest set of positions whose inversion moves `c` into the
/// residue class, searching sizes up to `k_max`.
///
/// Table `reach[i][k]` holds the residue offsets reachable by flipping exactly
/// `k` of the first `i` positions; supports are recovered by walking the table
/// backwards. Work is `O(n · m · k_max)` plus output size. Intended for
/// `m > n`; smaller moduli still work but the balancing guarantees lapse.
pub fn min_flip_sets(c: &BitWord, rs: ResidueSystem, k_max: usize) -> FlipSearchResult {
    let n = c.len();
    let m = rs.modulus() as usize;
    let k_max = k_max.min(n);
    let need = rs.deficit(c.raw_moment()) as usize;
    let deltas: Vec<usize> = (1..=n).map(|i| c.flip_delta(i, rs).expect("in range") as usize).collect();

    let mut reach: Vec<Vec<ResidueSet>> = Vec::with_capacity(n + 1);
    let mut base = vec![ResidueSet::empty(m); k_max + 1];
    base[0].insert(0);
    reach.push(base);
    for i in 1..=n {
        let prev = &reach[i - 1];
        let mut row = prev.clone();
        for k in 1..=k_max {
            row[k].union_shifted(&prev[k - 1], deltas[i - 1], m);
        }
        reach.push(row);
    }

    let Some(size) = (0..=k_max).find(|&k| reach[n][k].contains(need)) else {
        return FlipSearchResult { minimal_size: None, supports: vec![] };
    };

    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(size);
    collect_supports(&reach, &deltas, m, n, size, need, &mut stack, &mut out);
    let mut supports: Vec<Support> = out
        .into_iter()
        .map(|mut v| {
            v.reverse();
            Support::new(v, Some(n)).expect("walk yields increasing positions")
        })
        .collect();
    supports.sort();
    FlipSearchResult { minimal_size: Some(size), supports }
}

#[allow(clippy::too_many_arguments)]
fn collect_supports(
    reach: &[Vec<ResidueSet>],
    deltas: &[usize],
    m: usize,
    i: usize,
    k: usize,
    r: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if i == 0 {
        if k == 0 && r == 0 {
            out.push(stack.clone());
        }
        return;
    }
    if reach[i - 1][k].contains(r) {
        collect_supports(reach, deltas, m, i - 1, k, r, stack, out);
    }
    if k > 0 {
        let before = (r + m - deltas[i - 1] % m) % m;
        if reach[i - 1][k - 1].contains(before) {
            stack.push(i);
            collect_supports(reach, deltas, m, i - 1, k - 1, before, stack, out);
            stack.pop();
        }
    }
}

/// Variable-index multiple-flip balancing.
///
/// Words whose minimal flip count exceeds `budget` are excluded. Under
/// [`VariantPolicy::Single`] each remaining word is balanced by its canonical
/// minimal support and `2·budget < d_min` is required, so the balanced words
/// stay distinct with `d_min' ≥ d_min − 2·budget`. Under
/// [`VariantPolicy::Multi`] every minimal support contributes an entry.
pub fn mfmb_construct(cb: &Codebook, rs: ResidueSystem, budget: usize, policy: VariantPolicy) -> Result<BalancedCode> {
    require_modulus_above_len(rs, cb.n())?;
    if policy == VariantPolicy::Single {
        if let Ok(d_min) = cb.min_distance() {
            if 2 * budget >= d_min {
                return Err(Error::BudgetTooLarge { budget, d_min });
            }
        }
    }
    let mut entries = Vec::new();
    let mut excluded = Vec::new();
    for c in cb.words() {
        let found = min_flip_sets(c, rs, budget);
        if found.minimal_size.is_none() {
            excluded.push(c.clone());
            continue;
        }
        let chosen: Vec<&Support> = match policy {
            VariantPolicy::Single => found.canonical().into_iter().collect(),
            VariantPolicy::Multi => found.supports.iter().collect(),
        };
        for s in chosen {
            entries.push(BalancedEntry { original: c.clone(), balanced: c.flip(s)?, support: s.clone() });
        }
    }
    BalancedCode::assemble(Scheme::Mfmb, rs, policy, entries, excluded)
}

/// Representative of one residue class among `c` and its one-bit flips.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRep {
    pub word: BitWord,
    pub support: Support,
}

/// Groups `c` and its `n` single-bit flips by moment mod `m`, keeping one
/// word per residue: `c` itself for its own residue, otherwise the flip with
/// the smallest index. At least `⌈n/2⌉ + 1` residues appear when `m > n`.
pub fn one_flip_classes(c: &BitWord, m: u64) -> Result<BTreeMap<u64, ClassRep>> {
    let rs = ResidueSystem::new(m, 0)?;
    require_modulus_above_len(rs, c.len())?;
    let sigma = c.moment(rs);
    let mut classes = BTreeMap::new();
    classes.insert(sigma, ClassRep { word: c.clone(), support: Support::empty() });
    for i in 1..=c.len() {
        let r = (sigma + c.flip_delta(i, rs)?) % m;
        classes.entry(r).or_insert_with(|| {
            let support = Support::new(vec![i], None).expect("single index");
            ClassRep { word: c.flip(&support).expect("in range"), support }
        });
    }
    Ok(classes)
}

/// One-flip balancing with `m = n + 1`: pool one representative per residue
/// from every codeword and keep the largest residue class (ties go to the
/// smallest residue).
pub fn ofmb_construct(cb: &Codebook) -> Result<BalancedCode> {
    let d_min = cb.min_distance()?;
    if d_min < 3 {
        return Err(Error::InvalidParameters(format!("one-flip balancing needs d_min ≥ 3, got {d_min}")));
    }
    let m = cb.n() as u64 + 1;
    let mut pool: HashMap<BitWord, usize> = HashMap::new();
    let mut by_residue: BTreeMap<u64, Vec<(usize, ClassRep)>> = BTreeMap::new();
    for (idx, c) in cb.words().iter().enumerate() {
        for (r, rep) in one_flip_classes(c, m)? {
            if let Some(&other) = pool.get(&rep.word) {
                return Err(Error::Collision(format!(
                    "{} reachable from both {} and {}",
                    rep.word,
                    cb.words()[other],
                    c
                )));
            }
            pool.insert(rep.word.clone(), idx);
            by_residue.entry(r).or_default().push((idx, rep));
        }
    }
    let (&a, _) = by_residue
        .iter()
        .max_by(|(ra, va), (rb, vb)| va.len().cmp(&vb.len()).then(rb.cmp(ra)))
        .expect("codebook is non-empty");
    let class = by_residue.remove(&a).unwrap_or_default();
    let mut kept = vec![false; cb.len()];
    let entries = class
        .into_iter()
        .map(|(idx, rep)| {
            kept[idx] = true;
            BalancedEntry { original: cb.words()[idx].clone(), balanced: rep.word, support: rep.support }
        })
        .collect();
    let excluded = cb.words().iter().zip(&kept).filter(|(_, &k)| !k).map(|(w, _)| w.clone()).collect();
    BalancedCode::assemble(Scheme::Ofmb, ResidueSystem::new(m, a)?, VariantPolicy::Single, entries, excluded)
}

/// `⌈M(⌈n/2⌉+1)/(n+1)⌉`, the guaranteed one-flip code size.
pub fn ofmb_guaranteed_size(n: usize, m_words: usize) -> usize {
    (m_words * (n.div_ceil(2) + 1)).div_ceil(n + 1)
}

/// Lexicographically ordered `k`-combinations of `0..len`.
fn combinations(len: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if k <= len { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut advanced = false;
        for j in (0..k).rev() {
            if next[j] < len - k + j {
                next[j] += 1;
                for t in j + 1..k {
                    next[t] = next[t - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        current = advanced.then_some(next);
        Some(out)
    })
}

/// Smallest, then lexicographically first, subset of `positions` whose
/// inversion puts `x` in the residue class.
fn balance_at_positions(x: &BitWord, positions: &[usize], rs: ResidueSystem) -> Result<Option<Support>> {
    let m = rs.modulus();
    let need = rs.deficit(x.raw_moment());
    let deltas = positions.iter().map(|&p| x.flip_delta(p, rs)).collect::<Result<Vec<_>>>()?;
    for k in 0..=positions.len() {
        for combo in combinations(positions.len(), k) {
            if combo.iter().map(|&j| deltas[j]).sum::<u64>() % m == need {
                let idx = combo.into_iter().map(|j| positions[j]).collect();
                return Ok(Some(Support::new(idx, Some(x.len()))?));
            }
        }
    }
    Ok(None)
}

fn require_fixed_window(rs: ResidueSystem, n: usize) -> Result<()> {
    let cap = 1u64 << (floor_log2(n) + 1);
    let m = rs.modulus();
    if m <= n as u64 || m > cap {
        return Err(Error::InvalidParameters(format!("need {n} < m ≤ {cap}, got m = {m}")));
    }
    Ok(())
}

fn require_modulus_above_len(rs: ResidueSystem, n: usize) -> Result<()> {
    if rs.modulus() <= n as u64 {
        return Err(Error::InvalidParameters(format!("modulus {} must exceed word length {n}", rs.modulus())));
    }
    Ok(())
}

/// Balances `c` by flipping only positions `{1, 2, 4, …, 2^⌊log2 n⌋}`.
/// Requires `n < m ≤ 2^(⌊log2 n⌋+1)`, under which a subset always exists.
pub fn fixed_index_balance(c: &BitWord, rs: ResidueSystem) -> Result<(BitWord, Support)> {
    require_fixed_window(rs, c.len())?;
    let fixed = power_of_two_positions(c.len());
    let support = balance_at_positions(c, &fixed, rs)?.ok_or(Error::NoBalancingSubset)?;
    Ok((c.flip(&support)?, support))
}

pub fn fixed_construct(cb: &Codebook, rs: ResidueSystem) -> Result<BalancedCode> {
    let entries = cb
        .words()
        .iter()
        .map(|c| {
            let (balanced, support) = fixed_index_balance(c, rs)?;
            Ok(BalancedEntry { original: c.clone(), balanced, support })
        })
        .collect::<Result<Vec<_>>>()?;
    BalancedCode::assemble(Scheme::Fixed, rs, VariantPolicy::Single, entries, vec![])
}

/// Position layout of the moment balancing template for one output length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MbtLayout {
    pub n: usize,
    pub balancing_positions: Vec<usize>,
    pub code_positions: Vec<usize>,
}

impl MbtLayout {
    pub fn for_output_len(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameters(format!("MBT output length {n} leaves no code positions")));
        }
        let balancing_positions = power_of_two_positions(n);
        let code_positions = (1..=n).filter(|p| !p.is_power_of_two()).collect();
        Ok(MbtLayout { n, balancing_positions, code_positions })
    }

    /// Shortest output length carrying `k` code bits, i.e. the smallest `n`
    /// with `n − ⌊log2 n⌋ − 1 = k`.
    pub fn for_code_len(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameters("MBT needs at least one code bit".into()));
        }
        let mut n = k + 1;
        while n - floor_log2(n) as usize - 1 < k {
            n += 1;
        }
        Self::for_output_len(n)
    }
}

/// Systematic template encoding: code bits at the non-power-of-two
/// positions, balancing bits at `{1, 2, 4, …}` chosen with the fewest ones
/// (ties to the smallest positions).
pub fn mbt_encode(c: &BitWord, rs: ResidueSystem) -> Result<BitWord> {
    let layout = MbtLayout::for_code_len(c.len())?;
    require_fixed_window(rs, layout.n)?;
    let mut bits = vec![false; layout.n];
    for (&p, &b) in layout.code_positions.iter().zip(c.bits()) {
        bits[p - 1] = b;
    }
    let x = BitWord::from_bits(bits)?;
    let ones = balance_at_positions(&x, &layout.balancing_positions, rs)?.ok_or(Error::NoBalancingSubset)?;
    x.flip(&ones)
}

/// Recovers the code bits of a template word.
pub fn mbt_extract(x: &BitWord) -> Result<BitWord> {
    let layout = MbtLayout::for_output_len(x.len())?;
    x.select(&layout.code_positions)
}

/// Template-encodes every codeword. The support of each entry lists the
/// balancing positions set to one.
pub fn mbt_construct(cb: &Codebook, rs: ResidueSystem) -> Result<BalancedCode> {
    let layout = MbtLayout::for_code_len(cb.n())?;
    let entries = cb
        .words()
        .iter()
        .map(|c| {
            let balanced = mbt_encode(c, rs)?;
            let ones = layout.balancing_positions.iter().copied().filter(|&p| balanced.get(p) == Ok(true)).collect();
            Ok(BalancedEntry { original: c.clone(), balanced, support: Support::new(ones, None)? })
        })
        .collect::<Result<Vec<_>>>()?;
    BalancedCode::assemble(Scheme::Mbt, rs, VariantPolicy::Single, entries, vec![])
}
