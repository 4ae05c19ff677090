//! Seeded synchronization-error channel and Monte Carlo harness.
//!
//! Each frame suffers at most one insertion or deletion, then independent
//! substitutions on the post-edit word. Trial `t` of a run draws all of its
//! randomness from `trial_seed(master, t)`, so results do not depend on how
//! trials are spread over workers.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitword::{BitWord, Support};
use crate::decode::{framed_decode, DecodeContext};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcedEvent {
    OneDeletion,
    OneInsertion,
    KSubstitutions(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    /// Per-bit substitution probability.
    pub p_sub: f64,
    /// Per-frame probability of one deletion.
    pub p_del: f64,
    /// Per-frame probability of one insertion.
    pub p_ins: f64,
    /// Replaces the random draw with exactly this event.
    pub forced: Option<ForcedEvent>,
    /// Positions (in the post-edit word) never substituted.
    #[serde(default)]
    pub protected: Vec<usize>,
}

impl ChannelConfig {
    pub fn noiseless() -> Self {
        ChannelConfig { p_sub: 0.0, p_del: 0.0, p_ins: 0.0, forced: None, protected: vec![] }
    }

    pub fn forced(event: ForcedEvent) -> Self {
        ChannelConfig { forced: Some(event), ..Self::noiseless() }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p_sub", self.p_sub), ("p_del", self.p_del), ("p_ins", self.p_ins)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidChannel(format!("{name} = {p} outside [0, 1]")));
            }
        }
        if self.p_del + self.p_ins > 1.0 {
            return Err(Error::InvalidChannel("p_del + p_ins exceeds 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum ChannelEvent {
    /// `bit` removed from 1-based `position` of the sent word.
    Deletion { position: usize, bit: bool },
    /// `bit` now sits at 1-based `position` of the edited word.
    Insertion { position: usize, bit: bool },
    Substitution { position: usize },
}

/// Coarse classification of what a frame went through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Clean,
    Substitutions,
    Deletion,
    Insertion,
    DeletionAndSubstitutions,
    InsertionAndSubstitutions,
}

pub fn classify(log: &[ChannelEvent]) -> EventKind {
    let subs = log.iter().any(|e| matches!(e, ChannelEvent::Substitution { .. }));
    let sync = log.iter().find_map(|e| match e {
        ChannelEvent::Deletion { .. } => Some(true),
        ChannelEvent::Insertion { .. } => Some(false),
        ChannelEvent::Substitution { .. } => None,
    });
    match (sync, subs) {
        (None, false) => EventKind::Clean,
        (None, true) => EventKind::Substitutions,
        (Some(true), false) => EventKind::Deletion,
        (Some(false), false) => EventKind::Insertion,
        (Some(true), true) => EventKind::DeletionAndSubstitutions,
        (Some(false), true) => EventKind::InsertionAndSubstitutions,
    }
}

/// Sends `x` through the channel.
pub fn transmit(x: &BitWord, cfg: &ChannelConfig, seed: u64) -> Result<(BitWord, Vec<ChannelEvent>)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = Vec::new();
    let mut bits = x.bits().to_vec();

    let sync = match cfg.forced {
        Some(ForcedEvent::OneDeletion) => Some(true),
        Some(ForcedEvent::OneInsertion) => Some(false),
        Some(ForcedEvent::KSubstitutions(_)) => None,
        None => {
            let u: f64 = rng.gen();
            if u < cfg.p_del {
                Some(true)
            } else if u < cfg.p_del + cfg.p_ins {
                Some(false)
            } else {
                None
            }
        }
    };
    match sync {
        Some(true) => {
            if bits.len() < 2 {
                return Err(Error::InvalidChannel("cannot delete from a one-bit word".into()));
            }
            let i = rng.gen_range(0..bits.len());
            let bit = bits.remove(i);
            log.push(ChannelEvent::Deletion { position: i + 1, bit });
        }
        Some(false) => {
            let i = rng.gen_range(0..=bits.len());
            let bit: bool = rng.gen();
            bits.insert(i, bit);
            log.push(ChannelEvent::Insertion { position: i + 1, bit });
        }
        None => {}
    }

    let eligible: Vec<usize> = (1..=bits.len()).filter(|p| !cfg.protected.contains(p)).collect();
    let flips: Vec<usize> = match cfg.forced {
        Some(ForcedEvent::KSubstitutions(k)) => {
            if k > eligible.len() {
                return Err(Error::InvalidChannel(format!("{k} substitutions but only {} eligible positions", eligible.len())));
            }
            let mut picked: Vec<usize> = sample(&mut rng, eligible.len(), k).into_iter().map(|j| eligible[j]).collect();
            picked.sort_unstable();
            picked
        }
        Some(_) => vec![],
        None => eligible.into_iter().filter(|_| rng.gen_bool(cfg.p_sub)).collect(),
    };
    for &p in &flips {
        bits[p - 1] = !bits[p - 1];
        log.push(ChannelEvent::Substitution { position: p });
    }
    Ok((BitWord::from_bits(bits)?, log))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindStats {
    pub trials: u64,
    pub successes: u64,
    pub failures: u64,
}

impl KindStats {
    pub fn frame_error_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.failures as f64 / self.trials as f64
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ChannelStats {
    pub trials: u64,
    pub successes: u64,
    pub failures: u64,
    pub by_kind: BTreeMap<EventKind, KindStats>,
    pub frame_error_rate: BTreeMap<EventKind, f64>,
}

impl ChannelStats {
    fn record(&mut self, kind: EventKind, ok: bool) {
        let s = self.by_kind.entry(kind).or_default();
        s.trials += 1;
        self.trials += 1;
        if ok {
            s.successes += 1;
            self.successes += 1;
        } else {
            s.failures += 1;
            self.failures += 1;
        }
    }

    fn merge(mut self, other: ChannelStats) -> ChannelStats {
        self.trials += other.trials;
        self.successes += other.successes;
        self.failures += other.failures;
        for (k, s) in other.by_kind {
            let e = self.by_kind.entry(k).or_default();
            e.trials += s.trials;
            e.successes += s.successes;
            e.failures += s.failures;
        }
        self
    }

    fn finish(mut self) -> ChannelStats {
        self.frame_error_rate = self.by_kind.iter().map(|(k, s)| (*k, s.frame_error_rate())).collect();
        self
    }
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for trial `t`: the `t+1`-th output of a SplitMix64 stream started at
/// `master`. A pure function of its arguments.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    mix64(master.wrapping_add(trial.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

fn run_trial(ctx: &DecodeContext, cfg: &ChannelConfig, seed: u64) -> Result<(EventKind, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = &ctx.code().entries;
    let sent = &entries[rng.gen_range(0..entries.len())];
    let (received, log) = transmit(&sent.balanced, cfg, rng.gen())?;
    let outcome = framed_decode(&received, ctx);
    let ok = outcome.word.as_ref() == Some(&sent.balanced) && outcome.original.as_ref() == Some(&sent.original);
    Ok((classify(&log), ok))
}

/// Runs `trials` seeded frames on `workers` threads (`0` = rayon default).
pub fn monte_carlo(
    ctx: &DecodeContext,
    cfg: &ChannelConfig,
    trials: u64,
    master_seed: u64,
    workers: usize,
) -> Result<ChannelStats> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameters(e.to_string()))?;
    let stats = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| run_trial(ctx, cfg, trial_seed(master_seed, t)))
            .try_fold(ChannelStats::default, |mut acc, r| {
                let (kind, ok) = r?;
                acc.record(kind, ok);
                Ok::<_, Error>(acc)
            })
            .try_reduce(ChannelStats::default, |a, b| Ok(a.merge(b)))
    })?;
    Ok(stats.finish())
}

/// Applies a deletion or insertion recorded in a log to `x`, as a replay
/// check for [`transmit`].
pub fn replay(x: &BitWord, log: &[ChannelEvent]) -> Result<BitWord> {
    let mut y = x.clone();
    let mut flips = Vec::new();
    for e in log {
        match *e {
            ChannelEvent::Deletion { position, .. } => y = y.delete(position)?,
            ChannelEvent::Insertion { position, bit } => y = y.insert(position, bit)?,
            ChannelEvent::Substitution { position } => flips.push(position),
        }
    }
    y.flip(&Support::from_unsorted(flips)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balance::{fixed_construct, ofmb_construct};
    use crate::bitword::ResidueSystem;
    use crate::codebook::builtin_fixture;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn noiseless_is_identity() {
        let x = w("1001110");
        for seed in 0..20 {
            let (y, log) = transmit(&x, &ChannelConfig::noiseless(), seed).unwrap();
            assert_eq!(y, x);
            assert!(log.is_empty());
        }
    }

    #[test]
    fn forced_deletion_replays() {
        let x = w("1001110");
        let cfg = ChannelConfig::forced(ForcedEvent::OneDeletion);
        let (y, log) = transmit(&x, &cfg, 42).unwrap();
        assert_eq!(y.len(), 6);
        let ChannelEvent::Deletion { position, bit } = log[0] else { panic!("{log:?}") };
        assert_eq!(x.get(position).unwrap(), bit);
        assert_eq!(x.delete(position).unwrap(), y);
        assert_eq!(transmit(&x, &cfg, 42).unwrap(), (y, log));
    }

    #[test]
    fn forced_substitutions() {
        let x = w("100110111000010");
        for seed in 0..50 {
            let (y, log) = transmit(&x, &ChannelConfig::forced(ForcedEvent::KSubstitutions(2)), seed).unwrap();
            assert_eq!(x.hamming_distance(&y).unwrap(), 2);
            assert_eq!(replay(&x, &log).unwrap(), y);
        }
        let cfg = ChannelConfig { protected: vec![1, 2, 4, 8], ..ChannelConfig::forced(ForcedEvent::KSubstitutions(1)) };
        for seed in 0..200 {
            let (_, log) = transmit(&x, &cfg, seed).unwrap();
            let ChannelEvent::Substitution { position } = log[0] else { panic!() };
            assert!(![1, 2, 4, 8].contains(&position));
        }
        let too_many = ChannelConfig::forced(ForcedEvent::KSubstitutions(16));
        assert!(transmit(&x, &too_many, 0).is_err());
    }

    #[test]
    fn random_channel_replays() {
        let x = w("0110101110010101");
        let cfg = ChannelConfig { p_sub: 0.1, p_del: 0.3, p_ins: 0.3, forced: None, protected: vec![] };
        for seed in 0..200 {
            let (y, log) = transmit(&x, &cfg, seed).unwrap();
            assert_eq!(replay(&x, &log).unwrap(), y);
            let sync = log.iter().filter(|e| !matches!(e, ChannelEvent::Substitution { .. })).count();
            assert!(sync <= 1);
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = ChannelConfig::noiseless();
        cfg.p_sub = 1.5;
        assert!(cfg.validate().is_err());
        let cfg = ChannelConfig { p_del: 0.6, p_ins: 0.6, ..ChannelConfig::noiseless() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..10_000).map(|t| trial_seed(7, t)).collect();
        assert_eq!(seeds.len(), 10_000);
    }

    #[test]
    fn noiseless_simulation_never_fails() {
        let ctx = DecodeContext::new(ofmb_construct(&builtin_fixture("hamming_7_16_3").unwrap()).unwrap()).unwrap();
        let s = monte_carlo(&ctx, &ChannelConfig::noiseless(), 10_000, 1, 0).unwrap();
        assert_eq!((s.trials, s.failures), (10_000, 0));
        assert_eq!(s.by_kind.keys().copied().collect::<Vec<_>>(), vec![EventKind::Clean]);
    }

    #[test]
    fn guaranteed_regions_never_fail() {
        let ctx = DecodeContext::new(ofmb_construct(&builtin_fixture("hamming_7_16_3").unwrap()).unwrap()).unwrap();
        let s = monte_carlo(&ctx, &ChannelConfig::forced(ForcedEvent::OneDeletion), 10_000, 3, 0).unwrap();
        assert_eq!(s.successes, 10_000);

        let rs = ResidueSystem::new(16, 0).unwrap();
        let ctx = DecodeContext::new(fixed_construct(&builtin_fixture("bch_15_32_7").unwrap(), rs).unwrap()).unwrap();
        let cfg = ChannelConfig { protected: vec![1, 2, 4, 8], ..ChannelConfig::forced(ForcedEvent::KSubstitutions(1)) };
        let s = monte_carlo(&ctx, &cfg, 10_000, 5, 0).unwrap();
        assert_eq!(s.successes, 10_000);
    }

    #[test]
    fn stats_independent_of_worker_count() {
        let ctx = DecodeContext::new(ofmb_construct(&builtin_fixture("bch_15_32_7").unwrap()).unwrap()).unwrap();
        let cfg = ChannelConfig { p_sub: 0.08, p_del: 0.1, p_ins: 0.1, forced: None, protected: vec![] };
        let one = monte_carlo(&ctx, &cfg, 3_000, 99, 1).unwrap();
        let many = monte_carlo(&ctx, &cfg, 3_000, 99, 8).unwrap();
        assert_eq!(one, many);
        assert!(one.failures > 0, "noisy channel should produce some failures");
        let total: u64 = one.by_kind.values().map(|k| k.trials).sum();
        assert_eq!(total, one.trials);
    }

    #[test]
    fn event_frequencies_match_configuration() {
        let x = w("0110101110010101");
        let cfg = ChannelConfig { p_sub: 0.05, p_del: 0.2, p_ins: 0.1, forced: None, protected: vec![] };
        let trials = 20_000u64;
        let (mut del, mut ins, mut subs, mut bits) = (0u64, 0u64, 0u64, 0u64);
        for t in 0..trials {
            let (y, log) = transmit(&x, &cfg, trial_seed(11, t)).unwrap();
            bits += y.len() as u64;
            for e in &log {
                match e {
                    ChannelEvent::Deletion { .. } => del += 1,
                    ChannelEvent::Insertion { .. } => ins += 1,
                    ChannelEvent::Substitution { .. } => subs += 1,
                }
            }
        }
        let within = |count: u64, n: u64, p: f64| {
            let mean = n as f64 * p;
            let sd = (n as f64 * p * (1.0 - p)).sqrt();
            (count as f64 - mean).abs() <= 3.0 * sd
        };
        assert!(within(del, trials, 0.2), "deletions {del}");
        assert!(within(ins, trials, 0.1), "insertions {ins}");
        assert!(within(subs, bits, 0.05), "substitutions {subs} over {bits} bits");
    }
}
