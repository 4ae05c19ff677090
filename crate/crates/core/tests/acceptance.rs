//! Acceptance suite. Each test prints one PASS/FAIL line and then asserts.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vtflip::balance::{
    fixed_construct, fixed_index_balance, min_flip_sets, mfmb_construct, ofmb_construct, one_flip_classes,
};
use vtflip::bitword::floor_log2;
use vtflip::bounds::{bound_sweep, mbt_inner_len, Winner};
use vtflip::channel::{monte_carlo, ChannelConfig, ForcedEvent};
use vtflip::codebook::{builtin_fixture, single_edit_correctable, EditKind};
use vtflip::decode::{levenshtein_reinsert, vt_delete, vt_reinsert};
use vtflip::golden;
use vtflip::{framed_decode, BalancedCode, BitWord, DecodeContext, ResidueSystem, Support, VariantPolicy};

fn report(id: u32, title: &str, limit: Duration, started: Instant, problems: &[String]) {
    let took = started.elapsed();
    let on_time = took < limit;
    let ok = problems.is_empty() && on_time;
    let mut line = format!("{} criterion {id}: {title} ({:.2?} / limit {:?})", if ok { "PASS" } else { "FAIL" }, took, limit);
    if !problems.is_empty() {
        line.push_str(&format!(" -- {} problem(s), first: {}", problems.len(), problems[0]));
    }
    if !on_time {
        line.push_str(" -- over time limit");
    }
    println!("{line}");
    assert!(ok, "{line}");
}

fn w(s: &str) -> BitWord {
    s.parse().unwrap()
}

fn rs(m: u64, a: u64) -> ResidueSystem {
    ResidueSystem::new(m, a).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, n: usize) -> BitWord {
    BitWord::from_bits((0..n).map(|_| rng.gen()).collect()).unwrap()
}

fn all_words(n: usize) -> impl Iterator<Item = BitWord> {
    (0u32..1 << n).map(move |v| BitWord::from_bits((0..n).map(|i| v >> (n - 1 - i) & 1 == 1).collect()).unwrap())
}

fn deletions(x: &BitWord) -> Vec<BitWord> {
    (1..=x.len()).map(|i| x.delete(i).unwrap()).collect()
}

fn insertions(x: &BitWord) -> Vec<BitWord> {
    (1..=x.len() + 1).flat_map(|i| [false, true].map(|b| x.insert(i, b).unwrap())).collect()
}

fn with_flips(x: &BitWord, positions: &[usize]) -> BitWord {
    x.flip(&Support::from_unsorted(positions.to_vec()).unwrap()).unwrap()
}

/// Runs `received` through the framed decoder and records a problem unless
/// it lands on the entry's balanced word and original.
fn expect_recovered(ctx: &DecodeContext, idx: usize, received: &BitWord, what: &str, problems: &mut Vec<String>) {
    let e = &ctx.code().entries[idx];
    let out = framed_decode(received, ctx);
    if out.word.as_ref() != Some(&e.balanced) || out.original.as_ref() != Some(&e.original) {
        problems.push(format!("{what} on {}: got {:?}", e.balanced, out.kind));
    }
}

#[test]
fn criterion_1_hamming_flip_table() {
    let t = Instant::now();
    let mut problems = Vec::new();
    let r = rs(8, 0);
    let mut two_flip = Vec::new();
    for row in &golden::TABLE_I {
        let c = w(row.word);
        if c.moment(r) != row.sigma {
            problems.push(format!("{} sigma {} vs {}", row.word, c.moment(r), row.sigma));
        }
        let found = min_flip_sets(&c, r, 7);
        for s in row.supports {
            let s = Support::new(s.to_vec(), Some(7)).unwrap();
            if Some(s.len()) != found.minimal_size || !found.supports.contains(&s) {
                problems.push(format!("{} support {s} not minimal", row.word));
            }
        }
        if found.minimal_size == Some(2) {
            two_flip.push(row.word);
        }
    }
    if two_flip != ["0001011", "0101100", "1101001"] {
        problems.push(format!("two-flip rows {two_flip:?}"));
    }
    report(1, "Hamming flip table", Duration::from_secs(1), t, &problems);
}

#[test]
fn criterion_2_multi_variant_code() {
    let t = Instant::now();
    let mut problems = Vec::new();
    let cb = builtin_fixture("hamming_7_16_3").unwrap();
    let code = mfmb_construct(&cb, rs(8, 0), 1, VariantPolicy::Multi).unwrap();
    let got: BTreeSet<BitWord> = code.balanced_words().into_iter().collect();
    let want: BTreeSet<BitWord> = golden::MULTI_VARIANT_CODE.iter().map(|s| w(s)).collect();
    if got != want || want.len() != 16 {
        problems.push(format!("code set differs: {} vs {} words", got.len(), want.len()));
    }
    let words: Vec<BitWord> = want.into_iter().collect();
    for kind in [EditKind::Deletion, EditKind::Insertion] {
        let v = single_edit_correctable(&words, kind);
        if !v.correctable {
            problems.push(format!("{kind:?} collision {:?}", v.witness));
        }
    }
    report(2, "multi-variant code set and edit correctability", Duration::from_secs(1), t, &problems);
}

#[test]
fn criterion_3_bch_balancing_table() {
    let t = Instant::now();
    let mut problems = Vec::new();
    let r = rs(16, 0);
    let fixed = Support::new(vec![1, 2, 4, 8], Some(15)).unwrap();
    for row in &golden::TABLE_III {
        let (c, code_i, code_ii) = (w(row.word), w(row.code_i), w(row.code_ii));
        if !code_i.in_class(r) || !code_ii.in_class(r) {
            problems.push(format!("{} balanced word off class", row.word));
        }
        let diff_i = c.diff_support(&code_i).unwrap();
        let diff_ii = c.diff_support(&code_ii).unwrap();
        if !diff_ii.is_subset_of(&fixed) {
            problems.push(format!("{} code II flips {diff_ii}", row.word));
        }
        let (_, ours) = fixed_index_balance(&c, r).unwrap();
        if ours.len() != diff_ii.len() {
            problems.push(format!("{} fixed flips {} vs {}", row.word, ours.len(), diff_ii.len()));
        }
        if min_flip_sets(&c, r, 15).minimal_size != Some(diff_i.len()) {
            problems.push(format!("{} minimal flips vs {}", row.word, diff_i.len()));
        }
    }
    report(3, "BCH balancing table", Duration::from_secs(5), t, &problems);
}

fn check_ofmb(name: &str, min_size: usize, min_d: usize, problems: &mut Vec<String>) -> BalancedCode {
    let code = ofmb_construct(&builtin_fixture(name).unwrap()).unwrap();
    if code.entries.len() < min_size {
        problems.push(format!("{name}: M' = {} < {min_size}", code.entries.len()));
    }
    match code.d_min_balanced {
        Some(d) if d >= min_d => {}
        other => problems.push(format!("{name}: d_min {other:?} < {min_d}")),
    }
    let words = code.balanced_words();
    for kind in [EditKind::Deletion, EditKind::Insertion] {
        if !single_edit_correctable(&words, kind).correctable {
            problems.push(format!("{name}: {kind:?} balls intersect"));
        }
    }
    code
}

#[test]
fn criterion_4_one_flip_construction() {
    let t = Instant::now();
    let mut problems = Vec::new();
    check_ofmb("hamming_7_16_3", 10, 1, &mut problems);
    let code = check_ofmb("bch_15_32_7", 18, 5, &mut problems);
    let ctx = DecodeContext::new(code).unwrap();
    let n = ctx.expected_n();
    for idx in 0..ctx.code().entries.len() {
        let x = ctx.code().entries[idx].balanced.clone();
        for y in deletions(&x) {
            expect_recovered(&ctx, idx, &y, "deletion", &mut problems);
        }
        for y in insertions(&x) {
            expect_recovered(&ctx, idx, &y, "insertion", &mut problems);
        }
        expect_recovered(&ctx, idx, &x, "clean", &mut problems);
        for i in 1..=n {
            expect_recovered(&ctx, idx, &with_flips(&x, &[i]), "1 substitution", &mut problems);
            for j in i + 1..=n {
                expect_recovered(&ctx, idx, &with_flips(&x, &[i, j]), "2 substitutions", &mut problems);
            }
        }
    }
    report(4, "one-flip construction sizes, distance and exhaustive decoding", Duration::from_secs(60), t, &problems);
}

#[test]
fn criterion_5_fixed_index_decoding() {
    let t = Instant::now();
    let mut problems = Vec::new();
    let code = fixed_construct(&builtin_fixture("bch_15_32_7").unwrap(), rs(16, 0)).unwrap();
    let ctx = DecodeContext::new(code).unwrap();
    if ctx.radius() != 1 || ctx.erasures().support().indices() != [1, 2, 4, 8] {
        problems.push(format!("radius {} erasures {}", ctx.radius(), ctx.erasures().support()));
    }
    for idx in 0..ctx.code().entries.len() {
        let x = ctx.code().entries[idx].balanced.clone();
        for y in deletions(&x) {
            expect_recovered(&ctx, idx, &y, "deletion", &mut problems);
        }
        for y in insertions(&x) {
            expect_recovered(&ctx, idx, &y, "insertion", &mut problems);
        }
        for i in (1..=15).filter(|i| !ctx.erasures().contains(*i)) {
            expect_recovered(&ctx, idx, &with_flips(&x, &[i]), "substitution", &mut problems);
        }
    }
    report(5, "fixed-index exhaustive decoding", Duration::from_secs(60), t, &problems);
}

#[test]
fn criterion_6_random_word_properties() {
    let t = Instant::now();
    let mut problems = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut half_hits = 0;
    for n in [7usize, 15, 31, 63] {
        let m = n as u64 + 1;
        let r = rs(m, 0);
        let half = (m / 2) as usize;
        let cap = floor_log2(n) as usize + 1;
        for _ in 0..1000 {
            let c = random_word(&mut rng, n);
            let (balanced, s) = fixed_index_balance(&c, r).unwrap();
            if s.len() > cap || !balanced.in_class(r) {
                problems.push(format!("fixed support {s} for {c}"));
            }
            if r.deficit(c.raw_moment()) == half as u64 {
                half_hits += 1;
                let found = min_flip_sets(&c, r, 1);
                let single = Support::new(vec![half], Some(n)).unwrap();
                if found.minimal_size.is_none_or(|k| k > 1) || !found.supports.contains(&single) {
                    problems.push(format!("half-modulus shortcut fails for {c}"));
                }
            }
            let classes = one_flip_classes(&c, m).unwrap().len();
            if classes < n.div_ceil(2) + 1 {
                problems.push(format!("{classes} one-flip classes for {c}"));
            }
        }
    }
    if half_hits == 0 {
        problems.push("half-modulus hypothesis never met".into());
    }
    report(6, "fixed support, half-modulus shortcut and class count on random words", Duration::from_secs(30), t, &problems);
}

#[test]
fn criterion_7_bound_comparison_sweep() {
    let t = Instant::now();
    let mut problems = Vec::new();
    if mbt_inner_len(265) != 256 {
        problems.push(format!("template inner length {}", mbt_inner_len(265)));
    }
    let rows = bound_sweep(265, 2..=130).unwrap();
    for r in rows.iter().filter(|r| (20..=110).contains(&r.d)) {
        if r.winner == Winner::Mbt {
            problems.push(format!("template bound larger at d = {} ({:.3} vs {:.3} bits)", r.d, r.log2_mbt, r.log2_ofmb));
        }
    }
    report(7, "one-flip bound ≥ template bound for d in [20, 110] at n = 265", Duration::from_secs(5), t, &problems);
}

#[test]
fn criterion_8_edit_decoders_against_ball_index() {
    let t = Instant::now();
    let mut problems = Vec::new();
    // n = 1 deletes down to the empty word, which has no representation
    for n in 2..=12usize {
        let r = rs(n as u64 + 1, 0);
        let class: Vec<BitWord> = all_words(n).filter(|x| x.in_class(r)).collect();
        let mut del_index: BTreeMap<BitWord, BTreeSet<BitWord>> = BTreeMap::new();
        let mut ins_index: BTreeMap<BitWord, BTreeSet<BitWord>> = BTreeMap::new();
        for c in &class {
            for y in deletions(c) {
                del_index.entry(y).or_default().insert(c.clone());
            }
            for y in insertions(c) {
                ins_index.entry(y).or_default().insert(c.clone());
            }
        }
        for (y, sources) in &del_index {
            let want = (sources.len() == 1).then(|| sources.first().unwrap().clone());
            if vt_reinsert(y, r, None).ok() != want || levenshtein_reinsert(y, r).ok() != want {
                problems.push(format!("n={n} deletion image {y}"));
            }
        }
        for (y, sources) in &ins_index {
            let want = (sources.len() == 1).then(|| sources.first().unwrap().clone());
            if vt_delete(y, r, None).ok() != want {
                problems.push(format!("n={n} insertion image {y}"));
            }
        }
    }
    report(8, "edit decoders match the ball index on full classes, n ≤ 12", Duration::from_secs(120), t, &problems);
}

#[test]
fn criterion_9_forced_edit_simulation() {
    let t = Instant::now();
    let mut problems = Vec::new();
    let bch = builtin_fixture("bch_15_32_7").unwrap();
    let contexts = [
        ("OFMB hamming", ofmb_construct(&builtin_fixture("hamming_7_16_3").unwrap()).unwrap()),
        ("OFMB bch", ofmb_construct(&bch).unwrap()),
        ("FIXED bch", fixed_construct(&bch, rs(16, 0)).unwrap()),
    ];
    for (name, code) in contexts {
        let ctx = DecodeContext::new(code).unwrap();
        for event in [ForcedEvent::OneDeletion, ForcedEvent::OneInsertion] {
            let cfg = ChannelConfig::forced(event);
            let one = monte_carlo(&ctx, &cfg, 10_000, 2024, 1).unwrap();
            let eight = monte_carlo(&ctx, &cfg, 10_000, 2024, 8).unwrap();
            if one.trials != 10_000 || one.failures != 0 {
                problems.push(format!("{name} {event:?}: {} failures in {} trials", one.failures, one.trials));
            }
            if one != eight {
                problems.push(format!("{name} {event:?}: stats differ across worker counts"));
            }
        }
    }
    report(9, "forced edits over 10^4 seeded trials, 1 vs 8 workers", Duration::from_secs(120), t, &problems);
}
