//! Self-judging regeneration of the bundled reference tables and the bound
//! comparison sweep.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::json;

use crate::balance::{fixed_index_balance, min_flip_sets, mfmb_construct, VariantPolicy};
use crate::bitword::{BitWord, ResidueSystem, Support};
use crate::bounds::{bound_sweep, mbt_inner_len, sweep_csv, Winner};
use crate::codebook::{builtin_fixture, single_edit_correctable, EditKind};
use crate::error::Result;
use crate::golden;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub target: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// JSON rows for tables; for the sweep, `{"csv": …}`.
    pub artifact: serde_json::Value,
}

impl Report {
    fn new(target: &str, checks: Vec<Check>, artifact: serde_json::Value) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Report { target: target.into(), passed, checks, artifact }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub const TARGETS: [&str; 4] = ["table1", "table2", "table3", "fig1"];

pub fn reproduce(target: &str) -> Option<Result<Report>> {
    Some(match target {
        "table1" => table1(),
        "table2" => table2(),
        "table3" => table3(),
        "fig1" => fig1(),
        _ => return None,
    })
}

fn word(s: &str) -> BitWord {
    s.parse().expect("embedded words are binary")
}

fn support(v: &[usize]) -> Support {
    Support::new(v.to_vec(), None).expect("embedded supports are increasing")
}

/// Hamming(7,16,3), m = 8, a = 0: σ column, minimal flip sets, two-flip rows.
pub fn table1() -> Result<Report> {
    let rs = ResidueSystem::new(8, 0)?;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let mut two_flip = Vec::new();
    for row in &golden::TABLE_I {
        let c = word(row.word);
        let sigma = c.moment(rs);
        let found = min_flip_sets(&c, rs, c.len());
        let size = found.minimal_size.unwrap_or(usize::MAX);
        checks.push(Check::new(format!("{} sigma", row.word), sigma == row.sigma, format!("{sigma} vs {}", row.sigma)));
        for &s in row.supports {
            let s = support(s);
            checks.push(Check::new(
                format!("{} support {}", row.word, s),
                s.len() == size && found.supports.contains(&s),
                format!("minimal size {size}, minimal sets {}", join(&found.supports)),
            ));
        }
        if size == 2 {
            two_flip.push(row.word);
        }
        rows.push(json!({
            "word": row.word,
            "sigma": sigma,
            "support": found.canonical().map(|s| s.to_string()),
            "minimal_supports": found.supports.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        }));
    }
    checks.push(Check::new(
        "two-flip rows",
        two_flip == golden::TABLE_I_TWO_FLIP,
        two_flip.join(", "),
    ));
    Ok(Report::new("table1", checks, json!({ "m": 8, "a": 0, "rows": rows })))
}

/// Multi-variant balancing of the Hamming code and the resulting code set.
pub fn table2() -> Result<Report> {
    let rs = ResidueSystem::new(8, 0)?;
    let cb = builtin_fixture("hamming_7_16_3")?;
    let code = mfmb_construct(&cb, rs, 1, VariantPolicy::Multi)?;
    let got_rows: BTreeSet<(BitWord, Support)> =
        code.entries.iter().map(|e| (e.original.clone(), e.support.clone())).collect();
    let want_rows: BTreeSet<(BitWord, Support)> =
        golden::TABLE_II.iter().map(|(w, _, s)| (word(w), support(s))).collect();
    let got: BTreeSet<BitWord> = code.entries.iter().map(|e| e.balanced.clone()).collect();
    let want: BTreeSet<BitWord> = golden::MULTI_VARIANT_CODE.iter().map(|w| word(w)).collect();
    let words = code.balanced_words();
    let del = single_edit_correctable(&words, EditKind::Deletion);
    let ins = single_edit_correctable(&words, EditKind::Insertion);
    let checks = vec![
        Check::new("rows", got_rows == want_rows, format!("{} rows", got_rows.len())),
        Check::new("code set", got == want, format!("{} words", got.len())),
        Check::new("deletion balls disjoint", del.correctable, format!("{:?}", del.witness)),
        Check::new("insertion balls disjoint", ins.correctable, format!("{:?}", ins.witness)),
    ];
    let rows: Vec<_> = code
        .entries
        .iter()
        .map(|e| json!({ "word": e.original, "sigma": e.original.moment(rs), "support": e.support.to_string(), "balanced": e.balanced }))
        .collect();
    Ok(Report::new("table2", checks, json!({ "m": 8, "a": 0, "rows": rows })))
}

/// BCH(15,32,7), m = 16, a = 0: both reference balanced columns.
pub fn table3() -> Result<Report> {
    let rs = ResidueSystem::new(16, 0)?;
    let fixed = support(&[1, 2, 4, 8]);
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for row in &golden::TABLE_III {
        let c = word(row.word);
        let code_i = word(row.code_i);
        let code_ii = word(row.code_ii);
        let flips_i = c.diff_support(&code_i)?;
        let flips_ii = c.diff_support(&code_ii)?;
        let (ours, ours_support) = fixed_index_balance(&c, rs)?;
        let minimal = min_flip_sets(&c, rs, c.len()).minimal_size;
        let sigma = c.moment(rs);
        checks.push(Check::new(format!("{} sigma", row.word), sigma == row.sigma, format!("{sigma} vs {}", row.sigma)));
        checks.push(Check::new(format!("{} code I in class", row.word), code_i.in_class(rs), row.code_i));
        checks.push(Check::new(format!("{} code II in class", row.word), code_ii.in_class(rs), row.code_ii));
        checks.push(Check::new(
            format!("{} code II fixed positions", row.word),
            flips_ii.is_subset_of(&fixed),
            flips_ii.to_string(),
        ));
        checks.push(Check::new(
            format!("{} fixed flip count", row.word),
            ours_support.len() == flips_ii.len(),
            format!("ours {ours_support} vs {flips_ii}"),
        ));
        checks.push(Check::new(
            format!("{} minimal flip count", row.word),
            minimal == Some(flips_i.len()),
            format!("ours {minimal:?} vs {flips_i}"),
        ));
        rows.push(json!({
            "word": row.word,
            "sigma": sigma,
            "code_i_support": flips_i.to_string(),
            "code_ii": ours,
            "code_ii_support": ours_support.to_string(),
            "minimal_flips": minimal,
        }));
    }
    Ok(Report::new("table3", checks, json!({ "m": 16, "a": 0, "rows": rows })))
}

/// The n = 265 sweep comparing the one-flip and template bounds.
pub fn fig1() -> Result<Report> {
    let n = golden::FIG1_N;
    let (lo, hi) = golden::FIG1_SWEEP;
    let rows = bound_sweep(n, lo..=hi)?;
    let (r_lo, r_hi) = golden::FIG1_OFMB_REGION;
    let losing: Vec<usize> = rows
        .iter()
        .filter(|r| (r_lo..=r_hi).contains(&r.d) && r.winner == Winner::Mbt)
        .map(|r| r.d)
        .collect();
    let checks = vec![
        Check::new(
            "mbt inner length",
            mbt_inner_len(n) == golden::FIG1_MBT_INNER_LEN,
            format!("{}", mbt_inner_len(n)),
        ),
        Check::new(
            format!("ofmb ≥ mbt for d in [{r_lo}, {r_hi}]"),
            losing.is_empty(),
            if losing.is_empty() { "all rows".into() } else { format!("mbt larger at d = {losing:?}") },
        ),
    ];
    Ok(Report::new("fig1", checks, json!({ "n": n, "csv": sweep_csv(&rows) })))
}

fn join(supports: &[Support]) -> String {
    supports.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}
