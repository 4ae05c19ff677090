//! Exact cardinality lower bounds for single insertion/deletion correcting
//! codes with a given minimum Hamming distance.
//!
//! All comparisons are made on exact big-integer rationals; the `log2`
//! values are for display only.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bitword::floor_log2;
use crate::error::{Error, Result};

/// `Σ_{i=0}^{r} C(n, i)`.
pub fn volume(n: usize, r: usize) -> Result<BigUint> {
    if r > n {
        return Err(Error::InvalidParameters(format!("volume radius {r} exceeds length {n}")));
    }
    let mut term = BigUint::one();
    let mut total = BigUint::one();
    for i in 0..r {
        term = term * BigUint::from(n - i) / BigUint::from(i + 1);
        total += &term;
    }
    Ok(total)
}

/// An exact positive rational, kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundValue {
    numer: BigUint,
    denom: BigUint,
}

impl BoundValue {
    pub fn new(numer: BigUint, denom: BigUint) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        let g = numer.gcd(&denom);
        if g.is_zero() || g.is_one() {
            BoundValue { numer, denom }
        } else {
            BoundValue { numer: numer / &g, denom: denom / &g }
        }
    }

    pub fn numer(&self) -> &BigUint {
        &self.numer
    }

    pub fn denom(&self) -> &BigUint {
        &self.denom
    }

    pub fn log2(&self) -> f64 {
        log2_big(&self.numer) - log2_big(&self.denom)
    }

    /// Smallest integer not below the bound: the guaranteed code size.
    pub fn ceil(&self) -> BigUint {
        self.numer.div_ceil(&self.denom)
    }
}

impl Ord for BoundValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.numer * &other.denom).cmp(&(&other.numer * &self.denom))
    }
}

impl PartialOrd for BoundValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer, self.denom)
    }
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("fits");
    top.log2() + shift as f64
}

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// Inner length `n − ⌊log2 n⌋ − 1` carried by a template word of length `n`.
pub fn mbt_inner_len(n: usize) -> usize {
    n - floor_log2(n) as usize - 1
}

/// Gilbert–Varshamov: `2^n / V(n, d−1)`.
pub fn gv_bound(n: usize, d: usize) -> Result<BoundValue> {
    if d == 0 || d > n {
        return Err(Error::InvalidParameters(format!("gv bound needs 1 ≤ d ≤ n (n={n}, d={d})")));
    }
    Ok(BoundValue::new(pow2(n), volume(n, d - 1)?))
}

/// One-flip scheme applied to a GV code of distance `d+2`: `2^(n−1) / V(n, d+1)`.
pub fn ofmb_bound(n: usize, d: usize) -> Result<BoundValue> {
    if d == 0 || d + 1 > n {
        return Err(Error::InvalidParameters(format!("ofmb bound needs 1 ≤ d ≤ n−1 (n={n}, d={d})")));
    }
    Ok(BoundValue::new(pow2(n - 1), volume(n, d + 1)?))
}

/// Template applied to a GV code of length `k = n − ⌊log2 n⌋ − 1`:
/// `2^k / V(k, d−1)`.
pub fn mbt_bound(n: usize, d: usize) -> Result<BoundValue> {
    if n < 3 || d == 0 || d - 1 > mbt_inner_len(n) {
        return Err(Error::InvalidParameters(format!("mbt bound needs 1 ≤ d ≤ k+1 (n={n}, d={d})")));
    }
    let k = mbt_inner_len(n);
    Ok(BoundValue::new(pow2(k), volume(k, d - 1)?))
}

/// The larger of [`ofmb_bound`] and [`mbt_bound`].
pub fn combined_bound(n: usize, d: usize) -> Result<BoundValue> {
    Ok(ofmb_bound(n, d)?.max(mbt_bound(n, d)?))
}

fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Entropy comparison of the two bound exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    /// `(d+1)(⌊log2 n⌋+1) > 2n`, decided on integers.
    pub condition_holds: bool,
    pub delta1: f64,
    pub delta2: f64,
    /// `[n(H(δ2) − H(δ1)), ⌊log2 n⌋(1 − H(δ2)), H(δ2)]`; the exponent gap
    /// is the first two minus the third.
    pub delta_terms: [f64; 3],
    pub delta: f64,
    /// Entropy estimate of the one-flip bound exponent, `n − 1 − H(δ1)·n`.
    pub ofmb_exponent_estimate: f64,
}

pub fn asymptotic_report(n: usize, d: usize) -> Result<AsymptoticReport> {
    if n < 3 || d < 2 {
        return Err(Error::InvalidParameters(format!("asymptotic report needs n ≥ 3, d ≥ 2 (n={n}, d={d})")));
    }
    let log_n = floor_log2(n) as usize;
    let k = mbt_inner_len(n);
    let delta1 = (d + 1) as f64 / n as f64;
    let delta2 = (d - 1) as f64 / k as f64;
    // δ ∈ (0, 1/2], checked on integers
    if 2 * (d + 1) > n || 2 * (d - 1) > k {
        return Err(Error::InvalidParameters(format!("δ outside (0, 1/2] for n={n}, d={d}")));
    }
    let (h1, h2) = (binary_entropy(delta1), binary_entropy(delta2));
    let delta_terms = [n as f64 * (h2 - h1), log_n as f64 * (1.0 - h2), h2];
    Ok(AsymptoticReport {
        condition_holds: (d + 1) * (log_n + 1) > 2 * n,
        delta1,
        delta2,
        delta_terms,
        delta: delta_terms[0] + delta_terms[1] - delta_terms[2],
        ofmb_exponent_estimate: (n - 1) as f64 - h1 * n as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    Ofmb,
    Mbt,
    Tie,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Winner::Ofmb => "ofmb",
            Winner::Mbt => "mbt",
            Winner::Tie => "tie",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: usize,
    pub log2_ofmb: f64,
    pub log2_mbt: f64,
    pub winner: Winner,
}

pub const SWEEP_HEADER: &str = "d,log2_ofmb,log2_mbt,winner";

impl SweepRow {
    pub fn csv(&self) -> String {
        format!("{},{:.6},{:.6},{}", self.d, self.log2_ofmb, self.log2_mbt, self.winner)
    }
}

pub fn bound_sweep(n: usize, d_range: std::ops::RangeInclusive<usize>) -> Result<Vec<SweepRow>> {
    d_range
        .map(|d| {
            let ofmb = ofmb_bound(n, d)?;
            let mbt = mbt_bound(n, d)?;
            let winner = match ofmb.cmp(&mbt) {
                Ordering::Greater => Winner::Ofmb,
                Ordering::Less => Winner::Mbt,
                Ordering::Equal => Winner::Tie,
            };
            Ok(SweepRow { d, log2_ofmb: ofmb.log2(), log2_mbt: mbt.log2(), winner })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balance::{ofmb_construct, ofmb_guaranteed_size};
    use crate::codebook::{gv_greedy, Ordering as Sweep};

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn volume_examples() {
        assert_eq!(volume(7, 0).unwrap(), big(1));
        assert_eq!(volume(7, 2).unwrap(), big(29));
        assert_eq!(volume(7, 7).unwrap(), big(128));
        assert!(volume(7, 8).is_err());
        assert_eq!(volume(265, 265).unwrap(), pow2(265));
    }

    #[test]
    fn volume_strictly_increasing() {
        for n in [1usize, 5, 40, 265] {
            let v: Vec<BigUint> = (0..=n).map(|r| volume(n, r).unwrap()).collect();
            assert!(v.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn gv_examples() {
        assert_eq!(gv_bound(7, 3).unwrap(), BoundValue::new(big(128), big(29)));
        assert_eq!(gv_bound(10, 1).unwrap(), BoundValue::new(big(1024), big(1)));
        assert_eq!(gv_bound(4, 4).unwrap().to_string(), "16/15");
        assert!(gv_bound(4, 0).is_err());
        assert!(gv_bound(4, 5).is_err());
    }

    #[test]
    fn ofmb_examples() {
        assert_eq!(ofmb_bound(7, 3).unwrap().to_string(), "64/99");
        assert_eq!(ofmb_bound(12, 11).unwrap().to_string(), "1/2");
        assert!(ofmb_bound(7, 7).is_err());
    }

    #[test]
    fn ofmb_log_against_entropy() {
        let b = ofmb_bound(265, 60).unwrap();
        let est = asymptotic_report(265, 60).unwrap().ofmb_exponent_estimate;
        // V(n, δn) ≤ 2^{H(δ)n}, so the entropy form never overstates the bound;
        // the gap is the polynomial factor, ~3.6 bits here
        assert!(est <= b.log2());
        assert!(b.log2() - est <= (265f64).log2());
        assert!((b.log2() - 61.340155).abs() < 1e-5);
    }

    #[test]
    fn mbt_examples() {
        assert_eq!(mbt_inner_len(265), 256);
        assert_eq!(mbt_bound(11, 1).unwrap().to_string(), "128/1");
        assert!(mbt_bound(265, 3).unwrap() > ofmb_bound(265, 3).unwrap());
        assert!(mbt_bound(11, 9).is_err());
    }

    #[test]
    fn combined_examples() {
        assert_eq!(combined_bound(265, 60).unwrap(), ofmb_bound(265, 60).unwrap());
        assert_eq!(combined_bound(265, 5).unwrap(), mbt_bound(265, 5).unwrap());
        for d in 1..40 {
            let c = combined_bound(100, d).unwrap();
            assert!(c >= ofmb_bound(100, d).unwrap() && c >= mbt_bound(100, d).unwrap());
        }
    }

    #[test]
    fn asymptotic_examples() {
        let r = asymptotic_report(265, 60).unwrap();
        assert!(r.condition_holds);
        assert!(r.delta2 > r.delta1);
        assert!(r.delta_terms[0] > 0.0);
        assert!(!asymptotic_report(265, 3).unwrap().condition_holds);
        assert!(asymptotic_report(265, 200).is_err());
        assert!(asymptotic_report(265, 1).is_err());
    }

    #[test]
    fn condition_implies_delta_ordering() {
        for n in 16..400 {
            for d in 2..n / 2 {
                if let Ok(r) = asymptotic_report(n, d) {
                    if r.condition_holds {
                        // δ2 > δ1 ⇔ (d−1)n > (d+1)k
                        let k = mbt_inner_len(n);
                        assert!((d - 1) * n > (d + 1) * k, "n={n} d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn exact_crossover_region_at_265() {
        // exact comparison (independently recomputed with Python integers):
        // one-flip bound wins exactly for d in 22..=112
        let rows = bound_sweep(265, 2..=130).unwrap();
        let wins: Vec<usize> = rows.iter().filter(|r| r.winner == Winner::Ofmb).map(|r| r.d).collect();
        assert_eq!(wins, (22..=112).collect::<Vec<_>>());
        assert!(rows.iter().all(|r| r.winner != Winner::Tie));
    }

    #[test]
    fn log2_agrees_with_exact_sign() {
        for r in bound_sweep(265, 2..=130).unwrap() {
            let diff = r.log2_ofmb - r.log2_mbt;
            match r.winner {
                Winner::Ofmb => assert!(diff > 0.0, "{r:?}"),
                Winner::Mbt => assert!(diff < 0.0, "{r:?}"),
                Winner::Tie => assert_eq!(diff, 0.0),
            }
        }
    }

    #[test]
    fn csv_format() {
        let rows = bound_sweep(265, 5..=5).unwrap();
        let text = sweep_csv(&rows);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("d,log2_ofmb,log2_mbt,winner"));
        assert!(lines.next().unwrap().ends_with(",mbt"));
    }

    #[test]
    fn one_flip_construction_meets_bound_at_desk_scale() {
        for n in 6..=14 {
            for d in 1..=3 {
                if d + 2 > n {
                    continue;
                }
                let cb = gv_greedy(n, d + 2, Sweep::Lexicographic).unwrap();
                if cb.len() < 2 {
                    continue;
                }
                let code = ofmb_construct(&cb).unwrap();
                let bound = ofmb_bound(n, d).unwrap();
                assert!(BigUint::from(code.entries.len()) >= bound.ceil(), "n={n} d={d}");
                assert!(code.entries.len() >= ofmb_guaranteed_size(n, cb.len()));
            }
        }
    }
}
