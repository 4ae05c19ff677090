//! Binary words, moment arithmetic and flip primitives.
//!
//! All positions exposed by this module are 1-based: index 1 is the leftmost
//! character of the text form. Storage is 0-based internally.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A fixed-length binary sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord {
    bits: Vec<bool>,
}

impl BitWord {
    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(BitWord { bits })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::from_bits(vec![false; len])
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    /// Always false; words are never empty. Present for clippy's sake.
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit at 1-based position `i`.
    pub fn get(&self, i: usize) -> Result<bool> {
        self.check_index(i)?;
        Ok(self.bits[i - 1])
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Unreduced first-order moment `Σ i·x_i`.
    pub fn raw_moment(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u64 + 1)
            .sum()
    }

    pub fn moment(&self, rs: ResidueSystem) -> u64 {
        self.raw_moment() % rs.modulus()
    }

    pub fn in_class(&self, rs: ResidueSystem) -> bool {
        self.moment(rs) == rs.target()
    }

    pub fn flip(&self, support: &Support) -> Result<BitWord> {
        if let Some(&last) = support.indices().last() {
            self.check_index(last)?;
        }
        let mut bits = self.bits.clone();
        for &i in support.indices() {
            bits[i - 1] = !bits[i - 1];
        }
        Ok(BitWord { bits })
    }

    /// Change in moment (mod m) caused by inverting position `i`.
    pub fn flip_delta(&self, i: usize, rs: ResidueSystem) -> Result<u64> {
        let m = rs.modulus();
        let step = i as u64 % m;
        Ok(if self.get(i)? { (m - step) % m } else { step })
    }

    pub fn hamming_distance(&self, other: &BitWord) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count())
    }

    /// 1-based positions where `self` and `other` differ.
    pub fn diff_support(&self, other: &BitWord) -> Result<Support> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let indices = self
            .bits
            .iter()
            .zip(&other.bits)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i + 1)
            .collect();
        Ok(Support { indices })
    }

    /// Word with the bit at 1-based position `i` removed.
    pub fn delete(&self, i: usize) -> Result<BitWord> {
        self.check_index(i)?;
        let mut bits = self.bits.clone();
        bits.remove(i - 1);
        BitWord::from_bits(bits)
    }

    /// Word with `bit` inserted so that it lands at 1-based position `i`
    /// (`1 ..= len + 1`).
    pub fn insert(&self, i: usize, bit: bool) -> Result<BitWord> {
        if i == 0 || i > self.len() + 1 {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len() + 1,
            });
        }
        let mut bits = self.bits.clone();
        bits.insert(i - 1, bit);
        Ok(BitWord { bits })
    }

    /// Bits at the given 1-based positions, in order.
    pub fn select(&self, positions: &[usize]) -> Result<BitWord> {
        let bits = positions
            .iter()
            .map(|&p| self.get(p))
            .collect::<Result<Vec<_>>>()?;
        BitWord::from_bits(bits)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.len() {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

impl FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(col, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                found => Err(Error::NonBinary {
                    found,
                    column: col + 1,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        BitWord::from_bits(bits)
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

impl Serialize for BitWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Modulus and target residue of the moment congruence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueSystem {
    #[serde(rename = "m")]
    modulus: u64,
    #[serde(rename = "a")]
    target: u64,
}

impl ResidueSystem {
    pub fn new(modulus: u64, target: u64) -> Result<Self> {
        if modulus == 0 || target >= modulus {
            return Err(Error::InvalidResidue { modulus, target });
        }
        Ok(ResidueSystem { modulus, target })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    /// Residue that must be added to a word with moment `sigma` to land on
    /// the target.
    pub fn deficit(&self, sigma: u64) -> u64 {
        let m = self.modulus;
        (self.target + m - sigma % m) % m
    }
}

/// Strictly increasing set of 1-based positions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Support {
    indices: Vec<usize>,
}

impl Support {
    pub fn empty() -> Self {
        Support::default()
    }

    /// Validates ordering and, when `len` is given, range.
    pub fn new(indices: Vec<usize>, len: Option<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedSupport);
        }
        if let Some(&first) = indices.first() {
            if first == 0 {
                return Err(Error::IndexOutOfRange { index: 0, len: len.unwrap_or(0) });
            }
        }
        if let (Some(len), Some(&last)) = (len, indices.last()) {
            if last > len {
                return Err(Error::IndexOutOfRange { index: last, len });
            }
        }
        Ok(Support { indices })
    }

    /// Sorts and deduplicates arbitrary positions.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        Support::new(indices, None)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &Support) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }
}

impl<'de> Deserialize<'de> for Support {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(d)?;
        Support::new(indices, None).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// `⌊log2 n⌋` for `n ≥ 1`.
pub fn floor_log2(n: usize) -> u32 {
    assert!(n > 0, "floor_log2 of zero");
    usize::BITS - 1 - n.leading_zeros()
}

/// The positions `{2^0, 2^1, …, 2^⌊log2 n⌋}`.
pub fn power_of_two_positions(n: usize) -> Vec<usize> {
    (0..=floor_log2(n)).map(|k| 1usize << k).collect()
}
