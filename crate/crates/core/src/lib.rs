//! Bit-flipping moment balancing.
//!
//! Converts substitution-correcting block codes into codes that also correct
//! a single insertion or deletion, by flipping a few bits of each codeword so
//! its first-order moment `Σ i·x_i` lands in a fixed residue class mod `m`.

pub mod balance;
pub mod bitword;
pub mod bounds;
pub mod channel;
pub mod codebook;
pub mod decode;
pub mod error;
pub mod golden;
pub mod reproduce;

pub use balance::{BalancedCode, BalancedEntry, Scheme, VariantPolicy};
pub use bitword::{BitWord, ResidueSystem, Support};
pub use codebook::Codebook;
pub use decode::{framed_decode, DecodeContext, DecodeOutcome, OutcomeKind};
pub use error::{Error, Result};
