//! Reference tables for the bundled fixtures, embedded verbatim from the
//! reference balancing examples. Rows keep their original order.

/// One row of the Hamming(7,16,3) balancing table: codeword, σ(c) mod 8, and
/// every flip set listed for that row.
pub struct HammingRow {
    pub word: &'static str,
    pub sigma: u64,
    pub supports: &'static [&'static [usize]],
}

/// Balancing the (7, 16, 3) Hamming code to σ ≡ 0 (mod 8).
pub const TABLE_I: [HammingRow; 16] = [
    HammingRow { word: "0000000", sigma: 0, supports: &[&[]] },
    HammingRow { word: "1001110", sigma: 0, supports: &[&[]] },
    HammingRow { word: "1011000", sigma: 0, supports: &[&[]] },
    HammingRow { word: "1100010", sigma: 1, supports: &[&[1], &[7]] },
    HammingRow { word: "1010011", sigma: 1, supports: &[&[1]] },
    HammingRow { word: "0001011", sigma: 1, supports: &[&[2, 5]] },
    HammingRow { word: "1110100", sigma: 3, supports: &[&[3]] },
    HammingRow { word: "0101100", sigma: 3, supports: &[&[6, 7]] },
    HammingRow { word: "0011101", sigma: 3, supports: &[&[3]] },
    HammingRow { word: "0100111", sigma: 4, supports: &[&[4]] },
    HammingRow { word: "0110001", sigma: 4, supports: &[&[4]] },
    HammingRow { word: "1111111", sigma: 4, supports: &[&[4]] },
    HammingRow { word: "1000101", sigma: 5, supports: &[&[3], &[5]] },
    HammingRow { word: "0010110", sigma: 6, supports: &[&[2], &[6]] },
    HammingRow { word: "1101001", sigma: 6, supports: &[&[4, 6]] },
    HammingRow { word: "0111010", sigma: 7, supports: &[&[1]] },
];

/// Rows of the Hamming table that need two flips.
pub const TABLE_I_TWO_FLIP: [&str; 3] = ["0001011", "0101100", "1101001"];

/// Multi-variant balancing of the Hamming code: one row per (codeword, flip set) pair, duplicates included.
pub const TABLE_II: [(&str, u64, &[usize]); 16] = [
    ("0000000", 0, &[]),
    ("1001110", 0, &[]),
    ("1011000", 0, &[]),
    ("1100010", 1, &[1]),
    ("1100010", 1, &[7]),
    ("1010011", 1, &[1]),
    ("1110100", 3, &[3]),
    ("0011101", 3, &[3]),
    ("0100111", 4, &[4]),
    ("0110001", 4, &[4]),
    ("1111111", 4, &[4]),
    ("1000101", 5, &[3]),
    ("1000101", 5, &[5]),
    ("0010110", 6, &[2]),
    ("0010110", 6, &[6]),
    ("0111010", 7, &[1]),
];

/// The balanced code those rows produce.
pub const MULTI_VARIANT_CODE: [&str; 16] = [
    "0000000", "1001110", "1011000", "0100010", //
    "1100011", "0010011", "1100100", "0001101", //
    "0101111", "0111001", "1110111", "1010101", //
    "1000001", "0110110", "0010100", "1111010",
];

/// One row of the BCH(15,32,7) table: codeword, σ(c) mod 16, the
/// variable-index balanced word (Code I) and the fixed-index one (Code II).
pub struct BchRow {
    pub word: &'static str,
    pub sigma: u64,
    pub code_i: &'static str,
    pub code_ii: &'static str,
}

const fn bch(word: &'static str, sigma: u64, code_i: &'static str, code_ii: &'static str) -> BchRow {
    BchRow { word, sigma, code_i, code_ii }
}

/// Balancing the (15, 32, 7) BCH code to σ ≡ 0 (mod 16).
pub const TABLE_III: [BchRow; 32] = [
    bch("000000000000000", 0, "000000000000000", "000000000000000"),
    bch("100001010011011", 3, "100001010011111", "010101000011011"),
    bch("010001111010110", 6, "010000111010110", "000101101010110"),
    bch("110000101001101", 11, "110010101001101", "000000111001101"),
    bch("001000111101011", 14, "011000111101011", "011000111101011"),
    bch("101001101110000", 15, "100101101110000", "011001101110000"),
    bch("011001000111101", 8, "011001010111101", "011001010111101"),
    bch("111000010100110", 3, "110000010100110", "001000010100110"),
    bch("000101001101110", 4, "000001001101110", "000001001101110"),
    bch("100100011110101", 7, "110100010110101", "010100001110101"),
    bch("010100110111000", 6, "110100010111000", "000000110111000"),
    bch("110101100100011", 11, "110111100100011", "000101110100011"),
    bch("001101110000101", 8, "001101100000101", "001101100000101"),
    bch("101100100011110", 1, "001100100011110", "001100100011110"),
    bch("011100001010011", 10, "011101001010011", "001100011010011"),
    bch("111101011001000", 13, "111101001011000", "011001001001000"),
    bch("000010100110111", 11, "000010100100111", "100110100110111"),
    bch("100011110101100", 14, "110011110101100", "110011110101100"),
    bch("010011011100001", 7, "110011001100001", "110011001100001"),
    bch("110010001111010", 0, "110010001111010", "110010001111010"),
    bch("001010011011100", 13, "001010011011000", "111010011011100"),
    bch("101011001000111", 2, "101110001000111", "111111011000111"),
    bch("011011100001010", 1, "011011100001011", "101011100001010"),
    bch("111010110010001", 4, "111010110011001", "111110100010001"),
    bch("000111101011001", 5, "000101101011001", "110111111011001"),
    bch("100110111000010", 0, "100110111000010", "100110111000010"),
    bch("010110010001111", 9, "010110110001111", "100110000001111"),
    bch("110111000010100", 10, "010111100010100", "100111010010100"),
    bch("001111010110010", 13, "001011110110010", "111111010110010"),
    bch("101110000101001", 2, "101110000101011", "111010000101001"),
    bch("011110101100100", 5, "011100101100100", "101010101100100"),
    bch("111111111111111", 8, "111111101111111", "111111101111111"),
];

/// Length of the balanced codes compared in the cardinality figure.
pub const FIG1_N: usize = 265;
/// Inner (pre-template) length for that comparison.
pub const FIG1_MBT_INNER_LEN: usize = 256;
/// Range of d over which the one-flip bound is reported superior.
pub const FIG1_OFMB_REGION: (usize, usize) = (20, 110);
/// Sweep range plotted.
pub const FIG1_SWEEP: (usize, usize) = (2, 130);
