//! Binary-symplectic Pauli arithmetic and CSS code handling.
//!
//! Qubit `i` of a frame or generator is bit `i` of a word-packed [`BitVec`].
//! A CSS code is a pair of support matrices: X-type generators (which detect
//! Z errors) and Z-type generators (which detect X errors).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const WORD_BITS: usize = 64;

/// Fixed-length bit-vector packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    /// Builds from the low `len` bits of `word`.
    pub fn from_u64(len: usize, word: u64) -> Self {
        assert!(len <= WORD_BITS, "from_u64 needs len <= 64");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = if len == WORD_BITS {
                word
            } else {
                word & ((1u64 << len) - 1)
            };
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "bit-vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Parity of the overlap `|self ∧ other|`.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "bit-vector length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    /// Low word, for vectors of at most 64 bits.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD_BITS, "to_u64 needs len <= 64");
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseBitsError {
    #[error("invalid bit character {0:?}")]
    InvalidChar(char),
    #[error("bit-string of length {0} does not fit in one word")]
    TooLong(usize),
}

impl FromStr for BitVec {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut v = BitVec::zeros(chars.len());
        for (i, c) in chars.into_iter().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(ParseBitsError::InvalidChar(other)),
            }
        }
        Ok(v)
    }
}

impl Serialize for BitVec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Formats the low `len` bits of a word, bit 0 first.
pub fn bits_to_string(word: u64, len: usize) -> String {
    (0..len)
        .map(|i| if (word >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parses a bit-string (bit 0 first) of at most 64 characters.
pub fn bits_from_str(s: &str) -> Result<(u64, usize), ParseBitsError> {
    let v: BitVec = s.parse()?;
    if v.len() > WORD_BITS {
        return Err(ParseBitsError::TooLong(v.len()));
    }
    Ok((v.to_u64(), v.len()))
}

/// Pauli error on a register, stored as X and Z components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliFrame {
    pub x_bits: BitVec,
    pub z_bits: BitVec,
}

impl PauliFrame {
    pub fn identity(n: usize) -> Self {
        Self {
            x_bits: BitVec::zeros(n),
            z_bits: BitVec::zeros(n),
        }
    }

    pub fn from_parts(x_bits: BitVec, z_bits: BitVec) -> Self {
        assert_eq!(x_bits.len(), z_bits.len(), "frame halves differ in length");
        Self { x_bits, z_bits }
    }

    pub fn len(&self) -> usize {
        self.x_bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_bits.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.x_bits.is_zero() && self.z_bits.is_zero()
    }

    /// Product up to phase: XOR of each component.
    pub fn compose(&self, other: &PauliFrame) -> PauliFrame {
        PauliFrame {
            x_bits: self.x_bits.xor(&other.x_bits),
            z_bits: self.z_bits.xor(&other.z_bits),
        }
    }

    pub fn compose_assign(&mut self, other: &PauliFrame) {
        self.x_bits.xor_assign(&other.x_bits);
        self.z_bits.xor_assign(&other.z_bits);
    }

    /// Number of qubits carrying a non-identity Pauli.
    pub fn weight(&self) -> usize {
        self.x_bits
            .words()
            .iter()
            .zip(self.z_bits.words())
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// Symplectic product: true when the two Paulis anticommute.
    pub fn anticommutes(&self, other: &PauliFrame) -> bool {
        self.x_bits.dot(&other.z_bits) ^ self.z_bits.dot(&other.x_bits)
    }
}

/// One bit per generator, X-type generators first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    pub bits: BitVec,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: row has {found} entries, expected {expected}")]
    RowLength {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("X generator {x_row} anticommutes with Z generator {z_row}")]
    Commutation { x_row: usize, z_row: usize },
    #[error("generators give {found} independent checks, expected n - k = {expected}")]
    RankDeficient { expected: usize, found: usize },
    #[error("logical operators: {0}")]
    Logical(String),
    #[error("frame acts on {found} qubits, code has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Which half of a CSS code a generator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorType {
    X,
    Z,
}

/// CSS stabilizer code with optional logical operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub hx: Vec<BitVec>,
    pub hz: Vec<BitVec>,
    /// X-type logical operators (detected by `lz`).
    pub lx: Vec<BitVec>,
    /// Z-type logical operators.
    pub lz: Vec<BitVec>,
    pub gen_weights: Vec<usize>,
}

impl CssCode {
    /// Validates the generator matrices and builds the code.
    pub fn new(
        n: usize,
        k: usize,
        d: usize,
        hx: Vec<BitVec>,
        hz: Vec<BitVec>,
        lx: Vec<BitVec>,
        lz: Vec<BitVec>,
    ) -> Result<Self, CodeError> {
        for row in hx.iter().chain(&hz).chain(&lx).chain(&lz) {
            if row.len() != n {
                return Err(CodeError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        for (i, x) in hx.iter().enumerate() {
            for (j, z) in hz.iter().enumerate() {
                if x.dot(z) {
                    return Err(CodeError::Commutation { x_row: i, z_row: j });
                }
            }
        }
        let expected = n.checked_sub(k).ok_or(CodeError::RankDeficient {
            expected: 0,
            found: hx.len() + hz.len(),
        })?;
        let rank = gf2_rank(&hx) + gf2_rank(&hz);
        if hx.len() + hz.len() != expected || rank != expected {
            return Err(CodeError::RankDeficient {
                expected,
                found: rank.min(hx.len() + hz.len()),
            });
        }
        validate_logicals(k, &hx, &hz, &lx, &lz)?;
        let gen_weights = hx.iter().chain(&hz).map(BitVec::count_ones).collect();
        Ok(Self {
            n,
            k,
            d,
            hx,
            hz,
            lx,
            lz,
            gen_weights,
        })
    }

    pub fn t(&self) -> usize {
        self.d.saturating_sub(1) / 2
    }

    pub fn num_generators(&self) -> usize {
        self.hx.len() + self.hz.len()
    }

    pub fn has_logicals(&self) -> bool {
        !self.lx.is_empty() && !self.lz.is_empty()
    }

    /// Generator `i` in the X-first ordering used by [`Syndrome`].
    pub fn generator(&self, i: usize) -> (GeneratorType, &BitVec) {
        if i < self.hx.len() {
            (GeneratorType::X, &self.hx[i])
        } else {
            (GeneratorType::Z, &self.hz[i - self.hx.len()])
        }
    }

    /// Serializes in the same format accepted by [`parse_css_code`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.k, self.d);
        let mut section = |name: &str, rows: &[BitVec]| {
            out.push_str(&format!("{name} {}\n", rows.len()));
            for r in rows {
                out.push_str(&r.to_string());
                out.push('\n');
            }
        };
        section("X", &self.hx);
        section("Z", &self.hz);
        if !self.lx.is_empty() {
            section("LX", &self.lx);
        }
        if !self.lz.is_empty() {
            section("LZ", &self.lz);
        }
        out
    }
}

fn validate_logicals(
    k: usize,
    hx: &[BitVec],
    hz: &[BitVec],
    lx: &[BitVec],
    lz: &[BitVec],
) -> Result<(), CodeError> {
    if lx.is_empty() && lz.is_empty() {
        return Ok(());
    }
    if lx.len() != k || lz.len() != k {
        return Err(CodeError::Logical(format!(
            "expected {k} LX and {k} LZ rows, found {} and {}",
            lx.len(),
            lz.len()
        )));
    }
    for (i, l) in lx.iter().enumerate() {
        if hz.iter().any(|z| z.dot(l)) {
            return Err(CodeError::Logical(format!("LX {i} anticommutes with a Z generator")));
        }
    }
    for (i, l) in lz.iter().enumerate() {
        if hx.iter().any(|x| x.dot(l)) {
            return Err(CodeError::Logical(format!("LZ {i} anticommutes with an X generator")));
        }
    }
    for (i, a) in lx.iter().enumerate() {
        for (j, b) in lz.iter().enumerate() {
            if a.dot(b) != (i == j) {
                return Err(CodeError::Logical(format!(
                    "LX {i} and LZ {j} do not form a symplectic pair"
                )));
            }
        }
    }
    Ok(())
}

/// Rank over GF(2) by Gaussian elimination.
pub fn gf2_rank(rows: &[BitVec]) -> usize {
    let mut rows: Vec<BitVec> = rows.to_vec();
    let width = rows.first().map_or(0, BitVec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        rank += 1;
    }
    rank
}

/// Parses the line-oriented CSS code format.
///
/// ```text
/// # comment
/// n k d
/// X r
/// <r rows of n bits>
/// Z s
/// <s rows of n bits>
/// LX k      (optional)
/// LZ k      (optional)
/// ```
pub fn parse_css_code(text: &str) -> Result<CssCode, CodeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .peekable();

    let (hline, header) = lines.next().ok_or(CodeError::Malformed {
        line: 1,
        message: "missing `n k d` header".into(),
    })?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| CodeError::Malformed {
            line: hline,
            message: format!("bad header {header:?}"),
        })?;
    let [n, k, d] = nums[..] else {
        return Err(CodeError::Malformed {
            line: hline,
            message: "header must be `n k d`".into(),
        });
    };

    let mut sections: Vec<(String, Vec<BitVec>)> = Vec::new();
    while let Some((line, text)) = lines.next() {
        let mut parts = text.split_whitespace();
        let name = parts.next().unwrap_or_default().to_string();
        if !matches!(name.as_str(), "X" | "Z" | "LX" | "LZ") {
            return Err(CodeError::Malformed {
                line,
                message: format!("expected a section header, found {text:?}"),
            });
        }
        if sections.iter().any(|(s, _)| *s == name) {
            return Err(CodeError::Malformed {
                line,
                message: format!("duplicate section {name}"),
            });
        }
        let count: usize = parts
            .next()
            .and_then(|c| c.parse().ok())
            .filter(|_| parts.next().is_none())
            .ok_or_else(|| CodeError::Malformed {
                line,
                message: format!("section header must be `{name} <count>`"),
            })?;
        let mut rows = Vec::with_capacity(count);
        for _ in 0..count {
            let (rline, rtext) = lines.next().ok_or(CodeError::Malformed {
                line,
                message: format!("section {name} ended early"),
            })?;
            let row: BitVec = rtext.parse().map_err(|e: ParseBitsError| CodeError::Malformed {
                line: rline,
                message: e.to_string(),
            })?;
            if row.len() != n {
                return Err(CodeError::RowLength {
                    line: rline,
                    expected: n,
                    found: row.len(),
                });
            }
            rows.push(row);
        }
        sections.push((name, rows));
    }

    let mut take = |name: &str| {
        sections
            .iter_mut()
            .find(|(s, _)| s == name)
            .map(|(_, rows)| std::mem::take(rows))
    };
    let hx = take("X").ok_or(CodeError::Malformed {
        line: hline,
        message: "missing X section".into(),
    })?;
    let hz = take("Z").ok_or(CodeError::Malformed {
        line: hline,
        message: "missing Z section".into(),
    })?;
    let lx = take("LX").unwrap_or_default();
    let lz = take("LZ").unwrap_or_default();
    CssCode::new(n, k, d, hx, hz, lx, lz)
}

/// Syndrome of `err`: Z components flip X-generator bits and vice versa.
pub fn code_syndrome(code: &CssCode, err: &PauliFrame) -> Result<Syndrome, CodeError> {
    if err.len() != code.n {
        return Err(CodeError::DimensionMismatch {
            expected: code.n,
            found: err.len(),
        });
    }
    let mut bits = BitVec::zeros(code.num_generators());
    for (i, g) in code.hx.iter().enumerate() {
        bits.set(i, g.dot(&err.z_bits));
    }
    for (j, g) in code.hz.iter().enumerate() {
        bits.set(code.hx.len() + j, g.dot(&err.x_bits));
    }
    Ok(Syndrome { bits })
}

/// Weight of an error on a generator's support, modulo that generator.
///
/// The measured X-type generator acts as X on all `gamma` support qubits, so
/// `v` and its complement are the same error up to a stabilizer.
#[inline]
pub fn residual_weight_mod_generator(v: u64, gamma: usize) -> usize {
    debug_assert!(gamma == 64 || v >> gamma == 0, "bits beyond the support");
    let w = v.count_ones() as usize;
    w.min(gamma - w)
}

/// Mask with the low `len` bits set.
#[inline]
pub fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// The [[7,1,3]] Steane code with weight-3 logical operators.
pub fn steane_code() -> CssCode {
    parse_css_code(STEANE_TEXT).expect("built-in Steane code is valid")
}

pub const STEANE_TEXT: &str = "\
# [[7,1,3]] Steane code
7 1 3
X 3
1010101
0110011
0001111
Z 3
1010101
0110011
0001111
LX 1
1110000
LZ 1
1110000
";

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn steane_parses_with_weight_four_generators() {
        let code = steane_code();
        assert_eq!((code.n, code.k, code.d), (7, 1, 3));
        assert_eq!(code.gen_weights, vec![4; 6]);
        assert_eq!(code.t(), 1);
    }

    #[test]
    fn anticommuting_rows_are_rejected() {
        let text = "2 0 1\nX 1\n10\nZ 1\n11\n";
        assert_eq!(
            parse_css_code(text),
            Err(CodeError::Commutation { x_row: 0, z_row: 0 })
        );
    }

    #[test]
    fn even_overlap_two_qubit_code() {
        let code = parse_css_code("2 0 1\nX 1\n11\nZ 1\n11\n").unwrap();
        assert_eq!(code.gen_weights, vec![2, 2]);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            parse_css_code("7 1\nX 0\nZ 0\n"),
            Err(CodeError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_css_code("3 1 1\nX 1\n1100\nZ 1\n110\n"),
            Err(CodeError::RowLength { line: 3, expected: 3, found: 4 })
        ));
        assert!(matches!(
            parse_css_code("3 1 1\nX 1\n110\nZ 2\n110\n"),
            Err(CodeError::Malformed { .. })
        ));
        // two identical X rows: 2 rows but rank 1
        assert!(matches!(
            parse_css_code("3 1 1\nX 2\n110\n110\nZ 0\n"),
            Err(CodeError::RankDeficient { expected: 2, found: 1 })
        ));
        assert!(matches!(
            parse_css_code("3 0 1\nX 1\n110\nZ 1\n011\n"),
            Err(CodeError::Commutation { .. }) | Err(CodeError::RankDeficient { .. })
        ));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = format!("# header comment\n\n{STEANE_TEXT}\n# trailing\n");
        assert_eq!(parse_css_code(&text).unwrap(), steane_code());
    }

    #[test]
    fn syndrome_examples() {
        let code = steane_code();
        let id = PauliFrame::identity(7);
        assert!(code_syndrome(&code, &id).unwrap().bits.is_zero());

        let mut z0 = PauliFrame::identity(7);
        z0.z_bits.set(0, true);
        let s = code_syndrome(&code, &z0).unwrap();
        // qubit 0 is only in X row 0
        assert_eq!(s.bits.to_string(), "100000");

        let stab = PauliFrame::from_parts(code.hz[2].clone(), code.hx[1].clone());
        assert!(code_syndrome(&code, &stab).unwrap().bits.is_zero());

        assert!(matches!(
            code_syndrome(&code, &PauliFrame::identity(6)),
            Err(CodeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn residual_weight_examples() {
        assert_eq!(residual_weight_mod_generator(0, 10), 0);
        assert_eq!(residual_weight_mod_generator(low_mask(10), 10), 0);
        assert_eq!(residual_weight_mod_generator(0b1111111, 10), 3);
    }

    #[test]
    fn logical_operators_are_validated() {
        let bad = STEANE_TEXT.replace("LX 1\n1110000", "LX 1\n1000000");
        assert!(matches!(parse_css_code(&bad), Err(CodeError::Logical(_))));
    }

    fn frame_strategy(n: usize) -> impl Strategy<Value = PauliFrame> {
        (prop::collection::vec(any::<bool>(), n), prop::collection::vec(any::<bool>(), n)).prop_map(
            move |(x, z)| {
                PauliFrame::from_parts(
                    BitVec::from_indices(n, x.iter().enumerate().filter(|p| *p.1).map(|p| p.0)),
                    BitVec::from_indices(n, z.iter().enumerate().filter(|p| *p.1).map(|p| p.0)),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn syndrome_is_linear(a in frame_strategy(7), b in frame_strategy(7)) {
            let code = steane_code();
            let sa = code_syndrome(&code, &a).unwrap().bits;
            let sb = code_syndrome(&code, &b).unwrap().bits;
            let sab = code_syndrome(&code, &a.compose(&b)).unwrap().bits;
            prop_assert_eq!(sab, sa.xor(&sb));
            prop_assert!(a.compose(&a).is_identity());
        }

        #[test]
        fn residual_weight_is_complement_invariant(v in any::<u64>(), gamma in 1usize..=64) {
            let v = v & low_mask(gamma);
            prop_assert_eq!(
                residual_weight_mod_generator(v, gamma),
                residual_weight_mod_generator(!v & low_mask(gamma), gamma)
            );
        }

        #[test]
        fn code_text_round_trips(order in Just((0..7).collect::<Vec<usize>>()).prop_shuffle()) {
            // relabelling Steane qubits keeps it a valid code
            let code = steane_code();
            let relabel = |r: &BitVec| BitVec::from_indices(7, r.iter_ones().map(|q| order[q]));
            let shuffled = CssCode::new(
                7, 1, 3,
                code.hx.iter().map(relabel).collect(),
                code.hz.iter().map(relabel).collect(),
                code.lx.iter().map(relabel).collect(),
                code.lz.iter().map(relabel).collect(),
            ).unwrap();
            let reparsed = parse_css_code(&shuffled.to_text()).unwrap();
            prop_assert_eq!(reparsed, shuffled);
        }
    }

    #[test]
    fn bitvec_basics() {
        let v: BitVec = "0110".parse().unwrap();
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(v.to_u64(), 0b0110);
        assert_eq!(bits_to_string(0b0110, 4), "0110");
        assert_eq!(bits_from_str("0110").unwrap(), (0b0110, 4));
        let big = BitVec::from_indices(130, [0, 64, 129]);
        assert_eq!(big.count_ones(), 3);
        assert_eq!(big.iter_ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert!("01x".parse::<BitVec>().is_err());
    }
}
