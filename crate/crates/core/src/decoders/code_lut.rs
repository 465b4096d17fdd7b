//! Minimum-weight lookup decoder for a whole CSS code.

use std::collections::HashMap;

use thiserror::Error;

use crate::pauli::{BitVec, CssCode};

/// Default ceiling on enumerated error patterns per error type.
pub const DEFAULT_PATTERN_CAP: u64 = 20_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("enumerating errors up to weight {weight} on {n} qubits needs {needed} patterns, cap is {cap}")]
pub struct EnumerationCap {
    pub n: usize,
    pub weight: usize,
    pub needed: u64,
    pub cap: u64,
}

/// Syndrome to lowest-weight error, separately for X and Z errors.
///
/// X errors are detected by the Z-type generators and vice versa.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeLut {
    pub n: usize,
    pub max_weight: usize,
    x_errors: HashMap<BitVec, BitVec>,
    z_errors: HashMap<BitVec, BitVec>,
}

impl CodeLut {
    /// Most likely X error on the data for a Z-generator syndrome.
    pub fn x_error(&self, z_syndrome: &BitVec) -> Option<&BitVec> {
        self.x_errors.get(z_syndrome)
    }

    pub fn z_error(&self, x_syndrome: &BitVec) -> Option<&BitVec> {
        self.z_errors.get(x_syndrome)
    }

    pub fn x_entries(&self) -> usize {
        self.x_errors.len()
    }

    pub fn z_entries(&self) -> usize {
        self.z_errors.len()
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul((n - i) as u64) / (i as u64 + 1))
}

fn syndrome_of(checks: &[BitVec], err: &BitVec) -> BitVec {
    let mut s = BitVec::zeros(checks.len());
    for (i, c) in checks.iter().enumerate() {
        s.set(i, c.dot(err));
    }
    s
}

fn fill(checks: &[BitVec], n: usize, max_weight: usize) -> HashMap<BitVec, BitVec> {
    let mut table = HashMap::new();
    for w in 0..=max_weight.min(n) {
        let mut idx: Vec<usize> = (0..w).collect();
        loop {
            let err = BitVec::from_indices(n, idx.iter().copied());
            table.entry(syndrome_of(checks, &err)).or_insert(err);
            let Some(p) = (0..w).rev().find(|&p| idx[p] < n - w + p) else { break };
            idx[p] += 1;
            for q in p + 1..w {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    table
}

/// Tables filled in ascending weight, lexicographic within a weight; the
/// first error to reach a syndrome keeps it. Enumerates up to weight `t`.
pub fn build_code_lut(code: &CssCode) -> Result<CodeLut, EnumerationCap> {
    build_code_lut_with(code, code.t(), DEFAULT_PATTERN_CAP)
}

pub fn build_code_lut_with(code: &CssCode, max_weight: usize, cap: u64) -> Result<CodeLut, EnumerationCap> {
    let needed = (0..=max_weight.min(code.n)).map(|w| binomial(code.n, w)).fold(0u64, u64::saturating_add);
    if needed > cap {
        return Err(EnumerationCap { n: code.n, weight: max_weight, needed, cap });
    }
    Ok(CodeLut {
        n: code.n,
        max_weight,
        x_errors: fill(&code.hz, code.n, max_weight),
        z_errors: fill(&code.hx, code.n, max_weight),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::steane_code;

    #[test]
    fn steane_single_errors() {
        let code = steane_code();
        let lut = build_code_lut(&code).unwrap();
        assert_eq!(lut.z_entries(), 8);
        assert_eq!(lut.z_error(&BitVec::zeros(3)), Some(&BitVec::zeros(7)));
        for q in 0..7 {
            let e = BitVec::from_indices(7, [q]);
            assert_eq!(lut.z_error(&syndrome_of(&code.hx, &e)), Some(&e));
            assert_eq!(lut.x_error(&syndrome_of(&code.hz, &e)), Some(&e));
        }
    }

    #[test]
    fn cap_enforced() {
        let code = steane_code();
        let err = build_code_lut_with(&code, 3, 10).unwrap_err();
        assert_eq!(err.needed, 1 + 7 + 21 + 35);
    }
}
