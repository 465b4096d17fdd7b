//! Lookup-table decoder synthesized by exhaustive fault enumeration.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Correction, DecodeError};
use crate::frame::{CatSyndrome, EffectTable};
use crate::gadget::GadgetSpec;
use crate::pauli::{bits_from_str, bits_to_string, residual_weight_mod_generator, BitVec, ParseBitsError};
use crate::verify::for_each_combination;

pub const LUT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum LutError {
    #[error("no correction satisfies every fault pattern of syndrome {syndrome}")]
    NoCorrection { syndrome: String },
    #[error("adaptive gadgets cannot be tabulated")]
    Adaptive,
    #[error("unsupported LUT version {0}")]
    Version(u32),
    #[error("bad bit-string: {0}")]
    Bits(#[from] ParseBitsError),
    #[error("entry length {found} does not match {expected}")]
    Length { expected: usize, found: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Syndrome key (round 0 in the low bits) to data correction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutCatLut {
    pub gamma: usize,
    pub t: usize,
    pub rounds: usize,
    pub m: usize,
    table: HashMap<u64, u64>,
}

#[derive(Serialize, Deserialize)]
struct LutFile {
    version: u32,
    gamma: usize,
    t: usize,
    rounds: usize,
    cat_count: usize,
    entries: Vec<LutEntry>,
}

#[derive(Serialize, Deserialize)]
struct LutEntry {
    syndrome: String,
    correction: String,
}

impl CutCatLut {
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn get(&self, key: u64) -> Option<u64> {
        self.table.get(&key).copied()
    }

    pub fn syndrome_bits(&self) -> usize {
        self.rounds * self.m
    }

    /// Entries sorted by syndrome key.
    pub fn entries(&self) -> Vec<(u64, u64)> {
        let mut v: Vec<(u64, u64)> = self.table.iter().map(|(&k, &c)| (k, c)).collect();
        v.sort_unstable();
        v
    }

    pub fn to_json(&self) -> Result<String, LutError> {
        let bits = self.syndrome_bits();
        let file = LutFile {
            version: LUT_FORMAT_VERSION,
            gamma: self.gamma,
            t: self.t,
            rounds: self.rounds,
            cat_count: self.m,
            entries: self
                .entries()
                .into_iter()
                .map(|(s, c)| LutEntry { syndrome: bits_to_string(s, bits), correction: bits_to_string(c, self.gamma) })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self, LutError> {
        let file: LutFile = serde_json::from_str(text)?;
        if file.version != LUT_FORMAT_VERSION {
            return Err(LutError::Version(file.version));
        }
        let bits = file.rounds * file.cat_count;
        let mut table = HashMap::with_capacity(file.entries.len());
        for e in &file.entries {
            let (s, ls) = bits_from_str(&e.syndrome)?;
            let (c, lc) = bits_from_str(&e.correction)?;
            if ls != bits {
                return Err(LutError::Length { expected: bits, found: ls });
            }
            if lc != file.gamma {
                return Err(LutError::Length { expected: file.gamma, found: lc });
            }
            table.insert(s, c);
        }
        Ok(Self { gamma: file.gamma, t: file.t, rounds: file.rounds, m: file.cat_count, table })
    }
}

/// First-seen order of a data pattern: its weight, then its location tuple.
type Seen = (usize, [u16; 8]);

#[derive(Clone, Debug)]
struct Pattern {
    e: u64,
    w: usize,
    seen: Seen,
}

fn tuple_key(locs: &[usize]) -> [u16; 8] {
    let mut k = [u16::MAX; 8];
    for (slot, &l) in k.iter_mut().zip(locs) {
        *slot = l as u16;
    }
    k
}

/// Every reachable `(syndrome, data pattern)` with the fewest faults producing
/// it, ordered by first appearance in the weight-then-lexicographic sweep.
pub(crate) fn collect_patterns(table: &EffectTable, n: usize, t: usize) -> HashMap<u64, Vec<(u64, usize)>> {
    let partial: Vec<HashMap<u64, HashMap<u64, Pattern>>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut local: HashMap<u64, HashMap<u64, Pattern>> = HashMap::new();
            for w in 1..=t {
                for_each_combination(table, n, w, first, |locs, eff, _| {
                    let seen = (w, tuple_key(locs));
                    let per = local.entry(eff.syndrome).or_default();
                    per.entry(eff.data_x).or_insert(Pattern { e: eff.data_x, w, seen });
                });
            }
            local
        })
        .collect();
    let mut merged: HashMap<u64, HashMap<u64, Pattern>> = HashMap::new();
    for part in partial {
        for (s, pats) in part {
            let per = merged.entry(s).or_default();
            for (e, p) in pats {
                per.entry(e)
                    .and_modify(|q| {
                        if p.seen < q.seen {
                            *q = p.clone();
                        }
                    })
                    .or_insert(p);
            }
        }
    }
    merged
        .into_iter()
        .map(|(s, pats)| {
            let mut v: Vec<Pattern> = pats.into_values().collect();
            v.sort_by_key(|p| p.seen);
            (s, v.into_iter().map(|p| (p.e, p.w)).collect())
        })
        .collect()
}

fn satisfies(c: u64, patterns: &[(u64, usize)], gamma: usize) -> bool {
    patterns.iter().all(|&(e, w)| residual_weight_mod_generator(e ^ c, gamma) <= w)
}

/// Vectors within Hamming distance `r` of `center`, by distance then index order.
fn ball(center: u64, gamma: usize, r: usize) -> impl Iterator<Item = u64> {
    (0..=r).flat_map(move |k| {
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..k).collect();
        if k > gamma {
            return out;
        }
        loop {
            out.push(idx.iter().fold(center, |acc, &i| acc ^ (1 << i)));
            let Some(p) = (0..k).rev().find(|&p| idx[p] < gamma - k + p) else { break };
            idx[p] += 1;
            for q in p + 1..k {
                idx[q] = idx[q - 1] + 1;
            }
        }
        out
    })
}

/// Candidate order: zero, then each recorded pattern, then the full ball of
/// radius `w*` around the lowest-weight pattern `e*`. Any valid correction
/// lies in that ball up to the all-ones flip, so the search is complete.
pub(crate) fn search_correction(patterns: &[(u64, usize)], gamma: usize) -> Option<u64> {
    if satisfies(0, patterns, gamma) {
        return Some(0);
    }
    if let Some(&(e, _)) = patterns.iter().find(|&&(e, _)| satisfies(e, patterns, gamma)) {
        return Some(e);
    }
    let &(center, radius) = patterns.iter().min_by_key(|&&(_, w)| w)?;
    ball(center, gamma, radius).find(|&c| satisfies(c, patterns, gamma))
}

/// Tabulates a correction for every syndrome reachable with at most `t` X faults.
pub fn build_cut_cat_lut(spec: &GadgetSpec) -> Result<CutCatLut, LutError> {
    if spec.adaptive {
        return Err(LutError::Adaptive);
    }
    let g = spec.build();
    let effects = EffectTable::new(&g);
    let n = g.relevant_count();
    let patterns = collect_patterns(&effects, n, spec.t);
    let mut keys: Vec<u64> = patterns.keys().copied().collect();
    keys.sort_unstable();
    let bits = spec.base_rounds * spec.cat_count;
    let solved: Vec<(u64, Option<u64>)> =
        keys.par_iter().map(|&s| (s, search_correction(&patterns[&s], spec.gamma))).collect();
    let mut table = HashMap::with_capacity(solved.len() + 1);
    table.insert(0, 0);
    for (s, c) in solved {
        match c {
            Some(c) => {
                table.insert(s, c);
            }
            None => return Err(LutError::NoCorrection { syndrome: bits_to_string(s, bits) }),
        }
    }
    Ok(CutCatLut { gamma: spec.gamma, t: spec.t, rounds: spec.base_rounds, m: spec.cat_count, table })
}

/// Table lookup; syndromes unreachable with `t` faults get no correction.
pub fn decode_lut(lut: &CutCatLut, syn: &CatSyndrome) -> Result<Correction, DecodeError> {
    let found = syn.rounds.len() * syn.cat_count();
    if found != lut.syndrome_bits() || syn.cat_count() != lut.m {
        return Err(DecodeError::SyndromeLength { expected: lut.syndrome_bits(), found });
    }
    let c = lut.get(syn.key()).unwrap_or(0);
    Ok(Correction { x_flips: BitVec::from_u64(lut.gamma, c) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoders::rules::decode_d3d5;
    use crate::pauli::low_mask;

    #[test]
    fn ball_sizes() {
        assert_eq!(ball(0, 6, 0).count(), 1);
        assert_eq!(ball(0, 6, 1).count(), 7);
        assert_eq!(ball(0, 18, 2).count(), 1 + 18 + 153);
        let mut v: Vec<u64> = ball(0b101, 5, 5).collect();
        v.sort_unstable();
        v.dedup();
        assert_eq!(v.len(), 32);
    }

    #[test]
    fn search_examples() {
        // a hook {0,1} and a late fault {} under the same syndrome, each of weight 1
        assert_eq!(search_correction(&[(0b11, 1), (0, 1), (0b10, 1)], 6), Some(0b10));
        assert_eq!(search_correction(&[(0, 1)], 6), Some(0));
        // two weight-0 demands that disagree cannot be met
        assert_eq!(search_correction(&[(0b1, 0), (0b10, 0)], 6), None);
    }

    #[test]
    fn d3_matches_rules() {
        let spec = GadgetSpec::cut_cat(6, 3).unwrap();
        let lut = build_cut_cat_lut(&spec).unwrap();
        assert_eq!(lut.get(0), Some(0));
        for (key, c) in lut.entries() {
            let syn = CatSyndrome::from_key(key, spec.cat_count, 1);
            let cats = decode_d3d5(&syn, 1, spec.cat_count).unwrap();
            let rule = Correction::from_cats(&cats, &spec.pair_map, 6).x_flips.to_u64();
            assert!(c == rule || c == rule ^ low_mask(6), "syndrome {key:b}: lut {c:b} rule {rule:b}");
        }
    }

    #[test]
    fn json_round_trip() {
        let spec = GadgetSpec::cut_cat(10, 5).unwrap();
        let lut = build_cut_cat_lut(&spec).unwrap();
        let back = CutCatLut::from_json(&lut.to_json().unwrap()).unwrap();
        assert_eq!(back, lut);
        assert!(CutCatLut::from_json("{\"version\":9,\"gamma\":1,\"t\":0,\"rounds\":1,\"cat_count\":1,\"entries\":[]}").is_err());
    }

    #[test]
    fn miss_and_length() {
        let spec = GadgetSpec::cut_cat(6, 3).unwrap();
        let lut = build_cut_cat_lut(&spec).unwrap();
        assert!(decode_lut(&lut, &CatSyndrome::trivial(3, 1)).unwrap().is_zero());
        // all three stabilizers firing is unreachable with one fault
        assert!(lut.get(0b111).is_none());
        assert!(decode_lut(&lut, &CatSyndrome::from_key(0b111, 3, 1)).unwrap().is_zero());
        assert!(decode_lut(&lut, &CatSyndrome::trivial(3, 2)).is_err());
    }

    #[test]
    fn deterministic() {
        let spec = GadgetSpec::cut_cat(8, 5).unwrap();
        assert_eq!(build_cut_cat_lut(&spec).unwrap(), build_cut_cat_lut(&spec).unwrap());
    }
}
