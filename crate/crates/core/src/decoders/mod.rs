//! Correction selection from cut-cat syndromes.
//!
//! Rule decoders work in cat-qubit indices: correcting cat `i` flips the last
//! data qubit it touches (`q_{2i+1}` when it holds a pair). The LUT decoder
//! stores data corrections directly.

pub mod arcs;
pub mod code_lut;
pub mod d7;
pub mod lut;
pub mod rules;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::{CatSyndrome, FrameError, Round2Source};
use crate::gadget::GadgetSpec;
use crate::pauli::BitVec;

pub use arcs::{arc_sets, ArcSets};
pub use code_lut::{build_code_lut, CodeLut};
pub use d7::{decode_d7, j_list};
pub use lut::{build_cut_cat_lut, decode_lut, CutCatLut, LutError};
pub use rules::decode_d3d5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecodeError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("arc sets need an even trigger set, got {0} entries")]
    OddTriggerSet(usize),
    #[error("no list J({n_a},{k})")]
    UndefinedList { n_a: usize, k: usize },
    #[error("syndrome has {found} bits, decoder expects {expected}")]
    SyndromeLength { expected: usize, found: usize },
}

/// X flips on the measured generator's support.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Correction {
    pub x_flips: BitVec,
}

impl Correction {
    pub fn zero(gamma: usize) -> Self {
        Self { x_flips: BitVec::zeros(gamma) }
    }

    /// Flips the tail data qubit of each listed cat; repeated cats cancel.
    pub fn from_cats(cats: &[usize], pair_map: &[Vec<usize>], gamma: usize) -> Self {
        let mut x_flips = BitVec::zeros(gamma);
        for &c in cats {
            if let Some(&q) = pair_map.get(c).and_then(|p| p.last()) {
                x_flips.flip(q);
            }
        }
        Self { x_flips }
    }

    pub fn is_zero(&self) -> bool {
        self.x_flips.is_zero()
    }
}

/// A strategy mapping a syndrome (plus optional adaptive round 2) to a correction.
pub trait CatDecoder: Send + Sync {
    fn decode(&self, syn: &CatSyndrome, round2: &mut dyn Round2Source) -> Result<Correction, DecodeError>;

    fn name(&self) -> &'static str;
}

/// Round-2 source for gadgets without adaptive measurements.
pub struct NoRound2;

impl Round2Source for NoRound2 {
    fn measure(&mut self, _: &[usize]) -> Result<Vec<bool>, FrameError> {
        Err(FrameError::Round2Exhausted(0))
    }
}

/// Never corrects anything.
pub struct IdentityDecoder {
    pub gamma: usize,
}

impl CatDecoder for IdentityDecoder {
    fn decode(&self, _: &CatSyndrome, _: &mut dyn Round2Source) -> Result<Correction, DecodeError> {
        Ok(Correction::zero(self.gamma))
    }

    fn name(&self) -> &'static str {
        "identity"
    }
}

/// The distance-3/5 rule decoder.
pub struct RuleDecoder {
    pub t: usize,
    pub gamma: usize,
    pub pair_map: Vec<Vec<usize>>,
}

impl RuleDecoder {
    pub fn new(spec: &GadgetSpec) -> Self {
        Self { t: spec.t, gamma: spec.gamma, pair_map: spec.pair_map.clone() }
    }
}

impl CatDecoder for RuleDecoder {
    fn decode(&self, syn: &CatSyndrome, _: &mut dyn Round2Source) -> Result<Correction, DecodeError> {
        let cats = rules::decode_d3d5(syn, self.t, self.pair_map.len())?;
        Ok(Correction::from_cats(&cats, &self.pair_map, self.gamma))
    }

    fn name(&self) -> &'static str {
        "rules"
    }
}

/// The adaptive distance-7 decoder.
pub struct D7Decoder {
    pub gamma: usize,
    pub pair_map: Vec<Vec<usize>>,
}

impl D7Decoder {
    pub fn new(spec: &GadgetSpec) -> Self {
        Self { gamma: spec.gamma, pair_map: spec.pair_map.clone() }
    }
}

impl CatDecoder for D7Decoder {
    fn decode(&self, syn: &CatSyndrome, round2: &mut dyn Round2Source) -> Result<Correction, DecodeError> {
        let cats = d7::decode_d7_cats(syn, self.pair_map.len(), round2)?;
        Ok(Correction::from_cats(&cats, &self.pair_map, self.gamma))
    }

    fn name(&self) -> &'static str {
        "d7"
    }
}

pub struct LutDecoder {
    pub lut: CutCatLut,
}

impl CatDecoder for LutDecoder {
    fn decode(&self, syn: &CatSyndrome, _: &mut dyn Round2Source) -> Result<Correction, DecodeError> {
        lut::decode_lut(&self.lut, syn)
    }

    fn name(&self) -> &'static str {
        "lut"
    }
}

/// The rule-based decoder matching a spec's distance, if one exists.
pub fn rule_decoder_for(spec: &GadgetSpec) -> Option<Box<dyn CatDecoder>> {
    match (spec.d, spec.adaptive) {
        (3 | 5, false) => Some(Box::new(RuleDecoder::new(spec))),
        (7, true) => Some(Box::new(D7Decoder::new(spec))),
        _ => None,
    }
}
