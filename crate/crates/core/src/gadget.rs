//! Builders for cut-cat and full-cat extraction gadgets, plus resource
//! accounting.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{
    circuit_depth, count_two_qubit_gates, max_circuit_depth, GadgetCircuit, GateKind, GateOp, Scheme,
};
use crate::decoders::d7;
use crate::frame::CatSyndrome;

/// Extra cut-cat measurements an adaptive distance-7 gadget may execute.
pub const D7_ADAPTIVE_SLOTS: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("unsupported distance {0}; expected 3, 5, 7 or 9")]
    UnsupportedDistance(usize),
    #[error("generator weight {gamma} is below the cat count {cats}")]
    TooFewDataQubits { gamma: usize, cats: usize },
    #[error("generator weight must be at least 1")]
    EmptyGenerator,
    #[error("adaptive round 2 is only defined for distance 7")]
    AdaptiveUnsupported,
    #[error("gadget exceeds the 64-bit packing limit ({0})")]
    TooLarge(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrepModel {
    Ideal,
    Parameterized { prep_cnots: usize, prep_extra_qubits: usize },
}

impl PrepModel {
    /// `2(m-1)` CNOTs (entangle plus verify) and one verification ancilla.
    pub fn default_for(cats: usize) -> Self {
        PrepModel::Parameterized { prep_cnots: 2 * cats.saturating_sub(1), prep_extra_qubits: 1 }
    }

    pub fn cnots(&self) -> usize {
        match self {
            PrepModel::Ideal => 0,
            PrepModel::Parameterized { prep_cnots, .. } => *prep_cnots,
        }
    }

    pub fn extra_qubits(&self) -> usize {
        match self {
            PrepModel::Ideal => 0,
            PrepModel::Parameterized { prep_extra_qubits, .. } => *prep_extra_qubits,
        }
    }
}

/// Order of the cut-cat measurements within a round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutCatSchedule {
    /// `M_0..M_{m-2}` serially on one ancilla, `cat_r` before `cat_{r+1}`,
    /// while the wrap-around `M_{m-1}` sits on a second ancilla that takes
    /// `cat_0` before `M_0` and `cat_{m-1}` after `M_{m-2}`. Every cat then
    /// meets `M_{r-1}` before `M_r`, so a fault between its two checks
    /// flips `M_r` alone.
    #[default]
    Bracketed,
    /// All of `M_0..M_{m-1}` serially, `cat_r` first, then `cat_{r+1}`.
    LowFirst,
    /// `cat_{r+1}` first, then `cat_r`.
    HighFirst,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetSpec {
    pub scheme: Scheme,
    pub gamma: usize,
    pub d: usize,
    pub t: usize,
    pub cat_count: usize,
    pub pair_map: Vec<Vec<usize>>,
    pub base_rounds: usize,
    pub adaptive: bool,
    pub prep_model: PrepModel,
    #[serde(default)]
    pub schedule: CutCatSchedule,
}

pub fn cat_count(gamma: usize, d: usize) -> usize {
    gamma.div_ceil(2).max(d)
}

/// Base cut-cat rounds of a non-adaptive build: 1, 1, 2, 2 for d = 3, 5, 7, 9.
pub fn alpha(d: usize) -> usize {
    (d + 2) / 4
}

/// Pairs on the low cat indices, singles on the high ones.
pub fn pair_map(gamma: usize, cats: usize) -> Result<Vec<Vec<usize>>, GadgetError> {
    if gamma < cats {
        return Err(GadgetError::TooFewDataQubits { gamma, cats });
    }
    let pairs = gamma - cats;
    Ok((0..cats)
        .map(|r| if r < pairs { vec![2 * r, 2 * r + 1] } else { vec![pairs + r] })
        .collect())
}

impl GadgetSpec {
    /// Default cut-cat spec: adaptive one-round build at d=7, `alpha(d)` rounds otherwise.
    pub fn cut_cat(gamma: usize, d: usize) -> Result<Self, GadgetError> {
        if d == 7 {
            Self::build_spec(gamma, d, 1, true)
        } else {
            Self::non_adaptive(gamma, d)
        }
    }

    pub fn non_adaptive(gamma: usize, d: usize) -> Result<Self, GadgetError> {
        Self::build_spec(gamma, d, alpha(d), false)
    }

    pub fn with_rounds(gamma: usize, d: usize, rounds: usize) -> Result<Self, GadgetError> {
        Self::build_spec(gamma, d, rounds, false)
    }

    fn build_spec(gamma: usize, d: usize, base_rounds: usize, adaptive: bool) -> Result<Self, GadgetError> {
        if !matches!(d, 3 | 5 | 7 | 9) {
            return Err(GadgetError::UnsupportedDistance(d));
        }
        if gamma == 0 {
            return Err(GadgetError::EmptyGenerator);
        }
        if adaptive && d != 7 {
            return Err(GadgetError::AdaptiveUnsupported);
        }
        let m = cat_count(gamma, d);
        let map = pair_map(gamma, m)?;
        if gamma > 64 || base_rounds * m > 64 {
            return Err(GadgetError::TooLarge(format!("gamma {gamma}, {base_rounds} rounds of {m}")));
        }
        Ok(Self {
            scheme: Scheme::CutCat,
            gamma,
            d,
            t: (d - 1) / 2,
            cat_count: m,
            pair_map: map,
            base_rounds,
            adaptive,
            prep_model: PrepModel::default_for(m),
            schedule: CutCatSchedule::default(),
        })
    }

    /// Full cat state of `gamma` qubits with one data CNOT each.
    pub fn full_cat(gamma: usize, d: usize) -> Result<Self, GadgetError> {
        if gamma == 0 {
            return Err(GadgetError::EmptyGenerator);
        }
        if gamma > 64 {
            return Err(GadgetError::TooLarge(format!("gamma {gamma}")));
        }
        Ok(Self {
            scheme: Scheme::FullCat,
            gamma,
            d,
            t: d.saturating_sub(1) / 2,
            cat_count: gamma,
            pair_map: (0..gamma).map(|q| vec![q]).collect(),
            base_rounds: 0,
            adaptive: false,
            prep_model: PrepModel::default_for(gamma),
            schedule: CutCatSchedule::default(),
        })
    }

    pub fn with_prep(mut self, prep_model: PrepModel) -> Self {
        self.prep_model = prep_model;
        self
    }

    pub fn with_schedule(mut self, schedule: CutCatSchedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn adaptive_slots(&self) -> usize {
        if self.adaptive {
            D7_ADAPTIVE_SLOTS
        } else {
            0
        }
    }

    pub fn build(&self) -> GadgetCircuit {
        match self.scheme {
            Scheme::CutCat => build_cut_cat(self),
            Scheme::FullCat => build_full_cat(self.gamma),
        }
    }
}

/// Cat qubits controlling data CNOTs in (at most) two layers, then
/// `base_rounds` serial rings of cut-cat measurements on one ancilla, then a
/// transversal X-basis readout of the cat.
pub fn build_cut_cat(spec: &GadgetSpec) -> GadgetCircuit {
    let gamma = spec.gamma;
    let m = spec.cat_count;
    let cat = |r: usize| gamma + r;
    let anc = gamma + m;
    let wrap_anc = anc + 1;
    let bracketed = spec.schedule == CutCatSchedule::Bracketed && m >= 2;
    let mut gates = Vec::new();
    let op = |kind, time_step| GateOp { kind, time_step };

    for r in 0..m {
        gates.push(op(GateKind::PrepZero(cat(r)), 0));
    }
    let layers = spec.pair_map.iter().map(Vec::len).max().unwrap_or(0);
    for layer in 0..layers {
        for (r, targets) in spec.pair_map.iter().enumerate() {
            if let Some(&q) = targets.get(layer) {
                gates.push(op(GateKind::Cnot { control: cat(r), target: q }, layer + 1));
            }
        }
    }

    let mut slot = 0;
    let mut time = layers;
    let mut rounds = Vec::with_capacity(spec.base_rounds);
    for round in 0..spec.base_rounds {
        let mut slots = vec![0; m];
        let serial = if bracketed { m - 1 } else { m };
        if bracketed {
            let prep = if round == 0 { GateKind::PrepZero(wrap_anc) } else { GateKind::Reset(wrap_anc) };
            gates.push(op(prep, time + 1));
            gates.push(op(GateKind::Cnot { control: cat(0), target: wrap_anc }, time + 1));
        }
        for (r, out) in slots.iter_mut().enumerate().take(serial) {
            time += 1;
            let (first, second) = match spec.schedule {
                CutCatSchedule::HighFirst => (cat((r + 1) % m), cat(r)),
                _ => (cat(r), cat((r + 1) % m)),
            };
            let prep = if round == 0 && r == 0 { GateKind::PrepZero(anc) } else { GateKind::Reset(anc) };
            gates.push(op(prep, time));
            gates.push(op(GateKind::Cnot { control: first, target: anc }, time));
            gates.push(op(GateKind::Cnot { control: second, target: anc }, time));
            gates.push(op(GateKind::MeasZ { qubit: anc, slot }, time));
            *out = slot;
            slot += 1;
        }
        if bracketed {
            time += 1;
            gates.push(op(GateKind::Cnot { control: cat(m - 1), target: wrap_anc }, time));
            gates.push(op(GateKind::MeasZ { qubit: wrap_anc, slot }, time));
            slots[m - 1] = slot;
            slot += 1;
        }
        rounds.push(slots);
    }

    let adaptive_insert = gates.len();
    let adaptive_slots: Vec<usize> = (0..spec.adaptive_slots()).map(|k| slot + k).collect();
    slot += adaptive_slots.len();

    time += 1;
    for r in 0..m {
        gates.push(op(GateKind::Hadamard(cat(r)), time));
    }
    let mut parity = Vec::with_capacity(m);
    for r in 0..m {
        gates.push(op(GateKind::MeasZ { qubit: cat(r), slot }, time + 1));
        parity.push(slot);
        slot += 1;
    }

    let ancilla = (spec.base_rounds > 0 || spec.adaptive).then_some(anc);
    GadgetCircuit::new(
        Scheme::CutCat,
        gamma,
        spec.pair_map.clone(),
        gates,
        rounds,
        adaptive_slots,
        adaptive_insert,
        parity,
        ancilla,
    )
}

pub fn build_full_cat(gamma: usize) -> GadgetCircuit {
    let mut gates = Vec::new();
    for q in 0..gamma {
        gates.push(GateOp { kind: GateKind::PrepZero(gamma + q), time_step: 0 });
    }
    for q in 0..gamma {
        gates.push(GateOp { kind: GateKind::Cnot { control: gamma + q, target: q }, time_step: 1 });
    }
    for q in 0..gamma {
        gates.push(GateOp { kind: GateKind::Hadamard(gamma + q), time_step: 2 });
    }
    let mut parity = Vec::with_capacity(gamma);
    for q in 0..gamma {
        gates.push(GateOp { kind: GateKind::MeasZ { qubit: gamma + q, slot: q }, time_step: 3 });
        parity.push(q);
    }
    let insert = gates.len();
    GadgetCircuit::new(
        Scheme::FullCat,
        gamma,
        (0..gamma).map(|q| vec![q]).collect(),
        gates,
        Vec::new(),
        Vec::new(),
        insert,
        parity,
        None,
    )
}

/// Round-2 indices the distance-7 decoder asks for when round 2 repeats
/// round 1 exactly (the fault-free continuation).
pub fn plan_round2_d7(round1: &CatSyndrome) -> BTreeSet<usize> {
    let mut echo = d7::EchoRound2::new(round1.round(0).clone());
    let m = round1.round(0).len();
    // The echo source never fails, and the decoder only errs on source failure.
    let _ = d7::decode_d7_cats(round1, m, &mut echo);
    echo.requested().iter().copied().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub min: usize,
    pub max: usize,
}

impl From<(usize, usize)> for Range {
    fn from((min, max): (usize, usize)) -> Self {
        Self { min, max }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakdown {
    pub prep: usize,
    pub data: usize,
    pub cut_cat: Range,
}

/// Published figures a report can be compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReferenceFigures {
    pub label: &'static str,
    pub two_qubit_gates: Option<usize>,
    pub simultaneous_qubits: Option<usize>,
    pub depth: Option<usize>,
}

/// Flag-based extraction, d=7, weight 14.
pub const FLAG_D7_G14: ReferenceFigures = ReferenceFigures {
    label: "flag d=7 gamma=14",
    two_qubit_gates: Some(44),
    simultaneous_qubits: Some(8),
    depth: Some(44),
};

/// Flag-based extraction, d=9, weight 18.
pub const FLAG_D9_G18: ReferenceFigures = ReferenceFigures {
    label: "flag d=9 gamma=18",
    two_qubit_gates: Some(306),
    simultaneous_qubits: Some(10),
    depth: None,
};

pub const CUT_CAT_D7_G14: ReferenceFigures = ReferenceFigures {
    label: "reference cut-cat d=7 gamma=14",
    two_qubit_gates: None,
    simultaneous_qubits: Some(10),
    depth: None,
};

pub const CUT_CAT_D9_G18: ReferenceFigures = ReferenceFigures {
    label: "reference cut-cat d=9 gamma=18",
    two_qubit_gates: Some(70),
    simultaneous_qubits: Some(13),
    depth: Some(20),
};

pub const FULL_CAT_G14: ReferenceFigures = ReferenceFigures {
    label: "reference full-cat gamma=14",
    two_qubit_gates: Some(39),
    simultaneous_qubits: Some(20),
    depth: Some(1),
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub scheme: Scheme,
    pub gamma: usize,
    pub distance: usize,
    pub cat_qubits: usize,
    pub two_qubit_gates: Range,
    pub depth: Range,
    /// Fast reset: the reused cut-cat ancilla plus the wrap-around one.
    pub simultaneous_qubits: usize,
    /// Slow reset: one cut-cat ancilla per cat qubit.
    pub simultaneous_qubits_slow_reset: usize,
    pub breakdown: Breakdown,
    pub comparisons: Vec<ReferenceFigures>,
}

pub fn resource_report(spec: &GadgetSpec) -> ResourceReport {
    let g = spec.build();
    let prep = spec.prep_model.cnots();
    let gates = count_two_qubit_gates(&g, true, prep);
    let data: usize = spec.pair_map.iter().map(Vec::len).sum();
    let cut_cat = Range { min: gates.0 - data - prep, max: gates.1 - data - prep };
    let extra = spec.prep_model.extra_qubits();
    let m = spec.cat_count;
    let (fast, slow) = match g.ancilla {
        Some(_) => (g.num_qubits() - spec.gamma + extra, 2 * m + extra),
        None => (m + extra, m + extra),
    };
    let comparisons = match (spec.scheme, spec.d, spec.gamma) {
        (Scheme::CutCat, 7, 14) => vec![CUT_CAT_D7_G14, FLAG_D7_G14],
        (Scheme::CutCat, 9, 18) => vec![CUT_CAT_D9_G18, FLAG_D9_G18],
        (Scheme::FullCat, _, 14) => vec![FULL_CAT_G14],
        _ => Vec::new(),
    };
    ResourceReport {
        scheme: spec.scheme,
        gamma: spec.gamma,
        distance: spec.d,
        cat_qubits: m,
        two_qubit_gates: gates.into(),
        depth: Range { min: circuit_depth(&g, true), max: max_circuit_depth(&g, true) },
        simultaneous_qubits: fast,
        simultaneous_qubits_slow_reset: slow,
        breakdown: Breakdown { prep, data, cut_cat },
        comparisons,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::enumerate_fault_locations;
    use proptest::prelude::*;

    #[test]
    fn cat_counts_and_pairs() {
        let s = GadgetSpec::cut_cat(10, 5).unwrap();
        assert_eq!(s.cat_count, 5);
        assert_eq!(s.pair_map[3], vec![6, 7]);
        assert_eq!(s.build().rounds, vec![vec![0, 1, 2, 3, 4]]);

        let s = GadgetSpec::cut_cat(8, 5).unwrap();
        assert_eq!(s.cat_count, 5);
        assert_eq!(s.pair_map.iter().filter(|p| p.len() == 2).count(), 3);
        assert_eq!(s.pair_map.iter().filter(|p| p.len() == 1).count(), 2);

        let s = GadgetSpec::cut_cat(18, 9).unwrap();
        assert_eq!((s.cat_count, s.base_rounds), (9, 2));
        assert_eq!(s.build().rounds.len(), 2);
    }

    #[test]
    fn odd_weight_uses_a_single() {
        let s = GadgetSpec::cut_cat(11, 3).unwrap();
        assert_eq!(s.cat_count, 6);
        assert_eq!(s.pair_map[5], vec![10]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(GadgetSpec::cut_cat(10, 4), Err(GadgetError::UnsupportedDistance(4)));
        assert_eq!(GadgetSpec::cut_cat(2, 3), Err(GadgetError::TooFewDataQubits { gamma: 2, cats: 3 }));
        assert_eq!(GadgetSpec::cut_cat(0, 3), Err(GadgetError::EmptyGenerator));
    }

    #[test]
    fn location_counts_one_round() {
        for (gamma, d) in [(6, 3), (10, 5), (14, 7), (18, 9)] {
            let g = GadgetSpec::with_rounds(gamma, d, 1).unwrap().build();
            assert_eq!(enumerate_fault_locations(&g).len(), 4 * gamma, "gamma {gamma}");
        }
    }

    #[test]
    fn full_cat_shape() {
        let g = build_full_cat(14);
        assert_eq!(count_two_qubit_gates(&g, false, 0), (14, 14));
        assert_eq!(circuit_depth(&g, true), 1);
        assert_eq!(enumerate_fault_locations(&g).len(), 14);
        assert_eq!(count_two_qubit_gates(&build_full_cat(1), false, 0), (1, 1));
        assert_eq!(count_two_qubit_gates(&build_full_cat(4), false, 0), (4, 4));
    }

    #[test]
    fn resource_figures() {
        let r = resource_report(&GadgetSpec::cut_cat(14, 7).unwrap());
        assert_eq!(r.two_qubit_gates, Range { min: 40, max: 48 });
        assert_eq!(r.depth, Range { min: 9, max: 13 });
        assert_eq!(r.breakdown.prep + r.breakdown.data + r.breakdown.cut_cat.min, 40);

        let r = resource_report(&GadgetSpec::cut_cat(18, 9).unwrap());
        assert_eq!(r.two_qubit_gates, Range { min: 70, max: 70 });
        assert_eq!(r.depth, Range { min: 20, max: 20 });

        let r = resource_report(&GadgetSpec::full_cat(14, 7).unwrap().with_prep(PrepModel::Ideal));
        assert_eq!(r.two_qubit_gates, Range { min: 14, max: 14 });
        assert_eq!(r.depth.min, 1);
    }

    #[test]
    fn average_measurements_per_cat() {
        for (d, avg) in [(3, 1), (5, 1), (7, 2), (9, 2)] {
            let s = GadgetSpec::non_adaptive(2 * d, d).unwrap();
            let g = s.build();
            assert_eq!(g.base_measurements(), avg * s.cat_count);
        }
        for gamma in [14usize, 20, 30] {
            let g = GadgetSpec::cut_cat(gamma, 7).unwrap().build();
            let worst = (g.base_measurements() + g.adaptive_slots.len()) as f64 / (gamma as f64 / 2.0);
            assert!((worst - (1.0 + 8.0 / gamma as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn slots_unique() {
        let g = GadgetSpec::cut_cat(18, 9).unwrap().build();
        let mut seen = BTreeSet::new();
        for op in &g.gates {
            if let GateKind::MeasZ { slot, .. } = op.kind {
                assert!(seen.insert(slot));
            }
        }
        for r in g.rounds.iter().flatten() {
            assert!(seen.contains(r));
        }
    }

    proptest! {
        #[test]
        fn pair_map_partitions_data(gamma in 1usize..64, d in prop::sample::select(vec![3usize, 5, 7, 9])) {
            let m = cat_count(gamma, d);
            if let Ok(map) = pair_map(gamma, m) {
                let mut all: Vec<usize> = map.iter().flatten().copied().collect();
                all.sort_unstable();
                prop_assert_eq!(all, (0..gamma).collect::<Vec<_>>());
                prop_assert_eq!(map.iter().filter(|p| p.len() == 1).count(), 2 * m - gamma);
            } else {
                prop_assert!(gamma < m);
            }
        }

        #[test]
        fn depth_ignores_data_cnot_order(gamma in 6usize..30, seed in any::<u64>()) {
            let g = GadgetSpec::cut_cat(gamma, 3).unwrap().build();
            let mut shuffled = g.gates.clone();
            let layer: Vec<usize> = (0..shuffled.len())
                .filter(|&i| shuffled[i].time_step == 1 || shuffled[i].time_step == 2)
                .collect();
            let mut state = seed;
            for i in (1..layer.len()).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                shuffled.swap(layer[i], layer[j]);
            }
            let h = GadgetCircuit::new(g.scheme, g.gamma, g.pair_map.clone(), shuffled, g.rounds.clone(),
                g.adaptive_slots.clone(), g.adaptive_insert, g.generator_parity_slots.clone(), g.ancilla);
            prop_assert_eq!(circuit_depth(&h, true), circuit_depth(&g, true));
        }
    }
}
