//! Pauli-frame propagation with fault injection, and circuit-level noise
//! sampling.
//!
//! Two propagators are provided. [`propagate`] walks the gate list and is the
//! reference. [`EffectTable`] precomputes each location's effect and combines
//! them by XOR, which is valid because every gate in a gadget is Clifford.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{AdaptiveSite, FaultKind, GadgetCircuit, GateKind};
use crate::pauli::BitVec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("unknown fault location {0}")]
    UnknownFault(usize),
    #[error("location {0} appears twice in a fault set")]
    DuplicateFault(usize),
    #[error("round-2 index {index} is out of range for {m} cut-cat stabilizers")]
    Round2Index { index: usize, m: usize },
    #[error("more than {0} round-2 measurements requested")]
    Round2Exhausted(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn has_x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn has_z(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    /// Index 1..=3 in the (x, z) = (1,0), (1,1), (0,1) order; 0 is identity.
    fn from_bits(x: bool, z: bool) -> Option<Pauli> {
        match (x, z) {
            (false, false) => None,
            (true, false) => Some(Pauli::X),
            (true, true) => Some(Pauli::Y),
            (false, true) => Some(Pauli::Z),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fault {
    pub location: usize,
    pub pauli: Pauli,
}

/// Faults sorted by location, at most one per location.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaultSet {
    faults: Vec<Fault>,
}

impl FaultSet {
    pub fn new(mut faults: Vec<Fault>) -> Result<Self, FrameError> {
        faults.sort_unstable();
        if let Some(w) = faults.windows(2).find(|w| w[0].location == w[1].location) {
            return Err(FrameError::DuplicateFault(w[0].location));
        }
        Ok(Self { faults })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn x_faults(locations: &[usize]) -> Result<Self, FrameError> {
        Self::new(locations.iter().map(|&location| Fault { location, pauli: Pauli::X }).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fault> {
        self.faults.iter()
    }

    pub fn len(&self) -> usize {
        self.faults.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faults.is_empty()
    }

    pub fn as_slice(&self) -> &[Fault] {
        &self.faults
    }
}

/// Cut-cat outcomes of every executed round.
///
/// `rounds` holds full rings. Adaptive round-2 outcomes are kept separately in
/// execution order, since only a handful of stabilizers are re-measured.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CatSyndrome {
    pub rounds: Vec<BitVec>,
    pub adaptive: Vec<(usize, bool)>,
}

impl CatSyndrome {
    pub fn new(rounds: Vec<BitVec>) -> Self {
        Self { rounds, adaptive: Vec::new() }
    }

    pub fn trivial(m: usize, rounds: usize) -> Self {
        Self::new(vec![BitVec::zeros(m); rounds])
    }

    /// One round from the indices that fired.
    pub fn from_triggers(m: usize, fired: &[usize]) -> Self {
        Self::new(vec![BitVec::from_indices(m, fired.iter().copied())])
    }

    /// Unpacks `rounds` rings of `m` bits from a packed key.
    pub fn from_key(key: u64, m: usize, rounds: usize) -> Self {
        Self::new((0..rounds).map(|r| BitVec::from_u64(m, key >> (r * m))).collect())
    }

    pub fn cat_count(&self) -> usize {
        self.rounds.first().map_or(0, BitVec::len)
    }

    pub fn round(&self, r: usize) -> &BitVec {
        &self.rounds[r]
    }

    /// The ordered fired indices of round 1.
    pub fn trigger_set(&self) -> Vec<usize> {
        self.rounds.first().map(|b| b.iter_ones().collect()).unwrap_or_default()
    }

    pub fn n_a(&self) -> usize {
        self.rounds.first().map_or(0, BitVec::count_ones)
    }

    /// Full rounds concatenated, round 0 in the low bits.
    pub fn key(&self) -> u64 {
        let m = self.cat_count();
        self.rounds.iter().enumerate().fold(0, |acc, (r, b)| acc | (b.to_u64() << (r * m)))
    }

    pub fn is_trivial(&self) -> bool {
        self.rounds.iter().all(BitVec::is_zero) && self.adaptive.iter().all(|&(_, b)| !b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationResult {
    pub data_x_residual: BitVec,
    pub data_z_residual: BitVec,
    pub cat_syndrome: CatSyndrome,
    pub generator_bit_flipped: bool,
}

/// Supplies adaptive round-2 outcomes for the listed cut-cat stabilizers.
pub trait Round2Source {
    fn measure(&mut self, indices: &[usize]) -> Result<Vec<bool>, FrameError>;
}

/// Where each fault component enters the gate walk.
struct Injection {
    before: Vec<Vec<(usize, Pauli)>>,
    after: Vec<Vec<(usize, Pauli)>>,
    adaptive: Vec<[Option<Pauli>; 6]>,
}

fn site_index(site: AdaptiveSite) -> usize {
    AdaptiveSite::ALL.iter().position(|&s| s == site).unwrap_or(0)
}

impl Injection {
    fn new(g: &GadgetCircuit, faults: &FaultSet) -> Result<Self, FrameError> {
        let n = g.gates.len();
        let mut inj = Injection {
            before: vec![Vec::new(); n],
            after: vec![Vec::new(); n],
            adaptive: vec![[None; 6]; g.adaptive_slots.len()],
        };
        for f in faults.iter() {
            let loc = g.location(f.location).ok_or(FrameError::UnknownFault(f.location))?;
            match loc.kind {
                FaultKind::CatInit { cat } => {
                    let q = g.cat_qubit(cat);
                    let prep = g
                        .gates
                        .iter()
                        .position(|op| matches!(op.kind, GateKind::PrepZero(p) | GateKind::PrepPlus(p) if p == q));
                    match prep {
                        Some(i) => inj.after[i].push((q, f.pauli)),
                        None if n > 0 => inj.before[0].push((q, f.pauli)),
                        None => {}
                    }
                }
                FaultKind::AncillaPrep { gate } | FaultKind::PostHadamard { gate } => {
                    let q = single_qubit(g, gate);
                    inj.after[gate].push((q, f.pauli));
                }
                FaultKind::PostGateControl { gate } => {
                    if let GateKind::Cnot { control, .. } = g.gates[gate].kind {
                        inj.after[gate].push((control, f.pauli));
                    }
                }
                FaultKind::PostGateTarget { gate } => {
                    if let GateKind::Cnot { target, .. } = g.gates[gate].kind {
                        inj.after[gate].push((target, f.pauli));
                    }
                }
                FaultKind::PreMeasurement { slot } => {
                    let (i, q) = g
                        .gates
                        .iter()
                        .enumerate()
                        .find_map(|(i, op)| match op.kind {
                            GateKind::MeasZ { qubit, slot: s } if s == slot => Some((i, qubit)),
                            _ => None,
                        })
                        .ok_or(FrameError::UnknownFault(f.location))?;
                    inj.before[i].push((q, f.pauli));
                }
                FaultKind::Adaptive { slot, site } => inj.adaptive[slot][site_index(site)] = Some(f.pauli),
            }
        }
        Ok(inj)
    }
}

fn single_qubit(g: &GadgetCircuit, gate: usize) -> usize {
    match g.gates[gate].kind {
        GateKind::PrepZero(q) | GateKind::PrepPlus(q) | GateKind::Reset(q) | GateKind::Hadamard(q) => q,
        GateKind::MeasZ { qubit, .. } => qubit,
        GateKind::Cnot { control, .. } => control,
    }
}

struct Machine<'a> {
    g: &'a GadgetCircuit,
    x: Vec<bool>,
    z: Vec<bool>,
    outcomes: Vec<bool>,
}

impl<'a> Machine<'a> {
    fn new(g: &'a GadgetCircuit) -> Self {
        let n = g.num_qubits();
        Self { g, x: vec![false; n], z: vec![false; n], outcomes: vec![false; g.num_slots] }
    }

    fn apply(&mut self, q: usize, p: Pauli) {
        self.x[q] ^= p.has_x();
        self.z[q] ^= p.has_z();
    }

    fn gate(&mut self, kind: GateKind) {
        match kind {
            GateKind::PrepZero(q) | GateKind::PrepPlus(q) | GateKind::Reset(q) => {
                // Cat preparation is noiseless here; its faults enter as cat_init.
                self.x[q] = false;
                self.z[q] = false;
            }
            GateKind::Cnot { control, target } => {
                self.x[target] ^= self.x[control];
                self.z[control] ^= self.z[target];
            }
            GateKind::Hadamard(q) => std::mem::swap(&mut self.x[q], &mut self.z[q]),
            GateKind::MeasZ { qubit, slot } => self.outcomes[slot] = self.x[qubit],
        }
    }

    fn run(&mut self, inj: &Injection, range: std::ops::Range<usize>) {
        for i in range {
            for &(q, p) in &inj.before[i] {
                self.apply(q, p);
            }
            self.gate(self.g.gates[i].kind);
            for &(q, p) in &inj.after[i] {
                self.apply(q, p);
            }
        }
    }

    /// One adaptively placed measurement of `M_j` in extra slot `k`.
    fn adaptive_measurement(&mut self, k: usize, j: usize, faults: &[Option<Pauli>; 6], first_low: bool) -> bool {
        let g = self.g;
        let m = g.cat_count;
        let anc = g.ancilla.unwrap_or(g.num_qubits() - 1);
        let (a, b) = if first_low { (g.cat_qubit(j), g.cat_qubit((j + 1) % m)) } else { (g.cat_qubit((j + 1) % m), g.cat_qubit(j)) };
        let inject = |s: &mut Self, site: AdaptiveSite, q: usize| {
            if let Some(p) = faults[site_index(site)] {
                s.apply(q, p);
            }
        };
        self.gate(GateKind::Reset(anc));
        inject(self, AdaptiveSite::AncillaPrep, anc);
        self.gate(GateKind::Cnot { control: a, target: anc });
        inject(self, AdaptiveSite::FirstControl, a);
        inject(self, AdaptiveSite::FirstTarget, anc);
        self.gate(GateKind::Cnot { control: b, target: anc });
        inject(self, AdaptiveSite::SecondControl, b);
        inject(self, AdaptiveSite::SecondTarget, anc);
        inject(self, AdaptiveSite::PreMeasurement, anc);
        let slot = g.adaptive_slots[k];
        self.outcomes[slot] = self.x[anc];
        self.outcomes[slot]
    }

    fn syndrome(&self) -> CatSyndrome {
        let m = self.g.cat_count;
        CatSyndrome::new(
            self.g
                .rounds
                .iter()
                .map(|slots| BitVec::from_indices(m, slots.iter().enumerate().filter(|(_, &s)| self.outcomes[s]).map(|(i, _)| i)))
                .collect(),
        )
    }

    fn result(&self, syn: CatSyndrome) -> PropagationResult {
        let gamma = self.g.gamma;
        let gen = self.g.generator_parity_slots.iter().fold(false, |acc, &s| acc ^ self.outcomes[s]);
        PropagationResult {
            data_x_residual: BitVec::from_indices(gamma, (0..gamma).filter(|&q| self.x[q])),
            data_z_residual: BitVec::from_indices(gamma, (0..gamma).filter(|&q| self.z[q])),
            cat_syndrome: syn,
            generator_bit_flipped: gen,
        }
    }
}

/// Round-2 measurements executed live inside a gate walk.
struct LiveRound2<'m, 'a> {
    machine: &'m mut Machine<'a>,
    inj: &'m Injection,
    first_low: bool,
    done: Vec<(usize, bool)>,
}

impl Round2Source for LiveRound2<'_, '_> {
    fn measure(&mut self, indices: &[usize]) -> Result<Vec<bool>, FrameError> {
        let m = self.machine.g.cat_count;
        let capacity = self.machine.g.adaptive_slots.len();
        indices
            .iter()
            .map(|&j| {
                if j >= m {
                    return Err(FrameError::Round2Index { index: j, m });
                }
                if let Some(&(_, b)) = self.done.iter().find(|(i, _)| *i == j) {
                    return Ok(b);
                }
                let k = self.done.len();
                if k >= capacity {
                    return Err(FrameError::Round2Exhausted(capacity));
                }
                let b = self.machine.adaptive_measurement(k, j, &self.inj.adaptive[k], self.first_low);
                self.done.push((j, b));
                Ok(b)
            })
            .collect()
    }
}

fn first_cnot_is_low(g: &GadgetCircuit) -> bool {
    let m = g.cat_count;
    g.gates
        .iter()
        .find_map(|op| match op.kind {
            GateKind::Cnot { control, target } if Some(target) == g.ancilla => Some(control == g.cat_qubit(0)),
            _ => None,
        })
        .unwrap_or(m > 0)
}

/// Reference propagation. Adaptive slots, if any, stay unexecuted.
pub fn propagate(g: &GadgetCircuit, faults: &FaultSet) -> Result<PropagationResult, FrameError> {
    adaptive_propagate(g, faults, |_, _| Ok(())).map(|(r, ())| r)
}

/// Runs round 1, hands its syndrome to `planner` together with a live
/// round-2 source, then finishes the circuit.
pub fn adaptive_propagate<R>(
    g: &GadgetCircuit,
    faults: &FaultSet,
    planner: impl FnOnce(&CatSyndrome, &mut dyn Round2Source) -> Result<R, FrameError>,
) -> Result<(PropagationResult, R), FrameError> {
    let inj = Injection::new(g, faults)?;
    let mut machine = Machine::new(g);
    machine.run(&inj, 0..g.adaptive_insert);
    let round1 = machine.syndrome();
    let first_low = first_cnot_is_low(g);
    let mut live = LiveRound2 { machine: &mut machine, inj: &inj, first_low, done: Vec::new() };
    let out = planner(&round1, &mut live)?;
    let done = live.done;
    machine.run(&inj, g.adaptive_insert..g.gates.len());
    let mut syn = machine.syndrome();
    syn.adaptive = done;
    Ok((machine.result(syn), out))
}

/// Precomputed per-location effects, packed into machine words.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Effect {
    pub data_x: u64,
    pub data_z: u64,
    /// Base-round cut-cat bits; bit `r * m + i` is `M_i` of round `r`.
    pub syndrome: u64,
    /// X on cat qubits when adaptive measurements start.
    pub cat_frame: u64,
    pub gen_flip: bool,
}

impl Effect {
    pub fn xor(self, o: Effect) -> Effect {
        Effect {
            data_x: self.data_x ^ o.data_x,
            data_z: self.data_z ^ o.data_z,
            syndrome: self.syndrome ^ o.syndrome,
            cat_frame: self.cat_frame ^ o.cat_frame,
            gen_flip: self.gen_flip ^ o.gen_flip,
        }
    }
}

/// X and Z effect of every fault location of a circuit.
#[derive(Clone, Debug)]
pub struct EffectTable {
    pub gamma: usize,
    pub m: usize,
    pub rounds: usize,
    x: Vec<Effect>,
    z: Vec<Effect>,
    adaptive: Vec<Option<(usize, usize)>>,
    first_low: bool,
    capacity: usize,
}

impl EffectTable {
    pub fn new(g: &GadgetCircuit) -> Self {
        let n = g.all_locations().len();
        let mut x = vec![Effect::default(); n];
        let mut z = vec![Effect::default(); n];
        let mut adaptive = vec![None; n];
        for loc in g.all_locations() {
            if let FaultKind::Adaptive { slot, site } = loc.kind {
                adaptive[loc.id] = Some((slot, site_index(site)));
                continue;
            }
            for (pauli, out) in [(Pauli::X, &mut x[loc.id]), (Pauli::Z, &mut z[loc.id])] {
                let set = FaultSet { faults: vec![Fault { location: loc.id, pauli }] };
                *out = single_effect(g, &set);
            }
        }
        Self {
            gamma: g.gamma,
            m: g.cat_count,
            rounds: g.rounds.len(),
            x,
            z,
            adaptive,
            first_low: first_cnot_is_low(g),
            capacity: g.adaptive_slots.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x_effect(&self, loc: usize) -> Effect {
        self.x[loc]
    }

    pub fn is_adaptive_location(&self, loc: usize) -> bool {
        self.adaptive[loc].is_some()
    }

    /// `(slot, site index)` of an adaptive location.
    pub fn adaptive_site(&self, loc: usize) -> Option<(usize, usize)> {
        self.adaptive[loc]
    }

    pub fn effect(&self, f: Fault) -> Effect {
        let mut e = Effect::default();
        if f.pauli.has_x() {
            e = e.xor(self.x[f.location]);
        }
        if f.pauli.has_z() {
            e = e.xor(self.z[f.location]);
        }
        e
    }

    /// Combined effect of the non-adaptive faults of a set, plus its
    /// adaptive-slot faults grouped per slot.
    pub fn combine(&self, faults: &[Fault]) -> (Effect, AdaptiveFaults) {
        let mut acc = Effect::default();
        let mut slots = AdaptiveFaults::default();
        for &f in faults {
            match self.adaptive[f.location] {
                Some((slot, site)) => slots.set(slot, site, f.pauli),
                None => acc = acc.xor(self.effect(f)),
            }
        }
        (acc, slots)
    }

    pub fn syndrome_of(&self, e: &Effect) -> CatSyndrome {
        CatSyndrome::from_key(e.syndrome, self.m, self.rounds)
    }

    pub fn round2<'t>(&'t self, effect: &Effect, faults: AdaptiveFaults) -> FastRound2<'t> {
        FastRound2 { table: self, frame: effect.cat_frame, faults, gen_flip: false, done: Vec::new() }
    }
}

fn single_effect(g: &GadgetCircuit, faults: &FaultSet) -> Effect {
    let Ok(inj) = Injection::new(g, faults) else { return Effect::default() };
    let mut machine = Machine::new(g);
    machine.run(&inj, 0..g.adaptive_insert);
    let m = g.cat_count;
    let cat_frame = (0..m).filter(|&r| machine.x[g.cat_qubit(r)]).fold(0u64, |acc, r| acc | 1 << r);
    machine.run(&inj, g.adaptive_insert..g.gates.len());
    let res = machine.result(machine.syndrome());
    Effect {
        data_x: res.data_x_residual.to_u64(),
        data_z: res.data_z_residual.to_u64(),
        syndrome: res.cat_syndrome.key(),
        cat_frame,
        gen_flip: res.generator_bit_flipped,
    }
}

/// Per-slot, per-site Paulis of adaptive faults; two bits per site.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AdaptiveFaults {
    x: [u8; 8],
    z: [u8; 8],
}

impl AdaptiveFaults {
    pub fn set(&mut self, slot: usize, site: usize, p: Pauli) {
        if p.has_x() {
            self.x[slot] ^= 1 << site;
        }
        if p.has_z() {
            self.z[slot] ^= 1 << site;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&b| b == 0)
    }

    /// Whether any fault sits on a slot at or beyond `executed`.
    pub fn touches_beyond(&self, executed: usize) -> bool {
        (executed..8).any(|s| self.x[s] | self.z[s] != 0)
    }
}

/// Round-2 source evaluated from an [`EffectTable`].
pub struct FastRound2<'t> {
    table: &'t EffectTable,
    frame: u64,
    faults: AdaptiveFaults,
    gen_flip: bool,
    done: Vec<(usize, bool)>,
}

impl FastRound2<'_> {
    pub fn executed(&self) -> &[(usize, bool)] {
        &self.done
    }

    /// Generator-bit flips contributed by Z components inside executed slots.
    pub fn gen_flip(&self) -> bool {
        self.gen_flip
    }
}

const PREP: u8 = 1 << 0;
const C1: u8 = 1 << 1;
const T1: u8 = 1 << 2;
const C2: u8 = 1 << 3;
const T2: u8 = 1 << 4;
const PM: u8 = 1 << 5;

impl Round2Source for FastRound2<'_> {
    fn measure(&mut self, indices: &[usize]) -> Result<Vec<bool>, FrameError> {
        let m = self.table.m;
        indices
            .iter()
            .map(|&j| {
                if j >= m {
                    return Err(FrameError::Round2Index { index: j, m });
                }
                if let Some(&(_, b)) = self.done.iter().find(|(i, _)| *i == j) {
                    return Ok(b);
                }
                let k = self.done.len();
                if k >= self.table.capacity {
                    return Err(FrameError::Round2Exhausted(self.table.capacity));
                }
                let (a, b) = if self.table.first_low { (j, (j + 1) % m) } else { ((j + 1) % m, j) };
                let (x, z) = (self.faults.x[k], self.faults.z[k]);
                let out = ((self.frame >> j) ^ (self.frame >> ((j + 1) % m))) & 1 == 1;
                let out = out ^ ((x & (PREP | T1 | T2 | PM)).count_ones() % 2 == 1);
                if x & C1 != 0 {
                    self.frame ^= 1 << a;
                }
                if x & C2 != 0 {
                    self.frame ^= 1 << b;
                }
                // Z on the ancilla after the first CNOT kicks back onto the second control.
                self.gen_flip ^= (z & (C1 | C2 | T1)).count_ones() % 2 == 1;
                self.done.push((j, out));
                Ok(out)
            })
            .collect()
    }
}

/// Which channels of the depolarizing model are active.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub p_ft: f64,
    pub cat_init: bool,
    /// After every cut-cat ancilla preparation or reset.
    pub ancilla_init: bool,
    pub post_1q: bool,
    pub post_2q: bool,
    pub pre_meas: bool,
}

impl NoiseParams {
    /// Gadget-level model: cat init, single- and two-qubit gates, measurements.
    pub fn gadget(p_ft: f64) -> Self {
        Self { p_ft, cat_init: true, ancilla_init: false, post_1q: true, post_2q: true, pre_meas: true }
    }

    /// Block-level model, which also depolarizes every qubit initialization.
    pub fn block(p_ft: f64) -> Self {
        Self { ancilla_init: true, ..Self::gadget(p_ft) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum NoisyOp {
    Single(usize),
    Pair(usize, usize),
}

/// The noisy operations of a circuit under a given set of channels.
#[derive(Clone, Debug)]
pub struct NoiseModel {
    p: f64,
    ops: Vec<NoisyOp>,
}

impl NoiseModel {
    pub fn new(g: &GadgetCircuit, params: &NoiseParams) -> Self {
        let mut ops = Vec::new();
        let mut by_kind = std::collections::HashMap::new();
        for loc in g.all_locations() {
            by_kind.insert(loc.kind, loc.id);
        }
        let find = |kind: FaultKind| by_kind.get(&kind).copied();
        if params.cat_init {
            ops.extend((0..g.cat_count).filter_map(|cat| find(FaultKind::CatInit { cat })).map(NoisyOp::Single));
        }
        for (i, op) in g.gates.iter().enumerate() {
            match op.kind {
                GateKind::PrepZero(q) | GateKind::Reset(q) if g.is_ancilla(q) && params.ancilla_init => {
                    ops.extend(find(FaultKind::AncillaPrep { gate: i }).map(NoisyOp::Single));
                }
                GateKind::Cnot { .. } if params.post_2q => {
                    if let (Some(c), Some(t)) =
                        (find(FaultKind::PostGateControl { gate: i }), find(FaultKind::PostGateTarget { gate: i }))
                    {
                        ops.push(NoisyOp::Pair(c, t));
                    } else if let Some(t) = find(FaultKind::PostGateTarget { gate: i }) {
                        ops.push(NoisyOp::Single(t));
                    }
                }
                GateKind::Hadamard(_) if params.post_1q => {
                    ops.extend(find(FaultKind::PostHadamard { gate: i }).map(NoisyOp::Single));
                }
                GateKind::MeasZ { slot, .. } if params.pre_meas => {
                    ops.extend(find(FaultKind::PreMeasurement { slot }).map(NoisyOp::Single));
                }
                _ => {}
            }
        }
        for slot in 0..g.adaptive_slots.len() {
            let site = |s| find(FaultKind::Adaptive { slot, site: s });
            if params.ancilla_init {
                ops.extend(site(AdaptiveSite::AncillaPrep).map(NoisyOp::Single));
            }
            if params.post_2q {
                for (c, t) in [
                    (AdaptiveSite::FirstControl, AdaptiveSite::FirstTarget),
                    (AdaptiveSite::SecondControl, AdaptiveSite::SecondTarget),
                ] {
                    if let (Some(c), Some(t)) = (site(c), site(t)) {
                        ops.push(NoisyOp::Pair(c, t));
                    }
                }
            }
            if params.pre_meas {
                ops.extend(site(AdaptiveSite::PreMeasurement).map(NoisyOp::Single));
            }
        }
        Self { p: params.p_ft.clamp(0.0, 1.0), ops }
    }

    pub fn num_ops(&self) -> usize {
        self.ops.len()
    }

    /// Deterministic sample for one trial, drawn with geometric skips so the
    /// cost scales with the number of faults rather than operations.
    pub fn sample(&self, seed: u64, trial: u64, out: &mut Vec<Fault>) {
        out.clear();
        if self.p <= 0.0 || self.ops.is_empty() {
            return;
        }
        let mut rng = trial_rng(seed, trial);
        if self.p >= 1.0 {
            for op in &self.ops {
                self.fault_op(*op, &mut rng, out);
            }
        } else {
            let log_q = (-self.p).ln_1p();
            let mut i = 0usize;
            loop {
                let u: f64 = 1.0 - rng.random::<f64>();
                let skip = (u.ln() / log_q).floor();
                if !skip.is_finite() || skip >= (self.ops.len() - i) as f64 {
                    break;
                }
                i += skip as usize;
                self.fault_op(self.ops[i], &mut rng, out);
                i += 1;
                if i >= self.ops.len() {
                    break;
                }
            }
        }
        out.sort_unstable();
    }

    fn fault_op(&self, op: NoisyOp, rng: &mut Xoshiro256PlusPlus, out: &mut Vec<Fault>) {
        match op {
            NoisyOp::Single(loc) => {
                let pauli = Pauli::ALL[rng.random_range(0..3)];
                out.push(Fault { location: loc, pauli });
            }
            NoisyOp::Pair(c, t) => {
                let k = rng.random_range(1..16u8);
                let (pc, pt) = (k >> 2, k & 3);
                let to_pauli = |v: u8| Pauli::from_bits(v & 1 == 1, v & 2 == 2);
                if let Some(p) = to_pauli(pc) {
                    out.push(Fault { location: c, pauli: p });
                }
                if let Some(p) = to_pauli(pt) {
                    out.push(Fault { location: t, pauli: p });
                }
            }
        }
    }
}

/// Stream of one trial: SplitMix-style mixing of (seed, trial) feeding a
/// xoshiro256++ generator.
pub fn trial_rng(seed: u64, trial: u64) -> Xoshiro256PlusPlus {
    let mut z = seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    Xoshiro256PlusPlus::seed_from_u64(z ^ (z >> 31))
}

pub fn sample_faults(g: &GadgetCircuit, noise: &NoiseParams, seed: u64, trial: u64) -> FaultSet {
    let model = NoiseModel::new(g, noise);
    let mut faults = Vec::new();
    model.sample(seed, trial, &mut faults);
    FaultSet { faults }
}
