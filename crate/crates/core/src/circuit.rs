//! Gate-level representation of a single generator's extraction gadget.
//!
//! Qubit ids are laid out as `data[0..gamma)`, then `cat[0..m)`, then the
//! cut-cat measurement ancilla (if any). The gadget always measures an
//! X-type generator; Z-type generators use the same circuit with the roles of
//! X and Z exchanged.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    PrepZero(usize),
    PrepPlus(usize),
    Cnot { control: usize, target: usize },
    Hadamard(usize),
    MeasZ { qubit: usize, slot: usize },
    Reset(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub time_step: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    CutCat,
    FullCat,
}

/// Position inside an adaptively placed cut-cat measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AdaptiveSite {
    AncillaPrep,
    FirstControl,
    FirstTarget,
    SecondControl,
    SecondTarget,
    PreMeasurement,
}

impl AdaptiveSite {
    pub const ALL: [AdaptiveSite; 6] = [
        AdaptiveSite::AncillaPrep,
        AdaptiveSite::FirstControl,
        AdaptiveSite::FirstTarget,
        AdaptiveSite::SecondControl,
        AdaptiveSite::SecondTarget,
        AdaptiveSite::PreMeasurement,
    ];
}

/// Where a single-qubit Pauli fault is injected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FaultKind {
    /// Before any gate, on a cat qubit (models the cat preparation).
    CatInit { cat: usize },
    /// After the preparation/reset of the cut-cat ancilla at `gate`.
    AncillaPrep { gate: usize },
    /// On the control of the CNOT at `gate`, after it executes.
    PostGateControl { gate: usize },
    /// On the target of the CNOT at `gate`, after it executes.
    PostGateTarget { gate: usize },
    /// Just before the measurement that writes `slot`.
    PreMeasurement { slot: usize },
    /// After the Hadamard at `gate`.
    PostHadamard { gate: usize },
    /// Inside the `slot`-th adaptively chosen extra measurement.
    Adaptive { slot: usize, site: AdaptiveSite },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultLocation {
    pub id: usize,
    pub kind: FaultKind,
}

/// Extraction circuit for one generator of weight `gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetCircuit {
    pub scheme: Scheme,
    pub gamma: usize,
    pub cat_count: usize,
    /// Data indices touched by each cat qubit, in CNOT order.
    pub pair_map: Vec<Vec<usize>>,
    pub gates: Vec<GateOp>,
    /// `rounds[r][i]` is the outcome slot of cut-cat stabilizer `M_i` in round `r`.
    pub rounds: Vec<Vec<usize>>,
    /// Outcome slots reserved for adaptively chosen extra measurements.
    pub adaptive_slots: Vec<usize>,
    /// Gate index at which adaptive measurements are executed.
    pub adaptive_insert: usize,
    /// Outcome slots whose parity is the generator's syndrome bit.
    pub generator_parity_slots: Vec<usize>,
    /// The reused cut-cat ancilla, which also hosts adaptive measurements.
    pub ancilla: Option<usize>,
    pub num_slots: usize,
    num_qubits: usize,
    locations: Vec<FaultLocation>,
    relevant: usize,
}

impl GadgetCircuit {
    /// Assembles a circuit and indexes its fault locations.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        scheme: Scheme,
        gamma: usize,
        pair_map: Vec<Vec<usize>>,
        gates: Vec<GateOp>,
        rounds: Vec<Vec<usize>>,
        adaptive_slots: Vec<usize>,
        adaptive_insert: usize,
        generator_parity_slots: Vec<usize>,
        ancilla: Option<usize>,
    ) -> Self {
        let num_slots = gates
            .iter()
            .filter_map(|g| match g.kind {
                GateKind::MeasZ { slot, .. } => Some(slot + 1),
                _ => None,
            })
            .chain(adaptive_slots.iter().map(|s| s + 1))
            .max()
            .unwrap_or(0);
        let num_qubits = gates
            .iter()
            .map(|g| match g.kind {
                GateKind::PrepZero(q) | GateKind::PrepPlus(q) | GateKind::Reset(q) | GateKind::Hadamard(q) => q,
                GateKind::Cnot { control, target } => control.max(target),
                GateKind::MeasZ { qubit, .. } => qubit,
            })
            .chain(ancilla)
            .map(|q| q + 1)
            .max()
            .unwrap_or(0)
            .max(gamma + pair_map.len());
        let mut circuit = Self {
            scheme,
            gamma,
            cat_count: pair_map.len(),
            pair_map,
            gates,
            rounds,
            adaptive_slots,
            adaptive_insert,
            generator_parity_slots,
            ancilla,
            num_slots,
            num_qubits,
            locations: Vec::new(),
            relevant: 0,
        };
        circuit.index_locations();
        circuit
    }

    /// A circuit with no qubits and no gates.
    pub fn empty() -> Self {
        Self::new(Scheme::FullCat, 0, Vec::new(), Vec::new(), Vec::new(), Vec::new(), 0, Vec::new(), None)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn cat_qubit(&self, cat: usize) -> usize {
        self.gamma + cat
    }

    pub fn is_cat(&self, qubit: usize) -> bool {
        qubit >= self.gamma && qubit < self.gamma + self.cat_count
    }

    /// Any cut-cat measurement ancilla.
    pub fn is_ancilla(&self, qubit: usize) -> bool {
        qubit >= self.gamma + self.cat_count && qubit < self.num_qubits
    }

    pub fn is_data(&self, qubit: usize) -> bool {
        qubit < self.gamma
    }

    pub fn is_adaptive(&self) -> bool {
        !self.adaptive_slots.is_empty()
    }

    /// Number of cut-cat measurements in the fixed (non-adaptive) rounds.
    pub fn base_measurements(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }

    /// Every fault location, the X-relevant ones first.
    pub fn all_locations(&self) -> &[FaultLocation] {
        &self.locations
    }

    pub fn location(&self, id: usize) -> Option<&FaultLocation> {
        self.locations.get(id)
    }

    pub fn relevant_count(&self) -> usize {
        self.relevant
    }

    pub fn location_id(&self, kind: FaultKind) -> Option<usize> {
        self.locations.iter().find(|l| l.kind == kind).map(|l| l.id)
    }

    fn index_locations(&mut self) {
        let mut relevant = Vec::new();
        let mut other = Vec::new();
        let cut_cat_slot = |slot: usize| self.rounds.iter().any(|r| r.contains(&slot));
        for cat in 0..self.cat_count {
            relevant.push(FaultKind::CatInit { cat });
        }
        for (g, op) in self.gates.iter().enumerate() {
            match op.kind {
                GateKind::PrepZero(q) | GateKind::Reset(q) | GateKind::PrepPlus(q)
                    if self.is_ancilla(q) =>
                {
                    relevant.push(FaultKind::AncillaPrep { gate: g });
                }
                GateKind::Cnot { control, target } => {
                    if self.is_cat(control) {
                        let kind = FaultKind::PostGateControl { gate: g };
                        if self.control_fault_matters(g, control) {
                            relevant.push(kind);
                        } else {
                            other.push(kind);
                        }
                    }
                    let kind = FaultKind::PostGateTarget { gate: g };
                    if self.is_ancilla(target) {
                        relevant.push(kind);
                    } else {
                        other.push(kind);
                    }
                }
                GateKind::MeasZ { slot, .. } => {
                    let kind = FaultKind::PreMeasurement { slot };
                    if cut_cat_slot(slot) {
                        relevant.push(kind);
                    } else {
                        other.push(kind);
                    }
                }
                GateKind::Hadamard(_) => other.push(FaultKind::PostHadamard { gate: g }),
                _ => {}
            }
        }
        for slot in 0..self.adaptive_slots.len() {
            for site in AdaptiveSite::ALL {
                relevant.push(FaultKind::Adaptive { slot, site });
            }
        }
        self.relevant = relevant.len();
        self.locations = relevant
            .into_iter()
            .chain(other)
            .enumerate()
            .map(|(id, kind)| FaultLocation { id, kind })
            .collect();
    }

    /// An X on `cat` after gate `g` matters if a later CNOT copies it somewhere.
    fn control_fault_matters(&self, g: usize, cat: usize) -> bool {
        if self.is_adaptive() && g < self.adaptive_insert {
            return true;
        }
        self.gates[g + 1..]
            .iter()
            .any(|op| matches!(op.kind, GateKind::Cnot { control, .. } if control == cat))
    }

    /// Line-oriented dump for debugging.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, op) in self.gates.iter().enumerate() {
            if i == self.adaptive_insert && self.is_adaptive() {
                let _ = writeln!(out, "# adaptive: {} extra measurements", self.adaptive_slots.len());
            }
            let _ = match op.kind {
                GateKind::PrepZero(q) => writeln!(out, "PREP0 {q}"),
                GateKind::PrepPlus(q) => writeln!(out, "PREP+ {q}"),
                GateKind::Cnot { control, target } => writeln!(out, "CNOT {control} {target}"),
                GateKind::Hadamard(q) => writeln!(out, "H {q}"),
                GateKind::MeasZ { qubit, slot } => writeln!(out, "MZ {qubit} {slot}"),
                GateKind::Reset(q) => writeln!(out, "RESET {q}"),
            };
        }
        out
    }
}

/// The fault locations whose X component can reach a data qubit or flip a
/// cut-cat outcome. Ids are dense `0..N`.
pub fn enumerate_fault_locations(g: &GadgetCircuit) -> Vec<FaultLocation> {
    g.all_locations()[..g.relevant_count()].to_vec()
}

fn data_layers(g: &GadgetCircuit) -> usize {
    g.pair_map.iter().map(Vec::len).max().unwrap_or(0)
}

/// Depth of the data-interaction and cut-cat parts; cat preparation and the
/// final transversal measurement are excluded.
///
/// In serial mode every cut-cat measurement on the shared ancilla is one unit.
/// Otherwise each full round runs as two parallel CNOT layers.
pub fn circuit_depth(g: &GadgetCircuit, serial_cat_meas: bool) -> usize {
    let rounds = if serial_cat_meas {
        g.base_measurements()
    } else {
        2 * g.rounds.iter().filter(|r| !r.is_empty()).count()
    };
    data_layers(g) + rounds
}

/// Depth when every adaptive extra measurement is also executed.
pub fn max_circuit_depth(g: &GadgetCircuit, serial_cat_meas: bool) -> usize {
    circuit_depth(g, serial_cat_meas) + g.adaptive_slots.len()
}

/// Two-qubit gate count as `(min, max)`; the range comes from adaptive extras.
pub fn count_two_qubit_gates(g: &GadgetCircuit, include_prep: bool, prep_cost: usize) -> (usize, usize) {
    let data: usize = g.pair_map.iter().map(Vec::len).sum();
    let base = data + 2 * g.base_measurements() + if include_prep { prep_cost } else { 0 };
    (base, base + 2 * g.adaptive_slots.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_circuit_has_no_locations() {
        let g = GadgetCircuit::empty();
        assert!(enumerate_fault_locations(&g).is_empty());
        assert_eq!(count_two_qubit_gates(&g, true, 5), (5, 5));
        assert_eq!(circuit_depth(&g, true), 0);
    }
}
