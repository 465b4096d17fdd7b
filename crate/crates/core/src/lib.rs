//! Cut-cat state syndrome extraction for CSS codes.
//!
//! A weight-`gamma` X-type generator is measured with a cat state of about
//! `gamma / 2` qubits, each touching two data qubits. Ring parity checks on the
//! cat ("cut-cat" stabilizers) expose the resulting hook errors, and a decoder
//! turns those checks into a data correction.
//!
//! Modules, bottom up: [`pauli`] (bit vectors, CSS codes), [`circuit`] (gate
//! lists and fault locations), [`gadget`] (builders and resource counts),
//! [`frame`] (Pauli-frame propagation and noise), [`decoders`], [`verify`]
//! (exhaustive checks and the analytic bound) and [`experiments`]
//! (Monte-Carlo runs).

pub mod circuit;
pub mod decoders;
pub mod experiments;
pub mod frame;
pub mod gadget;
pub mod pauli;
pub mod verify;

pub use circuit::{enumerate_fault_locations, FaultKind, FaultLocation, GadgetCircuit, Scheme};
pub use decoders::{CatDecoder, Correction};
pub use frame::{propagate, CatSyndrome, FaultSet, Pauli, PropagationResult};
pub use gadget::{GadgetSpec, PrepModel};
pub use pauli::{parse_css_code, residual_weight_mod_generator, BitVec, CssCode, PauliFrame};
pub use verify::{eval_upper_bound, verify_gadget, VerificationReport};
