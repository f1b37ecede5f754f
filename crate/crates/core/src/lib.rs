//! Programmable controlled phase-shift networks.
//!
//! A diagonal gate `|x> -> e^{-i theta_x} |x>` on `N` qubits is realized by a
//! fixed skeleton of classical two-qubit gates (`Cnot`, `Swap`, `Cns`) and
//! `2^N - 1` single-qubit `Rz` rotations. Each rotation sees the XOR of some
//! subset of the inputs, and its angle is a Walsh-Hadamard coefficient of
//! `theta`. Changing `theta` only changes the angles.
//!
//! Qubits are numbered from 1. Qubit 1 is the most significant bit of a basis
//! index.

mod algorithms;
mod backend;
mod boolean;
mod circuit;
mod coupling;
mod error;
pub mod optimize;
mod parity;
mod simulate;
mod synth;
mod walsh;

pub use algorithms::{
    classify_boolean, default_grover_iterations, deutsch_jozsa, diffusion_circuit, diffusion_phase_spec,
    generalized_cnot, grover, toffoli, DjResult, FunctionClass, GroverResult, Verdict,
};
pub use backend::Backend;
pub use boolean::BooleanFunction;
pub use circuit::{validate_circuit, Circuit, Gate, ValidityReport, Violation, ViolationKind};
pub use coupling::{CouplingGraph, CouplingKind};
pub use error::{Error, Result};
pub use parity::{classical_label_action, inner_product_mod2, qubit_bit, BasisIndex, ParityMask, MAX_WIDTH};
pub use simulate::{
    apply_gate, distance_up_to_global_phase, measure_probabilities, run, unitary_of, verify_phase_gate,
    DenseUnitary, StateVector, VerifyReport, C64, DEFAULT_TOLERANCE, STATE_CAP, UNITARY_CAP,
};
pub use synth::{
    bind_angles, check_programmable, synth_fig1_two_qubit, synth_graycode, synth_recursive, trace_conditions,
    Clause, ConditionTrace, Diagnostic, NetworkTemplate, ProgrammabilityReport, RecursiveFlavor, RotationSlot,
    TraceEntry,
};
pub use walsh::{
    angles_from_phases, normalize_angle, phase_spec_from_boolean, phases_from_angles, wht_inplace, AngleSpec,
    PhaseSpec,
};
