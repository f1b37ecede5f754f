//! Gate vocabulary, circuits, and coupling-graph validity.

use std::fmt;

use crate::coupling::CouplingGraph;
use crate::error::{Error, Result};

/// Qubit indices are 1-based; angles are radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    /// `diag(e^{-i angle/2}, e^{i angle/2})` on one qubit.
    Rz(usize, f64),
    /// Control, target.
    Cnot(usize, usize),
    /// `Cnot(a, b)` followed by `Swap(a, b)`: `|x_a, x_b> -> |x_a ^ x_b, x_a>`.
    Cns(usize, usize),
    Swap(usize, usize),
    Hadamard(usize),
    /// Multiplies every amplitude by `e^{-i angle/2}`. The angle is the
    /// global knob `phi_0`, in the same convention as an `Rz` angle.
    GlobalPhase(f64),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::Rz(..) => "rz",
            Gate::Cnot(..) => "cnot",
            Gate::Cns(..) => "cns",
            Gate::Swap(..) => "swap",
            Gate::Hadamard(..) => "h",
            Gate::GlobalPhase(..) => "gphase",
        }
    }

    /// Gates that permute basis states without phases.
    pub fn is_classical(&self) -> bool {
        matches!(self, Gate::Cnot(..) | Gate::Cns(..) | Gate::Swap(..))
    }

    pub fn is_two_qubit(&self) -> bool {
        self.is_classical()
    }

    /// Qubits touched by the gate, in operand order.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Rz(q, _) | Gate::Hadamard(q) => vec![q],
            Gate::Cnot(a, b) | Gate::Cns(a, b) | Gate::Swap(a, b) => vec![a, b],
            Gate::GlobalPhase(_) => vec![],
        }
    }

    pub fn pair(&self) -> Option<(usize, usize)> {
        match *self {
            Gate::Cnot(a, b) | Gate::Cns(a, b) | Gate::Swap(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rz(_, a) | Gate::GlobalPhase(a) => Some(a),
            _ => None,
        }
    }

    pub fn check_bounds(&self, width: usize) -> Result<()> {
        for q in self.qubits() {
            if q == 0 || q > width {
                return Err(Error::QubitOutOfRange { qubit: q, width });
            }
        }
        if let Some((a, b)) = self.pair() {
            if a == b {
                return Err(Error::RepeatedQubit(a));
            }
        }
        if let Some(a) = self.angle() {
            if !a.is_finite() {
                return Err(Error::NonFiniteAngle(a));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Rz(q, a) => write!(f, "rz {q} {a}"),
            Gate::Cnot(a, b) | Gate::Cns(a, b) | Gate::Swap(a, b) => {
                write!(f, "{} {a} {b}", self.name())
            }
            Gate::Hadamard(q) => write!(f, "h {q}"),
            Gate::GlobalPhase(a) => write!(f, "gphase {a}"),
        }
    }
}

/// An ordered gate list on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Result<Self> {
        if width == 0 || width > crate::parity::MAX_WIDTH {
            return Err(Error::InvalidWidth { width, max: crate::parity::MAX_WIDTH });
        }
        Ok(Self { width, gates: Vec::new() })
    }

    pub fn from_gates(width: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(width)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.check_bounds(self.width)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// For builders whose gates are correct by construction.
    pub(crate) fn push_trusted(&mut self, gate: Gate) {
        debug_assert!(gate.check_bounds(self.width).is_ok(), "{gate}");
        self.gates.push(gate);
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.width != self.width {
            return Err(Error::WidthMismatch { expected: self.width, found: other.width });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn remove(&mut self, index: usize) -> Gate {
        self.gates.remove(index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    WidthMismatch { circuit: usize, coupling: usize },
    QubitOutOfRange(usize),
    RepeatedQubit(usize),
    NonFiniteAngle,
    NotCoupled(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Offending gate index, `None` for register-level problems.
    pub index: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.index {
            write!(f, "gate {i}: ")?;
        }
        match &self.kind {
            ViolationKind::WidthMismatch { circuit, coupling } => {
                write!(f, "circuit has {circuit} qubits but coupling graph has {coupling}")
            }
            ViolationKind::QubitOutOfRange(q) => write!(f, "qubit {q} out of range"),
            ViolationKind::RepeatedQubit(q) => write!(f, "qubit {q} used twice"),
            ViolationKind::NonFiniteAngle => write!(f, "non-finite angle"),
            ViolationKind::NotCoupled(a, b) => write!(f, "qubits {a} and {b} are not coupled"),
        }
    }
}

/// Result of [`validate_circuit`]; carries the first violation, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub violation: Option<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn validate_circuit(c: &Circuit, g: &CouplingGraph) -> ValidityReport {
    let fail = |index, kind| ValidityReport { violation: Some(Violation { index, kind }) };
    if c.width() != g.width() {
        return fail(None, ViolationKind::WidthMismatch { circuit: c.width(), coupling: g.width() });
    }
    for (i, gate) in c.gates().iter().enumerate() {
        match gate.check_bounds(c.width()) {
            Err(Error::QubitOutOfRange { qubit, .. }) => {
                return fail(Some(i), ViolationKind::QubitOutOfRange(qubit))
            }
            Err(Error::RepeatedQubit(q)) => return fail(Some(i), ViolationKind::RepeatedQubit(q)),
            Err(_) => return fail(Some(i), ViolationKind::NonFiniteAngle),
            Ok(()) => {}
        }
        if let Some((a, b)) = gate.pair() {
            if !g.are_coupled(a, b) {
                return fail(Some(i), ViolationKind::NotCoupled(a, b));
            }
        }
    }
    ValidityReport { violation: None }
}
