//! Programmable network templates.
//!
//! A template is a fixed skeleton of classical two-qubit gates and
//! placeholder `Rz` rotations. Replaying the classical gates on the wire
//! labels shows which XOR condition `x . y` each rotation sees; a template is
//! programmable when every nonzero condition `y` is rotated exactly once and
//! the wires end up carrying their own inputs again. Binding then sets the
//! rotation seeing `y` to `phi_y = (H theta)_y / 2^{N-1}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::circuit::{validate_circuit, Circuit, Gate};
use crate::coupling::{CouplingGraph, CouplingKind};
use crate::error::{Error, Result};
use crate::parity::{apply_label_action_raw, qubit_bit, ParityMask, MAX_WIDTH};
use crate::walsh::{angles_from_phases, PhaseSpec};

/// A rotation in the skeleton together with the condition it must see.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RotationSlot {
    /// Index into the skeleton's gate list.
    pub position: usize,
    /// Wire carrying the rotation; 0 for the global-phase slot.
    pub qubit: usize,
    pub condition: ParityMask,
}

impl RotationSlot {
    pub fn is_global(&self) -> bool {
        self.condition.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkTemplate {
    width: usize,
    skeleton: Circuit,
    slots: Vec<RotationSlot>,
    tag: String,
    coupling: CouplingGraph,
}

impl NetworkTemplate {
    /// Assemble a template without checking programmability; see
    /// [`check_programmable`].
    pub fn new(
        skeleton: Circuit,
        slots: Vec<RotationSlot>,
        tag: impl Into<String>,
        coupling: CouplingGraph,
    ) -> Result<Self> {
        let width = skeleton.width();
        if coupling.width() != width {
            return Err(Error::WidthMismatch { expected: width, found: coupling.width() });
        }
        if let Some(s) = slots.iter().find(|s| s.condition.width() != width) {
            return Err(Error::WidthMismatch { expected: width, found: s.condition.width() });
        }
        Ok(Self { width, skeleton, slots, tag: tag.into(), coupling })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn skeleton(&self) -> &Circuit {
        &self.skeleton
    }

    pub fn slots(&self) -> &[RotationSlot] {
        &self.slots
    }

    /// Backend tag, including any construction notes.
    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn coupling(&self) -> &CouplingGraph {
        &self.coupling
    }

    /// Slot conditions in skeleton order, as integers.
    pub fn condition_order(&self) -> Vec<u32> {
        self.slots.iter().map(|s| s.condition.bits()).collect()
    }

    pub(crate) fn coupling_mut(&mut self) -> &mut CouplingGraph {
        &mut self.coupling
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub position: usize,
    pub qubit: usize,
    pub condition: ParityMask,
}

/// Conditions seen by the rotations of a circuit, plus the final labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionTrace {
    pub entries: Vec<TraceEntry>,
    pub final_labels: Vec<ParityMask>,
}

impl ConditionTrace {
    pub fn conditions(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.condition.bits()).collect()
    }

    pub fn final_is_identity(&self) -> bool {
        let width = self.final_labels.len();
        self.final_labels.iter().enumerate().all(|(i, l)| l.bits() == qubit_bit(i + 1, width))
    }
}

/// Replay the classical gates of `c` on the wire labels and record the label
/// under every `Rz`.
pub fn trace_conditions(c: &Circuit) -> Result<ConditionTrace> {
    let width = c.width();
    let mut labels: Vec<u32> = (1..=width).map(|q| qubit_bit(q, width)).collect();
    let mut entries = Vec::new();
    for (position, gate) in c.gates().iter().enumerate() {
        match *gate {
            Gate::Rz(q, _) => entries.push(TraceEntry {
                position,
                qubit: q,
                condition: ParityMask::new_unchecked(labels[q - 1], width),
            }),
            Gate::GlobalPhase(_) => {}
            Gate::Hadamard(_) => return Err(Error::HadamardInTrace(position)),
            _ => apply_label_action_raw(gate, &mut labels)?,
        }
    }
    let final_labels =
        labels.into_iter().map(|bits| ParityMask::new_unchecked(bits, width)).collect();
    Ok(ConditionTrace { entries, final_labels })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Clause {
    /// Every nonzero condition appears exactly once.
    Coverage,
    /// Traced labels at the slots match the declared conditions.
    SlotLabels,
    /// The skeleton ends with the identity labelling.
    FinalLabels,
    /// Two-qubit gates sit on coupled pairs.
    Coupling,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Coverage => "coverage",
            Clause::SlotLabels => "slot-labels",
            Clause::FinalLabels => "final-labels",
            Clause::Coupling => "coupling",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub clause: Clause,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.clause, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ProgrammabilityReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl ProgrammabilityReport {
    pub fn accepted(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn fails(&self, clause: Clause) -> bool {
        self.diagnostics.iter().any(|d| d.clause == clause)
    }
}

pub fn check_programmable(t: &NetworkTemplate) -> ProgrammabilityReport {
    let mut diagnostics = Vec::new();
    let mut fail = |clause, message: String| diagnostics.push(Diagnostic { clause, message });
    let width = t.width;

    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for s in &t.slots {
        *counts.entry(s.condition.bits()).or_default() += 1;
    }
    let missing: Vec<u32> = (1..1u32 << width).filter(|y| !counts.contains_key(y)).collect();
    let repeated: Vec<u32> = counts
        .iter()
        .filter(|&(_, &n)| n > 1)
        .map(|(&y, _)| y)
        .collect();
    if !missing.is_empty() {
        fail(Clause::Coverage, format!("{} conditions never rotated, first {:0w$b}", missing.len(), missing[0], w = width));
    }
    for y in repeated {
        fail(Clause::Coverage, format!("condition {y:0w$b} appears {} times", counts[&y], w = width));
    }

    match trace_conditions(&t.skeleton) {
        Err(e) => fail(Clause::SlotLabels, e.to_string()),
        Ok(trace) => {
            let traced: BTreeMap<usize, &TraceEntry> =
                trace.entries.iter().map(|e| (e.position, e)).collect();
            let gates = t.skeleton.gates();
            for slot in &t.slots {
                if slot.is_global() {
                    if !matches!(gates.get(slot.position), Some(Gate::GlobalPhase(_))) {
                        fail(Clause::SlotLabels, format!("global slot at {} is not a gphase gate", slot.position));
                    }
                    continue;
                }
                match traced.get(&slot.position) {
                    None => fail(Clause::SlotLabels, format!("slot at {} is not an rz gate", slot.position)),
                    Some(e) if e.qubit != slot.qubit => fail(
                        Clause::SlotLabels,
                        format!("slot at {} declared on qubit {} but rz acts on {}", slot.position, slot.qubit, e.qubit),
                    ),
                    Some(e) if e.condition != slot.condition => fail(
                        Clause::SlotLabels,
                        format!("slot at {} declares {} but wire carries {}", slot.position, slot.condition, e.condition),
                    ),
                    Some(_) => {}
                }
            }
            let slotted: std::collections::BTreeSet<usize> = t.slots.iter().map(|s| s.position).collect();
            if let Some(e) = trace.entries.iter().find(|e| !slotted.contains(&e.position)) {
                fail(Clause::SlotLabels, format!("rz at {} has no slot", e.position));
            }
            if !trace.final_is_identity() {
                let shown: Vec<String> = trace.final_labels.iter().map(|l| l.to_string()).collect();
                fail(Clause::FinalLabels, format!("final labels ({}) are not the identity", shown.join(", ")));
            }
        }
    }

    if let Some(v) = validate_circuit(&t.skeleton, &t.coupling).violation {
        fail(Clause::Coupling, v.to_string());
    }
    ProgrammabilityReport { diagnostics }
}

/// Program a template for the phases `theta`.
///
/// The slot seeing `y` gets `phi_y`. The global knob `phi_0` becomes a
/// leading `GlobalPhase(phi_0)` when `include_global_phase` is set and is
/// dropped otherwise.
pub fn bind_angles(t: &NetworkTemplate, theta: &PhaseSpec, include_global_phase: bool) -> Result<Circuit> {
    if theta.width() != t.width {
        return Err(Error::WidthMismatch { expected: t.width, found: theta.width() });
    }
    let report = check_programmable(t);
    if let Some(d) = report.diagnostics.first() {
        return Err(Error::NotProgrammable(d.to_string()));
    }
    let phi = angles_from_phases(theta);
    let mut gates = t.skeleton.gates().to_vec();
    let mut global_position = None;
    for slot in &t.slots {
        let angle = phi.phi()[slot.condition.bits() as usize];
        match &mut gates[slot.position] {
            Gate::Rz(_, a) => *a = angle,
            Gate::GlobalPhase(a) => {
                *a = angle;
                global_position = Some(slot.position);
            }
            _ => unreachable!("checked by check_programmable"),
        }
    }
    match (global_position, include_global_phase) {
        (Some(p), false) => {
            gates.remove(p);
        }
        (None, true) => gates.insert(0, Gate::GlobalPhase(phi.global_knob())),
        _ => {}
    }
    Circuit::from_gates(t.width, gates)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RecursiveFlavor {
    /// `{Cnot, Swap}`.
    Cnot,
    /// `{Cns}`.
    Cns,
}

/// Skeleton element before positions are fixed: a gate, or a rotation on a
/// wire with the condition the construction intends it to see.
#[derive(Clone, Copy, Debug)]
enum Step {
    Gate(Gate),
    Rot(usize, u32),
}

fn assemble(width: usize, steps: &[Step], tag: String, coupling: CouplingKind) -> Result<NetworkTemplate> {
    let mut skeleton = Circuit::new(width)?;
    let mut slots = Vec::new();
    for (position, step) in steps.iter().enumerate() {
        match *step {
            Step::Gate(g) => skeleton.push_trusted(g),
            Step::Rot(q, y) => {
                skeleton.push_trusted(Gate::Rz(q, 0.0));
                slots.push(RotationSlot { position, qubit: q, condition: ParityMask::new(y, width)? });
            }
        }
    }
    NetworkTemplate::new(skeleton, slots, tag, CouplingGraph::new(coupling, width)?)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_WIDTH {
        return Err(Error::InvalidWidth { width: n, max: MAX_WIDTH });
    }
    Ok(())
}

/// Nearest-neighbour template built by recursion on the register size.
///
/// All rotations of the `n`-qubit network sit on wire `n`. Going to `n + 1`
/// wires prepends a rotation of wire `n + 1` (condition `0..01`) and replaces
/// each rotation on wire `n` with condition `v` by two rotations on wire
/// `n + 1` seeing `2v` and `2v + 1`; the conditions therefore come out as
/// `1, 2, ..., 2^N - 1`.
///
/// With `{Cnot, Swap}` the replacement is `Swap, Rz, Swap, Cnot, Rz, Cnot` on
/// the pair `(n, n+1)`; with `Cns` it is `Cns, Rz, Cns, Rz, Cns`, using that
/// `Cns` has order three.
pub fn synth_recursive(n: usize, flavor: RecursiveFlavor) -> Result<NetworkTemplate> {
    check_n(n)?;
    let mut steps = vec![Step::Rot(1, 1)];
    for k in 1..n {
        let (lo, hi) = (k, k + 1);
        let mut next = Vec::with_capacity(4 * steps.len());
        next.push(Step::Rot(hi, 1));
        for step in steps {
            match step {
                Step::Rot(q, v) => {
                    debug_assert_eq!(q, lo);
                    let (even, odd) = (Step::Rot(hi, v << 1), Step::Rot(hi, (v << 1) | 1));
                    match flavor {
                        RecursiveFlavor::Cnot => next.extend([
                            Step::Gate(Gate::Swap(lo, hi)),
                            even,
                            Step::Gate(Gate::Swap(lo, hi)),
                            Step::Gate(Gate::Cnot(lo, hi)),
                            odd,
                            Step::Gate(Gate::Cnot(lo, hi)),
                        ]),
                        RecursiveFlavor::Cns => next.extend([
                            Step::Gate(Gate::Cns(lo, hi)),
                            even,
                            Step::Gate(Gate::Cns(lo, hi)),
                            odd,
                            Step::Gate(Gate::Cns(lo, hi)),
                        ]),
                    }
                }
                gate => next.push(gate),
            }
        }
        steps = next;
    }
    let tag = match flavor {
        RecursiveFlavor::Cnot => "recursive-cnot",
        RecursiveFlavor::Cns => "recursive-cns",
    };
    assemble(n, &steps, tag.to_string(), CouplingKind::Path)
}

/// The two-qubit network: `Rz(1)`, `Rz(2)`, `Cnot(1,2)`, `Rz(2)`, `Cnot(1,2)`
/// with conditions `10`, `01`, `11`.
pub fn synth_fig1_two_qubit() -> NetworkTemplate {
    let steps = [
        Step::Rot(1, 0b10),
        Step::Rot(2, 0b01),
        Step::Gate(Gate::Cnot(1, 2)),
        Step::Rot(2, 0b11),
        Step::Gate(Gate::Cnot(1, 2)),
    ];
    assemble(2, &steps, "two-qubit".to_string(), CouplingKind::Path).expect("static network")
}

/// All-to-all template visiting the conditions in binary-reflected Gray
/// order `g(i) = i ^ (i >> 1)`, `i = 1 .. 2^N - 1`.
///
/// Codes with leading bit `k` form a contiguous run. That run accumulates on
/// the wire owning bit `k` (qubit `N - k`): it opens with one `Cnot` from the
/// wire of bit `k - 1`, steps through the run with one `Cnot` per Gray step,
/// and ends at the bare bit `k`, so the wire is restored without a closing
/// gate. Exactly one `Cnot` separates consecutive rotations and the total is
/// `2^N - 2`.
pub fn synth_graycode(n: usize) -> Result<NetworkTemplate> {
    check_n(n)?;
    let qubit_of_bit = |b: u32| n - b as usize;
    let mut steps = Vec::new();
    for k in 0..n as u32 {
        let target = qubit_of_bit(k);
        let first = 1u32 << k;
        if k > 0 {
            steps.push(Step::Gate(Gate::Cnot(qubit_of_bit(k - 1), target)));
        }
        steps.push(Step::Rot(target, first ^ (first >> 1)));
        for i in first + 1..first << 1 {
            let flipped = i.trailing_zeros();
            steps.push(Step::Gate(Gate::Cnot(qubit_of_bit(flipped), target)));
            steps.push(Step::Rot(target, i ^ (i >> 1)));
        }
    }
    let tag = "gray: order i^(i>>1) for i=1..2^N-1 starting at 0..01 on qubit N; \
               the run with leading bit k rotates qubit N-k and opens with cnot(N-k+1 -> N-k)";
    assemble(n, &steps, tag.to_string(), CouplingKind::Full)
}
