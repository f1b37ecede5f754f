use std::collections::BTreeMap;

use crate::circuit::{validate_circuit, Circuit, Gate};
use crate::coupling::CouplingGraph;
use crate::error::{Error, Result};

/// Gates grouped into layers that act on pairwise disjoint qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct LayeredCircuit {
    width: usize,
    layers: Vec<Vec<Gate>>,
}

impl LayeredCircuit {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Layers containing at least one two-qubit gate.
    pub fn two_qubit_blocks(&self) -> usize {
        self.layers.iter().filter(|l| l.iter().any(Gate::is_two_qubit)).count()
    }

    pub fn flatten(&self) -> Circuit {
        let mut c = Circuit::new(self.width).expect("width checked on construction");
        for g in self.layers.iter().flatten() {
            c.push_trusted(*g);
        }
        c
    }
}

/// As-soon-as-possible layering; every gate lands one layer after the last
/// gate sharing a qubit with it. Gates without qubits go into the first layer.
pub(crate) fn layer_asap(c: &Circuit) -> LayeredCircuit {
    let mut next_free = vec![0usize; c.width() + 1];
    let mut layers: Vec<Vec<Gate>> = Vec::new();
    for g in c.gates() {
        let qubits = g.qubits();
        let layer = qubits.iter().map(|&q| next_free[q]).max().unwrap_or(0);
        for &q in &qubits {
            next_free[q] = layer + 1;
        }
        if layer == layers.len() {
            layers.push(Vec::new());
        }
        layers[layer].push(*g);
    }
    LayeredCircuit { width: c.width(), layers }
}

pub fn schedule_layers(c: &Circuit, coupling: &CouplingGraph) -> Result<LayeredCircuit> {
    if let Some(v) = validate_circuit(c, coupling).violation {
        return Err(Error::Incompatible(format!("cannot schedule invalid circuit: {v}")));
    }
    Ok(layer_asap(c))
}

/// Gate counts and scheduling figures for a circuit.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CircuitStats {
    pub qubits: usize,
    pub gates: usize,
    pub rotations: usize,
    /// Keyed by gate mnemonic (`rz`, `cnot`, `cns`, `swap`, `h`, `gphase`).
    pub per_kind: BTreeMap<&'static str, usize>,
    pub two_qubit: usize,
    pub depth: usize,
    pub two_qubit_blocks: usize,
}

impl CircuitStats {
    pub fn count(&self, kind: &str) -> usize {
        self.per_kind.get(kind).copied().unwrap_or(0)
    }
}

pub fn stats(c: &Circuit) -> CircuitStats {
    let mut per_kind = BTreeMap::new();
    for kind in ["rz", "cnot", "cns", "swap", "h", "gphase"] {
        per_kind.insert(kind, 0);
    }
    for g in c.gates() {
        *per_kind.entry(g.name()).or_default() += 1;
    }
    let layered = layer_asap(c);
    CircuitStats {
        qubits: c.width(),
        gates: c.len(),
        rotations: per_kind["rz"],
        two_qubit: c.gates().iter().filter(|g| g.is_two_qubit()).count(),
        depth: layered.depth(),
        two_qubit_blocks: layered.two_qubit_blocks(),
        per_kind,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::CouplingKind;
    use crate::synth::{synth_fig1_two_qubit, synth_recursive, RecursiveFlavor};

    fn path(n: usize) -> CouplingGraph {
        CouplingGraph::new(CouplingKind::Path, n).unwrap()
    }

    #[test]
    fn disjoint_rotations_share_a_layer() {
        let c = Circuit::from_gates(2, [Gate::Rz(1, 0.1), Gate::Rz(2, 0.2)]).unwrap();
        assert_eq!(schedule_layers(&c, &path(2)).unwrap().depth(), 1);
    }

    #[test]
    fn shared_qubits_serialize() {
        let c = Circuit::from_gates(2, [Gate::Cnot(1, 2), Gate::Cnot(1, 2)]).unwrap();
        let l = schedule_layers(&c, &path(2)).unwrap();
        assert_eq!(l.depth(), 2);
        assert_eq!(l.two_qubit_blocks(), 2);
    }

    #[test]
    fn invalid_circuit_rejected() {
        let c = Circuit::from_gates(3, [Gate::Cnot(1, 3)]).unwrap();
        assert!(schedule_layers(&c, &path(3)).is_err());
    }

    #[test]
    fn two_qubit_network_layers() {
        let t = synth_fig1_two_qubit();
        let l = schedule_layers(t.skeleton(), t.coupling()).unwrap();
        assert_eq!(l.depth(), 4);
        assert_eq!(l.two_qubit_blocks(), 2);
    }

    #[test]
    fn recursive_network_is_a_chain() {
        let t = synth_recursive(4, RecursiveFlavor::Cnot).unwrap();
        let l = schedule_layers(t.skeleton(), t.coupling()).unwrap();
        assert_eq!(l.depth(), t.skeleton().len());
    }

    #[test]
    fn layers_are_disjoint() {
        let t = synth_recursive(5, RecursiveFlavor::Cns).unwrap();
        for layer in schedule_layers(t.skeleton(), t.coupling()).unwrap().layers() {
            let mut seen = std::collections::HashSet::new();
            for g in layer {
                for q in g.qubits() {
                    assert!(seen.insert(q));
                }
            }
        }
    }

    #[test]
    fn stats_examples() {
        let s = stats(synth_recursive(3, RecursiveFlavor::Cnot).unwrap().skeleton());
        assert_eq!(s.rotations, 7);

        let s = stats(synth_fig1_two_qubit().skeleton());
        assert_eq!(s.count("rz"), 3);
        assert_eq!(s.count("cnot"), 2);
        assert_eq!(s.two_qubit, 2);
        assert_eq!(s.gates, 5);

        let s = stats(&Circuit::new(3).unwrap());
        assert_eq!((s.gates, s.rotations, s.two_qubit, s.depth, s.two_qubit_blocks), (0, 0, 0, 0, 0));
        assert!(s.per_kind.values().all(|&v| v == 0));
    }
}
