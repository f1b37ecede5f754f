//! Exhaustive search for templates with few two-qubit blocks.
//!
//! A block is a set of classical gates on disjoint coupled pairs executed
//! together. Between blocks every wire whose label is a condition not yet
//! rotated gets its rotation for free. The search is iterative deepening on
//! the block count with an admissible bound: each non-swap gate creates at
//! most one new label, the last block only restores labels that were
//! rotated at the start, and on up to four wires the exact distance back to
//! the identity labels is tabulated. States equal up to a coupling-graph automorphism
//! share a transposition-table entry, and a gate that shares no wire with
//! the previous block is never tried, since it could have joined that block.
//!
//! Before deepening, a constructive pass finds some feasible template by
//! breadth-first search towards new labels and then back to the identity. It
//! is returned, flagged non-optimal, when the budget runs out first.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::circuit::{Circuit, Gate};
use crate::coupling::CouplingGraph;
use crate::error::{Error, Result};
use crate::parity::{apply_label_action_raw, qubit_bit, ParityMask};
use crate::synth::{NetworkTemplate, RotationSlot};

/// Default register-size cap for [`optimize_template`].
pub const DEFAULT_SEARCH_CAP: usize = 4;
/// Hit sets are 64-bit, so the search cannot go beyond six wires.
pub const MAX_SEARCH_WIDTH: usize = 6;

const TABLE_LIMIT: usize = 1 << 22;
/// Largest width for which the exact restoring distance is tabulated
/// (`|GL(4, 2)| = 20160` label states).
const RESTORE_TABLE_WIDTH: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateSet {
    /// `{Cnot, Swap}`.
    Cnot,
    /// `{Cns, Swap}`.
    Cns,
}

impl fmt::Display for GateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateSet::Cnot => "cnot",
            GateSet::Cns => "cns",
        })
    }
}

impl FromStr for GateSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cnot" => Ok(GateSet::Cnot),
            "cns" => Ok(GateSet::Cns),
            other => Err(Error::Incompatible(format!("unknown gate set '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Limit on expanded search nodes; deterministic.
    pub nodes: u64,
    pub wall_clock: Option<Duration>,
}

impl Budget {
    pub fn nodes(nodes: u64) -> Self {
        Self { nodes, wall_clock: None }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::nodes(10_000_000)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizeResult {
    pub template: NetworkTemplate,
    /// Every smaller block count was refuted within the budget.
    pub optimal: bool,
    pub blocks: usize,
    /// Smallest block count not refuted by the search.
    pub lower_bound: usize,
    pub two_qubit_gates: usize,
    pub nodes: u64,
}

pub fn optimize_template(
    n: usize,
    coupling: &CouplingGraph,
    gate_set: GateSet,
    budget: Budget,
) -> Result<OptimizeResult> {
    optimize_template_capped(n, coupling, gate_set, budget, DEFAULT_SEARCH_CAP)
}

pub fn optimize_template_capped(
    n: usize,
    coupling: &CouplingGraph,
    gate_set: GateSet,
    budget: Budget,
    cap: usize,
) -> Result<OptimizeResult> {
    let cap = cap.min(MAX_SEARCH_WIDTH);
    if n == 0 {
        return Err(Error::InvalidWidth { width: n, max: cap });
    }
    if n > cap {
        return Err(Error::OverCap { what: "template search", cap, width: n });
    }
    if coupling.width() != n {
        return Err(Error::WidthMismatch { expected: n, found: coupling.width() });
    }
    if budget.nodes == 0 || budget.wall_clock.is_some_and(|d| d.is_zero()) {
        return Err(Error::EmptyBudget);
    }
    let mut search = Search::new(n, coupling, gate_set, budget);
    let outcome = search.run();
    let nodes = search.nodes;
    let (path, optimal, lower_bound, note) = match outcome {
        Outcome::Found { path, complete: true } => {
            let d = path.len();
            (path, true, d, String::new())
        }
        Outcome::Found { path, complete: false } => {
            let d = path.len();
            (path, true, d, ", tie-break incomplete".to_string())
        }
        Outcome::Incumbent { path, lower_bound } => {
            (path, false, lower_bound, format!(", constructive, lower bound {lower_bound}"))
        }
        Outcome::Exhausted { lower_bound } => return Err(Error::BudgetExhausted { nodes, lower_bound }),
    };
    let template = search.emit(&path, &note)?;
    let two_qubit_gates = path.iter().map(|&b| search.blocks[b].gates.len()).sum();
    Ok(OptimizeResult { template, optimal, blocks: path.len(), lower_bound, two_qubit_gates, nodes })
}

struct Block {
    gates: Vec<Gate>,
    /// Wires touched by each gate, as bit sets over 0-based wires.
    gate_wires: Vec<u32>,
    wires: u32,
}

impl Block {
    fn new(gates: Vec<Gate>) -> Self {
        let gate_wires: Vec<u32> =
            gates.iter().map(|g| g.qubits().iter().fold(0, |m, &q| m | 1 << (q - 1))).collect();
        let wires = gate_wires.iter().fold(0, |m, w| m | w);
        Self { gates, gate_wires, wires }
    }

    /// A gate sharing no wire with the previous block could have joined it,
    /// so only blocks whose every gate overlaps `prev` need be tried.
    fn follows(&self, prev: u32) -> bool {
        self.gate_wires.iter().all(|w| w & prev != 0)
    }
}

enum Outcome {
    /// Minimal block count. `complete` is false when the budget ran out
    /// before the gate-count tie-break finished.
    Found { path: Vec<usize>, complete: bool },
    /// Constructive solution; depths below `lower_bound` were refuted.
    Incumbent { path: Vec<usize>, lower_bound: usize },
    Exhausted { lower_bound: usize },
}

struct Aborted;

struct Search {
    n: usize,
    blocks: Vec<Block>,
    /// Largest number of labels a single block can create.
    max_new: usize,
    identity: Vec<u32>,
    full_hit: u64,
    /// Blocks needed to bring each label state back to the identity.
    restore: Option<HashMap<u64, u8>>,
    /// `mask_perm[a][m]`: mask `m` with wires relabelled by automorphism `a`.
    mask_perm: Vec<Vec<u32>>,
    wire_perm: Vec<Vec<usize>>,
    budget: Budget,
    started: Instant,
    nodes: u64,
    table: HashMap<(u64, u64), (u8, u16)>,
    best: Option<(usize, Vec<usize>)>,
    path: Vec<usize>,
    coupling: CouplingGraph,
    gate_set: GateSet,
}

fn gate_key(g: &Gate) -> (u8, usize, usize) {
    match *g {
        Gate::Cnot(a, b) => (0, a, b),
        Gate::Cns(a, b) => (1, a, b),
        Gate::Swap(a, b) => (2, a, b),
        _ => unreachable!("blocks hold classical gates only"),
    }
}

fn enumerate_blocks(coupling: &CouplingGraph, gate_set: GateSet) -> Vec<Block> {
    let edges = coupling.edges();
    let options = |a: usize, b: usize| -> [Gate; 3] {
        match gate_set {
            GateSet::Cnot => [Gate::Cnot(a, b), Gate::Cnot(b, a), Gate::Swap(a, b)],
            GateSet::Cns => [Gate::Cns(a, b), Gate::Cns(b, a), Gate::Swap(a, b)],
        }
    };
    fn go(
        edges: &[(usize, usize)],
        i: usize,
        used: u32,
        current: &mut Vec<Gate>,
        options: &dyn Fn(usize, usize) -> [Gate; 3],
        out: &mut Vec<Vec<Gate>>,
    ) {
        if i == edges.len() {
            if !current.is_empty() {
                out.push(current.clone());
            }
            return;
        }
        go(edges, i + 1, used, current, options, out);
        let (a, b) = edges[i];
        let bits = (1 << a) | (1 << b);
        if used & bits == 0 {
            for g in options(a, b) {
                current.push(g);
                go(edges, i + 1, used | bits, current, options, out);
                current.pop();
            }
        }
    }
    let mut raw = Vec::new();
    go(&edges, 0, 0, &mut Vec::new(), &options, &mut raw);
    let mut keyed: Vec<(Vec<(u8, usize, usize)>, Vec<Gate>)> = raw
        .into_iter()
        .map(|mut gates| {
            gates.sort_by_key(gate_key);
            (gates.iter().map(gate_key).collect(), gates)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, gates)| Block::new(gates)).collect()
}

fn undo_label_action(gate: &Gate, labels: &mut [u32]) {
    match *gate {
        Gate::Cns(c, t) => {
            let (a, b) = (labels[c - 1], labels[t - 1]);
            labels[c - 1] = b;
            labels[t - 1] = a ^ b;
        }
        _ => apply_label_action_raw(gate, labels).expect("classical gate"),
    }
}

/// Backward breadth-first search from the identity over all label states.
fn restore_distances(blocks: &[Block], identity: &[u32]) -> HashMap<u64, u8> {
    let start = Search::pack(identity);
    let n = identity.len();
    let mut dist = HashMap::from([(start, 0u8)]);
    let mut frontier = vec![start];
    let mut d = 0u8;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for &s in &frontier {
            let base: Vec<u32> = (0..n).map(|j| ((s >> (6 * j)) & 63) as u32).collect();
            for block in blocks {
                let mut t = base.clone();
                for gate in &block.gates {
                    undo_label_action(gate, &mut t);
                }
                let packed = Search::pack(&t);
                dist.entry(packed).or_insert_with(|| {
                    next.push(packed);
                    d
                });
            }
        }
        frontier = next;
    }
    dist
}

impl Search {
    fn new(n: usize, coupling: &CouplingGraph, gate_set: GateSet, budget: Budget) -> Self {
        let blocks = enumerate_blocks(coupling, gate_set);
        let max_new = blocks
            .iter()
            .map(|b| b.gates.iter().filter(|g| !matches!(g, Gate::Swap(..))).count())
            .max()
            .unwrap_or(0);
        let identity: Vec<u32> = (1..=n).map(|q| qubit_bit(q, n)).collect();
        let dim = 1usize << n;
        let full_hit = if dim == 64 { !1u64 } else { ((1u64 << dim) - 1) & !1 };
        let wire_perm = coupling.automorphisms();
        let mask_perm = wire_perm
            .iter()
            .map(|p| {
                (0..dim as u32)
                    .map(|m| {
                        (0..n)
                            .filter(|&j| m & identity[j] != 0)
                            .fold(0u32, |acc, j| acc | identity[p[j]])
                    })
                    .collect()
            })
            .collect();
        let restore = (n <= RESTORE_TABLE_WIDTH).then(|| restore_distances(&blocks, &identity));
        Self {
            n,
            blocks,
            max_new,
            identity,
            full_hit,
            restore,
            mask_perm,
            wire_perm,
            budget,
            started: Instant::now(),
            nodes: 0,
            table: HashMap::new(),
            best: None,
            path: Vec::new(),
            coupling: *coupling,
            gate_set,
        }
    }

    fn initial_hit(&self) -> u64 {
        self.identity.iter().fold(0u64, |h, &m| h | (1u64 << m))
    }

    /// Lower bounds on the remaining blocks and two-qubit gates.
    fn bounds(&self, labels: &[u32], hit: u64) -> (usize, usize) {
        let unhit = (self.full_hit & !hit).count_ones() as usize;
        let (blocks, gates) = if unhit > 0 {
            if self.max_new == 0 {
                return (usize::MAX / 2, usize::MAX / 2);
            }
            (unhit.div_ceil(self.max_new) + 1, unhit + 1)
        } else if labels != self.identity.as_slice() {
            (1, 1)
        } else {
            (0, 0)
        };
        match &self.restore {
            Some(table) => {
                let r = table[&Self::pack(labels)] as usize;
                (blocks.max(r), gates.max(r))
            }
            None => (blocks, gates),
        }
    }

    fn canonical(&self, labels: &[u32], hit: u64, prev: u32) -> (u64, u64) {
        let mut best = (u64::MAX, u64::MAX);
        for (perm, wires) in self.mask_perm.iter().zip(&self.wire_perm) {
            let mut packed = 0u64;
            for (j, &l) in labels.iter().enumerate() {
                packed |= (perm[l as usize] as u64) << (6 * wires[j]);
                if prev & (1 << j) != 0 {
                    packed |= 1u64 << (40 + wires[j]);
                }
            }
            let mut h = 0u64;
            let mut rest = hit;
            while rest != 0 {
                let m = rest.trailing_zeros();
                rest &= rest - 1;
                h |= 1u64 << perm[m as usize];
            }
            best = best.min((packed, h));
        }
        best
    }

    fn tick(&mut self) -> std::result::Result<(), Aborted> {
        self.nodes += 1;
        if self.nodes > self.budget.nodes {
            return Err(Aborted);
        }
        if let Some(limit) = self.budget.wall_clock {
            if self.nodes % 4096 == 0 && self.started.elapsed() > limit {
                return Err(Aborted);
            }
        }
        Ok(())
    }

    /// Depth-first search below `depth` blocks. Returns the smallest
    /// `g + h` that exceeded the bound.
    fn dfs(
        &mut self,
        labels: &mut Vec<u32>,
        hit: u64,
        prev: u32,
        gates: usize,
        depth: usize,
    ) -> std::result::Result<usize, Aborted> {
        let g = self.path.len();
        let (h_blocks, h_gates) = self.bounds(labels, hit);
        if g + h_blocks > depth {
            return Ok(g + h_blocks);
        }
        if let Some((best_gates, _)) = &self.best {
            if gates + h_gates >= *best_gates {
                return Ok(usize::MAX);
            }
        }
        if h_blocks == 0 {
            self.best = Some((gates, self.path.clone()));
            return Ok(usize::MAX);
        }
        let key = self.canonical(labels, hit, prev);
        let mine = (g as u8, gates as u16);
        let room = self.table.len() < TABLE_LIMIT;
        match self.table.get_mut(&key) {
            Some(seen) if seen.0 <= mine.0 && seen.1 <= mine.1 => return Ok(usize::MAX),
            Some(seen) => *seen = mine,
            None if room => {
                self.table.insert(key, mine);
            }
            None => {}
        }
        self.tick()?;

        let mut next_bound = usize::MAX;
        let saved = labels.clone();
        for b in 0..self.blocks.len() {
            if !self.blocks[b].follows(prev) {
                continue;
            }
            for gate in &self.blocks[b].gates {
                apply_label_action_raw(gate, labels).expect("classical gate");
            }
            let mut next_hit = hit;
            for &l in labels.iter() {
                next_hit |= 1u64 << l;
            }
            self.path.push(b);
            let cost = gates + self.blocks[b].gates.len();
            let r = self.dfs(labels, next_hit, self.blocks[b].wires, cost, depth);
            self.path.pop();
            labels.copy_from_slice(&saved);
            next_bound = next_bound.min(r?);
        }
        Ok(next_bound)
    }

    fn pack(labels: &[u32]) -> u64 {
        labels.iter().enumerate().fold(0u64, |p, (j, &l)| p | (l as u64) << (6 * j))
    }

    fn unpack(&self, packed: u64) -> Vec<u32> {
        (0..self.n).map(|j| ((packed >> (6 * j)) & 63) as u32).collect()
    }

    /// Quick feasible solution: repeatedly take the shortest block sequence
    /// reaching a state with unrotated labels (most of them on ties), then
    /// the shortest one back to the identity.
    fn construct(&mut self) -> std::result::Result<Vec<usize>, Aborted> {
        let identity = Self::pack(&self.identity);
        let mut labels = self.identity.clone();
        let mut hit = self.initial_hit();
        let mut path = Vec::new();
        loop {
            let done = hit == self.full_hit;
            let start = Self::pack(&labels);
            if done && start == identity {
                return Ok(path);
            }
            let score = |packed: u64, this: &Self| -> usize {
                if done {
                    usize::from(packed == identity)
                } else {
                    this.unpack(packed).iter().filter(|&&l| hit & (1u64 << l) == 0).count()
                }
            };
            let mut parent: HashMap<u64, (u64, usize)> = HashMap::new();
            let mut frontier = vec![start];
            let goal = loop {
                let mut next = Vec::new();
                let mut best: Option<(usize, u64)> = None;
                for &s in &frontier {
                    self.tick()?;
                    let base = self.unpack(s);
                    for b in 0..self.blocks.len() {
                        let mut t = base.clone();
                        for gate in &self.blocks[b].gates {
                            apply_label_action_raw(gate, &mut t).expect("classical gate");
                        }
                        let packed = Self::pack(&t);
                        if packed == start || parent.contains_key(&packed) {
                            continue;
                        }
                        parent.insert(packed, (s, b));
                        next.push(packed);
                        let sc = score(packed, self);
                        if sc > 0 && best.map_or(true, |(bs, _)| sc > bs) {
                            best = Some((sc, packed));
                        }
                    }
                }
                if let Some((_, g)) = best {
                    break g;
                }
                frontier = next;
                assert!(!frontier.is_empty(), "label group is connected");
            };
            let mut steps = Vec::new();
            let mut cur = goal;
            while cur != start {
                let (prev, b) = parent[&cur];
                steps.push(b);
                cur = prev;
            }
            steps.reverse();
            path.extend(steps);
            labels = self.unpack(goal);
            for &l in &labels {
                hit |= 1u64 << l;
            }
        }
    }

    fn run(&mut self) -> Outcome {
        let mut labels = self.identity.clone();
        let hit = self.initial_hit();
        let mut depth = self.bounds(&labels, hit).0;
        let incumbent = match self.construct() {
            Ok(p) => p,
            Err(Aborted) => return Outcome::Exhausted { lower_bound: depth },
        };
        loop {
            self.table.clear();
            match self.dfs(&mut labels, hit, u32::MAX, 0, depth) {
                Ok(next) => {
                    if let Some((_, path)) = self.best.take() {
                        return Outcome::Found { path, complete: true };
                    }
                    depth = next;
                }
                Err(Aborted) => {
                    return match self.best.take() {
                        Some((_, path)) => Outcome::Found { path, complete: false },
                        None => Outcome::Incumbent { path: incumbent, lower_bound: depth },
                    };
                }
            }
        }
    }

    /// Turn a block sequence into a template: rotations for the initial
    /// labels, then each block followed by rotations of its new labels.
    fn emit(&self, path: &[usize], note: &str) -> Result<NetworkTemplate> {
        let n = self.n;
        let mut skeleton = Circuit::new(n)?;
        let mut slots = Vec::new();
        let mut labels = self.identity.clone();
        let mut hit = 0u64;
        let mut rotate = |labels: &[u32], hit: &mut u64, skeleton: &mut Circuit| {
            for (j, &l) in labels.iter().enumerate() {
                if *hit & (1u64 << l) == 0 {
                    *hit |= 1u64 << l;
                    slots.push(RotationSlot {
                        position: skeleton.len(),
                        qubit: j + 1,
                        condition: ParityMask::new_unchecked(l, n),
                    });
                    skeleton.push_trusted(Gate::Rz(j + 1, 0.0));
                }
            }
        };
        rotate(&labels, &mut hit, &mut skeleton);
        for &b in path {
            for gate in &self.blocks[b].gates {
                apply_label_action_raw(gate, &mut labels)?;
                skeleton.push_trusted(*gate);
            }
            rotate(&labels, &mut hit, &mut skeleton);
        }
        let tag = format!(
            "optimized: {} gates on {} coupling, {} blocks{note}",
            self.gate_set,
            self.coupling.kind(),
            path.len(),
        );
        NetworkTemplate::new(skeleton, slots, tag, self.coupling)
    }
}
