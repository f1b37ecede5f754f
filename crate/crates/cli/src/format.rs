//! Line-oriented file formats.
//!
//! Phase file: `n <N>` then `2^N` radian values, one per line.
//! Truth table: `n <N>` then one line of `2^N` characters from `{0,1}`.
//! Circuit: `qubits <N>` then one gate per line. A template is a circuit
//! whose rotation slots are listed in `# slot` comment lines.
//!
//! Blank lines and text after `#` are ignored everywhere.

use std::fmt::Write as _;

use phasenet::{
    normalize_angle, BooleanFunction, Circuit, CouplingGraph, CouplingKind, Gate, NetworkTemplate, ParityMask,
    PhaseSpec, RotationSlot, MAX_WIDTH,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    keyword: &str,
) -> Result<usize, ParseError> {
    let (line, text) = lines.next().ok_or_else(|| err(0, format!("missing '{keyword} <N>' header")))?;
    let mut parts = text.split_whitespace();
    if parts.next() != Some(keyword) {
        return Err(err(line, format!("expected '{keyword} <N>' header")));
    }
    let n: usize = parts
        .next()
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| err(line, format!("'{keyword}' needs a qubit count")))?;
    if parts.next().is_some() {
        return Err(err(line, "trailing text after header"));
    }
    if n == 0 || n > MAX_WIDTH {
        return Err(err(line, format!("qubit count must be between 1 and {MAX_WIDTH}")));
    }
    Ok(n)
}

fn parse_angle(line: usize, text: &str) -> Result<f64, ParseError> {
    let v: f64 = text.parse().map_err(|_| err(line, format!("'{text}' is not a number")))?;
    if !v.is_finite() {
        return Err(err(line, format!("'{text}' is not finite")));
    }
    Ok(v)
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_angle(a: f64) -> String {
    format!("{a:.16e}")
}

pub fn parse_phase_file(text: &str) -> Result<PhaseSpec, ParseError> {
    let mut lines = content_lines(text);
    let n = parse_header(&mut lines, "n")?;
    let dim = 1usize << n;
    let mut theta = Vec::with_capacity(dim);
    let mut last = 1;
    for (line, v) in lines {
        if theta.len() == dim {
            return Err(err(line, format!("more than {dim} phase values")));
        }
        theta.push(parse_angle(line, v)?);
        last = line;
    }
    if theta.len() != dim {
        return Err(err(last, format!("expected {dim} phase values, found {}", theta.len())));
    }
    PhaseSpec::new(n, theta).map_err(|e| err(last, e.to_string()))
}

pub fn emit_phase_file(theta: &PhaseSpec) -> String {
    let mut out = format!("n {}\n", theta.width());
    for &t in theta.theta() {
        let _ = writeln!(out, "{}", format_angle(t));
    }
    out
}

pub fn parse_truth_table(text: &str) -> Result<BooleanFunction, ParseError> {
    let mut lines = content_lines(text);
    let n = parse_header(&mut lines, "n")?;
    let (line, row) = lines.next().ok_or_else(|| err(0, "missing truth-table row"))?;
    if let Some((extra, _)) = lines.next() {
        return Err(err(extra, "truth table must be a single row"));
    }
    let table = row
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(err(line, format!("unexpected character '{other}' in truth table"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let dim = 1usize << n;
    if table.len() != dim {
        return Err(err(line, format!("expected {dim} entries, found {}", table.len())));
    }
    BooleanFunction::new(n, table).map_err(|e| err(line, e.to_string()))
}

pub fn emit_truth_table(f: &BooleanFunction) -> String {
    let row: String = f.table().iter().map(|&b| if b { '1' } else { '0' }).collect();
    format!("n {}\n{row}\n", f.width())
}

fn parse_gate(line: usize, text: &str) -> Result<Gate, ParseError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    let qubit = |s: &str| -> Result<usize, ParseError> {
        s.parse().map_err(|_| err(line, format!("'{s}' is not a qubit index")))
    };
    let gate = match parts.as_slice() {
        ["rz", q, a] => Gate::Rz(qubit(q)?, parse_angle(line, a)?),
        ["cnot", c, t] => Gate::Cnot(qubit(c)?, qubit(t)?),
        ["cns", c, t] => Gate::Cns(qubit(c)?, qubit(t)?),
        ["swap", a, b] => Gate::Swap(qubit(a)?, qubit(b)?),
        ["h", q] => Gate::Hadamard(qubit(q)?),
        ["gphase", a] => Gate::GlobalPhase(parse_angle(line, a)?),
        [name, ..] if ["rz", "cnot", "cns", "swap", "h", "gphase"].contains(name) => {
            return Err(err(line, format!("wrong number of operands for '{name}'")))
        }
        _ => return Err(err(line, format!("unknown gate '{text}'"))),
    };
    Ok(gate)
}

pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut lines = content_lines(text);
    let n = parse_header(&mut lines, "qubits")?;
    let mut c = Circuit::new(n).map_err(|e| err(1, e.to_string()))?;
    for (line, g) in lines {
        c.push(parse_gate(line, g)?).map_err(|e| err(line, e.to_string()))?;
    }
    Ok(c)
}

/// One gate in circuit-file syntax, without the newline.
pub fn gate_text(g: &Gate) -> String {
    match *g {
        Gate::Rz(q, a) => format!("rz {q} {}", format_angle(a)),
        Gate::GlobalPhase(a) => format!("gphase {}", format_angle(a)),
        Gate::Hadamard(q) => format!("h {q}"),
        Gate::Cnot(a, b) | Gate::Cns(a, b) | Gate::Swap(a, b) => format!("{} {a} {b}", g.name()),
    }
}

pub fn emit_circuit(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.width());
    for g in c.gates() {
        out.push_str(&gate_text(g));
        out.push('\n');
    }
    out
}

/// Reduce every `rz` angle into `(-pi, pi]`. Each full turn removed from an
/// `Rz` flips the sign of the state, which is put back through the global
/// phase (added to an existing `gphase`, or a new leading one).
pub fn normalize_angles(c: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(c.len() + 1);
    let mut turns = 0i64;
    for g in c.gates() {
        match *g {
            Gate::Rz(q, a) => {
                let (r, k) = normalize_angle(a);
                turns += k;
                gates.push(Gate::Rz(q, r));
            }
            other => gates.push(other),
        }
    }
    if turns % 2 != 0 {
        let shift = 2.0 * std::f64::consts::PI;
        match gates.iter_mut().find(|g| matches!(g, Gate::GlobalPhase(_))) {
            Some(Gate::GlobalPhase(a)) => *a += shift,
            _ => gates.insert(0, Gate::GlobalPhase(shift)),
        }
    }
    Circuit::from_gates(c.width(), gates).expect("same qubits as the input")
}

pub fn emit_template(t: &NetworkTemplate) -> String {
    let mut out = format!("# template: {}\n# coupling: {}\n", t.tag(), t.coupling().kind());
    out.push_str(&emit_circuit(t.skeleton()));
    for s in t.slots() {
        let _ = writeln!(out, "# slot {} {} {}", s.position, s.qubit, s.condition);
    }
    out
}

pub fn parse_template(text: &str) -> Result<NetworkTemplate, ParseError> {
    let skeleton = parse_circuit(text)?;
    let n = skeleton.width();
    let mut tag = String::from("from file");
    let mut coupling = CouplingKind::Full;
    let mut slots = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let Some(comment) = raw.trim().strip_prefix('#') else { continue };
        let comment = comment.trim();
        if let Some(v) = comment.strip_prefix("template:") {
            tag = v.trim().to_string();
        } else if let Some(v) = comment.strip_prefix("coupling:") {
            coupling = v.trim().parse().map_err(|e: phasenet::Error| err(line, e.to_string()))?;
        } else if let Some(v) = comment.strip_prefix("slot ") {
            let parts: Vec<&str> = v.split_whitespace().collect();
            let [pos, qubit, mask] = parts.as_slice() else {
                return Err(err(line, "slot needs '<position> <qubit> <mask>'"));
            };
            let position: usize = pos.parse().map_err(|_| err(line, format!("bad slot position '{pos}'")))?;
            let qubit: usize = qubit.parse().map_err(|_| err(line, format!("bad slot qubit '{qubit}'")))?;
            if mask.len() != n || !mask.chars().all(|c| c == '0' || c == '1') {
                return Err(err(line, format!("slot mask '{mask}' must be {n} binary digits")));
            }
            let bits = u32::from_str_radix(mask, 2).expect("checked binary digits");
            let condition = ParityMask::new(bits, n).map_err(|e| err(line, e.to_string()))?;
            slots.push(RotationSlot { position, qubit, condition });
        }
    }
    let graph = CouplingGraph::new(coupling, n).map_err(|e| err(1, e.to_string()))?;
    NetworkTemplate::new(skeleton, slots, tag, graph).map_err(|e| err(1, e.to_string()))
}
