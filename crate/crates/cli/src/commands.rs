use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use phasenet::optimize::{
    optimize_template_capped, schedule_layers, sensitivity, stats, Budget, CircuitStats, GateSet, PerturbationMode,
    MAX_SEARCH_WIDTH,
};
use phasenet::{
    bind_angles, check_programmable, classify_boolean, deutsch_jozsa, distance_up_to_global_phase, generalized_cnot,
    grover, unitary_of, validate_circuit, verify_phase_gate, Backend, BasisIndex, BooleanFunction, CouplingGraph,
    CouplingKind, DenseUnitary, C64, UNITARY_CAP,
};
use thiserror::Error;

use crate::format::{
    emit_circuit, emit_template, gate_text, normalize_angles, parse_circuit, parse_phase_file, parse_template,
    parse_truth_table, ParseError,
};
use crate::report::{format_prob, format_radians, Report};
use crate::Command;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unusable input: exit status 2.
    #[error("{0}")]
    Input(String),
    /// A check ran and failed: exit status 1.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<phasenet::Error> for CliError {
    fn from(e: phasenet::Error) -> Self {
        match e {
            phasenet::Error::BudgetExhausted { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("write failed: {e}"))
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parsed<T>(path: &Path, r: std::result::Result<T, ParseError>) -> Result<T> {
    r.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn backend(name: &str) -> Result<Backend> {
    Ok(name.parse()?)
}

fn coupling(name: &str) -> Result<CouplingKind> {
    Ok(name.parse()?)
}

fn circuit_stats(r: &mut Report, s: &CircuitStats) -> Result<()> {
    r.line("gates", s.gates)?;
    r.line("rotations", s.rotations)?;
    for (kind, count) in &s.per_kind {
        r.line(&format!("count_{kind}"), count)?;
    }
    r.line("two_qubit", s.two_qubit)?;
    r.line("depth", s.depth)?;
    r.line("two_qubit_blocks", s.two_qubit_blocks)?;
    Ok(())
}

pub(crate) fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    let mut r = Report::new(out);
    match command {
        Command::Compile {
            phases,
            backend: b,
            coupling: kind,
            template,
            qubits,
            include_global_phase,
            normalize_angles: normalize,
            out,
        } => {
            let theta = parsed(&phases, parse_phase_file(&read(&phases)?))?;
            let n = theta.width();
            if let Some(q) = qubits.filter(|&q| q != n) {
                return Err(CliError::Input(format!("phase file has {n} qubits, expected {q}")));
            }
            let (t, label) = match template {
                Some(path) => {
                    let t = parsed(&path, parse_template(&read(&path)?))?;
                    if let Some(d) = check_programmable(&t).diagnostics.first() {
                        return Err(CliError::Input(format!("{}: {d}", path.display())));
                    }
                    if let Some(kind) = kind {
                        let graph = CouplingGraph::new(coupling(&kind)?, t.width())?;
                        if let Some(v) = validate_circuit(t.skeleton(), &graph).violation {
                            return Err(CliError::Input(format!("template does not fit {kind} coupling: {v}")));
                        }
                    }
                    (t, "template".to_string())
                }
                None => {
                    let b = backend(&b.backend)?;
                    let kind = match kind {
                        Some(k) => coupling(&k)?,
                        None => b.default_coupling(),
                    };
                    (b.template_on(n, kind)?, b.to_string())
                }
            };
            let mut circuit = bind_angles(&t, &theta, include_global_phase)?;
            if normalize {
                circuit = normalize_angles(&circuit);
            }
            write(&out, &emit_circuit(&circuit))?;
            r.line("backend", label)?;
            r.line("coupling", t.coupling().kind())?;
            r.line("qubits", n)?;
            circuit_stats(&mut r, &stats(&circuit))?;
        }

        Command::Verify { circuit, phases, tol } => {
            let c = parsed(&circuit, parse_circuit(&read(&circuit)?))?;
            let theta = parsed(&phases, parse_phase_file(&read(&phases)?))?;
            if !(tol >= 0.0) {
                return Err(CliError::Input(format!("tolerance must be non-negative, got {tol}")));
            }
            let v = verify_phase_gate(&c, &theta, tol)?;
            r.line("qubits", c.width())?;
            r.line("max_error", format_radians(v.max_error))?;
            r.line("tolerance", format_radians(tol))?;
            r.line("verdict", if v.accepted { "accepted" } else { "rejected" })?;
            if !v.accepted {
                return Err(CliError::Failed(format!("max error {:e} exceeds {tol:e}", v.max_error)));
            }
        }

        Command::Dj { truth, backend: b, lenient } => {
            let f = parsed(&truth, parse_truth_table(&read(&truth)?))?;
            let b = backend(&b.backend)?;
            let result = deutsch_jozsa(&f, b, !lenient)?;
            r.line("qubits", f.width())?;
            r.line("backend", b)?;
            r.line("class", classify_boolean(&f))?;
            r.line("verdict", result.verdict)?;
            r.line("prob_zero", format_prob(result.prob_zero))?;
            circuit_stats(&mut r, &result.stats)?;
        }

        Command::Grover { qubits: n, marked, backend: b, iterations } => {
            let b = backend(&b.backend)?;
            let marked_idx = marked
                .iter()
                .map(|&x| BasisIndex::new(x, n))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let g = grover(n, &marked_idx, b, iterations)?;
            let t = BooleanFunction::indicator(n, &marked_idx)?.ones();
            let alpha = (t as f64 / (1u64 << n) as f64).sqrt().asin();
            let closed = |k: usize| ((2 * k + 1) as f64 * alpha).sin().powi(2);
            let worst = g.trajectory.iter().enumerate().map(|(k, &p)| (p - closed(k)).abs()).fold(0.0, f64::max);
            let shown: Vec<String> = marked.iter().map(u32::to_string).collect();
            r.line("qubits", n)?;
            r.line("backend", b)?;
            r.line("marked", shown.join(","))?;
            r.line("iterations", g.iterations)?;
            r.line("success_prob", format_prob(g.success_prob))?;
            r.line("closed_form", format_prob(closed(g.iterations)))?;
            for (k, p) in g.trajectory.iter().enumerate() {
                r.line(&format!("iteration_{k}"), format_prob(*p))?;
            }
            r.line("max_deviation", format_radians(worst))?;
            if worst > 1e-9 {
                return Err(CliError::Failed(format!("trajectory deviates from closed form by {worst:e}")));
            }
        }

        Command::Gcx { truth, backend: b, out } => {
            let h = parsed(&truth, parse_truth_table(&read(&truth)?))?;
            let b = backend(&b.backend)?;
            let c = generalized_cnot(&h, b)?;
            if let Some(path) = &out {
                write(path, &emit_circuit(&c))?;
            }
            r.line("qubits", c.width())?;
            r.line("backend", b)?;
            circuit_stats(&mut r, &stats(&c))?;
            if c.width() <= UNITARY_CAP {
                let dim = 1usize << c.width();
                let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
                for col in 0..dim {
                    let row = col ^ usize::from(h.eval((col >> 1) as u32));
                    entries[row * dim + col] = C64::new(1.0, 0.0);
                }
                let expected = DenseUnitary::from_entries(c.width(), entries)?;
                let e = distance_up_to_global_phase(&unitary_of(&c)?, &expected)?;
                r.line("permutation_error", format_radians(e))?;
                if e > 1e-10 {
                    return Err(CliError::Failed(format!("not the expected permutation, error {e:e}")));
                }
            } else {
                r.line("permutation_error", "not checked")?;
            }
        }

        Command::Optimize { qubits: n, coupling: kind, gate_set, budget, time_limit, cap, out } => {
            if cap > MAX_SEARCH_WIDTH {
                return Err(CliError::Input(format!("search cap is at most {MAX_SEARCH_WIDTH}")));
            }
            let gs: GateSet = gate_set.parse()?;
            let graph = CouplingGraph::new(coupling(&kind)?, n)?;
            let wall_clock = match time_limit {
                Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
                Some(s) => return Err(CliError::Input(format!("bad time limit {s}"))),
                None => None,
            };
            let result = optimize_template_capped(n, &graph, gs, Budget { nodes: budget, wall_clock }, cap)?;
            write(&out, &emit_template(&result.template))?;
            r.line("qubits", n)?;
            r.line("coupling", graph.kind())?;
            r.line("gate_set", gs)?;
            r.line("blocks", result.blocks)?;
            r.line("lower_bound", result.lower_bound)?;
            r.line("two_qubit_gates", result.two_qubit_gates)?;
            r.line("nodes", result.nodes)?;
            r.line("optimal", result.optimal)?;
        }

        Command::Schedule { circuit, coupling: kind, out } => {
            let c = parsed(&circuit, parse_circuit(&read(&circuit)?))?;
            let graph = CouplingGraph::new(coupling(&kind)?, c.width())?;
            let layered = schedule_layers(&c, &graph)?;
            if let Some(path) = &out {
                write(path, &emit_circuit(&layered.flatten()))?;
            }
            r.line("qubits", c.width())?;
            r.line("gates", c.len())?;
            r.line("depth", layered.depth())?;
            r.line("two_qubit_blocks", layered.two_qubit_blocks())?;
            for (k, layer) in layered.layers().iter().enumerate() {
                let text: Vec<String> = layer.iter().map(gate_text).collect();
                r.line(&format!("layer_{k}"), text.join("; "))?;
            }
        }

        Command::Sensitivity { qubits: n, epsilon, mode, trials, seed } => {
            let mode: PerturbationMode = mode.parse()?;
            let s = sensitivity(n, epsilon, mode, trials, seed)?;
            r.line("qubits", s.qubits)?;
            r.line("mode", s.mode)?;
            r.line("epsilon", format_radians(s.epsilon))?;
            r.line("trials", s.trials)?;
            r.line("seed", s.seed)?;
            r.line("worst_case_bound", format_radians(s.worst_case_bound))?;
            r.line("empirical_max", format_radians(s.empirical_max))?;
            r.line("empirical_rms", format_radians(s.empirical_rms))?;
            r.line("analytic_rms", format_radians(s.analytic_rms))?;
        }
    }
    Ok(())
}
