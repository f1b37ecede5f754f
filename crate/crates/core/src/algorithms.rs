//! Deutsch-Jozsa, Grover and controlled-NOT drivers on top of a programmable
//! network. Every oracle is a phase gate programmed into one template.

use std::f64::consts::PI;
use std::fmt;

use crate::backend::Backend;
use crate::boolean::BooleanFunction;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::optimize::{stats, CircuitStats};
use crate::parity::BasisIndex;
use crate::simulate::{measure_probabilities, run, StateVector};
use crate::synth::bind_angles;
use crate::walsh::{phase_spec_from_boolean, PhaseSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionClass {
    Constant,
    Balanced,
    Neither,
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionClass::Constant => "constant",
            FunctionClass::Balanced => "balanced",
            FunctionClass::Neither => "neither",
        })
    }
}

pub fn classify_boolean(f: &BooleanFunction) -> FunctionClass {
    let ones = f.ones();
    let total = f.table().len();
    if ones == 0 || ones == total {
        FunctionClass::Constant
    } else if 2 * ones == total {
        FunctionClass::Balanced
    } else {
        FunctionClass::Neither
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Constant,
    Balanced,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Constant => "constant",
            Verdict::Balanced => "balanced",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DjResult {
    pub verdict: Verdict,
    pub prob_zero: f64,
    pub stats: CircuitStats,
}

fn hadamard_layer(c: &mut Circuit) {
    for q in 1..=c.width() {
        c.push_trusted(Gate::Hadamard(q));
    }
}

fn conjugated(n: usize, inner: &Circuit) -> Result<Circuit> {
    let mut c = Circuit::new(n)?;
    hadamard_layer(&mut c);
    c.extend(inner)?;
    hadamard_layer(&mut c);
    Ok(c)
}

/// `H U_f H` on `|0...0>`, with `U_f = diag(e^{-i pi f(x)})`.
///
/// With `strict` set, functions that are neither constant nor balanced are
/// rejected; otherwise they get whichever verdict the measurement suggests.
pub fn deutsch_jozsa(f: &BooleanFunction, backend: Backend, strict: bool) -> Result<DjResult> {
    if strict && classify_boolean(f) == FunctionClass::Neither {
        return Err(Error::NeitherConstantNorBalanced);
    }
    let n = f.width();
    let template = backend.template(n)?;
    let oracle = bind_angles(&template, &phase_spec_from_boolean(f, PI), false)?;
    let circuit = conjugated(n, &oracle)?;
    let out = run(&circuit, &StateVector::zero(n)?)?;
    let prob_zero = measure_probabilities(&out)[0];
    let verdict = if prob_zero >= 1.0 - 1e-9 { Verdict::Constant } else { Verdict::Balanced };
    Ok(DjResult { verdict, prob_zero, stats: stats(&circuit) })
}

/// `theta_0 = pi`, zero elsewhere. Conjugated by Hadamards it is minus the
/// inversion about the mean.
pub fn diffusion_phase_spec(n: usize) -> Result<PhaseSpec> {
    let mut theta = PhaseSpec::zeros(n)?.into_inner();
    theta[0] = PI;
    PhaseSpec::new(n, theta)
}

/// `2|psi><psi| - I` on the uniform superposition, as a circuit: the
/// diffusion phase gate between Hadamard layers plus a `2 pi` global phase
/// that absorbs the `-1`.
pub fn diffusion_circuit(n: usize, backend: Backend) -> Result<Circuit> {
    let template = backend.template(n)?;
    let inner = bind_angles(&template, &diffusion_phase_spec(n)?, true)?;
    let mut c = conjugated(n, &inner)?;
    c.push(Gate::GlobalPhase(2.0 * PI))?;
    Ok(c)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroverResult {
    pub iterations: usize,
    pub success_prob: f64,
    /// Success probability after `k = 0, 1, ..., iterations` rounds.
    pub trajectory: Vec<f64>,
}

/// `floor((pi / 4) sqrt(2^N / t))`.
pub fn default_grover_iterations(n: usize, marked: usize) -> usize {
    (PI / 4.0 * ((1u64 << n) as f64 / marked as f64).sqrt()).floor() as usize
}

pub fn grover(n: usize, marked: &[BasisIndex], backend: Backend, iterations: Option<usize>) -> Result<GroverResult> {
    let oracle_fn = BooleanFunction::indicator(n, marked)?;
    let t = oracle_fn.ones();
    let total = 1usize << n;
    if t == 0 || t == total {
        return Err(Error::InvalidMarkedSet { marked: t, total });
    }
    let template = backend.template(n)?;
    let oracle = bind_angles(&template, &phase_spec_from_boolean(&oracle_fn, PI), true)?;
    let diffusion = diffusion_circuit(n, backend)?;
    let mut round = oracle;
    round.extend(&diffusion)?;

    let iterations = iterations.unwrap_or_else(|| default_grover_iterations(n, t));
    let success = |s: &StateVector| -> f64 {
        let p = measure_probabilities(s);
        (0..total).filter(|&x| oracle_fn.eval(x as u32)).map(|x| p[x]).sum()
    };
    let mut state = StateVector::uniform(n)?;
    let mut trajectory = vec![success(&state)];
    for _ in 0..iterations {
        state = run(&round, &state)?;
        trajectory.push(success(&state));
    }
    Ok(GroverResult { iterations, success_prob: trajectory[iterations], trajectory })
}

/// `|c, b> -> |c, b xor h(c)>` on `h.width() + 1` qubits, the target being
/// the last qubit: the phase gate `theta_(c,b) = pi h(c) b` between
/// Hadamards on the target.
pub fn generalized_cnot(h: &BooleanFunction, backend: Backend) -> Result<Circuit> {
    let n = h.width() + 1;
    let theta = (0..1u32 << n)
        .map(|x| if x & 1 == 1 && h.eval(x >> 1) { PI } else { 0.0 })
        .collect();
    let template = backend.template(n)?;
    let inner = bind_angles(&template, &PhaseSpec::new(n, theta)?, false)?;
    let mut c = Circuit::new(n)?;
    c.push(Gate::Hadamard(n))?;
    c.extend(&inner)?;
    c.push(Gate::Hadamard(n))?;
    Ok(c)
}

/// NOT on qubit `k + 1` controlled by qubits `1..=k`.
pub fn toffoli(k: usize, backend: Backend) -> Result<Circuit> {
    generalized_cnot(&BooleanFunction::and_all(k)?, backend)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{distance_up_to_global_phase, unitary_of, DenseUnitary, C64};

    fn dense_backends() -> [Backend; 3] {
        [Backend::RecursiveCnot, Backend::RecursiveCns, Backend::Gray]
    }

    #[test]
    fn classification() {
        assert_eq!(classify_boolean(&BooleanFunction::constant(3, true).unwrap()), FunctionClass::Constant);
        let f = BooleanFunction::from_fn(3, |x| x < 4).unwrap();
        assert_eq!(classify_boolean(&f), FunctionClass::Balanced);
        let f = BooleanFunction::from_fn(2, |x| x == 3).unwrap();
        assert_eq!(classify_boolean(&f), FunctionClass::Neither);
        assert_eq!(deutsch_jozsa(&f, Backend::Gray, true), Err(Error::NeitherConstantNorBalanced));
        assert!(deutsch_jozsa(&f, Backend::Gray, false).is_ok());
    }

    #[test]
    fn dj_constant_and_first_bit() {
        for b in Backend::ALL {
            for n in 1..=3 {
                let r = deutsch_jozsa(&BooleanFunction::constant(n, false).unwrap(), b, true).unwrap();
                assert_eq!(r.verdict, Verdict::Constant);
                assert!((r.prob_zero - 1.0).abs() < 1e-12);
            }
            let f = BooleanFunction::from_fn(3, |x| x >> 2 == 1).unwrap();
            let r = deutsch_jozsa(&f, b, true).unwrap();
            assert_eq!(r.verdict, Verdict::Balanced);
            assert!(r.prob_zero <= 1e-18, "{b}: {}", r.prob_zero);
        }
    }

    #[test]
    fn diffusion_matches_inversion_about_mean() {
        assert_eq!(diffusion_phase_spec(1).unwrap().theta(), &[PI, 0.0]);
        for n in [2, 3] {
            let dim = 1usize << n;
            let entries = (0..dim * dim)
                .map(|k| {
                    let d = if k / dim == k % dim { 1.0 } else { 0.0 };
                    C64::new(2.0 / dim as f64 - d, 0.0)
                })
                .collect();
            let expected = DenseUnitary::from_entries(n, entries).unwrap();
            for b in dense_backends() {
                let u = unitary_of(&diffusion_circuit(n, b).unwrap()).unwrap();
                assert!(distance_up_to_global_phase(&u, &expected).unwrap() <= 1e-12);
                // the bookkeeping makes it exact, not just up to phase
                let raw = u.entries().iter().zip(expected.entries()).map(|(a, e)| (a - e).norm()).fold(0.0, f64::max);
                assert!(raw <= 1e-12, "{b} n={n}: {raw}");
            }
        }
    }

    #[test]
    fn grover_closed_forms() {
        let m = |n, x| vec![BasisIndex::new(x, n).unwrap()];
        let r = grover(2, &m(2, 3), Backend::RecursiveCnot, None).unwrap();
        assert_eq!(r.iterations, 1);
        assert!((r.success_prob - 1.0).abs() < 1e-12);

        let r = grover(4, &m(4, 5), Backend::Gray, None).unwrap();
        assert_eq!(r.iterations, 3);
        assert!((r.success_prob - (7.0 * 0.25f64.asin()).sin().powi(2)).abs() < 1e-12);
        assert!((r.success_prob - 0.961319).abs() < 1e-5);

        let four: Vec<_> = [1, 6, 9, 14].iter().map(|&x| BasisIndex::new(x, 4).unwrap()).collect();
        let r = grover(4, &four, Backend::RecursiveCns, None).unwrap();
        assert_eq!(r.iterations, 1);
        assert!((r.success_prob - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grover_rejects_trivial_marked_sets() {
        assert!(matches!(grover(2, &[], Backend::Gray, None), Err(Error::InvalidMarkedSet { .. })));
        let all: Vec<_> = (0..4).map(|x| BasisIndex::new(x, 2).unwrap()).collect();
        assert!(matches!(grover(2, &all, Backend::Gray, None), Err(Error::InvalidMarkedSet { .. })));
    }

    /// `U[(c, b ^ h(c)), (c, b)] = 1` for a generalized controlled-NOT.
    fn permutation_of(h: &BooleanFunction) -> DenseUnitary {
        let n = h.width() + 1;
        let dim = 1usize << n;
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for col in 0..dim {
            let row = col ^ h.eval((col >> 1) as u32) as usize;
            entries[row * dim + col] = C64::new(1.0, 0.0);
        }
        DenseUnitary::from_entries(n, entries).unwrap()
    }

    #[test]
    fn controlled_nots_are_permutations() {
        let cases = [
            BooleanFunction::constant(1, true).unwrap(),
            BooleanFunction::from_fn(1, |c| c == 1).unwrap(),
            BooleanFunction::and_all(2).unwrap(),
            BooleanFunction::and_all(3).unwrap(),
            // carry of a full adder: majority of three bits
            BooleanFunction::from_fn(3, |c| c.count_ones() >= 2).unwrap(),
        ];
        for h in &cases {
            let expected = permutation_of(h);
            for b in Backend::ALL {
                let u = unitary_of(&generalized_cnot(h, b).unwrap()).unwrap();
                assert!(distance_up_to_global_phase(&u, &expected).unwrap() <= 1e-10, "{b}");
            }
        }
        let u = unitary_of(&toffoli(1, Backend::Gray).unwrap()).unwrap();
        let cnot = unitary_of(&Circuit::from_gates(2, [Gate::Cnot(1, 2)]).unwrap()).unwrap();
        assert!(distance_up_to_global_phase(&u, &cnot).unwrap() <= 1e-10);
    }
}
