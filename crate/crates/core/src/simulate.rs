//! Dense state-vector and unitary semantics.
//!
//! Amplitude index `x` follows the register bit order (qubit 1 is the most
//! significant bit). A unitary is stored row-major and built by applying each
//! gate as a row operation on the identity, which is the same as running the
//! circuit on every basis column.

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::parity::qubit_bit;
use crate::walsh::PhaseSpec;

pub type C64 = Complex64;

/// Largest register for [`unitary_of`] (`2^12 x 2^12` entries).
pub const UNITARY_CAP: usize = 12;
/// Largest register for state-vector runs.
pub const STATE_CAP: usize = 20;
/// Default acceptance threshold for [`verify_phase_gate`].
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    width: usize,
    amps: Vec<C64>,
}

impl StateVector {
    fn check_width(width: usize) -> Result<()> {
        if width == 0 {
            return Err(Error::InvalidWidth { width, max: STATE_CAP });
        }
        if width > STATE_CAP {
            return Err(Error::OverCap { what: "state-vector simulation", cap: STATE_CAP, width });
        }
        Ok(())
    }

    /// `|x>` for a basis index `x`.
    pub fn basis(width: usize, x: u32) -> Result<Self> {
        Self::check_width(width)?;
        let dim = 1usize << width;
        if x as usize >= dim {
            return Err(Error::BitsOutOfRange { bits: x, width });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[x as usize] = C64::new(1.0, 0.0);
        Ok(Self { width, amps })
    }

    pub fn zero(width: usize) -> Result<Self> {
        Self::basis(width, 0)
    }

    /// Equal superposition of all basis states.
    pub fn uniform(width: usize) -> Result<Self> {
        Self::check_width(width)?;
        let dim = 1usize << width;
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self { width, amps: vec![a; dim] })
    }

    pub fn from_amplitudes(width: usize, amps: Vec<C64>) -> Result<Self> {
        Self::check_width(width)?;
        let expected = 1usize << width;
        if amps.len() != expected {
            return Err(Error::LengthMismatch { expected, found: amps.len() });
        }
        Ok(Self { width, amps })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.check_bounds(self.width)?;
        apply_rows(&mut self.amps, self.width, 1, gate);
        Ok(())
    }
}

/// Row-major `2^N x 2^N` complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseUnitary {
    width: usize,
    entries: Vec<C64>,
}

impl DenseUnitary {
    fn check_width(width: usize) -> Result<()> {
        if width == 0 {
            return Err(Error::InvalidWidth { width, max: UNITARY_CAP });
        }
        if width > UNITARY_CAP {
            return Err(Error::OverCap { what: "unitary extraction", cap: UNITARY_CAP, width });
        }
        Ok(())
    }

    pub fn identity(width: usize) -> Result<Self> {
        Self::check_width(width)?;
        let dim = 1usize << width;
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        Ok(Self { width, entries })
    }

    /// `diag(e^{-i theta_x})`.
    pub fn phase_diagonal(theta: &PhaseSpec) -> Result<Self> {
        let width = theta.width();
        Self::check_width(width)?;
        let dim = 1usize << width;
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for (i, &t) in theta.theta().iter().enumerate() {
            entries[i * dim + i] = C64::from_polar(1.0, -t);
        }
        Ok(Self { width, entries })
    }

    pub fn from_entries(width: usize, entries: Vec<C64>) -> Result<Self> {
        Self::check_width(width)?;
        let dim = 1usize << width;
        if entries.len() != dim * dim {
            return Err(Error::LengthMismatch { expected: dim * dim, found: entries.len() });
        }
        Ok(Self { width, entries })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        1 << self.width
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// Largest magnitude off the main diagonal.
    pub fn max_off_diagonal(&self) -> f64 {
        let dim = self.dim();
        let mut m = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                if r != c {
                    m = m.max(self.entries[r * dim + c].norm());
                }
            }
        }
        m
    }

    /// Max-norm of `U^dagger U - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += self.entries[k * dim + i].conj() * self.entries[k * dim + j];
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }
}

/// Apply `gate` to a block of `2^width` rows of `lanes` entries each.
/// With `lanes == 1` this is a state-vector update.
fn apply_rows(data: &mut [C64], width: usize, lanes: usize, gate: &Gate) {
    let dim = 1usize << width;
    debug_assert_eq!(data.len(), dim * lanes);
    let swap_rows = |data: &mut [C64], r: usize, s: usize| {
        debug_assert!(r < s);
        let (head, tail) = data.split_at_mut(s * lanes);
        head[r * lanes..(r + 1) * lanes].swap_with_slice(&mut tail[..lanes]);
    };
    match *gate {
        Gate::Rz(q, angle) => {
            let bit = qubit_bit(q, width) as usize;
            let p0 = C64::from_polar(1.0, -angle / 2.0);
            let p1 = C64::from_polar(1.0, angle / 2.0);
            for (r, row) in data.chunks_exact_mut(lanes).enumerate() {
                let f = if r & bit == 0 { p0 } else { p1 };
                row.iter_mut().for_each(|a| *a *= f);
            }
        }
        Gate::GlobalPhase(angle) => {
            let f = C64::from_polar(1.0, -angle / 2.0);
            data.iter_mut().for_each(|a| *a *= f);
        }
        Gate::Cnot(c, t) => {
            let (cb, tb) = (qubit_bit(c, width) as usize, qubit_bit(t, width) as usize);
            for r in 0..dim {
                if r & cb != 0 && r & tb == 0 {
                    swap_rows(data, r, r | tb);
                }
            }
        }
        Gate::Swap(a, b) => {
            let (ab, bb) = (qubit_bit(a, width) as usize, qubit_bit(b, width) as usize);
            for r in 0..dim {
                if r & ab != 0 && r & bb == 0 {
                    let s = r ^ ab ^ bb;
                    swap_rows(data, s.min(r), s.max(r));
                }
            }
        }
        Gate::Cns(c, t) => {
            apply_rows(data, width, lanes, &Gate::Cnot(c, t));
            apply_rows(data, width, lanes, &Gate::Swap(c, t));
        }
        Gate::Hadamard(q) => {
            let bit = qubit_bit(q, width) as usize;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for r in 0..dim {
                if r & bit == 0 {
                    let (head, tail) = data.split_at_mut((r | bit) * lanes);
                    let lo = &mut head[r * lanes..(r + 1) * lanes];
                    let hi = &mut tail[..lanes];
                    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                        let (x, y) = (*a, *b);
                        *a = (x + y) * s;
                        *b = (x - y) * s;
                    }
                }
            }
        }
    }
}

pub fn apply_gate(s: &StateVector, g: &Gate) -> Result<StateVector> {
    let mut out = s.clone();
    out.apply(g)?;
    Ok(out)
}

/// Apply the gates of `c` left to right.
pub fn run(c: &Circuit, s: &StateVector) -> Result<StateVector> {
    if c.width() != s.width {
        return Err(Error::WidthMismatch { expected: c.width(), found: s.width });
    }
    let mut out = s.clone();
    for g in c.gates() {
        apply_rows(&mut out.amps, out.width, 1, g);
    }
    Ok(out)
}

/// Matrix of `c`; column `x` equals `run(c, |x>)`.
pub fn unitary_of(c: &Circuit) -> Result<DenseUnitary> {
    let mut u = DenseUnitary::identity(c.width())?;
    let dim = u.dim();
    for g in c.gates() {
        apply_rows(&mut u.entries, u.width, dim, g);
    }
    Ok(u)
}

/// `min_{|alpha| = 1} max_{ij} |U_ij - alpha V_ij|`.
///
/// The phase is seeded from the largest-magnitude entry of `V` and from the
/// least-squares fit, then refined by golden-section search on the window in
/// which the optimum must lie.
pub fn distance_up_to_global_phase(u: &DenseUnitary, v: &DenseUnitary) -> Result<f64> {
    if u.width != v.width {
        return Err(Error::WidthMismatch { expected: u.width, found: v.width });
    }
    // entries with V_ij == 0 contribute |U_ij| whatever alpha is
    let mut fixed = 0.0f64;
    let mut pairs: Vec<(C64, C64)> = Vec::new();
    for (&a, &b) in u.entries.iter().zip(&v.entries) {
        if b == C64::new(0.0, 0.0) {
            fixed = fixed.max(a.norm());
        } else {
            pairs.push((a, b));
        }
    }
    let Some(&(u_max, v_max)) = pairs.iter().max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
    else {
        return Ok(fixed);
    };
    let err = |t: f64| {
        let alpha = C64::from_polar(1.0, t);
        pairs.iter().fold(fixed, |m, &(a, b)| m.max((a - alpha * b).norm()))
    };

    let t_max = (u_max * v_max.conj()).arg();
    let overlap: C64 = pairs.iter().map(|&(a, b)| a * b.conj()).sum();
    let mut best = err(t_max);
    if overlap.norm() > 0.0 {
        best = best.min(err(overlap.arg()));
    }
    if best == 0.0 {
        return Ok(0.0);
    }

    // |alpha* - alpha_max| |V_max| <= 2 * best bounds the optimum's offset
    let ratio = (best / v_max.norm()).min(1.0);
    let half_width = (4.0 * ratio.asin()).min(std::f64::consts::PI) + 1e-15;
    let (mut lo, mut hi) = (t_max - half_width, t_max + half_width);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (err(x1), err(x2));
    for _ in 0..200 {
        if hi - lo < 1e-16 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = err(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = err(x2);
        }
    }
    Ok(best.min(f1).min(f2))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyReport {
    pub accepted: bool,
    pub max_error: f64,
}

/// Accept iff `c` equals `diag(e^{-i theta_x})` up to global phase within `tol`.
pub fn verify_phase_gate(c: &Circuit, theta: &PhaseSpec, tol: f64) -> Result<VerifyReport> {
    if c.width() != theta.width() {
        return Err(Error::WidthMismatch { expected: c.width(), found: theta.width() });
    }
    let u = unitary_of(c)?;
    let target = DenseUnitary::phase_diagonal(theta)?;
    let max_error = distance_up_to_global_phase(&u, &target)?;
    Ok(VerifyReport { accepted: max_error <= tol, max_error })
}

/// `|amp_x|^2` for every basis state.
pub fn measure_probabilities(s: &StateVector) -> Vec<f64> {
    s.amps.iter().map(|a| a.norm_sqr()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parity::{apply_label_action_raw, ParityMask};
    use std::f64::consts::PI;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn rz_on_zero() {
        let phi = 0.7;
        let s = apply_gate(&StateVector::zero(1).unwrap(), &Gate::Rz(1, phi)).unwrap();
        assert!(close(s.amplitudes()[0], C64::from_polar(1.0, -phi / 2.0), 1e-15));
        assert_eq!(s.amplitudes()[1], C64::new(0.0, 0.0));
    }

    #[test]
    fn cnot_on_10() {
        let s = apply_gate(&StateVector::basis(2, 0b10).unwrap(), &Gate::Cnot(1, 2)).unwrap();
        assert_eq!(measure_probabilities(&s), vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn cns_on_all_basis_states() {
        for x in 0..4u32 {
            let (x1, x2) = (x >> 1, x & 1);
            let expected = ((x1 ^ x2) << 1) | x1;
            let s = apply_gate(&StateVector::basis(2, x).unwrap(), &Gate::Cns(1, 2)).unwrap();
            assert_eq!(s.amplitudes()[expected as usize], C64::new(1.0, 0.0), "x={x:02b}");
        }
    }

    #[test]
    fn empty_run_is_identity() {
        let s = StateVector::uniform(3).unwrap();
        assert_eq!(run(&Circuit::new(3).unwrap(), &s).unwrap(), s);
        assert!(run(&Circuit::new(2).unwrap(), &s).is_err());
    }

    #[test]
    fn fig1_network_on_11() {
        let (p10, p01, p11) = (0.4, -1.3, 2.2);
        let c = Circuit::from_gates(
            2,
            [Gate::Rz(1, p10), Gate::Rz(2, p01), Gate::Cnot(1, 2), Gate::Rz(2, p11), Gate::Cnot(1, 2)],
        )
        .unwrap();
        let s = run(&c, &StateVector::basis(2, 0b11).unwrap()).unwrap();
        let expected = C64::from_polar(1.0, -(-p10 - p01 + p11) / 2.0);
        assert!(close(s.amplitudes()[3], expected, 1e-15));
    }

    #[test]
    fn small_unitaries() {
        let id = unitary_of(&Circuit::new(2).unwrap()).unwrap();
        assert_eq!(id, DenseUnitary::identity(2).unwrap());

        let cnot = unitary_of(&Circuit::from_gates(2, [Gate::Cnot(1, 2)]).unwrap()).unwrap();
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let expected = [
            [one, zero, zero, zero],
            [zero, one, zero, zero],
            [zero, zero, zero, one],
            [zero, zero, one, zero],
        ];
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(cnot.get(r, c), expected[r][c]);
            }
        }

        let h = unitary_of(&Circuit::from_gates(1, [Gate::Hadamard(1)]).unwrap()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(h.get(0, 0), C64::new(s, 0.0), 1e-16));
        assert!(close(h.get(0, 1), C64::new(s, 0.0), 1e-16));
        assert!(close(h.get(1, 0), C64::new(s, 0.0), 1e-16));
        assert!(close(h.get(1, 1), C64::new(-s, 0.0), 1e-16));
    }

    #[test]
    fn unitary_columns_match_runs() {
        let c = Circuit::from_gates(
            3,
            [Gate::Hadamard(2), Gate::Cns(2, 3), Gate::Rz(1, 0.3), Gate::Swap(1, 3), Gate::GlobalPhase(0.2)],
        )
        .unwrap();
        let u = unitary_of(&c).unwrap();
        for x in 0..8u32 {
            let col = run(&c, &StateVector::basis(3, x).unwrap()).unwrap();
            for r in 0..8 {
                assert_eq!(u.get(r, x as usize), col.amplitudes()[r]);
            }
        }
        assert!(u.unitarity_defect() < 1e-12);
    }

    #[test]
    fn unitary_cap() {
        let c = Circuit::new(13).unwrap();
        assert!(matches!(unitary_of(&c), Err(Error::OverCap { .. })));
        assert!(StateVector::zero(21).is_err());
    }

    #[test]
    fn distance_examples() {
        let theta = PhaseSpec::new(2, vec![0.1, -0.4, 1.3, 2.0]).unwrap();
        let v = DenseUnitary::phase_diagonal(&theta).unwrap();
        assert_eq!(distance_up_to_global_phase(&v, &v).unwrap(), 0.0);

        let neg = DenseUnitary::from_entries(2, v.entries().iter().map(|z| -z).collect()).unwrap();
        assert!(distance_up_to_global_phase(&neg, &v).unwrap() < 1e-15);

        // shifting one of four equal-magnitude entries by d: the optimal
        // global phase splits the difference, leaving 2 sin(d/4)
        let mut shifted = v.entries().to_vec();
        shifted[0] *= C64::from_polar(1.0, 1e-3);
        let u = DenseUnitary::from_entries(2, shifted).unwrap();
        let d = distance_up_to_global_phase(&u, &v).unwrap();
        assert!((d - 2.0 * (0.25e-3f64).sin()).abs() < 1e-12, "{d}");
        assert!(d > 0.4e-3 && d <= 1e-3);

        assert!(distance_up_to_global_phase(&u, &DenseUnitary::identity(3).unwrap()).is_err());
    }

    #[test]
    fn distance_sees_off_diagonal_weight() {
        let x = unitary_of(&Circuit::from_gates(1, [Gate::Hadamard(1)]).unwrap()).unwrap();
        let id = DenseUnitary::identity(1).unwrap();
        let d = distance_up_to_global_phase(&x, &id).unwrap();
        assert!(d >= std::f64::consts::FRAC_1_SQRT_2 - 1e-12);
    }

    #[test]
    fn verify_rejects_wrong_phase() {
        let c = Circuit::from_gates(1, [Gate::Rz(1, -PI)]).unwrap();
        let ok = verify_phase_gate(&c, &PhaseSpec::new(1, vec![0.0, PI]).unwrap(), 1e-12).unwrap();
        assert!(ok.accepted, "{ok:?}");
        let bad = verify_phase_gate(&c, &PhaseSpec::new(1, vec![0.0, 1.0]).unwrap(), 1e-10).unwrap();
        assert!(!bad.accepted);
    }

    #[test]
    fn probabilities() {
        assert_eq!(measure_probabilities(&StateVector::zero(3).unwrap())[..2], [1.0, 0.0]);
        let p = measure_probabilities(&StateVector::uniform(2).unwrap());
        for v in p {
            assert!((v - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn norm_preserved_over_long_runs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 5;
        let mut s = StateVector::uniform(n).unwrap();
        for _ in 0..10_000 {
            let a = rng.gen_range(1..=n);
            let mut b = rng.gen_range(1..=n);
            while b == a {
                b = rng.gen_range(1..=n);
            }
            let g = match rng.gen_range(0..6) {
                0 => Gate::Rz(a, rng.gen_range(-PI..PI)),
                1 => Gate::Cnot(a, b),
                2 => Gate::Cns(a, b),
                3 => Gate::Swap(a, b),
                4 => Gate::Hadamard(a),
                _ => Gate::GlobalPhase(rng.gen_range(-PI..PI)),
            };
            s.apply(&g).unwrap();
        }
        assert!((s.norm_sqr() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn classical_gates_agree_with_label_action() {
        for n in 2..=6usize {
            let mut gates = Vec::new();
            for a in 1..=n {
                for b in 1..=n {
                    if a != b {
                        gates.extend([Gate::Cnot(a, b), Gate::Cns(a, b), Gate::Swap(a, b)]);
                    }
                }
            }
            for g in &gates {
                let mut labels: Vec<u32> =
                    ParityMask::identity_labels(n).unwrap().iter().map(|m| m.bits()).collect();
                apply_label_action_raw(g, &mut labels).unwrap();
                for x in 0..1u32 << n {
                    let s = apply_gate(&StateVector::basis(n, x).unwrap(), g).unwrap();
                    // wire q now holds x . L_q
                    let mut y = 0u32;
                    for (i, l) in labels.iter().enumerate() {
                        if (x & l).count_ones() % 2 == 1 {
                            y |= qubit_bit(i + 1, n);
                        }
                    }
                    let p = measure_probabilities(&s);
                    assert_eq!(p[y as usize], 1.0, "{g} x={x:b}");
                    assert_eq!(s.amplitudes()[y as usize], C64::new(1.0, 0.0));
                }
            }
        }
    }
}
