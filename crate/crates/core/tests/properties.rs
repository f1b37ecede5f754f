use std::f64::consts::PI;

use phasenet::optimize::{schedule_layers, sensitivity, PerturbationMode};
use phasenet::{
    bind_angles, classical_label_action, deutsch_jozsa, distance_up_to_global_phase, generalized_cnot,
    inner_product_mod2, phases_from_angles, run, trace_conditions, unitary_of, AngleSpec, Backend, BasisIndex,
    BooleanFunction, Circuit, CouplingGraph, CouplingKind, DenseUnitary, Gate, ParityMask, PhaseSpec, StateVector,
    C64,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DENSE: [Backend; 3] = [Backend::RecursiveCnot, Backend::RecursiveCns, Backend::Gray];

fn rank_gf2(rows: &[u32]) -> usize {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for bit in (0..32).rev() {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else { continue };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i] >> bit & 1 == 1 {
                rows[i] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

fn classical_gate(n: usize) -> impl Strategy<Value = Gate> {
    (0..3u8, 1..=n, 1..n).prop_map(move |(kind, a, off)| {
        let b = (a - 1 + off) % n + 1;
        match kind {
            0 => Gate::Cnot(a, b),
            1 => Gate::Cns(a, b),
            _ => Gate::Swap(a, b),
        }
    })
}

fn width_and_gates() -> impl Strategy<Value = (usize, Vec<Gate>)> {
    (2..=6usize).prop_flat_map(|n| (Just(n), prop::collection::vec(classical_gate(n), 0..60)))
}

fn any_gate(n: usize) -> BoxedStrategy<Gate> {
    let angle = -PI..PI;
    let local = prop_oneof![
        (1..=n, angle.clone()).prop_map(|(q, a)| Gate::Rz(q, a)),
        (1..=n).prop_map(Gate::Hadamard),
        angle.prop_map(Gate::GlobalPhase),
    ];
    if n < 2 {
        local.boxed()
    } else {
        prop_oneof![3 => local, 1 => classical_gate(n)].boxed()
    }
}

fn phases(n: usize) -> impl Strategy<Value = PhaseSpec> {
    prop::collection::vec(-PI..PI, 1 << n).prop_map(move |t| PhaseSpec::new(n, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn labels_stay_a_basis((n, gates) in width_and_gates()) {
        let mut labels = ParityMask::identity_labels(n).unwrap();
        for g in &gates {
            labels = classical_label_action(g, &labels).unwrap();
            let raw: Vec<u32> = labels.iter().map(|l| l.bits()).collect();
            prop_assert_eq!(rank_gf2(&raw), n);
        }
    }

    #[test]
    fn inner_product_is_bilinear(n in 1..=12usize, x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
        let m = (1u32 << n) - 1;
        let x = BasisIndex::new(x & m, n).unwrap();
        let (y, z) = (ParityMask::new(y & m, n).unwrap(), ParityMask::new(z & m, n).unwrap());
        let lhs = inner_product_mod2(x, y ^ z).unwrap();
        prop_assert_eq!(lhs, inner_product_mod2(x, y).unwrap() ^ inner_product_mod2(x, z).unwrap());
    }

    #[test]
    fn bound_templates_realize_the_phases(n in 1..=5usize, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta = PhaseSpec::new(n, (0..1 << n).map(|_| rand::Rng::gen_range(&mut rng, -PI..PI)).collect()).unwrap();
        let target = DenseUnitary::phase_diagonal(&theta).unwrap();
        for backend in DENSE {
            let c = bind_angles(&backend.template(n).unwrap(), &theta, false).unwrap();
            let u = unitary_of(&c).unwrap();
            prop_assert!(u.max_off_diagonal() <= 1e-10);
            prop_assert!(distance_up_to_global_phase(&u, &target).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn slot_angles_invert_to_the_phases(theta in (1..=6usize).prop_flat_map(phases)) {
        let n = theta.width();
        for backend in DENSE {
            let t = backend.template(n).unwrap();
            let c = bind_angles(&t, &theta, true).unwrap();
            let mut phi = vec![0.0; 1 << n];
            for (slot, entry) in t.slots().iter().zip(trace_conditions(&c).unwrap().entries.iter().filter(|e| e.condition.bits() != 0)) {
                prop_assert_eq!(slot.condition, entry.condition);
            }
            // the leading gphase carries phi_0, the rest sit in the slots
            let shift = 1;
            for slot in t.slots() {
                if let Gate::Rz(_, a) = c.gates()[slot.position + shift] {
                    phi[slot.condition.bits() as usize] = a;
                }
            }
            let Gate::GlobalPhase(g) = c.gates()[0] else { panic!("no global phase") };
            phi[0] = g;
            let back = phases_from_angles(&AngleSpec::new(n, phi).unwrap());
            for (a, b) in back.theta().iter().zip(theta.theta()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn norm_is_preserved(gates in (1..=6usize).prop_flat_map(|n| prop::collection::vec(any_gate(n), 0..200).prop_map(move |g| (n, g)))) {
        let (n, gates) = gates;
        let c = Circuit::from_gates(n, gates).unwrap();
        let mut s = StateVector::uniform(n).unwrap();
        for g in c.gates() {
            s.apply(g).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn schedule_keeps_per_qubit_order(gates in (1..=6usize).prop_flat_map(|n| prop::collection::vec(any_gate(n), 0..120).prop_map(move |g| (n, g)))) {
        let (n, gates) = gates;
        let c = Circuit::from_gates(n, gates).unwrap();
        let layered = schedule_layers(&c, &CouplingGraph::new(CouplingKind::Full, n).unwrap()).unwrap();
        let flat = layered.flatten();
        let mut sorted_a: Vec<String> = c.gates().iter().map(|g| format!("{g:?}")).collect();
        let mut sorted_b: Vec<String> = flat.gates().iter().map(|g| format!("{g:?}")).collect();
        sorted_a.sort();
        sorted_b.sort();
        prop_assert_eq!(sorted_a, sorted_b);
        for q in 1..=n {
            let on = |c: &Circuit| c.gates().iter().filter(|g| g.qubits().contains(&q)).copied().collect::<Vec<_>>();
            prop_assert_eq!(on(&c), on(&flat));
        }
        for layer in layered.layers() {
            let mut used = vec![false; n + 1];
            for g in layer {
                for q in g.qubits() {
                    prop_assert!(!used[q]);
                    used[q] = true;
                }
            }
        }
        if n <= 4 {
            let (u, v) = (unitary_of(&c).unwrap(), unitary_of(&flat).unwrap());
            let d = u.entries().iter().zip(v.entries()).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
            prop_assert!(d <= 1e-12);
        }
    }

    #[test]
    fn sensitivity_stays_under_the_bound(n in 1..=8usize, eps in 0.0..0.1f64, seed in any::<u64>()) {
        let s = sensitivity(n, eps, PerturbationMode::Random, 20, seed).unwrap();
        prop_assert!(s.empirical_max <= s.worst_case_bound * (1.0 + 1e-12));
    }

    #[test]
    fn controlled_nots_are_permutations(width in 1..=4usize, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = (0..1usize << width).map(|_| rand::Rng::gen_bool(&mut rng, 0.5)).collect();
        let h = BooleanFunction::new(width, table).unwrap();
        let mut reference: Option<phasenet::DenseUnitary> = None;
        // the optimized backend searches templates only up to four qubits
        for backend in Backend::ALL.into_iter().filter(|&b| b != Backend::Optimized || width < 4) {
            let u = unitary_of(&generalized_cnot(&h, backend).unwrap()).unwrap();
            for e in u.entries() {
                let m = e.norm();
                prop_assert!(m <= 1e-10 || (m - 1.0).abs() <= 1e-10);
            }
            let dim = 1usize << (width + 1);
            for col in 0..dim {
                let row = col ^ usize::from(h.eval((col >> 1) as u32));
                prop_assert!((u.get(row, col).norm() - 1.0).abs() <= 1e-10);
            }
            match &reference {
                None => reference = Some(u),
                Some(r) => prop_assert!(distance_up_to_global_phase(&u, r).unwrap() <= 1e-10),
            }
        }
    }
}

/// Balanced tables for N = 4, 5, sampled by shuffling half ones.
#[test]
fn deutsch_jozsa_sampled_balanced_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for n in [4usize, 5] {
        let dim = 1usize << n;
        for _ in 0..1000 {
            let mut table: Vec<bool> = (0..dim).map(|x| x < dim / 2).collect();
            table.shuffle(&mut rng);
            let f = BooleanFunction::new(n, table).unwrap();
            for backend in DENSE {
                let r = deutsch_jozsa(&f, backend, true).unwrap();
                assert!(r.prob_zero <= 1e-18, "{backend} N={n}: {:e}", r.prob_zero);
            }
        }
        for value in [false, true] {
            let r = deutsch_jozsa(&BooleanFunction::constant(n, value).unwrap(), Backend::Gray, true).unwrap();
            assert!((r.prob_zero - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn classical_gates_permute_basis_states() {
    for n in 2..=4 {
        for a in 1..=n {
            for b in (1..=n).filter(|&b| b != a) {
                for g in [Gate::Cnot(a, b), Gate::Cns(a, b), Gate::Swap(a, b)] {
                    let c = Circuit::from_gates(n, [g]).unwrap();
                    let u = unitary_of(&c).unwrap();
                    for e in u.entries() {
                        assert!(*e == C64::new(0.0, 0.0) || *e == C64::new(1.0, 0.0), "{g:?}");
                    }
                    for x in 0..1u32 << n {
                        let s = run(&c, &StateVector::basis(n, x).unwrap()).unwrap();
                        assert_eq!(s.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 1);
                    }
                }
            }
        }
    }
}
