mod common;

use approx::assert_abs_diff_eq;
use common::{circuit_matrix, dense_run, gate_matrix, grover_closed_form, product_deviation, total_correlation, C};
use nalgebra::DMatrix;
use qmpgrover::analytics::{p_gsa, p_partial, p_qmp};
use qmpgrover::ir::{build_diffusion, build_grover_circuit, build_partial_circuit, compose_qmp, Circuit, QmpPlan, SearchProblem, Window};
use qmpgrover::sim::{measure_distribution, run_exact, window_distribution, Statevector};
use qmpgrover::BitString;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_problem(rng: &mut ChaCha8Rng, n: usize, marked: usize) -> SearchProblem {
    let mut targets = std::collections::BTreeSet::new();
    while targets.len() < marked {
        targets.insert(rng.gen_range(0..1u64 << n));
    }
    SearchProblem::new(n, targets.into_iter().map(|t| BitString::new(t, n).unwrap())).unwrap()
}

#[test]
fn simulator_matches_dense_matrix_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 2..=6 {
        for j in 0..=3 {
            let problem = random_problem(&mut rng, n, 1 + n % 3);
            let circuits = vec![
                build_grover_circuit(&problem, j).unwrap(),
                build_partial_circuit(&problem, 1, BitString::new(rng.gen_range(0..2), 1).unwrap(), j).unwrap(),
            ];
            for c in circuits {
                let dense = dense_run(&c);
                let sim = run_exact(&c).unwrap();
                for (a, b) in sim.amplitudes().iter().zip(&dense) {
                    assert!((a - b).norm() < 1e-10, "n={n} j={j}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn two_qubit_diffusion_is_reflection_about_uniform() {
    let ops = build_diffusion(2, Window::full(2)).unwrap();
    let c = Circuit::new(2, ops, Window::full(2)).unwrap();
    let u = circuit_matrix(&c);
    let s = DMatrix::from_element(4, 4, C::new(0.25, 0.0));
    let expected = DMatrix::<C>::identity(4, 4) - s * C::new(2.0, 0.0);
    assert!((u - expected).norm() < 1e-12);
}

#[test]
fn local_diffusion_acts_as_identity_outside_span() {
    let ops = build_diffusion(4, Window::new(1, 2)).unwrap();
    let c = Circuit::new(4, ops, Window::full(4)).unwrap();
    let u = circuit_matrix(&c);
    // Entries linking states that differ on qubit 0 or 3 vanish.
    for r in 0..16usize {
        for col in 0..16usize {
            if (r ^ col) & 0b1001 != 0 {
                assert!(u[(r, col)].norm() < 1e-12);
            }
        }
    }
}

#[test]
fn single_gate_matrices_are_unitary() {
    let gates = [
        qmpgrover::ir::Gate::H(1),
        qmpgrover::ir::Gate::X(0),
        qmpgrover::ir::Gate::Z(2),
        qmpgrover::ir::Gate::mcz(&[0, 2]).unwrap(),
        qmpgrover::ir::Gate::phase_oracle(vec![2, 0], [1, 2]).unwrap(),
    ];
    for g in &gates {
        let m = gate_matrix(g, 3);
        assert!((m.adjoint() * &m - DMatrix::<C>::identity(8, 8)).norm() < 1e-12, "{g:?}");
    }
}

#[test]
fn circuit_then_inverse_restores_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 2..=8 {
        let problem = random_problem(&mut rng, n, 2);
        let c = build_grover_circuit(&problem, 3).unwrap();
        let amps: Vec<C> = (0..1 << n).map(|_| C::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let input = Statevector::from_amplitudes(amps.iter().map(|a| a / norm).collect()).unwrap();
        let mut state = input.clone();
        for g in c.ops().iter().chain(c.inverse().ops()) {
            state.apply_gate(g).unwrap();
        }
        for (a, b) in state.amplitudes().iter().zip(input.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn grover_tracks_closed_form_through_many_iterations() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for n in [2usize, 5, 8, 10, 12] {
        let problem = random_problem(&mut rng, n, 1);
        let t = problem.targets()[0];
        let oracle_round = {
            let one = build_grover_circuit(&problem, 1).unwrap();
            one.ops()[n..].to_vec()
        };
        let mut state = run_exact(&build_grover_circuit(&problem, 0).unwrap()).unwrap();
        for j in 0..=64u64 {
            if j > 0 {
                for g in &oracle_round {
                    state.apply_gate(g).unwrap();
                }
            }
            let expected = grover_closed_form((1u64 << n) as f64, 1.0, j);
            assert_abs_diff_eq!(state.probability(t), expected, epsilon = 1e-9);
            assert_abs_diff_eq!(p_gsa(1 << n, 1, j).unwrap(), expected, epsilon = 1e-12);
        }
    }
}

#[test]
fn partial_and_qmp_match_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for n in [4usize, 6, 9] {
        for b in 1..=3usize {
            let problem = random_problem(&mut rng, n, 1);
            let t = problem.targets()[0];
            let plan = QmpPlan::new(n, b, 0).unwrap();
            let block = plan.block_of(t);
            for j in 0..=6 {
                let plan = QmpPlan::new(n, b, j).unwrap();
                let dist = measure_distribution(&plan.block_circuit(&problem, block).unwrap()).unwrap();
                let hit = dist.probability(t >> b);
                let qmp = p_qmp(1 << n, 1 << b, 1, j as u64).unwrap();
                assert_abs_diff_eq!(hit, qmp, epsilon = 1e-9);
                assert_abs_diff_eq!(qmp / (1 << b) as f64, p_partial(1 << n, b as u32, 1, j as u64).unwrap(), epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn blocks_without_targets_stay_uniform() {
    let problem = SearchProblem::from_strs(&["10110", "10001", "11001"]).unwrap();
    let plan = QmpPlan::new(5, 2, 3).unwrap();
    for i in [0usize, 3] {
        let dist = measure_distribution(&plan.block_circuit(&problem, i).unwrap()).unwrap();
        for &p in dist.probabilities() {
            assert_abs_diff_eq!(p, 0.125, epsilon = 1e-12);
        }
    }
}

#[test]
fn qmp_joint_distribution_factorizes() {
    for (targets, b) in [(vec!["1011"], 2usize), (vec!["10110", "10001", "11001"], 2), (vec!["110"], 1)] {
        let problem = SearchProblem::from_strs(&targets).unwrap();
        let (circuit, plan) = compose_qmp(&problem, b, 1).unwrap();
        let state = run_exact(&circuit).unwrap();
        let joint = window_distribution(&state, Window::full(circuit.width())).unwrap();
        let tc = total_correlation(joint.probabilities(), plan.n(), plan.block_count());
        assert!(tc.abs() < 1e-12, "{targets:?}: {tc}");
        assert!(product_deviation(joint.probabilities(), plan.n(), plan.block_count()) < 1e-12);
    }
}
