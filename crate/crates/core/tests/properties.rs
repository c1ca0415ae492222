use proptest::prelude::*;
use qmpgrover::ir::{compose_qmp, Gate, SearchProblem};
use qmpgrover::layout::{load_builtin_map, place_blocks};
use qmpgrover::sim::{measure_distribution, sample, Statevector};

fn gate_strategy(width: usize) -> impl Strategy<Value = Gate> {
    let q = 0..width;
    prop_oneof![
        q.clone().prop_map(Gate::H),
        q.clone().prop_map(Gate::X),
        q.clone().prop_map(Gate::Z),
        prop::sample::subsequence((0..width).collect::<Vec<_>>(), 2..=width).prop_map(|qs| Gate::mcz(&qs).unwrap()),
        (prop::sample::subsequence((0..width).collect::<Vec<_>>(), 1..=width), prop::collection::vec(any::<u64>(), 0..4))
            .prop_map(|(qs, m)| {
                let k = qs.len();
                Gate::phase_oracle(qs, m.into_iter().map(|v| v & ((1 << k) - 1))).unwrap()
            }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_gate_preserves_norm(ops in prop::collection::vec(gate_strategy(6), 1..200)) {
        let mut state = Statevector::zero(6).unwrap();
        state.apply_gate(&Gate::H(0)).unwrap();
        state.apply_gate(&Gate::H(3)).unwrap();
        for g in &ops {
            state.apply_gate(g).unwrap();
            prop_assert!((state.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gate_followed_by_inverse_is_identity(ops in prop::collection::vec(gate_strategy(5), 1..40)) {
        let mut state = Statevector::zero(5).unwrap();
        for q in 0..5 {
            state.apply_gate(&Gate::H(q)).unwrap();
        }
        state.apply_gate(&Gate::phase_oracle(vec![0, 1, 2], [5]).unwrap()).unwrap();
        let start = state.clone();
        for g in &ops {
            state.apply_gate(g).unwrap();
        }
        for g in ops.iter().rev() {
            state.apply_gate(&g.inverse()).unwrap();
        }
        for (a, b) in state.amplitudes().iter().zip(start.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn sampling_and_placement_are_deterministic() {
    let problem = SearchProblem::from_strs(&["10110"]).unwrap();
    let (c, _) = compose_qmp(&problem, 2, 1).unwrap();
    let d = measure_distribution(&c).unwrap();
    assert_eq!(sample(&d, 4096, 12).unwrap().to_json().unwrap(), sample(&d, 4096, 12).unwrap().to_json().unwrap());
    let map = load_builtin_map("heavy-hex-127").unwrap();
    assert_eq!(place_blocks(&map, 8, 6, 1).unwrap(), place_blocks(&map, 8, 6, 1).unwrap());
}
