mod common;

use std::collections::BTreeMap;

use common::direct_marginal;
use proptest::prelude::*;
use qmpgrover::bits::format_bits;
use qmpgrover::sim::{marginalize_counts, sample, Counts, Distribution, SimError};
use qmpgrover::BitString;

fn to_strings(c: &Counts) -> BTreeMap<String, u64> {
    c.iter().map(|(k, v)| (format_bits(k, c.width()), v)).collect()
}

#[test]
fn listing_example_two_of_four_bits() {
    let counts = Counts::from_bitstrings([("0010", 3u64), ("0110", 5), ("1011", 2), ("0000", 1)]).unwrap();
    let m = marginalize_counts(&counts, 4, 1, 2).unwrap();
    // Window is bits 1 and 2, i.e. the middle two characters.
    assert_eq!(m.get_str("01").unwrap(), 5);
    assert_eq!(m.get_str("11").unwrap(), 5);
    assert_eq!(m.get_str("00").unwrap(), 1);
    assert_eq!(m.get_str("10").unwrap(), 0);
    assert_eq!(m.shots(), 11);
}

#[test]
fn marginal_errors() {
    let counts = Counts::from_bitstrings([("010", 1u64)]).unwrap();
    assert!(matches!(marginalize_counts(&counts, 4, 0, 2), Err(SimError::KeyLength { .. })));
    assert!(matches!(marginalize_counts(&counts, 3, 2, 2), Err(SimError::Window { .. })));
    assert!(matches!(marginalize_counts(&counts, 3, 0, 0), Err(SimError::Window { .. })));
}

#[test]
fn sampling_is_seeded_and_close_to_distribution() {
    let probs: Vec<f64> = (1..=16).map(|i| i as f64 / 136.0).collect();
    let dist = Distribution::new(probs.clone()).unwrap();
    assert_eq!(sample(&dist, 8192, 3).unwrap(), sample(&dist, 8192, 3).unwrap());
    assert_ne!(sample(&dist, 8192, 3).unwrap(), sample(&dist, 8192, 4).unwrap());
    for seed in 0..10 {
        let c = sample(&dist, 8192, seed).unwrap();
        // Kolmogorov distance; DKW puts it below 0.02 with probability > 0.999.
        let (mut emp, mut cdf, mut worst) = (0.0, 0.0, 0.0f64);
        for (i, p) in probs.iter().enumerate() {
            emp += c.get(i as u64) as f64 / 8192.0;
            cdf += p;
            worst = worst.max((emp - cdf).abs());
        }
        assert!(worst < 0.02, "seed {seed}: {worst}");
    }
}

#[test]
fn zero_probability_outcomes_are_never_drawn() {
    let dist = Distribution::new(vec![0.0, 0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0]).unwrap();
    let c = sample(&dist, 20_000, 1).unwrap();
    assert!(c.iter().all(|(k, _)| k == 1 || k == 3));
}

fn counts_strategy() -> impl Strategy<Value = Counts> {
    (1usize..=10).prop_flat_map(|w| {
        prop::collection::btree_map(0u64..(1 << w), 1u64..50, 1..20)
            .prop_map(move |m| Counts::from_map(w, m).unwrap())
    })
}

proptest! {
    #[test]
    fn bitstring_text_round_trip(len in 1usize..=64, raw in any::<u64>()) {
        let value = if len == 64 { raw } else { raw & ((1u64 << len) - 1) };
        let b = BitString::new(value, len).unwrap();
        let text = b.to_string();
        prop_assert_eq!(text.len(), len);
        prop_assert_eq!(text.parse::<BitString>().unwrap(), b);
        prop_assert_eq!(b.bit(0), value & 1 == 1);
        prop_assert_eq!(text.ends_with('1'), value & 1 == 1);
    }

    #[test]
    fn counts_json_round_trip(c in counts_strategy()) {
        let back = Counts::from_json(&c.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn marginal_matches_string_slicing(c in counts_strategy(), a in 0usize..10, l in 1usize..10) {
        let w = c.width();
        prop_assume!(a + l <= w);
        let m = marginalize_counts(&c, w, a, l).unwrap();
        prop_assert_eq!(m.shots(), c.shots());
        prop_assert_eq!(to_strings(&m), direct_marginal(&to_strings(&c), w, a, l));
    }
}
