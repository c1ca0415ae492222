//! Test-side reference implementations. None of these call into the
//! simulator or layout code they are used to check.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qmpgrover::ir::{Circuit, Gate};

pub type C = Complex64;

/// Dense `2^width` unitary of one gate, built entry by entry.
pub fn gate_matrix(gate: &Gate, width: usize) -> DMatrix<C> {
    let dim = 1usize << width;
    let one = C::new(1.0, 0.0);
    let bit = |i: usize, q: usize| (i >> q) & 1;
    match gate {
        Gate::H(q) => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            DMatrix::from_fn(dim, dim, |r, c| {
                if (r ^ c) & !(1 << q) != 0 {
                    C::new(0.0, 0.0)
                } else if bit(r, *q) == 1 && bit(c, *q) == 1 {
                    C::new(-h, 0.0)
                } else {
                    C::new(h, 0.0)
                }
            })
        }
        Gate::X(q) => DMatrix::from_fn(dim, dim, |r, c| if r == c ^ (1 << q) { one } else { C::new(0.0, 0.0) }),
        Gate::Z(q) => DMatrix::from_diagonal(&DVector::from_fn(dim, |i, _| if bit(i, *q) == 1 { -one } else { one })),
        Gate::Mcz { controls, target } => DMatrix::from_diagonal(&DVector::from_fn(dim, |i, _| {
            if bit(i, *target) == 1 && controls.iter().all(|&c| bit(i, c) == 1) {
                -one
            } else {
                one
            }
        })),
        Gate::PhaseOracle { qubits, marked } => DMatrix::from_diagonal(&DVector::from_fn(dim, |i, _| {
            let local: u64 = qubits.iter().enumerate().map(|(k, &q)| (bit(i, q) as u64) << k).sum();
            if marked.contains(&local) {
                -one
            } else {
                one
            }
        })),
    }
}

pub fn circuit_matrix(circuit: &Circuit) -> DMatrix<C> {
    let dim = 1usize << circuit.width();
    circuit
        .ops()
        .iter()
        .fold(DMatrix::identity(dim, dim), |acc, g| gate_matrix(g, circuit.width()) * acc)
}

/// Output amplitudes of `circuit` from |0...0>.
pub fn dense_run(circuit: &Circuit) -> Vec<C> {
    let m = circuit_matrix(circuit);
    m.column(0).iter().cloned().collect()
}

/// Marginal by string slicing: key the MSB-left string, cut the window
/// characters, add up.
pub fn direct_marginal(counts: &BTreeMap<String, u64>, total_bits: usize, least: usize, n_bits: usize) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    for (key, &c) in counts {
        assert_eq!(key.len(), total_bits);
        let start = total_bits - least - n_bits;
        let sub = key[start..start + n_bits].to_string();
        *out.entry(sub).or_insert(0) += c;
    }
    out.retain(|_, c| *c > 0);
    out
}

/// Independent placement check: disjoint, on-device, each block a simple
/// path in the given order, and every cross-block pair more than `buffer`
/// hops apart by BFS over the edge list.
pub fn placement_is_valid(qubit_count: usize, edges: &[(usize, usize)], blocks: &[Vec<usize>], k: usize, buffer: usize) -> Result<(), String> {
    let edge_set: BTreeSet<(usize, usize)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut adj = vec![Vec::new(); qubit_count];
    for &(a, b) in &edge_set {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = BTreeSet::new();
    for (i, block) in blocks.iter().enumerate() {
        if block.len() != k {
            return Err(format!("block {i} has {} qubits, expected {k}", block.len()));
        }
        for &q in block {
            if q >= qubit_count || !seen.insert(q) {
                return Err(format!("qubit {q} off-device or reused"));
            }
        }
        for w in block.windows(2) {
            if !edge_set.contains(&(w[0].min(w[1]), w[0].max(w[1]))) {
                return Err(format!("block {i}: {} -- {} missing", w[0], w[1]));
            }
        }
    }
    for (i, a) in blocks.iter().enumerate() {
        for &src in a {
            let mut dist = vec![usize::MAX; qubit_count];
            dist[src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            for (j, b) in blocks.iter().enumerate().filter(|(j, _)| *j != i) {
                if let Some(&q) = b.iter().find(|&&q| dist[q] <= buffer) {
                    return Err(format!("blocks {i} and {j} within {buffer} hops ({src} -> {q})"));
                }
            }
        }
    }
    Ok(())
}

/// Total correlation of a joint distribution over `blocks` equal-width bit
/// groups: `sum H(marginals) - H(joint)`.
pub fn total_correlation(probs: &[f64], group_bits: usize, groups: usize) -> f64 {
    let entropy = |ps: &[f64]| -> f64 { ps.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum() };
    let mut marginal_h = 0.0;
    for g in 0..groups {
        let mut m = vec![0.0; 1 << group_bits];
        for (i, &p) in probs.iter().enumerate() {
            m[(i >> (g * group_bits)) & ((1 << group_bits) - 1)] += p;
        }
        marginal_h += entropy(&m);
    }
    marginal_h - entropy(probs)
}

/// Largest deviation of a joint distribution from the product of its group
/// marginals.
pub fn product_deviation(probs: &[f64], group_bits: usize, groups: usize) -> f64 {
    let mask = (1usize << group_bits) - 1;
    let marginals: Vec<Vec<f64>> = (0..groups)
        .map(|g| {
            let mut m = vec![0.0; 1 << group_bits];
            for (i, &p) in probs.iter().enumerate() {
                m[(i >> (g * group_bits)) & mask] += p;
            }
            m
        })
        .collect();
    probs
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let prod: f64 = (0..groups).map(|g| marginals[g][(i >> (g * group_bits)) & mask]).product();
            (p - prod).abs()
        })
        .fold(0.0, f64::max)
}

/// Closed-form Grover success, written out independently of the library.
pub fn grover_closed_form(n_items: f64, marked: f64, j: u64) -> f64 {
    let theta = (marked / n_items).sqrt().asin();
    ((2 * j + 1) as f64 * theta).sin().powi(2)
}
