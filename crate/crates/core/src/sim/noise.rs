//! Stochastic Pauli noise by Monte Carlo trajectories.
//!
//! After every gate, each qubit the gate touched independently suffers an X,
//! Y or Z error (uniformly chosen) with probability `p_single` for
//! one-qubit gates and `p_multi` for multi-qubit gates.
//!
//! Trajectory `i` draws from `ChaCha8Rng::seed_from_u64(seed)` switched to
//! stream `i`, so results do not depend on how trajectories are scheduled
//! across threads.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::counts::Cdf;
use super::{window_distribution, Counts, Distribution, SimError, Statevector};
use crate::ir::Circuit;

/// Trajectories summed sequentially before partial sums are combined, in
/// chunk order.
const CHUNK: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub p_single: f64,
    pub p_multi: f64,
    #[serde(default)]
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(p_single: f64, p_multi: f64, seed: u64) -> Result<Self, SimError> {
        let spec = Self {
            p_single,
            p_multi,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Same error probability for every gate.
    pub fn uniform(p: f64, seed: u64) -> Result<Self, SimError> {
        Self::new(p, p, seed)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for (name, p) in [("p_single", self.p_single), ("p_multi", self.p_multi)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(SimError::Noise(format!("{name} = {p} is outside [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.p_single == 0.0 && self.p_multi == 0.0
    }
}

/// RNG for trajectory `index` under master `seed`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Copy)]
enum Pauli {
    X,
    Y,
    Z,
}

struct Fault {
    after_op: usize,
    qubit: usize,
    pauli: Pauli,
}

fn draw_faults<R: Rng>(circuit: &Circuit, noise: &NoiseSpec, rng: &mut R) -> Vec<Fault> {
    let mut faults = Vec::new();
    for (i, op) in circuit.ops().iter().enumerate() {
        let p = if op.is_multi_qubit() {
            noise.p_multi
        } else {
            noise.p_single
        };
        if p == 0.0 {
            continue;
        }
        for qubit in op.qubits() {
            if rng.gen::<f64>() < p {
                let pauli = match rng.gen_range(0..3) {
                    0 => Pauli::X,
                    1 => Pauli::Y,
                    _ => Pauli::Z,
                };
                faults.push(Fault {
                    after_op: i,
                    qubit,
                    pauli,
                });
            }
        }
    }
    faults
}

fn run_with_faults(circuit: &Circuit, faults: &[Fault]) -> Result<Statevector, SimError> {
    let mut state = Statevector::zero(circuit.width())?;
    let mut pending = faults.iter().peekable();
    for (i, op) in circuit.ops().iter().enumerate() {
        state.apply(op);
        while let Some(f) = pending.next_if(|f| f.after_op == i) {
            match f.pauli {
                Pauli::X => state.pauli_x(f.qubit),
                Pauli::Y => state.pauli_y(f.qubit),
                Pauli::Z => state.pauli_z(f.qubit),
            }
        }
    }
    Ok(state)
}

/// Shared per-circuit data: the fault-free output distribution.
struct Trajectories<'a> {
    circuit: &'a Circuit,
    noise: NoiseSpec,
    clean: Distribution,
}

impl<'a> Trajectories<'a> {
    fn new(circuit: &'a Circuit, noise: &NoiseSpec) -> Result<Self, SimError> {
        noise.validate()?;
        let clean = window_distribution(&run_with_faults(circuit, &[])?, circuit.measure_window())?;
        Ok(Self {
            circuit,
            noise: *noise,
            clean,
        })
    }

    /// Window distribution of one trajectory; `None` when no fault fired.
    fn distribution<R: Rng>(&self, rng: &mut R) -> Result<Option<Distribution>, SimError> {
        let faults = draw_faults(self.circuit, &self.noise, rng);
        if faults.is_empty() {
            return Ok(None);
        }
        let state = run_with_faults(self.circuit, &faults)?;
        Ok(Some(window_distribution(&state, self.circuit.measure_window())?))
    }
}

fn chunks(total: u64) -> impl ParallelIterator<Item = std::ops::Range<u64>> {
    (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(move |c| c * CHUNK..((c + 1) * CHUNK).min(total))
}

/// Noisy shots over the circuit's measure window, one trajectory per shot.
pub fn run_noisy(circuit: &Circuit, noise: &NoiseSpec, shots: u64) -> Result<Counts, SimError> {
    let outcomes = noisy_shots(circuit, noise, shots)?;
    let mut map = BTreeMap::new();
    for o in outcomes {
        *map.entry(o).or_insert(0u64) += 1;
    }
    Counts::from_map(circuit.measure_window().length, map)
}

/// Window outcome of each noisy shot, in shot order.
pub fn noisy_shots(circuit: &Circuit, noise: &NoiseSpec, shots: u64) -> Result<Vec<u64>, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let t = Trajectories::new(circuit, noise)?;
    let clean_cdf = Cdf::new(&t.clean);
    let parts: Vec<Vec<u64>> = chunks(shots)
        .map(|range| {
            range
                .map(|i| {
                    let mut rng = trajectory_rng(noise.seed, i);
                    Ok(match t.distribution(&mut rng)? {
                        None => clean_cdf.draw(&mut rng),
                        Some(d) => Cdf::new(&d).draw(&mut rng),
                    })
                })
                .collect::<Result<Vec<_>, SimError>>()
        })
        .collect::<Result<_, SimError>>()?;
    Ok(parts.concat())
}

/// Mean window distribution over `trajectories` noisy runs. This estimates
/// the noisy output distribution with less variance than sampled counts.
pub fn noisy_distribution(
    circuit: &Circuit,
    noise: &NoiseSpec,
    trajectories: u64,
) -> Result<Distribution, SimError> {
    if trajectories == 0 {
        return Err(SimError::NoShots);
    }
    let t = Trajectories::new(circuit, noise)?;
    let len = t.clean.probabilities().len();
    let parts: Vec<(u64, Vec<f64>)> = chunks(trajectories)
        .map(|range| {
            let mut clean_hits = 0u64;
            let mut acc = vec![0.0; len];
            for i in range {
                let mut rng = trajectory_rng(noise.seed, i);
                match t.distribution(&mut rng)? {
                    None => clean_hits += 1,
                    Some(d) => acc.iter_mut().zip(d.probabilities()).for_each(|(a, p)| *a += p),
                }
            }
            Ok((clean_hits, acc))
        })
        .collect::<Result<_, SimError>>()?;
    let mut clean_hits = 0u64;
    let mut acc = vec![0.0; len];
    for (hits, part) in parts {
        clean_hits += hits;
        acc.iter_mut().zip(&part).for_each(|(a, p)| *a += p);
    }
    let n = trajectories as f64;
    let probs = acc
        .iter()
        .zip(t.clean.probabilities())
        .map(|(a, c)| (a + clean_hits as f64 * c) / n)
        .collect();
    Distribution::new(probs)
}
