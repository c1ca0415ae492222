//! Dense statevector simulation.
//!
//! Amplitudes are stored in basis-index order with qubit `q` as bit `q` of
//! the index. Diagonal gates (Z, MCZ, phase oracle) are applied as in-place
//! sign flips; H and X as paired updates over index strides.

pub(crate) mod counts;
mod noise;

use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;

use num_complex::Complex64;
use thiserror::Error;

use crate::bits::{format_bits, BitStringError};
use crate::ir::{Circuit, Gate, IrError, Window, MAX_WIDTH};

pub use counts::{marginalize_counts, sample, Counts};
pub use noise::{noisy_distribution, noisy_shots, run_noisy, trajectory_rng, NoiseSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("capacity exceeded: {required} qubits required, {available} available")]
    Capacity { required: usize, available: usize },
    #[error("window {window:?} does not fit a {width}-bit register")]
    Window { window: Window, width: usize },
    #[error("shot count must be at least 1")]
    NoShots,
    #[error("bitstring key has {got} bits, expected {expected}")]
    KeyLength { expected: usize, got: usize },
    #[error("invalid noise spec: {0}")]
    Noise(String),
    #[error("invalid distribution: {0}")]
    Distribution(String),
    #[error("invalid state: {0}")]
    State(String),
    #[error(transparent)]
    Ir(#[from] IrError),
    #[error(transparent)]
    Bits(#[from] BitStringError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    width: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩` on `width` qubits.
    pub fn zero(width: usize) -> Result<Self, SimError> {
        if width == 0 || width > MAX_WIDTH {
            return Err(SimError::Capacity {
                required: width,
                available: MAX_WIDTH,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << width];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { width, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two and the norm 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(SimError::State(format!("{len} amplitudes is not 2^w for w >= 1")));
        }
        let width = len.trailing_zeros() as usize;
        if width > MAX_WIDTH {
            return Err(SimError::Capacity {
                required: width,
                available: MAX_WIDTH,
            });
        }
        let s = Self { width, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(SimError::State(format!("norm {norm} is not 1")));
        }
        Ok(s)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amps[index as usize]
    }

    pub fn probability(&self, index: u64) -> f64 {
        self.amps[index as usize].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies one gate, rejecting qubits outside the register.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), SimError> {
        if let Some(q) = gate.qubits().into_iter().find(|&q| q >= self.width) {
            return Err(SimError::State(format!(
                "gate touches qubit {q} of a {}-qubit state",
                self.width
            )));
        }
        self.apply(gate);
        Ok(())
    }

    pub(crate) fn apply(&mut self, gate: &Gate) {
        match gate {
            Gate::H(q) => self.hadamard(*q),
            Gate::X(q) => self.pauli_x(*q),
            Gate::Z(q) => self.flip_where(1 << q),
            Gate::Mcz { controls, target } => {
                let mask = controls.iter().fold(1usize << target, |m, c| m | 1 << c);
                self.flip_where(mask);
            }
            Gate::PhaseOracle { qubits, marked } => self.phase_oracle(qubits, marked),
        }
    }

    fn hadamard(&mut self, q: usize) {
        let stride = 1usize << q;
        for chunk in self.amps.chunks_exact_mut(stride << 1) {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = (x + y) * FRAC_1_SQRT_2;
                *b = (x - y) * FRAC_1_SQRT_2;
            }
        }
    }

    pub(crate) fn pauli_x(&mut self, q: usize) {
        let stride = 1usize << q;
        for chunk in self.amps.chunks_exact_mut(stride << 1) {
            let (lo, hi) = chunk.split_at_mut(stride);
            lo.swap_with_slice(hi);
        }
    }

    pub(crate) fn pauli_y(&mut self, q: usize) {
        let stride = 1usize << q;
        let i = Complex64::i();
        for chunk in self.amps.chunks_exact_mut(stride << 1) {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = -i * y;
                *b = i * x;
            }
        }
    }

    pub(crate) fn pauli_z(&mut self, q: usize) {
        self.flip_where(1 << q);
    }

    /// Negates every amplitude whose index has all of `mask` set.
    fn flip_where(&mut self, mask: usize) {
        for (idx, a) in self.amps.iter_mut().enumerate() {
            if idx & mask == mask {
                *a = -*a;
            }
        }
    }

    fn phase_oracle(&mut self, qubits: &[usize], marked: &[u64]) {
        if marked.is_empty() {
            return;
        }
        let k = qubits.len();
        let contiguous = qubits.windows(2).all(|w| w[1] == w[0] + 1);
        let local = |idx: usize| -> usize {
            if contiguous {
                (idx >> qubits[0]) & ((1 << k) - 1)
            } else {
                qubits
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (bit, &q)| acc | ((idx >> q) & 1) << bit)
            }
        };
        if k <= 20 {
            let mut table = vec![false; 1 << k];
            for &m in marked {
                table[m as usize] = true;
            }
            for (idx, a) in self.amps.iter_mut().enumerate() {
                if table[local(idx)] {
                    *a = -*a;
                }
            }
        } else {
            for (idx, a) in self.amps.iter_mut().enumerate() {
                if marked.binary_search(&(local(idx) as u64)).is_ok() {
                    *a = -*a;
                }
            }
        }
    }
}

/// Runs `circuit` from `|0…0⟩` and returns the final state.
pub fn run_exact(circuit: &Circuit) -> Result<Statevector, SimError> {
    let mut state = Statevector::zero(circuit.width())?;
    for op in circuit.ops() {
        state.apply(op);
    }
    Ok(state)
}

/// Exact outcome probabilities over `2^width` outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    width: usize,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self, SimError> {
        let len = probs.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(SimError::Distribution(format!(
                "{len} outcomes is not 2^k for k >= 1"
            )));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(SimError::Distribution(format!("bad probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(SimError::Distribution(format!("probabilities sum to {total}")));
        }
        Ok(Self {
            width: len.trailing_zeros() as usize,
            probs,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn probability(&self, outcome: u64) -> f64 {
        self.probs[outcome as usize]
    }

    /// Total probability of a set of outcomes.
    pub fn mass(&self, outcomes: &[u64]) -> f64 {
        outcomes.iter().fold(0.0, |acc, &o| acc + self.probability(o))
    }

    /// `outcome,probability` rows; outcomes MSB-left. Rows below `floor` are
    /// skipped, pass 0.0 to emit every outcome.
    pub fn write_csv<W: Write>(&self, mut w: W, floor: f64) -> std::io::Result<()> {
        writeln!(w, "outcome,probability")?;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > floor || floor <= 0.0 {
                writeln!(w, "{},{}", format_bits(i as u64, self.width), p)?;
            }
        }
        Ok(())
    }
}

/// Marginal distribution of the bits in `window`.
pub fn window_distribution(state: &Statevector, window: Window) -> Result<Distribution, SimError> {
    if !window.fits(state.width()) {
        return Err(SimError::Window {
            window,
            width: state.width(),
        });
    }
    let mut probs = vec![0.0; 1 << window.length];
    for (idx, a) in state.amplitudes().iter().enumerate() {
        probs[window.extract(idx as u64) as usize] += a.norm_sqr();
    }
    Ok(Distribution {
        width: window.length,
        probs,
    })
}

/// Exact run of `circuit` marginalised onto its measure window.
pub fn measure_distribution(circuit: &Circuit) -> Result<Distribution, SimError> {
    let state = run_exact(circuit)?;
    window_distribution(&state, circuit.measure_window())
}
