//! Gate-level circuit representation and the search-circuit constructors.
//!
//! Qubit 0 is the least significant bit of a basis-state index, and the
//! rightmost character of every bitstring. A basis state `|x⟩` of a `w`-qubit
//! register therefore has qubit `q` set iff `(x >> q) & 1 == 1`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{format_bits, low_mask, BitString, BitStringError};

/// Widest register any circuit may declare (2^28 amplitudes at double
/// precision is 4 GiB).
pub const MAX_WIDTH: usize = 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IrError {
    #[error("invalid search problem: {0}")]
    InvalidProblem(String),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("capacity exceeded: {required} qubits required, {available} available")]
    Capacity { required: usize, available: usize },
    #[error("guess has {got} bits, expected {expected}")]
    GuessLength { expected: usize, got: usize },
    #[error(transparent)]
    Bits(#[from] BitStringError),
}

/// A contiguous run of qubits `[least, least + length)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub least: usize,
    pub length: usize,
}

impl Window {
    pub const fn new(least: usize, length: usize) -> Self {
        Self { least, length }
    }

    pub fn full(width: usize) -> Self {
        Self::new(0, width)
    }

    pub fn end(&self) -> usize {
        self.least + self.length
    }

    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.least..self.end()
    }

    pub fn fits(&self, width: usize) -> bool {
        self.length >= 1 && self.end() <= width
    }

    /// Extracts the window bits of a register index.
    pub fn extract(&self, index: u64) -> u64 {
        (index >> self.least) & low_mask(self.length)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Z,
    #[serde(rename = "MCZ")]
    Mcz,
    PhaseOracle,
}

/// One gate of the search circuits.
///
/// Every variant is an involution, so a gate is its own inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    /// Sign flip on the states where every control and the target are 1.
    Mcz { controls: Vec<usize>, target: usize },
    /// Sign flip on the states whose bits on `qubits` spell one of `marked`.
    /// `qubits[i]` carries bit `i` of the local value.
    PhaseOracle { qubits: Vec<usize>, marked: Vec<u64> },
}

impl Gate {
    /// Multi-controlled Z over all of `qubits` (at least two).
    pub fn mcz(qubits: &[usize]) -> Result<Self, IrError> {
        match qubits.split_last() {
            Some((&target, controls)) if !controls.is_empty() => Ok(Gate::Mcz {
                controls: controls.to_vec(),
                target,
            }),
            _ => Err(IrError::InvalidGate(
                "MCZ needs at least one control".into(),
            )),
        }
    }

    pub fn phase_oracle(qubits: Vec<usize>, marked: impl IntoIterator<Item = u64>) -> Result<Self, IrError> {
        let marked: BTreeSet<u64> = marked.into_iter().collect();
        let gate = Gate::PhaseOracle {
            qubits,
            marked: marked.into_iter().collect(),
        };
        gate.check_shape()?;
        Ok(gate)
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::H(_) => GateKind::H,
            Gate::X(_) => GateKind::X,
            Gate::Z(_) => GateKind::Z,
            Gate::Mcz { .. } => GateKind::Mcz,
            Gate::PhaseOracle { .. } => GateKind::PhaseOracle,
        }
    }

    /// Every qubit the gate acts on.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) => vec![*q],
            Gate::Mcz { controls, target } => {
                let mut qs = controls.clone();
                qs.push(*target);
                qs
            }
            Gate::PhaseOracle { qubits, .. } => qubits.clone(),
        }
    }

    pub fn is_multi_qubit(&self) -> bool {
        match self {
            Gate::H(_) | Gate::X(_) | Gate::Z(_) => false,
            Gate::Mcz { .. } => true,
            Gate::PhaseOracle { qubits, .. } => qubits.len() > 1,
        }
    }

    pub fn inverse(&self) -> Gate {
        self.clone()
    }

    /// The same gate moved up by `offset` qubits.
    pub fn shifted(&self, offset: usize) -> Gate {
        match self {
            Gate::H(q) => Gate::H(q + offset),
            Gate::X(q) => Gate::X(q + offset),
            Gate::Z(q) => Gate::Z(q + offset),
            Gate::Mcz { controls, target } => Gate::Mcz {
                controls: controls.iter().map(|c| c + offset).collect(),
                target: target + offset,
            },
            Gate::PhaseOracle { qubits, marked } => Gate::PhaseOracle {
                qubits: qubits.iter().map(|q| q + offset).collect(),
                marked: marked.clone(),
            },
        }
    }

    fn check_shape(&self) -> Result<(), IrError> {
        let qs = self.qubits();
        let distinct: BTreeSet<_> = qs.iter().collect();
        if distinct.len() != qs.len() {
            return Err(IrError::InvalidGate(format!(
                "{:?} repeats a qubit in {qs:?}",
                self.kind()
            )));
        }
        match self {
            Gate::Mcz { controls, .. } if controls.is_empty() => Err(IrError::InvalidGate(
                "MCZ needs at least one control".into(),
            )),
            Gate::PhaseOracle { qubits, marked } => {
                if qubits.is_empty() || qubits.len() > 63 {
                    return Err(IrError::InvalidGate(format!(
                        "phase oracle must span 1..=63 qubits, got {}",
                        qubits.len()
                    )));
                }
                if let Some(bad) = marked.iter().find(|&&m| m >> qubits.len() != 0) {
                    return Err(IrError::InvalidGate(format!(
                        "oracle target {bad} does not fit in {} bits",
                        qubits.len()
                    )));
                }
                if marked.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(IrError::InvalidGate(
                        "oracle targets must be sorted and distinct".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn validate(&self, width: usize) -> Result<(), IrError> {
        self.check_shape()?;
        if let Some(q) = self.qubits().into_iter().find(|&q| q >= width) {
            return Err(IrError::InvalidGate(format!(
                "{:?} touches qubit {q} outside a {width}-qubit register",
                self.kind()
            )));
        }
        Ok(())
    }
}

/// An ordered gate list over a fixed register with a declared measurement
/// window. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CircuitDoc", into = "CircuitDoc")]
pub struct Circuit {
    width: usize,
    ops: Vec<Gate>,
    measure_window: Window,
}

impl Circuit {
    pub fn new(width: usize, ops: Vec<Gate>, measure_window: Window) -> Result<Self, IrError> {
        if width == 0 {
            return Err(IrError::InvalidCircuit("width must be at least 1".into()));
        }
        if width > MAX_WIDTH {
            return Err(IrError::Capacity {
                required: width,
                available: MAX_WIDTH,
            });
        }
        if !measure_window.fits(width) {
            return Err(IrError::InvalidCircuit(format!(
                "measure window {measure_window:?} outside [0, {width})"
            )));
        }
        for op in &ops {
            op.validate(width)?;
        }
        Ok(Self {
            width,
            ops,
            measure_window,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn ops(&self) -> &[Gate] {
        &self.ops
    }

    pub fn measure_window(&self) -> Window {
        self.measure_window
    }

    /// The same gates measured on a different window.
    pub fn with_window(&self, measure_window: Window) -> Result<Circuit, IrError> {
        Circuit::new(self.width, self.ops.clone(), measure_window)
    }

    /// The circuit that undoes this one.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            width: self.width,
            ops: self.ops.iter().rev().map(Gate::inverse).collect(),
            measure_window: self.measure_window,
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

#[derive(Serialize, Deserialize)]
struct GateDoc {
    kind: GateKind,
    targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    controls: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    oracle_targets: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct CircuitDoc {
    width: usize,
    ops: Vec<GateDoc>,
    measure_window: Window,
}

impl From<&Gate> for GateDoc {
    fn from(g: &Gate) -> Self {
        let kind = g.kind();
        match g {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) => GateDoc {
                kind,
                targets: vec![*q],
                controls: None,
                oracle_targets: None,
            },
            Gate::Mcz { controls, target } => GateDoc {
                kind,
                targets: vec![*target],
                controls: Some(controls.clone()),
                oracle_targets: None,
            },
            Gate::PhaseOracle { qubits, marked } => GateDoc {
                kind,
                targets: qubits.clone(),
                controls: None,
                oracle_targets: Some(
                    marked.iter().map(|&m| format_bits(m, qubits.len())).collect(),
                ),
            },
        }
    }
}

impl TryFrom<GateDoc> for Gate {
    type Error = IrError;

    fn try_from(doc: GateDoc) -> Result<Self, IrError> {
        let single = |doc: &GateDoc| -> Result<usize, IrError> {
            match (doc.targets.as_slice(), &doc.controls, &doc.oracle_targets) {
                ([q], None, None) => Ok(*q),
                _ => Err(IrError::InvalidGate(format!(
                    "{:?} takes exactly one target and nothing else",
                    doc.kind
                ))),
            }
        };
        match doc.kind {
            GateKind::H => Ok(Gate::H(single(&doc)?)),
            GateKind::X => Ok(Gate::X(single(&doc)?)),
            GateKind::Z => Ok(Gate::Z(single(&doc)?)),
            GateKind::Mcz => match (doc.targets.as_slice(), doc.controls) {
                ([t], Some(controls)) if !controls.is_empty() => Ok(Gate::Mcz {
                    controls,
                    target: *t,
                }),
                _ => Err(IrError::InvalidGate(
                    "MCZ takes one target and at least one control".into(),
                )),
            },
            GateKind::PhaseOracle => {
                let strings = doc.oracle_targets.unwrap_or_default();
                let mut marked = Vec::with_capacity(strings.len());
                for s in &strings {
                    let b: BitString = s.parse()?;
                    if b.len() != doc.targets.len() {
                        return Err(IrError::InvalidGate(format!(
                            "oracle target {s:?} has {} bits but the oracle spans {} qubits",
                            b.len(),
                            doc.targets.len()
                        )));
                    }
                    marked.push(b.value());
                }
                Gate::phase_oracle(doc.targets, marked)
            }
        }
    }
}

impl From<Circuit> for CircuitDoc {
    fn from(c: Circuit) -> Self {
        CircuitDoc {
            width: c.width,
            ops: c.ops.iter().map(GateDoc::from).collect(),
            measure_window: c.measure_window,
        }
    }
}

impl TryFrom<CircuitDoc> for Circuit {
    type Error = IrError;

    fn try_from(doc: CircuitDoc) -> Result<Self, IrError> {
        let ops = doc
            .ops
            .into_iter()
            .map(Gate::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        Circuit::new(doc.width, ops, doc.measure_window)
    }
}

/// An unstructured search over `n`-bit strings with a nonempty target set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchProblem {
    n: usize,
    targets: Vec<u64>,
}

impl SearchProblem {
    pub fn new(n: usize, targets: impl IntoIterator<Item = BitString>) -> Result<Self, IrError> {
        if n == 0 || n > 63 {
            return Err(IrError::InvalidProblem(format!(
                "search width must be in 1..=63, got {n}"
            )));
        }
        let mut values = BTreeSet::new();
        for t in targets {
            if t.len() != n {
                return Err(IrError::InvalidProblem(format!(
                    "target {t} has {} bits, expected {n}",
                    t.len()
                )));
            }
            if !values.insert(t.value()) {
                return Err(IrError::InvalidProblem(format!("target {t} repeated")));
            }
        }
        if values.is_empty() {
            return Err(IrError::InvalidProblem("target set is empty".into()));
        }
        if values.len() as u128 >= 1u128 << n {
            return Err(IrError::InvalidProblem(format!(
                "{} targets leave nothing unmarked in a {n}-bit space",
                values.len()
            )));
        }
        Ok(Self {
            n,
            targets: values.into_iter().collect(),
        })
    }

    /// Parses MSB-left target strings; `n` is taken from their length.
    pub fn from_strs(targets: &[&str]) -> Result<Self, IrError> {
        let parsed = targets
            .iter()
            .map(|s| s.parse::<BitString>())
            .collect::<Result<Vec<_>, _>>()?;
        let n = parsed.first().map(BitString::len).unwrap_or(0);
        if n == 0 {
            return Err(IrError::InvalidProblem("target set is empty".into()));
        }
        Self::new(n, parsed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Target values, ascending.
    pub fn targets(&self) -> &[u64] {
        &self.targets
    }

    pub fn target_count(&self) -> usize {
        self.targets.len()
    }

    pub fn is_target(&self, x: u64) -> bool {
        self.targets.binary_search(&x).is_ok()
    }

    /// For a `b`-bit guess of the low bits, the values of the remaining
    /// `n - b` high bits of every target in that block.
    pub fn block_outcomes(&self, b: usize, guess: u64) -> Vec<u64> {
        let mask = low_mask(b);
        self.targets
            .iter()
            .filter(|&&t| t & mask == guess)
            .map(|&t| t >> b)
            .collect()
    }
}

/// Sign-flip oracle over qubits `0..n`.
pub fn build_oracle(problem: &SearchProblem) -> Gate {
    Gate::PhaseOracle {
        qubits: (0..problem.n()).collect(),
        marked: problem.targets().to_vec(),
    }
}

/// Reflection about the uniform superposition of the qubits in `span`,
/// identity elsewhere: `H X MCZ X H` on the span.
pub fn build_diffusion(total_width: usize, span: Window) -> Result<Vec<Gate>, IrError> {
    if span.length == 0 {
        return Err(IrError::InvalidCircuit("diffusion span is empty".into()));
    }
    if span.end() > total_width {
        return Err(IrError::InvalidCircuit(format!(
            "diffusion span {span:?} outside a {total_width}-qubit register"
        )));
    }
    let qs: Vec<usize> = span.qubits().collect();
    let mut ops = Vec::with_capacity(4 * qs.len() + 1);
    ops.extend(qs.iter().map(|&q| Gate::H(q)));
    ops.extend(qs.iter().map(|&q| Gate::X(q)));
    if qs.len() == 1 {
        ops.push(Gate::Z(qs[0]));
    } else {
        ops.push(Gate::mcz(&qs)?);
    }
    ops.extend(qs.iter().map(|&q| Gate::X(q)));
    ops.extend(qs.iter().map(|&q| Gate::H(q)));
    Ok(ops)
}

/// Canonical Grover search: `H^n` then `j` rounds of oracle and global
/// diffusion, measuring every qubit.
pub fn build_grover_circuit(problem: &SearchProblem, j: usize) -> Result<Circuit, IrError> {
    let n = problem.n();
    check_width(n)?;
    let oracle = build_oracle(problem);
    let diffusion = build_diffusion(n, Window::full(n))?;
    let mut ops: Vec<Gate> = (0..n).map(Gate::H).collect();
    for _ in 0..j {
        ops.push(oracle.clone());
        ops.extend(diffusion.iter().cloned());
    }
    Circuit::new(n, ops, Window::full(n))
}

/// Partial search with the `b` low qubits preset to `guess` and local
/// diffusion on the `m = n - b` high qubits, which form the measure window.
pub fn build_partial_circuit(
    problem: &SearchProblem,
    b: usize,
    guess: BitString,
    j: usize,
) -> Result<Circuit, IrError> {
    let n = problem.n();
    check_guess_bits(n, b)?;
    if guess.len() != b {
        return Err(IrError::GuessLength {
            expected: b,
            got: guess.len(),
        });
    }
    check_width(n)?;
    let window = Window::new(b, n - b);
    let oracle = build_oracle(problem);
    let diffusion = build_diffusion(n, window)?;
    let mut ops: Vec<Gate> = (0..b).filter(|&q| guess.bit(q)).map(Gate::X).collect();
    ops.extend(window.qubits().map(Gate::H));
    for _ in 0..j {
        ops.push(oracle.clone());
        ops.extend(diffusion.iter().cloned());
    }
    Circuit::new(n, ops, window)
}

fn check_guess_bits(n: usize, b: usize) -> Result<(), IrError> {
    if b == 0 || b >= n {
        return Err(IrError::InvalidProblem(format!(
            "guess bits must satisfy 1 <= b < n = {n}, got b = {b}"
        )));
    }
    Ok(())
}

fn check_width(width: usize) -> Result<(), IrError> {
    if width > MAX_WIDTH {
        return Err(IrError::Capacity {
            required: width,
            available: MAX_WIDTH,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QmpBlock {
    pub guess: BitString,
    /// First register qubit of the block.
    pub offset: usize,
}

/// How `B = 2^b` partial-search circuits are laid side by side on one
/// register. Block `i` carries guess `i` and starts at qubit `i * n`; its
/// guess occupies the block's `b` low qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QmpPlan {
    n: usize,
    b: usize,
    j: usize,
    blocks: Vec<QmpBlock>,
}

impl QmpPlan {
    /// Builds the recipe without any register width limit; only
    /// [`compose_qmp`] materialises it into a single circuit.
    pub fn new(n: usize, b: usize, j: usize) -> Result<Self, IrError> {
        check_guess_bits(n, b)?;
        if b > 20 {
            return Err(IrError::InvalidProblem(format!("{b} guess bits is too many blocks")));
        }
        let blocks = (0..1u64 << b)
            .map(|g| {
                Ok(QmpBlock {
                    guess: BitString::new(g, b)?,
                    offset: g as usize * n,
                })
            })
            .collect::<Result<Vec<_>, IrError>>()?;
        Ok(Self { n, b, j, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn m(&self) -> usize {
        self.n - self.b
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[QmpBlock] {
        &self.blocks
    }

    pub fn width(&self) -> usize {
        self.n * self.blocks.len()
    }

    /// Register window measured for block `i`.
    pub fn window(&self, i: usize) -> Window {
        Window::new(self.blocks[i].offset + self.b, self.m())
    }

    /// Index of the block whose guess matches the low bits of `target`.
    pub fn block_of(&self, target: u64) -> usize {
        (target & low_mask(self.b)) as usize
    }

    /// Block `i` as a stand-alone `n`-qubit partial-search circuit.
    pub fn block_circuit(&self, problem: &SearchProblem, i: usize) -> Result<Circuit, IrError> {
        if problem.n() != self.n {
            return Err(IrError::InvalidProblem(format!(
                "plan is for {}-bit problems, got {}",
                self.n,
                problem.n()
            )));
        }
        build_partial_circuit(problem, self.b, self.blocks[i].guess, self.j)
    }
}

/// Places every partial-search guess in parallel on one wide register.
pub fn compose_qmp(problem: &SearchProblem, b: usize, j: usize) -> Result<(Circuit, QmpPlan), IrError> {
    let plan = QmpPlan::new(problem.n(), b, j)?;
    check_width(plan.width())?;
    let mut ops = Vec::new();
    for (i, block) in plan.blocks().iter().enumerate() {
        let sub = plan.block_circuit(problem, i)?;
        ops.extend(sub.ops().iter().map(|g| g.shifted(block.offset)));
    }
    let width = plan.width();
    let circuit = Circuit::new(width, ops, Window::full(width))?;
    Ok((circuit, plan))
}
