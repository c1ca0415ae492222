//! Grover search, partial Grover search, and multi-programmed partial
//! search: gate-level construction, exact statevector simulation,
//! closed-form analytics, and placement of parallel blocks on coupling
//! graphs.
//!
//! ```
//! use qmpgrover::ir::{compose_qmp, SearchProblem};
//! use qmpgrover::sim::{run_exact, window_distribution};
//!
//! let problem = SearchProblem::from_strs(&["1011"]).unwrap();
//! let (circuit, plan) = compose_qmp(&problem, 2, 1).unwrap();
//! let state = run_exact(&circuit).unwrap();
//! // block 3 guessed the low bits "11"; its window holds the high bits "10"
//! let block = window_distribution(&state, plan.window(3)).unwrap();
//! assert!((block.probability(0b10) - 1.0).abs() < 1e-9);
//! ```

pub mod analytics;
pub mod bits;
pub mod experiment;
pub mod ir;
pub mod layout;
pub mod sim;

pub use bits::BitString;
