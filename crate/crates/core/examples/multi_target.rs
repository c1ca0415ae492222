//! Three marked items out of 32. Canonical search against two guessed low
//! bits, where each block sees only its own share of the targets.

use qmpgrover::analytics::{p_gsa, p_qmp};
use qmpgrover::ir::{build_grover_circuit, QmpPlan, SearchProblem};
use qmpgrover::sim::measure_distribution;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = SearchProblem::from_strs(&["10110", "10001", "11001"])?;
    let gsa = measure_distribution(&build_grover_circuit(&problem, 1)?)?;
    println!(
        "grover, j = 1: success {:.6} (closed form {:.6})",
        gsa.mass(problem.targets()),
        p_gsa(32, 3, 1)?
    );

    let plan = QmpPlan::new(5, 2, 1)?;
    for (i, block) in plan.blocks().iter().enumerate() {
        let solutions = problem.block_outcomes(2, block.guess.value());
        let dist = measure_distribution(&plan.block_circuit(&problem, i)?)?;
        let theory = match solutions.len() {
            0 => None,
            m => Some(p_qmp(32, 4, m as u64, 1)?),
        };
        println!(
            "block {}: {} target(s), simulated {:.6}, closed form {:?}, max outcome probability {:.6}",
            block.guess,
            solutions.len(),
            dist.mass(&solutions),
            theory,
            dist.probabilities().iter().cloned().fold(0.0, f64::max)
        );
    }
    Ok(())
}
