//! Mean success under stochastic Pauli noise for the canonical five-qubit
//! search and the target blocks of the two- and three-guess variants.

use qmpgrover::ir::{build_grover_circuit, QmpPlan, SearchProblem};
use qmpgrover::sim::{measure_distribution, noisy_distribution, NoiseSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = SearchProblem::from_strs(&["10110"])?;
    let target = problem.targets()[0];
    let trajectories = 20_000;

    let mut cases = vec![("D5M5".to_string(), build_grover_circuit(&problem, 1)?, vec![target])];
    for b in [2, 3] {
        let plan = QmpPlan::new(5, b, 1)?;
        let block = plan.block_of(target);
        let name = format!("G{b}D{0}M{0} block", 5 - b);
        cases.push((name, plan.block_circuit(&problem, block)?, problem.block_outcomes(b, block as u64)));
    }
    for p in [0.001, 0.005, 0.02] {
        let noise = NoiseSpec::uniform(p, 1)?;
        for (name, circuit, hits) in &cases {
            let clean = measure_distribution(circuit)?.mass(hits);
            let noisy = noisy_distribution(circuit, &noise, trajectories)?.mass(hits);
            println!("p = {p:<5} {name:<14} noiseless {clean:.4}  noisy {noisy:.4}");
        }
    }
    Ok(())
}
