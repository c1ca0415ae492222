//! Samples a wide register and reads individual qubit windows out of the
//! counts afterwards.

use qmpgrover::ir::{compose_qmp, SearchProblem};
use qmpgrover::sim::{marginalize_counts, measure_distribution, sample};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = SearchProblem::from_strs(&["10110"])?;
    let (circuit, plan) = compose_qmp(&problem, 2, 1)?;
    let counts = sample(&measure_distribution(&circuit)?, 8192, 7)?;
    println!("{} distinct 20-bit outcomes over {} shots", counts.iter().count(), counts.shots());

    for (i, block) in plan.blocks().iter().enumerate() {
        let w = plan.window(i);
        let marginal = marginalize_counts(&counts, circuit.width(), w.least, w.length)?;
        print!("block {} (qubits {}..{}):", block.guess, w.least, w.end());
        for (outcome, c) in marginal.iter() {
            print!(" {}={c}", qmpgrover::bits::format_bits(outcome, w.length));
        }
        println!();
    }
    Ok(())
}
