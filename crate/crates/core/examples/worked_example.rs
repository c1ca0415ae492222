//! Four-qubit search for `1011`: one Grover iteration against the four
//! parallel two-bit-guess partial searches.

use qmpgrover::ir::{build_grover_circuit, compose_qmp, SearchProblem};
use qmpgrover::sim::{measure_distribution, run_exact, window_distribution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = SearchProblem::from_strs(&["1011"])?;

    let grover = build_grover_circuit(&problem, 1)?;
    let dist = measure_distribution(&grover)?;
    println!("grover, j = 1: P(1011) = {:.8}", dist.probability(0b1011));

    let (circuit, plan) = compose_qmp(&problem, 2, 1)?;
    let state = run_exact(&circuit)?;
    for (i, block) in plan.blocks().iter().enumerate() {
        let window = window_distribution(&state, plan.window(i))?;
        let probs: Vec<String> = window.probabilities().iter().map(|p| format!("{p:.4}")).collect();
        println!("block guess {}: high-bit distribution [{}]", block.guess, probs.join(", "));
    }
    let hit = plan.block_of(0b1011);
    println!("block {} finds 10 with probability {:.8}", plan.blocks()[hit].guess, {
        window_distribution(&state, plan.window(hit))?.probability(0b10)
    });
    Ok(())
}
