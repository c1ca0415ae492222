//! Round-trips a partial-search circuit through its JSON form.

use qmpgrover::ir::{build_partial_circuit, Circuit, SearchProblem};
use qmpgrover::sim::measure_distribution;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = SearchProblem::from_strs(&["1011"])?;
    let circuit = build_partial_circuit(&problem, 2, "11".parse()?, 1)?;
    let json = circuit.to_json()?;
    println!("{json}");

    let back = Circuit::from_json(&json)?;
    assert_eq!(back, circuit);
    let round_trip = back.inverse().inverse();
    println!(
        "window {:?}, P(10) = {:.6}",
        round_trip.measure_window(),
        measure_distribution(&round_trip)?.probability(0b10)
    );
    Ok(())
}
