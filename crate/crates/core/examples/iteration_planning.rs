//! Oracle calls needed to reach 90% success on a 4096-item space, and the
//! rotation angles that explain the gap.

use qmpgrover::analytics::{min_iterations, p_gsa, p_qmp, rotation_angles, SearchMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_items = 1 << 12;
    let angles = rotation_angles(n_items, 8, 1)?;
    println!("theta = {:.6e}, theta_mp(B = 8) = {:.6e}", angles.theta, angles.theta_mp);

    let gsa = min_iterations(0.9, n_items, 1, 1, SearchMode::Gsa)?;
    println!("grover: j = {gsa}, success {:.4}", p_gsa(n_items, 1, gsa)?);
    for b in 1..=4u32 {
        let blocks = 1u64 << b;
        let j = min_iterations(0.9, n_items, blocks, 1, SearchMode::Qmp)?;
        println!("qmp b = {b}: j = {j}, success {:.4}", p_qmp(n_items, blocks, 1, j)?);
    }
    match min_iterations(0.9, n_items, 8, 1, SearchMode::Partial) {
        Ok(j) => println!("single guess: j = {j}"),
        Err(e) => println!("single guess: {e}"),
    }
    Ok(())
}
