//! Packs one six-qubit block per guess onto heavy-hex devices with a
//! one-hop idle buffer between blocks.

use qmpgrover::layout::{load_builtin_map, place_blocks, LayoutError};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (map_name, blocks) in [("heavy-hex-65", 4), ("heavy-hex-127", 8), ("heavy-hex-65", 8)] {
        let map = load_builtin_map(map_name)?;
        match place_blocks(&map, blocks, 6, 1) {
            Ok(placement) => {
                placement.verify(&map, 1)?;
                println!("{map_name}, {blocks} blocks: {} buffers", placement.buffers.len());
                for (i, b) in placement.blocks.iter().enumerate() {
                    println!("  block {i}: {b:?}");
                }
            }
            Err(e @ LayoutError::Infeasible { .. }) => println!("{map_name}, {blocks} blocks: {e}"),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}
