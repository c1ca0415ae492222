//! Builds the volume table for the five-qubit variants twice: with
//! closed-form success and logical depth, then with the quoted hardware
//! figures.

use qmpgrover::experiment::{cmd_report, write_report_csv, DepthSource, ExperimentConfig, SuccessSource};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let mut config = ExperimentConfig {
        targets: vec!["10110".into()],
        out: dir.path().to_path_buf(),
        ..Default::default()
    };
    let theory = cmd_report(&config)?;
    write_report_csv(&theory.rows, &mut std::io::stdout())?;
    println!();

    config.success = SuccessSource::Quoted;
    config.depth = DepthSource::Quoted;
    let quoted = cmd_report(&config)?;
    write_report_csv(&quoted.rows, &mut std::io::stdout())?;
    Ok(())
}
