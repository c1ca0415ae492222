use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::bits::BitString;
use crate::ir::SearchProblem;
use crate::sim::NoiseSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuccessSource {
    /// Closed-form probabilities.
    #[default]
    Theory,
    /// Exact statevector simulation.
    Simulated,
    /// Hardware values quoted for the five-qubit study; rows without one
    /// are left empty.
    Quoted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DepthSource {
    /// ASAP depth of the constructed gate list.
    #[default]
    Logical,
    /// Transpiled hardware depths quoted for the five-qubit study.
    Quoted,
}

/// Parameters of one experiment run. Loaded from a JSON or TOML manifest
/// (chosen by file extension) and then overridden by command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Search qubits; taken from the target length when omitted.
    pub n: Option<usize>,
    /// MSB-left target bitstrings.
    pub targets: Vec<String>,
    /// Guessed low bits per partial-search block.
    pub b: Option<usize>,
    /// Guess-bit counts for `sweep`; defaults to `[b]` or `[1, 2, 3]`.
    pub b_values: Option<Vec<u32>>,
    /// Oracle calls per circuit.
    pub j: usize,
    /// Largest iteration count for `sweep`.
    pub j_max: u64,
    pub shots: u64,
    pub seed: u64,
    pub noise: Option<NoiseSpec>,
    /// Built-in coupling map name.
    pub map: Option<String>,
    /// Coupling map JSON file; takes precedence over `map`.
    pub map_file: Option<PathBuf>,
    /// Extra qubits per block on hardware (oracle ancillas).
    pub ancillas: usize,
    /// Minimum idle hops between blocks.
    pub buffer: usize,
    pub success: SuccessSource,
    pub depth: DepthSource,
    /// Also draw the sweep as SVG.
    pub svg: bool,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: None,
            targets: Vec::new(),
            b: None,
            b_values: None,
            j: 1,
            j_max: 64,
            shots: 8192,
            seed: 0,
            noise: None,
            map: None,
            map_file: None,
            ancillas: 1,
            buffer: 1,
            success: SuccessSource::default(),
            depth: DepthSource::default(),
            svg: false,
            out: PathBuf::from("out"),
        }
    }
}

/// Command-line values that replace manifest entries when present.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub targets: Option<Vec<String>>,
    pub b: Option<usize>,
    pub j: Option<usize>,
    pub j_max: Option<u64>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub map: Option<String>,
    pub out: Option<PathBuf>,
    pub success: Option<SuccessSource>,
    pub depth: Option<DepthSource>,
    pub svg: bool,
}

fn invalid(field: &str, message: impl Into<String>) -> ExperimentError {
    ExperimentError::Validation {
        field: field.to_string(),
        message: message.into(),
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let toml = path.extension().is_some_and(|e| e == "toml");
        Self::parse(&text, toml).map_err(|message| ExperimentError::Config {
            path: path.to_path_buf(),
            message,
        })
    }

    /// Parses manifest text; parse errors carry line and column.
    pub fn parse(text: &str, toml: bool) -> Result<Self, String> {
        if toml {
            toml::from_str(text).map_err(|e| e.to_string())
        } else {
            serde_json::from_str(text).map_err(|e| e.to_string())
        }
    }

    pub fn apply(&mut self, o: Overrides) {
        macro_rules! take {
            ($($field:ident),*) => { $( if let Some(v) = o.$field { self.$field = v; } )* };
        }
        take!(targets, j, j_max, shots, seed, out, success, depth);
        if o.n.is_some() {
            self.n = o.n;
        }
        if o.b.is_some() {
            self.b = o.b;
        }
        if o.map.is_some() {
            self.map = o.map;
        }
        self.svg |= o.svg;
    }

    /// Search width from `n` or, failing that, the first target.
    pub fn width(&self) -> Result<usize, ExperimentError> {
        match (self.n, self.targets.first()) {
            (Some(n), _) if n >= 1 => Ok(n),
            (Some(_), _) => Err(invalid("n", "must be at least 1")),
            (None, Some(t)) => Ok(t.trim().len()),
            (None, None) => Err(invalid("n", "missing, and no targets to infer it from")),
        }
    }

    pub fn problem(&self) -> Result<SearchProblem, ExperimentError> {
        let n = self.width()?;
        if self.targets.is_empty() {
            return Err(invalid("targets", "at least one target is required"));
        }
        let mut parsed = Vec::with_capacity(self.targets.len());
        for (i, t) in self.targets.iter().enumerate() {
            let b: BitString = t
                .parse()
                .map_err(|e| invalid(&format!("targets[{i}]"), format!("{e}")))?;
            if b.len() != n {
                return Err(invalid(
                    &format!("targets[{i}]"),
                    format!("{t:?} has {} bits, expected n = {n}", b.len()),
                ));
            }
            parsed.push(b);
        }
        SearchProblem::new(n, parsed).map_err(|e| invalid("targets", e.to_string()))
    }

    /// Guess bits, checked against the search width.
    pub fn guess_bits(&self, n: usize) -> Result<Option<usize>, ExperimentError> {
        match self.b {
            Some(b) if b == 0 || b >= n => Err(invalid("b", format!("need 1 <= b < n = {n}, got {b}"))),
            other => Ok(other),
        }
    }

    pub fn check_shots(&self) -> Result<(), ExperimentError> {
        if self.shots == 0 {
            return Err(invalid("shots", "must be at least 1"));
        }
        Ok(())
    }

    pub fn check_noise(&self) -> Result<(), ExperimentError> {
        if let Some(noise) = &self.noise {
            noise.validate().map_err(|e| invalid("noise", e.to_string()))?;
        }
        Ok(())
    }

    pub fn sweep_b_values(&self) -> Vec<u32> {
        match (&self.b_values, self.b) {
            (Some(v), _) => v.clone(),
            (None, Some(b)) => vec![b as u32],
            (None, None) => vec![1, 2, 3],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_manifest() {
        let mut c = ExperimentConfig::parse(r#"{"targets":["1011"],"b":2,"shots":100}"#, false).unwrap();
        c.apply(Overrides {
            shots: Some(8192),
            b: Some(1),
            ..Default::default()
        });
        assert_eq!(c.shots, 8192);
        assert_eq!(c.b, Some(1));
        assert_eq!(c.j, 1);
        assert_eq!(c.width().unwrap(), 4);
    }

    #[test]
    fn toml_manifest() {
        let c = ExperimentConfig::parse(
            "targets = [\"10110\"]\nj = 2\n[noise]\np_single = 0.001\np_multi = 0.005\n",
            true,
        )
        .unwrap();
        assert_eq!(c.j, 2);
        assert_eq!(c.noise.unwrap().p_multi, 0.005);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = ExperimentConfig::parse("{\n  \"shots\": \"many\"\n}", false).unwrap_err();
        assert!(err.contains("line 2"), "{err}");
        let err = ExperimentConfig::parse("{\"shot\": 3}", false).unwrap_err();
        assert!(err.contains("unknown field"), "{err}");
    }

    #[test]
    fn validation_names_the_field() {
        let c = ExperimentConfig {
            targets: vec!["1011".into(), "101".into()],
            ..Default::default()
        };
        match c.problem() {
            Err(ExperimentError::Validation { field, .. }) => assert_eq!(field, "targets[1]"),
            other => panic!("{other:?}"),
        }
        let c = ExperimentConfig {
            shots: 0,
            ..Default::default()
        };
        assert!(matches!(c.check_shots(), Err(ExperimentError::Validation { .. })));
        let c = ExperimentConfig {
            b: Some(4),
            ..Default::default()
        };
        assert!(c.guess_bits(4).is_err());
    }
}
