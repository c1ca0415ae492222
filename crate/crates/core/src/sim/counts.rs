use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Distribution, SimError};
use crate::bits::{format_bits, BitString};
use crate::ir::Window;

/// Shot counts keyed by fixed-width outcome. Only nonzero entries are
/// stored; [`Counts::get`] reports absent outcomes as 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    width: usize,
    shots: u64,
    counts: BTreeMap<u64, u64>,
}

impl Counts {
    pub fn from_map(width: usize, counts: BTreeMap<u64, u64>) -> Result<Self, SimError> {
        if width == 0 || width > 63 {
            return Err(SimError::KeyLength { expected: 63, got: width });
        }
        if let Some(&bad) = counts.keys().find(|&&k| k >> width != 0) {
            return Err(SimError::KeyLength {
                expected: width,
                got: 64 - bad.leading_zeros() as usize,
            });
        }
        let counts: BTreeMap<u64, u64> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let shots = counts.values().sum();
        Ok(Self { width, shots, counts })
    }

    /// Builds counts from MSB-left keys, which must all share one length.
    pub fn from_bitstrings<'a, I>(entries: I) -> Result<Self, SimError>
    where
        I: IntoIterator<Item = (&'a str, u64)>,
    {
        let mut width = None;
        let mut map = BTreeMap::new();
        for (key, c) in entries {
            let b: BitString = key.parse()?;
            match width {
                None => width = Some(b.len()),
                Some(w) if w != b.len() => {
                    return Err(SimError::KeyLength {
                        expected: w,
                        got: b.len(),
                    })
                }
                _ => {}
            }
            *map.entry(b.value()).or_insert(0) += c;
        }
        let width = width.ok_or_else(|| SimError::Distribution("no counts".into()))?;
        Self::from_map(width, map)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn get(&self, outcome: u64) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    pub fn get_str(&self, key: &str) -> Result<u64, SimError> {
        let b: BitString = key.parse()?;
        if b.len() != self.width {
            return Err(SimError::KeyLength {
                expected: self.width,
                got: b.len(),
            });
        }
        Ok(self.get(b.value()))
    }

    /// Nonzero entries in ascending outcome order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    /// Fraction of shots landing in `outcomes`.
    pub fn frequency(&self, outcomes: &[u64]) -> f64 {
        let hits: u64 = outcomes.iter().map(|&o| self.get(o)).sum();
        hits as f64 / self.shots as f64
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

#[derive(Serialize, Deserialize)]
struct CountsDoc {
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl Serialize for Counts {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CountsDoc {
            shots: self.shots,
            counts: self
                .counts
                .iter()
                .map(|(&k, &v)| (format_bits(k, self.width), v))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Counts {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let doc = CountsDoc::deserialize(deserializer)?;
        let counts = Counts::from_bitstrings(doc.counts.iter().map(|(k, &v)| (k.as_str(), v)))
            .map_err(D::Error::custom)?;
        if counts.shots != doc.shots {
            return Err(D::Error::custom(format!(
                "counts sum to {} but shots is {}",
                counts.shots, doc.shots
            )));
        }
        Ok(counts)
    }
}

/// Multinomial draw of `shots` outcomes by inverse CDF over `dist`,
/// seeded with ChaCha8 from `seed`.
pub fn sample(dist: &Distribution, shots: u64, seed: u64) -> Result<Counts, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with(dist, shots, &mut rng)
}

pub(crate) fn sample_with<R: Rng>(dist: &Distribution, shots: u64, rng: &mut R) -> Result<Counts, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let cdf = Cdf::new(dist);
    let mut map = BTreeMap::new();
    for _ in 0..shots {
        *map.entry(cdf.draw(rng)).or_insert(0u64) += 1;
    }
    Counts::from_map(dist.width(), map)
}

pub(crate) struct Cdf {
    cumulative: Vec<f64>,
    last_nonzero: u64,
}

impl Cdf {
    pub(crate) fn new(dist: &Distribution) -> Self {
        let mut acc = 0.0;
        let cumulative = dist
            .probabilities()
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        let last_nonzero = dist
            .probabilities()
            .iter()
            .rposition(|&p| p > 0.0)
            .unwrap_or(0) as u64;
        Self {
            cumulative,
            last_nonzero,
        }
    }

    pub(crate) fn draw<R: Rng>(&self, rng: &mut R) -> u64 {
        let total = *self.cumulative.last().unwrap();
        let u = rng.gen::<f64>() * total;
        let idx = self.cumulative.partition_point(|&c| c <= u) as u64;
        idx.min(self.last_nonzero)
    }
}

/// Sums `counts` over every filling of the bits outside
/// `[least, least + n_bits)`, keyed by the window bits.
pub fn marginalize_counts(
    counts: &Counts,
    total_bits: usize,
    least: usize,
    n_bits: usize,
) -> Result<Counts, SimError> {
    if counts.width() != total_bits {
        return Err(SimError::KeyLength {
            expected: total_bits,
            got: counts.width(),
        });
    }
    let window = Window::new(least, n_bits);
    if !window.fits(total_bits) {
        return Err(SimError::Window {
            window,
            width: total_bits,
        });
    }
    let mut map = BTreeMap::new();
    for (k, c) in counts.iter() {
        *map.entry(window.extract(k)).or_insert(0) += c;
    }
    Counts::from_map(n_bits, map)
}
