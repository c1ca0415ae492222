//! Fixed-width bitstrings.
//!
//! Strings are written MSB-left: the rightmost character is bit 0, which is
//! also qubit 0 of whatever register the string describes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Longest bitstring representable by a [`BitString`].
pub const MAX_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitStringError {
    #[error("empty bitstring")]
    Empty,
    #[error("bitstring {0:?} contains a character other than '0' or '1'")]
    BadChar(String),
    #[error("bitstring of {0} bits exceeds the {MAX_BITS}-bit limit")]
    TooLong(usize),
    #[error("value {value} does not fit in {len} bits")]
    Overflow { value: u64, len: usize },
}

/// A bitstring of known length, stored as an integer with bit `i` equal to
/// character `len - 1 - i` of its textual form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    value: u64,
    len: usize,
}

impl BitString {
    pub fn new(value: u64, len: usize) -> Result<Self, BitStringError> {
        if len == 0 {
            return Err(BitStringError::Empty);
        }
        if len > MAX_BITS {
            return Err(BitStringError::TooLong(len));
        }
        if len < 64 && value >> len != 0 {
            return Err(BitStringError::Overflow { value, len });
        }
        Ok(Self { value, len })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit `i`, counted from the right.
    pub fn bit(&self, i: usize) -> bool {
        (self.value >> i) & 1 == 1
    }

    /// The `count` bits starting at bit `least`, as a new bitstring.
    pub fn slice(&self, least: usize, count: usize) -> Result<Self, BitStringError> {
        let v = (self.value >> least) & low_mask(count);
        Self::new(v, count)
    }
}

/// Mask with the `bits` lowest bits set.
pub(crate) fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Formats `value` as an MSB-left string of exactly `len` characters.
pub fn format_bits(value: u64, len: usize) -> String {
    (0..len)
        .rev()
        .map(|i| if (value >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_bits(self.value, self.len))
    }
}

impl FromStr for BitString {
    type Err = BitStringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(BitStringError::Empty);
        }
        if s.len() > MAX_BITS {
            return Err(BitStringError::TooLong(s.len()));
        }
        let mut value = 0u64;
        for c in s.chars() {
            value <<= 1;
            match c {
                '0' => {}
                '1' => value |= 1,
                _ => return Err(BitStringError::BadChar(s.to_string())),
            }
        }
        Ok(Self { value, len: s.len() })
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rightmost_char_is_bit_zero() {
        let b: BitString = "1011".parse().unwrap();
        assert_eq!(b.value(), 11);
        assert!(b.bit(0) && b.bit(1) && !b.bit(2) && b.bit(3));
        assert_eq!(b.to_string(), "1011");
    }

    #[test]
    fn leading_zeros_survive() {
        let b = BitString::new(1, 5).unwrap();
        assert_eq!(b.to_string(), "00001");
        assert_eq!("00001".parse::<BitString>().unwrap(), b);
    }

    #[test]
    fn slice_takes_low_bits_from_least() {
        let t: BitString = "10110".parse().unwrap();
        assert_eq!(t.slice(0, 2).unwrap().to_string(), "10");
        assert_eq!(t.slice(2, 3).unwrap().to_string(), "101");
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!("".parse::<BitString>(), Err(BitStringError::Empty));
        assert!(matches!("10a1".parse::<BitString>(), Err(BitStringError::BadChar(_))));
        assert!(BitString::new(4, 2).is_err());
    }
}
