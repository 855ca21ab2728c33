//! Packed bit sequences.
//!
//! `BitString` is the common currency between truth tables, fixed-weight
//! code words, and compressor input/output. Bits are addressed by index,
//! with index 0 first in the ASCII rendering.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitStringError {
    #[error("invalid character {found:?} at position {position}: expected '0' or '1'")]
    InvalidCharacter { position: usize, found: char },
}

/// A sequence of bits packed eight to a byte.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bytes: Vec<u8>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            bytes: Vec::with_capacity(bits.div_ceil(8)),
            len: 0,
        }
    }

    /// All-zero string of the given length.
    pub fn zeros(len: usize) -> Self {
        Self {
            bytes: vec![0u8; len.div_ceil(8)],
            len,
        }
    }

    /// Builds a string by evaluating `f` at each index in order.
    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut bits = Self::with_capacity(len);
        for i in 0..len {
            bits.push(f(i));
        }
        bits
    }

    /// Parses an ASCII string of '0'/'1' characters.
    pub fn from_ascii(s: &str) -> Result<Self, BitStringError> {
        let mut bits = Self::with_capacity(s.len());
        for (position, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                found => return Err(BitStringError::InvalidCharacter { position, found }),
            }
        }
        Ok(bits)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        let slot = self.len / 8;
        if slot == self.bytes.len() {
            self.bytes.push(0);
        }
        if bit {
            self.bytes[slot] |= 1 << (self.len % 8);
        }
        self.len += 1;
    }

    /// Returns the bit at `index`.
    ///
    /// Panics if `index >= len()`.
    pub fn get(&self, index: usize) -> bool {
        assert!(
            index < self.len,
            "bit index {index} out of range for length {}",
            self.len
        );
        (self.bytes[index / 8] >> (index % 8)) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.bytes.iter().map(|b| u64::from(b.count_ones() as u8)).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Appends all bits of `other`.
    pub fn extend_from(&mut self, other: &BitString) {
        for bit in other.iter() {
            self.push(bit);
        }
    }

    /// The string repeated twice (self-concatenation).
    pub fn doubled(&self) -> BitString {
        let mut out = self.clone();
        out.extend_from(self);
        out
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        let mut bits = BitString::new();
        for bit in iter {
            bits.push(bit);
        }
        bits
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 64 {
            write!(f, "BitString({self})")
        } else {
            write!(f, "BitString(len={}, ones={})", self.len, self.count_ones())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_and_get_across_byte_boundaries() {
        let pattern = [true, false, false, true, true, true, false, true, true, false];
        let mut bits = BitString::new();
        for &b in &pattern {
            bits.push(b);
        }
        assert_eq!(bits.len(), pattern.len());
        for (i, &b) in pattern.iter().enumerate() {
            assert_eq!(bits.get(i), b, "bit {i}");
        }
        assert_eq!(bits.count_ones(), 6);
    }

    #[test]
    fn ascii_round_trip() {
        let text = "0110100110010110";
        let bits = BitString::from_ascii(text).unwrap();
        assert_eq!(bits.to_string(), text);
        assert_eq!(bits.len(), 16);
        assert_eq!(bits.count_ones(), 8);
    }

    #[test]
    fn ascii_rejects_other_characters() {
        let err = BitString::from_ascii("01012").unwrap_err();
        assert_eq!(
            err,
            BitStringError::InvalidCharacter {
                position: 4,
                found: '2'
            }
        );
    }

    #[test]
    fn zeros_are_zero() {
        let bits = BitString::zeros(19);
        assert_eq!(bits.len(), 19);
        assert_eq!(bits.count_ones(), 0);
        assert!(bits.iter().all(|b| !b));
    }

    #[test]
    fn doubled_concatenates() {
        let bits = BitString::from_ascii("1101").unwrap();
        assert_eq!(bits.doubled().to_string(), "11011101");
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn get_out_of_range_panics() {
        BitString::zeros(3).get(3);
    }
}
