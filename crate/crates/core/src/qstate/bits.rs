//! Fixed-length bit strings over GF(2).
//!
//! Bits are indexed `0..n` and packed most-significant-first into 64-bit
//! words, so the derived word order agrees with lexicographic order on the
//! bit sequence. The same convention maps a string to a computational basis
//! index: bit 0 is the most significant bit of the index.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::QStateError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitString {
    pub fn zeros(len: usize) -> Result<Self, QStateError> {
        if len == 0 {
            return Err(QStateError::EmptyBitString);
        }
        Ok(Self {
            len,
            words: vec![0; word_count(len)],
        })
    }

    pub fn ones(len: usize) -> Result<Self, QStateError> {
        let mut s = Self::zeros(len)?;
        for i in 0..len {
            s.set(i, true);
        }
        Ok(s)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self, QStateError> {
        let mut s = Self::zeros(bits.len())?;
        for (i, &b) in bits.iter().enumerate() {
            s.set(i, b);
        }
        Ok(s)
    }

    /// Interprets the low `len` bits of `value` as a basis index (bit 0 is
    /// the most significant).
    pub fn from_index(value: u64, len: usize) -> Result<Self, QStateError> {
        if len > 64 || (len < 64 && value >> len != 0) {
            return Err(QStateError::IndexOutOfRange { value, len });
        }
        let mut s = Self::zeros(len)?;
        for i in 0..len {
            s.set(i, (value >> (len - 1 - i)) & 1 == 1);
        }
        Ok(s)
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Result<Self, QStateError> {
        let mut s = Self::zeros(len)?;
        for w in s.words.iter_mut() {
            *w = rng.random();
        }
        s.clear_padding();
        Ok(s)
    }

    /// Builds a string from big-endian packed bytes; trailing pad bits must be zero.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Result<Self, QStateError> {
        if bytes.len() != len.div_ceil(8) {
            return Err(QStateError::ByteLength {
                expected: len.div_ceil(8),
                got: bytes.len(),
            });
        }
        let mut s = Self::zeros(len)?;
        for i in 0..len {
            s.set(i, bytes[i / 8] >> (7 - i % 8) & 1 == 1);
        }
        let pad = bytes.len() * 8 - len;
        if pad > 0 && bytes[bytes.len() - 1] & ((1u8 << pad) - 1) != 0 {
            return Err(QStateError::NonZeroPadding);
        }
        Ok(s)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for i in 0..self.len {
            if self.bit(i) {
                out[i / 8] |= 1 << (7 - i % 8);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false: zero-length strings cannot be constructed.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bit(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / 64] >> (63 - i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (63 - i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let b = self.bit(i);
        self.set(i, !b);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Position of the first set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.leading_zeros() as usize)
    }

    pub fn xor(&self, other: &Self) -> Result<Self, QStateError> {
        self.check_len(other)?;
        Ok(Self {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Self) -> Result<bool, QStateError> {
        self.check_len(other)?;
        Ok(self.dot_unchecked(other))
    }

    pub(crate) fn dot_unchecked(&self, other: &Self) -> bool {
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    /// Basis index of this string; only defined for `len <= 64`.
    pub fn to_index(&self) -> Option<u64> {
        if self.len > 64 {
            return None;
        }
        Some(self.words[0] >> (64 - self.len))
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.bit(i)).collect()
    }

    /// Concatenation `self || other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut bits = self.to_bits();
        bits.extend(other.to_bits());
        Self::from_bits(&bits).expect("non-empty")
    }

    /// Sub-string of bits `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Result<Self, QStateError> {
        if start >= end || end > self.len {
            return Err(QStateError::EmptyBitString);
        }
        Self::from_bits(&self.to_bits()[start..end])
    }

    fn check_len(&self, other: &Self) -> Result<(), QStateError> {
        if self.len != other.len {
            return Err(QStateError::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }

    fn clear_padding(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= !0u64 << (64 - rem);
        }
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.words.cmp(&other.words))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = QStateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(QStateError::InvalidBitChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_bits(&bits)
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
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn dot_examples() {
        assert!(!bs("000").dot(&bs("101")).unwrap());
        assert!(!bs("111").dot(&bs("101")).unwrap());
        assert!(bs("100").dot(&bs("101")).unwrap());
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(matches!(
            bs("01").dot(&bs("011")),
            Err(QStateError::LengthMismatch { left: 2, right: 3 })
        ));
        assert!(bs("01").xor(&bs("011")).is_err());
    }

    #[test]
    fn empty_is_rejected() {
        assert!(BitString::zeros(0).is_err());
        assert!("".parse::<BitString>().is_err());
    }

    #[test]
    fn index_round_trip_and_order() {
        let s = BitString::from_index(0b110, 3).unwrap();
        assert_eq!(s.to_string(), "110");
        assert_eq!(s.to_index(), Some(6));
        assert!(bs("011") < bs("100"));
        assert!(BitString::from_index(8, 3).is_err());
    }

    #[test]
    fn bytes_reject_padding() {
        assert!(BitString::from_bytes(&[0b1010_0001], 4).is_err());
        assert_eq!(
            BitString::from_bytes(&[0b1010_0000], 4).unwrap(),
            bs("1010")
        );
    }

    #[test]
    fn wide_strings_span_words() {
        let mut s = BitString::zeros(130).unwrap();
        s.set(129, true);
        assert_eq!(s.first_one(), Some(129));
        assert_eq!(s.to_index(), None);
        assert_eq!(s.count_ones(), 1);
    }

    proptest! {
        #[test]
        fn lexicographic_matches_bit_order(
            (a, b) in (1usize..80).prop_flat_map(|n| {
                let v = proptest::collection::vec(any::<bool>(), n);
                (v.clone(), v)
            })
        ) {
            let (sa, sb) = (BitString::from_bits(&a).unwrap(), BitString::from_bits(&b).unwrap());
            prop_assert_eq!(sa.cmp(&sb), a.cmp(&b));
        }

        #[test]
        fn bytes_round_trip(bits in proptest::collection::vec(any::<bool>(), 1..150)) {
            let s = BitString::from_bits(&bits).unwrap();
            prop_assert_eq!(BitString::from_bytes(&s.to_bytes(), bits.len()).unwrap(), s);
        }
    }
}
