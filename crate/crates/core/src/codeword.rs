//! Packed binary codewords.
//!
//! Bits are stored least-significant-first in `u64` words; bits past `len`
//! in the last word are always zero. Positions are 0-based and every shift
//! is taken modulo the vector length.

use std::fmt;
use std::ops::{BitAnd, BitOr};
use std::str::FromStr;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodewordError {
    #[error("interval [{b1}, {b2}] is not inside 0..{len}")]
    IndexOutOfRange { b1: usize, b2: usize, len: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("a codeword needs at least one position")]
    Empty,
    #[error("invalid bit character {0:?}")]
    InvalidChar(char),
}

/// Fixed-length binary vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

#[inline]
fn low_mask(bits: usize) -> u64 {
    if bits >= WORD_BITS {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

impl BitVector {
    /// All-zero vector of length `len`.
    ///
    /// Panics if `len == 0`.
    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "BitVector length must be at least 1");
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = u64::MAX;
        }
        v.clear_tail();
        v
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self, CodewordError> {
        if bits.is_empty() {
            return Err(CodewordError::Empty);
        }
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        Ok(v)
    }

    /// Vector of length `len` with ones exactly at `positions`.
    pub fn from_ones(len: usize, positions: &[usize]) -> Result<Self, CodewordError> {
        if len == 0 {
            return Err(CodewordError::Empty);
        }
        let mut v = Self::zeros(len);
        for &p in positions {
            if p >= len {
                return Err(CodewordError::IndexOutOfRange { b1: p, b2: p, len });
            }
            v.set(p, true);
        }
        Ok(v)
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        let mut v = BitVector { len, words };
        v.clear_tail();
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; kept for API symmetry with slices.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= low_mask(rem);
            }
        }
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of ones in positions `b1..=b2`.
    pub fn interval_weight(&self, b1: usize, b2: usize) -> Result<usize, CodewordError> {
        if b1 > b2 || b2 >= self.len {
            return Err(CodewordError::IndexOutOfRange {
                b1,
                b2,
                len: self.len,
            });
        }
        Ok(count_range(&self.words, b1, b2 + 1))
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD_BITS + tz)
                }
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// The `i`-th cyclic shift: `result[r] = self[(r + i) mod len]`.
    pub fn cyclic_shift(&self, i: i64) -> BitVector {
        let start = normalize_shift(i, self.len);
        if start == 0 {
            return self.clone();
        }
        let doubled = DoubledBits::new(self);
        doubled.rotation(start)
    }

    /// `z(-1) | z | z(1)`: every one widens to a cyclic run of three.
    pub fn slipped(&self) -> BitVector {
        let left = self.cyclic_shift(-1);
        let right = self.cyclic_shift(1);
        &(&left | self) | &right
    }

    pub fn and(&self, other: &BitVector) -> Result<BitVector, CodewordError> {
        self.check_len(other)?;
        Ok(self.zip_words(other, |a, b| a & b))
    }

    pub fn or(&self, other: &BitVector) -> Result<BitVector, CodewordError> {
        self.check_len(other)?;
        Ok(self.zip_words(other, |a, b| a | b))
    }

    pub fn not(&self) -> BitVector {
        let mut v = BitVector {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        v.clear_tail();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Concatenation of `self` repeated `times` times.
    pub fn repeat(&self, times: usize) -> BitVector {
        assert!(times >= 1);
        let mut out = BitVector::zeros(self.len * times);
        for r in 0..times {
            for p in self.iter_ones() {
                out.set(r * self.len + p, true);
            }
        }
        out
    }

    fn check_len(&self, other: &BitVector) -> Result<(), CodewordError> {
        if self.len != other.len {
            return Err(CodewordError::LengthMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        Ok(())
    }

    fn zip_words(&self, other: &BitVector, f: impl Fn(u64, u64) -> u64) -> BitVector {
        BitVector {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

/// Bitwise OR of the given cyclic shifts; `len` fixes the result length and
/// must match every part.
pub fn superposition(parts: &[(&BitVector, i64)], len: usize) -> Result<BitVector, CodewordError> {
    if len == 0 {
        return Err(CodewordError::Empty);
    }
    let mut acc = BitVector::zeros(len);
    for (v, shift) in parts {
        if v.len() != len {
            return Err(CodewordError::LengthMismatch {
                expected: len,
                found: v.len(),
            });
        }
        acc = &acc | &v.cyclic_shift(*shift);
    }
    Ok(acc)
}

/// Maps any integer shift into `0..len`.
#[inline]
pub fn normalize_shift(i: i64, len: usize) -> usize {
    let t = len as i64;
    (((i % t) + t) % t) as usize
}

/// Counts ones of `words` in bit positions `from..to`.
#[inline]
pub(crate) fn count_range(words: &[u64], from: usize, to: usize) -> usize {
    if from >= to {
        return 0;
    }
    let (fw, fb) = (from / WORD_BITS, from % WORD_BITS);
    let (lw, lb) = ((to - 1) / WORD_BITS, (to - 1) % WORD_BITS);
    let hi_mask = low_mask(lb + 1);
    if fw == lw {
        return ((words[fw] >> fb) & (hi_mask >> fb)).count_ones() as usize;
    }
    let mut total = (words[fw] >> fb).count_ones() as usize;
    for w in &words[fw + 1..lw] {
        total += w.count_ones() as usize;
    }
    total + (words[lw] & hi_mask).count_ones() as usize
}

/// A vector laid out twice in a row (plus one spare word) so that any
/// rotation can be read as aligned 64-bit windows.
#[derive(Clone, Debug)]
pub(crate) struct DoubledBits {
    len: usize,
    words: Vec<u64>,
}

impl DoubledBits {
    pub(crate) fn new(v: &BitVector) -> Self {
        let len = v.len();
        let mut words = vec![0u64; words_for(2 * len) + 2];
        for p in v.iter_ones() {
            for q in [p, p + len] {
                words[q / WORD_BITS] |= 1 << (q % WORD_BITS);
            }
        }
        DoubledBits { len, words }
    }

    /// 64 bits of the rotation by `start` beginning at rotated position
    /// `offset`; bits beyond the vector length are unspecified.
    #[inline]
    pub(crate) fn window(&self, start: usize, offset: usize) -> u64 {
        let q = start + offset;
        let (w, b) = (q / WORD_BITS, q % WORD_BITS);
        if b == 0 {
            self.words[w]
        } else {
            (self.words[w] >> b) | (self.words[w + 1] << (WORD_BITS - b))
        }
    }

    pub(crate) fn rotation(&self, start: usize) -> BitVector {
        let n = words_for(self.len);
        let words = (0..n).map(|w| self.window(start, w * WORD_BITS)).collect();
        BitVector::from_words(self.len, words)
    }
}

impl BitAnd for &BitVector {
    type Output = BitVector;
    fn bitand(self, rhs: &BitVector) -> BitVector {
        self.and(rhs).expect("BitVector & with mismatched lengths")
    }
}

impl BitOr for &BitVector {
    type Output = BitVector;
    fn bitor(self, rhs: &BitVector) -> BitVector {
        self.or(rhs).expect("BitVector | with mismatched lengths")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = CodewordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(CodewordError::InvalidChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        BitVector::from_bools(&bits)
    }
}
