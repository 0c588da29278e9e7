//! Framed node identifiers: `1110001` followed by the id in Manchester form
//! (each bit `b` of `v - 1`, most significant first, becomes `b, !b`).

use crate::codeword::BitVector;

use super::BeepError;

const PREFIX: [bool; 7] = [true, true, true, false, false, false, true];
const PREFIX_BITS: u128 = 0b1110001;

/// Bits needed for ids `1..=n`: `ceil(log2 n)`.
pub fn id_width(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Length of a block id for universe size `n`: `7 + 2w`.
pub fn block_len(n: usize) -> usize {
    7 + 2 * id_width(n)
}

pub fn block_id(v: usize, n: usize) -> Result<BitVector, BeepError> {
    if v == 0 || v > n {
        return Err(BeepError::IdOutOfRange { id: v, n });
    }
    let w = id_width(n);
    let mut bits = PREFIX.to_vec();
    for b in (0..w).rev() {
        let bit = (v - 1) >> b & 1 == 1;
        bits.extend([bit, !bit]);
    }
    Ok(BitVector::from_bools(&bits).expect("nonempty"))
}

/// Returns `v` iff `window` equals `block_id(v, n)`.
pub fn decode_block_id(window: &BitVector, n: usize) -> Option<usize> {
    if window.len() != block_len(n) {
        return None;
    }
    let packed = window
        .iter()
        .fold(0u128, |acc, b| (acc << 1) | u128::from(b));
    BlockDecoder::new(n).decode(packed)
}

/// Decodes block ids from a shift register in which the most recent bit is
/// the least significant one.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BlockDecoder {
    n: usize,
    width: usize,
    len: usize,
}

impl BlockDecoder {
    pub(crate) fn new(n: usize) -> Self {
        let width = id_width(n);
        BlockDecoder {
            n,
            width,
            len: 7 + 2 * width,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    /// Largest universe whose block ids fit in a 128-bit shift register.
    pub(crate) fn fits(n: usize) -> bool {
        block_len(n) <= 128
    }

    /// `packed` holds the last `len` recorded bits, oldest in the highest
    /// position; higher bits are ignored.
    #[inline]
    pub(crate) fn decode(&self, packed: u128) -> Option<usize> {
        let payload_bits = 2 * self.width;
        if (packed >> payload_bits) & 0x7f != PREFIX_BITS {
            return None;
        }
        let mut value = 0usize;
        for pair in (0..self.width).rev() {
            let hi = (packed >> (2 * pair + 1)) & 1;
            let lo = (packed >> (2 * pair)) & 1;
            if hi == lo {
                return None;
            }
            value = (value << 1) | hi as usize;
        }
        (value < self.n).then_some(value + 1)
    }
}

/// Replaces every one of `code` by `bid` and every zero by `|bid|` zeros.
pub fn expand_codeword(code: &BitVector, bid: &BitVector) -> BitVector {
    let l = bid.len();
    let mut out = BitVector::zeros(code.len() * l);
    for i in code.iter_ones() {
        for j in bid.iter_ones() {
            out.set(i * l + j, true);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn widths() {
        assert_eq!(id_width(1), 0);
        assert_eq!(id_width(2), 1);
        assert_eq!(id_width(4), 2);
        assert_eq!(id_width(5), 3);
        assert_eq!(id_width(256), 8);
    }

    #[test]
    fn encodes_examples() {
        assert_eq!(block_id(1, 4).unwrap(), bv("11100010101"));
        assert_eq!(block_id(4, 4).unwrap(), bv("11100011010"));
        assert_eq!(block_id(2, 2).unwrap(), bv("111000110"));
        assert_eq!(block_id(2, 4).unwrap(), bv("11100010110"));
        assert!(block_id(0, 4).is_err());
        assert!(block_id(5, 4).is_err());
    }

    #[test]
    fn decodes() {
        for n in 1..40 {
            for v in 1..=n {
                assert_eq!(decode_block_id(&block_id(v, n).unwrap(), n), Some(v));
            }
        }
        assert_eq!(decode_block_id(&bv("11100010001"), 4), None);
        assert_eq!(decode_block_id(&bv("01100010101"), 4), None);
        // payload decodes to 4 but the universe has three ids
        assert_eq!(decode_block_id(&bv("11100011010"), 3), None);
        assert_eq!(decode_block_id(&bv("1110001"), 4), None);
    }

    #[test]
    fn expansion() {
        let bid = block_id(2, 2).unwrap();
        let e = expand_codeword(&bv("10"), &bid);
        assert_eq!(e.to_string(), format!("{bid}000000000"));
        assert!(expand_codeword(&bv("000"), &bid).is_zero());
        let code = bv("1011001");
        assert_eq!(
            expand_codeword(&code, &bid).weight(),
            code.weight() * bid.weight()
        );
    }
}
