use crate::codes::{certified_capacity, check_against_header, CheckMode, CodeMatrix};
use crate::rational::Rational;

/// A code matrix together with the number of simultaneous codewords for
/// which every member is known to keep an isolated one under arbitrary
/// cyclic shifts of the others.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeepCode {
    matrix: CodeMatrix,
    capacity: usize,
}

impl BeepCode {
    /// Certifies the capacity: the brute-force oracle within `budget`, or,
    /// when the header's alpha is at most 1/2, the pairwise checker over the
    /// header's `k` range (which implies isolation at twice alpha).
    /// Whichever certifies the larger `k` wins.
    pub fn certify(matrix: CodeMatrix, budget: u128) -> Self {
        let mut capacity = certified_capacity(&matrix, budget);
        let h = matrix.header();
        if h.n >= 2
            && h.alpha * 2 <= Rational::from_integer(1)
            && h.default_k_max() > capacity
            && check_against_header(&matrix, CheckMode::FailFast).is_ok_and(|r| r.passed)
        {
            capacity = h.default_k_max();
        }
        BeepCode { matrix, capacity }
    }

    /// Trusts a capacity established elsewhere.
    pub fn with_capacity(matrix: CodeMatrix, capacity: usize) -> Self {
        BeepCode { matrix, capacity }
    }

    pub fn matrix(&self) -> &CodeMatrix {
        &self.matrix
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }
}
