//! The shift-free baseline: every member of every `k`-set must own a row
//! where all other members are zero.

use super::oracle::binomial;
use super::{CodeMatrix, CodesError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicWitness {
    pub members: Vec<usize>,
    pub designated: usize,
}

/// Returns the lexicographically first `(T, designated)` that is not
/// isolated, or `None` when every `k`-set separates all its members.
pub fn verify_classic(
    m: &CodeMatrix,
    k: usize,
    budget: u128,
) -> Result<Option<ClassicWitness>, CodesError> {
    if k < 2 || k > m.n() {
        return Err(CodesError::KOutOfRange { k, n: m.n() });
    }
    let configurations = binomial(m.n(), k).saturating_mul(k as u128);
    if configurations > budget {
        return Err(CodesError::BudgetExceeded {
            configurations,
            budget,
        });
    }
    let words = m.column(0).words().len();
    let mut set: Vec<usize> = (0..k).collect();
    loop {
        for &d in &set {
            let own = m.column(d).words();
            let isolated = (0..words).any(|w| {
                let others = set
                    .iter()
                    .filter(|&&o| o != d)
                    .fold(0u64, |acc, &o| acc | m.column(o).words()[w]);
                own[w] & !others != 0
            });
            if !isolated {
                return Ok(Some(ClassicWitness {
                    members: set.clone(),
                    designated: d,
                }));
            }
        }
        let n = m.n();
        let Some(pos) = (0..k).rev().find(|&p| set[p] < n - k + p) else {
            return Ok(None);
        };
        set[pos] += 1;
        for q in pos + 1..k {
            set[q] = set[q - 1] + 1;
        }
    }
}
