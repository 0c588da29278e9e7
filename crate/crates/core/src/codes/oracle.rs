//! Brute-force check of the shift- and flip-resilient isolation property.
//!
//! For every set `T` of `k` columns, every designated `c_j` in `T` and every
//! choice of cyclic shifts for the other members, the designated codeword must
//! keep strictly less than an `alpha` fraction of its prefix covered:
//! `|(c_j & z*)[0, tau]| < alpha * |c_j[0, tau]|`, where `z` is the OR of
//! the shifted competitors and `z*` its slipped form.

use rayon::prelude::*;

use crate::codeword::DoubledBits;
use crate::rational::Rational;

use super::{CodeMatrix, CodesError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UrscWitness {
    pub k: usize,
    /// Members of `T` in increasing order.
    pub members: Vec<usize>,
    pub designated: usize,
    /// `(column, shift)` for every member other than the designated one.
    pub shifts: Vec<(usize, usize)>,
    /// Covered ones of the designated prefix.
    pub lhs: usize,
    /// `alpha * |c_j[0, tau]|`.
    pub rhs_threshold: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Pass,
    Violation(UrscWitness),
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `sum_k C(n,k) * k * t^(k-1)` over `k` in `2..=k_max`, saturating.
pub fn oracle_configurations(n: usize, t: usize, k_max: usize) -> u128 {
    (2..=k_max.min(n)).fold(0u128, |acc, k| {
        let shifts = (t as u128).checked_pow(k as u32 - 1).unwrap_or(u128::MAX);
        acc.saturating_add(
            binomial(n, k)
                .saturating_mul(k as u128)
                .saturating_mul(shifts),
        )
    })
}

/// Lexicographic enumeration of the `k`-subsets of `0..n`.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..k).rev().find(|&p| cur[p] < n - k + p) else {
            return out;
        };
        cur[pos] += 1;
        for q in pos + 1..k {
            cur[q] = cur[q - 1] + 1;
        }
    }
}

struct Prefix {
    words: usize,
    last_mask: u64,
}

impl Prefix {
    fn new(tau: usize) -> Self {
        let bits = tau % 64 + 1;
        Prefix {
            words: tau / 64 + 1,
            last_mask: if bits == 64 {
                u64::MAX
            } else {
                (1 << bits) - 1
            },
        }
    }
}

struct Search<'a> {
    t: usize,
    prefix: &'a Prefix,
    designated: &'a [u64],
    /// `q * lhs >= p * w` marks a violation.
    p_w: i128,
    q: i128,
    others: Vec<&'a DoubledBits>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn covered(&self, acc: &[u64]) -> usize {
        self.designated
            .iter()
            .zip(acc)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn violates(&self, lhs: usize) -> bool {
        self.q * lhs as i128 >= self.p_w
    }

    /// Depth-first search over shift tuples in lexicographic order. Coverage
    /// only grows as competitors are added, so a violating prefix completes
    /// to its lexicographically first witness by padding with zero shifts.
    fn dfs(&mut self, acc: &[u64]) -> Option<usize> {
        let level = self.chosen.len();
        if level == self.others.len() {
            return None;
        }
        let mut next = vec![0u64; acc.len()];
        for s in 0..self.t {
            let partner = self.others[level];
            for (w, slot) in next.iter_mut().enumerate() {
                *slot = acc[w] | partner.window(s, w * 64);
            }
            next[self.prefix.words - 1] &= self.prefix.last_mask;
            let lhs = self.covered(&next);
            self.chosen.push(s);
            if self.violates(lhs) {
                self.chosen.resize(self.others.len(), 0);
                return Some(lhs);
            }
            if let Some(found) = self.dfs(&next) {
                return Some(found);
            }
            self.chosen.pop();
        }
        None
    }
}

/// Exhaustive check for every `k` in `2..=k_max` with prefix `[0, tau(k)]`.
/// Fails with `BudgetExceeded` before doing any work if the number of
/// configurations exceeds `budget`.
pub fn verify_ursc_bruteforce(
    m: &CodeMatrix,
    alpha: Rational,
    tau: impl Fn(usize) -> usize + Sync,
    k_max: usize,
    budget: u128,
) -> Result<OracleOutcome, CodesError> {
    let k_max = k_max.min(m.n());
    let configurations = oracle_configurations(m.n(), m.t(), k_max);
    if configurations > budget {
        return Err(CodesError::BudgetExceeded {
            configurations,
            budget,
        });
    }
    for k in 2..=k_max {
        let tau_k = tau(k);
        if tau_k >= m.t() {
            return Err(CodesError::IndexOutOfRange {
                index: tau_k,
                t: m.t(),
            });
        }
        if let Some(w) = first_witness(m, alpha, tau_k, k) {
            return Ok(OracleOutcome::Violation(w));
        }
    }
    Ok(OracleOutcome::Pass)
}

fn first_witness(m: &CodeMatrix, alpha: Rational, tau: usize, k: usize) -> Option<UrscWitness> {
    let prefix = Prefix::new(tau);
    let slipped: Vec<DoubledBits> = m
        .columns()
        .iter()
        .map(|c| DoubledBits::new(&c.slipped()))
        .collect();
    let (p, q) = (*alpha.numer() as i128, *alpha.denom() as i128);
    let jobs: Vec<(Vec<usize>, usize)> = subsets(m.n(), k)
        .into_iter()
        .flat_map(|set| (0..k).map(move |d| (set.clone(), set[d])))
        .collect();
    jobs.par_iter().find_map_first(|(members, designated)| {
        let mut designated_words = m.column(*designated).words()[..prefix.words].to_vec();
        designated_words[prefix.words - 1] &= prefix.last_mask;
        let w: usize = designated_words
            .iter()
            .map(|x| x.count_ones() as usize)
            .sum();
        let others: Vec<usize> = members
            .iter()
            .copied()
            .filter(|c| c != designated)
            .collect();
        let mut search = Search {
            t: m.t(),
            prefix: &prefix,
            designated: &designated_words,
            p_w: p * w as i128,
            q,
            others: others.iter().map(|&c| &slipped[c]).collect(),
            chosen: Vec::with_capacity(others.len()),
        };
        let lhs = if search.violates(0) {
            search.chosen = vec![0; others.len()];
            Some(0)
        } else {
            search.dfs(&vec![0u64; prefix.words])
        }?;
        Some(UrscWitness {
            k,
            members: members.clone(),
            designated: *designated,
            shifts: others
                .iter()
                .copied()
                .zip(search.chosen.iter().copied())
                .collect(),
            lhs,
            rhs_threshold: alpha * Rational::from_integer(w as i64),
        })
    })
}

/// Largest `k` such that the whole codeword of every column stays isolated
/// (alpha = 1, prefix = full length) against any `k - 1` shifted competitors.
/// Levels are verified in increasing `k` while the cumulative configuration
/// count stays within `budget`; returns 1 when even `k = 2` fails or does not
/// fit.
pub fn certified_capacity(m: &CodeMatrix, budget: u128) -> usize {
    let one = Rational::from_integer(1);
    let mut capacity = 1;
    for k in 2..=m.n() {
        if oracle_configurations(m.n(), m.t(), k) > budget {
            break;
        }
        if first_witness(m, one, m.t() - 1, k).is_some() {
            break;
        }
        capacity = k;
    }
    capacity
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration() {
        assert_eq!(
            subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn configuration_counts() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(oracle_configurations(2, 16, 2), 32);
        // 3 pairs * 2 * 4 + 1 triple * 3 * 16
        assert_eq!(oracle_configurations(3, 4, 3), 24 + 48);
        assert_eq!(oracle_configurations(3, 4, 9), 72);
    }

    #[test]
    fn zero_column_is_a_witness() {
        let m = CodeMatrix::from_support(8, &[&[], &[1, 5]]).unwrap();
        let out = verify_ursc_bruteforce(&m, Rational::from_integer(1), |_| 7, 2, 1000).unwrap();
        let OracleOutcome::Violation(w) = out else {
            panic!("expected a witness")
        };
        assert_eq!(w.designated, 0);
        assert_eq!(w.shifts, vec![(1, 0)]);
        assert_eq!(w.lhs, 0);
    }

    #[test]
    fn budget_is_enforced_up_front() {
        let m = CodeMatrix::from_support(16, &[&[0], &[1], &[2]]).unwrap();
        let err = verify_ursc_bruteforce(&m, Rational::from_integer(1), |_| 15, 3, 100);
        assert!(matches!(err, Err(CodesError::BudgetExceeded { .. })));
    }
}
