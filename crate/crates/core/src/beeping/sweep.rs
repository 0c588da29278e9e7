//! Exhaustive verification of neighborhood learning over every wake-up
//! schedule, without simulating each schedule.
//!
//! What node `v` decodes at the end of a round depends only on the last
//! `L` recorded bits (`L` = block length). Each node `x` of the closed
//! neighborhood `N[v]` contributes an `L`-bit slice of its periodic beep
//! pattern, fixed by its local round alone; `v` additionally zeroes the
//! bits recorded before its own wake-up. Because wake-up rounds are
//! independent per node, the set of possible windows is the set of ORs of
//! one slice per node, which has at most `2^L` elements and is enumerated
//! directly.
//!
//! * Safety: no possible window at `v` decodes to an id outside `N[v]`.
//! * Inclusion: for an edge `v-u`, consider the first full repetition of
//!   `u`'s pattern that starts once both are awake. It contains one aligned
//!   copy of `u`'s block id per one of `u`'s codeword; copy `i` decodes at
//!   `v` unless some other member of `N[v]` beeps outside `u`'s block id
//!   inside that window. Every member contributes, over all its possible
//!   wake-up offsets, a set of blocked copies; Inclusion holds iff no
//!   choice of one offset per member blocks every copy. The decode then
//!   happens before `max(wake_u, wake_v) + 2P`, with `P` the period.

use std::collections::BTreeSet;

use crate::codes::CodeMatrix;

use super::block_id::{block_id, expand_codeword, BlockDecoder};
use super::{BeepError, Graph};

/// Most recent bit least significant, as in the simulator's record.
fn pack(bits: impl DoubleEndedIterator<Item = bool>) -> u128 {
    bits.fold(0u128, |acc, b| (acc << 1) | u128::from(b))
}

struct Patterns {
    block: usize,
    period: usize,
    /// Expanded pattern per node id (index `v - 1`).
    beeps: Vec<Vec<bool>>,
    decoder: BlockDecoder,
}

impl Patterns {
    fn new(g: &Graph, m: &CodeMatrix) -> Result<Self, BeepError> {
        let n = g.n_ids();
        if m.n() < n {
            return Err(BeepError::CodeTooNarrow {
                columns: m.n(),
                needed: n,
            });
        }
        let decoder = BlockDecoder::new(n);
        if decoder.len() > 24 {
            return Err(BeepError::BlockTooLong { len: decoder.len() });
        }
        let beeps = (1..=n)
            .map(|v| {
                Ok(expand_codeword(m.column(v - 1), &block_id(v, n)?)
                    .iter()
                    .collect())
            })
            .collect::<Result<Vec<Vec<bool>>, BeepError>>()?;
        Ok(Patterns {
            block: decoder.len(),
            period: m.t() * decoder.len(),
            beeps,
            decoder,
        })
    }

    /// Window of node `v`'s beeps ending at its local round `local`
    /// (negative: not yet awake).
    fn slice(&self, v: usize, local: i64) -> u128 {
        if local < 0 {
            return 0;
        }
        let p = self.period as i64;
        let e = &self.beeps[v - 1];
        pack((0..self.block as i64).rev().map(|j| {
            let r = local - j;
            r >= 0 && e[r.rem_euclid(p) as usize]
        }))
    }

    /// Every slice `v` can show: partial ones right after waking, then one
    /// per phase of the period.
    fn all_slices(&self, v: usize) -> BTreeSet<u128> {
        let mut out: BTreeSet<u128> = (0..(self.period + self.block) as i64)
            .map(|l| self.slice(v, l))
            .collect();
        out.insert(0);
        out
    }

    fn full_mask(&self) -> u128 {
        (1u128 << self.block) - 1
    }
}

/// A window that decodes to an id outside the closed neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyWitness {
    pub node: usize,
    pub decoded: usize,
    /// The offending window, oldest bit first.
    pub window: String,
}

/// Wake-up offsets (relative to the start of `neighbor`'s repetition) under
/// which every copy of `neighbor`'s block id is blocked at `node`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionWitness {
    pub node: usize,
    pub neighbor: usize,
    pub offsets: Vec<(usize, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhaseSweep {
    pub safety: Vec<SafetyWitness>,
    pub inclusion: Vec<InclusionWitness>,
    /// Distinct (node, window) combinations examined for Safety.
    pub windows: u64,
    /// Learning deadline after mutual wake-up, in rounds (`2P`).
    pub deadline: u64,
}

impl PhaseSweep {
    pub fn passed(&self) -> bool {
        self.safety.is_empty() && self.inclusion.is_empty()
    }
}

/// Checks Safety for every node and Inclusion for every edge of `g` over all
/// wake-up schedules.
pub fn phase_space_sweep(g: &Graph, m: &CodeMatrix) -> Result<PhaseSweep, BeepError> {
    let pats = Patterns::new(g, m)?;
    let mut out = PhaseSweep {
        deadline: 2 * pats.period as u64,
        ..PhaseSweep::default()
    };
    for v in g.nodes() {
        safety_at(g, &pats, v, &mut out);
        for u in g.neighbors(v) {
            if let Some(w) = inclusion_at(g, m, &pats, v, u)? {
                out.inclusion.push(w);
            }
        }
    }
    Ok(out)
}

fn safety_at(g: &Graph, pats: &Patterns, v: usize, out: &mut PhaseSweep) {
    let mut reach: BTreeSet<u128> = BTreeSet::from([0]);
    for x in g.neighbors(v) {
        let slices = pats.all_slices(x);
        reach = reach
            .iter()
            .flat_map(|r| slices.iter().map(move |s| r | s))
            .collect();
    }
    // v's own slice and the mask of rounds recorded since v woke up
    let own: BTreeSet<(u128, u128)> = (0..(pats.period + pats.block) as i64)
        .map(|l| {
            let mask = if l + 1 >= pats.block as i64 {
                pats.full_mask()
            } else {
                (1u128 << (l + 1)) - 1
            };
            (mask, pats.slice(v, l))
        })
        .collect();
    let mut seen = BTreeSet::new();
    for &(mask, mine) in &own {
        for r in &reach {
            let window = mask & (mine | r);
            if !seen.insert(window) {
                continue;
            }
            if let Some(id) = pats.decoder.decode(window) {
                if id != v && !g.has_edge(v, id) {
                    out.safety.push(SafetyWitness {
                        node: v,
                        decoded: id,
                        window: format!("{:0width$b}", window, width = pats.block),
                    });
                    return;
                }
            }
        }
    }
    out.windows += seen.len() as u64;
}

fn inclusion_at(
    g: &Graph,
    m: &CodeMatrix,
    pats: &Patterns,
    v: usize,
    u: usize,
) -> Result<Option<InclusionWitness>, BeepError> {
    let copies: Vec<i64> = m.column(u - 1).iter_ones().map(|i| i as i64).collect();
    if copies.len() > 64 {
        return Err(BeepError::Graph(format!(
            "codeword {u} has more than 64 ones; the sweep tracks copies in a 64-bit mask"
        )));
    }
    let all: u64 = if copies.len() == 64 {
        u64::MAX
    } else {
        (1 << copies.len()) - 1
    };
    let bid = pack(
        block_id(u, g.n_ids())?
            .iter()
            .collect::<Vec<_>>()
            .into_iter(),
    );
    let block = pats.block as i64;
    let p = pats.period as i64;
    let others: Vec<usize> = std::iter::once(v)
        .chain(g.neighbors(v).filter(|&x| x != u))
        .collect();

    // reachable unions of blocked copies, with the offsets that produce them
    let mut reach: Vec<(u64, Vec<(usize, i64)>)> = vec![(0, Vec::new())];
    for &x in &others {
        // x = v is awake for the whole repetition; others may wake inside it
        let hi = if x == v { 0 } else { p - 1 };
        let mut masks: Vec<(u64, i64)> = Vec::new();
        let mut seen = BTreeSet::new();
        for rho in -(p + block - 1)..=hi {
            let blocked = copies.iter().enumerate().fold(0u64, |acc, (c, &i)| {
                let end = (i + 1) * block - 1;
                if pats.slice(x, end - rho) & !bid != 0 {
                    acc | 1 << c
                } else {
                    acc
                }
            });
            if seen.insert(blocked) {
                masks.push((blocked, rho));
            }
        }
        let mut next: Vec<(u64, Vec<(usize, i64)>)> = Vec::new();
        let mut have = BTreeSet::new();
        for (acc, offs) in &reach {
            for &(b, rho) in &masks {
                if have.insert(acc | b) {
                    let mut o = offs.clone();
                    o.push((x, rho));
                    next.push((acc | b, o));
                }
            }
        }
        reach = next;
    }
    Ok(reach
        .into_iter()
        .find(|(mask, _)| *mask == all)
        .map(|(_, offsets)| InclusionWitness {
            node: v,
            neighbor: u,
            offsets,
        }))
}
