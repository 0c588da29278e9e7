//! The pairwise sufficient condition (weight inequality plus collision
//! weight inequality) and its word-parallel evaluation.

use std::fmt;

use rayon::prelude::*;

use crate::codeword::{count_range, DoubledBits};
use crate::rational::{floor_div, Rational};

use super::{CodeMatrix, CodesError, ElongationPair, ElongationTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InequalityKind {
    /// `|c_j[0, tau1]| <= alpha * |c_j[tau1, tau2]|`
    WeightInequality,
    /// `|(c_j & slipped(c_j' shifted by i))[tau1, tau2]| <= floor((alpha*W - 1)/(k-1))`
    CollisionWeightInequality,
}

impl fmt::Display for InequalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InequalityKind::WeightInequality => "WeightInequality",
            InequalityKind::CollisionWeightInequality => "CollisionWeightInequality",
        })
    }
}

/// One failing cell. Weight-inequality cells have no partner column or
/// shift, so they sort before every collision cell with the same `(k, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub k: usize,
    pub j: usize,
    pub j_prime: Option<usize>,
    pub shift: Option<usize>,
    pub kind: InequalityKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
        write!(
            f,
            "k={} j={} j'={} i={} {}",
            self.k,
            self.j,
            opt(self.j_prime),
            opt(self.shift),
            self.kind
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Every failing cell, canonically sorted.
    Full,
    /// Only the lexicographically first failing cell.
    FailFast,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
    /// Cells evaluated in canonical order `(k, j, [weight cell], j', i)`.
    /// In fail-fast mode this is the position of the first violation.
    pub cells_checked: u64,
}

pub fn check_weight_inequality(
    m: &CodeMatrix,
    j: usize,
    alpha: Rational,
    e: ElongationPair,
) -> bool {
    let col = m.column(j);
    let upper = count_range(col.words(), 0, e.tau1 + 1);
    let lower = count_range(col.words(), e.tau1, e.tau2 + 1);
    weight_ok(upper, lower, alpha)
}

fn weight_ok(upper: usize, lower: usize, alpha: Rational) -> bool {
    (upper as i128) * (*alpha.denom() as i128) <= (*alpha.numer() as i128) * (lower as i128)
}

/// `floor((alpha*w - 1) / (k - 1))`, possibly negative.
pub fn collision_threshold(alpha: Rational, w: usize, k: usize) -> i128 {
    let p = *alpha.numer() as i128;
    let q = *alpha.denom() as i128;
    floor_div(p * w as i128 - q, q * (k as i128 - 1))
}

/// Direct evaluation of one collision cell, one bit vector operation at a time.
#[allow(clippy::too_many_arguments)]
pub fn check_collision_weight_inequality(
    m: &CodeMatrix,
    j: usize,
    j_prime: usize,
    i: i64,
    k: usize,
    alpha: Rational,
    e: ElongationPair,
) -> bool {
    let cj = m.column(j);
    let w = cj
        .interval_weight(e.tau1, e.tau2)
        .expect("elongation pair inside the code");
    let hit = cj & &m.column(j_prime).cyclic_shift(i).slipped();
    let lhs = hit.interval_weight(e.tau1, e.tau2).expect("same bounds");
    (lhs as i128) <= collision_threshold(alpha, w, k)
}

struct Kernel<'a> {
    m: &'a CodeMatrix,
    table: Vec<(usize, ElongationPair)>,
    /// `thresholds[k-2][j]`
    thresholds: Vec<Vec<i128>>,
    slipped: Vec<DoubledBits>,
    word_lo: usize,
    word_hi: usize,
}

impl<'a> Kernel<'a> {
    fn new(m: &'a CodeMatrix, alpha: Rational, table: &ElongationTable) -> Self {
        let table: Vec<_> = table.iter().collect();
        let thresholds = table
            .iter()
            .map(|&(k, e)| {
                m.columns()
                    .iter()
                    .map(|c| {
                        collision_threshold(alpha, count_range(c.words(), e.tau1, e.tau2 + 1), k)
                    })
                    .collect()
            })
            .collect();
        let lo = table.iter().map(|(_, e)| e.tau1).min().unwrap_or(0);
        let hi = table.iter().map(|(_, e)| e.tau2).max().unwrap_or(0);
        Kernel {
            m,
            table,
            thresholds,
            slipped: m
                .columns()
                .iter()
                .map(|c| DoubledBits::new(&c.slipped()))
                .collect(),
            word_lo: lo / 64,
            word_hi: hi / 64,
        }
    }

    fn cells_per_k(&self) -> u64 {
        let n = self.m.n() as u64;
        n * (1 + (n - 1) * self.m.t() as u64)
    }

    fn cell_index(&self, v: &Violation) -> u64 {
        let n = self.m.n() as u64;
        let t = self.m.t() as u64;
        let mut idx = (v.k as u64 - 2) * self.cells_per_k() + v.j as u64 * (1 + (n - 1) * t);
        if let (Some(jp), Some(i)) = (v.j_prime, v.shift) {
            let rank = if jp < v.j { jp } else { jp - 1 } as u64;
            idx += 1 + rank * t + i as u64;
        }
        idx
    }
}

/// Scratch space reused across shifts of one column pair.
struct PairScan<'k, 'a> {
    kernel: &'k Kernel<'a>,
    j: usize,
    j_prime: usize,
    and_words: Vec<u64>,
    prefix: Vec<u32>,
}

impl<'k, 'a> PairScan<'k, 'a> {
    fn new(kernel: &'k Kernel<'a>, j: usize, j_prime: usize) -> Self {
        let words = kernel.word_hi - kernel.word_lo + 1;
        PairScan {
            kernel,
            j,
            j_prime,
            and_words: vec![0; words],
            prefix: vec![0; words + 1],
        }
    }

    /// Fills the AND of `c_j` with the slipped partner rotated by `i`.
    fn load(&mut self, i: usize) {
        let cj = self.kernel.m.column(self.j).words();
        let partner = &self.kernel.slipped[self.j_prime];
        let mut acc = 0u32;
        for (slot, w) in (self.kernel.word_lo..=self.kernel.word_hi).enumerate() {
            let v = cj[w] & partner.window(i, w * 64);
            self.and_words[slot] = v;
            self.prefix[slot] = acc;
            acc += v.count_ones();
        }
        self.prefix[self.and_words.len()] = acc;
    }

    /// Ones of the loaded vector in positions `[word_lo*64, pos)`.
    #[inline]
    fn ones_before(&self, pos: usize) -> u32 {
        let rel = pos - self.kernel.word_lo * 64;
        let (slot, bit) = (rel / 64, rel % 64);
        if bit == 0 {
            self.prefix[slot]
        } else {
            self.prefix[slot] + (self.and_words[slot] & ((1u64 << bit) - 1)).count_ones()
        }
    }

    #[inline]
    fn lhs(&self, e: ElongationPair) -> i128 {
        (self.ones_before(e.tau2 + 1) - self.ones_before(e.tau1)) as i128
    }

    fn violation(&self, k: usize, i: usize) -> Violation {
        Violation {
            k,
            j: self.j,
            j_prime: Some(self.j_prime),
            shift: Some(i),
            kind: InequalityKind::CollisionWeightInequality,
        }
    }

    fn all_violations(&mut self) -> Vec<Violation> {
        let mut out = Vec::new();
        for i in 0..self.kernel.m.t() {
            self.load(i);
            for (slot, &(k, e)) in self.kernel.table.iter().enumerate() {
                if self.lhs(e) > self.kernel.thresholds[slot][self.j] {
                    out.push(self.violation(k, i));
                }
            }
        }
        out
    }
}

/// Evaluates both inequalities for every `k` in the table, every ordered
/// column pair and every shift.
pub fn check_cbp(
    m: &CodeMatrix,
    alpha: Rational,
    table: &ElongationTable,
    mode: CheckMode,
) -> CheckReport {
    let kernel = Kernel::new(m, alpha, table);
    let mut weight_violations = Vec::new();
    for &(k, e) in &kernel.table {
        for j in 0..m.n() {
            if !check_weight_inequality(m, j, alpha, e) {
                weight_violations.push(Violation {
                    k,
                    j,
                    j_prime: None,
                    shift: None,
                    kind: InequalityKind::WeightInequality,
                });
            }
        }
    }
    let total_cells = kernel.cells_per_k() * kernel.table.len() as u64;
    match mode {
        CheckMode::Full => {
            let pairs: Vec<(usize, usize)> = (0..m.n())
                .flat_map(|j| (0..m.n()).filter(move |&jp| jp != j).map(move |jp| (j, jp)))
                .collect();
            let mut violations: Vec<Violation> = pairs
                .par_iter()
                .flat_map_iter(|&(j, jp)| PairScan::new(&kernel, j, jp).all_violations())
                .collect();
            violations.extend(weight_violations);
            violations.sort_unstable();
            CheckReport {
                passed: violations.is_empty(),
                violations,
                cells_checked: total_cells,
            }
        }
        CheckMode::FailFast => {
            let mut best = weight_violations.into_iter().min();
            'scan: for j in 0..m.n() {
                for jp in (0..m.n()).filter(|&jp| jp != j) {
                    let mut scan = PairScan::new(&kernel, j, jp);
                    for i in 0..m.t() {
                        let k_cap = match best {
                            None => usize::MAX,
                            Some(b) if (j, Some(jp), Some(i)) < (b.j, b.j_prime, b.shift) => b.k,
                            Some(b) => b.k - 1,
                        };
                        if k_cap < 2 {
                            break 'scan;
                        }
                        scan.load(i);
                        let first = kernel
                            .table
                            .iter()
                            .enumerate()
                            .take_while(|(_, &(k, _))| k <= k_cap)
                            .find(|&(slot, &(_, e))| scan.lhs(e) > kernel.thresholds[slot][j]);
                        if let Some((_, &(k, _))) = first {
                            best = Some(scan.violation(k, i));
                        }
                    }
                }
            }
            match best {
                Some(v) => CheckReport {
                    passed: false,
                    cells_checked: kernel.cell_index(&v) + 1,
                    violations: vec![v],
                },
                None => CheckReport {
                    passed: true,
                    violations: Vec::new(),
                    cells_checked: total_cells,
                },
            }
        }
    }
}

/// Checks a matrix against the elongation functions recorded in its header,
/// for `k` up to [`CodeHeader::default_k_max`](super::CodeHeader::default_k_max).
pub fn check_against_header(m: &CodeMatrix, mode: CheckMode) -> Result<CheckReport, CodesError> {
    let h = m.header();
    let table = ElongationTable::from_header(h, h.default_k_max())?;
    Ok(check_cbp(m, h.alpha, &table, mode))
}
