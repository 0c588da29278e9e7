//! Non-adaptive contention resolution on a multiple-access channel.
//!
//! Station `v` owns column `v - 1` of a code matrix, repeated `R` times, and
//! transmits in global round `delta(v) + r` iff bit `r` of that vector is
//! one. A round with exactly one transmitter is a success for it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::codes::{CodeMatrix, CodesError};
use crate::codeword::BitVector;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContentionError {
    #[error("the repetition count needs alpha < 1, got {0}")]
    AlphaOne(Rational),
    #[error("every column must have a one in its lower segment (weight floor is 0)")]
    DegenerateCode,
    #[error("station {id} is outside 1..={n}")]
    StationOutOfRange { id: usize, n: usize },
    #[error("station {0} has no transmission vector")]
    MissingVector(usize),
    #[error("at least one station is required")]
    NoStations,
    #[error("the success target s must be at least 1")]
    ZeroTarget,
    #[error("repetition count must be at least 1")]
    ZeroRepetitions,
    #[error("{configurations} instances exceed the budget of {budget}")]
    BudgetExceeded { configurations: u128, budget: u128 },
    #[error(transparent)]
    Codes(#[from] CodesError),
}

/// Stations `T`, activation rounds `delta` and the success target `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrInstance {
    pub n: usize,
    pub delta: BTreeMap<usize, u64>,
    pub s: usize,
}

impl CrInstance {
    pub fn new(n: usize, delta: BTreeMap<usize, u64>, s: usize) -> Result<Self, ContentionError> {
        if delta.is_empty() {
            return Err(ContentionError::NoStations);
        }
        if s == 0 {
            return Err(ContentionError::ZeroTarget);
        }
        if let Some(&id) = delta.keys().find(|&&id| id == 0 || id > n) {
            return Err(ContentionError::StationOutOfRange { id, n });
        }
        Ok(CrInstance { n, delta, s })
    }

    pub fn stations(&self) -> impl Iterator<Item = usize> + '_ {
        self.delta.keys().copied()
    }

    pub fn k(&self) -> usize {
        self.delta.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransmissionVector {
    pub station: usize,
    pub bits: BitVector,
    pub repetitions: usize,
}

/// Minimum over columns of the weight on `[tau1(n,n), tau2(n,n)]`.
pub fn weight_floor(m: &CodeMatrix) -> Result<usize, ContentionError> {
    let e = m.header().elongation_bounds(m.n())?;
    Ok(m.columns()
        .iter()
        .map(|c| {
            c.interval_weight(e.tau1, e.tau2)
                .expect("bounds inside the code")
        })
        .min()
        .unwrap_or(0))
}

/// `R = ceil(s / ((1 - alpha) * weight_floor))`.
pub fn repetition_count(
    m: &CodeMatrix,
    s: usize,
    alpha: Rational,
) -> Result<usize, ContentionError> {
    if s == 0 {
        return Err(ContentionError::ZeroTarget);
    }
    let one = Rational::from_integer(1);
    if alpha >= one {
        return Err(ContentionError::AlphaOne(alpha));
    }
    let floor = weight_floor(m)?;
    if floor == 0 {
        return Err(ContentionError::DegenerateCode);
    }
    let per_copy = (one - alpha) * Rational::from_integer(floor as i64);
    let r = (Rational::from_integer(s as i64) / per_copy).ceil();
    Ok((*r.numer()).max(1) as usize)
}

pub fn transmission_vector(
    m: &CodeMatrix,
    v: usize,
    s: usize,
    alpha: Rational,
) -> Result<TransmissionVector, ContentionError> {
    let r = repetition_count(m, s, alpha)?;
    repeated_vector(m, v, r)
}

/// Column `v - 1` concatenated `repetitions` times.
pub fn repeated_vector(
    m: &CodeMatrix,
    v: usize,
    repetitions: usize,
) -> Result<TransmissionVector, ContentionError> {
    if v == 0 || v > m.n() {
        return Err(ContentionError::StationOutOfRange { id: v, n: m.n() });
    }
    if repetitions == 0 {
        return Err(ContentionError::ZeroRepetitions);
    }
    Ok(TransmissionVector {
        station: v,
        bits: m.column(v - 1).repeat(repetitions),
        repetitions,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Silence,
    Success(usize),
    Collision(Vec<usize>),
}

impl Outcome {
    pub fn from_transmitters(mut ids: Vec<usize>) -> Self {
        match ids.len() {
            0 => Outcome::Silence,
            1 => Outcome::Success(ids[0]),
            _ => {
                ids.sort_unstable();
                Outcome::Collision(ids)
            }
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Silence => write!(f, "silence,"),
            Outcome::Success(v) => write!(f, "success,{v}"),
            Outcome::Collision(ids) => {
                let ids: Vec<String> = ids.iter().map(ToString::to_string).collect();
                write!(f, "collision,{}", ids.join(" "))
            }
        }
    }
}

/// Outcome of every global round in `0..horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundLog {
    pub outcomes: Vec<Outcome>,
}

impl RoundLog {
    /// Non-silent rounds as `round,outcome,ids` lines.
    pub fn lines(&self) -> impl Iterator<Item = String> + '_ {
        self.outcomes
            .iter()
            .enumerate()
            .filter(|(_, o)| **o != Outcome::Silence)
            .map(|(r, o)| format!("{r},{o}"))
    }
}

pub fn simulate_channel(
    inst: &CrInstance,
    vectors: &BTreeMap<usize, TransmissionVector>,
    horizon: u64,
) -> Result<RoundLog, ContentionError> {
    let stations: Vec<(usize, u64, &BitVector)> = inst
        .delta
        .iter()
        .map(|(&v, &d)| {
            vectors
                .get(&v)
                .map(|tv| (v, d, &tv.bits))
                .ok_or(ContentionError::MissingVector(v))
        })
        .collect::<Result<_, _>>()?;
    let outcomes = (0..horizon)
        .map(|round| {
            let ids = stations
                .iter()
                .filter(|&&(_, d, bits)| {
                    round >= d && round - d < bits.len() as u64 && bits.get((round - d) as usize)
                })
                .map(|&(v, _, _)| v)
                .collect();
            Outcome::from_transmitters(ids)
        })
        .collect();
    Ok(RoundLog { outcomes })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationLatency {
    /// Local rounds (global round minus activation) of every success.
    pub successes: Vec<u64>,
    /// Local round of the `s`-th success.
    pub latency_to_s: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatencyReport {
    pub stations: BTreeMap<usize, StationLatency>,
}

impl LatencyReport {
    pub fn all_reached(&self) -> bool {
        self.stations.values().all(|s| s.latency_to_s.is_some())
    }
}

pub fn latency_report(log: &RoundLog, inst: &CrInstance) -> LatencyReport {
    let mut stations: BTreeMap<usize, StationLatency> = inst
        .stations()
        .map(|v| {
            (
                v,
                StationLatency {
                    successes: Vec::new(),
                    latency_to_s: None,
                },
            )
        })
        .collect();
    for (round, o) in log.outcomes.iter().enumerate() {
        if let Outcome::Success(v) = o {
            if let Some(st) = stations.get_mut(v) {
                st.successes.push(round as u64 - inst.delta[v]);
            }
        }
    }
    for st in stations.values_mut() {
        st.latency_to_s = st.successes.get(inst.s - 1).copied();
    }
    LatencyReport { stations }
}

/// How stations derive their transmission vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrProtocol {
    pub repetitions: usize,
}

impl CrProtocol {
    /// Repetition count from the code's weight floor and `alpha < 1`.
    pub fn from_alpha(m: &CodeMatrix, s: usize, alpha: Rational) -> Result<Self, ContentionError> {
        Ok(CrProtocol {
            repetitions: repetition_count(m, s, alpha)?,
        })
    }

    pub fn forced(repetitions: usize) -> Result<Self, ContentionError> {
        if repetitions == 0 {
            return Err(ContentionError::ZeroRepetitions);
        }
        Ok(CrProtocol { repetitions })
    }

    pub fn vectors(
        &self,
        m: &CodeMatrix,
        stations: impl IntoIterator<Item = usize>,
    ) -> Result<BTreeMap<usize, TransmissionVector>, ContentionError> {
        stations
            .into_iter()
            .map(|v| Ok((v, repeated_vector(m, v, self.repetitions)?)))
            .collect()
    }

    /// Local rounds within which every station must reach its target:
    /// `tau2(n, k) + 1` when a single copy is used and the code's elongation
    /// covers `k` stations, otherwise the full vector length `t * R`.
    pub fn default_horizon(&self, m: &CodeMatrix, k: usize) -> u64 {
        let h = m.header();
        let k = k.max(2);
        let full = (m.t() * self.repetitions) as u64;
        if self.repetitions == 1 && k <= h.n && h.max_supported_k(m.t()).is_ok_and(|d| d >= k) {
            h.elongation_bounds(k).map_or(full, |e| e.tau2 as u64 + 1)
        } else {
            full
        }
    }
}

/// A station that missed its target in some instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrCounterexample {
    pub delta: BTreeMap<usize, u64>,
    pub station: usize,
    pub successes: usize,
    pub horizon: u64,
}

/// Runs the protocol with its default horizon and returns the latency report.
pub fn run_instance(
    m: &CodeMatrix,
    protocol: &CrProtocol,
    inst: &CrInstance,
) -> Result<(RoundLog, LatencyReport, u64), ContentionError> {
    let vectors = protocol.vectors(m, inst.stations())?;
    let horizon = protocol.default_horizon(m, inst.k());
    let last = inst.delta.values().max().copied().unwrap_or(0);
    let log = simulate_channel(inst, &vectors, last + horizon)?;
    let mut report = latency_report(&log, inst);
    for st in report.stations.values_mut() {
        st.successes.retain(|&r| r < horizon);
        st.latency_to_s = st.successes.get(inst.s - 1).copied();
    }
    Ok((log, report, horizon))
}

/// Every station set of size `1..=k_max` and every activation vector in
/// `[0, offset_bound)^|T|`; returns the first instance (by size, station
/// set, then activation tuple) where a station misses `s` successes within
/// the default horizon.
pub fn exhaustive_cr_check(
    m: &CodeMatrix,
    protocol: &CrProtocol,
    k_max: usize,
    s: usize,
    offset_bound: u64,
    budget: u128,
) -> Result<Option<CrCounterexample>, ContentionError> {
    if s == 0 {
        return Err(ContentionError::ZeroTarget);
    }
    let n = m.n();
    let k_max = k_max.min(n);
    let configurations = (1..=k_max).fold(0u128, |acc, k| {
        acc.saturating_add(
            binomial(n, k).saturating_mul((offset_bound as u128).saturating_pow(k as u32)),
        )
    });
    if configurations > budget {
        return Err(ContentionError::BudgetExceeded {
            configurations,
            budget,
        });
    }
    for k in 1..=k_max {
        let sets = subsets(n, k);
        let found = sets.par_iter().find_map_first(|set| {
            let mut offsets = vec![0u64; k];
            loop {
                let delta: BTreeMap<usize, u64> = set
                    .iter()
                    .map(|&j| j + 1)
                    .zip(offsets.iter().copied())
                    .collect();
                let inst = CrInstance { n, delta, s };
                let (_, report, horizon) = match run_instance(m, protocol, &inst) {
                    Ok(x) => x,
                    Err(e) => return Some(Err(e)),
                };
                if let Some((&station, st)) = report
                    .stations
                    .iter()
                    .find(|(_, st)| st.latency_to_s.is_none())
                {
                    return Some(Ok(CrCounterexample {
                        delta: inst.delta,
                        station,
                        successes: st.successes.len(),
                        horizon,
                    }));
                }
                // next offset tuple in lexicographic order
                let mut pos = k;
                loop {
                    if pos == 0 {
                        return None;
                    }
                    pos -= 1;
                    offsets[pos] += 1;
                    if offsets[pos] < offset_bound {
                        break;
                    }
                    offsets[pos] = 0;
                }
            }
        });
        if let Some(result) = found {
            return result.map(Some);
        }
    }
    Ok(None)
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn subsets(n: usize, k: usize) -> Vec<BTreeSet<usize>> {
    (0..1u64 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| {
            (0..n)
                .filter(|&b| m >> b & 1 == 1)
                .collect::<BTreeSet<usize>>()
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}
