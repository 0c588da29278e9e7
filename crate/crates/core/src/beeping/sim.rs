use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::codeword::BitVector;

use super::block_id::{block_id, expand_codeword, BlockDecoder};
use super::{BeepCode, BeepError, Graph};

/// Global wake-up round of every node.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WakeSchedule(BTreeMap<usize, u64>);

impl WakeSchedule {
    pub fn new(wake: BTreeMap<usize, u64>) -> Self {
        WakeSchedule(wake)
    }

    pub fn uniform(g: &Graph, round: u64) -> Self {
        WakeSchedule(g.nodes().map(|v| (v, round)).collect())
    }

    pub fn get(&self, v: usize) -> Option<u64> {
        self.0.get(&v).copied()
    }

    pub fn set(&mut self, v: usize, round: u64) {
        self.0.insert(v, round);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.0.iter().map(|(&v, &r)| (v, r))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventKind {
    Wake,
    /// A neighbor id decoded for the first time.
    Learn(usize),
    /// Local broadcast: an extended message from `sender` was decoded.
    Chunk {
        sender: usize,
        first: bool,
        chunk: String,
    },
    /// Local broadcast: the full message of `sender` was reassembled.
    Message {
        sender: usize,
        bits: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeepEvent {
    pub round: u64,
    pub node: usize,
    pub kind: EventKind,
}

impl fmt::Display for BeepEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},", self.round, self.node)?;
        match &self.kind {
            EventKind::Wake => write!(f, "wake,"),
            EventKind::Learn(id) => write!(f, "learn,{id}"),
            EventKind::Chunk {
                sender,
                first,
                chunk,
            } => write!(f, "chunk,{sender}:{}:{chunk}", u8::from(*first)),
            EventKind::Message { sender, bits } => write!(f, "message,{sender}:{bits}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearningRun {
    pub events: Vec<BeepEvent>,
    /// `(round, id)` pairs in the order ids were learned.
    pub learned: BTreeMap<usize, Vec<(u64, usize)>>,
    /// Rounds per repetition of the expanded codeword.
    pub period: u64,
}

impl LearningRun {
    pub fn learned_set(&self, v: usize) -> BTreeSet<usize> {
        self.learned
            .get(&v)
            .into_iter()
            .flatten()
            .map(|&(_, id)| id)
            .collect()
    }

    pub fn learned_at(&self, v: usize, id: usize) -> Option<u64> {
        self.learned
            .get(&v)?
            .iter()
            .find(|&&(_, x)| x == id)
            .map(|&(r, _)| r)
    }
}

/// Synchronous round loop shared by both protocols. Node `x` (by index)
/// beeps in local round `l` iff bit `l mod period` of
/// `patterns[x][(l / period) mod patterns[x].len()]` is one.
pub(crate) struct Engine {
    pub(crate) ids: Vec<usize>,
    wake: Vec<u64>,
    neighbors: Vec<Vec<usize>>,
    patterns: Vec<Vec<BitVector>>,
    pub(crate) period: u64,
    record: Vec<u128>,
    beeped: Vec<bool>,
    decoder: BlockDecoder,
}

impl Engine {
    pub(crate) fn new(
        g: &Graph,
        sched: &WakeSchedule,
        patterns: Vec<Vec<BitVector>>,
        period: u64,
        decoder: BlockDecoder,
    ) -> Result<Self, BeepError> {
        let ids: Vec<usize> = g.nodes().collect();
        let index: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let wake = ids
            .iter()
            .map(|&v| sched.get(v).ok_or(BeepError::MissingWake(v)))
            .collect::<Result<Vec<_>, _>>()?;
        let neighbors = ids
            .iter()
            .map(|&v| g.neighbors(v).map(|u| index[&u]).collect())
            .collect();
        Ok(Engine {
            record: vec![0; ids.len()],
            beeped: vec![false; ids.len()],
            ids,
            wake,
            neighbors,
            patterns,
            period,
            decoder,
        })
    }

    pub(crate) fn wake(&self, x: usize) -> u64 {
        self.wake[x]
    }

    /// Advances one global round and returns `(node index, decoded id)` for
    /// every awake node whose trailing window is a valid block id.
    pub(crate) fn step(&mut self, round: u64, decoded: &mut Vec<(usize, usize)>) {
        decoded.clear();
        for x in 0..self.ids.len() {
            self.beeped[x] = round >= self.wake[x] && {
                let local = round - self.wake[x];
                let pats = &self.patterns[x];
                let pat = &pats[((local / self.period) % pats.len() as u64) as usize];
                pat.get((local % self.period) as usize)
            };
        }
        for x in 0..self.ids.len() {
            if round < self.wake[x] {
                continue;
            }
            let heard = self.beeped[x] || self.neighbors[x].iter().any(|&y| self.beeped[y]);
            self.record[x] = (self.record[x] << 1) | u128::from(heard);
            if let Some(id) = self.decoder.decode(self.record[x]) {
                decoded.push((x, id));
            }
        }
    }
}

pub(crate) fn check_inputs(
    g: &Graph,
    code: &BeepCode,
    universe: usize,
    horizon: u64,
) -> Result<(), BeepError> {
    if horizon == 0 {
        return Err(BeepError::EmptyHorizon);
    }
    let columns = code.matrix().n();
    if columns < universe {
        return Err(BeepError::CodeTooNarrow {
            columns,
            needed: universe,
        });
    }
    let needed = g.max_degree() + 1;
    if code.capacity() < needed {
        return Err(BeepError::CodeTooShort {
            capacity: code.capacity(),
            needed,
        });
    }
    if !BlockDecoder::fits(universe) {
        return Err(BeepError::BlockTooLong {
            len: super::block_len(universe),
        });
    }
    Ok(())
}

/// Runs neighborhood learning for `horizon` global rounds. Ids are taken
/// from `1..=g.n_ids()`; node `v` uses column `v - 1`. Decoding a
/// non-neighbor aborts the run with [`BeepError::SafetyViolation`].
pub fn simulate_neighborhood_learning(
    g: &Graph,
    sched: &WakeSchedule,
    code: &BeepCode,
    horizon: u64,
) -> Result<LearningRun, BeepError> {
    let n = g.n_ids();
    check_inputs(g, code, n, horizon)?;
    let m = code.matrix();
    let decoder = BlockDecoder::new(n);
    let period = (m.t() * decoder.len()) as u64;
    let patterns = g
        .nodes()
        .map(|v| Ok(vec![expand_codeword(m.column(v - 1), &block_id(v, n)?)]))
        .collect::<Result<Vec<_>, BeepError>>()?;
    let mut engine = Engine::new(g, sched, patterns, period, decoder)?;

    let mut events = Vec::new();
    let mut learned: BTreeMap<usize, Vec<(u64, usize)>> =
        engine.ids.iter().map(|&v| (v, Vec::new())).collect();
    let mut decoded = Vec::new();
    for round in 0..horizon {
        for x in 0..engine.ids.len() {
            if engine.wake(x) == round {
                events.push(BeepEvent {
                    round,
                    node: engine.ids[x],
                    kind: EventKind::Wake,
                });
            }
        }
        engine.step(round, &mut decoded);
        for &(x, id) in &decoded {
            let v = engine.ids[x];
            if id == v {
                continue;
            }
            if !g.has_edge(v, id) {
                return Err(BeepError::SafetyViolation { round, node: v, id });
            }
            let list = learned.get_mut(&v).expect("every node has a list");
            if list.iter().all(|&(_, u)| u != id) {
                list.push((round, id));
                events.push(BeepEvent {
                    round,
                    node: v,
                    kind: EventKind::Learn(id),
                });
            }
        }
    }
    Ok(LearningRun {
        events,
        learned,
        period,
    })
}
