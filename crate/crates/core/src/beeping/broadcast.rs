//! Local broadcast: every node delivers a bit string to all its neighbors.
//!
//! The message of node `v` is cut into chunks of `w = ceil(log2 n)` bits.
//! Chunk `i` travels as an extended message `(v - 1, first flag, chunk)` of
//! `2w + 1` bits, read as an integer `e` and used as the id `e + 1` in a
//! universe of `2^(2w+1)` ids. In its `q`-th repetition of the expanded
//! codeword, node `v` uses the id of chunk `q mod C`, so both the codeword
//! and the framed block id change from one repetition to the next.

use std::collections::BTreeMap;

use crate::codeword::BitVector;

use super::block_id::{block_id, expand_codeword, id_width, BlockDecoder};
use super::sim::{check_inputs, BeepEvent, Engine, EventKind, WakeSchedule};
use super::{BeepCode, BeepError, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedMessage {
    pub sender: usize,
    pub first: bool,
    pub chunk: Vec<bool>,
}

impl ExtendedMessage {
    /// Id in the extended universe: the `2w + 1` bits, most significant
    /// first, plus one.
    pub fn to_id(&self) -> usize {
        let w = self.chunk.len();
        let mut e = (self.sender - 1) << (w + 1);
        e |= usize::from(self.first) << w;
        for (b, &bit) in self.chunk.iter().enumerate() {
            e |= usize::from(bit) << (w - 1 - b);
        }
        e + 1
    }

    pub fn from_id(id: usize, w: usize) -> Self {
        let e = id - 1;
        ExtendedMessage {
            sender: (e >> (w + 1)) + 1,
            first: (e >> w) & 1 == 1,
            chunk: (0..w).rev().map(|b| (e >> b) & 1 == 1).collect(),
        }
    }
}

/// `2^(2w+1)` ids: every extended message for a universe of `n` nodes.
pub fn broadcast_universe(n: usize) -> usize {
    1 << (2 * id_width(n) + 1)
}

pub fn extended_messages(
    v: usize,
    message: &[bool],
    n: usize,
) -> Result<Vec<ExtendedMessage>, BeepError> {
    if v == 0 || v > n {
        return Err(BeepError::IdOutOfRange { id: v, n });
    }
    let w = id_width(n);
    if w == 0 {
        return Err(BeepError::Message(
            "a one-id universe has no payload bits".into(),
        ));
    }
    if message.is_empty() {
        return Err(BeepError::Message(format!("node {v} has an empty message")));
    }
    Ok(message
        .chunks(w)
        .enumerate()
        .map(|(i, part)| {
            let mut chunk = part.to_vec();
            chunk.resize(w, false);
            ExtendedMessage {
                sender: v,
                first: i == 0,
                chunk,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reassembly {
    Complete(Vec<bool>),
    Incomplete,
}

/// Concatenates the payloads from the first chunk flagged as first up to,
/// not including, the next one. Without that closing chunk the cycle is not
/// known to be complete.
pub fn reassemble_message(chunks: &[ExtendedMessage]) -> Result<Reassembly, BeepError> {
    if let Some(first) = chunks.first() {
        if let Some(other) = chunks.iter().find(|c| c.sender != first.sender) {
            return Err(BeepError::MixedSenders(first.sender, other.sender));
        }
    }
    let Some(start) = chunks.iter().position(|c| c.first) else {
        return Ok(Reassembly::Incomplete);
    };
    let Some(len) = chunks[start + 1..].iter().position(|c| c.first) else {
        return Ok(Reassembly::Incomplete);
    };
    Ok(Reassembly::Complete(
        chunks[start..=start + len]
            .iter()
            .flat_map(|c| c.chunk.iter().copied())
            .collect(),
    ))
}

/// What one node got from one neighbor.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Delivery {
    /// Reassembled payload (a multiple of `w` bits; the last chunk is padded).
    pub message: Option<Vec<bool>>,
    pub completed_at: Option<u64>,
    /// Distinct sender repetitions decoded so far.
    pub chunks_seen: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BroadcastRun {
    pub events: Vec<BeepEvent>,
    /// `received[v][u]` for every node `v` and every neighbor `u` heard from.
    pub received: BTreeMap<usize, BTreeMap<usize, Delivery>>,
    pub period: u64,
    /// Chunks per message, per node.
    pub chunk_counts: BTreeMap<usize, usize>,
}

impl BroadcastRun {
    /// True when every node reassembled every neighbor's message.
    pub fn complete(&self, g: &Graph) -> bool {
        g.nodes().all(|v| {
            g.neighbors(v).all(|u| {
                self.received
                    .get(&v)
                    .and_then(|m| m.get(&u))
                    .is_some_and(|d| d.message.is_some())
            })
        })
    }
}

/// One decoded sender repetition, with every period start (receiver's
/// clock) consistent with all decodes merged into it.
#[derive(Debug, Clone)]
struct Entry {
    msg: ExtendedMessage,
    starts: Vec<i64>,
}

/// Groups the decodes of one sender into repetitions. A decode at round `g`
/// of id `x` places the sender's repetition start at `g + 1 - L - i*L` for
/// some one `i` of codeword `x`; repeated decodes of the same id belong to
/// the same repetition when their candidate starts overlap and not to the
/// next one, whose starts are shifted by one period.
#[derive(Debug, Clone, Default)]
struct SenderTrack {
    entries: Vec<Entry>,
}

fn intersect(a: &[i64], b: &[i64], offset: i64) -> Vec<i64> {
    a.iter()
        .copied()
        .filter(|x| b.binary_search(&(x + offset)).is_ok())
        .collect()
}

impl SenderTrack {
    /// Returns true when a new repetition was appended.
    fn add(&mut self, msg: ExtendedMessage, starts: Vec<i64>, period: i64) -> bool {
        if let Some(last) = self.entries.last_mut() {
            if last.msg == msg {
                let same = intersect(&starts, &last.starts, 0);
                let next = intersect(&starts, &last.starts, -period);
                match (same.is_empty(), next.is_empty()) {
                    (false, true) => {
                        last.starts = same;
                        return false;
                    }
                    (true, false) => {
                        self.entries.push(Entry { msg, starts: next });
                        return true;
                    }
                    // ambiguous: keep the earlier repetition
                    (false, false) => return false,
                    (true, true) => {}
                }
            }
        }
        self.entries.push(Entry { msg, starts });
        true
    }

    fn adjacent(&self, a: usize, b: usize, period: i64) -> bool {
        !intersect(&self.entries[a].starts, &self.entries[b].starts, period).is_empty()
    }

    /// First run `first, rest..., first` of consecutive repetitions.
    fn message(&self, period: i64) -> Option<Vec<bool>> {
        let e = &self.entries;
        for a in (0..e.len()).filter(|&a| e[a].msg.first) {
            let mut b = a + 1;
            while b < e.len() && !e[b].msg.first && self.adjacent(b - 1, b, period) {
                b += 1;
            }
            if b < e.len() && e[b].msg.first && self.adjacent(b - 1, b, period) {
                let run: Vec<_> = e[a..=b].iter().map(|x| x.msg.clone()).collect();
                if let Ok(Reassembly::Complete(bits)) = reassemble_message(&run) {
                    return Some(bits);
                }
            }
        }
        None
    }
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Runs local broadcast. The code must cover the extended universe of
/// [`broadcast_universe`]`(g.n_ids())` ids; node `v`'s message is
/// `messages[v]`.
pub fn simulate_local_broadcast(
    g: &Graph,
    sched: &WakeSchedule,
    code: &BeepCode,
    messages: &BTreeMap<usize, Vec<bool>>,
    horizon: u64,
) -> Result<BroadcastRun, BeepError> {
    let n = g.n_ids();
    let universe = broadcast_universe(n);
    check_inputs(g, code, universe, horizon)?;
    let m = code.matrix();
    let w = id_width(n);
    let decoder = BlockDecoder::new(universe);
    let block = decoder.len();
    let period = (m.t() * block) as u64;

    let mut patterns = Vec::new();
    let mut chunk_counts = BTreeMap::new();
    for v in g.nodes() {
        let msg = messages
            .get(&v)
            .ok_or_else(|| BeepError::Message(format!("node {v} has no message")))?;
        let ext = extended_messages(v, msg, n)?;
        chunk_counts.insert(v, ext.len());
        patterns.push(
            ext.iter()
                .map(|x| {
                    let id = x.to_id();
                    Ok(expand_codeword(m.column(id - 1), &block_id(id, universe)?))
                })
                .collect::<Result<Vec<BitVector>, BeepError>>()?,
        );
    }
    let mut engine = Engine::new(g, sched, patterns, period, decoder)?;
    let ones: Vec<Vec<i64>> = m
        .columns()
        .iter()
        .map(|c| c.iter_ones().map(|i| i as i64).collect())
        .collect();

    let mut events = Vec::new();
    let mut tracks: BTreeMap<(usize, usize), SenderTrack> = BTreeMap::new();
    let mut received: BTreeMap<usize, BTreeMap<usize, Delivery>> =
        g.nodes().map(|v| (v, BTreeMap::new())).collect();
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
            let msg = ExtendedMessage::from_id(id, w);
            let u = msg.sender;
            if u == v {
                continue;
            }
            if !g.has_edge(v, u) {
                return Err(BeepError::SafetyViolation {
                    round,
                    node: v,
                    id: u,
                });
            }
            let block_start = round as i64 + 1 - block as i64;
            let mut starts: Vec<i64> = ones[id - 1]
                .iter()
                .map(|&i| block_start - i * block as i64)
                .collect();
            starts.sort_unstable();
            let track = tracks.entry((v, u)).or_default();
            if !track.add(msg.clone(), starts, period as i64) {
                continue;
            }
            events.push(BeepEvent {
                round,
                node: v,
                kind: EventKind::Chunk {
                    sender: u,
                    first: msg.first,
                    chunk: bit_string(&msg.chunk),
                },
            });
            let delivery = received
                .get_mut(&v)
                .expect("every node has a map")
                .entry(u)
                .or_default();
            delivery.chunks_seen += 1;
            if delivery.message.is_none() {
                if let Some(bits) = track.message(period as i64) {
                    events.push(BeepEvent {
                        round,
                        node: v,
                        kind: EventKind::Message {
                            sender: u,
                            bits: bit_string(&bits),
                        },
                    });
                    delivery.message = Some(bits);
                    delivery.completed_at = Some(round);
                }
            }
        }
    }
    Ok(BroadcastRun {
        events,
        received,
        period,
        chunk_counts,
    })
}
