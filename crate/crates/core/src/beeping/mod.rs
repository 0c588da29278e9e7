//! Neighborhood learning and local broadcast in the beeping model.
//!
//! Nodes wake up at arbitrary rounds and never learn the global clock. While
//! awake, a node beeps its codeword with every one replaced by its framed
//! block id, repeating the pattern forever. Every round it records whether it
//! beeped or heard a neighbor beep, and decodes the most recent block-length
//! window of that record.

mod block_id;
mod broadcast;
mod code;
mod graph;
mod sim;
mod sweep;

use thiserror::Error;

pub use block_id::{block_id, block_len, decode_block_id, expand_codeword, id_width};
pub use broadcast::{
    broadcast_universe, extended_messages, reassemble_message, simulate_local_broadcast,
    BroadcastRun, Delivery, ExtendedMessage, Reassembly,
};
pub use code::BeepCode;
pub use graph::Graph;
pub use sim::{simulate_neighborhood_learning, BeepEvent, EventKind, LearningRun, WakeSchedule};
pub use sweep::{phase_space_sweep, InclusionWitness, PhaseSweep, SafetyWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BeepError {
    #[error("id {id} is outside 1..={n}")]
    IdOutOfRange { id: usize, n: usize },
    #[error("invalid graph: {0}")]
    Graph(String),
    #[error("node {0} has no wake-up round")]
    MissingWake(usize),
    #[error("the code has {columns} columns but {needed} ids are in use")]
    CodeTooNarrow { columns: usize, needed: usize },
    #[error(
        "code too short: it isolates up to {capacity} simultaneous codewords, \
         the graph needs {needed} (max degree + 1)"
    )]
    CodeTooShort { capacity: usize, needed: usize },
    #[error("block ids of {len} bits exceed the 128-bit record window")]
    BlockTooLong { len: usize },
    #[error("horizon must be at least one round")]
    EmptyHorizon,
    #[error("safety violated: node {node} decoded non-neighbor {id} in round {round}")]
    SafetyViolation { round: u64, node: usize, id: usize },
    #[error("invalid message: {0}")]
    Message(String),
    #[error("chunks from different senders ({0} and {1})")]
    MixedSenders(usize, usize),
}
