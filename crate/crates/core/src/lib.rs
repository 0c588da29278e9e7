//! Ultra-resilient superimposed codes.
//!
//! A superimposed code is a binary matrix whose columns (codewords) stay
//! distinguishable when several of them are OR-ed together. The codes built
//! here keep that property when every codeword is cyclically shifted by an
//! arbitrary amount, when a fraction of the distinguishing positions is lost,
//! and for every number of simultaneous codewords at once.
//!
//! * [`codeword`]: packed bit vectors with weights, cyclic shifts and the
//!   slipped (one-position widened) form.
//! * [`codes`]: random construction, the polynomial-time pairwise checker,
//!   a brute-force checker for small matrices and Monte-Carlo statistics.
//! * [`beeping`]: neighborhood learning and local broadcast in a beeping
//!   network where nodes wake up at arbitrary times.
//! * [`contention`]: non-adaptive contention resolution on a shared channel.

pub mod beeping;
pub mod codes;
pub mod codeword;
pub mod contention;
pub mod rational;

pub use codeword::{superposition, BitVector, CodewordError};
pub use rational::{parse_rational, Rational};
