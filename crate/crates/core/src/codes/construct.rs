use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codeword::BitVector;

use super::check::{check_cbp, CheckMode};
use super::params::block_probability;
use super::{CodeMatrix, CodesError, ConstructionParams, ElongationTable};

/// Result of the Las Vegas loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub matrix: CodeMatrix,
    /// Number of sampled matrices, including the accepted one.
    pub iterations: usize,
    /// Largest number of simultaneous codewords the matrix was checked for.
    pub delta: usize,
}

/// Draws a `t x n` matrix with independent bits; row `r` is one with
/// probability `1/sqrt(floor(r/L) + 1)`. Bits are drawn column by column
/// from a ChaCha8 stream seeded with `params.seed`.
pub fn sample_matrix(params: &ConstructionParams) -> CodeMatrix {
    sample_matrix_with_length(params, params.t)
}

pub fn sample_matrix_with_length(params: &ConstructionParams, t: usize) -> CodeMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let blocks = t.div_ceil(params.block_len);
    let probs: Vec<f64> = (0..blocks).map(block_probability).collect();
    let columns = (0..params.n)
        .map(|_| {
            let mut col = BitVector::zeros(t);
            for r in 0..t {
                if rng.gen::<f64>() < probs[r / params.block_len] {
                    col.set(r, true);
                }
            }
            col
        })
        .collect();
    CodeMatrix::new(params.header_with_length(t), columns).expect("dimensions match the header")
}

/// Samples matrices with seeds `seed, seed+1, ...` until one satisfies the
/// pairwise condition for every `k` in `2..=n`. The returned header carries
/// the seed of the accepted sample, so the file regenerates from its header.
pub fn construct_ursc(
    params: &ConstructionParams,
    max_iters: usize,
) -> Result<Construction, CodesError> {
    run(params, params.t, params.n, max_iters)
}

/// Same loop with the code length fixed to `t_target`; the matrix is checked
/// for every `k` up to the largest one whose elongation fits.
pub fn construct_ursc_with_length(
    params: &ConstructionParams,
    t_target: usize,
    max_iters: usize,
) -> Result<Construction, CodesError> {
    let delta = params
        .header_with_length(t_target)
        .max_supported_k(t_target)?;
    run(params, t_target, delta, max_iters)
}

fn run(
    params: &ConstructionParams,
    t: usize,
    delta: usize,
    max_iters: usize,
) -> Result<Construction, CodesError> {
    if max_iters == 0 {
        return Err(CodesError::InvalidParams(
            "max_iters must be at least 1".into(),
        ));
    }
    let table = ElongationTable::from_header(&params.header_with_length(t), delta)?;
    let mut last = None;
    for iter in 0..max_iters {
        let attempt = params.with_seed(params.seed.wrapping_add(iter as u64));
        let matrix = sample_matrix_with_length(&attempt, t);
        let report = check_cbp(&matrix, params.alpha, &table, CheckMode::FailFast);
        if report.passed {
            return Ok(Construction {
                matrix,
                iterations: iter + 1,
                delta,
            });
        }
        last = Some(report);
    }
    Err(CodesError::IterationsExhausted {
        iterations: max_iters,
        last_report: Box::new(last.expect("at least one iteration ran")),
    })
}
