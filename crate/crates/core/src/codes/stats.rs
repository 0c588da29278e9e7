//! Monte-Carlo estimates of the segment weights of freshly sampled columns.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codeword::normalize_shift;
use crate::rational::{to_f64, Rational};

use super::params::block_probability;
use super::{CodesError, ConstructionParams, ElongationPair};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentStats {
    pub trials: usize,
    pub bounds: ElongationPair,
    /// Mean of `|c_j[0, tau1]|`.
    pub mean_upper: Rational,
    /// Mean of `|c_j[tau1, tau2]|`.
    pub mean_lower: Rational,
    /// Mean of `|(c_j & slipped(c_j' shifted by i))[tau1, tau2]|`.
    pub mean_collision: Rational,
}

/// Samples `trials` independent column pairs and averages the upper segment
/// weight, the lower segment weight, and the slipped collision count at
/// `shift`. Trial `x` draws from the ChaCha8 stream `x` of `params.seed`,
/// so the result does not depend on how trials are spread over threads.
pub fn empirical_segment_stats(
    params: &ConstructionParams,
    k: usize,
    shift: i64,
    trials: usize,
) -> Result<SegmentStats, CodesError> {
    if trials == 0 {
        return Err(CodesError::ZeroTrials);
    }
    let e = params.elongation_bounds(k)?;
    let t = params.t;
    let shift = normalize_shift(shift, t);
    let lower_len = e.tau2 - e.tau1 + 1;
    // partner rows touched by the slipped window over [tau1, tau2]
    let partner_len = (lower_len + 2).min(t);
    let partner_start = (e.tau1 + shift + t - 1) % t;
    let prob = |r: usize| block_probability(r / params.block_len);

    let (upper, lower, collision) = (0..trials)
        .into_par_iter()
        .map_init(
            || (vec![false; e.tau2 + 1], vec![false; t]),
            |(own, partner), trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
                rng.set_stream(trial as u64);
                for (r, bit) in own.iter_mut().enumerate() {
                    *bit = rng.gen::<f64>() < prob(r);
                }
                for o in 0..partner_len {
                    let r = (partner_start + o) % t;
                    partner[r] = rng.gen::<f64>() < prob(r);
                }
                let upper = own[..=e.tau1].iter().filter(|&&b| b).count() as i64;
                let lower = own[e.tau1..].iter().filter(|&&b| b).count() as i64;
                let collision = (e.tau1..=e.tau2)
                    .filter(|&r| own[r] && (0..3).any(|d| partner[(r + shift + t + d - 1) % t]))
                    .count() as i64;
                (upper, lower, collision)
            },
        )
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));

    let n = trials as i64;
    Ok(SegmentStats {
        trials,
        bounds: e,
        mean_upper: Rational::new(upper, n),
        mean_lower: Rational::new(lower, n),
        mean_collision: Rational::new(collision, n),
    })
}

/// Open interval of reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.low < x && x < self.high
    }
}

/// Analytic ranges of the expected segment weights, in units of
/// `sqrt(c) * k * ln n`: `(1/8, 1/2)` for the upper segment and
/// `(a - 1/8, 4a)` with `a = alpha^-(1 + eps/2)` for the lower one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationBounds {
    pub upper: Interval,
    pub lower: Interval,
}

pub fn expectation_bounds(params: &ConstructionParams, k: usize) -> ExpectationBounds {
    let unit = to_f64(&params.c).sqrt() * k as f64 * (params.n as f64).ln();
    let a = to_f64(&params.alpha).powf(-(1.0 + to_f64(&params.eps) / 2.0));
    ExpectationBounds {
        upper: Interval {
            low: unit / 8.0,
            high: unit / 2.0,
        },
        lower: Interval {
            low: (a - 0.125) * unit,
            high: 4.0 * a * unit,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, c: i64) -> ConstructionParams {
        ConstructionParams::new(
            n,
            Rational::from_integer(1),
            Rational::new(1, 2),
            Rational::from_integer(c),
            5,
        )
        .unwrap()
    }

    #[test]
    fn zero_trials_rejected() {
        assert_eq!(
            empirical_segment_stats(&params(8, 1), 2, 0, 0),
            Err(CodesError::ZeroTrials)
        );
    }

    #[test]
    fn first_block_is_deterministic() {
        // c = 1, n = 8: tau1 = floor(4 ln 8 / 64) = 0, inside block 0
        let s = empirical_segment_stats(&params(8, 1), 2, 3, 50).unwrap();
        assert_eq!(s.bounds.tau1, 0);
        assert_eq!(s.mean_upper, Rational::from_integer(1));
    }

    #[test]
    fn repeatable() {
        let p = params(8, 2);
        let a = empirical_segment_stats(&p, 3, -7, 200).unwrap();
        assert_eq!(a, empirical_segment_stats(&p, 3, -7, 200).unwrap());
        assert_eq!(
            a,
            empirical_segment_stats(&p, 3, p.t as i64 - 7, 200).unwrap()
        );
    }
}
