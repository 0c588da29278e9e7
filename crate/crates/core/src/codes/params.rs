use crate::rational::{to_f64, Rational};

use super::CodesError;

/// Largest code length accepted; keeps `t` and per-column buffers addressable.
pub const MAX_LENGTH: u64 = 1 << 36;

/// Inputs of the random matrix construction plus the derived block layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionParams {
    pub n: usize,
    pub alpha: Rational,
    pub eps: Rational,
    pub c: Rational,
    pub seed: u64,
    /// Rows per block, `max(1, ceil(ln n))`.
    pub block_len: usize,
    /// `ceil(c / alpha^(2+eps) * n^2)`.
    pub block_count: usize,
    /// `block_count * block_len`.
    pub t: usize,
}

/// Metadata carried by every code matrix: enough to recompute the
/// elongation functions. `seed` is `None` for hand-built matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeHeader {
    pub n: usize,
    pub t: usize,
    pub alpha: Rational,
    pub eps: Rational,
    pub c: Rational,
    pub seed: Option<u64>,
}

/// Inclusive row indices `tau1 <= tau2` splitting a column into the upper
/// segment `[0, tau1]` and the lower segment `[tau1, tau2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElongationPair {
    pub tau1: usize,
    pub tau2: usize,
}

impl ElongationPair {
    pub fn new(tau1: usize, tau2: usize, t: usize) -> Result<Self, CodesError> {
        if tau1 > tau2 || tau2 >= t {
            return Err(CodesError::InvalidElongation { tau1, tau2, t });
        }
        Ok(ElongationPair { tau1, tau2 })
    }

    /// The whole codeword: `[0, 0]` and `[0, t-1]`.
    pub fn full(t: usize) -> Self {
        ElongationPair {
            tau1: 0,
            tau2: t - 1,
        }
    }
}

fn check_rationals(alpha: &Rational, eps: &Rational, c: &Rational) -> Result<(), CodesError> {
    let zero = Rational::from_integer(0);
    if *alpha <= zero || *alpha > Rational::from_integer(1) {
        return Err(CodesError::InvalidParams(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    if *eps <= zero {
        return Err(CodesError::InvalidParams(format!(
            "eps must be positive, got {eps}"
        )));
    }
    if *c <= zero {
        return Err(CodesError::InvalidParams(format!(
            "c must be positive, got {c}"
        )));
    }
    Ok(())
}

/// `c / alpha^(2+eps)`; exact when alpha is 1.
fn scale(alpha: &Rational, eps: &Rational, c: &Rational) -> f64 {
    if *alpha == Rational::from_integer(1) {
        to_f64(c)
    } else {
        to_f64(c) / to_f64(alpha).powf(2.0 + to_f64(eps))
    }
}

/// `floor(c/64 * k^2 * ln n)` before clamping.
pub fn raw_tau1(c: &Rational, n: usize, k: usize) -> u64 {
    let v = to_f64(c) / 64.0 * (k * k) as f64 * (n as f64).ln();
    v.floor() as u64
}

/// `floor(c/alpha^(2+eps) * k^2 * ln n)` before clamping.
pub fn raw_tau2(alpha: &Rational, eps: &Rational, c: &Rational, n: usize, k: usize) -> u64 {
    let v = scale(alpha, eps, c) * (k * k) as f64 * (n as f64).ln();
    v.floor() as u64
}

impl ConstructionParams {
    pub fn new(
        n: usize,
        alpha: Rational,
        eps: Rational,
        c: Rational,
        seed: u64,
    ) -> Result<Self, CodesError> {
        if n < 2 {
            return Err(CodesError::InvalidParams(format!(
                "n must be at least 2, got {n}"
            )));
        }
        check_rationals(&alpha, &eps, &c)?;
        let block_len = ((n as f64).ln().ceil() as usize).max(1);
        let n2 = (n as i128) * (n as i128);
        let blocks = if alpha == Rational::from_integer(1) {
            // ceil(c * n^2) exactly
            let num = *c.numer() as i128 * n2;
            let den = *c.denom() as i128;
            (num + den - 1).div_euclid(den) as f64
        } else {
            (scale(&alpha, &eps, &c) * n2 as f64).ceil()
        };
        let t = blocks * block_len as f64;
        if blocks.is_nan() || blocks < 1.0 || t > MAX_LENGTH as f64 {
            return Err(CodesError::InvalidParams(format!(
                "code length {t} is outside 1..={MAX_LENGTH}"
            )));
        }
        let block_count = blocks as usize;
        Ok(ConstructionParams {
            n,
            alpha,
            eps,
            c,
            seed,
            block_len,
            block_count,
            t: block_count * block_len,
        })
    }

    pub fn header(&self) -> CodeHeader {
        self.header_with_length(self.t)
    }

    pub fn header_with_length(&self, t: usize) -> CodeHeader {
        CodeHeader {
            n: self.n,
            t,
            alpha: self.alpha,
            eps: self.eps,
            c: self.c,
            seed: Some(self.seed),
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        ConstructionParams {
            seed,
            ..self.clone()
        }
    }

    /// Probability that row `r` holds a one: `1/sqrt(floor(r/L) + 1)`.
    pub fn bit_probability(&self, r: usize) -> Result<f64, CodesError> {
        if r >= self.t {
            return Err(CodesError::IndexOutOfRange {
                index: r,
                t: self.t,
            });
        }
        Ok(block_probability(r / self.block_len))
    }

    pub fn elongation_bounds(&self, k: usize) -> Result<ElongationPair, CodesError> {
        self.header().elongation_bounds(k)
    }
}

/// Probability of a one anywhere in block `b`.
pub fn block_probability(b: usize) -> f64 {
    1.0 / ((b + 1) as f64).sqrt()
}

impl CodeHeader {
    /// Header for a hand-built matrix.
    pub fn manual(n: usize, t: usize) -> Self {
        let one = Rational::from_integer(1);
        CodeHeader {
            n,
            t,
            alpha: one,
            eps: one,
            c: one,
            seed: None,
        }
    }

    pub fn validate(&self) -> Result<(), CodesError> {
        if self.n < 1 || self.t < 1 {
            return Err(CodesError::InvalidParams(format!(
                "matrix dimensions must be positive, got n={} t={}",
                self.n, self.t
            )));
        }
        check_rationals(&self.alpha, &self.eps, &self.c)
    }

    /// Clamped elongation pair for `k` simultaneous codewords.
    pub fn elongation_bounds(&self, k: usize) -> Result<ElongationPair, CodesError> {
        if k < 2 || k > self.n {
            return Err(CodesError::KOutOfRange { k, n: self.n });
        }
        let last = (self.t - 1) as u64;
        let tau1 = raw_tau1(&self.c, self.n, k).min(last) as usize;
        let tau2 = raw_tau2(&self.alpha, &self.eps, &self.c, self.n, k).min(last) as usize;
        // tau1 <= tau2 always: 1/64 < 1 <= 1/alpha^(2+eps)
        Ok(ElongationPair {
            tau1: tau1.min(tau2),
            tau2,
        })
    }

    pub fn raw_tau2(&self, k: usize) -> u64 {
        raw_tau2(&self.alpha, &self.eps, &self.c, self.n, k)
    }

    /// Largest `k <= n` whose unclamped `tau2` fits in `t_target`.
    pub fn max_supported_k(&self, t_target: usize) -> Result<usize, CodesError> {
        if t_target < 1 {
            return Err(CodesError::InvalidParams(
                "target length must be positive".into(),
            ));
        }
        (2..=self.n)
            .rev()
            .find(|&k| self.raw_tau2(k) <= t_target as u64)
            .ok_or(CodesError::NoSupportedK {
                t_target,
                needed: self.raw_tau2(2),
            })
    }

    /// Number of simultaneous codewords the header's elongation functions
    /// are meant for: the supported range at this length, or every `k` when
    /// even `k = 2` needs clamping.
    pub fn default_k_max(&self) -> usize {
        self.max_supported_k(self.t).unwrap_or(self.n)
    }
}

/// Elongation pair for every `k` in `2..=k_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElongationTable {
    pairs: Vec<ElongationPair>,
}

impl ElongationTable {
    pub fn from_header(header: &CodeHeader, k_max: usize) -> Result<Self, CodesError> {
        Self::from_fn(k_max, |k| header.elongation_bounds(k))
    }

    pub fn uniform(pair: ElongationPair, k_max: usize) -> Result<Self, CodesError> {
        Self::from_fn(k_max, |_| Ok(pair))
    }

    pub fn from_fn(
        k_max: usize,
        mut f: impl FnMut(usize) -> Result<ElongationPair, CodesError>,
    ) -> Result<Self, CodesError> {
        if k_max < 2 {
            return Err(CodesError::KOutOfRange { k: k_max, n: k_max });
        }
        let pairs = (2..=k_max).map(&mut f).collect::<Result<Vec<_>, _>>()?;
        Ok(ElongationTable { pairs })
    }

    pub fn k_max(&self) -> usize {
        self.pairs.len() + 1
    }

    pub fn get(&self, k: usize) -> Option<ElongationPair> {
        k.checked_sub(2).and_then(|i| self.pairs.get(i)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, ElongationPair)> + '_ {
        self.pairs.iter().enumerate().map(|(i, &p)| (i + 2, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn layout_for_small_n() {
        let p = ConstructionParams::new(8, r(1, 1), r(1, 2), r(4, 1), 7).unwrap();
        assert_eq!(p.block_len, 3);
        assert_eq!(p.block_count, 256);
        assert_eq!(p.t, 768);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ConstructionParams::new(1, r(1, 1), r(1, 2), r(1, 1), 0).is_err());
        assert!(ConstructionParams::new(4, r(0, 1), r(1, 2), r(1, 1), 0).is_err());
        assert!(ConstructionParams::new(4, r(3, 2), r(1, 2), r(1, 1), 0).is_err());
        assert!(ConstructionParams::new(4, r(1, 2), r(0, 1), r(1, 1), 0).is_err());
        assert!(ConstructionParams::new(4, r(1, 2), r(1, 2), r(-1, 1), 0).is_err());
    }

    #[test]
    fn block_probabilities() {
        // n = 20 gives L = 3
        let p = ConstructionParams::new(20, r(1, 1), r(1, 2), r(1, 1), 0).unwrap();
        assert_eq!(p.block_len, 3);
        assert_eq!(p.bit_probability(0).unwrap(), 1.0);
        assert_eq!(p.bit_probability(3).unwrap(), 1.0 / 2f64.sqrt());
        assert_eq!(p.bit_probability(8).unwrap(), 1.0 / 3f64.sqrt());
        assert!(p.bit_probability(p.t).is_err());
    }

    #[test]
    fn elongation_examples() {
        let p = ConstructionParams::new(8, r(1, 1), r(1, 2), r(64, 1), 0).unwrap();
        assert_eq!(p.elongation_bounds(2).unwrap().tau1, 8);
        for k in 2..=8 {
            let e = p.elongation_bounds(k).unwrap();
            let expect = ((k * k) as f64 * 8f64.ln()).floor() as usize;
            assert_eq!(e.tau1, expect);
        }
        assert!(p.elongation_bounds(1).is_err());
        assert!(p.elongation_bounds(9).is_err());
    }

    #[test]
    fn elongation_clamps_to_length() {
        let h = CodeHeader {
            t: 100,
            ..ConstructionParams::new(8, r(1, 1), r(1, 2), r(64, 1), 0)
                .unwrap()
                .header()
        };
        let e = h.elongation_bounds(2).unwrap();
        assert_eq!(e.tau1, 8);
        assert_eq!(e.tau2, 99);
    }

    #[test]
    fn supported_k() {
        let p = ConstructionParams::new(8, r(1, 1), r(1, 2), r(64, 1), 0).unwrap();
        let h = p.header();
        assert_eq!(h.raw_tau2(2), 532);
        assert_eq!(h.max_supported_k(p.t).unwrap(), 8);
        assert!(matches!(
            h.max_supported_k(100),
            Err(CodesError::NoSupportedK { .. })
        ));
        assert_eq!(h.max_supported_k(532).unwrap(), 2);
        assert_eq!(h.max_supported_k(1197).unwrap(), 3);
    }

    #[test]
    fn standard_length_supports_every_k() {
        for n in 2..40 {
            let p = ConstructionParams::new(n, r(1, 2), r(1, 3), r(5, 4), 0).unwrap();
            assert_eq!(p.header().max_supported_k(p.t).unwrap(), n);
        }
    }
}
