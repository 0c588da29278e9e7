//! Exact rationals used for every inequality verdict.

use num_rational::Ratio;
use thiserror::Error;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalError {
    #[error("expected a rational of the form p/q, got {0:?}")]
    Syntax(String),
    #[error("denominator must be positive in {0:?}")]
    Denominator(String),
}

/// Parses `p/q` (q > 0) or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational, RationalError> {
    let s = s.trim();
    let syntax = || RationalError::Syntax(s.to_string());
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (
            p.trim().parse::<i64>().map_err(|_| syntax())?,
            q.trim().parse::<i64>().map_err(|_| syntax())?,
        ),
        None => (s.parse::<i64>().map_err(|_| syntax())?, 1),
    };
    if q <= 0 {
        return Err(RationalError::Denominator(s.to_string()));
    }
    Ok(Rational::new(p, q))
}

/// `p/q` in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `floor(a / b)` for `b > 0`.
pub(crate) fn floor_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}
