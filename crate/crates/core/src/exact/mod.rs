//! Exact arithmetic: rationals, polynomials in the parameter `eps`, Laurent
//! polynomials in `x`, bivariate polynomials and fractions in `(x, z)`, and
//! truncated Laurent series in `z`.

mod bivar;
mod eps;
mod laurent;
mod series;
mod xz;

pub use bivar::BivarPoly;
pub use eps::EpsPoly;
pub use laurent::XLaurent;
pub use series::{ZSeries, DEFAULT_SERIES_ORDER};
pub use xz::{XZFraction, XZPoly};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// The base field: canonical arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;

/// Shorthand for `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `n` or `n/d`.
pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n` or `n/d` (optionally signed) into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// `gcd(num, den) = 1` and `den > 0`.
pub fn is_canonical(r: &Rational) -> bool {
    use num_integer::Integer;
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

/// Binomial coefficient table, rows `0..=n`.
pub(crate) fn binomial_rows(n: usize) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![BigInt::one(); i + 1];
        for k in 1..i {
            row[k] = &rows[i - 1][k - 1] + &rows[i - 1][k];
        }
        rows.push(row);
    }
    rows.into_iter()
        .map(|r| r.into_iter().map(Rational::from_integer).collect())
        .collect()
}
