//! Exact scalars and polynomials: rationals, Laurent polynomials, reduced
//! rational functions and Laurent polynomials in a fractional power of `q`.

pub mod gcd;
pub mod laurent;
mod modular;
pub mod qscalar;
pub mod ratfunc;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

pub use laurent::{sym, Laurent, Monomial, Symbol};
pub use qscalar::QScalar;
pub use ratfunc::{is_laurent, RatFunc};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution sends a denominator to zero")]
    DegenerateSubstitution,
    #[error("no image given for symbol `{0}`")]
    MissingImage(String),
    #[error("malformed rational `{0}`")]
    BadRational(String),
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `"p"` or `"p/q"` with arbitrary-size integers.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let bad = || ArithError::BadRational(s.to_string());
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Always `"p/q"`, including `q = 1`.
pub fn format_rational(c: &Rational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings_round_trip() {
        for s in ["0/1", "-3/2", "5/1", "123456789012345678901234567891/7"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
