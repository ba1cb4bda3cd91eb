//! Exact rational helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational number used for every coefficient in the workbench.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Parses `"p/q"` or `"p"`. Decimal and exponent notation is rejected.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    let int = |p: &str| -> Result<BigInt, Error> {
        let digits = p.strip_prefix(['-', '+']).unwrap_or(p);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        p.parse::<BigInt>().map_err(|_| bad())
    };
    match t.split_once('/') {
        Some((n, d)) => {
            let n = int(n)?;
            let d = int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(int(t)?)),
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Largest absolute value in a slice, used for residual witnesses.
pub fn max_abs<'a>(xs: impl IntoIterator<Item = &'a Q>) -> Q {
    xs.into_iter()
        .map(|x| x.abs())
        .fold(Q::zero(), |m, x| if x > m { x } else { m })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_q("1/3").unwrap(), q(1, 3));
        assert_eq!(parse_q("-4/6").unwrap(), q(-2, 3));
        assert_eq!(parse_q("7").unwrap(), qi(7));
    }

    #[test]
    fn rejects_floats_and_junk() {
        for s in ["1.5", "1e3", "", "1/0", "a/b", "1/", "/2", "--1"] {
            assert!(parse_q(s).is_err(), "{s} should be rejected");
        }
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(fmt_q(&q(2, 4)), "1/2");
        assert_eq!(fmt_q(&qi(-3)), "-3");
    }
}
