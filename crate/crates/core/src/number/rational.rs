use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number::factored::smooth_part;
use crate::number::primes::PrimeSet;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// True iff every prime dividing the numerator or denominator of `q` lies in S.
pub fn is_s_unit(q: &BigRational, s: &PrimeSet) -> Result<bool> {
    if q.is_zero() {
        return Err(Error::domain("zero is not an S-unit candidate"));
    }
    let (_, num_rest) = smooth_part(q.numer(), s.primes())?;
    if !num_rest.is_one() {
        return Ok(false);
    }
    let (_, den_rest) = smooth_part(q.denom(), s.primes())?;
    Ok(den_rest.is_one())
}

/// True iff the denominator of `q` only involves primes of S.
pub fn is_s_integral(q: &BigRational, s: &PrimeSet) -> bool {
    let (_, rest) = smooth_part(q.denom(), s.primes()).expect("denominator is nonzero");
    rest.is_one()
}

/// Exact integer square root, if `n` is a perfect square.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// The nonnegative rational square root of `q`, if `q` is a square in Q.
pub fn exact_sqrt(q: &BigRational) -> Option<BigRational> {
    // q is in lowest terms, so it is a square iff numerator and denominator are.
    let n = exact_isqrt(q.numer())?;
    let d = exact_isqrt(q.denom())?;
    Some(BigRational::new(n, d))
}

/// Floor of a rational number as an integer.
pub fn floor(q: &BigRational) -> BigInt {
    q.floor().to_integer()
}

/// `num/den` with the `/den` omitted for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::domain(format!("cannot parse rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Serde adapter writing a rational as a `num/den` string.
pub mod as_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Like [`as_string`], for sequences.
pub mod vec_as_strings {
    use num_rational::BigRational;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&super::format_rational(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| super::parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[u64]) -> PrimeSet {
        PrimeSet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn s_unit_examples() {
        assert!(is_s_unit(&rat(8, 9), &set(&[2, 3])).unwrap());
        assert!(is_s_unit(&rat(1, 1), &set(&[])).unwrap());
        assert!(!is_s_unit(&rat(3, 2), &set(&[2])).unwrap());
        assert!(is_s_unit(&rat(-1, 1), &set(&[])).unwrap());
        assert!(is_s_unit(&rat(0, 1), &set(&[2])).is_err());
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(exact_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(exact_sqrt(&rat(0, 1)), Some(rat(0, 1)));
        assert_eq!(exact_sqrt(&rat(2, 1)), None);
        assert_eq!(exact_sqrt(&rat(-4, 1)), None);
        assert_eq!(exact_sqrt(&rat(4, 3)), None);
    }

    #[test]
    fn rational_text_roundtrip() {
        for q in [rat(21952, 9), rat(-1, 2), rat(1728, 1), rat(0, 1)] {
            assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    proptest! {
        #[test]
        fn s_unit_closed_under_inversion(n in -5000i64..5000, d in 1i64..5000, mask in 0u8..16) {
            prop_assume!(n != 0);
            let primes: Vec<u64> = [2u64, 3, 5, 7]
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &p)| p)
                .collect();
            let s = PrimeSet::new(primes).unwrap();
            let q = rat(n, d);
            let inv = q.recip();
            prop_assert_eq!(is_s_unit(&q, &s).unwrap(), is_s_unit(&inv, &s).unwrap());
        }

        #[test]
        fn sqrt_of_square(n in -10_000i64..10_000, d in 1i64..10_000) {
            let q = rat(n, d);
            let sq = &q * &q;
            prop_assert_eq!(exact_sqrt(&sq), Some(q.abs()));
        }
    }
}
