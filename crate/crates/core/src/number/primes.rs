use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range.
///
/// The first twelve primes as bases are known to be sufficient below 3.3 * 10^24.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime divisors of `n`, ascending, by trial division.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The finite set S of rational primes defining Z[1/S].
///
/// Always sorted, without duplicates. May be empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct PrimeSet(Vec<u64>);

impl PrimeSet {
    /// Builds a prime set from arbitrary order input; duplicates are rejected.
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut v: Vec<u64> = primes.into_iter().collect();
        v.sort_unstable();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(Error::usage(format!("prime {} listed twice", w[0])));
            }
        }
        if let Some(&bad) = v.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::usage(format!("{bad} is not prime")));
        }
        Ok(PrimeSet(v))
    }

    pub fn empty() -> Self {
        PrimeSet(Vec::new())
    }

    pub fn primes(&self) -> &[u64] {
        &self.0
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &PrimeSet) -> bool {
        self.0.iter().all(|&p| other.contains(p))
    }

    /// S together with the extra primes, e.g. S ∪ {2, 3}.
    pub fn with(&self, extra: &[u64]) -> PrimeSet {
        let mut v = self.0.clone();
        for &p in extra {
            if !v.contains(&p) {
                v.push(p);
            }
        }
        v.sort_unstable();
        PrimeSet(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }
}

impl TryFrom<Vec<u64>> for PrimeSet {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        PrimeSet::new(v)
    }
}

impl From<PrimeSet> for Vec<u64> {
    fn from(s: PrimeSet) -> Vec<u64> {
        s.0
    }
}

/// Parses comma separated primes, e.g. `2,3,23`. The empty string is the empty set.
impl FromStr for PrimeSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(PrimeSet::empty());
        }
        let parsed = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::usage(format!("cannot parse prime {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PrimeSet::new(parsed)
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn large_primes() {
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(18_446_744_073_709_551_559));
        // strong pseudoprime to bases 2..=11
        assert!(!is_prime(3_825_123_056_546_413_051));
    }

    #[test]
    fn parse_and_order() {
        let s: PrimeSet = "23, 2,3".parse().unwrap();
        assert_eq!(s.primes(), &[2, 3, 23]);
        assert_eq!(s.to_string(), "{2,3,23}");
        assert!("".parse::<PrimeSet>().unwrap().is_empty());
        assert!("2,4".parse::<PrimeSet>().is_err());
        assert!("2,2".parse::<PrimeSet>().is_err());
        assert!("x".parse::<PrimeSet>().is_err());
    }
}
