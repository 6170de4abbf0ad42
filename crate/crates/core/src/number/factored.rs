use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::number::primes::{is_prime, PrimeSet};

/// A nonzero integer together with its complete prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredInteger {
    negative: bool,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger {
            negative: false,
            factors: Vec::new(),
        }
    }

    /// Builds from a sign and (prime, exponent) pairs in any order.
    ///
    /// Repeated primes are merged and zero exponents dropped.
    pub fn new(negative: bool, factors: impl IntoIterator<Item = (u64, u32)>) -> Result<Self> {
        let mut fs: Vec<(u64, u32)> = factors.into_iter().filter(|&(_, e)| e > 0).collect();
        fs.sort_unstable();
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(fs.len());
        for (p, e) in fs {
            if !is_prime(p) {
                return Err(Error::domain(format!("{p} is not prime")));
            }
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => merged.push((p, e)),
            }
        }
        Ok(FactoredInteger {
            negative,
            factors: merged,
        })
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn sign(&self) -> i32 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn value(&self) -> BigInt {
        let mut v = BigInt::one();
        for &(p, e) in &self.factors {
            v *= num_traits::pow(BigInt::from(p), e as usize);
        }
        if self.negative {
            -v
        } else {
            v
        }
    }

    pub fn abs(&self) -> FactoredInteger {
        FactoredInteger {
            negative: false,
            factors: self.factors.clone(),
        }
    }

    pub fn mul(&self, other: &FactoredInteger) -> FactoredInteger {
        let mut all = self.factors.clone();
        all.extend_from_slice(&other.factors);
        FactoredInteger::new(self.negative != other.negative, all)
            .expect("product of factorizations only contains primes")
    }

    pub fn pow(&self, k: u32) -> FactoredInteger {
        FactoredInteger {
            negative: self.negative && k % 2 == 1,
            factors: self.factors.iter().map(|&(p, e)| (p, e * k)).collect(),
        }
    }

    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// The conductor bound N(S) = c2(S) c3(S) prod p^2: every curve with good
/// reduction outside S has conductor dividing it.
pub fn ns_bound(s: &PrimeSet) -> FactoredInteger {
    let factors = s.iter().map(|p| {
        let e = match p {
            2 => 5,
            3 => 3,
            _ => 2,
        };
        (p, e)
    });
    FactoredInteger::new(false, factors).expect("prime set holds primes")
}

/// Splits `n` into its P-smooth part and the remaining cofactor (positive, coprime to P).
pub fn smooth_part(n: &BigInt, primes: &[u64]) -> Result<(FactoredInteger, BigInt)> {
    if n.is_zero() {
        return Err(Error::domain("cannot factor zero"));
    }
    let mut rest = n.abs();
    let mut factors = Vec::new();
    for &p in primes {
        let bp = BigInt::from(p);
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    }
    Ok((FactoredInteger::new(n.is_negative(), factors)?, rest))
}

/// Factors `n` completely over the primes in `primes`, or returns `None` when some
/// other prime divides it. No general-purpose factoring is attempted.
pub fn smooth_factor(n: &BigInt, primes: &PrimeSet) -> Result<Option<FactoredInteger>> {
    let (f, rest) = smooth_part(n, primes.primes())?;
    Ok(if rest.is_one() { Some(f) } else { None })
}

/// Like [`smooth_factor`] but treats a non-smooth input as a logic error.
pub fn expect_smooth(n: &BigInt, primes: &PrimeSet) -> Result<FactoredInteger> {
    smooth_factor(n, primes)?.ok_or_else(|| Error::NotSmooth {
        value: n.clone(),
        primes: primes.primes().to_vec(),
    })
}

/// Complete factorization by trial division up to `limit`; the cofactor left
/// over must be 1 or a prime below 2^64.
pub fn factor_by_trial(n: &BigInt, limit: u64) -> Result<FactoredInteger> {
    if n.is_zero() {
        return Err(Error::domain("cannot factor zero"));
    }
    let mut rest = n.abs();
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p <= limit && BigInt::from(p) * BigInt::from(p) <= rest {
        let bp = BigInt::from(p);
        let mut e = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        match rest.to_u64() {
            Some(q) if BigInt::from(p) * BigInt::from(p) > rest || is_prime(q) => factors.push((q, 1)),
            _ => return Err(Error::domain(format!("cannot factor {n}: cofactor {rest} has no small prime factor"))),
        }
    }
    factors.sort_unstable();
    FactoredInteger::new(n.is_negative(), factors)
}

/// All positive divisors of |f| in increasing order.
pub fn divisors(f: &FactoredInteger) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for &(p, e) in f.factors() {
        let bp = BigInt::from(p);
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..e {
                acc *= &bp;
                next.push(acc.clone());
            }
        }
        out = next;
    }
    out.sort();
    out
}
