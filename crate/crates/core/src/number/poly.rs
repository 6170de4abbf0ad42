use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::number::factored::{divisors, smooth_part, FactoredInteger};
use crate::number::primes::{is_prime, PrimeSet};

/// A polynomial in one variable with integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c.into();
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Degree and value of the lowest-order nonzero coefficient.
    pub fn lowest(&self) -> Option<(usize, &BigInt)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides every coefficient by `c`, or `None` if some division is inexact.
    pub fn div_exact(&self, c: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(Self::new(out))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(1);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        let mut p = self.div_exact(&c).expect("content divides every coefficient");
        if p.leading().is_some_and(|l| l.is_negative()) {
            p = -p;
        }
        p
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let Some(d) = self.degree() else {
            return BigRational::zero();
        };
        // integer Horner on the homogenization, one reduction at the end
        let den = Pow::pow(x.denom(), d);
        BigRational::new(self.eval_homogeneous(x.numer(), x.denom()), den)
    }

    /// Homogenized value `sum c_i a^i b^(n-i)`, which vanishes iff `a/b` is a root.
    fn eval_homogeneous(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        acc
    }

    pub fn vanishes_at(&self, x: &BigRational) -> bool {
        self.eval_homogeneous(x.numer(), x.denom()).is_zero()
    }

    /// Removes the largest power of x dividing the polynomial; returns it with the exponent.
    fn strip_x_power(&self) -> (Self, usize) {
        match self.lowest() {
            Some((k, _)) => (Self::new(self.coeffs[k..].to_vec()), k),
            None => (self.clone(), 0),
        }
    }

    fn reduce_mod(&self, m: u64) -> Vec<u64> {
        let bm = BigInt::from(m);
        let mut out: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&bm).to_u64().expect("residue below modulus"))
            .collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

/// A 61-bit prime used to screen root candidates before exact verification.
const SCREEN_PRIME: u64 = 2_305_843_009_213_693_951;

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn residue(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().expect("residue below modulus")
}

/// Candidate enumeration by the rational root theorem.
///
/// Tests every `±a/b` with `a` from `numerators`, `b` from `denominators`, in lowest
/// terms, against the x-free part of `p`. Candidates are screened modulo a large prime
/// and confirmed by exact evaluation.
fn roots_from_candidates(
    reduced: &IntPolynomial,
    numerators: &[BigInt],
    denominators: &[BigInt],
) -> Vec<BigRational> {
    let coeffs_mod: Vec<u64> = reduced.coeffs.iter().map(|c| residue(c, SCREEN_PRIME)).collect();
    let screen = |a: u64, b: u64| -> bool {
        let mut acc = 0u64;
        let mut bpow = 1u64;
        for c in coeffs_mod.iter().rev() {
            acc = (mulmod(acc, a, SCREEN_PRIME) + mulmod(*c, bpow, SCREEN_PRIME)) % SCREEN_PRIME;
            bpow = mulmod(bpow, b, SCREEN_PRIME);
        }
        acc == 0
    };
    let num_mod: Vec<u64> = numerators.iter().map(|a| residue(a, SCREEN_PRIME)).collect();
    let den_mod: Vec<u64> = denominators.iter().map(|b| residue(b, SCREEN_PRIME)).collect();
    let mut roots = Vec::new();
    for (b, &bm) in denominators.iter().zip(&den_mod) {
        for (a, &am) in numerators.iter().zip(&num_mod) {
            if !a.gcd(b).is_one() {
                continue;
            }
            for negative in [false, true] {
                let am = if negative { (SCREEN_PRIME - am) % SCREEN_PRIME } else { am };
                if !screen(am, bm) {
                    continue;
                }
                let a = if negative { -a.clone() } else { a.clone() };
                if reduced.eval_homogeneous(&a, b).is_zero() {
                    roots.push(BigRational::new(a, b.clone()));
                }
            }
        }
    }
    roots
}

fn finish_roots(mut roots: Vec<BigRational>, has_zero_root: bool) -> Vec<BigRational> {
    if has_zero_root {
        roots.push(BigRational::zero());
    }
    roots.sort();
    roots.dedup();
    roots
}

/// All rational roots of `p`, ascending.
///
/// `lead` and `trail` must factor the leading coefficient and the lowest-order
/// nonzero coefficient of `p`; a mismatch is a domain error. A factor `x^k` with
/// `k >= 1` contributes the root 0 once.
pub fn rational_roots(
    p: &IntPolynomial,
    lead: &FactoredInteger,
    trail: &FactoredInteger,
) -> Result<Vec<BigRational>> {
    let (Some(lc), Some((k, tc))) = (p.leading(), p.lowest()) else {
        return Err(Error::domain("the zero polynomial has every number as a root"));
    };
    if lead.value() != *lc {
        return Err(Error::domain(format!(
            "leading coefficient is {lc}, factorization gives {}",
            lead.value()
        )));
    }
    if trail.value() != *tc {
        return Err(Error::domain(format!(
            "lowest nonzero coefficient is {tc}, factorization gives {}",
            trail.value()
        )));
    }
    let (reduced, _) = p.strip_x_power();
    let roots = roots_from_candidates(&reduced, &divisors(trail), &divisors(lead));
    Ok(finish_roots(roots, k > 0))
}

/// The rational roots of `p` that are S-units, ascending.
///
/// Only the S-parts of the end coefficients are needed, so no factoring beyond trial
/// division by S is ever attempted.
pub fn s_unit_roots(p: &IntPolynomial, s: &PrimeSet) -> Result<Vec<BigRational>> {
    let (Some(lc), Some(_)) = (p.leading(), p.lowest()) else {
        return Err(Error::domain("the zero polynomial has every number as a root"));
    };
    let (reduced, _) = p.strip_x_power();
    let (lead_s, _) = smooth_part(lc, s.primes())?;
    let (trail_s, _) = smooth_part(&reduced.coeffs[0], s.primes())?;
    let roots = roots_from_candidates(&reduced, &divisors(&trail_s), &divisors(&lead_s));
    Ok(finish_roots(roots, false))
}

// ---------------------------------------------------------------------------
// Root finding by p-adic lifting. Independent of any factorization of the
// coefficients; used for division polynomials and as a cross-check.

/// Dense polynomial over F_m, lowest degree first, no trailing zeros.
type ModPoly = Vec<u64>;

fn modpoly_trim(mut p: ModPoly) -> ModPoly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn modpoly_rem(mut a: ModPoly, b: &ModPoly, m: u64) -> ModPoly {
    let db = b.len() - 1;
    let inv = crate::number::primes::pow_mod(b[db], m - 2, m);
    while a.len() > db {
        let top = a.len() - 1;
        let factor = mulmod(a[top], inv, m);
        if factor != 0 {
            for i in 0..=db {
                let sub = mulmod(factor, b[i], m);
                let idx = top - db + i;
                a[idx] = (a[idx] + m - sub) % m;
            }
        }
        a.pop();
        a = modpoly_trim(a);
    }
    a
}

fn modpoly_gcd(mut a: ModPoly, mut b: ModPoly, m: u64) -> ModPoly {
    a = modpoly_trim(a);
    b = modpoly_trim(b);
    while !b.is_empty() {
        let r = modpoly_rem(a, &b, m);
        a = b;
        b = r;
    }
    a
}

fn modpoly_derivative(p: &ModPoly, m: u64) -> ModPoly {
    modpoly_trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % m, m))
            .collect(),
    )
}

fn modpoly_eval(p: &ModPoly, x: u64, m: u64) -> u64 {
    p.iter().rev().fold(0, |acc, &c| (mulmod(acc, x, m) + c) % m)
}

/// Squarefree part over Q of a nonzero polynomial, as a primitive polynomial.
pub fn squarefree_part(p: &IntPolynomial) -> IntPolynomial {
    let d = p.derivative();
    if d.is_zero() {
        return p.primitive_part();
    }
    let g = poly_gcd(p, &d);
    if g.degree() == Some(0) {
        return p.primitive_part();
    }
    exact_quotient(&p.primitive_part(), &g)
}

/// Pseudo-remainder of `a` by `b` (scaled so that the division stays in Z[x]).
fn pseudo_rem(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let db = b.degree().expect("nonzero divisor");
    let lb = b.leading().expect("nonzero divisor").clone();
    let mut r = a.clone();
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let lr = r.leading().expect("nonzero").clone();
        let shifted = &IntPolynomial::monomial(lr, dr - db) * b;
        r = &r.scale(&lb) - &shifted;
    }
    r
}

/// Primitive gcd in Z[x] by the primitive Euclidean algorithm.
pub fn poly_gcd(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let mut a = a.primitive_part();
    let mut b = b.primitive_part();
    while !b.is_zero() {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = r.primitive_part();
    }
    a.primitive_part()
}

/// Exact quotient `a / b` in Q[x] assumed to land in Z[x] up to content.
fn exact_quotient(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let db = b.degree().expect("nonzero divisor");
    let lb = b.leading().expect("nonzero").clone();
    let mut rem: Vec<BigRational> = a.coeffs.iter().cloned().map(BigRational::from_integer).collect();
    let da = a.degree().expect("nonzero dividend");
    let mut quot = vec![BigRational::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = &rem[k + db] / BigRational::from_integer(lb.clone());
        for (i, bc) in b.coeffs.iter().enumerate() {
            rem[k + i] -= &c * BigRational::from_integer(bc.clone());
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    let den = quot.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    IntPolynomial::new(
        quot.into_iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect(),
    )
    .primitive_part()
}

/// Integer roots of a squarefree integer polynomial with nonzero constant term,
/// by lifting the roots modulo a small good prime.
fn integer_roots_squarefree(q: &IntPolynomial) -> Vec<BigInt> {
    let n = q.degree().expect("nonzero polynomial");
    if n == 0 {
        return Vec::new();
    }
    // Cauchy bound: every complex root has |z| < 1 + max |c_i / c_n| <= 1 + max |c_i|.
    let bound = q.coeffs.iter().map(|c| c.abs()).max().expect("nonempty") + BigInt::one();
    let lead = q.leading().expect("nonzero").clone();
    let dq = q.derivative();

    let mut modulus_prime = 0u64;
    let mut small_roots = Vec::new();
    for m in (3u64..).filter(|&m| is_prime(m)) {
        if (&lead % BigInt::from(m)).is_zero() {
            continue;
        }
        let qm = q.reduce_mod(m);
        let dm = modpoly_derivative(&qm, m);
        if dm.is_empty() || modpoly_gcd(qm.clone(), dm, m).len() != 1 {
            continue;
        }
        modulus_prime = m;
        small_roots = (0..m).filter(|&x| modpoly_eval(&qm, x, m) == 0).collect();
        break;
    }

    let m = BigInt::from(modulus_prime);
    let limit = &bound * BigInt::from(2);
    let mut out = Vec::new();
    for r in small_roots {
        // Newton iteration doubles the precision each round: x <- x - q(x)/q'(x) mod m^(2^k).
        let mut x = BigInt::from(r);
        let mut modulus = m.clone();
        while modulus <= limit {
            modulus = &modulus * &modulus;
            let fx = q.eval(&x).mod_floor(&modulus);
            let dfx = dq.eval(&x).mod_floor(&modulus);
            let inv = mod_inverse(&dfx, &modulus).expect("simple root stays simple");
            x = (&x - fx * inv).mod_floor(&modulus);
        }
        let half = &modulus / BigInt::from(2);
        if x > half {
            x -= &modulus;
        }
        if q.eval(&x).is_zero() {
            out.push(x);
        }
    }
    out.sort();
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// All rational roots of a nonzero polynomial, ascending, without any factorization
/// of its coefficients.
pub fn rational_roots_by_lifting(p: &IntPolynomial) -> Result<Vec<BigRational>> {
    if p.is_zero() {
        return Err(Error::domain("the zero polynomial has every number as a root"));
    }
    let (reduced, k) = p.strip_x_power();
    let sf = squarefree_part(&reduced);
    let n = sf.degree().expect("nonzero");
    let lead = sf.leading().expect("nonzero").clone();
    // Monic transform: lead^(n-1) * p(y / lead) has integer coefficients and leading 1.
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut lpow = BigInt::one();
    for i in (0..=n).rev() {
        if i == n {
            coeffs.push(BigInt::one());
        } else {
            coeffs.push(&sf.coeffs[i] * &lpow);
            lpow *= &lead;
        }
    }
    coeffs.reverse();
    let monic = IntPolynomial::new(coeffs);
    let roots = integer_roots_squarefree(&monic)
        .into_iter()
        .map(|y| BigRational::new(y, lead.clone()))
        .collect();
    Ok(finish_roots(roots, k > 0))
}

/// Integer roots of the monic cubic `x^3 + a x + c`, ascending.
///
/// The real line is split at integer brackets of the critical points
/// `±sqrt(-a/3)` into ranges on which the cubic is monotone; each range holds at most
/// one root, located by exact bisection on the sign.
pub fn depressed_cubic_integer_roots(a: &BigInt, c: &BigInt) -> Vec<BigInt> {
    let f = |x: &BigInt| -> BigInt { x * x * x + a * x + c };
    let bound = a.abs().max(c.abs()) + BigInt::one();
    let mut ranges: Vec<(BigInt, BigInt)> = Vec::new();
    if a.is_negative() {
        let k = (-a / BigInt::from(3)).sqrt();
        ranges.push((-&bound, -&k - 1));
        ranges.push((-&k, k.clone()));
        ranges.push((k + 1, bound));
    } else {
        ranges.push((-&bound, bound));
    }
    let mut roots = Vec::new();
    for (lo, hi) in ranges {
        if lo > hi {
            continue;
        }
        if let Some(r) = monotone_integer_root(&f, lo, hi) {
            roots.push(r);
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

fn monotone_integer_root(f: &impl Fn(&BigInt) -> BigInt, mut lo: BigInt, mut hi: BigInt) -> Option<BigInt> {
    let flo = f(&lo);
    if flo.is_zero() {
        return Some(lo);
    }
    let fhi = f(&hi);
    if fhi.is_zero() {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    let increasing = flo.is_negative();
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        let fm = f(&mid);
        if fm.is_zero() {
            return Some(mid);
        }
        if fm.is_negative() == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::factored::smooth_factor;
    use crate::number::rational::rat;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn factor(n: &BigInt) -> FactoredInteger {
        // trial division is fine for the small coefficients in these tests
        let primes: Vec<u64> = (2..2000).filter(|&p| is_prime(p)).collect();
        smooth_factor(n, &PrimeSet::new(primes).unwrap()).unwrap().unwrap()
    }

    fn roots_of(p: &IntPolynomial) -> Vec<BigRational> {
        let lead = factor(p.leading().unwrap());
        let trail = factor(p.lowest().unwrap().1);
        rational_roots(p, &lead, &trail).unwrap()
    }

    /// Brute force over all fractions allowed by the rational root theorem, with
    /// divisors found by scanning.
    fn brute_roots(p: &IntPolynomial) -> Vec<BigRational> {
        let (k, tc) = p.lowest().unwrap();
        let lc = p.leading().unwrap().to_i64().unwrap().abs();
        let tc = tc.to_i64().unwrap().abs();
        let mut out = Vec::new();
        for a in (1..=tc).filter(|a| tc % a == 0) {
            for b in (1..=lc).filter(|b| lc % b == 0) {
                for s in [1, -1] {
                    let r = rat(s * a, b);
                    if p.eval_rational(&r).is_zero() {
                        out.push(r);
                    }
                }
            }
        }
        if k > 0 {
            out.push(rat(0, 1));
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn display_matches_cli_format() {
        assert_eq!(poly(&[0, 12, 0, 0, 3]).to_string(), "3*x^4 + 12*x");
        assert_eq!(poly(&[1, -2, 0, 1]).to_string(), "x^3 - 2*x + 1");
        assert_eq!(poly(&[-5]).to_string(), "-5");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn rational_root_examples() {
        assert_eq!(roots_of(&poly(&[-1, 0, 1])), vec![rat(-1, 1), rat(1, 1)]);
        assert_eq!(roots_of(&poly(&[-3, 2])), vec![rat(3, 2)]);
        assert_eq!(roots_of(&poly(&[0, 0, -1, 1])), vec![rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn legendre_fibre_at_21952_over_9() {
        // 2^8 * 9 * (t^2 - t + 1)^3 - 21952 * t^2 (t - 1)^2
        let q = poly(&[1, -1, 1]).pow(3).scale(&BigInt::from(2304));
        let r = (&poly(&[0, 0, 1]) * &poly(&[-1, 1]).pow(2)).scale(&BigInt::from(21952));
        let p = &q - &r;
        let expected = vec![rat(-2, 1), rat(-1, 2), rat(1, 3), rat(2, 3), rat(3, 2), rat(3, 1)];
        assert_eq!(roots_of(&p), expected);
        assert_eq!(rational_roots_by_lifting(&p).unwrap(), expected);
        let s = PrimeSet::new([2, 3]).unwrap();
        assert_eq!(s_unit_roots(&p, &s).unwrap(), expected);
    }

    #[test]
    fn factorization_mismatch_is_rejected() {
        let p = poly(&[-3, 2]);
        let two = FactoredInteger::new(false, [(2, 1)]).unwrap();
        let five = FactoredInteger::new(false, [(5, 1)]).unwrap();
        assert!(rational_roots(&p, &two, &five).is_err());
        assert!(rational_roots(&IntPolynomial::zero(), &two, &two).is_err());
    }

    #[test]
    fn lifting_handles_repeated_roots() {
        // (x + 1)^2 (2x - 1)^2 (x - 2)^2 x^3
        let p = &(&(&poly(&[1, 1]).pow(2) * &poly(&[-1, 2]).pow(2)) * &poly(&[-2, 1]).pow(2))
            * &poly(&[0, 0, 0, 1]);
        assert_eq!(
            rational_roots_by_lifting(&p).unwrap(),
            vec![rat(-1, 1), rat(0, 1), rat(1, 2), rat(2, 1)]
        );
    }

    #[test]
    fn cubic_bisection() {
        // x^3 - 7x + 6 = (x - 1)(x - 2)(x + 3)
        let r = depressed_cubic_integer_roots(&BigInt::from(-7), &BigInt::from(6));
        assert_eq!(r, vec![BigInt::from(-3), BigInt::from(1), BigInt::from(2)]);
        // x^3 + 1
        let r = depressed_cubic_integer_roots(&BigInt::zero(), &BigInt::from(1));
        assert_eq!(r, vec![BigInt::from(-1)]);
        // x^3 - x
        let r = depressed_cubic_integer_roots(&BigInt::from(-1), &BigInt::zero());
        assert_eq!(r, vec![BigInt::from(-1), BigInt::zero(), BigInt::from(1)]);
        // x^3 - 3x + 2 = (x - 1)^2 (x + 2)
        let r = depressed_cubic_integer_roots(&BigInt::from(-3), &BigInt::from(2));
        assert_eq!(r, vec![BigInt::from(-2), BigInt::from(1)]);
    }

    proptest! {
        #[test]
        fn rational_roots_match_brute_force(
            coeffs in proptest::collection::vec(-50i64..=50, 2..=7)
        ) {
            let p = poly(&coeffs);
            prop_assume!(p.degree().unwrap_or(0) >= 1);
            let brute = brute_roots(&p);
            let found = roots_of(&p);
            for r in &found {
                prop_assert!(p.vanishes_at(r));
            }
            prop_assert_eq!(&found, &brute);
            prop_assert_eq!(rational_roots_by_lifting(&p).unwrap(), brute);
        }

        #[test]
        fn products_of_linear_factors(
            roots in proptest::collection::vec((-30i64..=30, 1i64..=8), 1..=5),
            extra in proptest::collection::vec(-9i64..=9, 0..=2)
        ) {
            let mut p = poly(&[1]);
            for &(a, b) in &roots {
                p = &p * &poly(&[-a, b]);
            }
            let mut q = poly(&extra);
            if q.is_zero() { q = poly(&[1]); }
            let p = &p * &(&(&q * &q) + &poly(&[1]));
            let mut expected: Vec<BigRational> = roots.iter().map(|&(a, b)| rat(a, b)).collect();
            expected.sort();
            expected.dedup();
            prop_assert_eq!(rational_roots_by_lifting(&p).unwrap(), expected.clone());
            prop_assert_eq!(roots_of(&p), expected);
        }

        #[test]
        fn cubic_roots_match_scan(a in -200i64..200, c in -2000i64..2000) {
            let found = depressed_cubic_integer_roots(&BigInt::from(a), &BigInt::from(c));
            let bound = a.abs().max(c.abs()) + 1;
            let scan: Vec<BigInt> = (-bound..=bound)
                .filter(|x| x * x * x + a * x + c == 0)
                .map(BigInt::from)
                .collect();
            prop_assert_eq!(found, scan);
        }
    }
}
