use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::elliptic::model::WeierstrassModel;
use crate::elliptic::point::CurvePoint;
use crate::elliptic::torsion::{is_torsion_level, short_form};
use crate::error::{Error, Result};
use crate::number::poly::IntPolynomial;

/// `psi_n` on `y^2 = x^3 + A x + B`, stored as a polynomial in x alone: `part`
/// is `psi_n` for odd n and `psi_n / y` for even n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionPolynomial {
    pub a: BigInt,
    pub b: BigInt,
    pub n: usize,
    pub part: IntPolynomial,
}

impl DivisionPolynomial {
    pub fn is_even(&self) -> bool {
        self.n.is_multiple_of(2)
    }

    /// `psi_n(x, y)` at an affine point of the short model.
    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let v = self.part.eval_rational(x);
        if self.is_even() {
            v * y
        } else {
            v
        }
    }
}

/// `psi_0 .. psi_max` for one short model, computed once and then read-only.
#[derive(Debug, Clone)]
pub struct DivisionPolynomialTable {
    a: BigInt,
    b: BigInt,
    parts: Vec<IntPolynomial>,
}

impl DivisionPolynomialTable {
    pub fn new(a: &BigInt, b: &BigInt, max: usize) -> Result<Self> {
        let four_a3 = BigInt::from(4) * a * a * a;
        if (four_a3 + BigInt::from(27) * b * b).is_zero() {
            return Err(Error::Singular);
        }
        let poly = |c: Vec<BigInt>| IntPolynomial::new(c);
        let f = poly(vec![b.clone(), a.clone(), BigInt::zero(), BigInt::from(1)]);
        let f2 = &f * &f;
        let a2 = a * a;
        let mut parts = vec![
            IntPolynomial::zero(),
            IntPolynomial::constant(1),
            IntPolynomial::constant(2),
            // 3x^4 + 6Ax^2 + 12Bx - A^2
            poly(vec![-&a2, BigInt::from(12) * b, BigInt::from(6) * a, BigInt::zero(), BigInt::from(3)]),
            // 4(x^6 + 5Ax^4 + 20Bx^3 - 5A^2x^2 - 4ABx - 8B^2 - A^3)
            poly(vec![
                BigInt::from(-32) * b * b - BigInt::from(4) * &a2 * a,
                BigInt::from(-16) * a * b,
                BigInt::from(-20) * &a2,
                BigInt::from(80) * b,
                BigInt::from(20) * a,
                BigInt::zero(),
                BigInt::from(4),
            ]),
        ];
        for n in 5..=max {
            let m = n / 2;
            let p = |k: usize| &parts[k];
            let next = if n % 2 == 1 {
                let lhs = p(m + 2) * &p(m).pow(3);
                let rhs = p(m - 1) * &p(m + 1).pow(3);
                if m % 2 == 0 {
                    &(&f2 * &lhs) - &rhs
                } else {
                    &lhs - &(&f2 * &rhs)
                }
            } else {
                let inner = &(p(m + 2) * &p(m - 1).pow(2)) - &(p(m - 2) * &p(m + 1).pow(2));
                let twice = p(m) * &inner;
                twice
                    .div_exact(&BigInt::from(2))
                    .ok_or_else(|| Error::Invariant(format!("psi_{n} recursion is not divisible by 2")))?
            };
            parts.push(next);
        }
        parts.truncate(max + 1);
        Ok(DivisionPolynomialTable {
            a: a.clone(),
            b: b.clone(),
            parts,
        })
    }

    pub fn max_index(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<DivisionPolynomial> {
        self.parts.get(n).map(|part| DivisionPolynomial {
            a: self.a.clone(),
            b: self.b.clone(),
            n,
            part: part.clone(),
        })
    }

    pub fn part(&self, n: usize) -> &IntPolynomial {
        &self.parts[n]
    }
}

pub fn division_polynomial(a: &BigInt, b: &BigInt, n: usize) -> Result<DivisionPolynomial> {
    let table = DivisionPolynomialTable::new(a, b, n)?;
    Ok(table.get(n).expect("table reaches n"))
}

/// Polynomial in x whose roots are the x-coordinates of the nontrivial N-torsion:
/// `psi_N` for odd N, and the primitive part of `(x^3 + Ax + B) * psi_N / y` for
/// even N so that the points with `y = 0` are included.
pub fn torsion_x_candidates(a: &BigInt, b: &BigInt, n: usize) -> Result<IntPolynomial> {
    if n < 2 {
        return Err(Error::domain("torsion level must be at least 2"));
    }
    let psi = division_polynomial(a, b, n)?;
    if n % 2 == 1 {
        return Ok(psi.part);
    }
    let f = IntPolynomial::new(vec![b.clone(), a.clone(), BigInt::zero(), BigInt::from(1)]);
    Ok((&f * &psi.part).primitive_part())
}

fn proper_divisors(n: usize) -> impl Iterator<Item = usize> {
    (2..n).filter(move |d| n.is_multiple_of(*d))
}

/// Whether `P` has exact order `n`, decided by `psi_n(P) = 0` and `psi_d(P) != 0`
/// for all proper divisors `d` of `n`, evaluated on the short form.
pub fn certify_exact_order(e: &WeierstrassModel, p: &CurvePoint, n: u32) -> Result<bool> {
    if !is_torsion_level(n) {
        return Err(Error::domain(format!("no rational points of order {n} exist over Q")));
    }
    if !e.contains(p) {
        return Err(Error::domain(format!("point {p} is not on {e}")));
    }
    let sf = short_form(e)?;
    let (x, y) = match sf.to_short(p) {
        CurvePoint::Infinity => return Ok(n == 1),
        CurvePoint::Affine { x, y } => (x, y),
    };
    if n == 1 {
        return Ok(false);
    }
    let n = n as usize;
    let table = DivisionPolynomialTable::new(&sf.a, &sf.b, n)?;
    let at = |k: usize| table.get(k).expect("k <= n").eval(&x, &y);
    Ok(at(n).is_zero() && proper_divisors(n).all(|d| !at(d).is_zero()))
}

/// Expected degree of `part` for index `n >= 1`.
pub fn expected_degree(n: usize) -> usize {
    if n.is_odd() {
        (n * n - 1) / 2
    } else {
        (n * n - 4) / 2
    }
}
