use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::elliptic::model::WeierstrassModel;
use crate::elliptic::point::{CurvePoint, PointOrder};
use crate::elliptic::torsion::{exact_order_points, short_discriminant_factorization};
use crate::error::{Error, Result};
use crate::number::factored::FactoredInteger;
use crate::number::primes::{is_prime, PrimeSet};

const MAZUR_ISOGENY_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 37, 43, 67, 163];

/// Largest number of curves in a rational isogeny class over Q.
pub const MAX_CLASS_SIZE: usize = 8;

/// Primes that occur as degrees of rational cyclic isogenies over Q.
pub fn mazur_isogeny_primes() -> &'static [u64] {
    &MAZUR_ISOGENY_PRIMES
}

/// Running sums over `kP`, `k = 1 ..= ell / 2`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VeluAccumulator {
    pub terms: Vec<(BigRational, BigRational)>,
    pub t: BigRational,
    pub w: BigRational,
}

impl VeluAccumulator {
    pub fn push(&mut self, e: &WeierstrassModel, x: &BigRational) {
        let (b2, b4, b6) = (e.b2(), e.b4(), e.b6());
        let c = |n: i64| BigRational::from_integer(BigInt::from(n));
        let x2 = x * x;
        let tk = c(6) * &x2 + b2 * x + b4;
        let uk = c(4) * &x2 * x + b2 * &x2 + c(2) * b4 * x + b6;
        self.t += &tk;
        self.w += &uk + x * &tk;
        self.terms.push((tk, uk));
    }
}

/// The quotient of `E` by the subgroup generated by a rational point of odd
/// prime order `ell`.
pub fn velu_quotient(e: &WeierstrassModel, p: &CurvePoint, ell: u64) -> Result<WeierstrassModel> {
    if ell == 2 {
        return Err(Error::domain("2-isogenies are not supported"));
    }
    if !is_prime(ell) {
        return Err(Error::domain(format!("isogeny degree {ell} is not prime")));
    }
    match e.point_order(p)? {
        PointOrder::Finite(n) if n as u64 == ell => {}
        order => {
            return Err(Error::domain(format!(
                "point {p} has order {order:?}, not {ell}"
            )))
        }
    }
    let mut acc = VeluAccumulator::default();
    let mut kp = p.clone();
    for _ in 1..=ell / 2 {
        acc.push(e, kp.x().expect("multiples below ell are affine"));
        kp = e.add_unchecked(&kp, p);
    }
    let five = BigRational::from_integer(BigInt::from(5));
    let seven = BigRational::from_integer(BigInt::from(7));
    let [a1, a2, a3, a4, a6] = e.a_invariants().clone();
    let a4 = a4 - &five * &acc.t;
    let a6 = a6 - e.b2() * &acc.t - &seven * &acc.w;
    WeierstrassModel::new([a1, a2, a3, a4, a6])
}

/// Closure of `{E}` under quotients by rational points of odd prime order,
/// deduplicated by j-invariant. `disc_fact` factors the discriminant of `E`.
pub fn expand_class_rational(e: &WeierstrassModel, disc_fact: &FactoredInteger) -> Result<Vec<WeierstrassModel>> {
    if disc_fact.value() != e.discriminant().to_integer() || !e.discriminant().is_integer() {
        return Err(Error::domain(format!("{disc_fact} is not the discriminant of {e}")));
    }
    let odd: Vec<u64> = MAZUR_ISOGENY_PRIMES.iter().copied().filter(|&l| l > 2).collect();
    let mut support: Vec<u64> = disc_fact.support().collect();
    support.extend([2, 3]);
    support.extend(odd.iter().copied().filter(|&l| l <= 7));
    support.sort_unstable();
    support.dedup();
    let support = PrimeSet::new(support)?;

    let mut seen: HashSet<BigRational> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(e.j_invariant().clone());
    queue.push_back(e.clone());
    while let Some(curve) = queue.pop_front() {
        let curve = if curve.is_integral() {
            curve
        } else {
            curve.integral_rescaling()?.0
        };
        let f = short_discriminant_factorization(&curve, &support)?;
        for &ell in odd.iter().filter(|&&l| l <= 7) {
            for p in exact_order_points(&curve, &f, ell as u32)? {
                let quotient = velu_quotient(&curve, &p, ell)?;
                if seen.insert(quotient.j_invariant().clone()) {
                    queue.push_back(quotient);
                }
            }
        }
        out.push(curve);
        if seen.len() > MAX_CLASS_SIZE {
            return Err(Error::Invariant(format!(
                "isogeny class of {e} has more than {MAX_CLASS_SIZE} members"
            )));
        }
    }
    Ok(out)
}
