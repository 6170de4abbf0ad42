use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::elliptic::model::WeierstrassModel;
use crate::elliptic::point::{CurvePoint, PointOrder, MAX_TORSION_ORDER};
use crate::error::{Error, Result};
use crate::number::factored::{expect_smooth, FactoredInteger};
use crate::number::poly::depressed_cubic_integer_roots;
use crate::number::primes::{is_prime, pow_mod, PrimeSet};

/// The integral short model `y^2 = x^3 + A x + B` of an integral model together
/// with the point isomorphism `(x, y) -> (36x + 3b2, 108(2y + a1 x + a3))`.
#[derive(Debug, Clone)]
pub struct ShortForm {
    pub a: BigInt,
    pub b: BigInt,
    pub model: WeierstrassModel,
    a1: BigRational,
    a3: BigRational,
    b2: BigRational,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn short_form(e: &WeierstrassModel) -> Result<ShortForm> {
    e.integral_a_invariants()?;
    let a = (-q(27) * e.c4()).to_integer();
    let b = (-q(54) * e.c6()).to_integer();
    let model = WeierstrassModel::from_integers([
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
        a.clone(),
        b.clone(),
    ])?;
    Ok(ShortForm {
        a,
        b,
        model,
        a1: e.a1().clone(),
        a3: e.a3().clone(),
        b2: e.b2().clone(),
    })
}

impl ShortForm {
    pub fn to_short(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::affine(
                q(36) * x + q(3) * &self.b2,
                q(108) * (q(2) * y + &self.a1 * x + &self.a3),
            ),
        }
    }

    pub fn from_short(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => {
                let x0 = (x - q(3) * &self.b2) / q(36);
                let y0 = (y / q(108) - &self.a1 * &x0 - &self.a3) / q(2);
                CurvePoint::affine(x0, y0)
            }
        }
    }

    /// Discriminant `-16(4A^3 + 27B^2)` of the short model.
    pub fn discriminant(&self) -> BigInt {
        let a3 = &self.a * &self.a * &self.a;
        -BigInt::from(16) * (BigInt::from(4) * a3 + BigInt::from(27) * &self.b * &self.b)
    }
}

/// Factorization of the short-form discriminant `6^12 * disc(E)` over `primes ∪ {2, 3}`.
pub fn short_discriminant_factorization(e: &WeierstrassModel, primes: &PrimeSet) -> Result<FactoredInteger> {
    let sf = short_form(e)?;
    expect_smooth(&sf.discriminant(), &primes.with(&[2, 3]))
}

/// `#E(F_p)` for an odd prime of good reduction of an integral model.
fn count_points_mod(b: [i64; 3], p: u64) -> u64 {
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    let m = p as i64;
    let (b2, b4, b6) = (b[0].rem_euclid(m), b[1].rem_euclid(m), b[2].rem_euclid(m));
    let mut count: i64 = p as i64 + 1;
    for x in 0..m {
        let v = (((4 * x % m * x % m * x) % m + b2 * x % m * x + 2 * b4 * x + b6) % m) as u64;
        if v == 0 {
            continue;
        }
        count += if pow_mod(v, (p - 1) / 2, p) == 1 { 1 } else { -1 };
    }
    count as u64
}

fn residue(n: &BigInt, p: u64) -> i64 {
    n.mod_floor(&BigInt::from(p)).to_i64().expect("residue fits")
}

/// A multiple of the rational torsion order: the gcd of `#E(F_p)` over a few odd
/// primes of good reduction, into which the torsion subgroup injects.
pub fn torsion_order_multiple(e: &WeierstrassModel) -> Result<u64> {
    e.integral_a_invariants()?;
    let disc = e.discriminant().to_integer();
    let (b2, b4, b6) = (e.b2().to_integer(), e.b4().to_integer(), e.b6().to_integer());
    let mut g = 0u64;
    let mut used = 0;
    for p in (3u64..400).filter(|&p| is_prime(p)) {
        if residue(&disc, p) == 0 {
            continue;
        }
        let n = count_points_mod([residue(&b2, p), residue(&b4, p), residue(&b6, p)], p);
        g = g.gcd(&n);
        used += 1;
        if used >= 12 || g == 1 {
            break;
        }
    }
    Ok(if g == 0 { 0 } else { g })
}

fn is_integral_point(p: &CurvePoint) -> bool {
    match p {
        CurvePoint::Infinity => true,
        CurvePoint::Affine { x, y } => x.is_integer() && y.is_integer(),
    }
}

/// Order on the integral short model, stopping early at the first non-integral
/// multiple since torsion points there have integer coordinates.
fn short_point_order(model: &WeierstrassModel, p: &CurvePoint) -> PointOrder {
    let mut acc = p.clone();
    for n in 1..=MAX_TORSION_ORDER {
        if acc.is_infinity() {
            return PointOrder::Finite(n);
        }
        if !is_integral_point(&acc) {
            return PointOrder::Infinite;
        }
        acc = model.add_unchecked(&acc, p);
    }
    PointOrder::Infinite
}

fn y_candidates(disc_fact: &FactoredInteger) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for &(p, e) in disc_fact.factors() {
        let bp = BigInt::from(p);
        let mut next = Vec::with_capacity(out.len() * (e as usize / 2 + 1));
        for d in &out {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..e / 2 {
                acc *= &bp;
                next.push(acc.clone());
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Torsion points with their orders, in canonical order.
fn torsion_with_orders(e: &WeierstrassModel, disc_fact: &FactoredInteger) -> Result<Vec<(CurvePoint, u32)>> {
    let sf = short_form(e)?;
    if disc_fact.value() != sf.discriminant() {
        return Err(Error::domain(format!(
            "{disc_fact} is not the short-form discriminant of {e}"
        )));
    }
    let mut out = vec![(CurvePoint::Infinity, 1)];
    if torsion_order_multiple(e)? == 1 {
        return Ok(out);
    }
    let ys = std::iter::once(BigInt::zero()).chain(y_candidates(disc_fact));
    for y in ys {
        let c = &sf.b - &y * &y;
        for x in depressed_cubic_integer_roots(&sf.a, &c) {
            let p = CurvePoint::affine(BigRational::from_integer(x.clone()), BigRational::from_integer(y.clone()));
            if let PointOrder::Finite(n) = short_point_order(&sf.model, &p) {
                out.push((sf.from_short(&p), n));
                if y.is_positive() {
                    let minus = sf.model.neg(&p);
                    out.push((sf.from_short(&minus), n));
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The rational torsion subgroup, by Lutz-Nagell on the short form.
///
/// `disc_fact` must factor the short-form discriminant, see
/// [`short_discriminant_factorization`].
pub fn torsion_points(e: &WeierstrassModel, disc_fact: &FactoredInteger) -> Result<Vec<CurvePoint>> {
    Ok(torsion_with_orders(e, disc_fact)?.into_iter().map(|(p, _)| p).collect())
}

pub fn is_torsion_level(n: u32) -> bool {
    (1..=10).contains(&n) || n == 12
}

/// Rational points of exact order `n`.
pub fn exact_order_points(e: &WeierstrassModel, disc_fact: &FactoredInteger, n: u32) -> Result<Vec<CurvePoint>> {
    if !is_torsion_level(n) {
        return Err(Error::domain(format!("no rational points of order {n} exist over Q")));
    }
    if n == 1 {
        return Ok(vec![CurvePoint::Infinity]);
    }
    if torsion_order_multiple(e)? % n as u64 != 0 {
        return Ok(Vec::new());
    }
    Ok(torsion_with_orders(e, disc_fact)?
        .into_iter()
        .filter(|&(_, k)| k == n)
        .map(|(p, _)| p)
        .collect())
}

/// Whether all of `E[2]` is rational.
pub fn has_full_two_torsion(e: &WeierstrassModel) -> bool {
    let integral;
    let e = if e.is_integral() {
        e
    } else {
        integral = e.integral_rescaling().expect("rescaling keeps the model nonsingular").0;
        &integral
    };
    let sf = short_form(e).expect("model is integral");
    // x^3 + Ax + B is monic, so its rational roots are integers
    depressed_cubic_integer_roots(&sf.a, &sf.b).len() == 3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rational::from_int;

    fn pt(x: i64, y: i64) -> CurvePoint {
        CurvePoint::affine(from_int(x), from_int(y))
    }

    fn torsion(a: [i64; 5]) -> Vec<CurvePoint> {
        let e = WeierstrassModel::from_i64(a).unwrap();
        let f = short_discriminant_factorization(&e, &PrimeSet::new((2..200).filter(|&p| is_prime(p))).unwrap()).unwrap();
        torsion_points(&e, &f).unwrap()
    }

    #[test]
    fn short_form_examples() {
        let e = WeierstrassModel::from_i64([0, -1, 1, -10, -20]).unwrap();
        let sf = short_form(&e).unwrap();
        assert_eq!((sf.a.clone(), sf.b.clone()), (BigInt::from(-13392), BigInt::from(-1080432)));
        assert_eq!(sf.model.j_invariant(), e.j_invariant());

        let e = WeierstrassModel::from_i64([0, 0, 0, 1, 0]).unwrap();
        let sf = short_form(&e).unwrap();
        assert_eq!((sf.a.clone(), sf.b.clone()), (BigInt::from(1296), BigInt::zero()));

        let e = WeierstrassModel::from_i64([0, 0, 0, 0, 1]).unwrap();
        let sf = short_form(&e).unwrap();
        assert_eq!((sf.a.clone(), sf.b.clone()), (BigInt::zero(), BigInt::from(46656)));
        let p = pt(2, 3);
        let image = sf.to_short(&p);
        assert!(sf.model.contains(&image));
        assert_eq!(sf.from_short(&image), p);

        let half = WeierstrassModel::new([from_int(0), from_int(0), from_int(0), from_int(1), BigRational::new(1.into(), 2.into())]).unwrap();
        assert!(short_form(&half).is_err());
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(torsion([0, -1, 1, 0, 0]), vec![CurvePoint::Infinity, pt(0, -1), pt(0, 0), pt(1, -1), pt(1, 0)]);
        assert_eq!(torsion([0, 0, 0, 0, 4]), vec![CurvePoint::Infinity, pt(0, -2), pt(0, 2)]);
        assert_eq!(
            torsion([0, 0, 0, 0, 1]),
            vec![CurvePoint::Infinity, pt(-1, 0), pt(0, -1), pt(0, 1), pt(2, -3), pt(2, 3)]
        );
        assert_eq!(torsion([0, -1, 1, -10, -20]).len(), 5);
        assert_eq!(torsion([0, 0, 0, 0, -2]), vec![CurvePoint::Infinity]);
        // Z/2 x Z/2
        assert_eq!(torsion([0, 0, 0, -1, 0]).len(), 4);
    }

    #[test]
    fn exact_order_examples() {
        let e = WeierstrassModel::from_i64([0, -1, 1, 0, 0]).unwrap();
        let f = short_discriminant_factorization(&e, &PrimeSet::new([11]).unwrap()).unwrap();
        assert_eq!(exact_order_points(&e, &f, 5).unwrap().len(), 4);
        assert_eq!(exact_order_points(&e, &f, 1).unwrap(), vec![CurvePoint::Infinity]);
        assert!(exact_order_points(&e, &f, 11).is_err());

        let e = WeierstrassModel::from_i64([0, 0, 0, 0, 4]).unwrap();
        let f = short_discriminant_factorization(&e, &PrimeSet::empty()).unwrap();
        assert!(exact_order_points(&e, &f, 5).unwrap().is_empty());
        assert_eq!(exact_order_points(&e, &f, 3).unwrap().len(), 2);
    }

    #[test]
    fn mismatched_factorization_rejected() {
        let e = WeierstrassModel::from_i64([0, 0, 0, 0, 4]).unwrap();
        let wrong = FactoredInteger::new(true, [(2, 3)]).unwrap();
        assert!(torsion_points(&e, &wrong).is_err());
    }

    #[test]
    fn full_two_torsion() {
        assert!(has_full_two_torsion(&WeierstrassModel::from_i64([0, 0, 0, -1, 0]).unwrap()));
        assert!(!has_full_two_torsion(&WeierstrassModel::from_i64([0, 0, 0, 0, 1]).unwrap()));
        assert!(!has_full_two_torsion(&WeierstrassModel::from_i64([0, -1, 1, -10, -20]).unwrap()));
        let scaled = WeierstrassModel::from_i64([0, 0, 0, -1, 0]).unwrap().scaled(&from_int(5)).unwrap();
        assert!(has_full_two_torsion(&scaled));
    }

    #[test]
    fn point_counts_bound_torsion() {
        // 11a3 has torsion Z/5, y^2 = x^3 - 2 has none
        let e = WeierstrassModel::from_i64([0, -1, 1, 0, 0]).unwrap();
        assert_eq!(torsion_order_multiple(&e).unwrap() % 5, 0);
        let e = WeierstrassModel::from_i64([0, 0, 0, 0, -2]).unwrap();
        assert_eq!(torsion_order_multiple(&e).unwrap(), 1);
    }
}
