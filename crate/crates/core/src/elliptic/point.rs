use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::elliptic::model::WeierstrassModel;
use crate::error::{Error, Result};
use crate::number::rational::{format_rational, parse_rational};

/// Points sort with the identity first, then by `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Infinity,
    Affine { x: BigRational, y: BigRational },
}

impl CurvePoint {
    pub fn affine(x: BigRational, y: BigRational) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&BigRational> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&BigRational> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { y, .. } => Some(y),
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine { x, y } => {
                write!(f, "({},{})", format_rational(x), format_rational(y))
            }
        }
    }
}

impl FromStr for CurvePoint {
    type Err = Error;

    /// Parses the `Display` form: `O` or `(x,y)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "O" {
            return Ok(CurvePoint::Infinity);
        }
        let (x, y) = s
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .and_then(|s| s.split_once(','))
            .ok_or_else(|| Error::domain(format!("cannot parse point {s:?}")))?;
        Ok(CurvePoint::affine(parse_rational(x)?, parse_rational(y)?))
    }
}

impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CurvePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Order of a point, or `Infinite` once no multiple up to 16 vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointOrder {
    Finite(u32),
    Infinite,
}

impl PointOrder {
    pub fn finite(self) -> Option<u32> {
        match self {
            PointOrder::Finite(n) => Some(n),
            PointOrder::Infinite => None,
        }
    }
}

pub const MAX_TORSION_ORDER: u32 = 16;

impl WeierstrassModel {
    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                let [a1, a2, a3, a4, a6] = self.a_invariants();
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = ((x + a2) * x + a4) * x + a6;
                lhs == rhs
            }
        }
    }

    fn check_on_curve(&self, p: &CurvePoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::domain(format!("point {p} is not on {self}")))
        }
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: -y - self.a1() * x - self.a3(),
            },
        }
    }

    /// Chord and tangent addition; both inputs must lie on the curve.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        self.check_on_curve(p)?;
        self.check_on_curve(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub(crate) fn add_unchecked(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let [a1, a2, a3, a4, a6] = self.a_invariants();
        let (lambda, nu) = if x1 == x2 {
            let denom = y1 + y2 + a1 * x2 + a3;
            if denom.is_zero() {
                return CurvePoint::Infinity;
            }
            let two = BigRational::from_integer(2.into());
            let three = BigRational::from_integer(3.into());
            let d = &two * y1 + a1 * x1 + a3;
            let lambda = (&three * x1 * x1 + &two * a2 * x1 + a4 - a1 * y1) / &d;
            let nu = (-(x1 * x1 * x1) + a4 * x1 + &two * a6 - a3 * y1) / &d;
            (lambda, nu)
        } else {
            let dx = x2 - x1;
            ((y2 - y1) / &dx, (y1 * x2 - y2 * x1) / &dx)
        };
        let x3 = &lambda * &lambda + a1 * &lambda - a2 - x1 - x2;
        let y3 = -(&lambda + a1) * &x3 - nu - a3;
        CurvePoint::Affine { x: x3, y: y3 }
    }

    /// `k * P` by double and add; negative `k` uses `-P`.
    pub fn mul(&self, k: i64, p: &CurvePoint) -> Result<CurvePoint> {
        self.check_on_curve(p)?;
        let mut base = if k < 0 { self.neg(p) } else { p.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Least `n <= 16` with `nP = O`, found by repeated addition.
    pub fn point_order(&self, p: &CurvePoint) -> Result<PointOrder> {
        self.check_on_curve(p)?;
        let mut acc = p.clone();
        for n in 1..=MAX_TORSION_ORDER {
            if acc.is_infinity() {
                return Ok(PointOrder::Finite(n));
            }
            acc = self.add_unchecked(&acc, p);
        }
        Ok(PointOrder::Infinite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rational::from_int;

    fn pt(x: i64, y: i64) -> CurvePoint {
        CurvePoint::affine(from_int(x), from_int(y))
    }

    #[test]
    fn group_law_examples() {
        let e = WeierstrassModel::from_i64([0, 0, 0, 0, 1]).unwrap();
        assert_eq!(e.add(&pt(0, 1), &pt(0, 1)).unwrap(), pt(0, -1));
        assert_eq!(e.add(&pt(2, 3), &pt(0, 1)).unwrap(), pt(-1, 0));
        assert_eq!(e.add(&pt(2, 3), &CurvePoint::Infinity).unwrap(), pt(2, 3));
        assert_eq!(e.add(&pt(2, 3), &pt(2, -3)).unwrap(), CurvePoint::Infinity);
        assert!(e.add(&pt(1, 1), &pt(0, 1)).is_err());
    }

    #[test]
    fn order_examples() {
        let e = WeierstrassModel::from_i64([0, 0, 0, 0, 1]).unwrap();
        assert_eq!(e.point_order(&CurvePoint::Infinity).unwrap(), PointOrder::Finite(1));
        assert_eq!(e.point_order(&pt(-1, 0)).unwrap(), PointOrder::Finite(2));
        assert_eq!(e.point_order(&pt(0, 1)).unwrap(), PointOrder::Finite(3));
        assert_eq!(e.point_order(&pt(2, 3)).unwrap(), PointOrder::Finite(6));

        let e = WeierstrassModel::from_i64([0, -1, 1, 0, 0]).unwrap();
        assert_eq!(e.point_order(&pt(0, 0)).unwrap(), PointOrder::Finite(5));
        assert_eq!(e.mul(5, &pt(0, 0)).unwrap(), CurvePoint::Infinity);
        assert_eq!(e.mul(-1, &pt(0, 0)).unwrap(), e.neg(&pt(0, 0)));

        // (3, 5) generates the free part of y^2 = x^3 - 2
        let e = WeierstrassModel::from_i64([0, 0, 0, 0, -2]).unwrap();
        assert_eq!(e.point_order(&pt(3, 5)).unwrap(), PointOrder::Infinite);
    }

    #[test]
    fn canonical_point_order() {
        let mut v = vec![pt(1, 0), CurvePoint::Infinity, pt(0, -1), pt(0, 0)];
        v.sort();
        assert_eq!(v, vec![CurvePoint::Infinity, pt(0, -1), pt(0, 0), pt(1, 0)]);
        assert_eq!(pt(0, -1).to_string(), "(0,-1)");
    }
}
