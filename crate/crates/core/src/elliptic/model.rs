use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::number::rational::format_rational;

/// A Weierstrass model `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over Q with its
/// standard invariants cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassModel {
    a: [BigRational; 5],
    b2: BigRational,
    b4: BigRational,
    b6: BigRational,
    b8: BigRational,
    c4: BigRational,
    c6: BigRational,
    disc: BigRational,
    j: BigRational,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl WeierstrassModel {
    /// Builds the model `[a1, a2, a3, a4, a6]`; fails on a singular model.
    pub fn new(a: [BigRational; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = &a;
        let b2 = a1 * a1 + q(4) * a2;
        let b4 = q(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + q(4) * a6;
        let b8 = (&b2 * &b6 - &b4 * &b4) / q(4);
        let c4 = &b2 * &b2 - q(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + q(36) * &b2 * &b4 - q(216) * &b6;
        let disc = (&c4 * &c4 * &c4 - &c6 * &c6) / q(1728);
        if disc.is_zero() {
            return Err(Error::Singular);
        }
        let j = &c4 * &c4 * &c4 / &disc;
        Ok(WeierstrassModel {
            a,
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            disc,
            j,
        })
    }

    pub fn from_integers(a: [BigInt; 5]) -> Result<Self> {
        Self::new(a.map(BigRational::from_integer))
    }

    pub fn from_i64(a: [i64; 5]) -> Result<Self> {
        Self::new(a.map(q))
    }

    pub fn a_invariants(&self) -> &[BigRational; 5] {
        &self.a
    }

    pub fn a1(&self) -> &BigRational {
        &self.a[0]
    }
    pub fn a2(&self) -> &BigRational {
        &self.a[1]
    }
    pub fn a3(&self) -> &BigRational {
        &self.a[2]
    }
    pub fn a4(&self) -> &BigRational {
        &self.a[3]
    }
    pub fn a6(&self) -> &BigRational {
        &self.a[4]
    }
    pub fn b2(&self) -> &BigRational {
        &self.b2
    }
    pub fn b4(&self) -> &BigRational {
        &self.b4
    }
    pub fn b6(&self) -> &BigRational {
        &self.b6
    }
    pub fn b8(&self) -> &BigRational {
        &self.b8
    }
    pub fn c4(&self) -> &BigRational {
        &self.c4
    }
    pub fn c6(&self) -> &BigRational {
        &self.c6
    }
    pub fn discriminant(&self) -> &BigRational {
        &self.disc
    }
    pub fn j_invariant(&self) -> &BigRational {
        &self.j
    }

    pub fn is_integral(&self) -> bool {
        self.a.iter().all(|c| c.is_integer())
    }

    /// The a-invariants as integers, or a domain error for a non-integral model.
    pub fn integral_a_invariants(&self) -> Result<[BigInt; 5]> {
        if !self.is_integral() {
            return Err(Error::domain(format!("model {self} is not integral")));
        }
        Ok(self.a.clone().map(|c| c.to_integer()))
    }

    /// The isomorphic model under `(x, y) -> (u^2 x, u^3 y)`: `a_i` becomes `a_i / u^i`.
    pub fn scaled(&self, u: &BigRational) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::domain("scaling factor must be nonzero"));
        }
        let weights = [1, 2, 3, 4, 6];
        let mut a = self.a.clone();
        for (c, w) in a.iter_mut().zip(weights) {
            *c = &*c / num_traits::pow(u.clone(), w);
        }
        Self::new(a)
    }

    /// A positive integer `u` and the integral model with `a_i * u^i`, i.e. the
    /// coordinate change `(x, y) -> (x / u^2, y / u^3)`. `u` is not necessarily minimal.
    pub fn integral_rescaling(&self) -> Result<(Self, BigInt)> {
        let weights = [1usize, 2, 3, 4, 6];
        let mut u = BigInt::one();
        loop {
            let residual = self.a.iter().zip(weights).find_map(|(c, w)| {
                let v = c * BigRational::from_integer(num_traits::pow(u.clone(), w));
                (!v.is_integer()).then(|| v.denom().clone())
            });
            match residual {
                Some(d) => u *= d,
                None => break,
            }
        }
        let scaled = self.scaled(&BigRational::from_integer(u.clone()).recip())?;
        Ok((scaled, u))
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.a.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn conductor_eleven_invariants() {
        let e = WeierstrassModel::from_i64([0, -1, 1, -10, -20]).unwrap();
        assert_eq!(e.c4(), &q(496));
        assert_eq!(e.c6(), &q(20008));
        assert_eq!(e.discriminant(), &q(-161051));
        assert_eq!(e.j_invariant(), &rat(-122023936, 161051));
    }

    #[test]
    fn j_zero_and_1728() {
        let e = WeierstrassModel::from_i64([0, 0, 0, 0, 1]).unwrap();
        assert_eq!((e.b2(), e.b4(), e.b6()), (&q(0), &q(0), &q(4)));
        assert_eq!(e.c4(), &q(0));
        assert_eq!(e.discriminant(), &q(-432));
        assert_eq!(e.j_invariant(), &q(0));

        let e = WeierstrassModel::from_i64([0, 0, 0, 1, 0]).unwrap();
        assert_eq!(e.c4(), &q(-48));
        assert_eq!(e.c6(), &q(0));
        assert_eq!(e.j_invariant(), &q(1728));
    }

    #[test]
    fn singular_model_rejected() {
        // y^2 = x^3 has a cusp, y^2 = x^3 + x^2 a node
        assert!(matches!(WeierstrassModel::from_i64([0, 0, 0, 0, 0]), Err(Error::Singular)));
        assert!(matches!(WeierstrassModel::from_i64([0, 1, 0, 0, 0]), Err(Error::Singular)));
    }

    #[test]
    fn rescaling_to_integral() {
        let e = WeierstrassModel::from_i64([1, -1, 1, -10, -20]).unwrap();
        let scaled = e.scaled(&q(6)).unwrap();
        assert!(!scaled.is_integral());
        let (back, u) = scaled.integral_rescaling().unwrap();
        assert!(back.is_integral());
        assert_eq!(back.j_invariant(), e.j_invariant());
        let u = BigRational::from_integer(u);
        assert_eq!(back.scaled(&u).unwrap(), scaled);
        assert_eq!(scaled.j_invariant(), e.j_invariant());
    }

    proptest! {
        #[test]
        fn invariant_identities(a in proptest::array::uniform5(-1000i64..1000)) {
            if let Ok(e) = WeierstrassModel::from_i64(a) {
                let lhs = e.c4() * e.c4() * e.c4() - e.c6() * e.c6();
                prop_assert_eq!(lhs, q(1728) * e.discriminant());
                prop_assert_eq!(q(4) * e.b8(), e.b2() * e.b6() - e.b4() * e.b4());
                prop_assert_eq!(e.j_invariant() * e.discriminant(), e.c4() * e.c4() * e.c4());
            }
        }

        #[test]
        fn j_is_scaling_invariant(
            a in proptest::array::uniform5(-200i64..200),
            un in 1i64..50,
            ud in 1i64..50,
            neg in any::<bool>(),
        ) {
            if let Ok(e) = WeierstrassModel::from_i64(a) {
                let u = rat(if neg { -un } else { un }, ud);
                let s = e.scaled(&u).unwrap();
                prop_assert_eq!(s.j_invariant(), e.j_invariant());
                let u12 = num_traits::pow(u.clone(), 12);
                prop_assert_eq!(s.discriminant() * &u12, e.discriminant().clone());
                prop_assert_eq!(s.c4() * num_traits::pow(u, 4), e.c4().clone());
            }
        }
    }
}
