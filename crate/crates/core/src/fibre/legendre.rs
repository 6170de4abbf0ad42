use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::data::dataset::{curves_good_outside, shafarevich_js, Dataset};
use crate::elliptic::torsion::has_full_two_torsion;
use crate::error::{Error, Result};
use crate::fibre::report::{FibreReport, Problem, SUnitSolution};
use crate::number::poly::{s_unit_roots, IntPolynomial};
use crate::number::primes::PrimeSet;
use crate::number::rational::{from_int, is_s_unit};

/// `2^8 den(j) (t^2 - t + 1)^3 - num(j) t^2 (t - 1)^2`, whose roots are the
/// Legendre parameters `t` with `j(y^2 = x(x-1)(x-t)) = j`.
pub fn legendre_fibre_polynomial(j: &BigRational) -> IntPolynomial {
    let q = IntPolynomial::from_i64(&[1, -1, 1]).pow(3);
    let t2 = IntPolynomial::from_i64(&[0, -1, 1]).pow(2);
    &q.scale(&(BigInt::from(256) * j.denom())) - &t2.scale(j.numer())
}

/// `j(t) = 2^8 (t^2 - t + 1)^3 / (t^2 (t - 1)^2)`.
pub fn legendre_j(t: &BigRational) -> Result<BigRational> {
    let one = BigRational::one();
    let d = t * t * (t - &one) * (t - &one);
    if d == BigRational::from_integer(BigInt::from(0)) {
        return Err(Error::domain("t = 0 and t = 1 are degenerate Legendre parameters"));
    }
    let q = t * t - t + &one;
    Ok(from_int(256) * &q * &q * &q / d)
}

fn fibre_solutions(j: &BigRational, s: &PrimeSet) -> Result<Vec<SUnitSolution>> {
    let one = BigRational::one();
    let mut out = Vec::new();
    for t in s_unit_roots(&legendre_fibre_polynomial(j), s)? {
        if is_s_unit(&(&one - &t), s)? {
            out.push(SUnitSolution { t, j: j.clone() });
        }
    }
    Ok(out)
}

/// Solutions of the S-unit equation, found fibre by fibre over the j-invariants
/// of curves with good reduction outside `s`.
pub fn sunit_solutions(s: &PrimeSet, data: &Dataset) -> Result<FibreReport> {
    let start = Instant::now();
    let js = shafarevich_js(s, data)?;
    let per_j: Vec<Vec<SUnitSolution>> = js.par_iter().map(|j| fibre_solutions(j, s)).collect::<Result<_>>()?;
    let sols: Vec<SUnitSolution> = per_j.into_iter().flatten().collect();
    let hit: BTreeSet<BigRational> = sols.iter().map(|x| x.j.clone()).collect();
    Ok(FibreReport::new_sunit(s.clone(), sols, hit.into_iter().collect(), start.elapsed()))
}

/// Number of level-2 structures on curves with full rational 2-torsion, per j:
/// 6, dropping to 3 at j = 1728 and 2 at j = 0.
pub fn level2_structures(j: &BigRational) -> u64 {
    if *j == from_int(1728) {
        3
    } else if *j == from_int(0) {
        2
    } else {
        6
    }
}

/// Counts S-unit solutions without solving any fibre: sums level-2 structures
/// over the j-invariants with full rational 2-torsion.
///
/// A level-2 structure over Z[1/S] needs E[2] etale, so the count is 0 unless
/// 2 is in S, matching the parity argument on `t + (1 - t) = 1`.
pub fn sunit_count_level2(s: &PrimeSet, data: &Dataset) -> Result<(u64, Vec<BigRational>)> {
    let curves = curves_good_outside(s, data)?;
    if !s.contains(2) {
        return Ok((0, Vec::new()));
    }
    let js: BTreeSet<BigRational> = curves
        .par_iter()
        .filter_map(|r| {
            let m = r.model();
            has_full_two_torsion(&m).then(|| m.j_invariant().clone())
        })
        .collect();
    let count = js.iter().map(level2_structures).sum();
    Ok((count, js.into_iter().collect()))
}

pub(crate) fn level2_report(s: &PrimeSet, data: &Dataset) -> Result<FibreReport> {
    let start = Instant::now();
    let (count, js) = sunit_count_level2(s, data)?;
    Ok(FibreReport {
        problem: Problem::SUnitLevel2,
        primes: s.clone(),
        count,
        solutions: Vec::new(),
        j_invariants: js,
        elapsed_sec: crate::fibre::report::round_elapsed(start.elapsed()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::poly::rational_roots_by_lifting;
    use crate::number::rational::rat;

    #[test]
    fn j1728_fibre() {
        let p = legendre_fibre_polynomial(&from_int(1728));
        assert_eq!(p.degree(), Some(6));
        let roots = rational_roots_by_lifting(&p).unwrap();
        assert_eq!(roots, vec![from_int(-1), rat(1, 2), from_int(2)]);
    }

    #[test]
    fn j0_fibre_has_no_rational_roots() {
        let p = legendre_fibre_polynomial(&from_int(0));
        assert_eq!(p, IntPolynomial::from_i64(&[1, -1, 1]).pow(3).scale(&BigInt::from(256)));
        assert!(rational_roots_by_lifting(&p).unwrap().is_empty());
    }

    #[test]
    fn j_21952_over_9_fibre() {
        let j = rat(21952, 9);
        let roots = rational_roots_by_lifting(&legendre_fibre_polynomial(&j)).unwrap();
        let want = vec![rat(-2, 1), rat(-1, 2), rat(1, 3), rat(2, 3), rat(3, 2), from_int(3)];
        assert_eq!(roots, want);
        for t in &roots {
            assert_eq!(legendre_j(t).unwrap(), j);
        }
    }

    #[test]
    fn level2_weights() {
        assert_eq!(level2_structures(&from_int(1728)), 3);
        assert_eq!(level2_structures(&from_int(0)), 2);
        assert_eq!(level2_structures(&rat(35152, 9)), 6);
    }
}
