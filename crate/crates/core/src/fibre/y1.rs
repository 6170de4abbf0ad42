use std::time::Instant;

use rayon::prelude::*;

use crate::data::dataset::{curves_good_outside, Dataset};
use crate::data::record::CurveRecord;
use crate::elliptic::divpoly::certify_exact_order;
use crate::elliptic::torsion::{exact_order_points, short_discriminant_factorization};
use crate::error::{Error, Result};
use crate::fibre::report::{FibreReport, TorsionSolution};
use crate::number::primes::{prime_divisors, PrimeSet};

/// Levels for which Y1(N) is a fine moduli space with finitely many S-integral points.
pub const Y1_LEVELS: [u32; 8] = [4, 5, 6, 7, 8, 9, 10, 12];

/// Checks the level and that `s` contains every prime dividing it.
pub fn check_y1_request(level: u32, s: &PrimeSet) -> Result<()> {
    if !Y1_LEVELS.contains(&level) {
        return Err(Error::usage(format!(
            "level {level} is not one of 4..10, 12"
        )));
    }
    let missing: Vec<u64> = prime_divisors(level as u64).into_iter().filter(|p| !s.contains(*p)).collect();
    if !missing.is_empty() {
        return Err(Error::usage(format!(
            "Y1({level}) needs every prime dividing {level} in S; missing {missing:?}"
        )));
    }
    Ok(())
}

fn points_on(record: &CurveRecord, level: u32) -> Result<Vec<TorsionSolution>> {
    let model = record.model();
    let bad = PrimeSet::new(record.bad_primes())?;
    let disc = short_discriminant_factorization(&model, &bad)?;
    let mut out = Vec::new();
    for p in exact_order_points(&model, &disc, level)? {
        if !certify_exact_order(&model, &p, level)? {
            return Err(Error::Invariant(format!(
                "{p} on {} failed division-polynomial certification at level {level}",
                record.label()
            )));
        }
        out.push(TorsionSolution {
            curve: record.clone(),
            point: p,
        });
    }
    Ok(out)
}

/// Integral points of Y1(N) over Z[1/S]: every pair of a curve with good
/// reduction outside `s` and a rational point of exact order `level` on it.
/// `P` and `-P` count separately.
pub fn y1_points(level: u32, s: &PrimeSet, data: &Dataset) -> Result<FibreReport> {
    let start = Instant::now();
    check_y1_request(level, s)?;
    let records = curves_good_outside(s, data)?;
    let per_curve: Vec<Vec<TorsionSolution>> = records
        .par_iter()
        .map(|r| points_on(r, level))
        .collect::<Result<_>>()?;
    let sols = per_curve.into_iter().flatten().collect();
    Ok(FibreReport::new_torsion(level, s.clone(), sols, start.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u64]) -> PrimeSet {
        PrimeSet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn preconditions() {
        assert!(check_y1_request(9, &set(&[2, 3])).is_ok());
        assert!(matches!(check_y1_request(11, &set(&[11])), Err(Error::Usage(_))));
        assert!(matches!(check_y1_request(3, &set(&[3])), Err(Error::Usage(_))));
        let err = check_y1_request(10, &set(&[2, 3])).unwrap_err();
        assert!(err.to_string().contains("missing [5]"), "{err}");
    }
}
