use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::data::record::{is_supported_on, CurveRecord};
use crate::error::{Error, Result};
use crate::number::factored::ns_bound;
use crate::number::primes::{prime_divisors, PrimeSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceFile {
    pub name: String,
    pub first: u64,
    pub last: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceInfo {
    pub origin: String,
    pub files: Vec<SourceFile>,
}

/// Curve records grouped by conductor, complete for conductors in
/// `min_conductor ..= max_conductor`.
#[derive(Debug, Clone)]
pub struct Dataset {
    groups: BTreeMap<u64, Vec<CurveRecord>>,
    min_conductor: u64,
    max_conductor: u64,
    source: SourceInfo,
    gate_waived: bool,
}

impl Dataset {
    pub fn new(records: Vec<CurveRecord>, min_conductor: u64, max_conductor: u64, source: SourceInfo) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut groups: BTreeMap<u64, Vec<CurveRecord>> = BTreeMap::new();
        for r in records {
            if r.conductor < min_conductor || r.conductor > max_conductor {
                return Err(Error::Invariant(format!(
                    "record {} outside dataset range {min_conductor}..={max_conductor}",
                    r.label()
                )));
            }
            if !seen.insert((r.conductor, r.class_label.clone(), r.index)) {
                return Err(Error::Invariant(format!("duplicate record {}", r.label())));
            }
            groups.entry(r.conductor).or_default().push(r);
        }
        for g in groups.values_mut() {
            g.sort();
        }
        Ok(Dataset {
            groups,
            min_conductor,
            max_conductor,
            source,
            gate_waived: false,
        })
    }

    pub fn min_conductor(&self) -> u64 {
        self.min_conductor
    }

    pub fn max_conductor(&self) -> u64 {
        self.max_conductor
    }

    pub fn source(&self) -> &SourceInfo {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn conductor(&self, n: u64) -> &[CurveRecord] {
        self.groups.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All records ordered by (conductor, class, index).
    pub fn records(&self) -> impl Iterator<Item = &CurveRecord> {
        self.groups.values().flatten()
    }

    /// The same records with the coverage gate switched off: queries whose
    /// conductor bound exceeds the table run anyway, over whatever the table holds.
    /// Results are then lower bounds, not certified complete.
    pub fn waive_coverage_gate(mut self) -> Self {
        self.gate_waived = true;
        self
    }

    pub fn gate_waived(&self) -> bool {
        self.gate_waived
    }

    /// Whether every curve of conductor at most `n` is present.
    pub fn covers(&self, n: &BigInt) -> bool {
        self.min_conductor <= 1 && n.to_u64().is_some_and(|n| n <= self.max_conductor)
    }

    /// Fails unless the table holds every conductor up to N(S).
    pub fn gate(&self, s: &PrimeSet) -> Result<()> {
        let ns = ns_bound(s).value();
        if self.gate_waived || self.covers(&ns) {
            Ok(())
        } else {
            Err(Error::Coverage {
                ns_bound: ns,
                max_conductor: self.max_conductor,
            })
        }
    }
}

/// Records with good reduction outside `s`, taken as those whose conductor
/// divides N(S).
///
/// This is narrower than "conductor supported on `s`": N(S) allows exponent 5
/// at 2 and 3 at 3, so e.g. conductor 64 is dropped for S = {2}. The
/// divisibility filter is what reproduces the published counts, and with it
/// the gate is exactly the completeness condition.
pub fn curves_good_outside<'a>(s: &PrimeSet, data: &'a Dataset) -> Result<Vec<&'a CurveRecord>> {
    data.gate(s)?;
    let ns = ns_bound(s).value();
    Ok(data
        .groups
        .iter()
        .filter(|(&n, _)| is_supported_on(n, s) && (&ns % BigInt::from(n)).is_zero())
        .flat_map(|(_, g)| g.iter())
        .collect())
}

/// Distinct j-invariants of the curves with good reduction outside `s`, ascending.
pub fn shafarevich_js(s: &PrimeSet, data: &Dataset) -> Result<Vec<BigRational>> {
    let js: BTreeSet<BigRational> = curves_good_outside(s, data)?
        .into_iter()
        .map(|r| r.model().j_invariant().clone())
        .collect();
    Ok(js.into_iter().collect())
}

/// `[SL2(Z) : Gamma1(N)] = N^2 prod_{p | N} (1 - 1/p^2)`, and 1 for `N = 1`.
pub fn gamma1_index(n: u64) -> BigInt {
    if n == 1 {
        return BigInt::one();
    }
    let mut v = BigInt::from(n) * BigInt::from(n);
    for p in prime_divisors(n) {
        v = v / BigInt::from(p * p) * BigInt::from(p * p - 1);
    }
    v
}

/// `(2/3) [SL2(Z) : Gamma1(N)] N(S) prod_{p in S} (1 + 1/p)`.
pub fn corollary_bound(n: u64, s: &PrimeSet) -> BigRational {
    let mut v = BigRational::new(BigInt::from(2), BigInt::from(3))
        * BigRational::from_integer(gamma1_index(n) * ns_bound(s).value());
    for p in s.iter() {
        v *= BigRational::new(BigInt::from(p + 1), BigInt::from(p));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::record::parse_allcurves_str;
    use crate::number::rational::{from_int, rat};

    fn set(v: &[u64]) -> PrimeSet {
        PrimeSet::new(v.iter().copied()).unwrap()
    }

    fn sample() -> Dataset {
        let text = "11 a 1 [0,-1,1,-10,-20] 0 5\n\
                    11 a 2 [0,-1,1,-7820,-263580] 0 1\n\
                    11 a 3 [0,-1,1,0,0] 0 5\n\
                    32 a 1 [0,0,0,4,0] 0 4\n\
                    32 a 2 [0,0,0,-1,0] 0 4\n\
                    64 a 4 [0,0,0,-44,112] 0 4\n";
        Dataset::new(parse_allcurves_str(text).unwrap(), 1, 70, SourceInfo::default()).unwrap()
    }

    #[test]
    fn gamma1_examples() {
        assert_eq!(gamma1_index(1), BigInt::from(1));
        assert_eq!(gamma1_index(2), BigInt::from(3));
        assert_eq!(gamma1_index(4), BigInt::from(12));
        assert_eq!(gamma1_index(12), BigInt::from(96));
    }

    #[test]
    fn corollary_examples() {
        assert_eq!(corollary_bound(4, &set(&[2])), from_int(384));
        assert_eq!(corollary_bound(1, &set(&[])), rat(2, 3));
    }

    #[test]
    fn filtering_and_gate() {
        let d = sample();
        let two: Vec<String> = curves_good_outside(&set(&[2]), &d).unwrap().iter().map(|r| r.label()).collect();
        assert_eq!(two, vec!["32a1", "32a2"]);
        assert!(curves_good_outside(&set(&[]), &d).unwrap().is_empty());
        assert!(matches!(curves_good_outside(&set(&[11]), &d), Err(Error::Coverage { .. })));
        let waived = d.clone().waive_coverage_gate();
        // 64 = 2^6 divides no N(S): the exponent at 2 stops at 5
        let conductors = |s: &[u64]| -> Vec<u64> {
            curves_good_outside(&set(s), &waived).unwrap().iter().map(|r| r.conductor).collect()
        };
        assert_eq!(conductors(&[2]), vec![32, 32]);
        assert_eq!(conductors(&[2, 3]), vec![32, 32]);
        let eleven = curves_good_outside(&set(&[11]), &waived).unwrap();
        assert_eq!(eleven.len(), 3);
        assert_eq!(shafarevich_js(&set(&[2]), &d).unwrap(), vec![from_int(1728)]);
    }

    #[test]
    fn duplicate_and_out_of_range_records_rejected() {
        let text = "11 a 1 [0,-1,1,-10,-20] 0 5\n11 a 1 [0,-1,1,0,0] 0 5\n";
        assert!(Dataset::new(parse_allcurves_str(text).unwrap(), 1, 100, SourceInfo::default()).is_err());
        let text = "11 a 1 [0,-1,1,-10,-20] 0 5\n";
        assert!(Dataset::new(parse_allcurves_str(text).unwrap(), 1, 10, SourceInfo::default()).is_err());
    }
}
