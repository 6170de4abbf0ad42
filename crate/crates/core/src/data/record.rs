use std::cmp::Ordering;
use std::fmt;
use std::io::BufRead;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize};

use crate::elliptic::model::WeierstrassModel;
use crate::error::{Error, Result};
use crate::number::factored::{expect_smooth, FactoredInteger};
use crate::number::primes::{prime_divisors, PrimeSet};

const TORSION_ORDERS: [u32; 12] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16];

/// One line of an allcurves table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveRecord {
    pub conductor: u64,
    pub class_label: String,
    pub index: u32,
    #[serde(serialize_with = "serialize_ainvs", deserialize_with = "deserialize_ainvs")]
    pub a_invariants: [BigInt; 5],
    pub rank: u32,
    pub torsion_order: u32,
}

fn serialize_ainvs<S: serde::Serializer>(a: &[BigInt; 5], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_ainvs(a))
}

fn deserialize_ainvs<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<[BigInt; 5], D::Error> {
    let s = String::deserialize(d)?;
    parse_ainvs(&s).map_err(serde::de::Error::custom)
}

fn parse_ainvs(field: &str) -> std::result::Result<[BigInt; 5], String> {
    let inner = field
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| "a-invariants must be written [a1,a2,a3,a4,a6]".to_string())?;
    let coeffs = inner
        .split(',')
        .map(|c| c.parse::<BigInt>().map_err(|_| format!("bad a-invariant {c:?}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    coeffs
        .try_into()
        .map_err(|v: Vec<BigInt>| format!("expected 5 a-invariants, found {}", v.len()))
}

fn format_ainvs(a: &[BigInt; 5]) -> String {
    let parts: Vec<String> = a.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Class labels run a..z, ba..zz, ...: shorter labels first.
pub fn class_label_cmp(a: &str, b: &str) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl CurveRecord {
    pub fn model(&self) -> WeierstrassModel {
        WeierstrassModel::from_integers(self.a_invariants.clone()).expect("records are validated nonsingular")
    }

    /// Cremona label such as `11a1`.
    pub fn label(&self) -> String {
        format!("{}{}{}", self.conductor, self.class_label, self.index)
    }

    /// Primes dividing the conductor.
    pub fn bad_primes(&self) -> Vec<u64> {
        prime_divisors(self.conductor)
    }

    /// The discriminant of the stored model, factored over the bad primes.
    pub fn discriminant_factorization(&self) -> Result<FactoredInteger> {
        let primes = PrimeSet::new(self.bad_primes())?;
        expect_smooth(&self.model().discriminant().to_integer(), &primes)
    }

    pub fn sort_key(&self) -> (u64, usize, &str, u32) {
        (self.conductor, self.class_label.len(), &self.class_label, self.index)
    }

    /// The record in allcurves format.
    pub fn to_line(&self) -> String {
        format!(
            "{} {} {} {} {} {}",
            self.conductor,
            self.class_label,
            self.index,
            format_ainvs(&self.a_invariants),
            self.rank,
            self.torsion_order
        )
    }
}

impl fmt::Display for CurveRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.label(), format_ainvs(&self.a_invariants))
    }
}

impl PartialOrd for CurveRecord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CurveRecord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then_with(|| self.a_invariants.cmp(&other.a_invariants))
    }
}

fn parse_line(line: &str) -> std::result::Result<Option<CurveRecord>, String> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let fields: Vec<&str> = trimmed.split_ascii_whitespace().collect();
    if fields.len() < 6 {
        return Err(format!("expected 6 fields, found {}", fields.len()));
    }
    let conductor: u64 = fields[0].parse().map_err(|_| "bad conductor".to_string())?;
    if conductor == 0 {
        return Err("conductor must be positive".into());
    }
    let class_label = fields[1];
    if !class_label.bytes().all(|b| b.is_ascii_lowercase()) {
        return Err("class label must be lowercase letters".into());
    }
    let index: u32 = fields[2].parse().map_err(|_| "bad curve index".to_string())?;
    if index == 0 {
        return Err("curve index must be positive".into());
    }
    let a_invariants = parse_ainvs(fields[3])?;
    let rank: u32 = fields[4].parse().map_err(|_| "bad rank".to_string())?;
    let torsion_order: u32 = fields[5].parse().map_err(|_| "bad torsion order".to_string())?;
    if !TORSION_ORDERS.contains(&torsion_order) {
        return Err(format!("torsion order {torsion_order} is impossible over Q"));
    }
    if WeierstrassModel::from_integers(a_invariants.clone()).is_err() {
        return Err("a-invariants define a singular curve".into());
    }
    Ok(Some(CurveRecord {
        conductor,
        class_label: class_label.to_string(),
        index,
        a_invariants,
        rank,
        torsion_order,
    }))
}

/// Parses allcurves text, keeping only records whose conductor passes `keep`.
/// Lines skipped by `keep` are not validated beyond their first field.
pub fn parse_allcurves_filtered(reader: impl BufRead, keep: impl Fn(u64) -> bool) -> Result<Vec<CurveRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            text: String::new(),
            reason: e.to_string(),
        })?;
        if let Some(first) = line.split_ascii_whitespace().next() {
            if let Ok(n) = first.parse::<u64>() {
                if !keep(n) {
                    continue;
                }
            }
        }
        match parse_line(&line) {
            Ok(Some(r)) => out.push(r),
            Ok(None) => {}
            Err(reason) => {
                return Err(Error::Parse {
                    line: line_no,
                    text: line,
                    reason,
                })
            }
        }
    }
    Ok(out)
}

pub fn parse_allcurves(reader: impl BufRead) -> Result<Vec<CurveRecord>> {
    parse_allcurves_filtered(reader, |_| true)
}

pub fn parse_allcurves_str(text: &str) -> Result<Vec<CurveRecord>> {
    parse_allcurves(text.as_bytes())
}

/// Records in allcurves format, one per line.
pub fn serialize_allcurves<'a>(records: impl IntoIterator<Item = &'a CurveRecord>) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&r.to_line());
        s.push('\n');
    }
    s
}

/// Whether every prime factor of `n` lies in `s`.
pub fn is_supported_on(mut n: u64, s: &PrimeSet) -> bool {
    for p in s.iter() {
        while n.is_multiple_of(p) {
            n /= p;
        }
    }
    n == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: &str = "11 a 1 [0,-1,1,-10,-20] 0 5";

    #[test]
    fn golden_line_roundtrip() {
        let recs = parse_allcurves_str(GOLDEN).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert_eq!((r.conductor, r.class_label.as_str(), r.index), (11, "a", 1));
        assert_eq!(r.a_invariants, [0, -1, 1, -10, -20].map(BigInt::from));
        assert_eq!((r.rank, r.torsion_order), (0, 5));
        assert_eq!(r.to_line(), GOLDEN);
        assert_eq!(r.label(), "11a1");
        assert_eq!(parse_allcurves_str(&serialize_allcurves(&recs)).unwrap(), recs);
    }

    #[test]
    fn comments_blanks_and_extra_fields() {
        let text = "# comment\n\n11 a 1 [0,-1,1,-10,-20] 0 5 extra\t fields\n";
        assert_eq!(parse_allcurves_str(text).unwrap().len(), 1);
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let text = "11 a 1 [0,-1,1,-10,-20] 0 5\n11 a [0,-1,1,-10,-20] 0 5\n";
        match parse_allcurves_str(text) {
            Err(Error::Parse { line, text, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(text, "11 a [0,-1,1,-10,-20] 0 5");
            }
            other => panic!("unexpected {other:?}"),
        }
        for bad in [
            "11 a 1 [0,-1,1,-10] 0 5",
            "11 a 1 [0, -1,1,-10,-20] 0 5",
            "11 A 1 [0,-1,1,-10,-20] 0 5",
            "11 a 1 [0,0,0,0,0] 0 1",
            "11 a 1 [0,-1,1,-10,-20] 0 11",
            "0 a 1 [0,-1,1,-10,-20] 0 5",
        ] {
            let err = parse_allcurves_str(&format!("# header\n{bad}\n")).unwrap_err();
            assert!(matches!(err, Error::Parse { line: 2, .. }), "{bad}: {err}");
        }
    }

    #[test]
    fn bad_primes_and_discriminant() {
        let mut r = parse_allcurves_str(GOLDEN).unwrap().remove(0);
        assert_eq!(r.bad_primes(), vec![11]);
        assert_eq!(r.discriminant_factorization().unwrap().value(), BigInt::from(-161051));
        r.conductor = 990;
        assert_eq!(r.bad_primes(), vec![2, 3, 5, 11]);
    }

    #[test]
    fn label_order() {
        let mut v = vec!["ba", "c", "a", "z", "bb"];
        v.sort_by(|a, b| class_label_cmp(a, b));
        assert_eq!(v, vec!["a", "c", "z", "ba", "bb"]);
    }
}
