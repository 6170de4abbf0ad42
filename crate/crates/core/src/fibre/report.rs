use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::data::record::CurveRecord;
use crate::elliptic::point::CurvePoint;
use crate::error::{Error, Result};
use crate::number::primes::PrimeSet;
use crate::number::rational::{self, format_rational};

/// Which moduli problem a report answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    SUnit,
    SUnitLevel2,
    Y1(u32),
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::SUnit => write!(f, "sunit"),
            Problem::SUnitLevel2 => write!(f, "sunit-level2"),
            Problem::Y1(n) => write!(f, "y1({n})"),
        }
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sunit" => Ok(Problem::SUnit),
            "sunit-level2" => Ok(Problem::SUnitLevel2),
            _ => s
                .strip_prefix("y1(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|n| n.parse().ok())
                .map(Problem::Y1)
                .ok_or_else(|| Error::usage(format!("unknown problem {s:?}"))),
        }
    }
}

impl Serialize for Problem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Problem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A solution `t` of `t + (1 - t) = 1` in S-units, with the j-invariant of its
/// Legendre fibre.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SUnitSolution {
    #[serde(with = "rational::as_string")]
    pub t: BigRational,
    #[serde(with = "rational::as_string")]
    pub j: BigRational,
}

/// A curve together with a rational point of the requested exact order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionSolution {
    pub curve: CurveRecord,
    pub point: CurvePoint,
}

impl TorsionSolution {
    fn sort_key(&self) -> (&CurveRecord, &CurvePoint) {
        (&self.curve, &self.point)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Solution {
    SUnit(SUnitSolution),
    Torsion(TorsionSolution),
}

/// Result of one fibre computation. `solutions` is empty for counting-only
/// problems; otherwise `count == solutions.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FibreReport {
    pub problem: Problem,
    pub primes: PrimeSet,
    pub count: u64,
    pub solutions: Vec<Solution>,
    #[serde(with = "rational::vec_as_strings")]
    pub j_invariants: Vec<BigRational>,
    pub elapsed_sec: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::usage(format!("unknown format {s:?} (text, json, csv)"))),
        }
    }
}

/// Wall-clock seconds rounded to four places.
pub fn round_elapsed(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e4).round() / 1e4
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl FibreReport {
    pub(crate) fn new_sunit(primes: PrimeSet, mut sols: Vec<SUnitSolution>, js: Vec<BigRational>, elapsed: Duration) -> Self {
        sols.sort();
        sols.dedup();
        FibreReport {
            problem: Problem::SUnit,
            primes,
            count: sols.len() as u64,
            solutions: sols.into_iter().map(Solution::SUnit).collect(),
            j_invariants: js,
            elapsed_sec: round_elapsed(elapsed),
        }
    }

    pub(crate) fn new_torsion(level: u32, primes: PrimeSet, mut sols: Vec<TorsionSolution>, elapsed: Duration) -> Self {
        sols.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let mut js: Vec<BigRational> = sols.iter().map(|s| s.curve.model().j_invariant().clone()).collect();
        js.sort();
        js.dedup();
        FibreReport {
            problem: Problem::Y1(level),
            primes,
            count: sols.len() as u64,
            solutions: sols.into_iter().map(Solution::Torsion).collect(),
            j_invariants: js,
            elapsed_sec: round_elapsed(elapsed),
        }
    }

    /// Structural checks: canonical order and, for enumerating problems,
    /// `count == solutions.len()`.
    pub fn check(&self) -> Result<()> {
        let enumerates = !matches!(self.problem, Problem::SUnitLevel2);
        if enumerates && self.count != self.solutions.len() as u64 {
            return Err(Error::Invariant(format!(
                "report count {} but {} solutions",
                self.count,
                self.solutions.len()
            )));
        }
        let ordered = self.solutions.windows(2).all(|w| match (&w[0], &w[1]) {
            (Solution::SUnit(a), Solution::SUnit(b)) => a.t < b.t,
            (Solution::Torsion(a), Solution::Torsion(b)) => a.sort_key() < b.sort_key(),
            _ => false,
        });
        if !ordered {
            return Err(Error::Invariant("report solutions not in canonical order".into()));
        }
        if !self.j_invariants.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invariant("report j-invariants not strictly ascending".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::usage(format!("bad report JSON: {e}")))
    }

    /// The report in `format`; solution lists appear only when `list` is set.
    pub fn render(&self, format: OutputFormat, list: bool) -> String {
        match format {
            OutputFormat::Json => {
                if list {
                    self.to_json()
                } else {
                    let mut short = self.clone();
                    short.solutions.clear();
                    short.to_json()
                }
            }
            OutputFormat::Csv => self.render_csv(list),
            OutputFormat::Text => self.render_text(list),
        }
    }

    fn render_text(&self, list: bool) -> String {
        let js: Vec<String> = self.j_invariants.iter().map(format_rational).collect();
        let mut out = format!(
            "problem: {}\nprimes: {}\ncount: {}\nj-invariants: {{{}}}\nelapsed: {:.4} s\n",
            self.problem,
            self.primes,
            self.count,
            js.join(", "),
            self.elapsed_sec
        );
        if list {
            for s in &self.solutions {
                match s {
                    Solution::SUnit(s) => {
                        out += &format!("t = {}  (j = {})\n", format_rational(&s.t), format_rational(&s.j))
                    }
                    Solution::Torsion(s) => out += &format!("{}  P = {}\n", s.curve, s.point),
                }
            }
        }
        out
    }

    fn render_csv(&self, list: bool) -> String {
        if !list {
            return format!(
                "problem,primes,count,elapsed_sec\n{},{},{},{:.4}\n",
                self.problem,
                csv_field(&self.primes.to_string()),
                self.count,
                self.elapsed_sec
            );
        }
        let mut out = match self.problem {
            Problem::Y1(_) => "label,a_invariants,point\n".to_string(),
            _ => "t,j\n".to_string(),
        };
        for s in &self.solutions {
            match s {
                Solution::SUnit(s) => out += &format!("{},{}\n", format_rational(&s.t), format_rational(&s.j)),
                Solution::Torsion(s) => {
                    let a: Vec<String> = s.curve.a_invariants.iter().map(|c| c.to_string()).collect();
                    out += &format!(
                        "{},{},{}\n",
                        s.curve.label(),
                        csv_field(&format!("[{}]", a.join(","))),
                        csv_field(&s.point.to_string())
                    );
                }
            }
        }
        out
    }
}
