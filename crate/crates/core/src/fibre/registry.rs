use crate::data::dataset::Dataset;
use crate::error::{Error, Result};
use crate::fibre::legendre::{level2_report, sunit_solutions};
use crate::fibre::report::FibreReport;
use crate::fibre::y1::y1_points;
use crate::number::primes::PrimeSet;

/// Parameters shared by all fibre problems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveRequest {
    pub primes: PrimeSet,
    pub level: Option<u32>,
}

/// A named strategy for the fibre step.
pub trait FibreSolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn solve(&self, req: &SolveRequest, data: &Dataset) -> Result<FibreReport>;
}

struct SUnit;
struct SUnitLevel2;
struct Y1;

fn no_level(name: &str, req: &SolveRequest) -> Result<()> {
    match req.level {
        Some(n) => Err(Error::usage(format!("problem {name} takes no level (got {n})"))),
        None => Ok(()),
    }
}

impl FibreSolver for SUnit {
    fn name(&self) -> &'static str {
        "sunit"
    }

    fn summary(&self) -> &'static str {
        "S-unit equation via Legendre fibres"
    }

    fn solve(&self, req: &SolveRequest, data: &Dataset) -> Result<FibreReport> {
        no_level(self.name(), req)?;
        sunit_solutions(&req.primes, data)
    }
}

impl FibreSolver for SUnitLevel2 {
    fn name(&self) -> &'static str {
        "sunit-level2"
    }

    fn summary(&self) -> &'static str {
        "S-unit count from level-2 structures (no fibre solving)"
    }

    fn solve(&self, req: &SolveRequest, data: &Dataset) -> Result<FibreReport> {
        no_level(self.name(), req)?;
        level2_report(&req.primes, data)
    }
}

impl FibreSolver for Y1 {
    fn name(&self) -> &'static str {
        "y1"
    }

    fn summary(&self) -> &'static str {
        "points of Y1(N): curves with a rational point of exact order N"
    }

    fn solve(&self, req: &SolveRequest, data: &Dataset) -> Result<FibreReport> {
        let level = req.level.ok_or_else(|| Error::usage("problem y1 needs a level"))?;
        y1_points(level, &req.primes, data)
    }
}

/// Every registered solver, in a fixed order.
pub fn solvers() -> Vec<Box<dyn FibreSolver>> {
    vec![Box::new(SUnit), Box::new(SUnitLevel2), Box::new(Y1)]
}

pub fn solver(name: &str) -> Result<Box<dyn FibreSolver>> {
    solvers().into_iter().find(|s| s.name() == name).ok_or_else(|| {
        let names: Vec<&str> = solvers().iter().map(|s| s.name()).collect();
        Error::usage(format!("unknown problem {name:?}; known: {}", names.join(", ")))
    })
}
