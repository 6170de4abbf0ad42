//! The fibre step: given the curves with good reduction outside S, find the
//! S-integral points of a moduli problem lying over them.

pub mod legendre;
pub mod registry;
pub mod report;
pub mod y1;

pub use legendre::{legendre_fibre_polynomial, legendre_j, level2_structures, sunit_count_level2, sunit_solutions};
pub use registry::{solver, solvers, FibreSolver, SolveRequest};
pub use report::{FibreReport, OutputFormat, Problem, SUnitSolution, Solution, TorsionSolution};
pub use y1::{check_y1_request, y1_points, Y1_LEVELS};
