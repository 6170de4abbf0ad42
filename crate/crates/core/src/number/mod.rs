//! Exact integer and rational arithmetic: prime sets, factored integers, S-unit
//! tests and rational root finding for integer polynomials.

pub mod factored;
pub mod poly;
pub mod primes;
pub mod rational;

pub use factored::{divisors, expect_smooth, ns_bound, smooth_factor, smooth_part, FactoredInteger};
pub use poly::{rational_roots, rational_roots_by_lifting, s_unit_roots, IntPolynomial};
pub use primes::{is_prime, prime_divisors, PrimeSet};
pub use rational::{exact_sqrt, is_s_integral, is_s_unit};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
