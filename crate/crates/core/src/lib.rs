//! Exact computation around sums of two cubes in short intervals:
//! representation functions and additive energy, Sidon verification with
//! threshold search, exact L^2/L^4 norms of sparse trigonometric
//! polynomials, divisor counts in short windows at rational exponents, and
//! the Pell-equation family of equal sums of two cubes.
//!
//! All counting and comparison results are exact big-integer/rational
//! values; floating point appears only in clearly marked display ratios.

pub mod arith;
pub mod cubes;
pub mod divisors;
pub mod l4;
pub mod pell;

pub use cubes::CubeInterval;
pub use divisors::{Factorization, ScanSummary, WindowCount};
pub use l4::{CoeffPoly, GaussianRational, NormReport};
pub use pell::{PellSolution, RamanujanQuadruple};
