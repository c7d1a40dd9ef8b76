//! Factorization, divisor enumeration in ranges, divisor counts in short
//! windows at rational exponents, and the representation-bound checker.

mod primes;
mod repbound;
mod windows;

pub use primes::{divisors_in, factor, is_prime, is_prime_u64, Factorization};
pub use repbound::{rep_bound_check, RepBoundReport, RepBoundViolation};
pub use windows::{
    window_count_below_cuberoot, window_count_cuberoot, window_count_exponent,
    window_count_exponent_counts, window_count_scan, window_regime, CubeRootWindow, ScanSummary,
    WindowCount, WindowRegime,
};
