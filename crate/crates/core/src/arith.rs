//! Exact big-integer kernels: integer roots and exact comparison of an
//! integer against rational powers of another integer.
//!
//! Every comparison here is decided by integer arithmetic alone. Rounding
//! appears only inside the fixed-point bracket of [`cmp_against_power_sum`],
//! and there it is directed on both sides, so any answer other than
//! [`PowerSumCmp::Unresolved`] is exact.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default bit budget for the precision ladder in [`cmp_against_power_sum`].
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// First rung of the precision ladder.
const LADDER_START_BITS: u32 = 128;

/// Largest scaled-power shift the bracket will attempt, in bits.
const MAX_SCALED_BITS: u64 = 1 << 26;

/// Floor of the cube root: the unique `r` with `r^3 <= n < (r+1)^3`.
pub fn icbrt(n: &BigUint) -> BigUint {
    n.cbrt()
}

/// Floor of the square root: the unique `r` with `r^2 <= n < (r+1)^2`.
pub fn isqrt(n: &BigUint) -> BigUint {
    n.sqrt()
}

/// Floor of the k-th root, `k >= 1`.
pub fn nth_root_floor(n: &BigUint, k: u32) -> BigUint {
    n.nth_root(k)
}

/// Smallest `r` with `r^k >= n`.
pub fn nth_root_ceil(n: &BigUint, k: u32) -> BigUint {
    let r = n.nth_root(k);
    if pow(&r, k) == *n {
        r
    } else {
        r + 1u32
    }
}

/// `base^exp` on big naturals.
pub fn pow(base: &BigUint, exp: u32) -> BigUint {
    num_traits::pow(base.clone(), exp as usize)
}

/// Ordering of `d` relative to `m^{p/q}`, computed exactly as `d^q` vs `m^p`.
pub fn pow_cmp(d: &BigUint, m: &BigUint, p: u32, q: u32) -> Ordering {
    assert!(p >= 1 && q >= 1, "pow_cmp: exponents must be positive");
    assert!(
        !d.is_zero() && !m.is_zero(),
        "pow_cmp: needs d >= 1 and m >= 1"
    );
    pow(d, q).cmp(&pow(m, p))
}

/// Outcome of comparing an integer against `m^alpha + m^beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerSumCmp {
    Resolved(Ordering),
    /// The precision cap was reached without separating the operands.
    /// Callers decide the inclusion policy.
    Unresolved,
}

impl PowerSumCmp {
    pub fn is_unresolved(&self) -> bool {
        matches!(self, PowerSumCmp::Unresolved)
    }
}

/// Ordering of `d` relative to `m^alpha + m^beta` for exponents in (0, 1).
///
/// Perfect-power components are evaluated exactly. Otherwise both powers are
/// bracketed with directed rounding at escalating precision (128 bits,
/// doubling) until the bracket excludes `d` or `precision_cap` is reached.
pub fn cmp_against_power_sum(
    d: &BigUint,
    m: &BigUint,
    alpha: &BigRational,
    beta: &BigRational,
    precision_cap: u32,
) -> PowerSumCmp {
    assert!(!d.is_zero(), "cmp_against_power_sum: d must be >= 1");
    assert!(
        *m >= BigUint::from(2u32),
        "cmp_against_power_sum: m must be >= 2"
    );
    for e in [alpha, beta] {
        assert!(
            e.is_positive() && *e < BigRational::one(),
            "cmp_against_power_sum: exponents must lie in (0, 1)"
        );
    }
    let exact_a = exact_rational_power(m, alpha);
    let exact_b = exact_rational_power(m, beta);
    match (exact_a, exact_b) {
        (Some(a), Some(b)) => PowerSumCmp::Resolved(d.cmp(&(a + b))),
        (Some(a), None) => cmp_offset_power(d, &a, m, beta),
        (None, Some(b)) => cmp_offset_power(d, &b, m, alpha),
        (None, None) => ladder_cmp(d, m, alpha, beta, precision_cap),
    }
}

/// Exact value of `m^e` when `e = p/q` in lowest terms and `m^p` is a
/// perfect q-th power. An integer `m >= 2` has a rational q-th root only
/// when the root is itself an integer.
fn exact_rational_power(m: &BigUint, e: &BigRational) -> Option<BigUint> {
    let (p, q) = exponent_parts(e);
    let mp = pow(m, p);
    let root = mp.nth_root(q);
    if pow(&root, q) == mp {
        Some(root)
    } else {
        None
    }
}

/// `d` vs `offset + m^e` where `m^e` is known irrational.
fn cmp_offset_power(d: &BigUint, offset: &BigUint, m: &BigUint, e: &BigRational) -> PowerSumCmp {
    if d <= offset {
        // the irrational power is strictly positive
        return PowerSumCmp::Resolved(Ordering::Less);
    }
    let rest = d - offset;
    let (p, q) = exponent_parts(e);
    let ord = pow_cmp(&rest, m, p, q);
    debug_assert_ne!(ord, Ordering::Equal, "irrational power equal to an integer");
    PowerSumCmp::Resolved(ord)
}

/// Directed-rounding bracket for `d` vs `m^alpha + m^beta`, both irrational.
///
/// At `b` bits the sum S satisfies `low <= S * 2^b < low + 2` where `low`
/// is the sum of the two floored scaled powers. Equality of `d` with S
/// cannot be certified from a bracket, so a persistent straddle ends in
/// `Unresolved` once the cap is reached.
fn ladder_cmp(
    d: &BigUint,
    m: &BigUint,
    alpha: &BigRational,
    beta: &BigRational,
    precision_cap: u32,
) -> PowerSumCmp {
    let (pa, qa) = exponent_parts(alpha);
    let (pb, qb) = exponent_parts(beta);
    let cap = precision_cap.max(1);
    let mut bits = LADDER_START_BITS.min(cap);
    loop {
        let low = floor_scaled_power(m, pa, qa, bits) + floor_scaled_power(m, pb, qb, bits);
        let shifted_d = d << (bits as usize);
        if shifted_d < low {
            return PowerSumCmp::Resolved(Ordering::Less);
        }
        if shifted_d >= &low + 2u32 {
            return PowerSumCmp::Resolved(Ordering::Greater);
        }
        if bits >= cap {
            return PowerSumCmp::Unresolved;
        }
        bits = bits.saturating_mul(2).min(cap);
    }
}

/// floor(m^{p/q} * 2^bits), via the exact q-th root of `m^p << (q * bits)`.
fn floor_scaled_power(m: &BigUint, p: u32, q: u32, bits: u32) -> BigUint {
    let shift = bits as u64 * q as u64;
    assert!(
        shift <= MAX_SCALED_BITS,
        "scaled power exceeds the supported precision range"
    );
    (pow(m, p) << (shift as usize)).nth_root(q)
}

/// (numerator, denominator) of a positive exponent, narrowed to u32.
fn exponent_parts(e: &BigRational) -> (u32, u32) {
    let p = e
        .numer()
        .to_u32()
        .expect("exponent numerator out of supported range");
    let q = e
        .denom()
        .to_u32()
        .expect("exponent denominator out of supported range");
    (p, q)
}

/// Error from [`parse_ratio`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioParseError {
    input: String,
    reason: &'static str,
}

impl fmt::Display for RatioParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational '{}': {}", self.input, self.reason)
    }
}

impl std::error::Error for RatioParseError {}

/// Parse `"p/q"` or a plain integer `"p"` into an exact rational.
pub fn parse_ratio(s: &str) -> Result<BigRational, RatioParseError> {
    let err = |reason| RatioParseError {
        input: s.to_string(),
        reason,
    };
    let mut parts = s.splitn(2, '/');
    let numer = BigInt::from_str(parts.next().unwrap_or("").trim())
        .map_err(|_| err("numerator is not an integer"))?;
    let denom = match parts.next() {
        None => BigInt::one(),
        Some(d) => BigInt::from_str(d.trim()).map_err(|_| err("denominator is not an integer"))?,
    };
    if denom.is_zero() {
        return Err(err("denominator is zero"));
    }
    Ok(BigRational::new(numer, denom))
}

/// Best-effort `f64` of a big natural; values beyond the f64 range saturate.
pub fn biguint_to_f64(n: &BigUint) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

/// Best-effort `f64` of an exact rational, robust to huge numerators and
/// denominators whose quotient is moderate. Display use only.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    const KEEP_BITS: u64 = 96;
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let ns = num.bits().saturating_sub(KEEP_BITS);
    let ds = den.bits().saturating_sub(KEEP_BITS);
    let nf = biguint_to_f64(&(num >> ns as usize));
    let df = biguint_to_f64(&(den >> ds as usize));
    let scale = (ns as i64 - ds as i64)
        .clamp(i32::MIN as i64, i32::MAX as i64) as i32;
    let v = nf / df * 2f64.powi(scale);
    if r.is_negative() {
        -v
    } else {
        v
    }
}
