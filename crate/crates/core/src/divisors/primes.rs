//! Factorization and primality: trial division by a cached small-prime
//! table, Pollard rho with Brent cycle detection for the rest, and
//! deterministic Miller-Rabin below 2^64 with a Baillie-PSW-style test above.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{isqrt, pow};

/// Upper bound (exclusive) of the cached trial-division prime table.
const TRIAL_BOUND: u32 = 1 << 16;

/// Deterministic Miller-Rabin base set; proven complete below 3.3 * 10^24,
/// which covers all of u64.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn small_primes() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut composite = vec![false; n];
        let mut primes = Vec::with_capacity(6600);
        for p in 2..n {
            if composite[p] {
                continue;
            }
            primes.push(p as u32);
            let mut q = p * p;
            while q < n {
                composite[q] = true;
                q += p;
            }
        }
        primes
    })
}

/// Complete prime factorization of `m >= 1`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Product of `prime^exponent`, the original value.
    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * pow(p, *e))
    }

    /// Number of divisors, the product of `exponent + 1`.
    pub fn num_divisors(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (_, e)| acc * BigUint::from(e + 1))
    }
}

/// Complete prime factorization of `m >= 1`; total and deterministic.
///
/// Every emitted prime is re-checked with the primality test before being
/// returned; a failure would mean a splitting bug, not bad input.
pub fn factor(m: &BigUint) -> Factorization {
    assert!(!m.is_zero(), "factor is defined for m >= 1");
    let mut acc: BTreeMap<BigUint, u32> = BTreeMap::new();
    if let Some(v) = m.to_u64() {
        factor_u64_into(v, &mut acc);
    } else {
        factor_big_into(m.clone(), &mut acc);
    }
    let factors: Vec<(BigUint, u32)> = acc.into_iter().collect();
    for (p, _) in &factors {
        assert!(is_prime(p), "factor emitted a composite part {p}");
    }
    let out = Factorization { factors };
    debug_assert_eq!(out.value(), *m);
    out
}

fn bump(acc: &mut BTreeMap<BigUint, u32>, p: BigUint, e: u32) {
    *acc.entry(p).or_insert(0) += e;
}

fn factor_u64_into(mut n: u64, acc: &mut BTreeMap<BigUint, u32>) {
    for &p in small_primes() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            bump(acc, BigUint::from(p), e);
        }
    }
    if n == 1 {
        return;
    }
    let mut stack = vec![n];
    while let Some(v) = stack.pop() {
        if is_prime_u64(v) {
            bump(acc, BigUint::from(v), 1);
            continue;
        }
        let g = pollard_split_u64(v);
        stack.push(g);
        stack.push(v / g);
    }
}

fn factor_big_into(mut n: BigUint, acc: &mut BTreeMap<BigUint, u32>) {
    for &p in small_primes() {
        let p64 = p as u64;
        if (&n % p64).is_zero() {
            let mut e = 0;
            while (&n % p64).is_zero() {
                n /= p64;
                e += 1;
            }
            bump(acc, BigUint::from(p64), e);
        }
    }
    if n.is_one() {
        return;
    }
    let mut stack = vec![n];
    while let Some(v) = stack.pop() {
        if let Some(v64) = v.to_u64() {
            factor_u64_into(v64, acc);
            continue;
        }
        if is_prime(&v) {
            bump(acc, v, 1);
            continue;
        }
        let g = pollard_split_big(&v);
        stack.push(&v / &g);
        stack.push(g);
    }
}

/// Nontrivial factor of an odd composite with no prime part < 2^16.
/// Deterministic: the polynomial offset starts at 1 and is bumped on failure.
fn pollard_split_u64(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        if let Some(g) = pollard_brent_u64(n, c) {
            return g;
        }
        c += 1;
    }
}

fn pollard_split_big(n: &BigUint) -> BigUint {
    let mut c = 1u64;
    loop {
        if let Some(g) = pollard_brent_big(n, c) {
            return g;
        }
        c += 1;
    }
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut r = 1u64 % n;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, n);
        }
        a = mulmod(a, a, n);
        e >>= 1;
    }
    r
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primality for arbitrary naturals: deterministic Miller-Rabin below 2^64,
/// Baillie-PSW (strong base-2 Miller-Rabin plus a strong Lucas-Selfridge
/// test) above.
pub fn is_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => is_prime_bpsw(n),
    }
}

pub(crate) fn is_prime_bpsw(n: &BigUint) -> bool {
    if n.is_even() {
        return *n == BigUint::from(2u32);
    }
    for &p in &[3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if (n % p).is_zero() {
            return *n == BigUint::from(p);
        }
    }
    // a perfect square can never satisfy jacobi(D, n) = -1 below
    let r = isqrt(n);
    if &r * &r == *n {
        return false;
    }
    miller_rabin_base_big(n, 2) && strong_lucas_selfridge(n)
}

fn miller_rabin_base_big(n: &BigUint, base: u32) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n > 1 is odd");
    let d = &n_minus_1 >> s;
    let mut x = BigUint::from(base).modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol (a / n) for odd positive n.
fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    let reduced = a.mod_floor(&BigInt::from(n.clone()));
    let mut a = reduced.magnitude().clone();
    let mut n = n.clone();
    let mut t = 1i32;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32().unwrap() == 3 && (&n % 4u32).to_u32().unwrap() == 3 {
            t = -t;
        }
        a %= &n;
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas_selfridge(n: &BigUint) -> bool {
    // find D in 5, -7, 9, -11, ... with jacobi(D, n) = -1
    let mut d_abs = 5i64;
    let mut sign = 1i64;
    let d = loop {
        let d = BigInt::from(d_abs * sign);
        match jacobi(&d, n) {
            -1 => break d,
            0 => return false, // shares a factor with n (n > |D| here)
            _ => {}
        }
        d_abs += 2;
        sign = -sign;
        assert!(d_abs < 1_000_000, "Selfridge search ran away");
    };
    let n_int = BigInt::from(n.clone());
    let p = BigInt::one();
    let q = (BigInt::one() - &d) / BigInt::from(4u32);

    let np1 = n + 1u32;
    let s = np1.trailing_zeros().expect("n is odd so n+1 is even");
    let idx = &np1 >> s;

    // Lucas ladder for U_idx, V_idx, Q^idx (mod n), most significant bit first.
    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.mod_floor(&n_int);
    let half = |x: &BigInt| -> BigInt {
        let x = x.mod_floor(&n_int);
        if x.is_even() {
            (&x >> 1) % &n_int
        } else {
            ((&x + &n_int) >> 1) % &n_int
        }
    };
    let top = idx.bits();
    for i in (0..top - 1).rev() {
        // double
        u = (&u * &v).mod_floor(&n_int);
        v = (&v * &v - BigInt::from(2u32) * &qk).mod_floor(&n_int);
        qk = (&qk * &qk).mod_floor(&n_int);
        if idx.bit(i) {
            // increment
            let nu = half(&(&p * &u + &v));
            let nv = half(&(&d * &u + &p * &v));
            u = nu;
            v = nv;
            qk = (&qk * q.mod_floor(&n_int)).mod_floor(&n_int);
        }
    }

    if u.is_zero() {
        return true;
    }
    // check V_{idx * 2^r} for r = 0 .. s-1
    for _ in 0..s {
        if v.is_zero() {
            return true;
        }
        v = (&v * &v - BigInt::from(2u32) * &qk).mod_floor(&n_int);
        qk = (&qk * &qk).mod_floor(&n_int);
    }
    false
}

fn pollard_brent_u64(n: u64, c: u64) -> Option<u64> {
    let step = |x: u64| {
        let t = mulmod(x, x, n);
        let t = t + c;
        if t >= n {
            t - n
        } else {
            t
        }
    };
    let m = 128u64;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = 0u64;
    let mut ys = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0u64;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = step(y);
                q = mulmod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += m;
        }
        r <<= 1;
    }
    if g == n {
        loop {
            ys = step(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn pollard_brent_big(n: &BigUint, c: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let step = |x: &BigUint| (x * x + &c) % n;
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let m = 64u64;
    let one = BigUint::one();
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = BigUint::zero();
    let mut ys = BigUint::zero();
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0u64;
        while k < r && g == one {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = step(&y);
                q = &q * abs_diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r <<= 1;
    }
    if g == *n {
        loop {
            ys = step(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if g > one {
                break;
            }
        }
    }
    (g != *n).then_some(g)
}

/// All divisors `d` of `m` with `lo <= d <= hi`, ascending. Divisors are
/// generated from the factorization; partial products above `hi` are
/// abandoned early.
pub fn divisors_in(m: &BigUint, lo: &BigUint, hi: &BigUint) -> Vec<BigUint> {
    assert!(lo <= hi, "divisors_in needs lo <= hi");
    let f = factor(m);
    let mut out = Vec::new();
    push_divisors(&f.factors, BigUint::one(), lo, hi, &mut out);
    out.sort_unstable();
    out
}

fn push_divisors(
    factors: &[(BigUint, u32)],
    current: BigUint,
    lo: &BigUint,
    hi: &BigUint,
    out: &mut Vec<BigUint>,
) {
    if &current > hi {
        return;
    }
    match factors.split_first() {
        None => {
            if &current >= lo {
                out.push(current);
            }
        }
        Some(((p, e), rest)) => {
            let mut c = current;
            for i in 0..=*e {
                push_divisors(rest, c.clone(), lo, hi, out);
                if i < *e {
                    c *= p;
                    if &c > hi {
                        break;
                    }
                }
            }
        }
    }
}
