//! Cube frequency sets in short intervals: representation functions,
//! additive energy, and Sidon verification.
//!
//! The counting operations work on any finite set of integers, sorted and
//! duplicate-free; cube intervals are the case of interest here.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::arith::pow;

/// The set `{n^3 : N <= n <= N + k}`, described by its start and length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeInterval {
    start: BigUint,
    len: u64,
}

impl CubeInterval {
    /// `start` is the first root N >= 1; `len` is k, so the set has k + 1
    /// elements.
    pub fn new(start: BigUint, len: u64) -> Self {
        assert!(!start.is_zero(), "interval start must be >= 1");
        CubeInterval { start, len }
    }

    pub fn start(&self) -> &BigUint {
        &self.start
    }

    /// The interval length k.
    pub fn span(&self) -> u64 {
        self.len
    }

    /// Number of elements, k + 1.
    pub fn size(&self) -> u64 {
        self.len + 1
    }

    /// The roots N, N+1, ..., N+k.
    pub fn roots(&self) -> Vec<BigUint> {
        (0..=self.len).map(|i| &self.start + i).collect()
    }

    /// The cubes, strictly increasing.
    pub fn elements(&self) -> Vec<BigInt> {
        self.roots()
            .iter()
            .map(|r| BigInt::from(pow(r, 3)))
            .collect()
    }
}

fn assert_sorted_set(a: &[BigInt]) {
    debug_assert!(
        a.windows(2).all(|w| w[0] < w[1]),
        "set must be sorted and duplicate-free"
    );
}

/// Number of ordered pairs `(n1, n2)` in `A x A` with `n1 + n2 = m`.
/// Two-pointer scan over the sorted slice.
pub fn rep_ordered(a: &[BigInt], m: &BigInt) -> u64 {
    assert_sorted_set(a);
    if a.is_empty() {
        return 0;
    }
    let mut count = 0u64;
    let mut i = 0usize;
    let mut j = a.len() - 1;
    while i <= j {
        let s = &a[i] + &a[j];
        match s.cmp(m) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => {
                if j == 0 {
                    break;
                }
                j -= 1;
            }
            std::cmp::Ordering::Equal => {
                count += if i == j { 1 } else { 2 };
                i += 1;
                if j == 0 {
                    break;
                }
                j -= 1;
            }
        }
    }
    count
}

/// Number of unordered pairs `{n1, n2}`, repeats allowed, with sum `m`.
pub fn rep_unordered(a: &[BigInt], m: &BigInt) -> u64 {
    assert_sorted_set(a);
    if a.is_empty() {
        return 0;
    }
    let mut count = 0u64;
    let mut i = 0usize;
    let mut j = a.len() - 1;
    while i <= j {
        let s = &a[i] + &a[j];
        match s.cmp(m) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => {
                if j == 0 {
                    break;
                }
                j -= 1;
            }
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                if j == 0 {
                    break;
                }
                j -= 1;
            }
        }
    }
    count
}

/// Full map of ordered representation counts over all attained sums.
#[derive(Debug, Clone)]
pub struct RepProfile {
    /// sum -> ordered-pair count; only nonzero counts are stored.
    pub counts: BTreeMap<BigInt, u64>,
    /// `(m*, r*)`: the maximum ordered count and the smallest m attaining it.
    /// `None` only for the empty set.
    pub max: Option<(BigInt, u64)>,
    /// Additive energy, the sum of the squared counts.
    pub energy: BigUint,
}

/// Enumerate all pair sums of the sorted set and aggregate the profile.
pub fn rep_profile(a: &[BigInt]) -> RepProfile {
    assert_sorted_set(a);
    let mut counts: BTreeMap<BigInt, u64> = BTreeMap::new();
    for i in 0..a.len() {
        for j in i..a.len() {
            let s = &a[i] + &a[j];
            *counts.entry(s).or_insert(0) += if i == j { 1 } else { 2 };
        }
    }
    let mut max: Option<(BigInt, u64)> = None;
    let mut energy = BigUint::zero();
    for (m, &c) in &counts {
        energy += BigUint::from(c as u128 * c as u128);
        // strict comparison keeps the smallest m on ties
        if max.as_ref().map_or(true, |(_, best)| c > *best) {
            max = Some((m.clone(), c));
        }
    }
    RepProfile { counts, max, energy }
}

/// Witness of a Sidon failure: two distinct unordered pairs with one sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SidonWitness {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

#[derive(Debug, Clone)]
pub struct SidonResult {
    pub is_sidon: bool,
    pub witness: Option<SidonWitness>,
}

/// Decide whether every sum has at most one unordered representation
/// (repeats allowed). Pairs are enumerated in lexicographic order of
/// (smaller, larger), so the reported witness is deterministic: `(a, b)` is
/// the earliest stored pair, `(c, d)` the colliding one, with `a < c`.
pub fn is_sidon(a: &[BigInt]) -> SidonResult {
    assert_sorted_set(a);
    let n = a.len();
    let mut seen: HashMap<BigInt, (u32, u32)> = HashMap::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let s = &a[i] + &a[j];
            if let Some(&(pi, pj)) = seen.get(&s) {
                return SidonResult {
                    is_sidon: false,
                    witness: Some(SidonWitness {
                        a: a[pi as usize].clone(),
                        b: a[pj as usize].clone(),
                        c: a[i].clone(),
                        d: a[j].clone(),
                    }),
                };
            }
            seen.insert(s, (i as u32, j as u32));
        }
    }
    SidonResult {
        is_sidon: true,
        witness: None,
    }
}

/// Smallest `k <= k_max` such that the cubes of `[start, start + k]` are NOT
/// a Sidon set, or `None` if every extension up to `k_max` stays Sidon.
///
/// Incremental: each new cube's pair sums are checked against the
/// accumulated sum map, so the total work is one Sidon scan of the largest
/// interval.
pub fn sidon_threshold(start: &BigUint, k_max: u64) -> Option<u64> {
    assert!(!start.is_zero(), "interval start must be >= 1");
    let mut seen: HashMap<BigInt, (u32, u32)> = HashMap::new();
    let mut cubes: Vec<BigInt> = Vec::with_capacity(k_max as usize + 1);
    for t in 0..=k_max {
        let c = BigInt::from(pow(&(start + t), 3));
        for (i, prev) in cubes.iter().enumerate() {
            let s = prev + &c;
            if seen.contains_key(&s) {
                return Some(t);
            }
            seen.insert(s, (i as u32, t as u32));
        }
        let doubled = &c + &c;
        if seen.contains_key(&doubled) {
            return Some(t);
        }
        seen.insert(doubled, (t as u32, t as u32));
        cubes.push(c);
    }
    None
}
