//! Checks, over a cube interval, that every unordered representation count
//! is dominated by the divisor count of `4m` in the cube-root window of
//! exact width `k^2/N`, and that each representation's divisor `u + v`
//! reconstructs the pair through `(4m/d - d^2)/3 = (u - v)^2`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;

use crate::arith::{isqrt, pow};

use super::windows::window_count_below_cuberoot;

/// One failed check. All three kinds would indicate an implementation bug:
/// the underlying inequality is unconditional.
#[derive(Debug, Clone)]
pub enum RepBoundViolation {
    /// rep_unordered(m) exceeded the window divisor count of 4m.
    CountExceedsWindow {
        m: BigUint,
        rep_unordered: u64,
        window_count: u64,
    },
    /// Some representation's u + v was not among the counted divisors.
    RepDivisorOutsideWindow { m: BigUint, d: BigUint },
    /// `(4m/d - d^2)/3` failed to equal `(v - u)^2` for a representation.
    ReconstructionFailed { m: BigUint, d: BigUint },
}

impl RepBoundViolation {
    pub fn m(&self) -> &BigUint {
        match self {
            RepBoundViolation::CountExceedsWindow { m, .. }
            | RepBoundViolation::RepDivisorOutsideWindow { m, .. }
            | RepBoundViolation::ReconstructionFailed { m, .. } => m,
        }
    }
}

/// Outcome of [`rep_bound_check`].
#[derive(Debug, Clone)]
pub struct RepBoundReport {
    pub start: BigUint,
    pub len: u64,
    /// Exact window width `len^2 / start`.
    pub delta: BigRational,
    /// Distinct representable sums examined.
    pub sums_checked: u64,
    /// Total unordered representations across all sums.
    pub representations: u64,
    /// Reconstruction identities verified (one per representation).
    pub reconstructions: u64,
    pub violations: Vec<RepBoundViolation>,
    /// Largest observed rep/window-count ratio, as an exact pair, with the
    /// smallest attaining m.
    pub max_ratio: (u64, u64),
    pub max_ratio_at: BigUint,
}

impl RepBoundReport {
    pub fn max_ratio_f64(&self) -> f64 {
        self.max_ratio.0 as f64 / self.max_ratio.1 as f64
    }
}

struct ChunkOut {
    representations: u64,
    reconstructions: u64,
    violations: Vec<RepBoundViolation>,
    best: Option<(u64, u64, BigUint)>, // (rep, window count, m)
}

/// Run the bound check over the cubes of `[start, start + len]`.
pub fn rep_bound_check(start: &BigUint, len: u64) -> RepBoundReport {
    assert!(!num_traits::Zero::is_zero(start), "interval start must be >= 1");
    assert!(len >= 1, "the check needs at least two cubes");
    let delta = BigRational::new(
        BigInt::from(len) * BigInt::from(len),
        BigInt::from(start.clone()),
    );

    let roots: Vec<BigUint> = (0..=len).map(|i| start + i).collect();
    let cubes: Vec<BigUint> = roots.iter().map(|r| pow(r, 3)).collect();

    let mut sums: HashMap<BigUint, Vec<(u32, u32)>> = HashMap::new();
    for i in 0..=len as usize {
        for j in i..=len as usize {
            sums.entry(&cubes[i] + &cubes[j])
                .or_default()
                .push((i as u32, j as u32));
        }
    }
    let mut entries: Vec<(BigUint, Vec<(u32, u32)>)> = sums.into_iter().collect();
    entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let sums_checked = entries.len() as u64;

    let outs: Vec<ChunkOut> = entries
        .par_chunks(512)
        .map(|chunk| check_chunk(chunk, &roots, &delta))
        .collect();

    let mut report = RepBoundReport {
        start: start.clone(),
        len,
        delta,
        sums_checked,
        representations: 0,
        reconstructions: 0,
        violations: Vec::new(),
        max_ratio: (0, 1),
        max_ratio_at: BigUint::from(0u32),
    };
    for out in outs {
        report.representations += out.representations;
        report.reconstructions += out.reconstructions;
        report.violations.extend(out.violations);
        if let Some((rep, count, m)) = out.best {
            // exact fraction comparison; ties keep the smaller m (chunks are ordered)
            let (crep, ccount) = report.max_ratio;
            if (crep as u128) * (count as u128) < (rep as u128) * (ccount as u128) {
                report.max_ratio = (rep, count);
                report.max_ratio_at = m;
            }
        }
    }
    report
}

fn check_chunk(
    chunk: &[(BigUint, Vec<(u32, u32)>)],
    roots: &[BigUint],
    delta: &BigRational,
) -> ChunkOut {
    let mut out = ChunkOut {
        representations: 0,
        reconstructions: 0,
        violations: Vec::new(),
        best: None,
    };
    let three = BigUint::from(3u32);
    for (m, reps) in chunk {
        let four_m = m * 4u32;
        let wc = window_count_below_cuberoot(&four_m, delta);
        let rep = reps.len() as u64;
        out.representations += rep;
        if rep > wc.count {
            out.violations.push(RepBoundViolation::CountExceedsWindow {
                m: m.clone(),
                rep_unordered: rep,
                window_count: wc.count,
            });
        }
        for &(i, j) in reps {
            let (u, v) = (&roots[i as usize], &roots[j as usize]);
            let d = u + v;
            if wc.divisors.binary_search(&d).is_err() {
                out.violations
                    .push(RepBoundViolation::RepDivisorOutsideWindow {
                        m: m.clone(),
                        d: d.clone(),
                    });
                continue;
            }
            // 4m = d^3 + 3(v-u)^2 d, so (4m/d - d^2)/3 must be the square (v-u)^2
            let quotient = &four_m / &d;
            let dd = &d * &d;
            let ok = quotient >= dd && {
                let t = &quotient - &dd;
                let (q3, r3) = num_integer::Integer::div_rem(&t, &three);
                if !num_traits::Zero::is_zero(&r3) {
                    false
                } else {
                    let w = isqrt(&q3);
                    &w * &w == q3 && w == v - u
                }
            };
            if ok {
                out.reconstructions += 1;
            } else {
                out.violations.push(RepBoundViolation::ReconstructionFailed {
                    m: m.clone(),
                    d,
                });
            }
        }
        if wc.count > 0 {
            let better = match &out.best {
                None => true,
                Some((brep, bcount, _)) => {
                    (*brep as u128) * (wc.count as u128) < (rep as u128) * (*bcount as u128)
                }
            };
            if better {
                out.best = Some((rep, wc.count, m.clone()));
            }
        }
    }
    out
}
