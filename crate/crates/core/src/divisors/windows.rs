//! Divisor counts in short windows anchored at rational powers of the
//! argument: cube-root windows of exact rational width, and
//! `[m^alpha, m^alpha + m^beta]` windows with escalating-precision endpoint
//! comparisons. Includes the range scan with deterministic parallel merge.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{cmp_against_power_sum, icbrt, nth_root_ceil, pow, PowerSumCmp};

use super::primes::divisors_in;

/// Windows wider than this walk candidate integers directly; narrower logic
/// falls back to factorization-based enumeration.
const WALK_LIMIT: u64 = 4096;

/// Divisors of one integer inside one window, with exact endpoint policy.
#[derive(Debug, Clone)]
pub struct WindowCount {
    pub m: BigUint,
    pub lo_desc: String,
    pub hi_desc: String,
    pub count: u64,
    pub divisors: Vec<BigUint>,
    /// Divisors included because their upper-endpoint comparison hit the
    /// precision cap (conservative overcount; never silent).
    pub unresolved: u64,
}

/// Placement of a rational-width window relative to the cube root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeRootWindow {
    /// `[m^{1/3} - delta, m^{1/3}]`
    Below,
    /// `[m^{1/3} - delta, m^{1/3} + delta]`
    Symmetric,
}

/// Count divisors of `m` in `[m^{1/3} - delta, m^{1/3}]`, fully exactly:
/// `d <= m^{1/3}` iff `d^3 <= m`, and `d >= m^{1/3} - delta` iff
/// `(d + delta)^3 >= m` after clearing denominators.
pub fn window_count_below_cuberoot(m: &BigUint, delta: &BigRational) -> WindowCount {
    window_count_cuberoot(m, delta, CubeRootWindow::Below)
}

/// Cube-root window count with selectable placement. Exact in both
/// directions; `unresolved` is always zero here.
pub fn window_count_cuberoot(m: &BigUint, delta: &BigRational, mode: CubeRootWindow) -> WindowCount {
    assert!(!m.is_zero(), "window_count_cuberoot needs m >= 1");
    assert!(!delta.is_negative(), "window width must be non-negative");
    let p = delta.numer().magnitude().clone();
    let q = delta.denom().magnitude().clone();
    let q3 = pow(&q, 3);
    let scaled = m * &q3;

    // smallest d >= 1 with (d*q + p)^3 >= m*q^3
    let ceil_root = nth_root_ceil(&scaled, 3);
    let lo = if ceil_root <= p {
        BigUint::one()
    } else {
        ceil_div(&(&ceil_root - &p), &q).max(BigUint::one())
    };

    let hi = match mode {
        CubeRootWindow::Below => icbrt(m),
        // largest d with (d*q - p)^3 <= m*q^3; for d*q <= p the bound holds
        CubeRootWindow::Symmetric => (icbrt(&scaled) + &p) / &q,
    };

    let divisors = divisor_candidates(m, &lo, &hi);
    let (lo_desc, hi_desc) = match mode {
        CubeRootWindow::Below => (format!("{m}^(1/3) - {delta}"), format!("{m}^(1/3)")),
        CubeRootWindow::Symmetric => {
            (format!("{m}^(1/3) - {delta}"), format!("{m}^(1/3) + {delta}"))
        }
    };
    WindowCount {
        m: m.clone(),
        lo_desc,
        hi_desc,
        count: divisors.len() as u64,
        divisors,
        unresolved: 0,
    }
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    (a + b - 1u32) / b
}

/// Count divisors of `m` in `[m^alpha, m^alpha + m^beta]`.
///
/// The lower endpoint is an exact power comparison. The upper endpoint goes
/// through [`cmp_against_power_sum`]; candidates whose comparison stays
/// unresolved at `precision_cap` are included and tallied.
pub fn window_count_exponent(
    m: &BigUint,
    alpha: &BigRational,
    beta: &BigRational,
    precision_cap: u32,
) -> WindowCount {
    let (divisors, unresolved) = exponent_window_divisors(m, alpha, beta, precision_cap);
    WindowCount {
        m: m.clone(),
        lo_desc: format!("{m}^({alpha})"),
        hi_desc: format!("{m}^({alpha}) + {m}^({beta})"),
        count: divisors.len() as u64,
        divisors,
        unresolved,
    }
}

/// Shared core for the exponent window: the counted divisors in ascending
/// order plus the number of unresolved inclusions.
fn exponent_window_divisors(
    m: &BigUint,
    alpha: &BigRational,
    beta: &BigRational,
    precision_cap: u32,
) -> (Vec<BigUint>, u64) {
    assert!(
        *m >= BigUint::from(2u32),
        "exponent windows are defined for m >= 2"
    );
    let (pa, qa) = exponent_parts(alpha);
    let (pb, qb) = exponent_parts(beta);
    // exact lower endpoint: smallest d with d^qa >= m^pa
    let lo = nth_root_ceil(&pow(m, pa), qa);
    // superset bound: m^alpha + m^beta <= lo + ceil(m^beta)
    let hi_sup = &lo + nth_root_ceil(&pow(m, pb), qb);

    let mut kept = Vec::new();
    let mut unresolved = 0u64;
    for d in divisor_candidates(m, &lo, &hi_sup) {
        match cmp_against_power_sum(&d, m, alpha, beta, precision_cap) {
            // once a divisor lands above the endpoint, every later one does too
            PowerSumCmp::Resolved(Ordering::Greater) => break,
            PowerSumCmp::Resolved(_) => kept.push(d),
            PowerSumCmp::Unresolved => {
                unresolved += 1;
                kept.push(d);
            }
        }
    }
    (kept, unresolved)
}

fn exponent_parts(e: &BigRational) -> (u32, u32) {
    let p = e.numer().to_u32().expect("exponent numerator out of range");
    let q = e.denom().to_u32().expect("exponent denominator out of range");
    (p, q)
}

/// Divisors of `m` in `[lo, hi]`: walked directly when the window is narrow,
/// enumerated from the factorization otherwise. Ascending either way.
fn divisor_candidates(m: &BigUint, lo: &BigUint, hi: &BigUint) -> Vec<BigUint> {
    if lo > hi {
        return Vec::new();
    }
    let one = BigUint::one();
    let lo = lo.clone().max(one);
    let width = (hi - &lo).to_u64();
    match width {
        Some(w) if w <= WALK_LIMIT => {
            if let (Some(m64), Some(lo64), Some(hi64)) = (m.to_u64(), lo.to_u64(), hi.to_u64()) {
                (lo64..=hi64)
                    .filter(|d| m64 % d == 0)
                    .map(BigUint::from)
                    .collect()
            } else {
                let mut out = Vec::new();
                let mut d = lo;
                while &d <= hi {
                    if (m % &d).is_zero() {
                        out.push(d.clone());
                    }
                    d += 1u32;
                }
                out
            }
        }
        _ => divisors_in(m, &lo, hi),
    }
}

/// Exponent regime of a window scan. Bounded counts are proven for
/// `beta < alpha^2` and conjectured all the way up to `beta < alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowRegime {
    Proven,
    Conjectural,
}

impl WindowRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            WindowRegime::Proven => "proven",
            WindowRegime::Conjectural => "conjectural",
        }
    }
}

/// Classify the exponent pair, or `None` when `beta >= alpha` (out of range).
pub fn window_regime(alpha: &BigRational, beta: &BigRational) -> Option<WindowRegime> {
    if *beta < alpha * alpha {
        Some(WindowRegime::Proven)
    } else if beta < alpha {
        Some(WindowRegime::Conjectural)
    } else {
        None
    }
}

/// Result of scanning `window_count_exponent` over a contiguous range.
#[derive(Debug, Clone)]
pub struct ScanSummary {
    pub m_from: BigUint,
    pub m_to: BigUint,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub regime: WindowRegime,
    pub max_count: u64,
    /// Smallest m attaining `max_count`; `m_from` when every count is zero.
    pub argmax: BigUint,
    pub histogram: BTreeMap<u64, u64>,
    pub unresolved_total: u64,
    /// Running maxima in scan order: each entry is the smallest m whose
    /// count exceeds every earlier count (zero counts are not reported).
    pub new_max_events: Vec<(BigUint, u64)>,
}

const SCAN_CHUNK: u64 = 1024;
const SCAN_BLOCK: u64 = 1 << 16;

#[derive(Default)]
struct ChunkOut {
    histogram: BTreeMap<u64, u64>,
    unresolved: u64,
    /// chunk-local strictly increasing count records (count >= 1)
    prefix_max: Vec<(BigUint, u64)>,
}

/// Scan all `m` in `[m_from, m_to]`, returning the maximum window count, the
/// smallest argmax, and a histogram of counts. The range is partitioned
/// across the rayon pool; the merge is order-deterministic, so the result
/// and the event stream are independent of the worker count.
///
/// `on_new_max` fires, in m-order, for every new running maximum.
pub fn window_count_scan(
    m_from: &BigUint,
    m_to: &BigUint,
    alpha: &BigRational,
    beta: &BigRational,
    precision_cap: u32,
    mut on_new_max: Option<&mut dyn FnMut(&BigUint, u64)>,
) -> ScanSummary {
    assert!(
        *m_from >= BigUint::from(2u32),
        "scan range must start at m >= 2"
    );
    assert!(m_from <= m_to, "empty scan range");
    let regime =
        window_regime(alpha, beta).expect("scan exponents need beta < alpha (and < 1)");
    let len = (m_to - m_from + 1u32)
        .to_u64()
        .expect("scan range too large to iterate");

    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    let mut unresolved_total = 0u64;
    let mut max_count = 0u64;
    let mut argmax = m_from.clone();
    let mut events: Vec<(BigUint, u64)> = Vec::new();

    let mut block_start = 0u64;
    while block_start < len {
        let block_len = SCAN_BLOCK.min(len - block_start);
        let n_chunks = block_len.div_ceil(SCAN_CHUNK);
        let outs: Vec<ChunkOut> = (0..n_chunks)
            .into_par_iter()
            .map(|ci| {
                let offset = block_start + ci * SCAN_CHUNK;
                let chunk_len = SCAN_CHUNK.min(block_len - ci * SCAN_CHUNK);
                let mut out = ChunkOut::default();
                let mut m = m_from + offset;
                for _ in 0..chunk_len {
                    let (count, unresolved) =
                        window_count_exponent_counts(&m, alpha, beta, precision_cap);
                    *out.histogram.entry(count).or_insert(0) += 1;
                    out.unresolved += unresolved;
                    if count >= 1
                        && out.prefix_max.last().map_or(true, |&(_, c)| count > c)
                    {
                        out.prefix_max.push((m.clone(), count));
                    }
                    m += 1u32;
                }
                out
            })
            .collect();
        for out in outs {
            for (count, freq) in out.histogram {
                *histogram.entry(count).or_insert(0) += freq;
            }
            unresolved_total += out.unresolved;
            for (m, count) in out.prefix_max {
                if count > max_count {
                    max_count = count;
                    argmax = m.clone();
                    if let Some(cb) = on_new_max.as_deref_mut() {
                        cb(&m, count);
                    }
                    events.push((m, count));
                }
            }
        }
        block_start += block_len;
    }

    ScanSummary {
        m_from: m_from.clone(),
        m_to: m_to.clone(),
        alpha: alpha.clone(),
        beta: beta.clone(),
        regime,
        max_count,
        argmax,
        histogram,
        unresolved_total,
        new_max_events: events,
    }
}

/// Count-only variant of [`window_count_exponent`].
pub fn window_count_exponent_counts(
    m: &BigUint,
    alpha: &BigRational,
    beta: &BigRational,
    precision_cap: u32,
) -> (u64, u64) {
    let (divisors, unresolved) = exponent_window_divisors(m, alpha, beta, precision_cap);
    (divisors.len() as u64, unresolved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn ratio(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn divisors_u64(wc: &WindowCount) -> Vec<u64> {
        wc.divisors.iter().map(|d| d.to_u64().unwrap()).collect()
    }

    #[test]
    fn cuberoot_window_examples() {
        let wc = window_count_below_cuberoot(&big(6916), &ratio(1, 1));
        assert_eq!(wc.count, 1);
        assert_eq!(divisors_u64(&wc), vec![19]);
        assert_eq!(wc.unresolved, 0);

        let wc = window_count_below_cuberoot(&big(27), &ratio(0, 1));
        assert_eq!(divisors_u64(&wc), vec![3]);

        let wc = window_count_below_cuberoot(&big(8), &ratio(1, 2));
        assert_eq!(divisors_u64(&wc), vec![2]);
    }

    #[test]
    fn cuberoot_window_excludes_below() {
        // 6916^{1/3} ~ 19.05; with delta = 6 the window reaches down to ~13.05,
        // so 14 stays out but 19 and 14's neighbor 13 is out too
        let wc = window_count_below_cuberoot(&big(6916), &ratio(6, 1));
        assert_eq!(divisors_u64(&wc), vec![14, 19]);
        let wc = window_count_below_cuberoot(&big(6916), &ratio(5, 1));
        assert_eq!(divisors_u64(&wc), vec![19]);
    }

    #[test]
    fn symmetric_window_reaches_above() {
        // 6916^{1/3} ~ 19.05: symmetric width 7 spans [12.05, 26.05] -> 13, 14, 19, 26
        let wc = window_count_cuberoot(&big(6916), &ratio(7, 1), CubeRootWindow::Symmetric);
        assert_eq!(divisors_u64(&wc), vec![13, 14, 19, 26]);
    }

    #[test]
    fn exponent_window_examples() {
        let cap = crate::arith::DEFAULT_PRECISION_CAP;
        let wc = window_count_exponent(&big(64), &ratio(1, 2), &ratio(1, 6), cap);
        assert_eq!(divisors_u64(&wc), vec![8]);

        let wc = window_count_exponent(&big(4096), &ratio(1, 2), &ratio(1, 4), cap);
        assert_eq!(divisors_u64(&wc), vec![64]);

        let wc = window_count_exponent(&big(720_720), &ratio(1, 3), &ratio(1, 5), cap);
        assert_eq!(divisors_u64(&wc), vec![90, 91, 99, 104]);
        assert_eq!(wc.count, 4);
        assert_eq!(wc.unresolved, 0);
    }

    #[test]
    fn regime_classification() {
        assert_eq!(
            window_regime(&ratio(1, 3), &ratio(1, 10)),
            Some(WindowRegime::Proven)
        );
        assert_eq!(
            window_regime(&ratio(1, 3), &ratio(1, 5)),
            Some(WindowRegime::Conjectural)
        );
        assert_eq!(window_regime(&ratio(1, 3), &ratio(1, 2)), None);
        assert_eq!(window_regime(&ratio(1, 3), &ratio(1, 3)), None);
    }

    #[test]
    fn scan_small_range_finds_square_divisors() {
        let s = window_count_scan(
            &big(2),
            &big(100),
            &ratio(1, 2),
            &ratio(1, 4),
            crate::arith::DEFAULT_PRECISION_CAP,
            None,
        );
        assert!(s.max_count >= 1, "perfect squares put a divisor at m^(1/2)");
        assert_eq!(s.regime, WindowRegime::Conjectural);
        let total: u64 = s.histogram.values().sum();
        assert_eq!(total, 99);
    }

    #[test]
    fn scan_shards_merge_to_whole() {
        let alpha = ratio(1, 3);
        let beta = ratio(1, 10);
        let cap = crate::arith::DEFAULT_PRECISION_CAP;
        let whole = window_count_scan(&big(2), &big(5000), &alpha, &beta, cap, None);
        let left = window_count_scan(&big(2), &big(2500), &alpha, &beta, cap, None);
        let right = window_count_scan(&big(2501), &big(5000), &alpha, &beta, cap, None);

        let mut hist = left.histogram.clone();
        for (k, v) in &right.histogram {
            *hist.entry(*k).or_insert(0) += v;
        }
        assert_eq!(hist, whole.histogram);

        let (max, argmax) = if right.max_count > left.max_count {
            (right.max_count, right.argmax.clone())
        } else {
            (left.max_count, left.argmax.clone())
        };
        assert_eq!(max, whole.max_count);
        assert_eq!(argmax, whole.argmax);
    }

    #[test]
    fn scan_events_are_prefix_maxima() {
        let s = window_count_scan(
            &big(2),
            &big(20_000),
            &ratio(1, 3),
            &ratio(1, 10),
            crate::arith::DEFAULT_PRECISION_CAP,
            None,
        );
        let mut running = 0;
        for (_, c) in &s.new_max_events {
            assert!(*c > running);
            running = *c;
        }
        assert_eq!(running, s.max_count);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn cuberoot_window_monotone_in_delta(m in 1u64..500_000, dn in 0i64..40, dd in 1i64..8) {
            let narrow = window_count_below_cuberoot(&big(m), &ratio(dn, dd));
            let wide = window_count_below_cuberoot(&big(m), &ratio(dn + 3, dd));
            prop_assert!(narrow.count <= wide.count);
            for d in &narrow.divisors {
                prop_assert!(wide.divisors.contains(d));
            }
        }

        #[test]
        fn exponent_window_monotone_in_beta(m in 2u64..200_000) {
            let cap = crate::arith::DEFAULT_PRECISION_CAP;
            let alpha = ratio(1, 3);
            let narrow = window_count_exponent(&big(m), &alpha, &ratio(1, 10), cap);
            let wide = window_count_exponent(&big(m), &alpha, &ratio(1, 5), cap);
            prop_assert!(narrow.count <= wide.count);
        }

        #[test]
        fn exponent_window_matches_naive(m in 2u64..50_000) {
            // oracle: classify every divisor with the endpoint comparison
            let cap = crate::arith::DEFAULT_PRECISION_CAP;
            let alpha = ratio(1, 3);
            let beta = ratio(1, 5);
            let wc = window_count_exponent(&big(m), &alpha, &beta, cap);
            let mut expect = Vec::new();
            for d in 1..=m {
                if m % d != 0 {
                    continue;
                }
                let lower_ok = crate::arith::pow_cmp(&big(d), &big(m), 1, 3) != Ordering::Less;
                let upper_ok = !matches!(
                    cmp_against_power_sum(&big(d), &big(m), &alpha, &beta, cap),
                    PowerSumCmp::Resolved(Ordering::Greater)
                );
                if lower_ok && upper_ok {
                    expect.push(d);
                }
            }
            prop_assert_eq!(divisors_u64(&wc), expect);
        }
    }
}
