//! Exact L^2 and L^4 norms for finitely supported trigonometric polynomials
//! with Gaussian-rational coefficients, and the representation-count bound
//! on the L^4/L^2 ratio.
//!
//! For `f(x) = sum a_n e(nx)`, Parseval gives `||f||_2^2 = sum |a_n|^2`, and
//! since `||f||_4^4 = ||f^2||_2^2`, the fourth power of the L^4 norm is the
//! squared coefficient mass of the self-convolution. Both are exact
//! rationals here; nothing is rounded.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{parse_ratio, ratio_to_f64};
use crate::cubes::rep_profile;

/// A complex number with exact rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn one() -> Self {
        GaussianRational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn double(&self) -> Self {
        GaussianRational {
            re: &self.re * BigInt::from(2),
            im: &self.im * BigInt::from(2),
        }
    }

    /// |z|^2 = re^2 + im^2, exactly.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

/// A finitely supported coefficient map `n -> a_n`; zero coefficients are
/// never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoeffPoly {
    terms: BTreeMap<BigInt, GaussianRational>,
}

impl CoeffPoly {
    pub fn new() -> Self {
        Self::default()
    }

    /// Accumulate a coefficient at frequency `n`; the entry disappears if
    /// the running value hits zero.
    pub fn add_term(&mut self, n: BigInt, coeff: GaussianRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&n) {
            None => {
                self.terms.insert(n, coeff);
            }
            Some(existing) => {
                let merged = existing.add(&coeff);
                if !merged.is_zero() {
                    self.terms.insert(n, merged);
                }
            }
        }
    }

    /// The polynomial with coefficient 1 at every given frequency.
    pub fn all_ones<I: IntoIterator<Item = BigInt>>(freqs: I) -> Self {
        let mut poly = CoeffPoly::new();
        for n in freqs {
            poly.add_term(n, GaussianRational::one());
        }
        poly
    }

    pub fn terms(&self) -> &BTreeMap<BigInt, GaussianRational> {
        &self.terms
    }

    pub fn support(&self) -> Vec<BigInt> {
        self.terms.keys().cloned().collect()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Parse the JSON wire form
    /// `{"terms": [{"n": "<decimal>", "re": "p/q", "im": "p/q"}]}`.
    /// Repeated frequencies accumulate.
    pub fn from_json(s: &str) -> Result<Self, PolyFormatError> {
        let spec: PolyJson =
            serde_json::from_str(s).map_err(|e| PolyFormatError(format!("bad JSON: {e}")))?;
        let mut poly = CoeffPoly::new();
        for term in spec.terms {
            let n = BigInt::from_str(term.n.trim())
                .map_err(|_| PolyFormatError(format!("bad frequency '{}'", term.n)))?;
            let re = parse_ratio(&term.re).map_err(|e| PolyFormatError(e.to_string()))?;
            let im = parse_ratio(&term.im).map_err(|e| PolyFormatError(e.to_string()))?;
            poly.add_term(n, GaussianRational::new(re, im));
        }
        Ok(poly)
    }

    pub fn to_json(&self) -> String {
        let spec = PolyJson {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| TermJson {
                    n: n.to_string(),
                    re: c.re.to_string(),
                    im: c.im.to_string(),
                })
                .collect(),
        };
        serde_json::to_string(&spec).expect("serializing plain strings cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    n: String,
    re: String,
    im: String,
}

/// Malformed polynomial input.
#[derive(Debug, Clone)]
pub struct PolyFormatError(String);

impl fmt::Display for PolyFormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid polynomial: {}", self.0)
    }
}

impl std::error::Error for PolyFormatError {}

/// `||f||_2^2 = sum |a_n|^2`, exactly.
pub fn l2_sq(f: &CoeffPoly) -> BigRational {
    f.terms.values().map(|c| c.norm_sq()).sum()
}

/// `||f||_4^4`, exactly: the squared L^2 mass of `f * f`.
///
/// The self-convolution `c_m = sum_{n1 + n2 = m} a_{n1} a_{n2}` runs over
/// unordered support pairs with doubling, which is the true O(s^2) sparsity
/// cost for support size s.
pub fn l4_fourth(f: &CoeffPoly) -> BigRational {
    let terms: Vec<(&BigInt, &GaussianRational)> = f.terms.iter().collect();
    let mut conv: BTreeMap<BigInt, GaussianRational> = BTreeMap::new();
    let mut bump = |key: BigInt, val: GaussianRational| match conv.remove(&key) {
        None => {
            conv.insert(key, val);
        }
        Some(existing) => {
            conv.insert(key, existing.add(&val));
        }
    };
    for i in 0..terms.len() {
        let (ni, ai) = terms[i];
        bump(ni + ni, ai.mul(ai));
        for (nj, aj) in terms.iter().skip(i + 1) {
            bump(ni + *nj, ai.mul(aj).double());
        }
    }
    conv.values().map(|c| c.norm_sq()).sum()
}

/// The L^4-vs-L^2 comparison certificate for one polynomial.
#[derive(Debug, Clone)]
pub struct NormReport {
    pub l2_sq: BigRational,
    pub l4_4: BigRational,
    /// Maximum ordered representation count over the support.
    pub max_rep: u64,
    /// `max_rep * (||f||_2^2)^2`.
    pub bound_rhs: BigRational,
    /// `||f||_4^4 <= bound_rhs`; false would be a build-breaking bug.
    pub holds: bool,
}

/// Evaluate both norms and the representation-count bound
/// `||f||_4^4 <= max_rep * ||f||_2^4` on the support of `f`.
pub fn l4_bound_check(f: &CoeffPoly) -> NormReport {
    let l2 = l2_sq(f);
    let l4 = l4_fourth(f);
    let support = f.support();
    let max_rep = rep_profile(&support).max.map_or(0, |(_, r)| r);
    let bound_rhs = &l2 * &l2 * BigInt::from(max_rep);
    let holds = l4 <= bound_rhs;
    NormReport {
        l2_sq: l2,
        l4_4: l4,
        max_rep,
        bound_rhs,
        holds,
    }
}

/// The zero polynomial has no L^4/L^2 ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroPolynomial;

impl fmt::Display for ZeroPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "the zero polynomial has no L4/L2 ratio")
    }
}

impl std::error::Error for ZeroPolynomial {}

/// `||f||_4 / ||f||_2` as a double, derived from the exact rationals.
/// The one approximate, display-only number in this module.
pub fn ratio_l4_l2(f: &CoeffPoly) -> Result<f64, ZeroPolynomial> {
    if f.is_zero() {
        return Err(ZeroPolynomial);
    }
    let l4 = ratio_to_f64(&l4_fourth(f));
    let l2 = ratio_to_f64(&l2_sq(f));
    Ok(l4.powf(0.25) / l2.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn int_rat(p: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(p))
    }

    fn unit_at(n: i64) -> CoeffPoly {
        CoeffPoly::all_ones([BigInt::from(n)])
    }

    fn pair_poly(n: i64, m: i64) -> CoeffPoly {
        CoeffPoly::all_ones([BigInt::from(n), BigInt::from(m)])
    }

    #[test]
    fn l2_examples() {
        assert_eq!(l2_sq(&unit_at(5)), int_rat(1));
        assert_eq!(l2_sq(&pair_poly(3, 8)), int_rat(2));
        let mut f = CoeffPoly::new();
        f.add_term(
            BigInt::from(7),
            GaussianRational::new(rat(3, 2), rat(1, 2)),
        );
        assert_eq!(l2_sq(&f), rat(5, 2));
    }

    #[test]
    fn l4_examples() {
        assert_eq!(l4_fourth(&unit_at(9)), int_rat(1));
        assert_eq!(l4_fourth(&pair_poly(4, 11)), int_rat(6));
        let ramanujan = CoeffPoly::all_ones(
            [1, 729, 1000, 1728].map(BigInt::from),
        );
        assert_eq!(l4_fourth(&ramanujan), int_rat(36));
    }

    #[test]
    fn bound_check_examples() {
        let ramanujan = CoeffPoly::all_ones([1, 729, 1000, 1728].map(BigInt::from));
        let r = l4_bound_check(&ramanujan);
        assert_eq!(r.l4_4, int_rat(36));
        assert_eq!(r.max_rep, 4);
        assert_eq!(r.bound_rhs, int_rat(64));
        assert!(r.holds);

        let r = l4_bound_check(&unit_at(3));
        assert_eq!(r.l4_4, int_rat(1));
        assert_eq!(r.bound_rhs, int_rat(1));
        assert!(r.holds, "the single-frequency case is the equality case");

        let sidon = CoeffPoly::all_ones([1, 8, 27].map(BigInt::from));
        let r = l4_bound_check(&sidon);
        assert_eq!(r.l4_4, int_rat(15));
        assert_eq!(r.max_rep, 2);
        assert_eq!(r.bound_rhs, int_rat(18));
        assert!(r.holds);
    }

    #[test]
    fn ratio_examples() {
        assert!((ratio_l4_l2(&unit_at(2)).unwrap() - 1.0).abs() < 1e-12);
        let ramanujan = CoeffPoly::all_ones([1, 729, 1000, 1728].map(BigInt::from));
        let expect = 36f64.powf(0.25) / 2.0;
        assert!((ratio_l4_l2(&ramanujan).unwrap() - expect).abs() < 1e-12);
        let two = pair_poly(0, 5);
        let expect = 6f64.powf(0.25) / 2f64.sqrt();
        assert!((ratio_l4_l2(&two).unwrap() - expect).abs() < 1e-12);
        assert_eq!(ratio_l4_l2(&CoeffPoly::new()), Err(ZeroPolynomial));
    }

    #[test]
    fn zero_coefficients_vanish() {
        let mut f = CoeffPoly::new();
        f.add_term(BigInt::from(1), GaussianRational::new(rat(1, 2), rat(0, 1)));
        f.add_term(BigInt::from(1), GaussianRational::new(rat(-1, 2), rat(0, 1)));
        assert!(f.is_zero());
        f.add_term(BigInt::from(2), GaussianRational::new(rat(0, 1), rat(0, 1)));
        assert!(f.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"terms":[{"n":"1","re":"1","im":"0"},
                             {"n":"-1000000","re":"-3/2","im":"1/2"}]}"#;
        let f = CoeffPoly::from_json(s).unwrap();
        assert_eq!(f.num_terms(), 2);
        let again = CoeffPoly::from_json(&f.to_json()).unwrap();
        assert_eq!(f, again);
        assert!(CoeffPoly::from_json("{").is_err());
        assert!(CoeffPoly::from_json(r#"{"terms":[{"n":"1","re":"1/0","im":"0"}]}"#).is_err());
    }

    /// Discrete mean of |f|^4 over K equispaced points. Exact (up to f64
    /// rounding) as soon as K exceeds every frequency of |f|^4, because
    /// equispaced averages of e(mx) vanish unless K divides m. Samples the
    /// angle through integer arithmetic so no precision is lost to n*x.
    fn quadrature_l4(f: &CoeffPoly, samples: i64) -> f64 {
        use num_traits::ToPrimitive;
        let terms: Vec<(i64, f64, f64)> = f
            .terms()
            .iter()
            .map(|(n, c)| {
                (
                    n.to_i64().unwrap(),
                    ratio_to_f64(&c.re),
                    ratio_to_f64(&c.im),
                )
            })
            .collect();
        let mut total = 0.0;
        for k in 0..samples {
            let mut re = 0.0;
            let mut im = 0.0;
            for &(n, a, b) in &terms {
                let phase = (n as i128 * k as i128).rem_euclid(samples as i128) as f64
                    / samples as f64;
                let (s, c) = (2.0 * std::f64::consts::PI * phase).sin_cos();
                re += a * c - b * s;
                im += a * s + b * c;
            }
            total += (re * re + im * im).powi(2);
        }
        total / samples as f64
    }

    #[test]
    fn quadrature_oracle_two_terms() {
        let f = pair_poly(4, 11);
        let exact = ratio_to_f64(&l4_fourth(&f));
        let grid = quadrature_l4(&f, 256);
        assert!((exact - 6.0).abs() < 1e-12);
        assert!((grid - exact).abs() < 1e-9, "grid {grid} vs exact {exact}");
    }

    fn arb_poly() -> impl Strategy<Value = CoeffPoly> {
        proptest::collection::vec(
            (
                -1_000_000i64..1_000_000,
                -50i64..50,
                1i64..30,
                -50i64..50,
                1i64..30,
            ),
            1..12,
        )
        .prop_map(|terms| {
            let mut poly = CoeffPoly::new();
            for (n, rn, rd, in_, id) in terms {
                poly.add_term(
                    BigInt::from(n),
                    GaussianRational::new(rat(rn, rd), rat(in_, id)),
                );
            }
            poly
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn power_mean_inequality(f in arb_poly()) {
            let l2 = l2_sq(&f);
            let l4 = l4_fourth(&f);
            prop_assert!(l4 >= &l2 * &l2, "||f||_4^4 must dominate ||f||_2^4");
        }

        #[test]
        fn bound_always_holds(f in arb_poly()) {
            prop_assert!(l4_bound_check(&f).holds);
        }

        #[test]
        fn translation_invariance(f in arb_poly(), t in -1_000i64..1_000) {
            let mut shifted = CoeffPoly::new();
            for (n, c) in f.terms() {
                shifted.add_term(n + BigInt::from(t), c.clone());
            }
            prop_assert_eq!(l2_sq(&f), l2_sq(&shifted));
            prop_assert_eq!(l4_fourth(&f), l4_fourth(&shifted));
        }

        #[test]
        fn quadrature_oracle_random_small(raw in proptest::collection::vec(
            (-20i64..20, -9i64..9, 1i64..5, -9i64..9, 1i64..5), 1..6)) {
            let mut f = CoeffPoly::new();
            for (n, rn, rd, in_, id) in raw {
                f.add_term(BigInt::from(n), GaussianRational::new(rat(rn, rd), rat(in_, id)));
            }
            let exact = ratio_to_f64(&l4_fourth(&f));
            let grid = quadrature_l4(&f, 512);
            let scale = exact.abs().max(1.0);
            prop_assert!((grid - exact).abs() / scale < 1e-9,
                         "grid {} vs exact {}", grid, exact);
        }

        #[test]
        fn rational_scaling(f in arb_poly(), sn in 1i64..20, sd in 1i64..20) {
            let lambda = rat(sn, sd);
            let scale = GaussianRational::new(lambda.clone(), rat(0, 1));
            let mut scaled = CoeffPoly::new();
            for (n, c) in f.terms() {
                scaled.add_term(n.clone(), c.mul(&scale));
            }
            let l2_expect = l2_sq(&f) * (&lambda * &lambda);
            let l4_expect = l4_fourth(&f) * (&lambda * &lambda * &lambda * &lambda);
            prop_assert_eq!(l2_sq(&scaled), l2_expect);
            prop_assert_eq!(l4_fourth(&scaled), l4_expect);
        }
    }
}
