//! The solution family of the generalized Pell equation `7X^2 + 114 = Y^2`
//! and the equal-sums-of-two-cubes quadruples it generates.
//!
//! Multiplying `X sqrt(7) + Y` by the norm-one unit `3 sqrt(7) + 8` maps
//! solutions to solutions, giving the linear recurrence
//! `(X, Y) <- (8X + 3Y, 21X + 8Y)` from the seed `(1, 11)`. Each solution
//! yields four positive integers with `u1^3 + u2^3 = u3^3 + u4^3`, all
//! packed into an interval `[N, N + O(sqrt(N))]`.

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

use crate::arith::{biguint_to_f64, pow};
use crate::cubes::{is_sidon, SidonWitness};

/// One solution of `7X^2 + 114 = Y^2`, indexed along the recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    pub index: u64,
    pub x: BigUint,
    pub y: BigUint,
}

fn on_curve(x: &BigUint, y: &BigUint) -> bool {
    &(x * x) * 7u32 + 114u32 == y * y
}

/// The first `count` solutions, indices `0..count`, from the seed `(1, 11)`.
///
/// Every output is re-verified against the curve equation before being
/// returned; a failure is impossible unless the recurrence itself is wrong.
pub fn pell_family(count: u64) -> Vec<PellSolution> {
    assert!(count >= 1, "the family needs at least one solution");
    let mut out = Vec::with_capacity(count as usize);
    let mut x = BigUint::from(1u32);
    let mut y = BigUint::from(11u32);
    for index in 0..count {
        assert!(
            on_curve(&x, &y),
            "recurrence left the curve at index {index}"
        );
        assert!(
            x.bit(0) && y.bit(0),
            "parity tripwire: X and Y must stay odd (index {index})"
        );
        out.push(PellSolution {
            index,
            x: x.clone(),
            y: y.clone(),
        });
        let next_x = &x * 8u32 + &y * 3u32;
        let next_y = &x * 21u32 + &y * 8u32;
        x = next_x;
        y = next_y;
    }
    out
}

/// Two equal sums of two cubes, `u1^3 + u2^3 = u3^3 + u4^3 = sum`, with
/// `u1 + u2 = v - 6` and `u3 + u4 = v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamanujanQuadruple {
    pub u1: BigUint,
    pub u2: BigUint,
    pub u3: BigUint,
    pub u4: BigUint,
    pub v: BigUint,
    /// Lower endpoint of the certifying interval, `(X^2 - Y)/2`; negative
    /// only at index 0, the classical 1729 example.
    pub n_start: BigInt,
    pub cube_sum: BigUint,
}

/// Build the quadruple attached to one Pell solution:
/// `u1 = (X^2-Y)/2 + 6`, `u2 = (X^2+Y)/2 + 6`,
/// `u3 = (X^2-X)/2 + 9`, `u4 = (X^2+X)/2 + 9`, `v = X^2 + 18`.
/// All defining identities are re-checked exactly before returning.
pub fn quadruple(sol: &PellSolution) -> RamanujanQuadruple {
    let x = BigInt::from(sol.x.clone());
    let y = BigInt::from(sol.y.clone());
    let x2 = &x * &x;

    let diff = &x2 - &y;
    assert!(
        !diff.bit(0),
        "parity tripwire: X^2 - Y must be even (index {})",
        sol.index
    );
    let n_start = diff / 2;
    let six = BigInt::from(6);
    let nine = BigInt::from(9);

    let u1: BigInt = &n_start + &six;
    let u2 = (&x2 + &y) / 2 + &six;
    let u3 = (&x2 - &x) / 2 + &nine;
    let u4 = (&x2 + &x) / 2 + &nine;
    let v = &x2 + BigInt::from(18);

    for (name, u) in [("u1", &u1), ("u2", &u2), ("u3", &u3), ("u4", &u4)] {
        assert!(u.is_positive(), "{name} must be positive (index {})", sol.index);
    }
    let to_nat = |b: &BigInt| b.to_biguint().expect("checked positive");
    let (u1, u2, u3, u4) = (to_nat(&u1), to_nat(&u2), to_nat(&u3), to_nat(&u4));
    let v = to_nat(&v);

    let left = pow(&u1, 3) + pow(&u2, 3);
    let right = pow(&u3, 3) + pow(&u4, 3);
    assert_eq!(left, right, "cube sums must agree (index {})", sol.index);
    assert_eq!(&u1 + &u2 + 6u32, &u3 + &u4, "sum identity (index {})", sol.index);
    assert_eq!(&u3 + &u4, v.clone(), "u3 + u4 must equal v (index {})", sol.index);
    assert_eq!(
        &left * 4u32,
        (&v - 6u32) * &v * (&v + 9u32),
        "4U = (v-6) v (v+9) failed (index {})",
        sol.index
    );
    assert!(u1 <= u2 && u3 <= u4);
    assert!(
        u1 != u3 && u1 != u4,
        "the two representations must be distinct (index {})",
        sol.index
    );

    RamanujanQuadruple {
        u1,
        u2,
        u3,
        u4,
        v,
        n_start,
        cube_sum: left,
    }
}

/// Index 0 has a negative interval start, so no sharpness certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonPositiveStart {
    pub index: u64,
}

impl std::fmt::Display for NonPositiveStart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "sharpness needs a positive interval start; index {} has N <= 0",
            self.index
        )
    }
}

impl std::error::Error for NonPositiveStart {}

/// Certificate that one quadruple sits inside `[N, N + ratio * sqrt(N)]`.
#[derive(Debug, Clone)]
pub struct SharpnessReport {
    pub index: u64,
    pub n: BigUint,
    /// `max(u_i) - N`; equals `Y + 6`.
    pub spread: BigUint,
    /// `spread / sqrt(N)`, display-only double; tends to sqrt(14).
    pub ratio: f64,
}

/// Measure how tightly the quadruple of `sol` packs above `N = (X^2 - Y)/2`.
pub fn sharpness_report(sol: &PellSolution) -> Result<SharpnessReport, NonPositiveStart> {
    let quad = quadruple(sol);
    if !quad.n_start.is_positive() {
        return Err(NonPositiveStart { index: sol.index });
    }
    let n = quad.n_start.to_biguint().expect("checked positive");
    let us = [&quad.u1, &quad.u2, &quad.u3, &quad.u4];
    let min_u = us.iter().min().unwrap();
    let max_u = us.iter().max().unwrap();
    assert!(
        **min_u >= n,
        "all four members must sit at or above N (index {})",
        sol.index
    );
    let spread = *max_u - &n;
    let ratio = biguint_to_f64(&spread) / biguint_to_f64(&n).sqrt();
    Ok(SharpnessReport {
        index: sol.index,
        n,
        spread,
        ratio,
    })
}

/// One fully verified row of the family.
#[derive(Debug, Clone)]
pub struct FamilyRow {
    pub solution: PellSolution,
    pub quadruple: RamanujanQuadruple,
    /// Present for index >= 1.
    pub sharpness: Option<SharpnessReport>,
    /// The Sidon-failure witness of the four cubes, which must be exactly
    /// this quadruple.
    pub witness: SidonWitness,
}

/// Generate and cross-verify the first `count` rows: curve membership,
/// quadruple identities, interval certificates, and the Sidon check on
/// `{u1^3, u2^3, u3^3, u4^3}` with the expected witness. Any failed check
/// panics with the offending index.
pub fn verify_family(count: u64) -> Vec<FamilyRow> {
    pell_family(count)
        .into_iter()
        .map(|solution| {
            let quad = quadruple(&solution);
            let cubes: Vec<BigInt> = {
                let mut c: Vec<BigInt> = [&quad.u1, &quad.u2, &quad.u3, &quad.u4]
                    .iter()
                    .map(|u| BigInt::from(pow(u, 3)))
                    .collect();
                c.sort();
                c
            };
            let sidon = is_sidon(&cubes);
            assert!(
                !sidon.is_sidon,
                "quadruple cubes must fail the Sidon test (index {})",
                solution.index
            );
            let witness = sidon.witness.expect("non-Sidon result carries a witness");
            assert_eq!(
                (&witness.a, &witness.b, &witness.c, &witness.d),
                (
                    &BigInt::from(pow(&quad.u1, 3)),
                    &BigInt::from(pow(&quad.u2, 3)),
                    &BigInt::from(pow(&quad.u3, 3)),
                    &BigInt::from(pow(&quad.u4, 3)),
                ),
                "witness must be exactly the generated quadruple (index {})",
                solution.index
            );
            let sharpness = (solution.index >= 1).then(|| {
                sharpness_report(&solution).expect("index >= 1 has positive N")
            });
            FamilyRow {
                solution,
                quadruple: quad,
                sharpness,
                witness,
            }
        })
        .collect()
}
