//! Exact big-rational arithmetic for the invariant derivation.
//!
//! The b-invariants and the discriminant suffer catastrophic cancellation
//! when derived in floating point from large integer models (the rank-19
//! regression curve has |b8| near 1e93), so when every coefficient is
//! rational the whole chain runs over `BigRational` and each result crosses
//! into f64 exactly once, correctly rounded.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) struct ExactInvariants {
    pub b2: BigRational,
    pub b4: BigRational,
    pub b6: BigRational,
    pub b8: BigRational,
    pub disc: BigRational,
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

pub(crate) fn exact_invariants(a: &[BigRational; 5]) -> ExactInvariants {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + int(4) * a2;
    let b4 = int(2) * a4 + a1 * a3;
    let b6 = a3 * a3 + int(4) * a6;
    let b8 = a1 * a1 * a6 + int(4) * (a2 * a6) - a1 * a3 * a4 + a2 * (a3 * a3) - a4 * a4;
    debug_assert_eq!(int(4) * &b8, &b2 * &b6 - &b4 * &b4);
    let disc = -(&b2 * &b2 * &b8) - int(8) * (&b4 * &b4 * &b4) - int(27) * (&b6 * &b6)
        + int(9) * (&b2 * &b4 * &b6);
    ExactInvariants { b2, b4, b6, b8, disc }
}

/// Converts a rational to the nearest f64, ties to even.
///
/// Seeds from the top 53 bits of numerator and denominator (one exact f64
/// division plus an exact power-of-two scale), then walks ulp by ulp using
/// exact rational comparisons until no neighbour is closer. The seed is
/// within a few ulps, so the walk takes at most a handful of steps.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.numer().is_zero() {
        return 0.0;
    }
    let n = q.numer().abs();
    let d = q.denom().clone();
    let mag = positive_ratio_to_f64(&n, &d);
    if q.numer().is_negative() {
        -mag
    } else {
        mag
    }
}

fn positive_ratio_to_f64(n: &BigInt, d: &BigInt) -> f64 {
    let q = BigRational::new(n.clone(), d.clone());
    let mut x = seed(n, d);
    for _ in 0..256 {
        let fx = BigRational::from_float(x).expect("candidate is finite");
        let diff = &q - &fx;
        if diff.is_zero() {
            return x;
        }
        if diff.is_positive() {
            if x == f64::MAX {
                return overflow_round(&q);
            }
            let up = next_after(x, true);
            let d_up = BigRational::from_float(up).expect("finite") - &q;
            if d_up < diff {
                x = up;
            } else if d_up == diff {
                return even_of(x, up);
            } else {
                return x;
            }
        } else {
            let diff = -diff;
            if x == 0.0 {
                return 0.0;
            }
            let down = next_after(x, false);
            let d_down = &q - BigRational::from_float(down).expect("finite");
            if d_down < diff {
                x = down;
            } else if d_down == diff {
                return even_of(down, x);
            } else {
                return x;
            }
        }
    }
    unreachable!("ulp walk failed to settle");
}

/// Truncated leading 53 bits as an exact f64 plus the dropped exponent.
fn top_bits(v: &BigInt) -> (f64, i64) {
    let bits = v.bits();
    if bits <= 53 {
        (v.to_f64().expect("small integers convert"), 0)
    } else {
        let shift = bits - 53;
        ((v >> shift).to_f64().expect("53-bit integer"), shift as i64)
    }
}

fn seed(n: &BigInt, d: &BigInt) -> f64 {
    let (nf, ne) = top_bits(n);
    let (df, de) = top_bits(d);
    let e = ne - de;
    let x = if e.abs() > 2200 {
        if e > 0 {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        // split the scale so the intermediate cannot overflow spuriously
        let h = (e / 2) as i32;
        (nf / df) * 2f64.powi(h) * 2f64.powi(e as i32 - h)
    };
    if x.is_infinite() {
        f64::MAX
    } else if x == 0.0 {
        f64::from_bits(1) // smallest subnormal; the walk may step back to zero
    } else {
        x
    }
}

fn next_after(x: f64, up: bool) -> f64 {
    if up {
        x.next_up()
    } else {
        x.next_down()
    }
}

fn even_of(lo: f64, hi: f64) -> f64 {
    // adjacent finite floats differ by one in the bit pattern, so exactly
    // one of the pair has an even significand
    if lo.to_bits() & 1 == 0 {
        lo
    } else {
        hi
    }
}

/// q exceeds f64::MAX; round against the overflow midpoint 2^1024 - 2^970.
fn overflow_round(q: &BigRational) -> f64 {
    let mid = BigRational::from_integer((BigInt::one() << 1024) - (BigInt::one() << 970));
    if *q >= mid {
        f64::INFINITY
    } else {
        f64::MAX
    }
}
