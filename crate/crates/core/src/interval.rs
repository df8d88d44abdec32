//! Directed-rounding enclosures for the few irrational constants the
//! inequality checks need.
//!
//! Every inequality that involves π is rearranged so that π appears as a
//! single linear factor, `coef · π ≤ rhs` with integer `coef` and `rhs`.
//! We then compare against a dyadic enclosure `[lo, hi] / 2^bits` of π:
//! using `hi` on the left proves the inequality, using `lo` proves its
//! negation, and anything in between is undecided at that precision.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use serde::Serialize;

/// Outcome of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    Holds,
    Fails,
    Indeterminate,
}

impl Certainty {
    pub fn holds(self) -> bool {
        self == Certainty::Holds
    }
}

/// Starting precision and cap for the adaptive comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub initial_bits: u32,
    pub max_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            initial_bits: 64,
            max_bits: 4096,
        }
    }
}

impl PrecisionPolicy {
    pub fn with_max_bits(max_bits: u32) -> Self {
        PrecisionPolicy {
            initial_bits: max_bits.min(64),
            max_bits,
        }
    }
}

/// Dyadic enclosure `lo / 2^bits ≤ x ≤ hi / 2^bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicEnclosure {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u32,
}

impl DyadicEnclosure {
    pub fn to_f64_bounds(&self) -> (f64, f64) {
        let scale = (self.bits as f64).exp2();
        (to_f64(&self.lo) / scale, to_f64(&self.hi) / scale)
    }
}

fn to_f64(x: &BigInt) -> f64 {
    x.to_string().parse().unwrap_or(f64::NAN)
}

/// `2^bits · arctan(1/x)` truncated termwise; returns the sum and the number
/// of terms used. Each term is the exact floor of its real value, so the
/// absolute error is below `terms + 1`.
fn arctan_inv_fixed(x: u32, bits: u32) -> (BigInt, u64) {
    let x2 = BigUint::from(x) * BigUint::from(x);
    let mut power: BigUint = (BigUint::one() << bits) / BigUint::from(x);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = &power / BigUint::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        let term = BigInt::from_biguint(Sign::Plus, term);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    (sum, k)
}

/// Enclosure of π at `bits` fractional bits, from Machin's formula.
pub fn pi_enclosure(bits: u32) -> DyadicEnclosure {
    let (a5, k5) = arctan_inv_fixed(5, bits);
    let (a239, k239) = arctan_inv_fixed(239, bits);
    let center = BigInt::from(16) * a5 - BigInt::from(4) * a239;
    let err = BigInt::from(16 * (k5 + 1) + 4 * (k239 + 1));
    DyadicEnclosure {
        lo: &center - &err,
        hi: &center + &err,
        bits,
    }
}

/// Certifies `coef · π ≤ rhs`, refining the π enclosure until it decides or
/// the policy cap is reached.
pub fn certify_pi_multiple_le(coef: &BigUint, rhs: &BigUint, policy: PrecisionPolicy) -> Certainty {
    let coef = BigInt::from_biguint(Sign::Plus, coef.clone());
    let rhs = BigInt::from_biguint(Sign::Plus, rhs.clone());
    let mut bits = policy.initial_bits.max(16);
    loop {
        let pi = pi_enclosure(bits);
        let scaled_rhs = &rhs << bits;
        if &coef * &pi.hi <= scaled_rhs {
            return Certainty::Holds;
        }
        if &coef * &pi.lo > scaled_rhs {
            return Certainty::Fails;
        }
        if bits >= policy.max_bits {
            return Certainty::Indeterminate;
        }
        bits = (bits * 2).min(policy.max_bits);
    }
}
