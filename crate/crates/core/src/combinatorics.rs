//! Exact binomial arithmetic and the identities and inequalities built on it.
//!
//! Everything here is a pure function over arbitrary-precision integers.
//! Inequalities against irrational right-hand sides go through
//! [`crate::interval`] or are raised to an integer power first, so that a
//! reported pass is a proof.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::interval::{certify_pi_multiple_le, Certainty, PrecisionPolicy};

/// `C(r, s)`, zero whenever `s ∉ {0, …, r}`.
pub fn binom(r: u64, s: i64) -> BigUint {
    if s < 0 || s as u64 > r {
        return BigUint::zero();
    }
    let k = (s as u64).min(r - s as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= r - i;
        acc /= i + 1;
    }
    acc
}

/// Row `C(r, 0), …, C(r, r)` by the ratio recurrence.
pub fn binom_row(r: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(r as usize + 1);
    let mut cur = BigUint::one();
    row.push(cur.clone());
    for k in 0..r {
        cur = cur * (r - k) / (k + 1);
        row.push(cur.clone());
    }
    row
}

/// `C(r, s)` looked up in a precomputed row, with the zero convention.
#[inline]
pub(crate) fn row_get(row: &[BigUint], s: i64) -> Option<&BigUint> {
    if s < 0 {
        None
    } else {
        row.get(s as usize)
    }
}

/// Number of degree-`d` monomials in `ell + 1` variables.
pub fn n_monomials(d: u64, ell: u64) -> BigUint {
    binom(d + ell, d as i64)
}

/// Same as [`n_monomials`] when it fits in a `u64`.
pub fn n_monomials_u64(d: u64, ell: u64) -> Option<u64> {
    n_monomials(d, ell).to_u64()
}

pub fn digit_sum_base2(m: u64) -> u32 {
    m.count_ones()
}

/// 2-adic valuation; `v2(0)` is reported as 0.
pub fn v2(m: u64) -> u32 {
    if m == 0 {
        0
    } else {
        m.trailing_zeros()
    }
}

/// Valuation of `N_{e,ℓ}` from binary digit sums (Kummer/Legendre).
pub fn v2_binom(e: u64, ell: u64) -> u32 {
    digit_sum_base2(e) + digit_sum_base2(ell) - digit_sum_base2(e + ell)
}

/// `N_{e,ℓ}` is even iff `e` and `ℓ` share a binary 1-digit.
pub fn is_n_even(e: u64, ell: u64) -> bool {
    e & ell != 0
}

/// Term `C(k+j-1, k) · C(d-k+ℓ-j, d-k)` of the split of `N_{d,ℓ}` along
/// `j` designated variables.
fn split_term(d: u64, ell: u64, j: u64, k: u64) -> BigUint {
    binom(k + j - 1, k as i64) * binom(d - k + ell - j, (d - k) as i64)
}

fn check_j(ell: u64, j: u64) -> Result<()> {
    if j == 0 || j > ell {
        return Err(domain(format!("need 1 ≤ j ≤ ℓ, got j = {j}, ℓ = {ell}")));
    }
    Ok(())
}

/// `c_{d,ℓ}(j)`: degree-`d` monomials in `ℓ+1` variables whose total degree
/// in `j` designated variables is odd.
pub fn c_odd_monomials(d: u64, ell: u64, j: u64) -> Result<BigUint> {
    check_j(ell, j)?;
    Ok((1..=d).step_by(2).map(|k| split_term(d, ell, j, k)).sum())
}

/// `N_{d,ℓ} - 2 c_{d,ℓ}(j)` as the alternating split sum.
pub fn signed_imbalance(d: u64, ell: u64, j: u64) -> Result<BigInt> {
    check_j(ell, j)?;
    let mut acc = BigInt::zero();
    for k in 0..=d {
        let t = BigInt::from(split_term(d, ell, j, k));
        if k % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    Ok(acc)
}

/// Checks `N_{d,ℓ} = Σ_k C(k+j-1,k)·C(d-k+ℓ-j,d-k)`.
pub fn check_monomial_partition(d: u64, ell: u64, j: u64) -> Result<bool> {
    check_j(ell, j)?;
    let rhs: BigUint = (0..=d).map(|k| split_term(d, ell, j, k)).sum();
    Ok(rhs == n_monomials(d, ell))
}

/// The hockey-stick recurrence `C(d+h+1, d) = Σ_{k≤d} C(k+h, k)`; this is
/// the `j = ℓ = h+1` case of [`check_monomial_partition`] and the finite
/// form of `Σ C(d+h,d) z^d = (1-z)^{-(h+1)}`.
pub fn check_series_recurrence(d: u64, h: u64) -> bool {
    check_monomial_partition(d, h + 1, h + 1).unwrap_or(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vandermonde {
    /// `C(r1+r2, q) = Σ_a C(r1,a) C(r2,q-a)`
    Basic { r1: u64, r2: u64, q: u64 },
    /// `C(r1+r2, r2-q) = Σ_a C(r1,a) C(r2,q+a)`, any integer `q`
    Shifted { r1: u64, r2: u64, q: i64 },
    /// `C(r1+r2+r3, q) = Σ_{a1,a2} C(r1,a1) C(r2,a2) C(r3,q-a1-a2)`
    Triple { r1: u64, r2: u64, r3: u64, q: u64 },
}

pub fn vandermonde_check(v: Vandermonde) -> bool {
    match v {
        Vandermonde::Basic { r1, r2, q } => {
            let rhs: BigUint = (0..=r1)
                .map(|a| binom(r1, a as i64) * binom(r2, q as i64 - a as i64))
                .sum();
            binom(r1 + r2, q as i64) == rhs
        }
        Vandermonde::Shifted { r1, r2, q } => {
            let rhs: BigUint = (0..=r1)
                .map(|a| binom(r1, a as i64) * binom(r2, q + a as i64))
                .sum();
            binom(r1 + r2, r2 as i64 - q) == rhs
        }
        Vandermonde::Triple { r1, r2, r3, q } => {
            let mut rhs = BigUint::zero();
            for a1 in 0..=r1 {
                let c1 = binom(r1, a1 as i64);
                for a2 in 0..=r2 {
                    let rest = q as i64 - a1 as i64 - a2 as i64;
                    if rest < 0 {
                        break;
                    }
                    rhs += &c1 * binom(r2, a2 as i64) * binom(r3, rest);
                }
            }
            binom(r1 + r2 + r3, q as i64) == rhs
        }
    }
}

/// Exact imbalance of odd monomials, `|1 - 2c_{d,ℓ}(j) / N_{d,ℓ}|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BiasDatum {
    pub d: u64,
    pub ell: u64,
    pub j: u64,
    #[serde(serialize_with = "crate::report::ser_biguint")]
    pub c: BigUint,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub bias: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BiasCheck {
    pub datum: BiasDatum,
    /// `bias ≤ 2^{-min(j, ℓ+1-j)}`
    pub within_bound: bool,
    /// `0 ≤ N - 2c(j') ≤ C(d+ℓ-j', d)` at the reflected index
    /// `j' = min(j, ℓ+1-j)`.
    pub sign_fact: bool,
}

impl BiasCheck {
    pub fn passed(&self) -> bool {
        self.within_bound && self.sign_fact
    }
}

pub fn bias_bound_check(d: u64, ell: u64, j: u64) -> Result<BiasCheck> {
    if !(1 <= j && j <= ell && ell <= d) {
        return Err(domain(format!("need 1 ≤ j ≤ ℓ ≤ d, got (d, ℓ, j) = ({d}, {ell}, {j})")));
    }
    let n = n_monomials(d, ell);
    let c = c_odd_monomials(d, ell, j)?;
    let n_int = BigInt::from(n.clone());
    let imbalance: BigInt = &n_int - BigInt::from(c.clone()) * 2;
    let bias = BigRational::new(imbalance.abs(), n_int.clone());

    let e = j.min(ell + 1 - j);
    let bound = BigRational::new(BigInt::one(), BigInt::one() << e as usize);
    let within_bound = bias <= bound;

    let reflected = signed_imbalance(d, ell, e)?;
    let cap = BigInt::from(binom(d + ell - e, d as i64));
    let sign_fact = !reflected.is_negative() && reflected <= cap;

    Ok(BiasCheck {
        datum: BiasDatum { d, ell, j, c, bias },
        within_bound,
        sign_fact,
    })
}

/// Result of comparing `Σ_j C(r,j)C(s,j)2^{-j}` with `(3/4)^{rs/(r+s)} C(r+s,r)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypergeometricCheck {
    pub r: u64,
    pub s: u64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub lhs: BigRational,
    /// Floating value of the right side, for display only.
    pub rhs: f64,
    pub ok: bool,
}

/// The comparison is decided exactly: both sides are raised to the power
/// `r + s`, which turns `(3/4)^{rs/(r+s)}` into the integer ratio
/// `3^{rs} / 4^{rs}`.
pub fn hypergeometric_bound_check(r: u64, s: u64) -> HypergeometricCheck {
    // Common denominator 2^r: lhs = L / 2^r with L = Σ C(r,j)C(s,j)2^{r-j}.
    let mut l = BigUint::zero();
    for j in 0..=r.min(s) {
        l += binom(r, j as i64) * binom(s, j as i64) << (r - j) as usize;
    }
    let lhs = BigRational::new(BigInt::from(l.clone()), BigInt::one() << r as usize);
    let total = binom(r + s, r as i64);

    let ok = if r == 0 || s == 0 {
        // μ = 0: both sides equal 1
        lhs <= BigRational::from_integer(BigInt::from(total.clone()))
    } else {
        let p = (r + s) as u32;
        let rs = (r * s) as u32;
        // L^p · 4^{rs} ≤ 3^{rs} · total^p · 2^{r p}
        let left = l.pow(p) << (2 * rs as usize);
        let right = (BigUint::from(3u32).pow(rs) * total.pow(p)) << (r as usize * p as usize);
        left <= right
    };

    let mu = if r + s == 0 { 0.0 } else { (r * s) as f64 / (r + s) as f64 };
    let rhs = 0.75f64.powf(mu) * total.to_f64().unwrap_or(f64::INFINITY);
    HypergeometricCheck { r, s, lhs, rhs, ok }
}

/// Both central-binomial upper bounds at `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StirlingCheck {
    pub m: u64,
    /// `C(2m,m) ≤ 2^{2m} / √(πm)`
    pub central: Certainty,
    /// `C(m,⌊m/2⌋) ≤ 2^{m+1/2} / √(πm)`
    pub half: Certainty,
}

impl StirlingCheck {
    pub fn passed(&self) -> bool {
        self.central.holds() && self.half.holds()
    }
}

/// Squared forms: `C(2m,m)^2 · m · π ≤ 2^{4m}` and
/// `C(m,⌊m/2⌋)^2 · m · π ≤ 2^{2m+1}`.
pub fn stirling_inequality_check_with(
    m: u64,
    central_binom: &BigUint,
    half_binom: &BigUint,
    policy: PrecisionPolicy,
) -> Result<StirlingCheck> {
    if m == 0 {
        return Err(domain("Stirling bounds need m ≥ 1"));
    }
    let central = certify_pi_multiple_le(
        &(central_binom * central_binom * m),
        &(BigUint::one() << (4 * m) as usize),
        policy,
    );
    let half = certify_pi_multiple_le(
        &(half_binom * half_binom * m),
        &(BigUint::one() << (2 * m + 1) as usize),
        policy,
    );
    Ok(StirlingCheck { m, central, half })
}

pub fn stirling_inequality_check(m: u64, policy: PrecisionPolicy) -> Result<StirlingCheck> {
    stirling_inequality_check_with(m, &binom(2 * m, m as i64), &binom(m, (m / 2) as i64), policy)
}

/// Runs [`stirling_inequality_check`] for `m = 1..=m_max`, updating both
/// binomials incrementally.
pub fn stirling_sweep(m_max: u64, policy: PrecisionPolicy) -> Vec<StirlingCheck> {
    let mut out = Vec::with_capacity(m_max as usize);
    let mut central = BigUint::one(); // C(0,0)
    let mut half = BigUint::one(); // C(0,0)
    for m in 1..=m_max {
        // C(2m,m) = C(2m-2,m-1) · 2(2m-1)/m
        central = central * (2 * (2 * m - 1)) / m;
        // C(m,⌊m/2⌋) from C(m-1,⌊(m-1)/2⌋)
        half = if m % 2 == 0 {
            // C(m, m/2) = C(m-1, m/2-1) · m/(m/2) = 2 · C(m-1,(m-1)/2)
            half * 2u32
        } else {
            // C(m,(m-1)/2) = C(m-1,(m-1)/2) · m/((m+1)/2)
            half * m / m.div_ceil(2)
        };
        out.push(
            stirling_inequality_check_with(m, &central, &half, policy)
                .expect("m ≥ 1 in sweep"),
        );
    }
    out
}

/// `C(2m,m) · √(πm) / 2^{2m}`, which tends to 1.
pub fn central_binomial_ratio(m: u64) -> f64 {
    let c = binom(2 * m, m as i64);
    // work in logs to survive large m
    let ln_c = big_ln(&c);
    (ln_c + 0.5 * (std::f64::consts::PI * m as f64).ln() - (2 * m) as f64 * std::f64::consts::LN_2)
        .exp()
}

/// Natural log of a positive big integer.
pub(crate) fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift as usize).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// 2-adic valuation of a nonzero big integer.
pub fn v2_big(x: &BigUint) -> u64 {
    x.trailing_zeros().unwrap_or(0)
}

pub(crate) fn is_even_big(x: &BigUint) -> bool {
    x.is_even()
}
