//! Exact first and second moments of the number of `U_{n,ℓ}`-points on a
//! uniformly random hypersurface in `𝔹_{d,n}`.
//!
//! The second moment is split over pair shapes: the diagonal (`x = y`), the
//! full-overlap shapes `T^{(ℓ,j)}` (Σ1), the partial-overlap shapes
//! `T^{(i,j)}`, `i < ℓ` (Σ2), and disjoint supports (Σ3). For each shape the
//! number of hypersurfaces through a pair depends only on the shape, so
//! every sum is `#T · (pair count) / #𝔹`. Pair counts are computed in the
//! smallest ambient space containing both supports and lifted by a power of
//! two; the powers are combined symbolically so that `2^{N_{d,n}}` is never
//! materialized.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::combinatorics::{binom, binom_row, c_odd_monomials, n_monomials, row_get};
use crate::error::{domain, Error, Result};
use crate::report::{fraction_string, CsvRow};

/// Default cap on big-integer term operations in exact mode.
pub const DEFAULT_TERM_BUDGET: u128 = 10_000_000;

/// Largest `N_{d,n}` for which `2^{N_{d,n}}` is built explicitly.
const MAX_EXPLICIT_EXPONENT: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MomentConfig {
    pub term_budget: u128,
}

impl Default for MomentConfig {
    fn default() -> Self {
        MomentConfig {
            term_budget: DEFAULT_TERM_BUDGET,
        }
    }
}

/// Which pairs of `U_{n,ℓ} × U_{n,ℓ}` a shape collects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeKind {
    /// `i + 1` shared nonzero coordinates, `j` of which disagree once the
    /// last shared coordinate is made to agree. `i = ℓ, j = 0` is `x = y`.
    Overlap { i: u64, j: u64 },
    Disjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TSetShape {
    pub n: u64,
    pub ell: u64,
    pub kind: ShapeKind,
}

/// `m_{n,ℓ} = max(2ℓ - n, 0)`, the least possible overlap index.
pub fn min_overlap(n: u64, ell: u64) -> u64 {
    (2 * ell).saturating_sub(n)
}

fn check_ell(n: u64, ell: u64) -> Result<()> {
    if ell == 0 || ell > n {
        return Err(domain(format!("need 1 ≤ ℓ ≤ n, got ℓ = {ell}, n = {n}")));
    }
    Ok(())
}

impl TSetShape {
    pub fn overlap(n: u64, ell: u64, i: u64, j: u64) -> Result<Self> {
        check_ell(n, ell)?;
        if i < min_overlap(n, ell) || i > ell || j > i {
            return Err(domain(format!(
                "shape (i, j) = ({i}, {j}) outside m_{{n,ℓ}} = {} ≤ i ≤ ℓ = {ell}, 0 ≤ j ≤ i",
                min_overlap(n, ell)
            )));
        }
        Ok(TSetShape {
            n,
            ell,
            kind: ShapeKind::Overlap { i, j },
        })
    }

    pub fn disjoint(n: u64, ell: u64) -> Result<Self> {
        check_ell(n, ell)?;
        Ok(TSetShape {
            n,
            ell,
            kind: ShapeKind::Disjoint,
        })
    }

    /// Every shape of `U_{n,ℓ} × U_{n,ℓ}`, diagonal included.
    pub fn all(n: u64, ell: u64) -> Result<Vec<Self>> {
        check_ell(n, ell)?;
        let mut out = Vec::new();
        for i in min_overlap(n, ell)..=ell {
            for j in 0..=i {
                out.push(TSetShape::overlap(n, ell, i, j)?);
            }
        }
        out.push(TSetShape::disjoint(n, ell)?);
        Ok(out)
    }

    /// Number of variables of the smallest coordinate space holding both
    /// supports, minus one.
    pub fn ambient(&self) -> u64 {
        match self.kind {
            ShapeKind::Overlap { i, .. } => 2 * self.ell - i,
            ShapeKind::Disjoint => 2 * self.ell + 1,
        }
    }
}

/// `#𝔹_{d,n} = 2^{N_{d,n} - 1}`.
pub fn card_b(d: u64, n: u64) -> Result<BigUint> {
    let big_n = explicit_exponent(d, n)?;
    Ok(BigUint::one() << (big_n - 1) as usize)
}

fn explicit_exponent(d: u64, n: u64) -> Result<u64> {
    n_monomials(d, n)
        .to_u64()
        .filter(|&v| v <= MAX_EXPLICIT_EXPONENT)
        .ok_or_else(|| domain(format!("N_{{{d},{n}}} too large to materialize 2^N")))
}

/// `#U_{n,ℓ} = 2^ℓ C(n+1, ℓ+1)`.
pub fn card_u(n: u64, ell: u64) -> Result<BigUint> {
    check_ell(n, ell)?;
    Ok(binom(n + 1, (ell + 1) as i64) << ell as usize)
}

pub fn card_t(shape: &TSetShape) -> BigUint {
    let (n, ell) = (shape.n, shape.ell);
    let base = binom(n + 1, (ell + 1) as i64);
    match shape.kind {
        ShapeKind::Overlap { i, j } => {
            (base
                * binom(n - ell, (ell - i) as i64)
                * binom(ell + 1, (i + 1) as i64)
                * binom(i, j as i64))
                << (2 * ell - i) as usize
        }
        ShapeKind::Disjoint => (base * binom(n - ell, (ell + 1) as i64)) << (2 * ell) as usize,
    }
}

/// `N_{d,ℓ}` as a `u64`, failing with `OddN` when it is odd.
fn even_n(d: u64, ell: u64) -> Result<u64> {
    let big = n_monomials(d, ell);
    if big.is_odd() {
        return Err(Error::OddN { d, ell });
    }
    big.to_u64()
        .ok_or_else(|| domain(format!("N_{{{d},{ell}}} does not fit in 64 bits")))
}

fn central(nl: u64) -> BigUint {
    binom(nl, (nl / 2) as i64)
}

fn check_budget(needed: u128, config: &MomentConfig) -> Result<()> {
    if needed > config.term_budget {
        return Err(Error::BudgetExceeded {
            needed,
            budget: config.term_budget,
        });
    }
    Ok(())
}

/// Number of `V ∈ 𝔹_{d,n}` through any fixed point of `U_{n,ℓ}`.
pub fn count_containing_point(d: u64, n: u64, ell: u64) -> Result<BigUint> {
    check_ell(n, ell)?;
    let nl = even_n(d, ell)?;
    let nn = explicit_exponent(d, n)?;
    Ok((central(nl) << (nn - nl) as usize) >> 1usize)
}

/// Closed-form first moment `2^{-(N_{d,ℓ}-ℓ)} C(n+1,ℓ+1) C(N_{d,ℓ}, N_{d,ℓ}/2)`.
pub fn m1_exact(d: u64, n: u64, ell: u64) -> Result<BigRational> {
    m1_exact_with(d, n, ell, &MomentConfig::default())
}

pub fn m1_exact_with(d: u64, n: u64, ell: u64, config: &MomentConfig) -> Result<BigRational> {
    if d < 2 || n < 2 {
        return Err(domain("moments need d, n ≥ 2"));
    }
    check_ell(n, ell)?;
    let nl = even_n(d, ell)?;
    check_budget(nl as u128, config)?;
    let num = binom(n + 1, (ell + 1) as i64) * central(nl);
    Ok(ratio(num, nl - ell))
}

/// `num / 2^exp` in lowest terms.
fn ratio(num: BigUint, exp: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::one() << exp as usize)
}

/// Within `𝔹_{d,ℓ}`: hypersurfaces through both `(1,…,1)` and the point
/// with `j` leading −1 coordinates.
pub fn pair_count_sigma1(d: u64, ell: u64, j: u64) -> Result<BigUint> {
    if !(1 <= j && j <= ell && ell <= d) {
        return Err(domain(format!("need 1 ≤ j ≤ ℓ ≤ d, got (d, ℓ, j) = ({d}, {ell}, {j})")));
    }
    let nl = even_n(d, ell)?;
    let c = c_odd_monomials(d, ell, j)?.to_u64().expect("c ≤ N fits u64");
    Ok(sigma1_core(nl, c))
}

/// `(1/2) C(N-c, (N-c)/2) C(c, c/2)`, zero when `c` is odd.
fn sigma1_core(nl: u64, c: u64) -> BigUint {
    if c % 2 == 1 {
        return BigUint::zero();
    }
    let prod = central(nl - c) * central(c);
    prod >> 1usize
}

/// `c_{d,i}(j)` with `c_{d,i}(0) = 0`.
fn c_or_zero(d: u64, i: u64, j: u64) -> u64 {
    if j == 0 {
        0
    } else {
        c_odd_monomials(d, i, j)
            .expect("1 ≤ j ≤ i")
            .to_u64()
            .expect("c ≤ N fits u64")
    }
}

/// Term operations needed by [`sigma2_double_sum`] for one `(i, c)` pair.
fn sigma2_cost(nl: u64, ni: u64, ci: u64) -> u128 {
    let e = (ni - ci) as u128;
    (e + 1) * (ci as u128 + 1) + (nl - ni) as u128 + e + ci as u128
}

/// Double sum over `(a, b)` left after convolving the triple sum once:
/// `Σ C(E,a) C(c,b) C(R, h-(a+b)) C(R, h-(E-a+b))` with `E = N_{d,i} - c`,
/// `R = N_{d,ℓ} - N_{d,i}`, `h = N_{d,ℓ}/2`.
fn sigma2_double_sum(nl: u64, ni: u64, ci: u64) -> BigUint {
    let e = ni - ci;
    let r = nl - ni;
    let h = (nl / 2) as i64;
    let row_e = binom_row(e);
    let row_c = binom_row(ci);
    let row_r = binom_row(r);
    (0..=e)
        .into_par_iter()
        .map(|a| {
            let mut acc = BigUint::zero();
            for b in 0..=ci {
                let k1 = h - (a + b) as i64;
                let k2 = h - (e as i64 - a as i64 + b as i64);
                if let (Some(x1), Some(x2)) = (row_get(&row_r, k1), row_get(&row_r, k2)) {
                    if x1.is_zero() || x2.is_zero() {
                        continue;
                    }
                    acc += &row_c[b as usize] * x1 * x2;
                }
            }
            acc * &row_e[a as usize]
        })
        .reduce(BigUint::zero, |x, y| x + y)
}

/// Unconvolved triple sum over `(a, b, c)`; the sum over `c` collapses by
/// the shifted Vandermonde identity to [`sigma2_double_sum`].
fn sigma2_triple_sum(nl: u64, ni: u64, ci: u64, cl: u64) -> BigUint {
    let e = ni - ci;
    let r = nl - ni;
    let h = (nl / 2) as i64;
    let dc = cl - ci;
    let row_y_even = binom_row(r - dc);
    let mut acc = BigUint::zero();
    for a in 0..=e {
        for b in 0..=ci {
            let x_part = binom(r, h - (a + b) as i64);
            if x_part.is_zero() {
                continue;
            }
            let lead = binom(e, a as i64) * binom(ci, b as i64) * x_part;
            for c in 0..=dc {
                let k = h - cl as i64 - a as i64 + b as i64 + c as i64;
                if let Some(y) = row_get(&row_y_even, k) {
                    acc += &lead * binom(dc, c as i64) * y;
                }
            }
        }
    }
    acc
}

/// `2^{free} · S / 2` where `free` counts monomials in neither support.
fn lift_half(sum: BigUint, free: u64) -> BigUint {
    if free >= 1 {
        sum << (free - 1) as usize
    } else {
        debug_assert!(sum.is_even());
        sum >> 1usize
    }
}

fn check_sigma2_shape(d: u64, ell: u64, i: u64, j: u64) -> Result<()> {
    if ell == 0 || ell > d || i >= ell || j > i {
        return Err(domain(format!(
            "Σ2 shape needs 0 ≤ j ≤ i ≤ ℓ-1, ℓ ≤ d; got (d, ℓ, i, j) = ({d}, {ell}, {i}, {j})"
        )));
    }
    Ok(())
}

/// Within `𝔹_{d,2ℓ-i}`: hypersurfaces through the canonical pair
/// `x_{(i,j)}`, `y_{(i,j)}`, via the double sum.
pub fn pair_count_sigma2(d: u64, ell: u64, i: u64, j: u64) -> Result<BigUint> {
    pair_count_sigma2_with(d, ell, i, j, &MomentConfig::default())
}

pub fn pair_count_sigma2_with(d: u64, ell: u64, i: u64, j: u64, config: &MomentConfig) -> Result<BigUint> {
    check_sigma2_shape(d, ell, i, j)?;
    let nl = even_n(d, ell)?;
    let ni = n_monomials(d, i).to_u64().expect("N_{d,i} ≤ N_{d,ℓ}");
    let ci = c_or_zero(d, i, j);
    check_budget(sigma2_cost(nl, ni, ci), config)?;
    let amb = explicit_exponent(d, 2 * ell - i)?;
    Ok(lift_half(sigma2_double_sum(nl, ni, ci), amb + ni - 2 * nl))
}

/// Same count as [`pair_count_sigma2`] from the unconvolved triple sum.
pub fn pair_count_sigma2_triple(d: u64, ell: u64, i: u64, j: u64) -> Result<BigUint> {
    check_sigma2_shape(d, ell, i, j)?;
    let nl = even_n(d, ell)?;
    let ni = n_monomials(d, i).to_u64().expect("N_{d,i} ≤ N_{d,ℓ}");
    let ci = c_or_zero(d, i, j);
    let cl = c_or_zero(d, ell, j);
    let amb = explicit_exponent(d, 2 * ell - i)?;
    Ok(lift_half(sigma2_triple_sum(nl, ni, ci, cl), amb + ni - 2 * nl))
}

/// Within `𝔹_{d,2ℓ+1}`: hypersurfaces through two points with disjoint
/// supports.
pub fn pair_count_sigma3(d: u64, ell: u64) -> Result<BigUint> {
    if ell == 0 {
        return Err(domain("need ℓ ≥ 1"));
    }
    let nl = even_n(d, ell)?;
    let amb = explicit_exponent(d, 2 * ell + 1)?;
    let c = central(nl);
    Ok(lift_half(&c * &c, amb - 2 * nl))
}

/// Where a report came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    ClosedForm,
    Oracle,
}

/// Exact first and second moments with the second split by pair shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomentReport {
    pub d: u64,
    pub n: u64,
    pub ell: u64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub m1: BigRational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub sigma1: BigRational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub sigma2: BigRational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub sigma3: BigRational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub m2: BigRational,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub cs_lower_bound: BigRational,
    pub source: Source,
    pub statement: &'static str,
}

pub const MOMENT_CSV_HEADER: &[&str] = &["d", "n", "ell", "m1", "sigma1", "sigma2", "sigma3", "m2", "cs_lower_bound"];

impl CsvRow for MomentReport {
    fn header() -> &'static [&'static str] {
        MOMENT_CSV_HEADER
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.d.to_string(),
            self.n.to_string(),
            self.ell.to_string(),
            fraction_string(&self.m1),
            fraction_string(&self.sigma1),
            fraction_string(&self.sigma2),
            fraction_string(&self.sigma3),
            fraction_string(&self.m2),
            fraction_string(&self.cs_lower_bound),
        ]
    }
}

impl MomentReport {
    /// Assembles a report from its parts; `m2` is their sum.
    pub fn assemble(
        d: u64,
        n: u64,
        ell: u64,
        m1: BigRational,
        sigma: [BigRational; 3],
        source: Source,
    ) -> Self {
        let [sigma1, sigma2, sigma3] = sigma;
        let m2 = &m1 + &sigma1 + &sigma2 + &sigma3;
        let cs_lower_bound = if m2.is_zero() {
            BigRational::zero()
        } else {
            &m1 * &m1 / &m2
        };
        MomentReport {
            d,
            n,
            ell,
            m1,
            sigma1,
            sigma2,
            sigma3,
            m2,
            cs_lower_bound,
            source,
            statement: "second-moment decomposition and Cauchy-Schwarz bound",
        }
    }
}

/// Estimated term operations for [`m2_exact`].
pub fn m2_cost(d: u64, n: u64, ell: u64) -> Result<u128> {
    check_ell(n, ell)?;
    let nl = even_n(d, ell)?;
    let mut cost = 4 * nl as u128;
    for i in min_overlap(n, ell)..ell {
        let ni = n_monomials(d, i).to_u64().expect("N_{d,i} ≤ N_{d,ℓ}");
        let mut seen = std::collections::BTreeSet::new();
        for j in 0..=i {
            let ci = c_or_zero(d, i, j);
            if seen.insert(ci) {
                cost += sigma2_cost(nl, ni, ci);
            }
        }
    }
    Ok(cost)
}

pub fn m2_exact(d: u64, n: u64, ell: u64) -> Result<MomentReport> {
    m2_exact_with(d, n, ell, &MomentConfig::default())
}

pub fn m2_exact_with(d: u64, n: u64, ell: u64, config: &MomentConfig) -> Result<MomentReport> {
    if d < 2 || n < 2 {
        return Err(domain("moments need d, n ≥ 2"));
    }
    if ell == 0 || ell > d.min(n) {
        return Err(domain(format!("need 1 ≤ ℓ ≤ min(d, n), got ℓ = {ell}")));
    }
    let nl = even_n(d, ell)?;
    check_budget(m2_cost(d, n, ell)?, config)?;

    let m1 = m1_exact_with(d, n, ell, config)?;

    // Σ1: shapes (ℓ, j), j ≥ 1, ambient ℓ.
    let mut s1 = BigUint::zero();
    for j in 1..=ell {
        let c = c_or_zero(d, ell, j);
        let t = card_t(&TSetShape::overlap(n, ell, ell, j)?);
        s1 += t * sigma1_core(nl, c);
    }
    // ambient is ℓ itself, so count/2^{N_amb-1} = core/2^{N_{d,ℓ}-1}
    let sigma1 = ratio(s1, nl - 1);

    // Σ2: shapes (i, j), m ≤ i < ℓ; count/2^{N_amb-1} = S · 2^{N_{d,i} - 2N_{d,ℓ}}.
    let mut sigma2 = BigRational::zero();
    for i in min_overlap(n, ell)..ell {
        let ni = n_monomials(d, i).to_u64().expect("N_{d,i} ≤ N_{d,ℓ}");
        let mut by_c: std::collections::BTreeMap<u64, BigUint> = Default::default();
        for j in 0..=i {
            let t = card_t(&TSetShape::overlap(n, ell, i, j)?);
            *by_c.entry(c_or_zero(d, i, j)).or_default() += t;
        }
        let mut acc = BigUint::zero();
        for (ci, t) in by_c {
            acc += t * sigma2_double_sum(nl, ni, ci);
        }
        sigma2 += ratio(acc, 2 * nl - ni);
    }

    // Σ3: disjoint supports; count/2^{N_amb-1} = C(N_{d,ℓ}, N_{d,ℓ}/2)^2 / 2^{2N_{d,ℓ}}.
    let t3 = card_t(&TSetShape::disjoint(n, ell)?);
    let sigma3 = if t3.is_zero() {
        BigRational::zero()
    } else {
        let c = central(nl);
        ratio(t3 * &c * &c, 2 * nl)
    };

    Ok(MomentReport::assemble(d, n, ell, m1, [sigma1, sigma2, sigma3], Source::ClosedForm))
}

/// `ln C(N, N/2) - N ln 2` for even `N`, switching to the asymptotic series
/// once `N` is large enough for it to be accurate to double precision.
fn ln_central_deficit(nl: f64) -> f64 {
    if nl <= 1.0e5 {
        ln_gamma(nl + 1.0) - 2.0 * ln_gamma(nl / 2.0 + 1.0) - nl * std::f64::consts::LN_2
    } else {
        -0.5 * (std::f64::consts::PI * nl / 2.0).ln() - 1.0 / (4.0 * nl)
    }
}

fn ln_binom_f64(r: f64, s: f64) -> f64 {
    ln_gamma(r + 1.0) - ln_gamma(s + 1.0) - ln_gamma(r - s + 1.0)
}

/// Natural log of the first moment, in floating point.
pub fn ln_m1(d: u64, n: u64, ell: u64) -> Result<f64> {
    check_ell(n, ell)?;
    let big = n_monomials(d, ell);
    if big.is_odd() {
        return Err(Error::OddN { d, ell });
    }
    let nl = big.to_f64().unwrap_or(f64::INFINITY);
    Ok(ell as f64 * std::f64::consts::LN_2
        + ln_binom_f64((n + 1) as f64, (ell + 1) as f64)
        + ln_central_deficit(nl))
}

/// `μ_ℓ = (n-ℓ)(ℓ+1)/(n+1)`.
pub fn mu_ell(n: u64, ell: u64) -> f64 {
    (n - ell) as f64 * (ell + 1) as f64 / (n + 1) as f64
}

/// Computable part of the second-moment ratio bound with its O-constant
/// set to 1: `1 + [ℓ=n] + (3/4)^{min(ℓ,μ_ℓ)} + 1/min(d,n) + 1/M1`.
/// Non-rigorous; for monitoring only.
pub fn m2_ratio_bound_diagnostic(d: u64, n: u64, ell: u64) -> Result<f64> {
    if d < 2 || n < 2 {
        return Err(domain("moments need d, n ≥ 2"));
    }
    let m1 = ln_m1(d, n, ell)?.exp();
    let indicator = if ell == n { 1.0 } else { 0.0 };
    let expo = (ell as f64).min(mu_ell(n, ell));
    Ok(1.0 + indicator + 0.75f64.powf(expo) + 1.0 / d.min(n) as f64 + 1.0 / m1)
}
