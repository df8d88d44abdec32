//! Choice of `ℓ`, the density set `𝒟`, and exact Cauchy–Schwarz lower
//! bounds `M1² / M2` on the density of hypersurfaces with a rational point.

use num_rational::BigRational;
use serde::Serialize;

use crate::combinatorics::{is_n_even, v2};
use crate::error::{domain, Error, Result};
use crate::moments::{m2_exact_with, MomentConfig};
use crate::montecarlo::MonteCarloResult;
use crate::report::{fraction_string, CsvRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EllRule {
    PowerOfTwo,
    BigK1,
    SmallK1,
    Theorem2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EllChoice {
    pub d: u64,
    /// Exponent of the leading binary digit of `d`.
    pub k0: u32,
    /// Exponent of the second binary digit, absent for powers of two.
    pub k1: Option<u32>,
    pub ell: u64,
    pub rule: EllRule,
}

impl EllChoice {
    pub fn shares_digit(&self) -> bool {
        self.d & self.ell != 0
    }

    /// `d/7 < ℓ ≤ d/2`, checked as `7ℓ > d` and `2ℓ ≤ d`.
    pub fn in_window(&self) -> bool {
        7 * self.ell > self.d && 2 * self.ell <= self.d
    }

    /// The invariants promised by the rule that produced this choice.
    pub fn satisfies_invariants(&self) -> bool {
        let window = match self.rule {
            EllRule::BigK1 | EllRule::SmallK1 => self.in_window(),
            EllRule::PowerOfTwo | EllRule::Theorem2 => true,
        };
        self.shares_digit() && window && is_n_even(self.d, self.ell)
    }
}

fn leading_digits(d: u64) -> (u32, Option<u32>) {
    let k0 = 63 - d.leading_zeros();
    let rest = d ^ (1 << k0);
    let k1 = (rest != 0).then(|| 63 - rest.leading_zeros());
    (k0, k1)
}

/// `ℓ = d` for powers of two; otherwise `2^{k1}` when `2^{k1} > d/7` and
/// `2^{k1} + 2^{k0-2}` when not.
pub fn select_ell_theorem1(d: u64) -> Result<EllChoice> {
    if d < 2 {
        return Err(domain("need d ≥ 2"));
    }
    let (k0, k1) = leading_digits(d);
    let (ell, rule) = match k1 {
        None => (d, EllRule::PowerOfTwo),
        Some(k1) if 7 * (1u64 << k1) > d => (1 << k1, EllRule::BigK1),
        Some(k1) => ((1 << k1) + (1 << (k0 - 2)), EllRule::SmallK1),
    };
    let choice = EllChoice { d, k0, k1, ell, rule };
    debug_assert!(choice.satisfies_invariants(), "{choice:?}");
    Ok(choice)
}

/// `⌊log₂ ln d⌋ + 3`.
pub fn theorem2_exponent(d: u64) -> u32 {
    ((d as f64).ln().log2().floor() as i64 + 3) as u32
}

/// `ℓ = 2^{v₂(d)} + 2^{⌊log₂ ln d⌋ + 3}`, or `DigitClash` when the two
/// powers coincide. Membership of `d` in `𝒟` is not required.
pub fn select_ell_theorem2(d: u64) -> Result<EllChoice> {
    if d < 16 {
        return Err(domain("need d ≥ 16"));
    }
    let (k0, k1) = leading_digits(d);
    let v = v2(d);
    let exponent = theorem2_exponent(d);
    if v == exponent {
        return Err(Error::DigitClash { d, v2: v, exponent });
    }
    Ok(EllChoice {
        d,
        k0,
        k1,
        ell: (1 << v) + (1 << exponent),
        rule: EllRule::Theorem2,
    })
}

/// Where `ℓ` sits relative to `4 ln d` and `9 ln d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogWindow {
    pub d: u64,
    pub ell: u64,
    pub lower: bool,
    pub upper: bool,
}

pub fn theorem2_window(choice: &EllChoice) -> LogWindow {
    let ln = (choice.d as f64).ln();
    LogWindow {
        d: choice.d,
        ell: choice.ell,
        lower: 4.0 * ln <= choice.ell as f64,
        upper: choice.ell as f64 <= 9.0 * ln,
    }
}

/// For `d ∈ 𝒟` with `16 ≤ d ≤ d_max` where the second selector succeeds:
/// the first `d` at which each side of `4 ln d ≤ ℓ ≤ 9 ln d` holds, and
/// the `d` after which it holds through `d_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WindowOnsets {
    pub d_max: u64,
    pub checked: u64,
    pub clashes: u64,
    pub lower_first: Option<u64>,
    pub lower_from: Option<u64>,
    pub upper_first: Option<u64>,
    pub upper_from: Option<u64>,
}

pub fn theorem2_onsets(d_max: u64) -> WindowOnsets {
    let mut out = WindowOnsets {
        d_max,
        checked: 0,
        clashes: 0,
        lower_first: None,
        lower_from: None,
        upper_first: None,
        upper_from: None,
    };
    for d in 16..=d_max {
        if !in_density_set(d).map(|r| r.member).unwrap_or(false) {
            continue;
        }
        let Ok(choice) = select_ell_theorem2(d) else {
            out.clashes += 1;
            continue;
        };
        out.checked += 1;
        let w = theorem2_window(&choice);
        for (holds, first, from) in [
            (w.lower, &mut out.lower_first, &mut out.lower_from),
            (w.upper, &mut out.upper_first, &mut out.upper_from),
        ] {
            if holds {
                first.get_or_insert(d);
                from.get_or_insert(d);
            } else {
                *from = None;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensitySetReport {
    pub d: u64,
    pub v2_d: u32,
    /// `ln ln ln d`.
    pub threshold: f64,
    pub member: bool,
}

/// Whether `v₂(d) ≤ ln ln ln d`.
pub fn in_density_set(d: u64) -> Result<DensitySetReport> {
    if d < 16 {
        return Err(domain("the density set is defined for d ≥ 16"));
    }
    let threshold = (d as f64).ln().ln().ln();
    let v2_d = v2(d);
    Ok(DensitySetReport {
        d,
        v2_d,
        threshold,
        member: v2_d as f64 <= threshold,
    })
}

/// `M1² / M2`, a lower bound for the proportion of hypersurfaces with a
/// zero in `U_{n,ℓ}`.
pub fn cs_lower_bound(d: u64, n: u64, ell: u64) -> Result<BigRational> {
    cs_lower_bound_with(d, n, ell, &MomentConfig::default())
}

pub fn cs_lower_bound_with(d: u64, n: u64, ell: u64, config: &MomentConfig) -> Result<BigRational> {
    Ok(m2_exact_with(d, n, ell, config)?.cs_lower_bound)
}

/// One row of a bound table: the exact lower bound and, optionally, a Monte
/// Carlo estimate for the same `(d, n, ℓ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub d: u64,
    pub n: u64,
    pub ell: Option<u64>,
    pub rule: Option<EllRule>,
    #[serde(serialize_with = "crate::report::ser_opt_rational")]
    pub cs_lower_bound: Option<BigRational>,
    pub monte_carlo: Option<MonteCarloResult>,
    /// Why the bound is missing, if it is.
    pub error: Option<String>,
    pub statement: &'static str,
}

impl CsvRow for BoundRow {
    fn header() -> &'static [&'static str] {
        &["d", "n", "ell", "cs_lower_bound", "mc_estimate", "mc_ci_low", "mc_ci_high", "samples", "seed"]
    }

    fn cells(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let mc = self.monte_carlo.as_ref();
        vec![
            self.d.to_string(),
            self.n.to_string(),
            opt(self.ell.map(|l| l.to_string())),
            opt(self.cs_lower_bound.as_ref().map(fraction_string)),
            opt(mc.map(|m| fraction_string(&m.estimate))),
            opt(mc.map(|m| m.ci95.0.to_string())),
            opt(mc.map(|m| m.ci95.1.to_string())),
            opt(mc.map(|m| m.samples.to_string())),
            opt(mc.map(|m| m.seed.to_string())),
        ]
    }
}

pub const BOUND_STATEMENT: &str = "Cauchy-Schwarz lower bound M1^2/M2";
