//! Mod-2 and mod-4 structure of ±1 forms and the resulting upper bound on
//! the proportion of everywhere locally soluble hypersurfaces.
//!
//! Every coefficient is odd, so modulo 2 a form only sees which monomials
//! survive on a point: `f(x) ≡ N_{d,m} (mod 2)` for a 0/1 point with `m + 1`
//! nonzero coordinates. The first `m ≥ 1` with `N_{d,m}` even is
//! `2^{v₂(d)}`, which gives the trichotomy below.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{binom, c_odd_monomials, is_even_big, n_monomials, v2};
use crate::error::{domain, Error, Result};
use crate::forms::{for_each_subset, MonomialIndexing, PointTerms, SignVector, SupportPoint};
use crate::report::CsvRow;

/// Upper bound on the locally soluble proportion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Zero,
    Half,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Every `N_{d,m}`, `m ≤ n`, is odd: no point modulo 2.
    NoMod2Point,
    /// Only `(1:…:1)` survives mod 2, and `f ≡ f(1,…,1) (mod 4)` on its lifts.
    AllOnesMod4Statistic,
    /// `n` exceeds `2^{v₂(d)}`; only the trivial bound.
    ThresholdWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalClass {
    pub d: u64,
    pub n: u64,
    pub class: Class,
    pub certificate: Certificate,
}

impl CsvRow for LocalClass {
    fn header() -> &'static [&'static str] {
        &["d", "n", "class", "certificate"]
    }

    fn cells(&self) -> Vec<String> {
        let j = serde_json::to_value(self).expect("plain enum");
        vec![
            self.d.to_string(),
            self.n.to_string(),
            j["class"].as_str().unwrap_or_default().to_string(),
            j["certificate"].as_str().unwrap_or_default().to_string(),
        ]
    }
}

/// `2^{v₂(d)}`, the least `m ≥ 1` with `N_{d,m}` even.
pub fn mod2_threshold(d: u64) -> u64 {
    1u64 << v2(d)
}

pub fn local_class(d: u64, n: u64) -> Result<LocalClass> {
    if d < 2 || n < 2 {
        return Err(domain("local class needs d, n ≥ 2"));
    }
    let t = mod2_threshold(d);
    let (class, certificate) = match n.cmp(&t) {
        std::cmp::Ordering::Less => (Class::Zero, Certificate::NoMod2Point),
        std::cmp::Ordering::Equal => (Class::Half, Certificate::AllOnesMod4Statistic),
        std::cmp::Ordering::Greater => (Class::One, Certificate::ThresholdWitness),
    };
    Ok(LocalClass { d, n, class, certificate })
}

/// Both routes to "has a nonzero solution modulo 2".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mod2Check {
    /// Exhaustive search over nonzero `x ∈ {0,1}^{n+1}`.
    pub exhaustive: bool,
    /// Some `1 ≤ m ≤ n` with `N_{d,m}` even.
    pub structural: bool,
}

impl Mod2Check {
    pub fn agree(&self) -> bool {
        self.exhaustive == self.structural
    }
}

/// 0/1 points of `P^n` with their monomial terms, reusable across forms.
pub struct Mod2Searcher {
    d: u32,
    n: usize,
    points: Vec<PointTerms>,
}

impl Mod2Searcher {
    pub fn new(d: u32, n: usize) -> Self {
        let mut points = Vec::new();
        for size in 1..=n + 1 {
            for_each_subset(n + 1, size, |s| {
                let x = SupportPoint::new(n, s.to_vec(), vec![1; s.len()]).expect("valid subset");
                points.push(PointTerms::new(d, &x));
            });
        }
        Mod2Searcher { d, n, points }
    }

    pub fn has_point(&self, f: &SignVector) -> Result<bool> {
        if f.d() != self.d || f.n() != self.n {
            return Err(Error::DimensionMismatch("form does not match searcher".into()));
        }
        Ok(self.points.iter().any(|p| p.eval(f) % 2 == 0))
    }

    /// Both routes for `f`, reusing this searcher's point table.
    pub fn check(&self, f: &SignVector) -> Result<Mod2Check> {
        Ok(Mod2Check {
            exhaustive: self.has_point(f)?,
            structural: has_point_mod2_structural(f.d() as u64, f.n() as u64),
        })
    }
}

/// Structural criterion: some support size `m + 1 ≥ 2` has `N_{d,m}` even.
pub fn has_point_mod2_structural(d: u64, n: u64) -> bool {
    (1..=n).any(|m| is_even_big(&n_monomials(d, m)))
}

pub fn has_point_mod2(f: &SignVector) -> Mod2Check {
    Mod2Searcher::new(f.d(), f.n())
        .check(f)
        .expect("searcher built for f")
}

/// `f(1,…,1) mod 4 = (N_{d,n} - 2ν(f)) mod 4`.
pub fn f_all_ones_mod4(f: &SignVector) -> u8 {
    let v = f.len() as i128 - 2 * f.nu() as i128;
    v.rem_euclid(4) as u8
}

/// Exact fraction of canonical classes with `f(1,…,1) ≡ 0 (mod 4)`.
///
/// With the `x_0^d` coefficient fixed at +1, `ν` is the popcount of the
/// remaining `N - 1` bits.
pub fn mod4_zero_fraction(d: u64, n: u64) -> Result<BigRational> {
    let big_n = n_monomials(d, n)
        .to_u64()
        .filter(|&v| v <= 1 << 16)
        .ok_or_else(|| domain("N_{d,n} too large for the exact class count"))?;
    let mut hits = BigUint::zero();
    for nu in 0..big_n {
        if (big_n as i128 - 2 * nu as i128).rem_euclid(4) == 0 {
            hits += binom(big_n - 1, nu as i64);
        }
    }
    Ok(BigRational::new(
        BigInt::from(hits),
        BigInt::from(BigUint::from(1u32) << (big_n - 1) as usize),
    ))
}

/// Settings for the sampled mod-4 checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mod4Config {
    /// Enumerate all classes when there are at most this many.
    pub class_cap: u64,
    /// Otherwise draw this many forms.
    pub samples: u64,
    pub seed: u64,
    /// Skip the form checks when `N_{d,n}` exceeds this.
    pub max_monomials: u64,
    /// Largest number of variables for [`has_point_mod4`].
    pub mod4_var_bound: usize,
}

impl Default for Mod4Config {
    fn default() -> Self {
        Mod4Config {
            class_cap: 1 << 16,
            samples: 256,
            seed: 0x5eed,
            max_monomials: 1 << 16,
            mod4_var_bound: 9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mod4ClaimReport {
    pub d: u64,
    pub n: u64,
    pub exhaustive: bool,
    pub forms_checked: u64,
    pub points_per_form: u64,
    /// `f(x) ≡ f(1,…,1) (mod 4)` for every checked form and ±1 point.
    pub congruence_holds: bool,
    /// `c_{d,n}(j)` even for every `1 ≤ j ≤ n`.
    pub c_even: bool,
}

impl Mod4ClaimReport {
    pub fn passed(&self) -> bool {
        self.congruence_holds && self.c_even
    }
}

/// Draws a uniform ±1 form from `rng`.
pub(crate) fn random_form(d: u32, n: usize, rng: &mut impl RngCore) -> Result<SignVector> {
    let base = SignVector::all_plus(d, n)?;
    let words = (0..base.words().len()).map(|_| rng.next_u64()).collect();
    SignVector::from_words(d, n, words)
}

/// Calls `f` on every class (when within the cap) or on sampled forms.
fn for_each_form(
    d: u64,
    n: u64,
    config: &Mod4Config,
    mut f: impl FnMut(&SignVector) -> bool,
) -> Result<(bool, u64, bool)> {
    let big_n = n_monomials(d, n).to_u64().unwrap_or(u64::MAX);
    if big_n > config.max_monomials {
        return Ok((false, 0, true));
    }
    let classes_log2 = big_n - 1;
    if classes_log2 < 63 && (1u64 << classes_log2) <= config.class_cap {
        let classes = 1u64 << classes_log2;
        let mut ok = true;
        for k in 0..classes {
            let v = SignVector::from_u64(d as u32, n as usize, k << 1)?;
            ok &= f(&v);
        }
        Ok((true, classes, ok))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut ok = true;
        for _ in 0..config.samples {
            let v = random_form(d as u32, n as usize, &mut rng)?;
            ok &= f(&v);
        }
        Ok((false, config.samples, ok))
    }
}

/// Checks `f(x) ≡ f(1,…,1) (mod 4)` on all `x ∈ {±1}^{n+1}` when
/// `n = 2^{v₂(d)}`, together with the evenness of `c_{d,n}(j)` behind it.
pub fn verify_mod4_claim(d: u64, n: u64, config: &Mod4Config) -> Result<Mod4ClaimReport> {
    if n < 2 || n != mod2_threshold(d) {
        return Err(Error::Precondition(format!(
            "need n = 2^v2(d) ≥ 2, got d = {d}, n = {n}"
        )));
    }
    let c_even = (1..=n).all(|j| c_odd_monomials(d, n, j).map(|c| is_even_big(&c)).unwrap_or(false));

    let big_n = n_monomials(d, n).to_u64().unwrap_or(u64::MAX);
    let points: Vec<PointTerms> = if big_n <= config.max_monomials {
        // d is even, so f(-x) = f(x) and normalized points cover {±1}^{n+1}
        SupportPoint::enumerate(n as usize, n as usize)
            .iter()
            .map(|x| PointTerms::new(d as u32, x))
            .collect()
    } else {
        Vec::new()
    };
    let (exhaustive, forms_checked, congruence_holds) = for_each_form(d, n, config, |f| {
        let base = f_all_ones_mod4(f) as i64;
        points.iter().all(|p| p.eval(f).rem_euclid(4) == base)
    })?;
    Ok(Mod4ClaimReport {
        d,
        n,
        exhaustive,
        forms_checked,
        points_per_form: points.len() as u64,
        congruence_holds,
        c_even,
    })
}

/// Primitive points of `(ℤ/4)^{n+1}` up to units, first odd coordinate
/// normalized to 1, with a table of their monomial values mod 4.
pub struct Mod4Searcher {
    d: u32,
    n: usize,
    // one row of N_{d,n} values in {0,1,2,3} per point
    values: Vec<Vec<u8>>,
}

impl Mod4Searcher {
    pub fn new(d: u32, n: usize, var_bound: usize) -> Result<Self> {
        if n + 1 > var_bound {
            return Err(Error::BoundExceeded {
                needed: n + 1,
                bound: var_bound,
            });
        }
        let idx = MonomialIndexing::new(d, n, 1 << 20)?;
        let vars = n + 1;
        let mut values = Vec::new();
        let mut x = vec![0u8; vars];
        for code in 0..4u64.pow(vars as u32) {
            let mut c = code;
            for slot in x.iter_mut() {
                *slot = (c % 4) as u8;
                c /= 4;
            }
            match x.iter().find(|&&v| v % 2 == 1) {
                Some(&1) => {}
                _ => continue,
            }
            let row = idx
                .iter()
                .map(|e| {
                    e.iter()
                        .zip(&x)
                        .fold(1u8, |acc, (&k, &v)| acc * pow_mod4(v, k) % 4)
                })
                .collect();
            values.push(row);
        }
        Ok(Mod4Searcher { d, n, values })
    }

    pub fn points(&self) -> usize {
        self.values.len()
    }

    pub fn has_point(&self, f: &SignVector) -> Result<bool> {
        if f.d() != self.d || f.n() != self.n {
            return Err(Error::DimensionMismatch("form does not match searcher".into()));
        }
        Ok(self.values.iter().any(|row| {
            let s: i64 = row
                .iter()
                .enumerate()
                .map(|(r, &v)| f.coefficient(r) * v as i64)
                .sum();
            s.rem_euclid(4) == 0
        }))
    }
}

fn pow_mod4(v: u8, k: u16) -> u8 {
    (0..k).fold(1, |acc, _| acc * v % 4)
}

/// Exhaustive search for a primitive solution modulo 4.
pub fn has_point_mod4(f: &SignVector, var_bound: usize) -> Result<bool> {
    Mod4Searcher::new(f.d(), f.n(), var_bound)?.has_point(f)
}

/// Proportion of forms with a primitive point modulo 4, exhaustive within
/// the class cap and sampled otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mod4Rate {
    pub d: u64,
    pub n: u64,
    pub exhaustive: bool,
    pub forms: u64,
    pub soluble: u64,
}

pub fn mod4_solubility_rate(d: u64, n: u64, config: &Mod4Config) -> Result<Mod4Rate> {
    let searcher = Mod4Searcher::new(d as u32, n as usize, config.mod4_var_bound)?;
    let mut soluble = 0u64;
    let (exhaustive, forms, _) = for_each_form(d, n, config, |f| {
        if searcher.has_point(f).unwrap_or(false) {
            soluble += 1;
        }
        true
    })?;
    Ok(Mod4Rate {
        d,
        n,
        exhaustive,
        forms,
        soluble,
    })
}
