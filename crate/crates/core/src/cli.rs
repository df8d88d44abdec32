//! Batch command surface. Each subcommand evaluates a grid in parallel,
//! collects the rows in grid order and writes them as line-delimited JSON
//! or CSV. Exit status: 0 when every assertion in scope passes, 1 on an
//! assertion failure (a JSON failure record goes to stderr), 2 on a
//! configuration error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::combinatorics::{
    bias_bound_check, c_odd_monomials, check_monomial_partition, check_series_recurrence,
    hypergeometric_bound_check, is_n_even, n_monomials, stirling_sweep, vandermonde_check, Vandermonde,
};
use crate::error::{Error, Result};
use crate::estimator::{
    cs_lower_bound_with, select_ell_theorem1, select_ell_theorem2, BoundRow, EllRule, BOUND_STATEMENT,
};
use crate::forms::SignVector;
use crate::interval::PrecisionPolicy;
use crate::moments::{m2_exact_with, m2_ratio_bound_diagnostic, MomentConfig, MomentReport, DEFAULT_TERM_BUDGET};
use crate::montecarlo::{monte_carlo_r_with, MonteCarloConfig};
use crate::oracle::{brute_r_u, brute_report, DEFAULT_CLASS_CAP};
use crate::report::{fraction_string, write_rows, CsvRow, Format};
use crate::solubility::{has_point_mod2, local_class, mod2_threshold, verify_mod4_claim, Mod4Config};

/// A list of integers written as `3`, `1,2,5`, `2..8` (inclusive) or a
/// comma-separated mix of these.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntList(pub Vec<u64>);

impl FromStr for IntList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim) {
            let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad integer `{t}`: {e}"));
            if let Some((a, b)) = part.split_once("..") {
                let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty range `{part}`"));
                }
                out.extend(a..=b);
            } else {
                out.push(num(part)?);
            }
        }
        if out.is_empty() {
            return Err("empty list".into());
        }
        Ok(IntList(out))
    }
}

#[derive(Debug, Parser)]
#[command(name = "hypermoments", version, about = "Moments, oracles and bounds for random ±1 hypersurfaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "HYPERMOMENTS_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Lemma {
    All,
    Bias,
    Hypergeometric,
    Vandermonde,
    Series,
    Partition,
    Stirling,
    Parity,
    Mod2,
    Mod4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Selector {
    Theorem1,
    Theorem2,
    Fixed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run identity and inequality suites over a grid.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        lemma: Lemma,
        /// Upper end of the suite's main parameter; each suite has its own default.
        #[arg(long)]
        d_max: Option<u64>,
        /// Restrict the bias suite to these `j`.
        #[arg(long)]
        j: Option<IntList>,
        /// Largest `n` for the mod-2 suite.
        #[arg(long)]
        n: Option<u64>,
        /// Random tuples for the Vandermonde suite.
        #[arg(long, default_value_t = 500)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest working precision for π enclosures.
        #[arg(long, default_value_t = 4096)]
        precision_bits: u32,
    },
    /// Exact first and second moments.
    Moments {
        #[arg(long)]
        d: IntList,
        #[arg(long)]
        n: IntList,
        /// Defaults to every `1 ≤ ℓ ≤ n`.
        #[arg(long)]
        ell: Option<IntList>,
        /// Term budget for exact evaluation.
        #[arg(long, default_value_t = DEFAULT_TERM_BUDGET)]
        cap: u128,
    },
    /// Compare the closed forms with brute-force enumeration.
    Oracle {
        #[arg(long)]
        d: IntList,
        #[arg(long)]
        n: IntList,
        #[arg(long)]
        ell: Option<IntList>,
        /// Largest number of enumerated classes.
        #[arg(long, default_value_t = DEFAULT_CLASS_CAP)]
        cap: u64,
    },
    /// Local-solubility trichotomy table.
    Local {
        #[arg(long)]
        d: IntList,
        #[arg(long)]
        n: IntList,
    },
    /// Cauchy–Schwarz lower bounds with `ℓ` from a selector.
    Bound {
        #[arg(long)]
        d: IntList,
        #[arg(long)]
        n: IntList,
        #[arg(long, value_enum, default_value = "theorem1")]
        selector: Selector,
        /// `ℓ` for the fixed selector.
        #[arg(long)]
        ell: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_TERM_BUDGET)]
        cap: u128,
        /// Add a Monte Carlo column with this many samples.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo estimate of the proportion with a zero in the searched points.
    Mc {
        #[arg(long)]
        d: IntList,
        #[arg(long)]
        n: IntList,
        #[arg(long)]
        ell: IntList,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        /// Per-`ℓ` budget of point-monomial terms searched exhaustively.
        #[arg(long)]
        cap: Option<u128>,
    },
}

/// One suite result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyRow {
    pub suite: &'static str,
    pub parameters: String,
    pub cases: u64,
    pub failures: u64,
    pub passed: bool,
    pub first_failure: Option<String>,
    pub statement: &'static str,
}

impl CsvRow for VerifyRow {
    fn header() -> &'static [&'static str] {
        &["suite", "parameters", "cases", "failures", "passed", "first_failure"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.suite.into(),
            self.parameters.clone(),
            self.cases.to_string(),
            self.failures.to_string(),
            self.passed.to_string(),
            self.first_failure.clone().unwrap_or_default(),
        ]
    }
}

struct Tally {
    cases: u64,
    failures: u64,
    first: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failures: 0,
            first: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.first.get_or_insert_with(what);
        }
    }

    fn row(self, suite: &'static str, parameters: String, statement: &'static str) -> VerifyRow {
        VerifyRow {
            suite,
            parameters,
            cases: self.cases,
            failures: self.failures,
            passed: self.failures == 0,
            first_failure: self.first,
            statement,
        }
    }
}

fn suite_bias(d_max: u64, js: Option<&[u64]>) -> Vec<VerifyRow> {
    (1..=d_max)
        .into_par_iter()
        .map(|d| {
            let mut t = Tally::new();
            for ell in 1..=d {
                for j in 1..=ell {
                    if js.is_some_and(|js| !js.contains(&j)) {
                        continue;
                    }
                    let ok = bias_bound_check(d, ell, j).map(|c| c.passed()).unwrap_or(false);
                    t.check(ok, || format!("d={d} ell={ell} j={j}"));
                }
            }
            t.row("bias", format!("d={d}"), "odd-monomial bias at most 2^-min(j, l+1-j)")
        })
        .collect()
}

fn suite_hypergeometric(r_max: u64) -> Vec<VerifyRow> {
    (0..=r_max)
        .into_par_iter()
        .map(|r| {
            let mut t = Tally::new();
            for s in 0..=r_max {
                t.check(hypergeometric_bound_check(r, s).ok, || format!("r={r} s={s}"));
            }
            t.row(
                "hypergeometric",
                format!("r={r}"),
                "sum_j C(r,j)C(s,j)2^-j at most (3/4)^(rs/(r+s)) C(r+s,r)",
            )
        })
        .collect()
}

fn suite_vandermonde(max: u64, samples: u64, seed: u64) -> Vec<VerifyRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tuples = Vec::with_capacity(samples as usize);
    for _ in 0..samples {
        let r1 = rng.random_range(0..=max);
        let r2 = rng.random_range(0..=max);
        let r3 = rng.random_range(0..=max);
        let q = rng.random_range(0..=max);
        let shift = rng.random_range(-(max as i64)..=max as i64);
        tuples.push([
            Vandermonde::Basic { r1, r2, q },
            Vandermonde::Shifted { r1, r2, q: shift },
            Vandermonde::Triple { r1, r2, r3, q },
        ]);
    }
    let names = ["vandermonde_basic", "vandermonde_shifted", "vandermonde_triple"];
    (0..3)
        .map(|k| {
            let mut t = Tally::new();
            for tuple in &tuples {
                t.check(vandermonde_check(tuple[k]), || format!("{:?}", tuple[k]));
            }
            t.row(names[k], format!("max={max} seed={seed}"), "Vandermonde convolution")
        })
        .collect()
}

fn suite_series(max: u64) -> Vec<VerifyRow> {
    let mut t = Tally::new();
    for d in 0..=max {
        for h in 0..=max {
            t.check(check_series_recurrence(d, h), || format!("d={d} h={h}"));
        }
    }
    vec![t.row("series", format!("d,h<={max}"), "C(d+h+1,d) = sum_k C(k+h,k)")]
}

fn suite_partition(d_max: u64) -> Vec<VerifyRow> {
    (1..=d_max)
        .into_par_iter()
        .map(|d| {
            let mut t = Tally::new();
            for ell in 1..=d {
                for j in 1..=ell {
                    let ok = check_monomial_partition(d, ell, j).unwrap_or(false);
                    t.check(ok, || format!("d={d} ell={ell} j={j}"));
                }
            }
            t.row("partition", format!("d={d}"), "monomials split by degree in j variables")
        })
        .collect()
}

fn suite_stirling(m_max: u64, policy: PrecisionPolicy) -> Vec<VerifyRow> {
    let mut t = Tally::new();
    for c in stirling_sweep(m_max, policy) {
        t.check(c.passed(), || format!("m={} central={:?} half={:?}", c.m, c.central, c.half));
    }
    vec![t.row("stirling", format!("m<={m_max}"), "central binomial upper bounds")]
}

fn suite_parity(max: u64) -> Vec<VerifyRow> {
    let mut t = Tally::new();
    for e in 1..=max {
        for ell in 1..=max {
            let direct = n_monomials(e, ell).bit(0) == false;
            t.check(is_n_even(e, ell) == direct, || format!("e={e} ell={ell}"));
        }
    }
    vec![t.row("parity", format!("e,ell<={max}"), "C(e+l,e) even iff e and l share a binary digit")]
}

fn suite_mod2(d_max: u64, n_max: u64, seed: u64) -> Vec<VerifyRow> {
    let grid: Vec<(u64, u64)> = (2..=d_max).flat_map(|d| (2..=n_max).map(move |n| (d, n))).collect();
    grid.into_par_iter()
        .map(|(d, n)| {
            let mut t = Tally::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (d << 32 | n));
            let structural = n >= mod2_threshold(d);
            for k in 0..8 {
                let f = if k == 0 {
                    SignVector::all_plus(d as u32, n as usize)
                } else {
                    crate::solubility::random_form(d as u32, n as usize, &mut rng)
                };
                let ok = f.map(|f| {
                    let c = has_point_mod2(&f);
                    c.agree() && c.exhaustive == structural
                });
                t.check(ok.unwrap_or(false), || format!("d={d} n={n} form={k}"));
            }
            let class = local_class(d, n).map(|c| c.class);
            let expected = match n.cmp(&mod2_threshold(d)) {
                std::cmp::Ordering::Less => crate::solubility::Class::Zero,
                std::cmp::Ordering::Equal => crate::solubility::Class::Half,
                std::cmp::Ordering::Greater => crate::solubility::Class::One,
            };
            t.check(class == Ok(expected), || format!("d={d} n={n} class"));
            t.row("mod2", format!("d={d} n={n}"), "mod-2 solubility threshold 2^v2(d)")
        })
        .collect()
}

fn suite_mod4(d_max: u64) -> Vec<VerifyRow> {
    let cfg = Mod4Config::default();
    (2..=d_max)
        .filter(|&d| mod2_threshold(d) >= 2)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|d| {
            let n = mod2_threshold(d);
            let mut t = Tally::new();
            let r = verify_mod4_claim(d, n, &cfg);
            t.check(r.as_ref().map(|r| r.passed()).unwrap_or(false), || format!("d={d} n={n}"));
            for j in 1..=n {
                let even = c_odd_monomials(d, n, j).map(|c| !c.bit(0)).unwrap_or(false);
                t.check(even, || format!("d={d} n={n} j={j} c odd"));
            }
            t.row("mod4", format!("d={d} n={n}"), "f(x) = f(1,...,1) mod 4 at the threshold")
        })
        .collect()
}

struct Failure(Vec<serde_json::Value>);

fn run_verify(
    lemma: Lemma,
    d_max: Option<u64>,
    j: Option<&[u64]>,
    n: Option<u64>,
    samples: u64,
    seed: u64,
    precision_bits: u32,
) -> Vec<VerifyRow> {
    let pick = |default: u64| d_max.unwrap_or(default);
    let policy = PrecisionPolicy::with_max_bits(precision_bits);
    let all = lemma == Lemma::All;
    let mut rows = Vec::new();
    if all || lemma == Lemma::Bias {
        rows.extend(suite_bias(pick(40), j));
    }
    if all || lemma == Lemma::Hypergeometric {
        rows.extend(suite_hypergeometric(pick(60)));
    }
    if all || lemma == Lemma::Vandermonde {
        rows.extend(suite_vandermonde(pick(60), samples, seed));
    }
    if all || lemma == Lemma::Series {
        rows.extend(suite_series(pick(50)));
    }
    if all || lemma == Lemma::Partition {
        rows.extend(suite_partition(pick(40)));
    }
    if all || lemma == Lemma::Stirling {
        rows.extend(suite_stirling(pick(10_000), policy));
    }
    if all || lemma == Lemma::Parity {
        rows.extend(suite_parity(pick(64)));
    }
    if all || lemma == Lemma::Mod2 {
        rows.extend(suite_mod2(pick(8), n.unwrap_or(6), seed));
    }
    if all || lemma == Lemma::Mod4 {
        rows.extend(suite_mod4(pick(16)));
    }
    rows
}

/// A row of the `moments` table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentsRow {
    #[serde(flatten)]
    pub report: MomentReport,
    /// Non-rigorous `M2/M1²` bound with unit constants.
    pub ratio_diagnostic: Option<f64>,
}

impl CsvRow for MomentsRow {
    fn header() -> &'static [&'static str] {
        &["d", "n", "ell", "m1", "sigma1", "sigma2", "sigma3", "m2", "cs_lower_bound", "ratio_diagnostic"]
    }

    fn cells(&self) -> Vec<String> {
        let mut c = self.report.cells();
        c.push(self.ratio_diagnostic.map(|v| v.to_string()).unwrap_or_default());
        c
    }
}

/// A row of the `oracle` table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow {
    pub d: u64,
    pub n: u64,
    pub ell: u64,
    pub exact: MomentReport,
    pub brute: MomentReport,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub r_u: BigRational,
    pub moments_match: bool,
    pub cs_below_r_u: bool,
    pub passed: bool,
    pub statement: &'static str,
}

impl CsvRow for OracleRow {
    fn header() -> &'static [&'static str] {
        &["d", "n", "ell", "m1", "m2", "brute_m1", "brute_m2", "cs_lower_bound", "r_u", "passed"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.d.to_string(),
            self.n.to_string(),
            self.ell.to_string(),
            fraction_string(&self.exact.m1),
            fraction_string(&self.exact.m2),
            fraction_string(&self.brute.m1),
            fraction_string(&self.brute.m2),
            fraction_string(&self.exact.cs_lower_bound),
            fraction_string(&self.r_u),
            self.passed.to_string(),
        ]
    }
}

fn same_moments(a: &MomentReport, b: &MomentReport) -> bool {
    a.m1 == b.m1 && a.sigma1 == b.sigma1 && a.sigma2 == b.sigma2 && a.sigma3 == b.sigma3 && a.m2 == b.m2
}

/// `(d, n, ℓ)` triples of a grid with `1 ≤ ℓ ≤ n` and `N_{d,ℓ}` even.
fn moment_grid(d: &IntList, n: &IntList, ell: Option<&IntList>) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for &d in &d.0 {
        for &n in &n.0 {
            let ells: Vec<u64> = match ell {
                Some(l) => l.0.clone(),
                None => (1..=n.min(d)).collect(),
            };
            for l in ells {
                if d >= 2 && n >= 2 && (1..=n.min(d)).contains(&l) && is_n_even(d, l) {
                    out.push((d, n, l));
                }
            }
        }
    }
    out
}

fn oracle_rows(grid: &[(u64, u64, u64)], cap: u64) -> Result<Vec<OracleRow>> {
    grid.par_iter()
        .map(|&(d, n, ell)| {
            let exact = m2_exact_with(d, n, ell, &MomentConfig::default())?;
            let brute = brute_report(d, n, ell, cap)?;
            let r_u = brute_r_u(d, n, n, cap)?;
            let moments_match = same_moments(&exact, &brute);
            let cs_below_r_u = exact.cs_lower_bound <= r_u;
            Ok(OracleRow {
                d,
                n,
                ell,
                exact,
                brute,
                r_u,
                moments_match,
                cs_below_r_u,
                passed: moments_match && cs_below_r_u,
                statement: "closed-form moments equal enumeration; M1^2/M2 at most the zero density",
            })
        })
        .collect()
}

fn selector_ell(selector: Selector, d: u64, fixed: Option<u64>) -> Result<(u64, Option<EllRule>)> {
    match selector {
        Selector::Theorem1 => select_ell_theorem1(d).map(|c| (c.ell, Some(c.rule))),
        Selector::Theorem2 => select_ell_theorem2(d).map(|c| (c.ell, Some(c.rule))),
        Selector::Fixed => fixed
            .map(|l| (l, None))
            .ok_or_else(|| Error::Domain("--ell is required with the fixed selector".into())),
    }
}

fn bound_row(d: u64, n: u64, selector: Selector, fixed: Option<u64>, cap: u128, mc: Option<(u64, u64)>) -> BoundRow {
    let mut row = BoundRow {
        d,
        n,
        ell: None,
        rule: None,
        cs_lower_bound: None,
        monte_carlo: None,
        error: None,
        statement: BOUND_STATEMENT,
    };
    let (ell, rule) = match selector_ell(selector, d, fixed) {
        Ok(v) => v,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.ell = Some(ell);
    row.rule = rule;
    match cs_lower_bound_with(d, n, ell, &MomentConfig { term_budget: cap }) {
        Ok(b) => row.cs_lower_bound = Some(b),
        Err(e) => row.error = Some(e.to_string()),
    }
    if let Some((samples, seed)) = mc {
        if (1..=n).contains(&ell) {
            match monte_carlo_r_with(d, n, &[ell], samples, seed, &MonteCarloConfig::default()) {
                Ok(r) => row.monte_carlo = Some(r),
                Err(e) => row.error = Some(e.to_string()),
            }
        }
    }
    row
}

fn emit<R: Serialize + CsvRow>(rows: &[R], global: &GlobalArgs) -> Result<()> {
    match &global.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
            let mut w = io::BufWriter::new(file);
            write_rows(rows, global.format, &mut w)?;
            w.flush().map_err(|e| Error::Domain(e.to_string()))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write_rows(rows, global.format, &mut w)
        }
    }
}

fn failures<R: Serialize>(rows: &[R], failed: impl Fn(&R) -> bool) -> Option<Failure> {
    let bad: Vec<_> = rows
        .iter()
        .filter(|r| failed(r))
        .map(|r| serde_json::to_value(r).expect("rows serialize"))
        .collect();
    (!bad.is_empty()).then_some(Failure(bad))
}

fn dispatch(command: Command, global: &GlobalArgs) -> Result<Option<Failure>> {
    match command {
        Command::Verify {
            lemma,
            d_max,
            j,
            n,
            samples,
            seed,
            precision_bits,
        } => {
            let rows = run_verify(lemma, d_max, j.as_ref().map(|j| j.0.as_slice()), n, samples, seed, precision_bits);
            emit(&rows, global)?;
            Ok(failures(&rows, |r| !r.passed))
        }
        Command::Moments { d, n, ell, cap } => {
            let grid = moment_grid(&d, &n, ell.as_ref());
            if grid.is_empty() {
                return Err(Error::Domain("no admissible (d, n, ell) with N_{d,ell} even".into()));
            }
            let config = MomentConfig { term_budget: cap };
            let rows: Vec<MomentsRow> = grid
                .par_iter()
                .map(|&(d, n, ell)| {
                    Ok(MomentsRow {
                        report: m2_exact_with(d, n, ell, &config)?,
                        ratio_diagnostic: m2_ratio_bound_diagnostic(d, n, ell).ok(),
                    })
                })
                .collect::<Result<_>>()?;
            emit(&rows, global)?;
            let bad = |r: &MomentsRow| {
                let b = &r.report.cs_lower_bound;
                !(b > &BigRational::zero() && b <= &BigRational::one())
            };
            Ok(failures(&rows, bad))
        }
        Command::Oracle { d, n, ell, cap } => {
            let grid = moment_grid(&d, &n, ell.as_ref());
            if grid.is_empty() {
                return Err(Error::Domain("no admissible (d, n, ell) with N_{d,ell} even".into()));
            }
            let rows = oracle_rows(&grid, cap)?;
            emit(&rows, global)?;
            Ok(failures(&rows, |r| !r.passed))
        }
        Command::Local { d, n } => {
            let mut grid = Vec::new();
            for &d in &d.0 {
                for &n in &n.0 {
                    grid.push(local_class(d, n)?);
                }
            }
            emit(&grid, global)?;
            Ok(None)
        }
        Command::Bound {
            d,
            n,
            selector,
            ell,
            cap,
            samples,
            seed,
        } => {
            if samples == Some(0) {
                return Err(Error::Domain("--samples must be positive".into()));
            }
            let grid: Vec<(u64, u64)> = d.0.iter().flat_map(|&d| n.0.iter().map(move |&n| (d, n))).collect();
            let rows: Vec<BoundRow> = grid
                .par_iter()
                .map(|&(d, n)| bound_row(d, n, selector, ell, cap, samples.map(|s| (s, seed))))
                .collect();
            emit(&rows, global)?;
            let bad = |r: &BoundRow| {
                r.cs_lower_bound
                    .as_ref()
                    .is_some_and(|b| !(b > &BigRational::zero() && b <= &BigRational::one()))
            };
            Ok(failures(&rows, bad))
        }
        Command::Mc {
            d,
            n,
            ell,
            samples,
            seed,
            cap,
        } => {
            let mut config = MonteCarloConfig::default();
            if let Some(cap) = cap {
                config.point_budget = cap;
            }
            let mut rows = Vec::new();
            for &d in &d.0 {
                for &n in &n.0 {
                    rows.push(monte_carlo_r_with(d, n, &ell.0, samples, seed, &config)?);
                }
            }
            emit(&rows, global)?;
            Ok(None)
        }
    }
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Moments { .. } => "moments",
        Command::Oracle { .. } => "oracle",
        Command::Local { .. } => "local",
        Command::Bound { .. } => "bound",
        Command::Mc { .. } => "mc",
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.global.threads {
        if t == 0 {
            eprintln!("{}", json!({"status": "config_error", "message": "--threads must be positive"}));
            return 2;
        }
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}", json!({"status": "config_error", "message": e.to_string()}));
            return 2;
        }
    };
    let name = subcommand_name(&cli.command);
    let global = cli.global.clone();
    match pool.install(|| dispatch(cli.command, &global)) {
        Ok(None) => 0,
        Ok(Some(Failure(rows))) => {
            eprintln!(
                "{}",
                json!({"status": "assertion_failed", "subcommand": name, "failures": rows})
            );
            1
        }
        Err(e) => {
            eprintln!(
                "{}",
                json!({"status": "config_error", "subcommand": name, "message": e.to_string()})
            );
            2
        }
    }
}
