//! Monte Carlo estimation of the proportion of ±1 hypersurfaces with a zero
//! among the searched points of `∪_{ℓ} U_{n,ℓ}`.
//!
//! The coefficient of the monomial with rank `r` in sample `s` is bit
//! `r mod 64` of word `⌊r/64⌋` of the ChaCha8 stream `s` under the run seed.
//! Only the words touched by searched points are generated, by seeking in
//! the stream, so two runs with the same seed see the same hypersurfaces
//! whatever they search. For each `ℓ` the searched set is either all of
//! `U_{n,ℓ}` or, when that exceeds the per-sample budget, a fixed seeded
//! sample of its points drawn independently of the other entries of the
//! list.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::n_monomials;
use crate::error::{domain, Error, Result};
use crate::forms::{PointMask, PointTerms, SupportPoint};
use crate::moments::card_u;
use crate::report::{fraction_string, CsvRow};

pub const GENERATOR: &str = "ChaCha8Rng";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarloConfig {
    /// Largest `#U_{n,ℓ} · N_{d,ℓ}` searched exhaustively for one `ℓ`.
    pub point_budget: u128,
    /// Points drawn from `U_{n,ℓ}` when it is too large to search.
    pub points_per_ell: usize,
    /// When false, an over-budget `ℓ` is an error instead of being sampled.
    pub allow_point_sampling: bool,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        MonteCarloConfig {
            point_budget: 1 << 20,
            points_per_ell: 32,
            allow_point_sampling: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    PointSampling,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloResult {
    pub d: u64,
    pub n: u64,
    pub ell_list: Vec<u64>,
    pub samples: u64,
    pub seed: u64,
    pub generator: &'static str,
    pub mode: SearchMode,
    pub points_searched: u64,
    pub hits: u64,
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub estimate: BigRational,
    pub ci95: (f64, f64),
}

impl MonteCarloResult {
    /// Wilson interval at an arbitrary `z`.
    pub fn interval(&self, z: f64) -> (f64, f64) {
        wilson(self.hits, self.samples, z)
    }
}

impl CsvRow for MonteCarloResult {
    fn header() -> &'static [&'static str] {
        &["d", "n", "ell_list", "samples", "seed", "generator", "mode", "hits", "estimate", "ci_low", "ci_high"]
    }

    fn cells(&self) -> Vec<String> {
        let ells: Vec<String> = self.ell_list.iter().map(u64::to_string).collect();
        vec![
            self.d.to_string(),
            self.n.to_string(),
            ells.join(";"),
            self.samples.to_string(),
            self.seed.to_string(),
            self.generator.to_string(),
            match self.mode {
                SearchMode::Exhaustive => "exhaustive".into(),
                SearchMode::PointSampling => "point_sampling".into(),
            },
            self.hits.to_string(),
            fraction_string(&self.estimate),
            self.ci95.0.to_string(),
            self.ci95.1.to_string(),
        ]
    }
}

/// Wilson score interval for `hits` successes in `trials`, clamped to `[0, 1]`.
pub fn wilson(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// A searched point with its monomials mapped into the packed word buffer.
struct Scattered {
    pos: Vec<u32>,
    flips: Vec<bool>,
}

impl Scattered {
    fn is_zero(&self, words: &[u64]) -> bool {
        let neg = self
            .pos
            .iter()
            .zip(&self.flips)
            .filter(|(&p, &flip)| ((words[(p >> 6) as usize] >> (p & 63)) & 1 == 1) != flip)
            .count();
        2 * neg == self.pos.len()
    }
}

enum Evaluator {
    /// Every searched monomial lies in one stream word.
    Masks(Vec<PointMask>),
    Scattered(Vec<Scattered>),
}

struct Plan {
    /// Stream word indices to draw, ascending.
    words: Vec<u64>,
    eval: Evaluator,
    mode: SearchMode,
    points: u64,
}

fn points_stream(seed: u64, ell: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX - ell);
    rng
}

fn random_point(n: usize, ell: usize, rng: &mut ChaCha8Rng) -> SupportPoint {
    let mut support = sample(rng, n + 1, ell + 1).into_vec();
    support.sort_unstable();
    let signs = (0..=ell)
        .map(|i| if i == 0 || rng.random::<bool>() { 1 } else { -1 })
        .collect();
    SupportPoint::new(n, support, signs).expect("valid random point")
}

fn build_plan(d: u64, n: u64, ells: &[u64], seed: u64, config: &MonteCarloConfig) -> Result<Plan> {
    let mut terms = Vec::new();
    let mut mode = SearchMode::Exhaustive;
    for &ell in ells {
        let size = card_u(n, ell)?;
        let cost = &size * n_monomials(d, ell);
        let within = cost.to_u128().is_some_and(|c| c <= config.point_budget);
        let points = if within {
            SupportPoint::enumerate(n as usize, ell as usize)
        } else if config.allow_point_sampling {
            mode = SearchMode::PointSampling;
            let mut rng = points_stream(seed, ell);
            (0..config.points_per_ell)
                .map(|_| random_point(n as usize, ell as usize, &mut rng))
                .collect()
        } else {
            return Err(Error::BudgetExceeded {
                needed: cost.to_u128().unwrap_or(u128::MAX),
                budget: config.point_budget,
            });
        };
        terms.extend(points.iter().map(|p| PointTerms::new(d as u32, p)));
    }
    let mut words: Vec<u64> = terms
        .iter()
        .flat_map(|t| t.ranks().iter().map(|&r| (r >> 6) as u64))
        .collect();
    words.sort_unstable();
    words.dedup();
    let points = terms.len() as u64;
    let eval = if words.len() == 1 {
        let base = words[0] as u32 * 64;
        Evaluator::Masks(
            terms
                .iter()
                .map(|t| {
                    let mut m = PointMask { support: 0, flips: 0 };
                    for (&r, &flip) in t.ranks().iter().zip(t.flips()) {
                        m.support |= 1 << (r - base);
                        m.flips |= (flip as u64) << (r - base);
                    }
                    m
                })
                .collect(),
        )
    } else {
        let slot = |r: u32| {
            let w = words.binary_search(&((r >> 6) as u64)).expect("word collected");
            (w as u32) << 6 | (r & 63)
        };
        Evaluator::Scattered(
            terms
                .iter()
                .map(|t| Scattered {
                    pos: t.ranks().iter().map(|&r| slot(r)).collect(),
                    flips: t.flips().to_vec(),
                })
                .collect(),
        )
    };
    Ok(Plan {
        words,
        eval,
        mode,
        points,
    })
}

/// Draws the coefficient words of one sample.
fn draw(seed: u64, index: u64, words: &[u64], buf: &mut [u64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut next = None;
    for (slot, &w) in buf.iter_mut().zip(words) {
        if next != Some(w) {
            rng.set_word_pos(2 * w as u128);
        }
        *slot = rng.next_u64();
        next = Some(w + 1);
    }
}

fn is_hit(plan: &Plan, buf: &[u64]) -> bool {
    match &plan.eval {
        Evaluator::Masks(masks) => masks.iter().any(|m| m.is_zero(buf[0])),
        Evaluator::Scattered(points) => points.iter().any(|p| p.is_zero(buf)),
    }
}

pub fn monte_carlo_r(d: u64, n: u64, ell_list: &[u64], samples: u64, seed: u64) -> Result<MonteCarloResult> {
    monte_carlo_r_with(d, n, ell_list, samples, seed, &MonteCarloConfig::default())
}

pub fn monte_carlo_r_with(
    d: u64,
    n: u64,
    ell_list: &[u64],
    samples: u64,
    seed: u64,
    config: &MonteCarloConfig,
) -> Result<MonteCarloResult> {
    if samples == 0 {
        return Err(domain("samples must be positive"));
    }
    if d < 1 || n < 1 {
        return Err(domain("need d, n ≥ 1"));
    }
    if ell_list.is_empty() || ell_list.iter().any(|&l| l == 0 || l > n) {
        return Err(domain(format!("every ℓ must satisfy 1 ≤ ℓ ≤ n = {n}")));
    }
    let mut ells = ell_list.to_vec();
    ells.sort_unstable();
    ells.dedup();
    let plan = build_plan(d, n, &ells, seed, config)?;
    const SHARD: u64 = 1 << 10;
    let hits: u64 = (0..samples.div_ceil(SHARD))
        .into_par_iter()
        .map(|shard| {
            let mut buf = vec![0u64; plan.words.len()];
            let end = ((shard + 1) * SHARD).min(samples);
            (shard * SHARD..end)
                .filter(|&s| {
                    draw(seed, s, &plan.words, &mut buf);
                    is_hit(&plan, &buf)
                })
                .count() as u64
        })
        .sum();
    Ok(MonteCarloResult {
        d,
        n,
        ell_list: ells,
        samples,
        seed,
        generator: GENERATOR,
        mode: plan.mode,
        points_searched: plan.points,
        hits,
        estimate: BigRational::new(BigInt::from(hits), BigInt::from(BigUint::from(samples))),
        ci95: wilson(hits, samples, 1.96),
    })
}
