//! Exact first and second moments of the number of small-support rational
//! points on random hypersurfaces with ±1 coefficients, together with
//! brute-force oracles, local-solubility checks and Cauchy–Schwarz lower
//! bounds on the proportion of hypersurfaces with a rational point.
//!
//! A hypersurface of degree `d` in `P^n` is a form `Σ_m a_m x^m` with every
//! coefficient `a_m ∈ {±1}`; `f` and `-f` define the same hypersurface, so
//! the space `𝔹_{d,n}` has `2^{N_{d,n} - 1}` elements where
//! `N_{d,n} = C(d+n, d)`. `U_{n,ℓ}` is the set of points with exactly
//! `ℓ + 1` nonzero coordinates, all `±1`.

pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod estimator;
pub mod forms;
pub mod interval;
pub mod moments;
pub mod montecarlo;
pub mod oracle;
pub mod report;
pub mod solubility;

pub use error::{Error, Result};
pub use estimator::{cs_lower_bound, in_density_set, select_ell_theorem1, select_ell_theorem2, EllChoice};
pub use forms::{SignVector, SupportPoint};
pub use moments::{m1_exact, m2_exact, MomentReport};
pub use montecarlo::{monte_carlo_r, MonteCarloResult};
pub use oracle::{brute_moment, brute_r_u};
pub use solubility::{local_class, LocalClass};
