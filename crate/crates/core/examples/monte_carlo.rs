//! Estimates the proportion of forms with a zero among the searched points
//! and prints it next to the exact lower bound.
//!
//! Run with `cargo run --release --example monte_carlo`.

use hypermoments::estimator::cs_lower_bound;
use hypermoments::montecarlo::monte_carlo_r;
use num_traits::ToPrimitive;

fn main() -> hypermoments::Result<()> {
    let seed = 0x5eed;
    for (d, n, ells) in [(2, 2, vec![1, 2]), (4, 6, vec![4]), (8, 16, vec![8])] {
        let mc = monte_carlo_r(d, n, &ells, 20_000, seed)?;
        let bound = ells
            .iter()
            .filter_map(|&l| cs_lower_bound(d, n, l).ok())
            .max()
            .map(|q| q.to_f64().unwrap_or(f64::NAN));
        println!(
            "(d, n) = ({d}, {n}), l in {:?}: estimate {:.4} in [{:.4}, {:.4}] ({:?}), lower bound {}",
            mc.ell_list,
            mc.estimate.to_f64().unwrap_or(f64::NAN),
            mc.ci95.0,
            mc.ci95.1,
            mc.mode,
            bound.map_or("n/a".into(), |b| format!("{b:.4}"))
        );
    }
    Ok(())
}
