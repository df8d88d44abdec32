//! Sets the exact ratio `M2 / M1²` beside the shape of its upper bound,
//! `1 + [ℓ=n] + (3/4)^{min(ℓ,μ)} + 1/min(d,n) + 1/M1`, as `n` grows.

use hypermoments::moments::{ln_m1, m2_exact_with, m2_ratio_bound_diagnostic, MomentConfig};
use num_traits::ToPrimitive;

fn main() -> hypermoments::Result<()> {
    let config = MomentConfig::default();
    for (d, ell) in [(2, 2), (4, 4), (6, 2), (12, 4)] {
        println!("d = {d}, l = {ell}");
        for n in [ell, ell + 1, 2 * ell, 4 * ell, 16 * ell, 64 * ell] {
            let exact = match m2_exact_with(d, n, ell, &config) {
                Ok(r) => format!("{:.6}", (&r.m2 / (&r.m1 * &r.m1)).to_f64().unwrap_or(f64::NAN)),
                Err(_) => "-".into(),
            };
            println!(
                "  n = {n:>4}: ln M1 = {:>8.3}, M2/M1^2 = {exact:>9}, bound shape = {:.6}",
                ln_m1(d, n, ell)?,
                m2_ratio_bound_diagnostic(d, n, ell)?
            );
        }
    }
    Ok(())
}
