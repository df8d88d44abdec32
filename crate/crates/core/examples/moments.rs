//! Exact first and second moments of the number of zeros in `U_{n,ℓ}`,
//! with the second moment split by pair shape.
//!
//! Run with `cargo run --example moments -- 3 4 2` for `(d, n, ℓ)`.

use hypermoments::moments::{m2_exact, m2_ratio_bound_diagnostic};

fn main() -> hypermoments::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (d, n, ell) = match args[..] {
        [d, n, ell] => (d, n, ell),
        _ => (2, 2, 2),
    };

    let r = m2_exact(d, n, ell)?;
    println!("(d, n, l) = ({d}, {n}, {ell})");
    println!("  M1      = {}", r.m1);
    println!("  Sigma1  = {}", r.sigma1);
    println!("  Sigma2  = {}", r.sigma2);
    println!("  Sigma3  = {}", r.sigma3);
    println!("  M2      = {}", r.m2);
    println!("  M1^2/M2 = {}", r.cs_lower_bound);
    println!("  M2 / (M1^2 + M1 mu) ~ {:.6}", m2_ratio_bound_diagnostic(d, n, ell)?);
    Ok(())
}
