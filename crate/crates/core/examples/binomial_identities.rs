//! Odd-monomial counts, their bias, and the hypergeometric and Stirling
//! inequalities, checked exactly for a few parameters.
//!
//! Run with `cargo run --example binomial_identities`.

use hypermoments::combinatorics::{
    bias_bound_check, c_odd_monomials, hypergeometric_bound_check, is_n_even, n_monomials,
    stirling_inequality_check,
};
use hypermoments::interval::PrecisionPolicy;

fn main() -> hypermoments::Result<()> {
    let (d, ell) = (6, 4);
    println!("N_{{{d},{ell}}} = {} (even: {})", n_monomials(d, ell), is_n_even(d, ell));
    for j in 1..=ell {
        let check = bias_bound_check(d, ell, j)?;
        println!(
            "  j = {j}: c = {:>4}, bias = {:>8}, within 2^-min(j, l+1-j): {}",
            c_odd_monomials(d, ell, j)?,
            check.datum.bias.to_string(),
            check.passed()
        );
    }

    println!();
    for (r, s) in [(3, 5), (10, 10), (25, 40)] {
        let h = hypergeometric_bound_check(r, s);
        println!("hypergeometric r = {r:>2}, s = {s:>2}: lhs ~ {:.4e}, rhs ~ {:.4e}, holds: {}", ratio(&h.lhs), h.rhs, h.ok);
    }

    println!();
    for m in [1, 10, 1000] {
        let s = stirling_inequality_check(m, PrecisionPolicy::default())?;
        println!("central binomial bounds at m = {m:>4}: {}", s.passed());
    }
    Ok(())
}

fn ratio(q: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}
