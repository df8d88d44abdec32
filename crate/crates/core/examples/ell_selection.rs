//! Choosing `ℓ` from the binary digits of `d` and the resulting lower
//! bounds on the proportion of forms with a zero.

use hypermoments::estimator::{cs_lower_bound, in_density_set, select_ell_theorem1, select_ell_theorem2, theorem2_window};
use num_traits::ToPrimitive;

fn main() -> hypermoments::Result<()> {
    println!("small-d selector:");
    for d in [4, 6, 12, 35, 100] {
        let c = select_ell_theorem1(d)?;
        let n = c.ell.max(2) + 1;
        let bound = match cs_lower_bound(d, n, c.ell) {
            Ok(q) => format!("{:.6}", q.to_f64().unwrap_or(f64::NAN)),
            Err(e) => format!("unavailable ({e})"),
        };
        println!("  d = {d:>3}: l = {:>2} via {:?}, bound at n = {n}: {bound}", c.ell, c.rule);
    }

    println!("large-d selector:");
    for d in [16, 24, 48, 1000, 1 << 20 | 12] {
        match select_ell_theorem2(d) {
            Ok(c) => {
                let w = theorem2_window(&c);
                println!("  d = {d:>8}: l = {:>3}, 4 ln d <= l: {}, l <= 9 ln d: {}", c.ell, w.lower, w.upper);
            }
            Err(e) => println!("  d = {d:>8}: {e}"),
        }
    }

    for d in [16, 1 << 22 | 1] {
        let r = in_density_set(d)?;
        println!("v2({d}) = {}, threshold {:.3}, member: {}", r.v2_d, r.threshold, r.member);
    }
    Ok(())
}
