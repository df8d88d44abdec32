//! Recomputes the moments by walking every coefficient class and compares
//! them with the closed forms.

use hypermoments::moments::m2_exact;
use hypermoments::oracle::brute_report;

const CAP: u64 = 1 << 22;

fn main() -> hypermoments::Result<()> {
    for (d, n, ell) in [(2, 2, 2), (2, 3, 2), (3, 2, 1), (3, 3, 1), (2, 4, 2)] {
        let closed = m2_exact(d, n, ell)?;
        let brute = brute_report(d, n, ell, CAP)?;
        let same = closed.m1 == brute.m1
            && closed.sigma1 == brute.sigma1
            && closed.sigma2 == brute.sigma2
            && closed.sigma3 == brute.sigma3;
        println!("({d}, {n}, {ell}): M1 = {:<8} M2 = {:<10} agree = {same}", closed.m1.to_string(), closed.m2.to_string());
    }
    Ok(())
}
