//! The local-solubility trichotomy for small `d` and `n`, plus an empirical
//! look at the modulo-4 statistic that certifies the "half" class.

use hypermoments::solubility::{local_class, mod4_zero_fraction, Class};

fn main() -> hypermoments::Result<()> {
    print!("d\\n");
    for n in 2..=8 {
        print!("{n:>6}");
    }
    println!();
    for d in 2..=8 {
        print!("{d:>3}");
        for n in 2..=8 {
            let tag = match local_class(d, n)?.class {
                Class::Zero => "0",
                Class::Half => "1/2",
                Class::One => "1",
            };
            print!("{tag:>6}");
        }
        println!();
    }

    for (d, n) in [(2, 2), (6, 2), (4, 3)] {
        if let Ok(frac) = mod4_zero_fraction(d, n) {
            println!("fraction of classes with f(1,...,1) = 0 mod 4 at ({d}, {n}): {frac}");
        }
    }
    Ok(())
}
