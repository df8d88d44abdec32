//! Reference computations for the integration tests, written from the
//! definitions and sharing no code with the library.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Exponent vectors of degree `d` in `vars` variables, in reverse
/// lexicographic order (last variable varies slowest).
pub fn monomials(d: u32, vars: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            cur[0] = left;
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[k] = e;
            rec(left - e, k - 1, cur, out);
        }
    }
    let mut out = Vec::new();
    if vars == 0 {
        return out;
    }
    let mut cur = vec![0; vars];
    rec(d, vars - 1, &mut cur, &mut out);
    out
}

/// Points of `P^n` with exactly `ell + 1` nonzero coordinates, all ±1,
/// first nonzero coordinate `+1`, by base-3 counting.
pub fn points(n: usize, ell: usize) -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    let total = 3usize.pow((n + 1) as u32);
    for code in 0..total {
        let mut c = code;
        let x: Vec<i8> = (0..=n)
            .map(|_| {
                let v = (c % 3) as i8 - 1;
                c /= 3;
                v
            })
            .collect();
        let nz = x.iter().filter(|&&v| v != 0).count();
        if nz == ell + 1 && x.iter().find(|&&v| v != 0) == Some(&1) {
            out.push(x);
        }
    }
    out
}

/// `(support, negative)` bit masks of the monomial values at `x`.
pub fn point_mask(mons: &[Vec<u32>], x: &[i8]) -> (u64, u64) {
    assert!(mons.len() <= 64);
    let (mut sup, mut neg) = (0u64, 0u64);
    for (k, m) in mons.iter().enumerate() {
        if m.iter().zip(x).any(|(&e, &v)| e > 0 && v == 0) {
            continue;
        }
        sup |= 1 << k;
        let odd = m.iter().zip(x).filter(|&(&e, &v)| v == -1 && e % 2 == 1).count() % 2 == 1;
        if odd {
            neg |= 1 << k;
        }
    }
    (sup, neg)
}

/// Zero statistics over all `2^N` coefficient vectors (not classes).
#[derive(Debug, Default, Clone, Copy)]
pub struct NaiveStats {
    pub vectors: u64,
    pub sum_z: u64,
    pub sum_z2: u64,
    /// Vectors with a zero in `U_{n,ℓ}`.
    pub hits_ell: u64,
    /// Vectors with a zero in `U_{n,1} ∪ … ∪ U_{n,n}`.
    pub hits_all: u64,
}

pub fn naive_stats(d: u32, n: usize, ell: usize) -> NaiveStats {
    let mons = monomials(d, n + 1);
    let big_n = mons.len();
    assert!(big_n <= 24, "too many monomials for naive enumeration");
    let own: Vec<(u64, u64)> = points(n, ell).iter().map(|x| point_mask(&mons, x)).collect();
    let all: Vec<(u64, u64)> = (1..=n)
        .flat_map(|l| points(n, l))
        .map(|x| point_mask(&mons, &x))
        .collect();
    let zero = |bits: u64, &(s, g): &(u64, u64)| 2 * ((bits ^ g) & s).count_ones() == s.count_ones();
    let mut st = NaiveStats::default();
    for bits in 0..(1u64 << big_n) {
        let z = own.iter().filter(|p| zero(bits, p)).count() as u64;
        st.vectors += 1;
        st.sum_z += z;
        st.sum_z2 += z * z;
        if z > 0 {
            st.hits_ell += 1;
        }
        if all.iter().any(|p| zero(bits, p)) {
            st.hits_all += 1;
        }
    }
    st
}

/// Pascal's triangle up to row `rows`, by additions only.
pub struct Pascal(Vec<Vec<BigUint>>);

impl Pascal {
    pub fn new(rows: usize) -> Self {
        let mut t: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for r in 1..=rows {
            let prev = &t[r - 1];
            let mut row = vec![BigUint::one(); r + 1];
            for k in 1..r {
                row[k] = &prev[k - 1] + &prev[k];
            }
            t.push(row);
        }
        Pascal(t)
    }

    /// `C(r, s)`, zero outside `0 ≤ s ≤ r`.
    pub fn c(&self, r: i64, s: i64) -> BigUint {
        if r < 0 || s < 0 || s > r {
            return BigUint::zero();
        }
        self.0[r as usize][s as usize].clone()
    }
}

/// `c_{d,ℓ}(j)` by dynamic programming over variables, tracking the total
/// degree and the parity of the degree in the first `j` variables.
pub fn c_dp(d: u64, ell: u64, j: u64) -> u128 {
    let d = d as usize;
    // ways[s][p]: exponent prefixes of total degree s and parity p
    let mut ways = vec![[0u128; 2]; d + 1];
    ways[0][0] = 1;
    for v in 0..=ell {
        let mut next = vec![[0u128; 2]; d + 1];
        for s in 0..=d {
            for p in 0..2 {
                let w = ways[s][p];
                if w == 0 {
                    continue;
                }
                for e in 0..=d - s {
                    let q = if v < j { p ^ (e & 1) } else { p };
                    next[s + e][q] += w;
                }
            }
        }
        ways = next;
    }
    ways[d][1]
}

/// Odd-prefix counts for every `j` at once by enumerating monomials.
pub fn c_enumerated(d: u32, ell: usize) -> Vec<u64> {
    fn rec(left: u32, var: usize, last: usize, prefix: &mut Vec<u32>, counts: &mut [u64]) {
        if var == last {
            // the last variable takes what is left; it lies in no proper prefix
            for j in 1..=last {
                if prefix[j] % 2 == 1 {
                    counts[j] += 1;
                }
            }
            return;
        }
        for e in 0..=left {
            prefix[var + 1] = prefix[var] + e;
            rec(left - e, var + 1, last, prefix, counts);
        }
    }
    let mut counts = vec![0u64; ell + 1];
    let mut prefix = vec![0u32; ell + 1];
    rec(d, 0, ell, &mut prefix, &mut counts);
    // prefix[ℓ+1] would be d; for j = ℓ+1 nothing is recorded
    counts
}

/// `v₂(k!)` by Legendre's formula.
pub fn v2_factorial(mut k: u64) -> u64 {
    let mut s = 0;
    while k > 0 {
        k /= 2;
        s += k;
    }
    s
}

/// Whether `C(a+b, a)` is even, via Legendre.
pub fn binom_even(a: u64, b: u64) -> bool {
    v2_factorial(a + b) > v2_factorial(a) + v2_factorial(b)
}

/// Shape of an ordered pair of coordinate vectors: `None` for disjoint
/// supports, else `(i, j)` with `i + 1` shared coordinates and `j` of them
/// whose product `x_k y_k` differs from that at the last shared one.
pub fn shape(x: &[i8], y: &[i8]) -> Option<(u64, u64)> {
    let prods: Vec<i8> = x.iter().zip(y).filter(|(a, b)| **a != 0 && **b != 0).map(|(a, b)| a * b).collect();
    let last = *prods.last()?;
    let j = prods.iter().filter(|&&p| p != last).count();
    Some((prods.len() as u64 - 1, j as u64))
}
