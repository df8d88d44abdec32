//! Brute-force ground truth on tiny instances.
//!
//! Every canonical class of `𝔹_{d,m}` (coefficient of `x_0^d` fixed to +1)
//! is visited once. Coefficient vectors are `u64` bit patterns and each point
//! of `U_{n,ℓ}` is a precomputed [`PointMask`], so evaluating `f(x)` is a
//! masked popcount.

use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::forms::{PointMask, PointTerms, SignVector, SupportPoint};
use crate::moments::{MomentReport, ShapeKind, Source};
use crate::combinatorics::n_monomials;
use num_traits::ToPrimitive;

/// Default cap on the number of enumerated classes.
pub const DEFAULT_CLASS_CAP: u64 = 1 << 24;

/// `f(x)` for a ±1 form and a `{0, ±1}` point.
pub fn evaluate_sign(f: &SignVector, x: &SupportPoint) -> Result<i64> {
    if f.n() != x.n() {
        return Err(Error::DimensionMismatch(format!(
            "form has {} variables, point has {}",
            f.n() + 1,
            x.n() + 1
        )));
    }
    Ok(PointTerms::new(f.d(), x).eval(f))
}

/// Number of monomials and canonical classes of `𝔹_{d,m}`, or `CapExceeded`.
fn class_space(d: u64, m: u64, cap: u64) -> Result<(usize, u64)> {
    let big_n = n_monomials(d, m);
    let classes_log2 = big_n.to_u64().map(|v| v.saturating_sub(1)).unwrap_or(u64::MAX);
    if classes_log2 >= 63 || (1u64 << classes_log2) > cap {
        let needed = if classes_log2 < 127 { 1u128 << classes_log2 } else { u128::MAX };
        return Err(Error::CapExceeded { needed, cap: cap as u128 });
    }
    Ok((big_n.to_usize().unwrap(), 1u64 << classes_log2))
}

/// Folds `visit` over all canonical classes in parallel. Each class is
/// handed over as its coefficient bits with bit 0 clear.
fn fold_classes<A, F>(classes: u64, visit: F) -> A
where
    A: Default + Send + Add<Output = A>,
    F: Fn(&mut A, u64) + Sync,
{
    const CHUNK: u64 = 1 << 12;
    let chunks = classes.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = A::default();
            let end = ((c + 1) * CHUNK).min(classes);
            for k in c * CHUNK..end {
                visit(&mut acc, k << 1);
            }
            acc
        })
        .reduce(A::default, |a, b| a + b)
}

fn masks_for(d: u64, points: &[SupportPoint]) -> Vec<PointMask> {
    points
        .iter()
        .map(|p| PointMask::from_terms(&PointTerms::new(d as u32, p)).expect("≤ 64 monomials"))
        .collect()
}

#[derive(Default, Clone, Copy)]
struct PowerSums {
    s1: u128,
    s2: u128,
}

impl Add for PowerSums {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        PowerSums {
            s1: self.s1 + o.s1,
            s2: self.s2 + o.s2,
        }
    }
}

/// `k`-th moment of the number of `U_{n,ℓ}`-zeros, by enumeration.
pub fn brute_moment(d: u64, n: u64, ell: u64, k: u32, cap: u64) -> Result<BigRational> {
    if !(k == 1 || k == 2) {
        return Err(domain("only k ∈ {1, 2} is supported"));
    }
    if ell == 0 || ell > n {
        return Err(domain(format!("need 1 ≤ ℓ ≤ n, got ℓ = {ell}")));
    }
    let (_, classes) = class_space(d, n, cap)?;
    let masks = masks_for(d, &SupportPoint::enumerate(n as usize, ell as usize));
    let sums: PowerSums = fold_classes(classes, |acc: &mut PowerSums, bits| {
        let z = masks.iter().filter(|m| m.is_zero(bits)).count() as u128;
        acc.s1 += z;
        acc.s2 += z * z;
    });
    let total = if k == 1 { sums.s1 } else { sums.s2 };
    Ok(BigRational::new(BigInt::from(total), BigInt::from(classes)))
}

/// Classifies an ordered pair of points into its pair shape.
pub fn classify_pair(x: &SupportPoint, y: &SupportPoint) -> ShapeKind {
    let mut shared = Vec::new();
    for (a, &k) in x.support().iter().enumerate() {
        if let Some(b) = y.support().iter().position(|&t| t == k) {
            shared.push((x.sign(a), y.sign(b)));
        }
    }
    let Some(&(lx, ly)) = shared.last() else {
        return ShapeKind::Disjoint;
    };
    let flip = lx != ly;
    let j = shared.iter().filter(|&&(sx, sy)| (sx != sy) != flip).count();
    ShapeKind::Overlap {
        i: (shared.len() - 1) as u64,
        j: j as u64,
    }
}

#[derive(Default, Clone, Copy)]
struct ShapeSums {
    diagonal: u128,
    full: u128,
    partial: u128,
    disjoint: u128,
}

impl Add for ShapeSums {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ShapeSums {
            diagonal: self.diagonal + o.diagonal,
            full: self.full + o.full,
            partial: self.partial + o.partial,
            disjoint: self.disjoint + o.disjoint,
        }
    }
}

/// Both moments and the shape split of the second, all by enumeration.
pub fn brute_report(d: u64, n: u64, ell: u64, cap: u64) -> Result<MomentReport> {
    if ell == 0 || ell > n {
        return Err(domain(format!("need 1 ≤ ℓ ≤ n, got ℓ = {ell}")));
    }
    let (_, classes) = class_space(d, n, cap)?;
    let points = SupportPoint::enumerate(n as usize, ell as usize);
    let masks = masks_for(d, &points);
    // 0 diagonal, 1 full overlap, 2 partial overlap, 3 disjoint
    let kinds: Vec<Vec<u8>> = points
        .iter()
        .map(|x| {
            points
                .iter()
                .map(|y| match classify_pair(x, y) {
                    ShapeKind::Overlap { i, j } if i == ell && j == 0 => 0,
                    ShapeKind::Overlap { i, .. } if i == ell => 1,
                    ShapeKind::Overlap { .. } => 2,
                    ShapeKind::Disjoint => 3,
                })
                .collect()
        })
        .collect();
    let sums: ShapeSums = fold_classes(classes, |acc: &mut ShapeSums, bits| {
        let zeros: Vec<usize> = (0..masks.len()).filter(|&p| masks[p].is_zero(bits)).collect();
        for &a in &zeros {
            for &b in &zeros {
                match kinds[a][b] {
                    0 => acc.diagonal += 1,
                    1 => acc.full += 1,
                    2 => acc.partial += 1,
                    _ => acc.disjoint += 1,
                }
            }
        }
    });
    let q = |v: u128| BigRational::new(BigInt::from(v), BigInt::from(classes));
    Ok(MomentReport::assemble(
        d,
        n,
        ell,
        q(sums.diagonal),
        [q(sums.full), q(sums.partial), q(sums.disjoint)],
        Source::Oracle,
    ))
}

/// `#{V ∈ 𝔹_{d,m} : f_V(x) = f_V(y) = 0}`.
pub fn brute_pair_count(d: u64, m: u64, x: &SupportPoint, y: &SupportPoint, cap: u64) -> Result<BigUint> {
    if x.n() as u64 != m || y.n() as u64 != m {
        return Err(Error::DimensionMismatch(format!("points must live in P^{m}")));
    }
    let (_, classes) = class_space(d, m, cap)?;
    let mx = masks_for(d, std::slice::from_ref(x))[0];
    let my = masks_for(d, std::slice::from_ref(y))[0];
    let count: u128 = fold_classes(classes, |acc: &mut u128, bits| {
        if mx.is_zero(bits) && my.is_zero(bits) {
            *acc += 1;
        }
    });
    Ok(BigUint::from(count))
}

/// Canonical representatives of a pair shape, in ambient dimension
/// `2ℓ - i` (or `2ℓ + 1` for disjoint supports): `x` is all ones on the
/// first `ℓ+1` coordinates, `y` shares the first `i+1` of them with the
/// first `j` negated and takes the last `ℓ - i` coordinates.
pub fn canonical_pair(ell: u64, kind: ShapeKind) -> Result<(SupportPoint, SupportPoint)> {
    let ell = ell as usize;
    let (x, y) = match kind {
        ShapeKind::Overlap { i, j } => {
            let (i, j) = (i as usize, j as usize);
            if i > ell || j > i {
                return Err(domain(format!("bad shape (i, j) = ({i}, {j}) for ℓ = {ell}")));
            }
            let m = 2 * ell - i;
            let mut x = vec![0i8; m + 1];
            let mut y = vec![0i8; m + 1];
            x[..=ell].fill(1);
            y[..j].fill(-1);
            y[j..=i].fill(1);
            y[ell + 1..].fill(1);
            (x, y)
        }
        ShapeKind::Disjoint => {
            let mut x = vec![0i8; 2 * ell + 2];
            let mut y = vec![0i8; 2 * ell + 2];
            x[..=ell].fill(1);
            y[ell + 1..].fill(1);
            (x, y)
        }
    };
    Ok((
        SupportPoint::from_coordinates(&x).expect("nonzero"),
        SupportPoint::from_coordinates(&y).expect("nonzero"),
    ))
}

/// Fraction of classes of `𝔹_{d,n}` with a zero in `∪_{ℓ ∈ ells} U_{n,ℓ}`.
pub fn brute_zero_fraction(d: u64, n: u64, ells: &[u64], cap: u64) -> Result<BigRational> {
    if ells.is_empty() || ells.iter().any(|&l| l == 0 || l > n) {
        return Err(domain(format!("every ℓ must satisfy 1 ≤ ℓ ≤ n = {n}")));
    }
    let (_, classes) = class_space(d, n, cap)?;
    let mut ells = ells.to_vec();
    ells.sort_unstable();
    ells.dedup();
    let masks: Vec<PointMask> = ells
        .iter()
        .flat_map(|&l| masks_for(d, &SupportPoint::enumerate(n as usize, l as usize)))
        .collect();
    let hits: u128 = fold_classes(classes, |acc: &mut u128, bits| {
        if masks.iter().any(|m| m.is_zero(bits)) {
            *acc += 1;
        }
    });
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(classes)))
}

/// Fraction of classes with a zero in `U_{n,1} ∪ … ∪ U_{n,L}`; a lower
/// bound for the density of hypersurfaces with a rational point.
pub fn brute_r_u(d: u64, n: u64, l_max: u64, cap: u64) -> Result<BigRational> {
    if l_max < 1 || l_max > n {
        return Err(domain(format!("need 1 ≤ L_max ≤ n, got L_max = {l_max}, n = {n}")));
    }
    let ells: Vec<u64> = (1..=l_max).collect();
    brute_zero_fraction(d, n, &ells, cap)
}

/// Visits every canonical class as a [`SignVector`]; for small checks that
/// need the general representation.
pub fn for_each_class(d: u64, n: u64, cap: u64, mut f: impl FnMut(&SignVector)) -> Result<u64> {
    let (_, classes) = class_space(d, n, cap)?;
    for k in 0..classes {
        let v = SignVector::from_u64(d as u32, n as usize, k << 1)?;
        f(&v);
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::MonomialIndexing;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Direct polynomial evaluation from exponent vectors.
    fn naive_eval(f: &SignVector, coords: &[i8]) -> i64 {
        let idx = MonomialIndexing::new(f.d(), f.n(), 1 << 20).unwrap();
        idx.iter()
            .enumerate()
            .map(|(r, e)| {
                let mono: i64 = e.iter().zip(coords).map(|(&k, &c)| (c as i64).pow(k as u32)).product();
                f.coefficient(r) * mono
            })
            .sum()
    }

    #[test]
    fn evaluation_matches_naive() {
        let mut state = 0x9e3779b97f4a7c15u64;
        for (d, n) in [(2u32, 2usize), (3, 2), (2, 3), (4, 3), (3, 4)] {
            let len = n_monomials(d as u64, n as u64).to_usize().unwrap();
            for _ in 0..20 {
                let words: Vec<u64> = (0..len.div_ceil(64))
                    .map(|_| {
                        state ^= state << 13;
                        state ^= state >> 7;
                        state ^= state << 17;
                        state
                    })
                    .collect();
                let f = SignVector::from_words(d, n, words).unwrap();
                for ell in 1..=n {
                    for x in SupportPoint::enumerate(n, ell) {
                        assert_eq!(evaluate_sign(&f, &x).unwrap(), naive_eval(&f, &x.coordinates()));
                    }
                }
            }
        }
    }

    #[test]
    fn evaluation_edge_cases() {
        let f = SignVector::all_plus(2, 2).unwrap();
        let ones = SupportPoint::new(2, vec![0, 1, 2], vec![1, 1, 1]).unwrap();
        assert_eq!(evaluate_sign(&f, &ones).unwrap(), 6);
        // ν = N/2 = 3 on the full block
        let g = SignVector::from_u64(2, 2, 0b000111).unwrap();
        assert_eq!(evaluate_sign(&g, &ones).unwrap(), 0);
        let other = SupportPoint::new(3, vec![0, 1], vec![1, 1]).unwrap();
        assert!(evaluate_sign(&f, &other).is_err());
        // −f has the negated value
        for x in SupportPoint::enumerate(2, 2) {
            assert_eq!(evaluate_sign(&g, &x).unwrap(), -evaluate_sign(&g.negated(), &x).unwrap());
        }
    }

    #[test]
    fn small_moments() {
        assert_eq!(brute_moment(2, 2, 2, 1, DEFAULT_CLASS_CAP).unwrap(), q(5, 4));
        assert_eq!(brute_moment(2, 2, 2, 2, DEFAULT_CLASS_CAP).unwrap(), q(7, 2));
        assert_eq!(brute_moment(3, 2, 1, 1, DEFAULT_CLASS_CAP).unwrap(), q(18, 8));
        assert!(matches!(brute_moment(3, 3, 1, 1, 1 << 10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn enumeration_visits_each_class_once() {
        let mut seen = std::collections::HashSet::new();
        let n = for_each_class(2, 2, DEFAULT_CLASS_CAP, |v| {
            assert!(v.is_canonical());
            assert!(seen.insert(v.clone()));
            assert!(!seen.contains(&v.negated()));
        })
        .unwrap();
        assert_eq!(n, 32);
        assert_eq!(seen.len(), 32);
    }

    #[test]
    fn pair_classification() {
        let x = SupportPoint::from_coordinates(&[1, 1, 1, 0]).unwrap();
        let y = SupportPoint::from_coordinates(&[-1, 1, 0, 1]).unwrap();
        assert_eq!(classify_pair(&x, &y), ShapeKind::Overlap { i: 1, j: 1 });
        let y = SupportPoint::from_coordinates(&[1, -1, 0, 1]).unwrap();
        assert_eq!(classify_pair(&x, &y), ShapeKind::Overlap { i: 1, j: 1 });
        let z = SupportPoint::from_coordinates(&[0, 0, 0, 1]).unwrap();
        assert_eq!(classify_pair(&SupportPoint::from_coordinates(&[1, 1, 0, 0]).unwrap(), &z), ShapeKind::Disjoint);
        assert_eq!(classify_pair(&x, &x), ShapeKind::Overlap { i: 2, j: 0 });
    }

    #[test]
    fn canonical_pairs_have_their_shape() {
        for ell in 1..4u64 {
            for i in 0..=ell {
                for j in 0..=i {
                    let kind = ShapeKind::Overlap { i, j };
                    let (x, y) = canonical_pair(ell, kind).unwrap();
                    assert_eq!(x.n() as u64, 2 * ell - i);
                    assert_eq!(classify_pair(&x, &y), kind);
                }
            }
            let (x, y) = canonical_pair(ell, ShapeKind::Disjoint).unwrap();
            assert_eq!(classify_pair(&x, &y), ShapeKind::Disjoint);
        }
    }

    #[test]
    fn r_u_guards_and_monotonicity() {
        assert!(brute_r_u(2, 2, 0, DEFAULT_CLASS_CAP).is_err());
        assert!(brute_r_u(2, 2, 3, DEFAULT_CLASS_CAP).is_err());
        let a = brute_r_u(2, 3, 1, DEFAULT_CLASS_CAP).unwrap();
        let b = brute_r_u(2, 3, 2, DEFAULT_CLASS_CAP).unwrap();
        let c = brute_r_u(2, 3, 3, DEFAULT_CLASS_CAP).unwrap();
        assert!(a <= b && b <= c);
    }
}
