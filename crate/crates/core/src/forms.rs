//! Monomial ranking, ±1 coefficient vectors and `U_{n,ℓ}` points.

use num_traits::ToPrimitive;

use crate::combinatorics::{binom, n_monomials};
use crate::error::{domain, Error, Result};

/// Degree-`d` exponent vectors in `n + 1` variables, ranked in
/// lexicographically descending order so that rank 0 is `x_0^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialIndexing {
    d: u32,
    n: usize,
    // row-major, `n + 1` entries per monomial
    exponents: Vec<u16>,
}

impl MonomialIndexing {
    /// Refuses tables with more than `max_len` monomials.
    pub fn new(d: u32, n: usize, max_len: usize) -> Result<Self> {
        let len = n_monomials(d as u64, n as u64)
            .to_usize()
            .filter(|&l| l <= max_len)
            .ok_or_else(|| domain(format!("monomial table for (d, n) = ({d}, {n}) exceeds {max_len}")))?;
        let mut exponents = Vec::with_capacity(len * (n + 1));
        for_each_exponent(d, n + 1, |e| exponents.extend_from_slice(e));
        Ok(MonomialIndexing { d, n, exponents })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.exponents.len() / (self.n + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exponent(&self, rank: usize) -> &[u16] {
        let w = self.n + 1;
        &self.exponents[rank * w..(rank + 1) * w]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u16]> {
        self.exponents.chunks_exact(self.n + 1)
    }

    pub fn rank(&self, exps: &[u16]) -> Option<usize> {
        if exps.len() != self.n + 1 || exps.iter().map(|&e| e as u32).sum::<u32>() != self.d {
            return None;
        }
        Some(rank_of(self.d, exps))
    }
}

/// Visits every exponent vector of total degree `d` in `vars` variables, in
/// rank order.
pub fn for_each_exponent(d: u32, vars: usize, mut f: impl FnMut(&[u16])) {
    fn rec(pos: usize, rem: u32, buf: &mut [u16], f: &mut impl FnMut(&[u16])) {
        if pos + 1 == buf.len() {
            buf[pos] = rem as u16;
            f(buf);
            return;
        }
        for v in (0..=rem).rev() {
            buf[pos] = v as u16;
            rec(pos + 1, rem - v, buf, f);
        }
    }
    if vars == 0 {
        return;
    }
    let mut buf = vec![0u16; vars];
    rec(0, d, &mut buf, &mut f);
}

/// Rank of an exponent vector without a table:
/// `Σ_k C(rem_k - e_k + m_k, m_k + 1)` with `m_k` variables after position `k`.
pub fn rank_of(d: u32, exps: &[u16]) -> usize {
    let vars = exps.len();
    let mut rem = d as u64;
    let mut rank = 0u64;
    for (k, &e) in exps.iter().enumerate().take(vars.saturating_sub(1)) {
        let after = (vars - k - 1) as u64;
        let e = e as u64;
        rank += binom(rem - e + after - 1, after as i64).to_u64().expect("rank fits u64");
        rem -= e;
    }
    rank as usize
}

/// A ±1 coefficient assignment over the ranked monomials; bit `k` set means
/// the rank-`k` coefficient is −1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector {
    d: u32,
    n: usize,
    len: usize,
    words: Vec<u64>,
}

impl SignVector {
    pub fn all_plus(d: u32, n: usize) -> Result<Self> {
        let len = n_monomials(d as u64, n as u64)
            .to_usize()
            .ok_or_else(|| domain("monomial count does not fit in memory"))?;
        Ok(SignVector {
            d,
            n,
            len,
            words: vec![0; len.div_ceil(64)],
        })
    }

    /// Builds from raw words; stray bits past `len` are cleared.
    pub fn from_words(d: u32, n: usize, mut words: Vec<u64>) -> Result<Self> {
        let mut v = Self::all_plus(d, n)?;
        if words.len() != v.words.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} words, got {}",
                v.words.len(),
                words.len()
            )));
        }
        if v.len % 64 != 0 {
            let last = words.len() - 1;
            words[last] &= (1u64 << (v.len % 64)) - 1;
        }
        v.words = words;
        Ok(v)
    }

    /// Small instances with at most 64 monomials.
    pub fn from_u64(d: u32, n: usize, bits: u64) -> Result<Self> {
        let v = Self::all_plus(d, n)?;
        if v.len > 64 {
            return Err(Error::DimensionMismatch(format!("{} monomials do not fit in a u64", v.len)));
        }
        Self::from_words(d, n, vec![bits])
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn is_negative(&self, rank: usize) -> bool {
        self.words[rank / 64] >> (rank % 64) & 1 == 1
    }

    pub fn coefficient(&self, rank: usize) -> i64 {
        if self.is_negative(rank) {
            -1
        } else {
            1
        }
    }

    pub fn set_negative(&mut self, rank: usize, neg: bool) {
        let (w, b) = (rank / 64, rank % 64);
        if neg {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    /// `ν(f)`, the number of −1 coefficients.
    pub fn nu(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        if out.len % 64 != 0 {
            let last = out.words.len() - 1;
            out.words[last] &= (1u64 << (out.len % 64)) - 1;
        }
        out
    }

    /// Representative of `{f, -f}` with a +1 coefficient on `x_0^d`.
    pub fn canonical(&self) -> Self {
        if self.len > 0 && self.is_negative(0) {
            self.negated()
        } else {
            self.clone()
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.len == 0 || !self.is_negative(0)
    }
}

/// A point of `U_{n,ℓ}`: `ℓ+1` coordinates equal to ±1, the rest zero, with
/// the first nonzero coordinate normalized to +1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportPoint {
    n: usize,
    support: Vec<usize>,
    negative: Vec<bool>,
}

impl SupportPoint {
    pub fn new(n: usize, support: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        if support.is_empty() || support.len() != signs.len() {
            return Err(domain("support and signs must be nonempty and of equal length"));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) || *support.last().unwrap() > n {
            return Err(domain(format!("support {support:?} is not a sorted subset of 0..={n}")));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(domain("signs must be ±1"));
        }
        if signs[0] != 1 {
            return Err(domain("first sign must be +1"));
        }
        Ok(SupportPoint {
            n,
            support,
            negative: signs.iter().map(|&s| s == -1).collect(),
        })
    }

    /// Normalizes an arbitrary `{-1, 0, 1}` vector up to sign; `None` for the
    /// zero vector.
    pub fn from_coordinates(coords: &[i8]) -> Option<Self> {
        let support: Vec<usize> = (0..coords.len()).filter(|&k| coords[k] != 0).collect();
        let first = *support.first()?;
        let flip = coords[first] < 0;
        let negative = support.iter().map(|&k| (coords[k] < 0) != flip).collect();
        Some(SupportPoint {
            n: coords.len() - 1,
            support,
            negative,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.support.len() - 1
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn sign(&self, idx: usize) -> i8 {
        if self.negative[idx] {
            -1
        } else {
            1
        }
    }

    pub fn coordinates(&self) -> Vec<i8> {
        let mut out = vec![0i8; self.n + 1];
        for (i, &k) in self.support.iter().enumerate() {
            out[k] = self.sign(i);
        }
        out
    }

    /// All of `U_{n,ℓ}`, ordered by support then sign pattern.
    pub fn enumerate(n: usize, ell: usize) -> Vec<SupportPoint> {
        let mut out = Vec::new();
        if ell > n {
            return out;
        }
        for_each_subset(n + 1, ell + 1, |support| {
            for pattern in 0u64..(1u64 << ell) {
                let negative = (0..=ell).map(|i| i > 0 && pattern >> (i - 1) & 1 == 1).collect();
                out.push(SupportPoint {
                    n,
                    support: support.to_vec(),
                    negative,
                });
            }
        });
        out
    }
}

pub(crate) fn for_each_subset(universe: usize, size: usize, mut f: impl FnMut(&[usize])) {
    fn rec(start: usize, universe: usize, size: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if buf.len() == size {
            f(buf);
            return;
        }
        let need = size - buf.len();
        for k in start..=universe - need {
            buf.push(k);
            rec(k + 1, universe, size, buf, f);
            buf.pop();
        }
    }
    if size > universe {
        return;
    }
    let mut buf = Vec::with_capacity(size);
    rec(0, universe, size, &mut buf, &mut f);
}

/// Monomials supported inside a point's support, with the sign each one
/// picks up from the point's −1 coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointTerms {
    ranks: Vec<u32>,
    flips: Vec<bool>,
}

impl PointTerms {
    pub fn new(d: u32, x: &SupportPoint) -> Self {
        let vars = x.support.len();
        let mut ranks = Vec::new();
        let mut flips = Vec::new();
        let mut global = vec![0u16; x.n + 1];
        for_each_exponent(d, vars, |e| {
            let mut odd = false;
            for (i, &k) in x.support.iter().enumerate() {
                global[k] = e[i];
                odd ^= x.negative[i] && e[i] % 2 == 1;
            }
            ranks.push(rank_of(d, &global) as u32);
            flips.push(odd);
        });
        PointTerms { ranks, flips }
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn flips(&self) -> &[bool] {
        &self.flips
    }

    /// `f(x)` as an exact integer.
    pub fn eval(&self, f: &SignVector) -> i64 {
        let neg = self
            .ranks
            .iter()
            .zip(&self.flips)
            .filter(|(&r, &flip)| f.is_negative(r as usize) != flip)
            .count() as i64;
        self.ranks.len() as i64 - 2 * neg
    }
}

/// Dense form of [`PointTerms`] for at most 64 monomials: `f(x) =
/// |support| - 2 · popcount((bits ^ flips) & support)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointMask {
    pub support: u64,
    pub flips: u64,
}

impl PointMask {
    pub fn from_terms(terms: &PointTerms) -> Option<Self> {
        let mut m = PointMask { support: 0, flips: 0 };
        for (&r, &flip) in terms.ranks.iter().zip(&terms.flips) {
            if r >= 64 {
                return None;
            }
            m.support |= 1 << r;
            if flip {
                m.flips |= 1 << r;
            }
        }
        Some(m)
    }

    #[inline]
    pub fn eval(&self, bits: u64) -> i64 {
        self.support.count_ones() as i64 - 2 * ((bits ^ self.flips) & self.support).count_ones() as i64
    }

    #[inline]
    pub fn is_zero(&self, bits: u64) -> bool {
        2 * ((bits ^ self.flips) & self.support).count_ones() == self.support.count_ones()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_is_bijective_and_ordered() {
        for d in 0..5u32 {
            for n in 0..4usize {
                let idx = MonomialIndexing::new(d, n, 1 << 20).unwrap();
                assert_eq!(idx.len() as u64, n_monomials(d as u64, n as u64).to_u64().unwrap());
                for (r, e) in idx.iter().enumerate() {
                    assert_eq!(idx.rank(e), Some(r));
                }
                if !idx.is_empty() {
                    assert_eq!(idx.exponent(0)[0] as u32, d);
                }
                let v: Vec<_> = idx.iter().collect();
                assert!(v.windows(2).all(|w| w[0] > w[1]));
            }
        }
    }

    #[test]
    fn sign_vector_canonical_form() {
        let f = SignVector::from_u64(2, 2, 0b000011).unwrap();
        assert_eq!(f.nu(), 2);
        let g = f.canonical();
        assert!(g.is_canonical());
        assert_eq!(g.nu(), 4);
        assert_eq!(g.negated(), f);
        assert!(SignVector::from_u64(3, 3, 0).is_ok());
        assert!(SignVector::from_u64(4, 4, 0).is_err());
    }

    #[test]
    fn u_enumeration_sizes() {
        assert_eq!(SupportPoint::enumerate(2, 2).len(), 4);
        assert_eq!(SupportPoint::enumerate(3, 1).len(), 12);
        assert_eq!(SupportPoint::enumerate(3, 2).len(), 16);
    }

    #[test]
    fn point_normalization() {
        let p = SupportPoint::from_coordinates(&[0, -1, 1, -1]).unwrap();
        assert_eq!(p.coordinates(), vec![0, 1, -1, 1]);
        assert!(SupportPoint::from_coordinates(&[0, 0]).is_none());
        assert!(SupportPoint::new(2, vec![0, 1], vec![-1, 1]).is_err());
        assert!(SupportPoint::new(2, vec![1, 0], vec![1, 1]).is_err());
        assert!(SupportPoint::new(2, vec![0, 3], vec![1, 1]).is_err());
    }
}
