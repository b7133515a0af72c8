//! Binomials, colexicographic subset ranking, and exact binomial ratios.
//!
//! Colex rank of a strictly increasing subset `s` (labels from 1):
//!
//! ```text
//! rank(s) = sum_i C(s[i] - 1, i + 1)    (i is the 0-based position)
//! ```
//!
//! The formula does not involve `n`, so ranks can be computed while
//! streaming blocks without knowing the ground set. Over 1..n the ranks of
//! the k-subsets are exactly `0..C(n, k)`.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// `C(n, k)`, zero when `k > n`.
///
/// Multiplicative form with exact division after every step; each
/// intermediate is itself a binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` if it fits in a `u64`.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// A strictly increasing set of labels drawn from `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    elements: Vec<u32>,
}

impl Subset {
    pub fn new(elements: Vec<u32>, n: u32) -> Result<Self> {
        validate_increasing(&elements)?;
        if let Some(&last) = elements.last() {
            if last > n {
                return Err(Error::invalid(format!("element {last} exceeds n = {n}")));
            }
        }
        Ok(Subset { elements })
    }

    /// Sorts first; rejects repeated elements.
    pub fn from_unsorted(mut elements: Vec<u32>, n: u32) -> Result<Self> {
        elements.sort_unstable();
        Self::new(elements, n)
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.elements
    }
}

fn validate_increasing(elements: &[u32]) -> Result<()> {
    if elements.first() == Some(&0) {
        return Err(Error::invalid("subset labels start at 1"));
    }
    if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::invalid(format!(
            "subset is not strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Colex rank of a strictly increasing subset with labels from 1.
pub fn rank_colex(elements: &[u32]) -> Result<u64> {
    validate_increasing(elements)?;
    elements.iter().enumerate().try_fold(0u64, |acc, (i, &e)| {
        binomial_u64(e as u64 - 1, i as u64 + 1)
            .and_then(|c| acc.checked_add(c))
            .ok_or_else(|| Error::resource("colex rank does not fit in 64 bits"))
    })
}

/// Inverse of [`rank_colex`] for `k`-subsets of `1..=n`.
pub fn unrank_colex(rank: u64, k: usize, n: u32) -> Result<Subset> {
    let table = BinomialTable::new(n, k)?;
    if rank >= table.count() {
        return Err(Error::invalid(format!(
            "rank {rank} out of range for C({n}, {k}) = {}",
            table.count()
        )));
    }
    let mut out = vec![0u32; k];
    table.unrank_into(rank, &mut out);
    Ok(Subset { elements: out })
}

/// Exact `C(total - excluded, v) / C(total, v)`.
///
/// Evaluated as `prod_{j<excluded} (total - v - j) / (total - j)`, so only
/// `excluded` small factors are touched even when `v` is in the hundreds of
/// thousands. Returns exact zero when `v <= total < excluded + v`.
pub fn ratio_no_overlap(total: u64, excluded: u64, v: u64) -> Result<ExactRational> {
    binomial_ratio(total, excluded, v, 0)
}

/// Exact `C(total - excluded, v - taken) / C(total, v)`.
///
/// With `a = total - excluded` and `b = v - taken` this is
///
/// ```text
/// prod_{i<taken} (v - i) * prod_{i=1}^{excluded-taken} (a - b + i)
///     / prod_{i=1}^{excluded} (a + i)
/// ```
///
/// which needs `excluded + taken` factors and never forms either binomial.
/// Zero when `b > a`.
pub fn binomial_ratio(total: u64, excluded: u64, v: u64, taken: u64) -> Result<ExactRational> {
    if v > total {
        return Err(Error::domain(format!("v = {v} exceeds the population {total}")));
    }
    if taken > v || taken > excluded {
        return Err(Error::domain(format!(
            "taken = {taken} must not exceed v = {v} or excluded = {excluded}"
        )));
    }
    if excluded > total {
        return Ok(ExactRational::zero());
    }
    let a = total - excluded;
    let b = v - taken;
    if b > a {
        return Ok(ExactRational::zero());
    }
    let mut r = ExactRational::one();
    let plain = excluded - taken;
    for i in 1..=excluded {
        let numer = if i <= plain {
            a - b + i
        } else {
            v - (i - plain - 1)
        };
        r.mul_frac(numer, a + i);
    }
    Ok(r)
}

/// Saturating table of `C(c, i)` for `c <= n`, `i <= k`, for hot-loop ranking.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    n: u32,
    k: usize,
    stride: usize,
    values: Vec<u64>,
    count: u64,
}

impl BinomialTable {
    /// Fails when `C(n, k)` does not fit in a `u64`.
    pub fn new(n: u32, k: usize) -> Result<Self> {
        let count = binomial_u64(n as u64, k as u64)
            .ok_or_else(|| Error::resource(format!("C({n}, {k}) does not fit in 64 bits")))?;
        let stride = k + 1;
        let mut values = vec![0u64; (n as usize + 1) * stride];
        for c in 0..=n as usize {
            values[c * stride] = 1;
            for i in 1..=k.min(c) {
                let left = values[(c - 1) * stride + i - 1];
                let up = if i < c { values[(c - 1) * stride + i] } else { 0 };
                values[c * stride + i] = left.saturating_add(up);
            }
        }
        Ok(BinomialTable {
            n,
            k,
            stride,
            values,
            count,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `C(n, k)`.
    pub fn count(&self) -> u64 {
        self.count
    }

    #[inline]
    pub fn get(&self, c: usize, i: usize) -> u64 {
        if i > c {
            0
        } else {
            self.values[c * self.stride + i]
        }
    }

    /// Rank of a sorted subset of size `<= k`; no validation.
    #[inline]
    pub fn rank<T: Copy + Into<u32>>(&self, s: &[T]) -> u64 {
        let mut r = 0u64;
        for (i, &e) in s.iter().enumerate() {
            r += self.get(e.into() as usize - 1, i + 1);
        }
        r
    }

    /// Writes the subset of size `out.len()` (at most `k`) with the given rank.
    pub fn unrank_into<T: Copy + TryFrom<u32>>(&self, mut rank: u64, out: &mut [T]) {
        let mut hi = self.n as usize;
        for i in (1..=out.len()).rev() {
            // Largest c < hi with C(c, i) <= rank.
            let (mut lo, mut top) = (i - 1, hi - 1);
            while lo < top {
                let mid = (lo + top).div_ceil(2);
                if self.get(mid, i) <= rank {
                    lo = mid;
                } else {
                    top = mid - 1;
                }
            }
            rank -= self.get(lo, i);
            out[i - 1] = T::try_from(lo as u32 + 1).ok().expect("label fits element type");
            hi = lo;
        }
    }
}

/// Advances `s` (sorted, labels in `1..=n`) to its colex successor.
/// Returns `false` after the last subset.
pub fn next_colex<T>(s: &mut [T], n: u32) -> bool
where
    T: Copy + Into<u32> + TryFrom<u32>,
{
    let k = s.len();
    for i in 0..k {
        let limit = if i + 1 < k { s[i + 1].into() } else { n + 1 };
        let next = s[i].into() + 1;
        if next < limit {
            s[i] = T::try_from(next).ok().expect("label fits element type");
            for (j, slot) in s.iter_mut().enumerate().take(i) {
                *slot = T::try_from(j as u32 + 1).ok().expect("label fits element type");
            }
            return true;
        }
    }
    false
}

/// Visits all `r`-element position sets `0..m` in colex order.
pub(crate) fn for_each_combination(m: usize, r: usize, mut f: impl FnMut(&[usize])) {
    if r > m {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        f(&idx);
        let mut i = 0;
        loop {
            if i == r {
                return;
            }
            let limit = if i + 1 < r { idx[i + 1] } else { m };
            if idx[i] + 1 < limit {
                idx[i] += 1;
                for (j, slot) in idx.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                break;
            }
            i += 1;
        }
    }
}
