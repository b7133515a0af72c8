//! Covering and lottery design verification over colex-rank bit arrays.
//!
//! Both checks allocate one bit per target subset (t-subsets for a
//! covering design, p-subsets for a lottery design), then walk the blocks
//! marking every target each block takes care of, then count the unset
//! bits. A covering block marks its `C(k, t)` t-subsets. A lottery block
//! marks every p-subset meeting it in `j >= t` elements, built directly as
//! a j-subset of the block plus a (p - j)-subset of its complement: 259
//! marks per block for (49, 6, 6, 5).
//!
//! With more than one worker the mark phase shards blocks across threads
//! setting bits atomically, and the scan phase splits the bit array into
//! contiguous chunks whose counts and witnesses are merged in rank order,
//! so the report does not depend on the worker count.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;

use crate::combin::{binomial_u64, for_each_combination, next_colex, BinomialTable};
use crate::design::{Design, DesignKind};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Uncovered subsets to report; 0 for counts only.
    pub witness_cap: usize,
    /// Largest bit array the verifier may allocate.
    pub memory_cap_bits: u64,
    /// Largest `targets x blocks` product the brute-force lottery path may scan.
    pub work_cap: u64,
    /// 0 picks the rayon default; 1 runs single-threaded.
    pub workers: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            witness_cap: 10,
            memory_cap_bits: 1 << 31,
            work_cap: 1 << 36,
            workers: 0,
        }
    }
}

/// Per-block neighbour marking is used while it stays below this many marks.
const NEIGHBOUR_MARK_LIMIT: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Bit array over target ranks.
    RankBitset,
    /// Per-target scan over blocks with early exit.
    BruteForce,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub kind: DesignKind,
    pub blocks: u64,
    pub total_targets: u64,
    pub covered: u64,
    pub uncovered: u64,
    /// The first uncovered targets in colex order.
    pub witnesses: Vec<Vec<u32>>,
    pub duplicate_blocks: u64,
    pub marks: u64,
    pub method: Method,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.uncovered == 0
    }

    /// Equality of everything except timing.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.blocks == other.blocks
            && self.total_targets == other.total_targets
            && self.covered == other.covered
            && self.uncovered == other.uncovered
            && self.witnesses == other.witnesses
            && self.duplicate_blocks == other.duplicate_blocks
    }
}

/// Dispatches on the design's header.
pub fn verify(design: &Design, cfg: &VerifyConfig) -> Result<VerificationReport> {
    match design.kind() {
        DesignKind::Covering { .. } => verify_covering(design, cfg),
        DesignKind::Lottery { .. } => verify_lottery(design, cfg),
    }
}

fn run_with_workers<T: Send>(workers: usize, f: impl FnOnce(bool) -> T + Send) -> Result<T> {
    if workers == 1 || (workers == 0 && rayon::current_num_threads() == 1) {
        return Ok(f(false));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::resource(format!("thread pool: {e}")))?;
    Ok(pool.install(|| f(true)))
}

fn target_space(n: u32, size: u32, cfg: &VerifyConfig) -> Result<u64> {
    let total = binomial_u64(n as u64, size as u64)
        .filter(|&c| c <= cfg.memory_cap_bits)
        .ok_or_else(|| {
            Error::resource(format!(
                "C({n}, {size}) target bits exceed the memory cap of {} bits",
                cfg.memory_cap_bits
            ))
        })?;
    Ok(total)
}

/// Bit array that is written either exclusively or through atomics.
struct Bits {
    words: Vec<AtomicU64>,
    len: u64,
}

impl Bits {
    fn new(len: u64) -> Self {
        let words = (0..len.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
        Bits { words, len }
    }

    #[inline]
    fn set_shared(&self, i: u64) {
        self.words[(i >> 6) as usize].fetch_or(1 << (i & 63), Ordering::Relaxed);
    }

    #[inline]
    fn set_exclusive(&mut self, i: u64) {
        *self.words[(i >> 6) as usize].get_mut() |= 1 << (i & 63);
    }

    /// Unset-bit count and the first `cap` unset ranks within `words[range]`.
    fn scan_words(&self, first_word: usize, words: &[AtomicU64], cap: usize) -> (u64, Vec<u64>) {
        let mut missing = 0u64;
        let mut found = Vec::new();
        for (off, w) in words.iter().enumerate() {
            let wi = first_word + off;
            let mut free = !w.load(Ordering::Relaxed);
            let base = wi as u64 * 64;
            if base + 64 > self.len {
                let valid = self.len - base;
                free &= (1u64 << valid) - 1;
            }
            missing += free.count_ones() as u64;
            while free != 0 && found.len() < cap {
                found.push(base + free.trailing_zeros() as u64);
                free &= free - 1;
            }
        }
        (missing, found)
    }

    fn scan(&self, cap: usize, parallel: bool) -> (u64, Vec<u64>) {
        const CHUNK: usize = 1 << 14;
        if !parallel {
            return self.scan_words(0, &self.words, cap);
        }
        let parts: Vec<(u64, Vec<u64>)> = self
            .words
            .par_chunks(CHUNK)
            .enumerate()
            .map(|(ci, chunk)| self.scan_words(ci * CHUNK, chunk, cap))
            .collect();
        let mut missing = 0;
        let mut found = Vec::new();
        for (m, f) in parts {
            missing += m;
            let room = cap - found.len();
            found.extend(f.into_iter().take(room));
        }
        (missing, found)
    }
}

/// Runs `emit_marks` for every block, sequentially or sharded.
fn mark_all<F>(design: &Design, bits: &mut Bits, parallel: bool, emit_marks: F) -> u64
where
    F: Fn(&[u8], &mut dyn FnMut(u64)) + Sync,
{
    if parallel {
        let shared = &*bits;
        let k = design.k();
        design
            .labels()
            .par_chunks(k * 1024)
            .map(|chunk| {
                let mut count = 0u64;
                for block in chunk.chunks_exact(k) {
                    emit_marks(block, &mut |r| {
                        shared.set_shared(r);
                        count += 1;
                    });
                }
                count
            })
            .sum()
    } else {
        let mut count = 0u64;
        for block in design.blocks() {
            emit_marks(block, &mut |r| {
                bits.set_exclusive(r);
                count += 1;
            });
        }
        count
    }
}

fn finish(
    design: &Design,
    bits: &Bits,
    table: &BinomialTable,
    marks: u64,
    cfg: &VerifyConfig,
    parallel: bool,
    started: Instant,
) -> VerificationReport {
    let (uncovered, ranks) = bits.scan(cfg.witness_cap, parallel);
    let witnesses = ranks
        .into_iter()
        .map(|r| {
            let mut s = vec![0u32; table.k()];
            table.unrank_into(r, &mut s);
            s
        })
        .collect();
    VerificationReport {
        kind: design.kind(),
        blocks: design.block_count() as u64,
        total_targets: bits.len,
        covered: bits.len - uncovered,
        uncovered,
        witnesses,
        duplicate_blocks: design.duplicate_blocks(),
        marks,
        method: Method::RankBitset,
        elapsed: started.elapsed(),
    }
}

/// Checks that every t-subset of `1..=n` lies inside some block.
pub fn verify_covering(design: &Design, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let DesignKind::Covering { n, k, t } = design.kind() else {
        return Err(Error::invalid(format!("{} is not a covering design", design.kind())));
    };
    let started = Instant::now();
    let total = target_space(n, t, cfg)?;
    let table = BinomialTable::new(n, t as usize)?;
    let mut positions: Vec<usize> = Vec::new();
    for_each_combination(k as usize, t as usize, |c| positions.extend_from_slice(c));
    let t = t as usize;

    run_with_workers(cfg.workers, |parallel| {
        let mut bits = Bits::new(total);
        let marks = mark_all(design, &mut bits, parallel, |block, mark| {
            for combo in positions.chunks_exact(t) {
                let mut r = 0u64;
                for (i, &pos) in combo.iter().enumerate() {
                    r += table.get(block[pos] as usize - 1, i + 1);
                }
                mark(r);
            }
        });
        finish(design, &bits, &table, marks, cfg, parallel, started)
    })
}

/// Checks that every p-subset of `1..=n` meets some block in at least t elements.
pub fn verify_lottery(design: &Design, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let DesignKind::Lottery { n, k, p, t } = design.kind() else {
        return Err(Error::invalid(format!("{} is not a lottery design", design.kind())));
    };
    let started = Instant::now();
    let per_block: u64 = (t..=k.min(p))
        .map(|j| {
            binomial_u64(k as u64, j as u64)
                .zip(binomial_u64((n - k) as u64, (p - j) as u64))
                .map_or(u64::MAX, |(a, b)| a.saturating_mul(b))
        })
        .fold(0u64, u64::saturating_add);
    if per_block > NEIGHBOUR_MARK_LIMIT {
        return verify_lottery_brute_force(design, cfg, started);
    }

    let total = target_space(n, p, cfg)?;
    let table = BinomialTable::new(n, p as usize)?;
    let (k, p, t) = (k as usize, p as usize, t as usize);
    let outside = n as usize - k;
    // Position sets: j from the block, p - j from its complement.
    let splits: Vec<(usize, Vec<usize>, Vec<usize>)> = (t..=k.min(p))
        .filter(|&j| p - j <= outside)
        .map(|j| {
            let mut inner = Vec::new();
            for_each_combination(k, j, |c| inner.extend_from_slice(c));
            let mut outer = Vec::new();
            for_each_combination(outside, p - j, |c| outer.extend_from_slice(c));
            (j, inner, outer)
        })
        .collect();

    run_with_workers(cfg.workers, |parallel| {
        let mut bits = Bits::new(total);
        let marks = mark_all(design, &mut bits, parallel, |block, mark| {
            let mut complement = Vec::with_capacity(outside);
            let mut bi = 0;
            for x in 1..=n as u8 {
                if bi < block.len() && block[bi] == x {
                    bi += 1;
                } else {
                    complement.push(x);
                }
            }
            let mut a = [0u8; 256];
            let mut c = [0u8; 256];
            for (j, inner, outer) in &splits {
                let (j, rest) = (*j, p - *j);
                let inner_iter: Box<dyn Iterator<Item = &[usize]>> = if j == 0 {
                    Box::new(std::iter::once(&[][..]))
                } else {
                    Box::new(inner.chunks_exact(j))
                };
                for ia in inner_iter {
                    for (slot, &pos) in a.iter_mut().zip(ia) {
                        *slot = block[pos];
                    }
                    let mut emit = |oc: &[usize]| {
                        for (slot, &pos) in c.iter_mut().zip(oc) {
                            *slot = complement[pos];
                        }
                        // Merge the two sorted runs and rank on the fly.
                        let (mut x, mut y, mut r) = (0usize, 0usize, 0u64);
                        for i in 0..p {
                            let e = if y >= rest || (x < j && a[x] < c[y]) {
                                x += 1;
                                a[x - 1]
                            } else {
                                y += 1;
                                c[y - 1]
                            };
                            r += table.get(e as usize - 1, i + 1);
                        }
                        mark(r);
                    };
                    if rest == 0 {
                        emit(&[]);
                    } else {
                        outer.chunks_exact(rest).for_each(&mut emit);
                    }
                }
            }
        });
        finish(design, &bits, &table, marks, cfg, parallel, started)
    })
}

type Mask = [u64; 4];

fn mask_of(labels: &[u8]) -> Mask {
    let mut m = [0u64; 4];
    for &x in labels {
        m[(x >> 6) as usize] |= 1 << (x & 63);
    }
    m
}

fn overlap(a: &Mask, b: &Mask) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

fn verify_lottery_brute_force(
    design: &Design,
    cfg: &VerifyConfig,
    started: Instant,
) -> Result<VerificationReport> {
    let DesignKind::Lottery { n, p, t, .. } = design.kind() else {
        unreachable!("checked by caller");
    };
    let total = binomial_u64(n as u64, p as u64)
        .ok_or_else(|| Error::resource("target count exceeds 64 bits"))?;
    let work = total.saturating_mul(design.block_count() as u64);
    if work > cfg.work_cap {
        return Err(Error::resource(format!(
            "brute-force lottery check needs {work} subset/block comparisons (cap {}); \
             raise the work cap or verify a smaller instance",
            cfg.work_cap
        )));
    }
    let blocks: Vec<Mask> = design.blocks().map(mask_of).collect();
    let mut target: Vec<u8> = (1..=p as u8).collect();
    let (mut uncovered, mut witnesses, mut comparisons) = (0u64, Vec::new(), 0u64);
    loop {
        let m = mask_of(&target);
        let hit = blocks.iter().position(|b| overlap(b, &m) >= t);
        comparisons += hit.map_or(blocks.len(), |i| i + 1) as u64;
        if hit.is_none() {
            uncovered += 1;
            if witnesses.len() < cfg.witness_cap {
                witnesses.push(target.iter().map(|&x| x as u32).collect());
            }
        }
        if !next_colex(&mut target, n) {
            break;
        }
    }
    Ok(VerificationReport {
        kind: design.kind(),
        blocks: design.block_count() as u64,
        total_targets: total,
        covered: total - uncovered,
        uncovered,
        witnesses,
        duplicate_blocks: design.duplicate_blocks(),
        marks: comparisons,
        method: Method::BruteForce,
        elapsed: started.elapsed(),
    })
}

/// Nested-ceiling lower bound on the size of an `(n, k, t)` covering,
/// evaluated innermost first. Returns every level of the chain; the last
/// entry is the bound.
pub fn schonheim_chain(n: u32, k: u32, t: u32) -> Result<Vec<BigUint>> {
    if t == 0 || t > k || k > n {
        return Err(Error::invalid(format!(
            "Schonheim bound needs 1 <= t <= k <= n, got ({n}, {k}, {t})"
        )));
    }
    let mut acc = BigUint::from(1u32);
    let mut chain = Vec::with_capacity(t as usize);
    for i in (0..t).rev() {
        let numer = acc * (n - i);
        acc = numer.div_ceil(&BigUint::from(k - i));
        chain.push(acc.clone());
    }
    Ok(chain)
}

pub fn schonheim_bound(n: u32, k: u32, t: u32) -> Result<BigUint> {
    Ok(schonheim_chain(n, k, t)?.pop().expect("chain has t >= 1 levels"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{enumerate_full_design, DEFAULT_ENUMERATION_CAP};

    fn seq() -> VerifyConfig {
        VerifyConfig {
            workers: 1,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn schonheim_values() {
        let chain: Vec<u64> = schonheim_chain(49, 6, 5)
            .unwrap()
            .iter()
            .map(|x| x.try_into().unwrap())
            .collect();
        assert_eq!(chain, [23, 353, 4148, 39821, 325205]);
        assert_eq!(schonheim_bound(7, 3, 2).unwrap(), BigUint::from(7u32));
        for n in 1..30u32 {
            for k in 1..=n {
                assert_eq!(
                    schonheim_bound(n, k, 1).unwrap(),
                    BigUint::from(n.div_ceil(k))
                );
            }
        }
        assert!(schonheim_bound(5, 6, 2).is_err());
        assert!(schonheim_bound(5, 3, 0).is_err());
    }

    #[test]
    fn single_block_covers_its_own_subsets() {
        let d = Design::from_blocks(DesignKind::covering(6, 6, 5).unwrap(), [[1, 2, 3, 4, 5, 6]]).unwrap();
        let r = verify_covering(&d, &seq()).unwrap();
        assert!(r.is_valid());
        assert_eq!((r.total_targets, r.covered, r.marks), (6, 6, 6));
    }

    #[test]
    fn lottery_witness_for_a_lone_block() {
        let d = Design::from_blocks(DesignKind::lottery(8, 6, 6, 5).unwrap(), [[1, 2, 3, 4, 5, 6]]).unwrap();
        let r = verify_lottery(&d, &VerifyConfig { witness_cap: 100, ..seq() }).unwrap();
        // 1 + 6 * 2 p-subsets meet the block in >= 5 of the C(8, 6) = 28.
        assert_eq!(r.total_targets, 28);
        assert_eq!(r.covered, 13);
        assert!(r.witnesses.contains(&vec![3, 4, 5, 6, 7, 8]));
    }

    #[test]
    fn full_designs_are_valid() {
        for n in 2..=10u32 {
            for k in 1..=n.min(6) {
                let full = enumerate_full_design(n, k, DEFAULT_ENUMERATION_CAP).unwrap();
                for t in 1..=k {
                    let d = full.reinterpret(DesignKind::covering(n, k, t).unwrap()).unwrap();
                    assert!(verify_covering(&d, &seq()).unwrap().is_valid(), "({n},{k},{t})");
                }
            }
        }
    }

    #[test]
    fn wrong_kind_and_caps() {
        let d = Design::from_blocks(DesignKind::covering(6, 6, 5).unwrap(), [[1, 2, 3, 4, 5, 6]]).unwrap();
        assert!(verify_lottery(&d, &seq()).is_err());
        let small = VerifyConfig {
            memory_cap_bits: 5,
            ..seq()
        };
        assert!(matches!(verify_covering(&d, &small), Err(Error::Resource(_))));
    }

    #[test]
    fn parallel_matches_sequential() {
        let full = enumerate_full_design(12, 5, DEFAULT_ENUMERATION_CAP).unwrap();
        let d = full.reinterpret(DesignKind::lottery(12, 5, 6, 4).unwrap()).unwrap();
        let thin = Design::from_blocks(d.kind(), d.blocks().step_by(7).map(|b| b.iter().map(|&x| x as u32).collect::<Vec<_>>())).unwrap();
        let a = verify_lottery(&thin, &seq()).unwrap();
        let b = verify_lottery(&thin, &VerifyConfig { workers: 3, ..seq() }).unwrap();
        assert!(a.same_outcome(&b));
        let c = full.reinterpret(DesignKind::covering(12, 5, 3).unwrap()).unwrap();
        let c = Design::from_blocks(c.kind(), c.blocks().step_by(11).map(|b| b.iter().map(|&x| x as u32).collect::<Vec<_>>())).unwrap();
        let a = verify_covering(&c, &seq()).unwrap();
        let b = verify_covering(&c, &VerifyConfig { workers: 4, ..seq() }).unwrap();
        assert!(a.same_outcome(&b));
        assert!(!a.is_valid());
    }

    #[test]
    fn brute_force_path_agrees_with_bitset() {
        let kind = DesignKind::lottery(14, 3, 6, 2).unwrap();
        let d = Design::from_blocks(kind, [[1, 2, 3], [4, 5, 6], [7, 8, 9], [10, 11, 12], [1, 13, 14]]).unwrap();
        let fast = verify_lottery(&d, &VerifyConfig { witness_cap: 1000, ..seq() }).unwrap();
        let slow = verify_lottery_brute_force(&d, &VerifyConfig { witness_cap: 1000, ..seq() }, Instant::now()).unwrap();
        assert_eq!(fast.method, Method::RankBitset);
        assert_eq!(slow.method, Method::BruteForce);
        assert!(fast.same_outcome(&slow));
    }
}
