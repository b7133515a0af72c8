//! Greedy set-cover construction of `(n, k, t)` covering designs.
//!
//! Each round picks the candidate block containing the most still-uncovered
//! t-subsets, lowest colex rank first among ties, until every t-subset is
//! covered.
//!
//! * Exhaustive candidates are all `C(n, k)` blocks. Gains are kept per
//!   candidate and decremented as t-subsets become covered; selection uses
//!   a lazy max-heap keyed by `(gain, -rank)`.
//! * Sampled candidates are drawn afresh every round: round `r` seeds
//!   [`SplitMix64::substream`]`(seed, r)` and draws `count` blocks, each by
//!   Floyd's algorithm (`for j in n-k+1..=n: x = 1 + below(j)`, insert `j`
//!   if `x` is already present, else `x`). Gains are computed against the
//!   coverage bit array, in parallel when workers allow.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::combin::{binomial_u64, for_each_combination, BinomialTable};
use crate::design::{Design, DesignKind};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::verify::schonheim_bound;

/// Exhaustive candidate pools are limited to this many blocks.
pub const EXHAUSTIVE_CANDIDATE_LIMIT: u64 = 1_000_000;

/// Coverage arrays are limited to this many t-subsets.
pub const TARGET_LIMIT: u64 = 1 << 31;

/// Consecutive sampled rounds without any gain before giving up.
pub const SAMPLED_STALL_LIMIT: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateStrategy {
    Exhaustive,
    Sampled { count: u32, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyConfig {
    pub strategy: CandidateStrategy,
    /// Safety cap; `None` means `C(n, t)`, which always suffices.
    pub max_blocks: Option<u64>,
    /// 0 picks the rayon default.
    pub workers: usize,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig {
            strategy: CandidateStrategy::Exhaustive,
            max_blocks: None,
            workers: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Progress {
    pub blocks: u64,
    pub covered: u64,
    pub total: u64,
}

pub fn greedy_cover(n: u32, k: u32, t: u32, cfg: &GreedyConfig) -> Result<Design> {
    greedy_cover_with_progress(n, k, t, cfg, |_| {})
}

/// As [`greedy_cover`], calling `progress` after every selected block.
pub fn greedy_cover_with_progress(
    n: u32,
    k: u32,
    t: u32,
    cfg: &GreedyConfig,
    mut progress: impl FnMut(Progress) + Send,
) -> Result<Design> {
    let kind = DesignKind::covering(n, k, t)?;
    let total = binomial_u64(n as u64, t as u64)
        .filter(|&c| c <= TARGET_LIMIT)
        .ok_or_else(|| Error::resource(format!("C({n}, {t}) t-subsets exceed {TARGET_LIMIT}")))?;
    let bound = schonheim_bound(n, k, t)?;
    let max_blocks = cfg.max_blocks.unwrap_or(total);
    if bound > max_blocks.into() {
        return Err(Error::invalid(format!(
            "max blocks {max_blocks} is below the Schonheim bound {bound}"
        )));
    }
    let mut state = Cover::new(n, k as usize, t as usize, total)?;
    match cfg.strategy {
        CandidateStrategy::Exhaustive => {
            let count = binomial_u64(n as u64, k as u64)
                .filter(|&c| c <= EXHAUSTIVE_CANDIDATE_LIMIT)
                .ok_or_else(|| {
                    Error::resource(format!(
                        "C({n}, {k}) candidates exceed {EXHAUSTIVE_CANDIDATE_LIMIT}; use sampled candidates"
                    ))
                })?;
            exhaustive(&mut state, count, max_blocks, &mut progress)?;
        }
        CandidateStrategy::Sampled { count, seed } => {
            if count == 0 {
                return Err(Error::invalid("sampled candidate count must be at least 1"));
            }
            let mut run = |parallel: bool| sampled(&mut state, count, seed, max_blocks, parallel, &mut progress);
            if cfg.workers == 1 || (cfg.workers == 0 && rayon::current_num_threads() == 1) {
                run(false)?;
            } else {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(cfg.workers)
                    .build()
                    .map_err(|e| Error::resource(format!("thread pool: {e}")))?
                    .install(|| run(true))?;
            }
        }
    }
    Ok(state.into_design(kind).with_provenance(format!(
        "greedy ({n}, {k}, {t}) cover, {:?} candidates",
        cfg.strategy
    )))
}

struct Cover {
    n: u32,
    k: usize,
    t: usize,
    total: u64,
    covered: Vec<u64>,
    covered_count: u64,
    t_table: BinomialTable,
    k_table: BinomialTable,
    /// Position sets of the t-subsets inside a k-block.
    positions: Vec<usize>,
    labels: Vec<u8>,
}

impl Cover {
    fn new(n: u32, k: usize, t: usize, total: u64) -> Result<Self> {
        let mut positions = Vec::new();
        for_each_combination(k, t, |c| positions.extend_from_slice(c));
        Ok(Cover {
            n,
            k,
            t,
            total,
            covered: vec![0; total.div_ceil(64) as usize],
            covered_count: 0,
            t_table: BinomialTable::new(n, t)?,
            k_table: BinomialTable::new(n, k)?,
            positions,
            labels: Vec::new(),
        })
    }

    fn is_covered(&self, r: u64) -> bool {
        self.covered[(r >> 6) as usize] >> (r & 63) & 1 == 1
    }

    fn t_ranks<'a>(&'a self, block: &'a [u8]) -> impl Iterator<Item = u64> + 'a {
        self.positions.chunks_exact(self.t).map(move |combo| {
            combo
                .iter()
                .enumerate()
                .map(|(i, &pos)| self.t_table.get(block[pos] as usize - 1, i + 1))
                .sum()
        })
    }

    fn gain(&self, block: &[u8]) -> u32 {
        self.t_ranks(block).filter(|&r| !self.is_covered(r)).count() as u32
    }

    /// Adds `block`, returning the newly covered t-subsets.
    fn take(&mut self, block: &[u8]) -> Vec<u64> {
        let fresh: Vec<u64> = self.t_ranks(block).filter(|&r| !self.is_covered(r)).collect();
        for &r in &fresh {
            self.covered[(r >> 6) as usize] |= 1 << (r & 63);
        }
        self.covered_count += fresh.len() as u64;
        self.labels.extend_from_slice(block);
        fresh
    }

    fn progress(&self) -> Progress {
        Progress {
            blocks: (self.labels.len() / self.k) as u64,
            covered: self.covered_count,
            total: self.total,
        }
    }

    fn done(&self) -> bool {
        self.covered_count == self.total
    }

    fn into_design(self, kind: DesignKind) -> Design {
        Design::from_labels_unchecked(kind, self.labels)
    }

    /// Hands the blocks chosen so far to a construction error.
    fn fail(&mut self, reason: String) -> Error {
        let labels = std::mem::take(&mut self.labels);
        Error::Construction {
            reason,
            partial: Box::new(Design::from_labels_unchecked(self.kind(), labels)),
        }
    }

    fn kind(&self) -> DesignKind {
        DesignKind::Covering {
            n: self.n,
            k: self.k as u32,
            t: self.t as u32,
        }
    }
}

fn exhaustive(
    state: &mut Cover,
    count: u64,
    max_blocks: u64,
    progress: &mut (impl FnMut(Progress) + Send),
) -> Result<()> {
    let (n, k, t) = (state.n, state.k, state.t);
    let full_gain = (state.positions.len() / t) as u32;
    let mut gains = vec![full_gain; count as usize];
    let mut heap: BinaryHeap<(u32, Reverse<u32>)> =
        (0..count as u32).map(|r| (full_gain, Reverse(r))).collect();
    let mut extra_positions = Vec::new();
    for_each_combination(n as usize - t, k - t, |c| extra_positions.extend_from_slice(c));
    let mut block = vec![0u8; k];
    let mut subset = vec![0u8; t];
    let mut complement = Vec::with_capacity(n as usize - t);
    let mut merged = vec![0u8; k];

    while !state.done() {
        let Some((g, Reverse(rank))) = heap.pop() else {
            unreachable!("uncovered t-subsets remain but no candidate has gain");
        };
        let current = gains[rank as usize];
        if g != current {
            if current > 0 {
                heap.push((current, Reverse(rank)));
            }
            continue;
        }
        if state.progress().blocks >= max_blocks {
            return Err(state.fail(format!("reached the cap of {max_blocks} blocks")));
        }
        state.k_table.unrank_into(rank as u64, &mut block);
        for r in state.take(&block) {
            // Every candidate containing this t-subset loses one unit of gain.
            state.t_table.unrank_into(r, &mut subset);
            complement.clear();
            let mut si = 0;
            for x in 1..=n as u8 {
                if si < t && subset[si] == x {
                    si += 1;
                } else {
                    complement.push(x);
                }
            }
            let step = k - t;
            let mut visit = |extra: &[usize]| {
                let (mut a, mut b) = (0, 0);
                for slot in merged.iter_mut() {
                    *slot = if b >= step || (a < t && subset[a] < complement[extra[b]]) {
                        a += 1;
                        subset[a - 1]
                    } else {
                        b += 1;
                        complement[extra[b - 1]]
                    };
                }
                gains[state.k_table.rank(&merged) as usize] -= 1;
            };
            if step == 0 {
                visit(&[]);
            } else {
                extra_positions.chunks_exact(step).for_each(&mut visit);
            }
        }
        progress(state.progress());
    }
    Ok(())
}

fn draw_block(rng: &mut SplitMix64, n: u32, k: usize, out: &mut Vec<u8>) {
    out.clear();
    for j in n - k as u32 + 1..=n {
        let x = 1 + rng.below(j as u64) as u8;
        out.push(if out.contains(&x) { j as u8 } else { x });
    }
    out.sort_unstable();
}

fn sampled(
    state: &mut Cover,
    count: u32,
    seed: u64,
    max_blocks: u64,
    parallel: bool,
    progress: &mut (impl FnMut(Progress) + Send),
) -> Result<()> {
    let (n, k) = (state.n, state.k);
    let mut pool = vec![0u8; count as usize * k];
    let mut scratch = Vec::with_capacity(k);
    let mut round = 0u64;
    let mut stalled = 0u64;
    while !state.done() {
        if state.progress().blocks >= max_blocks {
            return Err(state.fail(format!("reached the cap of {max_blocks} blocks")));
        }
        if stalled >= SAMPLED_STALL_LIMIT {
            return Err(state.fail(format!(
                "{SAMPLED_STALL_LIMIT} consecutive candidate pools added no coverage"
            )));
        }
        let mut rng = SplitMix64::substream(seed, round);
        round += 1;
        for chunk in pool.chunks_exact_mut(k) {
            draw_block(&mut rng, n, k, &mut scratch);
            chunk.copy_from_slice(&scratch);
        }
        let shared = &*state;
        let score = |(i, b): (usize, &[u8])| (shared.gain(b), Reverse(shared.k_table.rank(b)), i);
        let best = if parallel {
            pool.par_chunks_exact(k).enumerate().map(score).max()
        } else {
            pool.chunks_exact(k).enumerate().map(score).max()
        };
        let (gain, _, i) = best.expect("pool is non-empty");
        if gain == 0 {
            stalled += 1;
            continue;
        }
        stalled = 0;
        let block = pool[i * k..(i + 1) * k].to_vec();
        state.take(&block);
        progress(state.progress());
    }
    Ok(())
}
