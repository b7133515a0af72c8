//! Seeded Monte Carlo check of the closed forms.
//!
//! A trial draws `p` numbers, buys `v` tickets and tests the target event.
//! Trials run in shards of [`SHARD_TRIALS`]; shard `i` draws everything
//! from [`SplitMix64::substream`]`(seed, i)`, so results do not depend on
//! the worker count. Within a trial, using that shard's generator:
//!
//! 1. The draw is a partial Fisher-Yates shuffle of a persistent array
//!    `[1..=n]` (initially sorted, carried over between trials of a shard):
//!    for `i in 0..p`, swap `i` with `i + below(n - i)`.
//! 2. Unique tickets are `v` distinct colex ranks from Floyd's algorithm:
//!    for `j in N-v..N`, `r = below(j + 1)`, take `j` if `r` is already
//!    taken, else `r`. Tickets with doubles are `v` values of `below(N)`.
//!
//! Tickets are classified by hit count only where the target needs it: the
//! ranks of all tickets at the relevant hit levels are enumerated for the
//! draw and matched against the purchased ranks.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::combin::{binomial, binomial_u64, for_each_combination, BinomialTable};
use crate::error::{Error, Result};
use crate::prob::{
    pmf_exact_hits, prob_at_least_one_high_hit, prob_at_least_s_high_hits, prob_jackpot, Scheme, TicketModel,
    EXACT_POWER_LIMIT,
};
use crate::probability::Probability;
use crate::rational::ExactRational;
use crate::rng::SplitMix64;

pub const SHARD_TRIALS: u64 = 1_000;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Level-rank enumeration is used while the relevant levels hold at most this many tickets.
const LEVEL_RANK_LIMIT: u64 = 1 << 16;

/// Ticket spaces up to this size are simulated; the rank bitset is `N` bits.
pub const TICKET_SPACE_LIMIT: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimTarget {
    /// At least one ticket with `t` or more hits.
    AtLeastOneHigh,
    /// At least one ticket containing every drawn number.
    Jackpot,
    /// At least `s` tickets with `t` or more hits.
    AtLeastSHigh(u64),
    /// Exactly `m` tickets with exactly `hits` hits.
    ExactHits { hits: u32, m: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub v: u64,
    pub model: TicketModel,
    pub trials: u64,
    pub seed: u64,
    pub target: SimTarget,
    /// 0 picks the rayon default.
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    pub successes: u64,
    pub trials: u64,
    pub frequency: ExactRational,
    pub wilson95: (f64, f64),
}

impl SimResult {
    pub fn contains(&self, p: f64) -> bool {
        self.wilson95.0 <= p && p <= self.wilson95.1
    }
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

struct Plan {
    n: u32,
    k: usize,
    p: usize,
    total: u64,
    table: BinomialTable,
    /// Hit counts that matter for the target.
    levels: Vec<u32>,
    /// Whether the relevant tickets can be enumerated per draw.
    enumerate_levels: bool,
}

impl Plan {
    fn new(cfg: &SimConfig) -> Result<Self> {
        let s = &cfg.scheme;
        if cfg.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        let total = binomial_u64(s.n as u64, s.k as u64)
            .filter(|&c| c <= TICKET_SPACE_LIMIT)
            .ok_or_else(|| Error::resource(format!("C({}, {}) tickets exceed {TICKET_SPACE_LIMIT}", s.n, s.k)))?;
        if cfg.model == TicketModel::Unique && cfg.v > total {
            return Err(Error::invalid(format!(
                "{} unique tickets exceed the {total} distinct tickets",
                cfg.v
            )));
        }
        let top = s.k.min(s.p);
        let levels: Vec<u32> = match cfg.target {
            SimTarget::AtLeastOneHigh | SimTarget::AtLeastSHigh(_) => (s.t..=top).collect(),
            SimTarget::Jackpot => {
                if s.k < s.p {
                    return Err(Error::domain("a jackpot needs tickets at least as large as the draw"));
                }
                vec![s.p]
            }
            SimTarget::ExactHits { hits, .. } => {
                if hits > top {
                    return Err(Error::domain(format!("no ticket can have {hits} hits")));
                }
                vec![hits]
            }
        };
        let level_size: BigUint = levels
            .iter()
            .map(|&h| binomial(s.p as u64, h as u64) * binomial((s.n - s.p) as u64, (s.k - h) as u64))
            .sum();
        let enumerate_levels = level_size.to_u64().is_some_and(|c| c <= LEVEL_RANK_LIMIT);
        Ok(Plan {
            n: s.n,
            k: s.k as usize,
            p: s.p as usize,
            total,
            table: BinomialTable::new(s.n, s.k as usize)?,
            levels,
            enumerate_levels,
        })
    }

    /// Ranks of every ticket at a relevant level for `draw` (sorted), with its hit count.
    fn level_ranks(&self, draw: &[u8], out: &mut Vec<(u64, u32)>) {
        out.clear();
        let mut outside = Vec::with_capacity(self.n as usize - self.p);
        let mut di = 0;
        for x in 1..=self.n as u8 {
            if di < draw.len() && draw[di] == x {
                di += 1;
            } else {
                outside.push(x);
            }
        }
        let mut inner = vec![0u8; self.p];
        let mut merged = vec![0u8; self.k];
        for &h in &self.levels {
            let h = h as usize;
            let rest = self.k - h;
            for_each_combination(self.p, h, |a| {
                for (slot, &i) in inner.iter_mut().zip(a) {
                    *slot = draw[i];
                }
                for_each_combination(outside.len(), rest, |b| {
                    let (mut x, mut y) = (0, 0);
                    for slot in merged.iter_mut() {
                        *slot = if y >= rest || (x < h && inner[x] < outside[b[y]]) {
                            x += 1;
                            inner[x - 1]
                        } else {
                            y += 1;
                            outside[b[y - 1]]
                        };
                    }
                    out.push((self.table.rank(&merged), h as u32));
                });
            });
        }
    }
}

/// Reusable per-shard buffers.
struct Scratch {
    numbers: Vec<u8>,
    draw: Vec<u8>,
    draw_mask: [u64; 4],
    /// One bit per rank: purchased tickets (unique) or relevant tickets (doubles).
    bits: Vec<u64>,
    tickets: Vec<u64>,
    relevant: Vec<(u64, u32)>,
    ticket: Vec<u8>,
}

impl Scratch {
    fn new(plan: &Plan) -> Self {
        Scratch {
            numbers: (1..=plan.n as u8).collect(),
            draw: Vec::with_capacity(plan.p),
            draw_mask: [0; 4],
            bits: vec![0; plan.total.div_ceil(64) as usize],
            tickets: Vec::new(),
            relevant: Vec::new(),
            ticket: vec![0; plan.k],
        }
    }
}

#[inline]
fn test_bit(bits: &[u64], r: u64) -> bool {
    bits[(r >> 6) as usize] >> (r & 63) & 1 == 1
}

#[inline]
fn flip_bit(bits: &mut [u64], r: u64) {
    bits[(r >> 6) as usize] ^= 1 << (r & 63);
}

/// Per-level counts of purchased tickets, indexed by hit count.
fn run_trial(plan: &Plan, cfg: &SimConfig, rng: &mut SplitMix64, s: &mut Scratch, counts: &mut [u64]) {
    counts.iter_mut().for_each(|c| *c = 0);
    let n = plan.n as u64;
    for i in 0..plan.p {
        let j = i + rng.below(n - i as u64) as usize;
        s.numbers.swap(i, j);
    }
    s.draw.clear();
    s.draw.extend_from_slice(&s.numbers[..plan.p]);
    s.draw.sort_unstable();
    s.draw_mask = [0; 4];
    for &x in &s.draw {
        s.draw_mask[(x >> 6) as usize] |= 1 << (x & 63);
    }

    s.tickets.clear();
    match cfg.model {
        TicketModel::Unique => {
            for j in plan.total - cfg.v..plan.total {
                let r = rng.below(j + 1);
                let pick = if test_bit(&s.bits, r) { j } else { r };
                debug_assert!(!test_bit(&s.bits, pick), "duplicate unique ticket");
                flip_bit(&mut s.bits, pick);
                s.tickets.push(pick);
            }
        }
        TicketModel::Doubles => {
            for _ in 0..cfg.v {
                s.tickets.push(rng.below(plan.total));
            }
        }
    }
    if cfg.v == 0 {
        return;
    }

    if plan.enumerate_levels {
        plan.level_ranks(&s.draw, &mut s.relevant);
        match cfg.model {
            TicketModel::Unique => {
                for &(r, h) in &s.relevant {
                    if test_bit(&s.bits, r) {
                        counts[h as usize] += 1;
                    }
                }
            }
            TicketModel::Doubles => {
                let mut level_of = HashMap::with_capacity(s.relevant.len());
                for &(r, h) in &s.relevant {
                    flip_bit(&mut s.bits, r);
                    level_of.insert(r, h);
                }
                for &r in &s.tickets {
                    if test_bit(&s.bits, r) {
                        counts[level_of[&r] as usize] += 1;
                    }
                }
                for &(r, _) in &s.relevant {
                    flip_bit(&mut s.bits, r);
                }
            }
        }
    } else {
        for &r in &s.tickets {
            plan.table.unrank_into(r, &mut s.ticket);
            let hits: u32 = s
                .ticket
                .iter()
                .map(|&x| (s.draw_mask[(x >> 6) as usize] >> (x & 63) & 1) as u32)
                .sum();
            counts[hits as usize] += 1;
        }
    }
    if cfg.model == TicketModel::Unique {
        for &r in &s.tickets {
            flip_bit(&mut s.bits, r);
        }
    }
}

fn success(cfg: &SimConfig, counts: &[u64]) -> bool {
    let s = &cfg.scheme;
    let high = || counts[s.t as usize..].iter().sum::<u64>();
    match cfg.target {
        SimTarget::AtLeastOneHigh => high() >= 1,
        SimTarget::Jackpot => counts[s.p as usize] >= 1,
        SimTarget::AtLeastSHigh(need) => high() >= need,
        SimTarget::ExactHits { hits, m } => counts[hits as usize] == m,
    }
}

fn run_shard(plan: &Plan, cfg: &SimConfig, shard: u64) -> u64 {
    let first = shard * SHARD_TRIALS;
    let trials = SHARD_TRIALS.min(cfg.trials - first);
    let mut rng = SplitMix64::substream(cfg.seed, shard);
    let mut scratch = Scratch::new(plan);
    let mut counts = vec![0u64; plan.k.min(plan.p) + 1];
    let mut wins = 0;
    for _ in 0..trials {
        run_trial(plan, cfg, &mut rng, &mut scratch, &mut counts);
        wins += success(cfg, &counts) as u64;
    }
    wins
}

pub fn run_simulation(cfg: &SimConfig) -> Result<SimResult> {
    let plan = Plan::new(cfg)?;
    let shards = cfg.trials.div_ceil(SHARD_TRIALS);
    let sequential = cfg.workers == 1 || (cfg.workers == 0 && rayon::current_num_threads() == 1);
    let successes = if sequential {
        (0..shards).map(|i| run_shard(&plan, cfg, i)).sum()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::resource(format!("thread pool: {e}")))?
            .install(|| (0..shards).into_par_iter().map(|i| run_shard(&plan, cfg, i)).sum())
    };
    Ok(SimResult {
        successes,
        trials: cfg.trials,
        frequency: ExactRational::new(successes, cfg.trials),
        wilson95: wilson_interval(successes, cfg.trials, Z95),
    })
}

/// The closed-form probability of the simulated event.
pub fn expected_probability(cfg: &SimConfig) -> Result<Probability> {
    let s = &cfg.scheme;
    match (cfg.target, cfg.model) {
        (SimTarget::AtLeastOneHigh, model) => prob_at_least_one_high_hit(s, cfg.v, model),
        (SimTarget::Jackpot, model) => prob_jackpot(s, cfg.v, model),
        (SimTarget::AtLeastSHigh(need), TicketModel::Unique) => prob_at_least_s_high_hits(s, need, cfg.v),
        (SimTarget::ExactHits { hits, m }, TicketModel::Unique) => pmf_exact_hits(s, hits, m, cfg.v),
        (SimTarget::AtLeastSHigh(need), TicketModel::Doubles) => {
            let (near, top) = s.high_level_counts()?;
            let below = (0..need.min(cfg.v + 1))
                .map(|m| binomial_mass(cfg.v, m, near + top, s.total_u64()?))
                .sum::<Result<ExactRational>>()?;
            Ok(Probability::Exact(below.complement()))
        }
        (SimTarget::ExactHits { hits, m }, TicketModel::Doubles) => {
            let level = crate::prob::hit_combinations(s, hits)?
                .to_u64()
                .ok_or_else(|| Error::resource("hit count exceeds 64 bits"))?;
            Ok(Probability::Exact(binomial_mass(cfg.v, m, level, s.total_u64()?)?))
        }
    }
}

/// `C(v, m) q^m (1 - q)^(v - m)` with `q = level / total`, exact.
fn binomial_mass(v: u64, m: u64, level: u64, total: u64) -> Result<ExactRational> {
    if v > EXACT_POWER_LIMIT {
        return Err(Error::Unsupported(format!(
            "exact binomial mass needs v <= {EXACT_POWER_LIMIT}, got {v}"
        )));
    }
    if m > v {
        return Ok(ExactRational::zero());
    }
    let q = ExactRational::new(level, total);
    let rest = ExactRational::new(total - level, total);
    Ok(ExactRational::from_integer(binomial(v, m)) * q.pow(m) * rest.pow(v - m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(scheme: Scheme, v: u64, model: TicketModel, target: SimTarget, trials: u64) -> SimConfig {
        SimConfig {
            scheme,
            v,
            model,
            trials,
            seed: 20_240_601,
            target,
            workers: 1,
        }
    }

    #[test]
    fn wilson_interval_reference() {
        // 50 of 100: center 0.5, half-width z * sqrt(0.25/100 + z^2/40000) / (1 + z^2/100).
        let (lo, hi) = wilson_interval(50, 100, Z95);
        assert!((lo - 0.403_831_530_4).abs() < 1e-9, "{lo}");
        assert!((hi - 0.596_168_469_6).abs() < 1e-9, "{hi}");
        let (lo, hi) = wilson_interval(0, 10, Z95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.27 && hi < 0.28);
    }

    #[test]
    fn zero_tickets_never_win() {
        let s = Scheme::new(10, 4, 4, 3).unwrap();
        let r = run_simulation(&cfg(s, 0, TicketModel::Unique, SimTarget::AtLeastOneHigh, 2_000)).unwrap();
        assert_eq!(r.successes, 0);
    }

    #[test]
    fn mini_scheme_single_ticket_matches_hit_probability() {
        let s = Scheme::new(10, 4, 4, 3).unwrap();
        let c = cfg(s, 1, TicketModel::Unique, SimTarget::ExactHits { hits: 3, m: 1 }, 200_000);
        let r = run_simulation(&c).unwrap();
        // C(4,3) C(6,1) / C(10,4) = 24/210
        let p = expected_probability(&c).unwrap();
        assert_eq!(p.to_rational(), ExactRational::new(24u32, 210u32));
        assert!(r.contains(p.to_f64()), "{r:?}");
    }

    #[test]
    fn enumeration_and_unranking_paths_agree() {
        // Level 0 of (12, 4, 4) has 70 tickets, so both the enumerated and the
        // unranked classification run on identical random streams.
        let s = Scheme::new(12, 4, 4, 2).unwrap();
        for model in [TicketModel::Unique, TicketModel::Doubles] {
            let c = cfg(s, 30, model, SimTarget::ExactHits { hits: 0, m: 3 }, 3_000);
            let plan = Plan::new(&c).unwrap();
            assert!(plan.enumerate_levels);
            let slow = Plan { enumerate_levels: false, ..Plan::new(&c).unwrap() };
            let (mut ra, mut rb) = (SplitMix64::new(3), SplitMix64::new(3));
            let (mut sa, mut sb) = (Scratch::new(&plan), Scratch::new(&slow));
            let (mut ca, mut cb) = (vec![0; 5], vec![0; 5]);
            for _ in 0..c.trials {
                run_trial(&plan, &c, &mut ra, &mut sa, &mut ca);
                run_trial(&slow, &c, &mut rb, &mut sb, &mut cb);
                assert_eq!(ca[0], cb[0]);
            }
        }
    }

    #[test]
    fn deterministic_across_workers() {
        let s = Scheme::new(15, 5, 5, 3).unwrap();
        let a = cfg(s, 40, TicketModel::Doubles, SimTarget::AtLeastSHigh(2), 7_500);
        let b = SimConfig { workers: 3, ..a.clone() };
        assert_eq!(run_simulation(&a).unwrap(), run_simulation(&b).unwrap());
        let other = SimConfig { seed: 1, ..a.clone() };
        assert_ne!(run_simulation(&a).unwrap().successes, run_simulation(&other).unwrap().successes);
    }

    #[test]
    fn unique_mode_never_repeats_a_ticket() {
        let s = Scheme::new(8, 3, 3, 2).unwrap();
        let c = cfg(s, 56, TicketModel::Unique, SimTarget::Jackpot, 50);
        let plan = Plan::new(&c).unwrap();
        let mut scratch = Scratch::new(&plan);
        let mut rng = SplitMix64::new(11);
        let mut counts = vec![0; 4];
        for _ in 0..50 {
            run_trial(&plan, &c, &mut rng, &mut scratch, &mut counts);
            let mut t = scratch.tickets.clone();
            t.sort_unstable();
            t.dedup();
            assert_eq!(t.len(), 56);
            assert_eq!(counts[3], 1);
            assert!(scratch.bits.iter().all(|&w| w == 0));
        }
        assert!(run_simulation(&SimConfig { v: 57, ..c }).is_err());
    }

    #[test]
    fn small_battery_is_calibrated() {
        let s = Scheme::new(12, 4, 4, 3).unwrap();
        let cases = [
            cfg(s, 5, TicketModel::Unique, SimTarget::AtLeastOneHigh, 20_000),
            cfg(s, 5, TicketModel::Doubles, SimTarget::AtLeastOneHigh, 20_000),
            cfg(s, 60, TicketModel::Unique, SimTarget::Jackpot, 20_000),
            cfg(s, 60, TicketModel::Doubles, SimTarget::Jackpot, 20_000),
            cfg(s, 40, TicketModel::Unique, SimTarget::AtLeastSHigh(2), 20_000),
            cfg(s, 40, TicketModel::Doubles, SimTarget::AtLeastSHigh(2), 20_000),
        ];
        let inside = cases
            .iter()
            .filter(|c| {
                let p = expected_probability(c).unwrap().to_f64();
                run_simulation(c).unwrap().contains(p)
            })
            .count();
        assert!(inside >= 5, "{inside} of 6 inside");
    }
}
