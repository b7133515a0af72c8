//! What restricting picks to a preferred pool of `n*` numbers costs.
//!
//! Buying every k-subset of the pool yields a high hit only when at least
//! `t` of the drawn numbers land in the pool. The same budget spent on
//! distinct tickets over the whole field usually does far better.

use num_traits::ToPrimitive;

use crate::combin::{binomial, binomial_u64};
use crate::error::{Error, Result};
use crate::prob::{prob_at_least_one_high_hit, prob_at_least_one_high_hit_with, Regime, Scheme, TicketModel};
use crate::probability::Probability;
use crate::rational::ExactRational;

/// Literature covering numbers for pools of the 6/49 scheme, used as
/// defaults by the pool-cover comparison: `C(10, 6, 5) = 50`, `C(25, 6, 5) = 9,321`.
pub const REFERENCE_POOL_COVERS: [(u32, u64); 2] = [(10, 50), (25, 9_321)];

pub fn reference_pool_cover(n_star: u32) -> Option<u64> {
    REFERENCE_POOL_COVERS
        .iter()
        .find(|(n, _)| *n == n_star)
        .map(|&(_, c)| c)
}

fn check_pool(scheme: &Scheme, n_star: u32) -> Result<()> {
    if n_star > scheme.n {
        return Err(Error::invalid(format!(
            "pool size n* = {n_star} exceeds n = {}",
            scheme.n
        )));
    }
    Ok(())
}

/// Exactly `t` of the `p` drawn numbers fall in a fixed `n*`-pool:
/// `C(n*, t) C(n - n*, p - t) / C(n, p)`.
pub fn prob_winning_in_pool(scheme: &Scheme, n_star: u32, t: u32) -> Result<ExactRational> {
    check_pool(scheme, n_star)?;
    if t > scheme.p {
        return Err(Error::invalid(format!("t = {t} exceeds p = {}", scheme.p)));
    }
    let (n, p) = (scheme.n as u64, scheme.p as u64);
    let outside = n - n_star as u64;
    let rest = p - t as u64;
    let numer = if rest > outside {
        0u32.into()
    } else {
        binomial(n_star as u64, t as u64) * binomial(outside, rest)
    };
    Ok(ExactRational::new(numer, binomial(n, p)))
}

/// At least `t` (the scheme's threshold) drawn numbers fall in the pool.
pub fn prob_at_least_high_in_pool(scheme: &Scheme, n_star: u32) -> Result<ExactRational> {
    (scheme.t..=scheme.p)
        .map(|t| prob_winning_in_pool(scheme, n_star, t))
        .sum()
}

#[derive(Clone, Debug)]
pub struct MythReport {
    pub scheme: Scheme,
    pub n_star: u32,
    /// At least `t` winners inside the pool.
    pub pool: ExactRational,
    /// Every k-subset of the pool: `C(n*, k)` tickets.
    pub ticket_budget: u64,
    /// The same number of distinct tickets anywhere in the field, exact.
    pub full_field: Probability,
    /// The same, in the winner-power form used for published tables.
    pub full_field_winner_power: Probability,
}

impl MythReport {
    /// How many times likelier the full-field spend is to produce a high hit.
    pub fn advantage(&self) -> f64 {
        self.full_field.to_f64() / self.pool.to_f64()
    }
}

pub fn myth_comparison(scheme: &Scheme, n_star: u32) -> Result<MythReport> {
    check_pool(scheme, n_star)?;
    if n_star < scheme.k {
        return Err(Error::domain(format!(
            "pool of {n_star} numbers holds no {}-number ticket, so the budget is zero",
            scheme.k
        )));
    }
    let ticket_budget = binomial_u64(n_star as u64, scheme.k as u64)
        .ok_or_else(|| Error::resource("ticket budget exceeds 64 bits"))?;
    Ok(MythReport {
        scheme: *scheme,
        n_star,
        pool: prob_at_least_high_in_pool(scheme, n_star)?,
        ticket_budget,
        full_field: prob_at_least_one_high_hit(scheme, ticket_budget, TicketModel::Unique)?,
        full_field_winner_power: prob_at_least_one_high_hit_with(scheme, ticket_budget, Regime::WinnerPower)?,
    })
}

/// A covering design of the pool against distinct tickets over the field.
#[derive(Clone, Debug)]
pub struct PoolCoverReport {
    pub scheme: Scheme,
    pub n_star: u32,
    pub cover_size: u64,
    /// The pool cover guarantees a high hit exactly when `>= t` winners are in the pool.
    pub pool: ExactRational,
    pub full_field: Probability,
    pub full_field_winner_power: Probability,
}

pub fn pool_cover_comparison(scheme: &Scheme, n_star: u32, cover_size: u64) -> Result<PoolCoverReport> {
    check_pool(scheme, n_star)?;
    if n_star < scheme.k {
        return Err(Error::domain(format!(
            "a pool of {n_star} numbers cannot hold {}-number blocks",
            scheme.k
        )));
    }
    let pool_tickets = binomial(n_star as u64, scheme.k as u64).to_u64().unwrap_or(u64::MAX);
    if cover_size == 0 || cover_size > pool_tickets {
        return Err(Error::invalid(format!(
            "a cover of the pool needs between 1 and {pool_tickets} blocks, got {cover_size}"
        )));
    }
    Ok(PoolCoverReport {
        scheme: *scheme,
        n_star,
        cover_size,
        pool: prob_at_least_high_in_pool(scheme, n_star)?,
        full_field: prob_at_least_one_high_hit(scheme, cover_size, TicketModel::Unique)?,
        full_field_winner_power: prob_at_least_one_high_hit_with(scheme, cover_size, Regime::WinnerPower)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: Scheme = Scheme::LOTTO_6_49;

    #[test]
    fn pool_examples() {
        assert!(prob_winning_in_pool(&S, 49, 6).unwrap().is_one());
        assert!(prob_winning_in_pool(&S, 5, 6).unwrap().is_zero());
        assert_eq!(
            prob_winning_in_pool(&S, 10, 5).unwrap(),
            ExactRational::new(252u32 * 39, 13_983_816u32)
        );
        assert_eq!(prob_at_least_high_in_pool(&S, 10).unwrap().render_percent(3), "0.072");
        assert_eq!(prob_at_least_high_in_pool(&S, 25).unwrap().render_percent(3), "10.385");
        assert!(prob_at_least_high_in_pool(&S, 49).unwrap().is_one());
        assert!(prob_winning_in_pool(&S, 50, 5).is_err());
        assert!(prob_winning_in_pool(&S, 10, 7).is_err());
    }

    #[test]
    fn comparison_examples() {
        let a = myth_comparison(&S, 10).unwrap();
        assert_eq!(a.ticket_budget, 210);
        assert_eq!(a.full_field.render_percent(3), "0.388");
        assert_eq!(a.full_field_winner_power.render_percent(3), "0.388");
        let b = myth_comparison(&S, 25).unwrap();
        assert_eq!(b.ticket_budget, 177_100);
        assert_eq!(b.full_field.render_percent(3), "96.316");
        assert_eq!(b.full_field_winner_power.render_percent(3), "96.316");
        let all = myth_comparison(&S, 49).unwrap();
        assert_eq!(all.ticket_budget, 13_983_816);
        assert!(all.full_field.to_rational().is_one());
        assert!(matches!(myth_comparison(&S, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn pool_probability_is_monotone_and_normalized() {
        let mut last = ExactRational::zero();
        for n_star in 0..=49 {
            let cur = prob_at_least_high_in_pool(&S, n_star).unwrap();
            assert!(cur >= last, "n* = {n_star}");
            last = cur;
            let total: ExactRational = (0..=6)
                .map(|t| prob_winning_in_pool(&S, n_star, t).unwrap())
                .sum();
            assert!(total.is_one(), "n* = {n_star}");
            for t in n_star + 1..=6 {
                assert!(prob_winning_in_pool(&S, n_star, t).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn full_field_dominates_the_pool() {
        for n_star in 7..=47 {
            let r = myth_comparison(&S, n_star).unwrap();
            assert!(r.full_field.to_rational() > r.pool, "n* = {n_star}");
            assert!(r.advantage() > 1.0);
        }
        // One ticket either way at n* = 6.
        let r = myth_comparison(&S, 6).unwrap();
        assert_eq!(r.full_field.to_rational(), r.pool);
        // A 48-pool always holds five winners; the field falls short of 1 by ~6e-237.
        let r = myth_comparison(&S, 48).unwrap();
        assert!(r.pool.is_one());
        assert!(r.full_field.to_rational() < r.pool);
        assert!(r.full_field.to_rational().complement().to_f64() < 1e-236);
    }

    #[test]
    fn pool_cover_defaults() {
        assert_eq!(reference_pool_cover(10), Some(50));
        assert_eq!(reference_pool_cover(25), Some(9_321));
        assert_eq!(reference_pool_cover(11), None);
        let r = pool_cover_comparison(&S, 25, 9_321).unwrap();
        assert!(r.full_field.to_rational() > r.pool);
        let r = pool_cover_comparison(&S, 10, 50).unwrap();
        assert!(r.full_field.to_rational() > r.pool);
        assert!(pool_cover_comparison(&S, 10, 211).is_err());
        assert!(pool_cover_comparison(&S, 10, 0).is_err());
    }
}
