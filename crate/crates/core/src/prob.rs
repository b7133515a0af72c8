//! Closed-form probabilities for single tickets and ticket portfolios.
//!
//! A *high hit* is a ticket sharing at least `t` numbers with the draw. The
//! high levels split into the *near* levels `t..p` and the *top* level `p`
//! (the jackpot). For the 6/49 scheme with `t = 5` these are the 258
//! five-hit tickets and the single six-hit ticket.
//!
//! Portfolios come in two models. With [`TicketModel::Unique`] the `v`
//! tickets are pairwise distinct, so hit counts are (multivariate)
//! hypergeometric. With [`TicketModel::Doubles`] tickets are drawn
//! independently and miss probabilities are plain powers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combin::{binomial, binomial_ratio, binomial_u64, ratio_no_overlap};
use crate::error::{Error, Result};
use crate::extended::ExtReal;
use crate::probability::Probability;
use crate::rational::ExactRational;

/// Powers with exponents up to this stay exact rationals.
pub const EXACT_POWER_LIMIT: u64 = 4096;

/// Largest number of small factors an exact product form may touch.
pub const FACTOR_LIMIT: u64 = 200_000;

/// `(n, k, p, t)`: pool size, numbers per ticket, numbers drawn, hit threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scheme {
    pub n: u32,
    pub k: u32,
    pub p: u32,
    pub t: u32,
}

impl Scheme {
    /// The 6/49 lottery with a five-hit threshold.
    pub const LOTTO_6_49: Scheme = Scheme {
        n: 49,
        k: 6,
        p: 6,
        t: 5,
    };

    /// Checks `t <= min(p, k) <= max(p, k) <= n` and positive sizes.
    pub fn new(n: u32, k: u32, p: u32, t: u32) -> Result<Self> {
        if n == 0 || k == 0 || p == 0 {
            return Err(Error::invalid(format!(
                "scheme ({n}, {k}, {p}, {t}) needs positive n, k, p"
            )));
        }
        if t > p.min(k) || p.max(k) > n {
            return Err(Error::invalid(format!(
                "scheme ({n}, {k}, {p}, {t}) violates t <= min(p, k) <= max(p, k) <= n"
            )));
        }
        Ok(Scheme { n, k, p, t })
    }

    /// Number of distinct tickets, `C(n, k)`.
    pub fn ticket_space(&self) -> BigUint {
        binomial(self.n as u64, self.k as u64)
    }

    /// Hit counts below presume tickets and draws have the same size.
    fn require_square(&self) -> Result<()> {
        if self.k != self.p {
            return Err(Error::Unsupported(format!(
                "hit counts need k = p, got k = {} and p = {}",
                self.k, self.p
            )));
        }
        Ok(())
    }

    /// `N = C(n, p)` as a machine integer, for product forms.
    pub fn total_u64(&self) -> Result<u64> {
        self.require_square()?;
        binomial_u64(self.n as u64, self.p as u64)
            .ok_or_else(|| Error::resource(format!("C({}, {}) exceeds 64 bits", self.n, self.p)))
    }

    fn level_count_u64(&self, hits: u32) -> Result<u64> {
        hit_combinations(self, hits)?
            .to_u64()
            .ok_or_else(|| Error::resource("hit count exceeds 64 bits"))
    }

    /// `(M_near, M_top)`: tickets hitting `t..p` and exactly `p` numbers.
    pub fn high_level_counts(&self) -> Result<(u64, u64)> {
        let mut near = 0u64;
        for hits in self.t..self.p {
            near += self.level_count_u64(hits)?;
        }
        Ok((near, self.level_count_u64(self.p)?))
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.n, self.k, self.p, self.t)
    }
}

/// Parses `n,k,p,t`, or `n,k,p` with `t = p - 1`.
impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::invalid(format!("scheme `{s}`: {e}")))?;
        match parts[..] {
            [n, k, p] => Scheme::new(n, k, p, p.saturating_sub(1)),
            [n, k, p, t] => Scheme::new(n, k, p, t),
            _ => Err(Error::invalid(format!(
                "scheme `{s}` must be n,k,p or n,k,p,t"
            ))),
        }
    }
}

/// How the probability of no high hit is evaluated for unique tickets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `C(N - S, v) / C(N, v)` exactly.
    Exact,
    /// `(1 - S/N)^v`; accurate for few tickets, identical to the doubles model.
    TicketPower,
    /// `(1 - v/N)^S`; accurate when `S` is small next to `N - v`.
    WinnerPower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TicketModel {
    /// Pairwise distinct tickets.
    Unique,
    /// Independent tickets; repeats allowed.
    Doubles,
}

/// One row of the single-ticket hit table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitLevel {
    pub hits: u32,
    pub count: BigUint,
    pub probability: ExactRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitSpectrum {
    pub scheme: Scheme,
    pub total: BigUint,
    pub levels: Vec<HitLevel>,
}

/// `M_t = C(p, t) C(n - p, p - t)`: tickets sharing exactly `t` numbers with a draw.
pub fn hit_combinations(scheme: &Scheme, t: u32) -> Result<BigUint> {
    scheme.require_square()?;
    if t > scheme.p {
        return Err(Error::invalid(format!("t = {t} exceeds p = {}", scheme.p)));
    }
    let (n, p, t) = (scheme.n as u64, scheme.p as u64, t as u64);
    Ok(binomial(p, t) * binomial(n - p, p - t))
}

pub fn hit_spectrum(scheme: &Scheme) -> Result<HitSpectrum> {
    scheme.require_square()?;
    let total = binomial(scheme.n as u64, scheme.p as u64);
    let levels = (0..=scheme.p)
        .map(|hits| {
            let count = hit_combinations(scheme, hits)?;
            let probability = ExactRational::new(count.clone(), total.clone());
            Ok(HitLevel {
                hits,
                count,
                probability,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HitSpectrum {
        scheme: *scheme,
        total,
        levels,
    })
}

fn check_unique_budget(v: u64, total: u64) -> Result<()> {
    if v > total {
        return Err(Error::domain(format!(
            "{v} unique tickets exceed the {total} distinct tickets"
        )));
    }
    Ok(())
}

fn check_factor_budget(factors: u64) -> Result<()> {
    if factors > FACTOR_LIMIT {
        return Err(Error::resource(format!(
            "exact product form needs {factors} factors (limit {FACTOR_LIMIT})"
        )));
    }
    Ok(())
}

/// Multivariate hypergeometric mass: from `total` items split into disjoint
/// marked groups of sizes `M_j` (plus the unmarked rest), a uniform
/// `v`-subset contains exactly `m_j` items of group `j`.
///
/// `prod_j C(M_j, m_j) * C(total - sum M, v - sum m) / C(total, v)`.
pub fn pmf_multilevel(total: u64, groups: &[(u64, u64)], v: u64) -> Result<ExactRational> {
    check_unique_budget(v, total)?;
    let marked: u64 = groups.iter().map(|g| g.0).sum();
    let taken: u64 = groups.iter().map(|g| g.1).sum();
    if marked > total {
        return Err(Error::invalid("marked groups exceed the population"));
    }
    if let Some(&(size, m)) = groups.iter().find(|g| g.1 > g.0) {
        return Err(Error::domain(format!("cannot take {m} from a group of {size}")));
    }
    if taken > v {
        return Err(Error::domain(format!("{taken} marked items exceed v = {v}")));
    }
    // Single group: swap the roles of v and M when v is the smaller one.
    if let [(size, m)] = groups {
        if v < *size {
            check_factor_budget(v + m)?;
            let head = ExactRational::from_integer(binomial(v, *m));
            return Ok(head * binomial_ratio(total, v, *size, *m)?);
        }
    }
    check_factor_budget(marked + taken)?;
    let mut r = binomial_ratio(total, marked, v, taken)?;
    for &(size, m) in groups {
        r = r * ExactRational::from_integer(binomial(size, m));
    }
    Ok(r)
}

/// Probability that exactly `m` of `v` unique tickets have exactly `t` hits.
pub fn pmf_exact_hits(scheme: &Scheme, t: u32, m: u64, v: u64) -> Result<Probability> {
    let total = scheme.total_u64()?;
    check_unique_budget(v, total)?;
    let level = scheme.level_count_u64(t)?;
    if m > level.min(v) {
        return Err(Error::domain(format!(
            "m = {m} exceeds min(M_{t} = {level}, v = {v})"
        )));
    }
    Ok(Probability::Exact(pmf_multilevel(total, &[(level, m)], v)?))
}

/// Probability that `v` unique tickets contain exactly `m_near` near-level
/// and `m_top` top-level tickets.
pub fn pmf_joint_high_hits(scheme: &Scheme, m_near: u64, m_top: u64, v: u64) -> Result<Probability> {
    let total = scheme.total_u64()?;
    let (near, top) = scheme.high_level_counts()?;
    if m_near > near || m_top > top || m_near + m_top > v {
        return Err(Error::domain(format!(
            "need m_near <= {near}, m_top <= {top}, m_near + m_top <= v = {v}"
        )));
    }
    let groups = [(near, m_near), (top, m_top)];
    Ok(Probability::Exact(pmf_multilevel(total, &groups, v)?))
}

/// `base^exp`, exact for small exponents and extended precision otherwise.
fn power(base: ExactRational, exp: u64) -> Probability {
    if exp <= EXACT_POWER_LIMIT {
        Probability::Exact(base.pow(exp))
    } else {
        Probability::Approx(ExtReal::pow_rational(&base, exp))
    }
}

/// Probability that none of `v` tickets is a high hit.
pub fn prob_no_high_hit(scheme: &Scheme, v: u64, regime: Regime) -> Result<Probability> {
    let total = scheme.total_u64()?;
    let (near, top) = scheme.high_level_counts()?;
    let winners = near + top;
    match regime {
        Regime::Exact => {
            check_unique_budget(v, total)?;
            check_factor_budget(winners)?;
            Ok(Probability::Exact(ratio_no_overlap(total, winners, v)?))
        }
        Regime::TicketPower => Ok(power(
            ExactRational::new(total - winners, total),
            v,
        )),
        Regime::WinnerPower => {
            check_unique_budget(v, total)?;
            Ok(power(ExactRational::new(total - v, total), winners))
        }
    }
}

/// At least one high hit among `v` tickets. Unique tickets use the exact form.
pub fn prob_at_least_one_high_hit(scheme: &Scheme, v: u64, model: TicketModel) -> Result<Probability> {
    let regime = match model {
        TicketModel::Unique => Regime::Exact,
        TicketModel::Doubles => Regime::TicketPower,
    };
    prob_at_least_one_high_hit_with(scheme, v, regime)
}

/// At least one high hit, evaluated under an explicit regime.
pub fn prob_at_least_one_high_hit_with(scheme: &Scheme, v: u64, regime: Regime) -> Result<Probability> {
    Ok(prob_no_high_hit(scheme, v, regime)?.complement())
}

/// Jackpot probability: `v / N` for unique tickets, `1 - (1 - 1/N)^v` with doubles.
pub fn prob_jackpot(scheme: &Scheme, v: u64, model: TicketModel) -> Result<Probability> {
    let total = scheme.total_u64()?;
    let top = scheme.level_count_u64(scheme.p)?;
    match model {
        TicketModel::Unique => {
            check_unique_budget(v, total)?;
            // 1 - C(N - M_p, v)/C(N, v); with M_p = 1 this is v/N.
            if top == 1 {
                Ok(Probability::Exact(ExactRational::new(v, total)))
            } else {
                Ok(Probability::Exact(ratio_no_overlap(total, top, v)?.complement()))
            }
        }
        TicketModel::Doubles => {
            Ok(power(ExactRational::new(total - top, total), v).complement())
        }
    }
}

/// At least `s` high-hit tickets among `v` unique tickets:
/// `1 - sum over m_near + m_top < s` of the joint mass.
pub fn prob_at_least_s_high_hits(scheme: &Scheme, s: u64, v: u64) -> Result<Probability> {
    let total = scheme.total_u64()?;
    check_unique_budget(v, total)?;
    let (near, top) = scheme.high_level_counts()?;
    if s > near + top {
        return Err(Error::domain(format!(
            "s = {s} exceeds the {} high-hit tickets",
            near + top
        )));
    }
    let mut below = ExactRational::zero();
    for m_top in 0..=top.min(s.saturating_sub(1)) {
        for m_near in 0..s - m_top {
            if m_near > near || m_near + m_top > v {
                break;
            }
            below = below + pmf_multilevel(total, &[(near, m_near), (top, m_top)], v)?;
        }
    }
    Ok(Probability::Exact(below.complement()))
}

impl HitSpectrum {
    /// `sum_t M_t`, equal to `total` for every valid scheme.
    pub fn count_sum(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::zero(), |acc, l| acc + &l.count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: u64 = 13_983_816;

    fn lotto() -> Scheme {
        Scheme::LOTTO_6_49
    }

    #[test]
    fn scheme_validation() {
        assert!(Scheme::new(49, 6, 6, 5).is_ok());
        assert!(Scheme::new(49, 6, 6, 7).is_err());
        assert!(Scheme::new(5, 6, 6, 5).is_err());
        assert!(Scheme::new(0, 6, 6, 5).is_err());
        assert_eq!("49,6,6".parse::<Scheme>().unwrap(), lotto());
        assert_eq!("10, 4, 4, 3".parse::<Scheme>().unwrap(), Scheme::new(10, 4, 4, 3).unwrap());
        assert!("49,6".parse::<Scheme>().is_err());
        assert!("49,x,6".parse::<Scheme>().is_err());
    }

    #[test]
    fn hit_counts_for_6_49() {
        let s = lotto();
        assert_eq!(hit_combinations(&s, 5).unwrap(), BigUint::from(258u32));
        assert_eq!(hit_combinations(&s, 6).unwrap(), BigUint::from(1u32));
        assert_eq!(hit_combinations(&s, 4).unwrap(), BigUint::from(13_545u32));
        assert!(hit_combinations(&s, 7).is_err());
        let unequal = Scheme::new(49, 7, 6, 5).unwrap();
        assert!(matches!(hit_combinations(&unequal, 5), Err(Error::Unsupported(_))));
        assert_eq!(s.high_level_counts().unwrap(), (258, 1));
    }

    #[test]
    fn spectrum_table() {
        let spectrum = hit_spectrum(&lotto()).unwrap();
        let counts: Vec<u64> = spectrum.levels.iter().map(|l| l.count.to_u64().unwrap()).collect();
        assert_eq!(counts, [6_096_454, 5_775_588, 1_851_150, 246_820, 13_545, 258, 1]);
        assert_eq!(spectrum.total, BigUint::from(N));
        assert_eq!(spectrum.levels[3].probability.render_percent(3), "1.765");
    }

    #[test]
    fn spectrum_sums_exactly_for_small_schemes() {
        for n in 1..=60u32 {
            for p in 1..=n.min(8) {
                let s = Scheme::new(n, p, p, 0).unwrap();
                let spectrum = hit_spectrum(&s).unwrap();
                assert_eq!(spectrum.count_sum(), spectrum.total);
                let psum: ExactRational = spectrum.levels.iter().map(|l| l.probability.clone()).sum();
                assert!(psum.is_one());
            }
        }
    }

    #[test]
    fn single_ticket_pmf_is_hit_fraction() {
        let p = pmf_exact_hits(&lotto(), 5, 1, 1).unwrap();
        assert_eq!(p, Probability::Exact(ExactRational::new(258u32, N)));
        let j = pmf_joint_high_hits(&lotto(), 1, 0, 1).unwrap();
        assert_eq!(j, Probability::Exact(ExactRational::new(258u32, N)));
        let j = pmf_joint_high_hits(&lotto(), 0, 1, 1).unwrap();
        assert_eq!(j, Probability::Exact(ExactRational::new(1u32, N)));
    }

    #[test]
    fn exactly_one_five_hit_with_60k_tickets() {
        let p = pmf_exact_hits(&lotto(), 5, 1, 60_000).unwrap().to_f64();
        assert!((p - 0.37).abs() <= 0.005, "{p}");
    }

    #[test]
    fn buying_the_pot() {
        let p = pmf_exact_hits(&lotto(), 6, 0, N).unwrap();
        assert!(p.exact().unwrap().is_zero());
        assert!(prob_jackpot(&lotto(), N, TicketModel::Unique).unwrap().exact().unwrap().is_one());
        assert!(prob_at_least_one_high_hit(&lotto(), N, TicketModel::Unique)
            .unwrap()
            .exact()
            .unwrap()
            .is_one());
        assert!(prob_jackpot(&lotto(), N + 1, TicketModel::Unique).is_err());
    }

    #[test]
    fn pmf_normalizes_on_mini_schemes() {
        for (n, p) in [(10u32, 4u32), (9, 3), (8, 5), (7, 2)] {
            let s = Scheme::new(n, p, p, 0).unwrap();
            let total = s.total_u64().unwrap();
            assert!(total <= 1000);
            for t in 0..=p {
                let level = s.level_count_u64(t).unwrap();
                for v in [1, total / 3, total / 2, total] {
                    let sum: ExactRational = (0..=level.min(v))
                        .map(|m| pmf_exact_hits(&s, t, m, v).unwrap().exact().unwrap().clone())
                        .sum();
                    assert!(sum.is_one(), "scheme {s} t={t} v={v}");
                }
            }
        }
    }

    #[test]
    fn joint_pmf_normalizes() {
        let s = Scheme::new(10, 4, 4, 3).unwrap();
        let (near, top) = s.high_level_counts().unwrap();
        assert_eq!((near, top), (24, 1));
        let v = 100;
        let mut sum = ExactRational::zero();
        for m_top in 0..=top {
            for m_near in 0..=near {
                if m_near + m_top <= v {
                    sum = sum + pmf_joint_high_hits(&s, m_near, m_top, v).unwrap().exact().unwrap().clone();
                }
            }
        }
        assert!(sum.is_one());
        assert_eq!(
            pmf_joint_high_hits(&lotto(), 0, 0, 0).unwrap(),
            Probability::one()
        );
    }

    #[test]
    fn joint_zero_matches_no_overlap_ratio() {
        for v in [0u64, 1, 1000, 142_361] {
            let j = pmf_joint_high_hits(&lotto(), 0, 0, v).unwrap();
            let r = ratio_no_overlap(N, 259, v).unwrap();
            assert_eq!(j, Probability::Exact(r));
        }
    }

    #[test]
    fn no_high_hit_regimes() {
        assert_eq!(prob_no_high_hit(&lotto(), 0, Regime::Exact).unwrap(), Probability::one());
        let approx = prob_at_least_one_high_hit_with(&lotto(), 142_361, Regime::WinnerPower).unwrap();
        assert_eq!(approx.render_percent(3), "92.937");
        assert!(approx.is_exact());
        let e7 = prob_no_high_hit(&lotto(), 100_000, Regime::TicketPower).unwrap();
        assert!(!e7.is_exact());
    }

    #[test]
    fn winner_power_overestimates_the_miss_probability() {
        // Each exact factor (N-v-j)/(N-j) is at most 1 - v/N, so the
        // (1 - v/N)^S form can only sit above the exact value.
        for v in [1u64, 1000, 10_000, 100_000, 142_361, 325_205, 500_000] {
            let exact = prob_no_high_hit(&lotto(), v, Regime::Exact).unwrap().to_rational();
            let approx = prob_no_high_hit(&lotto(), v, Regime::WinnerPower).unwrap().to_rational();
            assert!(exact <= approx, "v = {v}");
            assert!(approx.abs_diff(&exact).to_f64() < 3e-6, "v = {v}");
        }
    }

    #[test]
    fn ticket_power_overestimates_the_miss_probability() {
        // Likewise each factor (N-S-i)/(N-i) is at most 1 - S/N.
        for v in [1u64, 1000, 4096, 10_000, 100_000] {
            let exact = prob_no_high_hit(&lotto(), v, Regime::Exact).unwrap();
            let approx = prob_no_high_hit(&lotto(), v, Regime::TicketPower).unwrap();
            assert!(exact.to_rational() <= approx.to_rational(), "v = {v}");
        }
        let gap = |v| {
            let e = prob_no_high_hit(&lotto(), v, Regime::Exact).unwrap();
            e.abs_diff(&prob_no_high_hit(&lotto(), v, Regime::TicketPower).unwrap())
        };
        assert!(gap(10_000) > 5e-5 && gap(100_000) > 1e-3);
    }

    #[test]
    fn table_two_values_in_both_regimes() {
        let expected = [
            (1u64, "0.002"),
            (10, "0.019"),
            (100, "0.185"),
            (1_000, "1.835"),
            (10_000, "16.913"),
            (100_000, "84.414"),
            (300_000, "99.636"),
            (500_000, "99.992"),
        ];
        for (v, pct) in expected {
            for regime in [Regime::WinnerPower, Regime::Exact] {
                let p = prob_at_least_one_high_hit_with(&lotto(), v, regime).unwrap();
                assert_eq!(p.render_percent(3), pct, "v = {v}, {regime:?}");
            }
        }
    }

    #[test]
    fn jackpot_models() {
        let u = prob_jackpot(&lotto(), 5_000_000, TicketModel::Unique).unwrap();
        assert_eq!(u.render_percent(3), "35.756");
        let d = prob_jackpot(&lotto(), 5_000_000, TicketModel::Doubles).unwrap();
        assert_eq!(d.render_percent(3), "30.062");
        assert!(!d.is_exact());
        // doubles allows more tickets than distinct combinations
        assert!(prob_jackpot(&lotto(), 2 * N, TicketModel::Doubles).is_ok());
    }

    #[test]
    fn unique_jackpot_beats_doubles() {
        let s = Scheme::new(12, 3, 3, 2).unwrap();
        let total = s.total_u64().unwrap();
        for v in 1..total {
            let u = prob_jackpot(&s, v, TicketModel::Unique).unwrap().to_rational();
            let d = prob_jackpot(&s, v, TicketModel::Doubles).unwrap().to_rational();
            assert!(u > d || (v == 1 && u == d), "v = {v}");
        }
        for v in [1u64, 2, 100, 10_000, 5_000_000] {
            let u = prob_jackpot(&lotto(), v, TicketModel::Unique).unwrap().to_rational();
            let d = prob_jackpot(&lotto(), v, TicketModel::Doubles).unwrap().to_rational();
            assert!(u > d || (v == 1 && u == d), "v = {v}");
        }
    }

    #[test]
    fn portfolio_probabilities_are_monotone() {
        let s = Scheme::new(10, 4, 4, 3).unwrap();
        let total = s.total_u64().unwrap();
        for model in [TicketModel::Unique, TicketModel::Doubles] {
            let mut prev_one = ExactRational::zero();
            let mut prev_jack = ExactRational::zero();
            for v in 0..=total {
                let one = prob_at_least_one_high_hit(&s, v, model).unwrap().to_rational();
                let jack = prob_jackpot(&s, v, model).unwrap().to_rational();
                assert!(one >= prev_one && jack >= prev_jack);
                prev_one = one;
                prev_jack = jack;
            }
        }
    }

    #[test]
    fn at_least_s() {
        let s1 = prob_at_least_s_high_hits(&lotto(), 1, 10_000).unwrap();
        assert_eq!(s1, prob_at_least_one_high_hit(&lotto(), 10_000, TicketModel::Unique).unwrap());
        assert_eq!(prob_at_least_s_high_hits(&lotto(), 0, 10).unwrap(), Probability::one());
        let s6 = prob_at_least_s_high_hits(&lotto(), 6, 325_205).unwrap().to_f64();
        assert!((0.55..=0.57).contains(&s6), "{s6}");
        assert!(prob_at_least_s_high_hits(&lotto(), 260, 10).is_err());
    }

    fn small_scheme() -> impl Strategy<Value = Scheme> {
        (7u32..=18)
            .prop_flat_map(|n| (Just(n), 2..=n.min(6) - 1))
            .prop_flat_map(|(n, p)| (Just(n), Just(p), 1..=p))
            .prop_map(|(n, p, t)| Scheme::new(n, p, p, t).unwrap())
    }

    fn exact(p: Probability) -> ExactRational {
        p.exact().cloned().expect("exact for small schemes")
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn miss_probability_is_monotone_and_bounded_by_both_powers(s in small_scheme(), a in 0u64..60, b in 0u64..60) {
            let total = s.total_u64().unwrap();
            let (lo, hi) = (a.min(b).min(total), a.max(b).min(total));
            let e_lo = exact(prob_no_high_hit(&s, lo, Regime::Exact).unwrap());
            let e_hi = exact(prob_no_high_hit(&s, hi, Regime::Exact).unwrap());
            prop_assert!(e_hi <= e_lo);
            prop_assert!(e_lo <= ExactRational::one());
            let wp = prob_no_high_hit(&s, hi, Regime::WinnerPower).unwrap().to_rational();
            let tp = prob_no_high_hit(&s, hi, Regime::TicketPower).unwrap().to_rational();
            prop_assert!(e_hi <= wp);
            prop_assert!(e_hi <= tp);
        }

        #[test]
        fn exact_hit_counts_form_a_distribution(s in small_scheme(), v in 0u64..25, level in 0u32..6) {
            let hits = level.min(s.p);
            let v = v.min(s.total_u64().unwrap());
            let m_t = hit_combinations(&s, hits).unwrap().to_u64().unwrap();
            let sum: ExactRational = (0..=v.min(m_t)).map(|m| exact(pmf_exact_hits(&s, hits, m, v).unwrap())).sum();
            prop_assert_eq!(sum, ExactRational::one());
        }

        #[test]
        fn distinct_tickets_never_lose_the_jackpot_race(s in small_scheme(), v in 1u64..60) {
            let v = v.min(s.total_u64().unwrap());
            let unique = prob_jackpot(&s, v, TicketModel::Unique).unwrap().to_rational();
            let doubles = prob_jackpot(&s, v, TicketModel::Doubles).unwrap().to_rational();
            prop_assert!(doubles <= unique);
        }
    }
}
