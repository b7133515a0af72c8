//! A design's guarantee against the same number of random distinct tickets.

use crate::combin::binomial_u64;
use crate::design::DesignKind;
use crate::error::Result;
use crate::prob::{
    prob_at_least_one_high_hit, prob_at_least_one_high_hit_with, prob_at_least_s_high_hits, prob_jackpot, Regime,
    Scheme, TicketModel,
};
use crate::probability::Probability;

/// Block counts of reference 6/49 designs: the published lower bound on the
/// lottery number, a lottery design from the literature, and a (49, 6, 5)
/// covering design meeting the Schonheim bound.
pub const REFERENCE_BLOCK_COUNTS: [(&str, u64, Guarantee); 3] = [
    ("lottery number lower bound L(49,6,6,5)", 62_151, Guarantee::Lottery),
    ("lottery design LD(49,6,6,5)", 142_361, Guarantee::Lottery),
    ("covering design C(49,6,5)", 325_205, Guarantee::Covering),
];

/// What a valid design of the given kind promises for every draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guarantee {
    /// At least one ticket with `t` or more hits.
    Lottery,
    /// Every t-subset of the draw inside some ticket, hence at least one
    /// high hit; the random baseline is also asked for `C(p, t)` of them.
    Covering,
}

impl Guarantee {
    pub fn of(kind: &DesignKind) -> Self {
        if kind.is_covering() {
            Guarantee::Covering
        } else {
            Guarantee::Lottery
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub label: String,
    pub blocks: u64,
    pub guarantee: Guarantee,
    /// Random distinct tickets: at least one high hit, exact.
    pub at_least_one: Probability,
    /// The same in the winner-power form used for published figures.
    pub at_least_one_winner_power: Probability,
    pub jackpot: Probability,
    /// For covering designs: at least `C(p, t)` high-hit tickets.
    pub at_least_s: Option<(u64, Probability)>,
}

pub fn design_vs_random(scheme: &Scheme, label: impl Into<String>, blocks: u64, guarantee: Guarantee) -> Result<BenchRow> {
    let at_least_s = match guarantee {
        Guarantee::Lottery => None,
        Guarantee::Covering => {
            let s = binomial_u64(scheme.p as u64, scheme.t as u64).expect("small binomial");
            Some((s, prob_at_least_s_high_hits(scheme, s, blocks)?))
        }
    };
    Ok(BenchRow {
        label: label.into(),
        blocks,
        guarantee,
        at_least_one: prob_at_least_one_high_hit(scheme, blocks, TicketModel::Unique)?,
        at_least_one_winner_power: prob_at_least_one_high_hit_with(scheme, blocks, Regime::WinnerPower)?,
        jackpot: prob_jackpot(scheme, blocks, TicketModel::Unique)?,
        at_least_s,
    })
}

/// The reference rows for the 6/49 scheme.
pub fn reference_table() -> Result<Vec<BenchRow>> {
    REFERENCE_BLOCK_COUNTS
        .iter()
        .map(|&(label, v, g)| design_vs_random(&Scheme::LOTTO_6_49, label, v, g))
        .collect()
}
