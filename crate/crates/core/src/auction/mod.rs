//! Deferred-acceptance auction engine.
//!
//! A DA auction starts with every bidder active and repeatedly rejects the
//! active bidder with the extremal score until no active bidder has a score
//! that would allow rejection. Scores may depend on a bidder's own bid and on
//! the bids of already rejected bidders, never on other active bids; the
//! [`Scorer`] trait enforces that structurally, since the engine only ever
//! hands a scorer the bid of the bidder being scored and the bids of bidders
//! at the moment they are rejected.
//!
//! Rejected bidders keep their rights (they form the solution of the
//! underlying optimization problem); the bidders left active at the end are
//! the ones who transact.

mod bids;
pub mod payment;
pub mod verify;

pub use bids::{BidProfile, BidSpace};
pub use payment::{
    allocated, compute_payment, compute_payment_scan, settle, verify_allocation_monotone,
    winning_levels, PaymentMethod,
};
pub use verify::{
    truthful_profile, verify_strategyproof, verify_wgsp, CoalitionViolation, Deviation,
    Settlement, VerifyConfig,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Score};

/// Direction of the auction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Reject the highest score; stop once every active score is 0. The
    /// auctioneer buys rights from the bidders left active.
    Procurement,
    /// Reject the lowest score; stop once every active score is `+∞`. The
    /// auctioneer sells to the bidders left active.
    Selling,
}

impl Orientation {
    /// Whether the loop should stop given this score (the score cannot
    /// trigger a rejection).
    fn is_terminal<V: Scalar>(self, score: &Score<V>) -> bool {
        match self {
            Orientation::Procurement => score.is_zero(),
            Orientation::Selling => score.is_infinite(),
        }
    }

    /// True if `a` should be rejected in preference to `b` (strictly).
    fn prefers<V: Scalar>(self, a: &Score<V>, b: &Score<V>) -> bool {
        let ord = a.cmp_total(b);
        match self {
            Orientation::Procurement => ord.is_gt(),
            Orientation::Selling => ord.is_lt(),
        }
    }
}

/// Scoring functions `s^A_i` together with the helper state they read.
///
/// `score` must be nondecreasing in `bid` and may only depend on the bidder,
/// its bid, and the history of `reject` calls.
pub trait Scorer<B> {
    type Value: Scalar;

    fn score(&self, bidder: usize, bid: &B) -> Score<Self::Value>;

    /// Called exactly once when `bidder` leaves the active set.
    fn reject(&mut self, bidder: usize, bid: &B);
}

/// A problem instance that knows how to build fresh scorers for itself.
pub trait ScoringRule<B> {
    type Scorer: Scorer<B>;

    fn bidders(&self) -> usize;

    fn orientation(&self) -> Orientation;

    /// A scorer with helper state initialised for the full bidder set.
    fn scorer(&self) -> Self::Scorer;
}

/// One step of the rejection trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Rejection<V> {
    pub bidder: usize,
    pub score: Score<V>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuctionOutcome<B, V> {
    /// Active bidders at termination, ascending.
    pub allocation: Vec<usize>,
    /// Rejected bidders in rejection order.
    pub trace: Vec<Rejection<V>>,
    /// Sum of bids over rejected bidders.
    pub retained_welfare: B,
    /// Threshold payments indexed by bidder; `None` until [`settle`] runs.
    pub payments: Option<Vec<B>>,
    /// Bidders whose winning set was not an interval of their bid space.
    pub flagged: Vec<usize>,
}

impl<B: Scalar, V> AuctionOutcome<B, V> {
    pub fn is_allocated(&self, bidder: usize) -> bool {
        self.allocation.binary_search(&bidder).is_ok()
    }

    /// Rejected bidders in rejection order.
    pub fn retained(&self) -> Vec<usize> {
        self.trace.iter().map(|r| r.bidder).collect()
    }

    pub fn retained_sorted(&self) -> Vec<usize> {
        let mut r = self.retained();
        r.sort_unstable();
        r
    }
}

/// Repeatedly rejects the worst-scoring active bidder until none is rejectable.
pub fn run_da_auction<B, S>(
    scorer: S,
    bids: &[B],
    orientation: Orientation,
) -> Result<AuctionOutcome<B, S::Value>>
where
    B: Scalar,
    S: Scorer<B>,
{
    run_inner(scorer, bids, orientation, None)
}

/// Like [`run_da_auction`], but every round also probes each active bidder
/// at every level of its bid space and fails on a monotonicity violation.
pub fn run_da_auction_checked<B, S>(
    scorer: S,
    space: &BidSpace<B>,
    bids: &[B],
    orientation: Orientation,
) -> Result<AuctionOutcome<B, S::Value>>
where
    B: Scalar,
    S: Scorer<B>,
{
    run_inner(scorer, bids, orientation, Some(space))
}

/// Convenience wrapper: fresh scorer from `rule`, then [`run_da_auction`].
pub fn run_rule<B, R>(rule: &R, bids: &[B]) -> Result<AuctionOutcome<B, <R::Scorer as Scorer<B>>::Value>>
where
    B: Scalar,
    R: ScoringRule<B>,
{
    if bids.len() != rule.bidders() {
        return Err(Error::InvalidBids(format!(
            "expected {} bids, got {}",
            rule.bidders(),
            bids.len()
        )));
    }
    run_da_auction(rule.scorer(), bids, rule.orientation())
}

fn run_inner<B, S>(
    mut scorer: S,
    bids: &[B],
    orientation: Orientation,
    probe: Option<&BidSpace<B>>,
) -> Result<AuctionOutcome<B, S::Value>>
where
    B: Scalar,
    S: Scorer<B>,
{
    let n = bids.len();
    let mut active = vec![true; n];
    let mut trace = Vec::new();
    let mut retained_welfare = B::zero();

    loop {
        let mut best: Option<(usize, Score<S::Value>)> = None;
        for i in (0..n).filter(|&i| active[i]) {
            let s = scorer.score(i, &bids[i]);
            if s.is_negative() {
                return Err(Error::Fault(format!("negative score {s} for bidder {i}")));
            }
            if let Some(space) = probe {
                check_monotone(&scorer, space, i)?;
            }
            if orientation.is_terminal(&s) {
                continue;
            }
            // strict preference keeps the lowest index on ties
            if best.as_ref().map_or(true, |(_, b)| orientation.prefers(&s, b)) {
                best = Some((i, s));
            }
        }
        let Some((i, s)) = best else { break };
        active[i] = false;
        scorer.reject(i, &bids[i]);
        retained_welfare = retained_welfare + bids[i].clone();
        trace.push(Rejection { bidder: i, score: s });
    }

    Ok(AuctionOutcome {
        allocation: (0..n).filter(|&i| active[i]).collect(),
        trace,
        retained_welfare,
        payments: None,
        flagged: Vec::new(),
    })
}

fn check_monotone<B: Scalar, S: Scorer<B>>(scorer: &S, space: &BidSpace<B>, bidder: usize) -> Result<()> {
    let levels = space.levels(bidder);
    let mut prev: Option<(&B, Score<S::Value>)> = None;
    for b in levels {
        let s = scorer.score(bidder, b);
        if let Some((pb, ps)) = &prev {
            if s.cmp_total(ps).is_lt() {
                return Err(Error::MonotonicityViolation {
                    bidder,
                    lower_bid: pb.to_string(),
                    higher_bid: b.to_string(),
                });
            }
        }
        prev = Some((b, s));
    }
    Ok(())
}
