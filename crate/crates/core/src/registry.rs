//! Mechanisms by problem name, with a uniform exact-bid interface.

use serde::{Deserialize, Serialize};

use crate::auction::{settle, run_rule, AuctionOutcome, BidSpace, Orientation, PaymentMethod, ScoringRule, Settlement};
use crate::error::Result;
use crate::io::{format_rational, Mechanism, Problem};
use crate::scalar::{Scalar, Score};
use crate::Rational;

/// Looks up a problem by its registry name.
pub fn lookup(name: &str) -> Result<Problem> {
    name.parse()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub bidder: usize,
    /// Score at rejection; `"inf"` for an infinite score.
    pub score: String,
}

/// Outcome of one run with scores rendered as text.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub allocation: Vec<usize>,
    pub trace: Vec<TraceEntry>,
    pub retained_welfare: Rational,
    pub payments: Option<Vec<Rational>>,
    pub flagged: Vec<usize>,
}

impl RunSummary {
    /// Rejected bidders in rejection order.
    pub fn retained(&self) -> Vec<usize> {
        self.trace.iter().map(|t| t.bidder).collect()
    }
}

fn render_score<V: Scalar>(s: &Score<V>, exact: impl Fn(&V) -> String) -> String {
    match s {
        Score::Finite(v) => exact(v),
        Score::Infinite => "inf".into(),
    }
}

fn summarize<V: Scalar>(out: AuctionOutcome<Rational, V>, exact: impl Fn(&V) -> String) -> RunSummary {
    RunSummary {
        allocation: out.allocation,
        trace: out
            .trace
            .iter()
            .map(|r| TraceEntry { bidder: r.bidder, score: render_score(&r.score, &exact) })
            .collect(),
        retained_welfare: out.retained_welfare,
        payments: out.payments,
        flagged: out.flagged,
    }
}

fn execute<R>(rule: &R, space: &BidSpace<Rational>, bids: &[Rational], payments: Option<PaymentMethod>) -> Result<AuctionOutcome<Rational, <R::Scorer as crate::auction::Scorer<Rational>>::Value>>
where
    R: ScoringRule<Rational>,
{
    match payments {
        Some(method) => settle(rule, space, bids, method),
        None => run_rule(rule, bids),
    }
}

impl Mechanism {
    pub fn problem(&self) -> Problem {
        match self {
            Mechanism::Spectrum(_) => Problem::Spectrum,
            Mechanism::Network(_) => Problem::Network,
            Mechanism::Setcover(_) => Problem::Setcover,
        }
    }

    pub fn orientation(&self) -> Orientation {
        self.problem().orientation()
    }

    /// Runs the auction, with threshold payments when `payments` is set.
    pub fn run(&self, space: &BidSpace<Rational>, bids: &[Rational], payments: Option<PaymentMethod>) -> Result<RunSummary> {
        Ok(match self {
            Mechanism::Spectrum(m) => summarize(execute(m, space, bids, payments)?, format_rational),
            Mechanism::Network(m) => summarize(execute(m, space, bids, payments)?, |v: &f64| v.to_string()),
            Mechanism::Setcover(m) => summarize(execute(m, space, bids, payments)?, format_rational),
        })
    }

    /// Allocation and threshold payments for one bid vector.
    pub fn settlement(&self, space: &BidSpace<Rational>, bids: &[Rational]) -> Result<Settlement<Rational>> {
        Ok(match self {
            Mechanism::Spectrum(m) => settle(m, space, bids, PaymentMethod::BinarySearch)?.into(),
            Mechanism::Network(m) => settle(m, space, bids, PaymentMethod::BinarySearch)?.into(),
            Mechanism::Setcover(m) => settle(m, space, bids, PaymentMethod::BinarySearch)?.into(),
        })
    }

    /// The mechanism as a black box for the incentive verifiers.
    pub fn as_fn<'a>(&'a self, space: &'a BidSpace<Rational>) -> impl Fn(&[Rational]) -> Result<Settlement<Rational>> + Sync + 'a {
        move |bids| self.settlement(space, bids)
    }
}
