//! Exhaustive incentive checks.
//!
//! Both verifiers treat the mechanism as a black box mapping a bid vector to
//! an allocation and payments. Non-deviating bidders always report
//! truthfully.

use serde::Serialize;

use crate::auction::{AuctionOutcome, BidSpace, Orientation};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// What a mechanism returns for one bid vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Settlement<B> {
    pub allocated: Vec<bool>,
    pub payments: Vec<B>,
}

impl<B: Scalar, V> From<AuctionOutcome<B, V>> for Settlement<B> {
    fn from(out: AuctionOutcome<B, V>) -> Self {
        let n = out.trace.len() + out.allocation.len();
        let mut allocated = vec![false; n];
        for &i in &out.allocation {
            allocated[i] = true;
        }
        let payments = out.payments.unwrap_or_else(|| vec![B::zero(); n]);
        Settlement { allocated, payments }
    }
}

impl<B: Scalar> Settlement<B> {
    pub fn utility(&self, bidder: usize, value: &B, orientation: Orientation) -> B {
        if !self.allocated[bidder] {
            return B::zero();
        }
        let p = self.payments[bidder].clone();
        match orientation {
            Orientation::Procurement => p - value.clone(),
            Orientation::Selling => value.clone() - p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Maximum number of bid profiles the verifier may evaluate.
    pub max_profiles: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { max_profiles: 10_000_000 }
    }
}

/// A unilateral deviation that beats truthful reporting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Deviation<B> {
    pub bidder: usize,
    pub bid: B,
    pub truthful_utility: B,
    pub deviating_utility: B,
}

/// A joint deviation under which every coalition member strictly gains.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoalitionViolation<B> {
    pub members: Vec<usize>,
    pub bids: Vec<B>,
    pub truthful_utilities: Vec<B>,
    pub deviating_utilities: Vec<B>,
}

/// Truthful bids for every bidder.
pub fn truthful_profile<B: Scalar>(space: &BidSpace<B>, values: &[B], orientation: Orientation) -> Result<Vec<B>> {
    space.validate_values(values, orientation)?;
    Ok((0..values.len())
        .map(|i| space.truthful_bid(i, &values[i], orientation).expect("validated"))
        .collect())
}

fn check_budget(needed: u64, cfg: &VerifyConfig, what: &str) -> Result<()> {
    if needed > cfg.max_profiles {
        return Err(Error::BudgetExceeded {
            what: what.to_string(),
            needed,
            limit: cfg.max_profiles,
        });
    }
    Ok(())
}

/// Searches every unilateral deviation of every bidder.
pub fn verify_strategyproof<B, M>(
    mechanism: M,
    orientation: Orientation,
    values: &[B],
    space: &BidSpace<B>,
    cfg: &VerifyConfig,
) -> Result<Vec<Deviation<B>>>
where
    B: Scalar,
    M: Fn(&[B]) -> Result<Settlement<B>>,
{
    let truthful = truthful_profile(space, values, orientation)?;
    let needed = 1 + (0..values.len()).map(|i| space.levels(i).len() as u64).sum::<u64>();
    check_budget(needed, cfg, "strategy-proofness check")?;

    let base = mechanism(&truthful)?;
    let mut report = Vec::new();
    let mut bids = truthful.clone();
    for i in 0..values.len() {
        let honest = base.utility(i, &values[i], orientation);
        for b in space.levels(i) {
            if *b == truthful[i] {
                continue;
            }
            bids[i] = b.clone();
            let u = mechanism(&bids)?.utility(i, &values[i], orientation);
            if u > honest {
                report.push(Deviation {
                    bidder: i,
                    bid: b.clone(),
                    truthful_utility: honest.clone(),
                    deviating_utility: u,
                });
            }
        }
        bids[i] = truthful[i].clone();
    }
    Ok(report)
}

/// Searches every joint deviation of every coalition of size
/// `1..=max_coalition`.
pub fn verify_wgsp<B, M>(
    mechanism: M,
    orientation: Orientation,
    values: &[B],
    space: &BidSpace<B>,
    max_coalition: usize,
    cfg: &VerifyConfig,
) -> Result<Vec<CoalitionViolation<B>>>
where
    B: Scalar,
    M: Fn(&[B]) -> Result<Settlement<B>>,
{
    let truthful = truthful_profile(space, values, orientation)?;
    let n = values.len();
    let coalitions: Vec<Vec<usize>> = (1..=max_coalition.min(n))
        .flat_map(|size| combinations(n, size))
        .collect();
    let mut needed: u64 = 1;
    for c in &coalitions {
        let joint = c
            .iter()
            .try_fold(1u64, |acc, &i| acc.checked_mul(space.levels(i).len() as u64));
        needed = joint.and_then(|j| needed.checked_add(j)).unwrap_or(u64::MAX);
    }
    check_budget(needed, cfg, "coalition check")?;

    let base = mechanism(&truthful)?;
    let honest: Vec<B> = (0..n).map(|i| base.utility(i, &values[i], orientation)).collect();
    let mut report = Vec::new();
    for members in coalitions {
        let radices: Vec<usize> = members.iter().map(|&i| space.levels(i).len()).collect();
        let mut digits = vec![0usize; members.len()];
        let mut bids = truthful.clone();
        loop {
            for (slot, &i) in members.iter().enumerate() {
                bids[i] = space.levels(i)[digits[slot]].clone();
            }
            if members.iter().any(|&i| bids[i] != truthful[i]) {
                let out = mechanism(&bids)?;
                let gains: Vec<B> = members
                    .iter()
                    .map(|&i| out.utility(i, &values[i], orientation))
                    .collect();
                if members.iter().zip(&gains).all(|(&i, u)| *u > honest[i]) {
                    report.push(CoalitionViolation {
                        members: members.clone(),
                        bids: members.iter().map(|&i| bids[i].clone()).collect(),
                        truthful_utilities: members.iter().map(|&i| honest[i].clone()).collect(),
                        deviating_utilities: gains,
                    });
                }
            }
            if !advance(&mut digits, &radices) {
                break;
            }
        }
    }
    Ok(report)
}

/// Mixed-radix increment; false once every combination has been visited.
fn advance(digits: &mut [usize], radices: &[usize]) -> bool {
    for (d, &r) in digits.iter_mut().zip(radices) {
        *d += 1;
        if *d < r {
            return true;
        }
        *d = 0;
    }
    false
}

/// All `size`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}
