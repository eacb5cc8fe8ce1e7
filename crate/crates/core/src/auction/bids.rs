use crate::auction::Orientation;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Finite, strictly increasing bid menus, one per bidder, with optional
/// value caps `v̄_i` (values lie in `[0, v̄_i]` and `max B_i > v̄_i`).
#[derive(Debug, Clone, PartialEq)]
pub struct BidSpace<B> {
    levels: Vec<Vec<B>>,
    caps: Option<Vec<B>>,
}

impl<B: Scalar> BidSpace<B> {
    pub fn new(levels: Vec<Vec<B>>, caps: Option<Vec<B>>) -> Result<Self> {
        for (i, menu) in levels.iter().enumerate() {
            if menu.is_empty() {
                return Err(Error::InvalidBidSpace(format!("bidder {i} has no allowed bids")));
            }
            if menu[0] < B::zero() {
                return Err(Error::InvalidBidSpace(format!("bidder {i} has a negative bid")));
            }
            if menu.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidBidSpace(format!(
                    "bids of bidder {i} are not strictly increasing"
                )));
            }
        }
        if let Some(caps) = &caps {
            if caps.len() != levels.len() {
                return Err(Error::InvalidBidSpace("one value cap per bidder required".into()));
            }
            for (i, (cap, menu)) in caps.iter().zip(&levels).enumerate() {
                if *cap < B::zero() || menu.last().expect("nonempty") <= cap {
                    return Err(Error::InvalidBidSpace(format!(
                        "bidder {i}: largest bid must exceed the value cap {cap}"
                    )));
                }
            }
        }
        Ok(BidSpace { levels, caps })
    }

    /// Every bidder gets the same menu and no explicit cap.
    pub fn uniform(bidders: usize, menu: Vec<B>) -> Result<Self> {
        Self::new(vec![menu; bidders], None)
    }

    pub fn bidders(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self, bidder: usize) -> &[B] {
        &self.levels[bidder]
    }

    pub fn caps(&self) -> Option<&[B]> {
        self.caps.as_deref()
    }

    pub fn index_of(&self, bidder: usize, bid: &B) -> Option<usize> {
        self.levels[bidder]
            .binary_search_by(|x| x.cmp_total(bid))
            .ok()
    }

    pub fn contains(&self, bidder: usize, bid: &B) -> bool {
        self.index_of(bidder, bid).is_some()
    }

    /// Truthful report for a bidder with value `value`.
    ///
    /// Procurement: `v⁺ = min{b ∈ B_i : b > v}`. Selling mirrors it:
    /// `v⁻ = max{b ∈ B_i : b < v}`.
    pub fn truthful_bid(&self, bidder: usize, value: &B, orientation: Orientation) -> Option<B> {
        let menu = &self.levels[bidder];
        match orientation {
            Orientation::Procurement => menu.iter().find(|b| *b > value).cloned(),
            Orientation::Selling => menu.iter().rev().find(|b| *b < value).cloned(),
        }
    }

    /// Checks a value vector against the caps and the existence of truthful bids.
    pub fn validate_values(&self, values: &[B], orientation: Orientation) -> Result<()> {
        if values.len() != self.bidders() {
            return Err(Error::InvalidBids(format!(
                "expected {} values, got {}",
                self.bidders(),
                values.len()
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if *v < B::zero() {
                return Err(Error::InvalidBids(format!("value of bidder {i} is negative")));
            }
            if let Some(caps) = &self.caps {
                if *v > caps[i] {
                    return Err(Error::InvalidBids(format!(
                        "value {v} of bidder {i} exceeds its cap {}",
                        caps[i]
                    )));
                }
            }
            if self.truthful_bid(i, v, orientation).is_none() {
                return Err(Error::InvalidBids(format!(
                    "bidder {i} has no truthful bid for value {v}"
                )));
            }
        }
        Ok(())
    }
}

/// A bid vector validated against a [`BidSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct BidProfile<B> {
    bids: Vec<B>,
}

impl<B: Scalar> BidProfile<B> {
    pub fn new(space: &BidSpace<B>, bids: Vec<B>) -> Result<Self> {
        if bids.len() != space.bidders() {
            return Err(Error::InvalidBids(format!(
                "expected {} bids, got {}",
                space.bidders(),
                bids.len()
            )));
        }
        for (i, b) in bids.iter().enumerate() {
            if !space.contains(i, b) {
                return Err(Error::InvalidBids(format!("bid {b} of bidder {i} is not allowed")));
            }
        }
        Ok(BidProfile { bids })
    }

    pub fn bids(&self) -> &[B] {
        &self.bids
    }

    pub fn len(&self) -> usize {
        self.bids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bids.is_empty()
    }

    pub fn into_inner(self) -> Vec<B> {
        self.bids
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn rejects_unsorted_or_empty_menus() {
        assert!(BidSpace::new(vec![vec![r(1), r(1)]], None).is_err());
        assert!(BidSpace::<Rational>::new(vec![vec![]], None).is_err());
        assert!(BidSpace::new(vec![vec![r(-1), r(1)]], None).is_err());
    }

    #[test]
    fn cap_must_be_below_max_bid() {
        assert!(BidSpace::new(vec![vec![r(0), r(3)]], Some(vec![r(3)])).is_err());
        assert!(BidSpace::new(vec![vec![r(0), r(3)]], Some(vec![r(2)])).is_ok());
    }

    #[test]
    fn truthful_bid_rounds_away_from_value() {
        let space = BidSpace::uniform(1, (0..5).map(r).collect()).unwrap();
        let v = Rational::new(3, 2);
        assert_eq!(space.truthful_bid(0, &v, Orientation::Procurement), Some(r(2)));
        assert_eq!(space.truthful_bid(0, &v, Orientation::Selling), Some(r(1)));
        // value on a grid point: strictly above / strictly below
        assert_eq!(space.truthful_bid(0, &r(2), Orientation::Procurement), Some(r(3)));
        assert_eq!(space.truthful_bid(0, &r(2), Orientation::Selling), Some(r(1)));
        assert_eq!(space.truthful_bid(0, &r(4), Orientation::Procurement), None);
        assert_eq!(space.truthful_bid(0, &r(0), Orientation::Selling), None);
    }

    #[test]
    fn profile_membership() {
        let space = BidSpace::uniform(2, vec![r(0), r(2)]).unwrap();
        assert!(BidProfile::new(&space, vec![r(0), r(2)]).is_ok());
        assert!(BidProfile::new(&space, vec![r(0), r(1)]).is_err());
        assert!(BidProfile::new(&space, vec![r(0)]).is_err());
    }
}
