use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid bid space: {0}")]
    InvalidBidSpace(String),

    #[error("invalid bids: {0}")]
    InvalidBids(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("scorer is not monotone for bidder {bidder}: bid {higher_bid} scores below bid {lower_bid}")]
    MonotonicityViolation {
        bidder: usize,
        lower_bid: String,
        higher_bid: String,
    },

    #[error("bidder {0} is not allocated")]
    NotAllocated(usize),

    #[error("no bid keeps bidder {0} allocated")]
    NoWinningBid(usize),

    #[error("firm {0} has disconnected terminals")]
    Disconnected(usize),

    /// Broken internal invariant: a scorer or subroutine did something its
    /// contract forbids.
    #[error("internal consistency fault: {0}")]
    Fault(String),

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded { what: String, needed: u64, limit: u64 },

    #[error("oracle timed out after {0:?}")]
    Timeout(std::time::Duration),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
