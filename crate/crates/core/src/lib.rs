pub mod auction;
pub mod error;
pub mod graph;
pub mod io;
pub mod network;
pub mod oracles;
pub mod registry;
pub mod scalar;
pub mod setcover;
pub mod spectrum;
pub mod submodular;

pub use error::{Error, Result};
pub use scalar::{Scalar, Score};

/// Exact bid/weight/cost type used by default.
pub type Rational = num_rational::Ratio<i64>;

/// Spectrum repacking with exact bids and geometry.
pub type SpectrumAuction = spectrum::SpectrumInstance<Rational>;
/// Spectrum repacking with floating-point bids and geometry.
pub type SpectrumAuctionF64 = spectrum::SpectrumInstance<f64>;
/// Bandwidth reallocation with floating-point capacities and edge prices.
pub type NetworkAuction = network::NetworkRule<f64>;
pub type NetworkAuctionF32 = network::NetworkRule<f32>;
/// Set-cover cost minimization; generic over the bid type at use sites.
pub type SetCoverAuction = setcover::SetCoverRule;
pub type ExactBidSpace = auction::BidSpace<Rational>;
pub type ExactOutcome = auction::AuctionOutcome<Rational, Rational>;
pub type CoverDual = setcover::CoverDualState<Rational>;
