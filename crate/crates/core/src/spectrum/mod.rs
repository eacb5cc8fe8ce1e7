//! Spectrum repacking.
//!
//! Stations are vertices of an interference graph and `k` channels remain.
//! The auction buys out stations so that those keeping their licences can
//! be assigned channels without interference, i.e. the retained stations
//! induce a `k`-colourable subgraph.

mod coloring;
mod geometry;

use std::sync::Arc;

pub use coloring::{
    greedy_k_colorable, greedy_mwis, greedy_mwis_on, sequential_k_color, ColoringState, KColoring,
};
pub use geometry::{
    build_interference_graph, claw_bound, coloring_guarantee, Disk, GeometrySpec, Interval,
};

use crate::auction::{Orientation, Scorer, ScoringRule};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::{Scalar, Score};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumInstance<T> {
    geometry: GeometrySpec<T>,
    graph: Arc<Graph>,
    channels: usize,
}

impl<T: Scalar> SpectrumInstance<T> {
    pub fn new(geometry: GeometrySpec<T>, channels: usize) -> Result<Self> {
        if channels == 0 {
            return Err(Error::InvalidInstance("at least one channel is required".into()));
        }
        let graph = Arc::new(build_interference_graph(&geometry)?);
        Ok(SpectrumInstance { geometry, graph, channels })
    }

    pub fn geometry(&self) -> &GeometrySpec<T> {
        &self.geometry
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn claw_bound(&self) -> T {
        claw_bound(&self.geometry)
    }

    /// Direct greedy with bids as vertex weights.
    pub fn greedy(&self, bids: &[T]) -> KColoring {
        greedy_k_colorable(&self.graph, bids, self.channels)
    }
}

/// Score of an unprocessed vertex: its bid if some colour class can still
/// take it, otherwise 0.
pub fn spectrum_score<T: Scalar>(state: &ColoringState, vertex: usize, bid: &T) -> Score<T> {
    if state.first_fit(vertex).is_some() {
        Score::Finite(bid.clone())
    } else {
        Score::zero()
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumScorer {
    graph: Arc<Graph>,
    state: ColoringState,
}

impl SpectrumScorer {
    pub fn state(&self) -> &ColoringState {
        &self.state
    }
}

impl<T: Scalar> Scorer<T> for SpectrumScorer {
    type Value = T;

    fn score(&self, bidder: usize, bid: &T) -> Score<T> {
        spectrum_score(&self.state, bidder, bid)
    }

    fn reject(&mut self, bidder: usize, _bid: &T) {
        let placed = self.state.insert(&self.graph, bidder);
        debug_assert!(placed.is_some(), "rejected vertex {bidder} fits no class");
    }
}

impl<T: Scalar> ScoringRule<T> for SpectrumInstance<T> {
    type Scorer = SpectrumScorer;

    fn bidders(&self) -> usize {
        self.graph.len()
    }

    fn orientation(&self) -> Orientation {
        Orientation::Procurement
    }

    fn scorer(&self) -> SpectrumScorer {
        SpectrumScorer {
            graph: Arc::clone(&self.graph),
            state: ColoringState::new(self.graph.len(), self.channels),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auction::{run_rule, settle, BidSpace, PaymentMethod};
    use crate::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn explicit(n: usize, edges: &[(usize, usize)], k: usize) -> SpectrumInstance<Rational> {
        let g = Graph::from_edges(n, edges).unwrap();
        let spec = GeometrySpec::Explicit { vertices: n, edges: edges.to_vec(), max_degree: g.max_degree() };
        SpectrumInstance::new(spec, k).unwrap()
    }

    #[test]
    fn empty_state_scores_bid() {
        let state = ColoringState::new(3, 1);
        assert_eq!(spectrum_score(&state, 2, &r(7)), Score::Finite(r(7)));
    }

    #[test]
    fn path_scores_drop_to_zero() {
        let inst = explicit(3, &[(0, 1), (1, 2)], 1);
        let mut scorer = inst.scorer();
        Scorer::<Rational>::reject(&mut scorer, 1, &r(5));
        assert!(Scorer::<Rational>::score(&scorer, 0, &r(3)).is_zero());
        assert!(Scorer::<Rational>::score(&scorer, 2, &r(2)).is_zero());
    }

    #[test]
    fn triangle_third_vertex_blocked() {
        let inst = explicit(3, &[(0, 1), (1, 2), (0, 2)], 2);
        let mut scorer = inst.scorer();
        Scorer::<Rational>::reject(&mut scorer, 0, &r(4));
        Scorer::<Rational>::reject(&mut scorer, 1, &r(3));
        assert!(Scorer::<Rational>::score(&scorer, 2, &r(2)).is_zero());
    }

    #[test]
    fn path_auction_allocates_endpoints() {
        let inst = explicit(3, &[(0, 1), (1, 2)], 1);
        let out = run_rule(&inst, &[r(3), r(5), r(2)]).unwrap();
        assert_eq!(out.retained(), vec![1]);
        assert_eq!(out.allocation, vec![0, 2]);
        assert_eq!(out.retained_welfare, r(5));
    }

    #[test]
    fn rejects_zero_channels() {
        let spec = GeometrySpec::<Rational>::Explicit { vertices: 1, edges: vec![], max_degree: 0 };
        assert!(SpectrumInstance::new(spec, 0).is_err());
    }

    #[test]
    fn adjacent_pair_payment_is_four() {
        let inst = explicit(2, &[(0, 1)], 1);
        let space = BidSpace::uniform(2, (0..=10).map(r).collect()).unwrap();
        let out = settle(&inst, &space, &[r(3), r(5)], PaymentMethod::FullScan).unwrap();
        assert_eq!(out.allocation, vec![0]);
        assert_eq!(out.payments.unwrap(), vec![r(4), r(0)]);
    }
}
