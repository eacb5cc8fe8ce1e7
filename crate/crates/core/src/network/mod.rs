//! Bandwidth reallocation by primal-dual greedy routing.
//!
//! Firms hold the right to route an unsplittable demand between terminals
//! (a path for unicast, a Steiner tree for multicast). The operator buys out
//! some firms so the rest still fit in the shrunken network. The greedy
//! keeps one dual price `y(e)` per edge, starts it at `1/c(e)`, repeatedly
//! retains the firm with the best value per unit of priced demand, and
//! raises the prices on the edges it used exponentially. It halts once the
//! priced capacity `Σ c(e) y(e)` reaches `e^{C-1} m`.

mod connector;

use std::sync::Arc;

use num_traits::Float;

pub use connector::{min_weight_connector, shortest_path, shortest_paths, steiner_tree, Connector};

use crate::auction::{Orientation, Scorer, ScoringRule};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Score};

/// Undirected multigraph with capacities (`c(e) >= 1`, `min c > 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct CapacitatedGraph<F> {
    nodes: usize,
    edges: Vec<(usize, usize)>,
    capacities: Vec<F>,
    incident: Vec<Vec<(usize, usize)>>,
}

impl<F: Float + Scalar> CapacitatedGraph<F> {
    pub fn new(nodes: usize, edges: Vec<(usize, usize)>, capacities: Vec<F>) -> Result<Self> {
        if edges.len() != capacities.len() {
            return Err(Error::InvalidInstance("one capacity per edge required".into()));
        }
        let mut incident = vec![Vec::new(); nodes];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= nodes || v >= nodes {
                return Err(Error::InvalidInstance(format!("edge {e} has an endpoint out of range")));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("edge {e} is a self-loop")));
            }
            if !(capacities[e] >= F::one()) {
                return Err(Error::InvalidInstance(format!("edge {e} has capacity below 1")));
            }
            incident[u].push((v, e));
            incident[v].push((u, e));
        }
        if capacities.iter().any(|&c| c <= F::one()) {
            return Err(Error::InvalidInstance("minimum capacity C must exceed 1".into()));
        }
        Ok(CapacitatedGraph { nodes, edges, capacities, incident })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// `(neighbour, edge)` pairs.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.incident[v]
    }

    pub fn capacities(&self) -> &[F] {
        &self.capacities
    }

    /// `C = min_e c(e)`; `None` without edges.
    pub fn min_capacity(&self) -> Option<F> {
        self.capacities.iter().copied().reduce(F::min)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Terminals {
    Unicast { source: usize, sink: usize },
    /// Source first, then the other terminals.
    Multicast(Vec<usize>),
}

impl Terminals {
    pub fn is_multicast(&self) -> bool {
        matches!(self, Terminals::Multicast(_))
    }

    pub fn vertices(&self) -> Vec<usize> {
        match self {
            Terminals::Unicast { source, sink } => vec![*source, *sink],
            Terminals::Multicast(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Firm<F> {
    pub terminals: Terminals,
    /// `d(i) ∈ (0, 1]`.
    pub demand: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkInstance<F> {
    graph: CapacitatedGraph<F>,
    firms: Vec<Firm<F>>,
}

impl<F: Float + Scalar> NetworkInstance<F> {
    pub fn new(graph: CapacitatedGraph<F>, firms: Vec<Firm<F>>) -> Result<Self> {
        for (i, firm) in firms.iter().enumerate() {
            if !(firm.demand > F::zero() && firm.demand <= F::one()) {
                return Err(Error::InvalidInstance(format!("firm {i}: demand must lie in (0, 1]")));
            }
            let vs = firm.terminals.vertices();
            if vs.iter().any(|&v| v >= graph.nodes()) {
                return Err(Error::InvalidInstance(format!("firm {i}: terminal out of range")));
            }
            let mut distinct = vs.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() < 2 || distinct.len() != vs.len() {
                return Err(Error::InvalidInstance(format!("firm {i}: terminals must be distinct")));
            }
        }
        Ok(NetworkInstance { graph, firms })
    }

    pub fn graph(&self) -> &CapacitatedGraph<F> {
        &self.graph
    }

    pub fn firms(&self) -> &[Firm<F>] {
        &self.firms
    }

    pub fn has_multicast(&self) -> bool {
        self.firms.iter().any(|f| f.terminals.is_multicast())
    }

    /// Approximation constant of the connector: 1 for exact paths, 2 when
    /// some firm needs a Steiner tree.
    pub fn connector_gamma(&self) -> F {
        if self.has_multicast() {
            F::one() + F::one()
        } else {
            F::one()
        }
    }

    /// Guaranteed fraction of the optimum:
    /// `1 / ((e γ C / (C-1)) · m^{1/(C-1)})`.
    pub fn welfare_guarantee(&self) -> F {
        let Some(c) = self.graph.min_capacity() else {
            return F::one();
        };
        routing_guarantee(c, self.graph.edge_count(), self.connector_gamma())
    }
}

pub fn routing_guarantee<F: Float + Scalar>(min_capacity: F, edges: usize, gamma: F) -> F {
    let c = min_capacity;
    let m = F::from(edges).expect("edge count fits");
    let e = F::one().exp();
    let factor = e * gamma * c / (c - F::one()) * m.powf(F::one() / (c - F::one()));
    F::one() / factor
}

/// Edge prices and the halting threshold `e^{C-1} m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualState<F> {
    y: Vec<F>,
    threshold: F,
}

impl<F: Float + Scalar> DualState<F> {
    pub fn new(graph: &CapacitatedGraph<F>) -> Self {
        let m = F::from(graph.edge_count()).expect("edge count fits");
        let threshold = match graph.min_capacity() {
            Some(c) => (c - F::one()).exp() * m,
            None => F::zero(),
        };
        DualState {
            y: graph.capacities().iter().map(|&c| F::one() / c).collect(),
            threshold,
        }
    }

    pub fn prices(&self) -> &[F] {
        &self.y
    }

    pub fn threshold(&self) -> F {
        self.threshold
    }

    /// `Σ_e c(e) y(e)`.
    pub fn mass(&self, graph: &CapacitatedGraph<F>) -> F {
        graph
            .capacities()
            .iter()
            .zip(&self.y)
            .fold(F::zero(), |acc, (&c, &y)| acc + c * y)
    }

    pub fn halted(&self, graph: &CapacitatedGraph<F>) -> bool {
        self.mass(graph) >= self.threshold
    }

    /// `y(e) <- y(e) · (e^{C-1} m)^{d / (c(e) - 1)}` on the used edges.
    pub fn charge(&mut self, graph: &CapacitatedGraph<F>, edges: &[usize], demand: F) {
        for &e in edges {
            let c = graph.capacities()[e];
            self.y[e] = self.y[e] * self.threshold.powf(demand / (c - F::one()));
        }
    }
}

/// `bid / (d · Σ_{e ∈ S} y(e))`.
pub fn network_score<B: Scalar, F: Float + Scalar>(bid: &B, demand: F, connector_weight: F) -> F {
    let v = F::from(bid.as_f64()).expect("bid converts to float");
    v / (demand * connector_weight)
}

/// One retained firm.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection<F> {
    pub firm: usize,
    pub connector: Connector<F>,
    pub score: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutingSolution<F> {
    /// Retained firms in selection order.
    pub selections: Vec<Selection<F>>,
    /// Firms whose terminals cannot be connected at all.
    pub infeasible: Vec<usize>,
    pub dual: DualState<F>,
    /// `Σ c(e) y(e)` before the first selection and after each one.
    pub mass_history: Vec<F>,
}

impl<F: Float + Scalar> RoutingSolution<F> {
    pub fn retained(&self) -> Vec<usize> {
        self.selections.iter().map(|s| s.firm).collect()
    }
}

/// Current connectors of the firms in `active` (None for disconnected).
fn connectors<F: Float + Scalar>(
    inst: &NetworkInstance<F>,
    dual: &DualState<F>,
    active: &[bool],
) -> Vec<Option<Connector<F>>> {
    inst.firms
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if !active[i] {
                return None;
            }
            min_weight_connector(&inst.graph, dual.prices(), i, &f.terminals).ok()
        })
        .collect()
}

/// The primal-dual greedy run directly on firm values.
///
/// Firms with value 0 are never retained (the loop also stops when the best
/// score is 0).
pub fn greedy_routing<B: Scalar, F: Float + Scalar>(inst: &NetworkInstance<F>, values: &[B]) -> Result<RoutingSolution<F>> {
    let n = inst.firms.len();
    if values.len() != n {
        return Err(Error::InvalidBids(format!("expected {n} values, got {}", values.len())));
    }
    let graph = &inst.graph;
    let mut dual = DualState::new(graph);
    let mut active = vec![true; n];
    let infeasible: Vec<usize> = connectors(inst, &dual, &active)
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_none())
        .map(|(i, _)| i)
        .collect();
    let mut selections = Vec::new();
    let mut mass_history = vec![dual.mass(graph)];

    while active.iter().any(|&a| a) && !dual.halted(graph) {
        let conns = connectors(inst, &dual, &active);
        let mut best: Option<(usize, F)> = None;
        for (i, c) in conns.iter().enumerate() {
            let Some(c) = c else { continue };
            let s = network_score(&values[i], inst.firms[i].demand, c.weight);
            if best.map_or(true, |(_, b)| s > b) {
                best = Some((i, s));
            }
        }
        let Some((i, score)) = best else { break };
        if score <= F::zero() {
            break;
        }
        let connector = conns[i].clone().expect("scored firm has a connector");
        dual.charge(graph, &connector.edges, inst.firms[i].demand);
        active[i] = false;
        mass_history.push(dual.mass(graph));
        selections.push(Selection { firm: i, connector, score });
    }

    Ok(RoutingSolution { selections, infeasible, dual, mass_history })
}

/// Per-edge load of the retained structures.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadReport<F> {
    pub loads: Vec<F>,
    /// Edges with load above capacity.
    pub violations: Vec<usize>,
}

pub fn check_capacity_feasibility<F: Float + Scalar>(solution: &RoutingSolution<F>, inst: &NetworkInstance<F>) -> LoadReport<F> {
    let mut loads = vec![F::zero(); inst.graph.edge_count()];
    for s in &solution.selections {
        for &e in &s.connector.edges {
            loads[e] = loads[e] + inst.firms[s.firm].demand;
        }
    }
    let violations = (0..loads.len())
        .filter(|&e| loads[e] > inst.graph.capacities()[e])
        .collect();
    LoadReport { loads, violations }
}

/// Feasible LP dual built from edge prices `y` and slack `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate<F> {
    /// `Σ c(e) y(e) + Σ z(i)`, an upper bound on the optimum.
    pub bound: F,
    pub slack: Vec<F>,
}

/// Upper bound on the optimal retained welfare by weak duality.
///
/// For each firm `z(i) = max(0, v(i) - d(i) · w_i)` where `w_i` is a lower
/// bound on the cheapest connector under `y`: exact for unicast, half the
/// 2-approximate Steiner tree for multicast.
pub fn dual_certificate<B: Scalar, F: Float + Scalar>(
    inst: &NetworkInstance<F>,
    dual: &DualState<F>,
    values: &[B],
) -> Result<DualCertificate<F>> {
    if dual.prices().iter().any(|&y| !(y >= F::zero())) {
        return Err(Error::Fault("negative or NaN edge price".into()));
    }
    let mut slack = Vec::with_capacity(values.len());
    for (i, firm) in inst.firms.iter().enumerate() {
        let v = F::from(values[i].as_f64()).expect("value converts");
        let z = match min_weight_connector(&inst.graph, dual.prices(), i, &firm.terminals) {
            // no connecting structure, so no constraint for this firm
            Err(_) => F::zero(),
            Ok(c) => {
                let lower = if firm.terminals.is_multicast() {
                    c.weight / (F::one() + F::one())
                } else {
                    c.weight
                };
                let z = (v - firm.demand * lower).max(F::zero());
                if z + firm.demand * lower < v {
                    return Err(Error::Fault(format!("dual constraint of firm {i} violated")));
                }
                z
            }
        };
        slack.push(z);
    }
    let bound = dual.mass(&inst.graph) + slack.iter().fold(F::zero(), |a, &z| a + z);
    Ok(DualCertificate { bound, slack })
}

/// DA scorer over the edge prices of the rejected (retained) firms.
#[derive(Debug, Clone)]
pub struct NetworkScorer<F> {
    inst: Arc<NetworkInstance<F>>,
    dual: DualState<F>,
    active: Vec<bool>,
    conns: Vec<Option<Connector<F>>>,
}

impl<F: Float + Scalar> NetworkScorer<F> {
    pub fn new(inst: Arc<NetworkInstance<F>>) -> Self {
        let dual = DualState::new(&inst.graph);
        let active = vec![true; inst.firms.len()];
        let conns = connectors(&inst, &dual, &active);
        NetworkScorer { inst, dual, active, conns }
    }

    pub fn dual(&self) -> &DualState<F> {
        &self.dual
    }
}

impl<B: Scalar, F: Float + Scalar> Scorer<B> for NetworkScorer<F> {
    type Value = F;

    fn score(&self, bidder: usize, bid: &B) -> Score<F> {
        if self.dual.halted(&self.inst.graph) {
            return Score::zero();
        }
        match &self.conns[bidder] {
            Some(c) => Score::Finite(network_score(bid, self.inst.firms[bidder].demand, c.weight)),
            None => Score::zero(),
        }
    }

    fn reject(&mut self, bidder: usize, _bid: &B) {
        let c = self.conns[bidder].take().expect("rejected firm had a connector");
        self.dual.charge(&self.inst.graph, &c.edges, self.inst.firms[bidder].demand);
        self.active[bidder] = false;
        self.conns = connectors(&self.inst, &self.dual, &self.active);
    }
}

/// Shared handle so scorers do not copy the instance.
#[derive(Debug, Clone)]
pub struct NetworkRule<F> {
    inst: Arc<NetworkInstance<F>>,
}

impl<F: Float + Scalar> NetworkRule<F> {
    pub fn new(inst: NetworkInstance<F>) -> Self {
        NetworkRule { inst: Arc::new(inst) }
    }

    pub fn instance(&self) -> &NetworkInstance<F> {
        &self.inst
    }
}

impl<B: Scalar, F: Float + Scalar> ScoringRule<B> for NetworkRule<F> {
    type Scorer = NetworkScorer<F>;

    fn bidders(&self) -> usize {
        self.inst.firms.len()
    }

    fn orientation(&self) -> Orientation {
        Orientation::Procurement
    }

    fn scorer(&self) -> NetworkScorer<F> {
        NetworkScorer::new(Arc::clone(&self.inst))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auction::run_rule;
    use crate::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn single_edge_two_firms() -> NetworkInstance<f64> {
        let g = CapacitatedGraph::new(2, vec![(0, 1)], vec![2.0]).unwrap();
        let firm = Firm { terminals: Terminals::Unicast { source: 0, sink: 1 }, demand: 1.0 };
        NetworkInstance::new(g, vec![firm.clone(), firm]).unwrap()
    }

    #[test]
    fn single_edge_trace() {
        let inst = single_edge_two_firms();
        let sol = greedy_routing(&inst, &[r(5), r(3)]).unwrap();
        assert_eq!(sol.retained(), vec![0]);
        assert_eq!(sol.selections[0].score, 10.0);
        let e = std::f64::consts::E;
        assert!((sol.dual.prices()[0] - 0.5 * e).abs() < 1e-9);
        assert!((sol.mass_history[0] - 1.0).abs() < 1e-9);
        assert!((sol.mass_history[1] - e).abs() < 1e-9);
        assert!(sol.dual.halted(inst.graph()));
    }

    #[test]
    fn initial_score_and_halt() {
        assert_eq!(network_score(&r(5), 1.0, 0.5), 10.0);
        assert_eq!(network_score(&r(0), 1.0, 0.5), 0.0);
        let rule = NetworkRule::new(single_edge_two_firms());
        let mut scorer = <NetworkRule<f64> as ScoringRule<Rational>>::scorer(&rule);
        assert_eq!(Scorer::<Rational>::score(&scorer, 1, &r(5)), Score::Finite(10.0));
        Scorer::<Rational>::reject(&mut scorer, 0, &r(5));
        for b in 0..10 {
            assert!(Scorer::<Rational>::score(&scorer, 1, &r(b)).is_zero());
        }
    }

    #[test]
    fn engine_matches_direct_on_single_edge() {
        let rule = NetworkRule::new(single_edge_two_firms());
        let out = run_rule(&rule, &[r(5), r(3)]).unwrap();
        assert_eq!(out.retained(), vec![0]);
        assert_eq!(out.allocation, vec![1]);
    }

    #[test]
    fn no_firms_no_loop() {
        let g = CapacitatedGraph::new(2, vec![(0, 1)], vec![2.0]).unwrap();
        let inst = NetworkInstance::new(g, vec![]).unwrap();
        let sol = greedy_routing::<Rational, f64>(&inst, &[]).unwrap();
        assert!(sol.selections.is_empty());
        assert_eq!(sol.mass_history.len(), 1);
    }

    #[test]
    fn validation() {
        assert!(CapacitatedGraph::new(2, vec![(0, 1)], vec![1.0]).is_err());
        assert!(CapacitatedGraph::new(2, vec![(0, 1)], vec![0.5]).is_err());
        let g = CapacitatedGraph::new(2, vec![(0, 1)], vec![2.0]).unwrap();
        let zero = Firm { terminals: Terminals::Unicast { source: 0, sink: 1 }, demand: 0.0 };
        assert!(NetworkInstance::new(g.clone(), vec![zero]).is_err());
        let same = Firm { terminals: Terminals::Unicast { source: 1, sink: 1 }, demand: 1.0 };
        assert!(NetworkInstance::new(g, vec![same]).is_err());
    }

    #[test]
    fn load_and_certificate_on_single_edge() {
        let inst = single_edge_two_firms();
        let sol = greedy_routing(&inst, &[r(5), r(3)]).unwrap();
        let report = check_capacity_feasibility(&sol, &inst);
        assert_eq!(report.loads, vec![1.0]);
        assert!(report.violations.is_empty());
        let cert = dual_certificate(&inst, &sol.dual, &[r(5), r(3)]).unwrap();
        assert!(cert.bound >= 8.0);
    }

    #[test]
    fn zero_prices_certificate_is_total_value() {
        let inst = single_edge_two_firms();
        let mut dual = DualState::new(inst.graph());
        dual.y = vec![0.0];
        let cert = dual_certificate(&inst, &dual, &[r(5), r(3)]).unwrap();
        assert_eq!(cert.bound, 8.0);
    }
}
