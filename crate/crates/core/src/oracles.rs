//! Exhaustive optima for small instances.
//!
//! Every problem has two independent exact solvers: a branch-and-bound
//! search and a plain enumeration over bitmasks. Tests cross-check them.
//! Budgets are hard: running out yields an error, never a partial answer.

use std::time::{Duration, Instant};

use num_traits::Float;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::network::{CapacitatedGraph, NetworkInstance};
use crate::scalar::Scalar;
use crate::setcover::SetCoverInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_states: u64,
    pub timeout: Option<Duration>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_states: 50_000_000, timeout: Some(Duration::from_secs(60)) }
    }
}

struct Meter {
    states: u64,
    budget: OracleBudget,
    start: Instant,
    what: &'static str,
}

impl Meter {
    fn new(budget: OracleBudget, what: &'static str) -> Self {
        Meter { states: 0, budget, start: Instant::now(), what }
    }

    fn tick(&mut self) -> Result<()> {
        self.states += 1;
        if self.states > self.budget.max_states {
            return Err(Error::BudgetExceeded {
                what: self.what.into(),
                needed: self.states,
                limit: self.budget.max_states,
            });
        }
        if self.states % 4096 == 0 {
            if let Some(t) = self.budget.timeout {
                if self.start.elapsed() > t {
                    return Err(Error::Timeout(t));
                }
            }
        }
        Ok(())
    }
}

fn total<T: Scalar>(set: &[usize], weights: &[T]) -> T {
    set.iter().fold(T::zero(), |acc, &v| acc + weights[v].clone())
}

fn require_small(n: usize, limit: usize, what: &str) -> Result<()> {
    if n > limit {
        return Err(Error::BudgetExceeded { what: what.into(), needed: n as u64, limit: limit as u64 });
    }
    Ok(())
}

// ---------------------------------------------------------------- colouring

/// Maximum-weight `k`-colourable vertex subset (branch and bound).
pub fn opt_k_colorable<T: Scalar>(graph: &Graph, weights: &[T], k: usize, budget: OracleBudget) -> Result<(Vec<usize>, T)> {
    let n = graph.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| weights[b].cmp_total(&weights[a]).then(a.cmp(&b)));
    // suffix sums of weight for the bound
    let mut rest = vec![T::zero(); n + 1];
    for p in (0..n).rev() {
        rest[p] = rest[p + 1].clone() + weights[order[p]].clone();
    }
    struct Search<'a, T> {
        graph: &'a Graph,
        weights: &'a [T],
        order: Vec<usize>,
        rest: Vec<T>,
        k: usize,
        color: Vec<Option<usize>>,
        chosen: Vec<usize>,
        best: (Vec<usize>, T),
        meter: Meter,
    }
    impl<T: Scalar> Search<'_, T> {
        fn go(&mut self, pos: usize, value: T, used: usize) -> Result<()> {
            self.meter.tick()?;
            if value > self.best.1 {
                self.best = (self.chosen.clone(), value.clone());
            }
            if pos == self.order.len() || value.clone() + self.rest[pos].clone() <= self.best.1 {
                return Ok(());
            }
            let v = self.order[pos];
            // only one fresh colour needs trying (colours are interchangeable)
            for c in 0..(used + 1).min(self.k) {
                if self.graph.neighbors(v).iter().any(|&u| self.color[u] == Some(c)) {
                    continue;
                }
                self.color[v] = Some(c);
                self.chosen.push(v);
                let nv = value.clone() + self.weights[v].clone();
                self.go(pos + 1, nv, used.max(c + 1))?;
                self.chosen.pop();
                self.color[v] = None;
            }
            self.go(pos + 1, value, used)
        }
    }
    let mut s = Search {
        graph,
        weights,
        order,
        rest,
        k,
        color: vec![None; n],
        chosen: Vec::new(),
        best: (Vec::new(), T::zero()),
        meter: Meter::new(budget, "k-colourable subgraph search"),
    };
    s.go(0, T::zero(), 0)?;
    let (mut set, w) = s.best;
    set.sort_unstable();
    Ok((set, w))
}

/// Whether `set` (bitmask) induces a `k`-colourable subgraph.
pub fn is_k_colorable(graph: &Graph, set: &[usize], k: usize) -> bool {
    fn go(graph: &Graph, set: &[usize], k: usize, pos: usize, color: &mut [Option<usize>], used: usize) -> bool {
        if pos == set.len() {
            return true;
        }
        let v = set[pos];
        for c in 0..(used + 1).min(k) {
            if graph.neighbors(v).iter().all(|&u| color[u] != Some(c)) {
                color[v] = Some(c);
                if go(graph, set, k, pos + 1, color, used.max(c + 1)) {
                    color[v] = None;
                    return true;
                }
                color[v] = None;
            }
        }
        false
    }
    if set.is_empty() {
        return true;
    }
    if k == 0 {
        return false;
    }
    go(graph, set, k, 0, &mut vec![None; graph.len()], 0)
}

/// Same optimum by enumerating every vertex subset.
pub fn opt_k_colorable_lexicographic<T: Scalar>(graph: &Graph, weights: &[T], k: usize, budget: OracleBudget) -> Result<(Vec<usize>, T)> {
    let n = graph.len();
    require_small(n, 24, "subset enumeration (vertices)")?;
    let mut meter = Meter::new(budget, "k-colourable subset enumeration");
    let mut best = (Vec::new(), T::zero());
    for mask in 0u64..(1u64 << n) {
        meter.tick()?;
        let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let w = total(&set, weights);
        if w > best.1 && is_k_colorable(graph, &set, k) {
            best = (set, w);
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------- MWIS

/// Maximum-weight independent set (include/exclude branch and bound).
pub fn opt_mwis<T: Scalar>(graph: &Graph, weights: &[T], budget: OracleBudget) -> Result<(Vec<usize>, T)> {
    opt_k_colorable(graph, weights, 1, budget)
}

/// Same optimum by bitmask enumeration.
pub fn opt_mwis_lexicographic<T: Scalar>(graph: &Graph, weights: &[T], budget: OracleBudget) -> Result<(Vec<usize>, T)> {
    let n = graph.len();
    require_small(n, 24, "subset enumeration (vertices)")?;
    let masks: Vec<u64> = (0..n).map(|v| graph.neighbor_mask(v)).collect();
    let mut meter = Meter::new(budget, "independent set enumeration");
    let mut best = (0u64, T::zero());
    for mask in 0u64..(1u64 << n) {
        meter.tick()?;
        if (0..n).any(|v| mask >> v & 1 == 1 && masks[v] & mask != 0) {
            continue;
        }
        let w = (0..n)
            .filter(|&v| mask >> v & 1 == 1)
            .fold(T::zero(), |a, v| a + weights[v].clone());
        if w > best.1 {
            best = (mask, w);
        }
    }
    Ok(((0..n).filter(|&v| best.0 >> v & 1 == 1).collect(), best.1))
}

// ---------------------------------------------------------------- set cover

/// Minimum-cost cover (branch on the sets covering the lowest uncovered
/// element).
pub fn opt_setcover<T: Scalar>(inst: &SetCoverInstance, costs: &[T], budget: OracleBudget) -> Result<(Vec<usize>, T)> {
    struct Search<'a, T> {
        inst: &'a SetCoverInstance,
        costs: &'a [T],
        containing: Vec<Vec<usize>>,
        cover_count: Vec<usize>,
        chosen: Vec<usize>,
        best: Option<(Vec<usize>, T)>,
        meter: Meter,
    }
    impl<T: Scalar> Search<'_, T> {
        fn go(&mut self, cost: T) -> Result<()> {
            self.meter.tick()?;
            if let Some((_, b)) = &self.best {
                if cost >= *b {
                    return Ok(());
                }
            }
            let Some(e) = self.cover_count.iter().position(|&c| c == 0) else {
                self.best = Some((self.chosen.clone(), cost));
                return Ok(());
            };
            for idx in 0..self.containing[e].len() {
                let i = self.containing[e][idx];
                for &x in &self.inst.sets()[i] {
                    self.cover_count[x] += 1;
                }
                self.chosen.push(i);
                self.go(cost.clone() + self.costs[i].clone())?;
                self.chosen.pop();
                for &x in &self.inst.sets()[i] {
                    self.cover_count[x] -= 1;
                }
            }
            Ok(())
        }
    }
    let mut containing = vec![Vec::new(); inst.elements()];
    for (i, s) in inst.sets().iter().enumerate() {
        for &e in s {
            containing[e].push(i);
        }
    }
    let mut s = Search {
        inst,
        costs,
        containing,
        cover_count: vec![0; inst.elements()],
        chosen: Vec::new(),
        best: None,
        meter: Meter::new(budget, "set cover search"),
    };
    s.go(T::zero())?;
    let (mut set, c) = s.best.ok_or_else(|| Error::InvalidInstance("no cover exists".into()))?;
    set.sort_unstable();
    Ok((set, c))
}

/// Same optimum by enumerating every subset of bidders.
pub fn opt_setcover_lexicographic<T: Scalar>(inst: &SetCoverInstance, costs: &[T], budget: OracleBudget) -> Result<(Vec<usize>, T)> {
    let n = inst.sets().len();
    require_small(n, 24, "subset enumeration (bidders)")?;
    let mut meter = Meter::new(budget, "set cover enumeration");
    let mut best: Option<(Vec<usize>, T)> = None;
    for mask in 0u64..(1u64 << n) {
        meter.tick()?;
        let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let c = total(&set, costs);
        if best.as_ref().map_or(true, |(_, b)| c < *b) && inst.is_cover(&set) {
            best = Some((set, c));
        }
    }
    best.ok_or_else(|| Error::InvalidInstance("no cover exists".into()))
}

// ---------------------------------------------------------------- routing

/// Every inclusion-minimal edge set connecting `terminals`: trees that
/// contain all terminals and whose leaves are all terminals. For two
/// terminals these are exactly the simple paths.
pub fn connecting_structures<F: Float + Scalar>(
    graph: &CapacitatedGraph<F>,
    terminals: &[usize],
    budget: OracleBudget,
) -> Result<Vec<Vec<usize>>> {
    let m = graph.edge_count();
    require_small(m, 20, "structure enumeration (edges)")?;
    let n = graph.nodes();
    let mut meter = Meter::new(budget, "structure enumeration");
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << m) {
        meter.tick()?;
        let edges: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
        if edges.len() >= n {
            continue;
        }
        let mut degree = vec![0usize; n];
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            r
        }
        let mut acyclic = true;
        for &e in &edges {
            let (u, v) = graph.endpoints(e);
            degree[u] += 1;
            degree[v] += 1;
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                acyclic = false;
                break;
            }
            parent[ru] = rv;
        }
        if !acyclic || terminals.iter().any(|&t| degree[t] == 0) {
            continue;
        }
        // connected: all touched vertices share one root
        let root = find(&mut parent, terminals[0]);
        let touched: Vec<usize> = (0..n).filter(|&v| degree[v] > 0).collect();
        if touched.iter().any(|&v| find(&mut parent, v) != root) {
            continue;
        }
        if touched.iter().any(|&v| degree[v] == 1 && !terminals.contains(&v)) {
            continue;
        }
        out.push(edges);
    }
    Ok(out)
}

/// Cheapest connecting structure by enumeration.
pub fn opt_connector<F: Float + Scalar>(
    graph: &CapacitatedGraph<F>,
    weights: &[F],
    terminals: &[usize],
    budget: OracleBudget,
) -> Result<Option<(Vec<usize>, F)>> {
    let mut best: Option<(Vec<usize>, F)> = None;
    for s in connecting_structures(graph, terminals, budget)? {
        let w = s.iter().fold(F::zero(), |a, &e| a + weights[e]);
        if best.as_ref().map_or(true, |(_, b)| w < *b) {
            best = Some((s, w));
        }
    }
    Ok(best)
}

fn candidates<F: Float + Scalar>(inst: &NetworkInstance<F>, budget: OracleBudget) -> Result<Vec<Vec<Vec<usize>>>> {
    inst.firms()
        .iter()
        .map(|f| connecting_structures(inst.graph(), &f.terminals.vertices(), budget))
        .collect()
}

/// Maximum total value of firms whose unsplittable demands fit together.
/// Returns the firm set (ascending), one structure per firm, and the value.
pub fn opt_routing<B: Scalar, F: Float + Scalar>(
    inst: &NetworkInstance<F>,
    values: &[B],
    budget: OracleBudget,
) -> Result<(Vec<usize>, Vec<Vec<usize>>, B)> {
    let n = inst.firms().len();
    require_small(n, 20, "firm subset enumeration")?;
    let cands = candidates(inst, budget)?;
    let mut meter = Meter::new(budget, "routing search");

    // subsets by decreasing value so the first feasible hit per value wins
    let mut subsets: Vec<(u64, B)> = (0u64..(1u64 << n))
        .map(|mask| {
            let v = (0..n).filter(|&i| mask >> i & 1 == 1).fold(B::zero(), |a, i| a + values[i].clone());
            (mask, v)
        })
        .collect();
    subsets.sort_by(|a, b| b.1.cmp_total(&a.1).then(a.0.cmp(&b.0)));

    for (mask, value) in subsets {
        let firms: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let mut load = vec![F::zero(); inst.graph().edge_count()];
        let mut pick = Vec::new();
        if assign(inst, &cands, &firms, 0, &mut load, &mut pick, &mut meter)? {
            return Ok((firms, pick, value));
        }
    }
    unreachable!("the empty firm set is always feasible")
}

fn assign<F: Float + Scalar>(
    inst: &NetworkInstance<F>,
    cands: &[Vec<Vec<usize>>],
    firms: &[usize],
    pos: usize,
    load: &mut [F],
    pick: &mut Vec<Vec<usize>>,
    meter: &mut Meter,
) -> Result<bool> {
    meter.tick()?;
    if pos == firms.len() {
        return Ok(true);
    }
    let i = firms[pos];
    let d = inst.firms()[i].demand;
    let caps = inst.graph().capacities();
    for s in &cands[i] {
        if s.iter().any(|&e| load[e] + d > caps[e]) {
            continue;
        }
        for &e in s {
            load[e] = load[e] + d;
        }
        pick.push(s.clone());
        if assign(inst, cands, firms, pos + 1, load, pick, meter)? {
            return Ok(true);
        }
        pick.pop();
        for &e in s {
            load[e] = load[e] - d;
        }
    }
    Ok(false)
}

/// Same optimum by enumerating every joint choice (skip or one structure)
/// per firm.
pub fn opt_routing_lexicographic<B: Scalar, F: Float + Scalar>(
    inst: &NetworkInstance<F>,
    values: &[B],
    budget: OracleBudget,
) -> Result<B> {
    let cands = candidates(inst, budget)?;
    let mut meter = Meter::new(budget, "joint routing enumeration");
    let n = inst.firms().len();
    let radices: Vec<usize> = cands.iter().map(|c| c.len() + 1).collect();
    let mut digits = vec![0usize; n];
    let caps = inst.graph().capacities();
    let mut best = B::zero();
    loop {
        meter.tick()?;
        let mut load = vec![F::zero(); inst.graph().edge_count()];
        let mut value = B::zero();
        for i in 0..n {
            if digits[i] > 0 {
                for &e in &cands[i][digits[i] - 1] {
                    load[e] = load[e] + inst.firms()[i].demand;
                }
                value = value + values[i].clone();
            }
        }
        if value > best && (0..load.len()).all(|e| load[e] <= caps[e]) {
            best = value;
        }
        let mut carry = true;
        for (d, &r) in digits.iter_mut().zip(&radices) {
            *d += 1;
            if *d < r {
                carry = false;
                break;
            }
            *d = 0;
        }
        if carry {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Firm, Terminals};
    use crate::Rational;

    fn w(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from_integer(x)).collect()
    }

    const B: OracleBudget = OracleBudget { max_states: 1_000_000, timeout: None };

    #[test]
    fn edgeless_takes_everything() {
        let g = Graph::empty(4);
        let ws = w(&[1, 2, 3, 4]);
        assert_eq!(opt_k_colorable(&g, &ws, 1, B).unwrap(), (vec![0, 1, 2, 3], Rational::from_integer(10)));
        assert_eq!(opt_mwis_lexicographic(&g, &ws, B).unwrap().1, Rational::from_integer(10));
    }

    #[test]
    fn path_and_triangle() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(opt_k_colorable(&path, &w(&[3, 5, 2]), 1, B).unwrap(), (vec![1], Rational::from_integer(5)));
        assert_eq!(opt_k_colorable_lexicographic(&path, &w(&[3, 5, 2]), 1, B).unwrap().1, Rational::from_integer(5));
        assert_eq!(opt_k_colorable(&path, &w(&[3, 5, 2]), 2, B).unwrap().1, Rational::from_integer(10));
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(opt_k_colorable(&tri, &w(&[4, 3, 2]), 2, B).unwrap().1, Rational::from_integer(7));
        assert_eq!(opt_k_colorable_lexicographic(&tri, &w(&[4, 3, 2]), 2, B).unwrap().1, Rational::from_integer(7));
    }

    #[test]
    fn star_mwis_is_leaves() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let ws = w(&[10, 4, 4, 4]);
        assert_eq!(opt_mwis(&g, &ws, B).unwrap(), (vec![1, 2, 3], Rational::from_integer(12)));
        assert_eq!(opt_mwis_lexicographic(&g, &ws, B).unwrap(), (vec![1, 2, 3], Rational::from_integer(12)));
    }

    #[test]
    fn budget_refusal() {
        let g = Graph::empty(10);
        let tiny = OracleBudget { max_states: 5, timeout: None };
        assert!(matches!(opt_mwis(&g, &w(&[1; 10]), tiny), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(opt_mwis_lexicographic(&g, &w(&[1; 10]), tiny), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn setcover_example_and_forced() {
        let inst = SetCoverInstance::new(2, vec![vec![0], vec![1], vec![0, 1]]).unwrap();
        let c = vec![Rational::from_integer(1), Rational::from_integer(1), Rational::new(3, 2)];
        assert_eq!(opt_setcover(&inst, &c, B).unwrap(), (vec![2], Rational::new(3, 2)));
        assert_eq!(opt_setcover_lexicographic(&inst, &c, B).unwrap(), (vec![2], Rational::new(3, 2)));
        let forced = SetCoverInstance::new(2, vec![vec![0], vec![1]]).unwrap();
        assert_eq!(opt_setcover(&forced, &w(&[2, 5]), B).unwrap().1, Rational::from_integer(7));
    }

    #[test]
    fn routing_single_edge_fits_both() {
        let g = CapacitatedGraph::new(2, vec![(0, 1)], vec![2.0]).unwrap();
        let f = Firm { terminals: Terminals::Unicast { source: 0, sink: 1 }, demand: 1.0 };
        let inst = NetworkInstance::new(g, vec![f.clone(), f]).unwrap();
        let (firms, _, v) = opt_routing(&inst, &w(&[5, 3]), B).unwrap();
        assert_eq!(firms, vec![0, 1]);
        assert_eq!(v, Rational::from_integer(8));
        assert_eq!(opt_routing_lexicographic(&inst, &w(&[5, 3]), B).unwrap(), Rational::from_integer(8));
        let empty = NetworkInstance::new(CapacitatedGraph::new(2, vec![(0, 1)], vec![2.0]).unwrap(), vec![]).unwrap();
        assert_eq!(opt_routing::<Rational, f64>(&empty, &[], B).unwrap().2, Rational::from_integer(0));
    }

    #[test]
    fn triangle_paths_enumerated() {
        let g = CapacitatedGraph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![2.0; 3]).unwrap();
        let mut s = connecting_structures(&g, &[0, 2], B).unwrap();
        s.sort();
        assert_eq!(s, vec![vec![0, 1], vec![2]]);
        let (edges, weight) = opt_connector(&g, &[1.0, 1.0, 3.0], &[0, 2], B).unwrap().unwrap();
        assert_eq!((edges, weight), (vec![0, 1], 2.0));
    }
}
