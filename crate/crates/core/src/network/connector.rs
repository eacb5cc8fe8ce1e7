//! Cheapest structures connecting a firm's terminals under edge weights.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::network::{CapacitatedGraph, Terminals};
use crate::scalar::Scalar;

/// A path or tree, as sorted edge indices, with its total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Connector<F> {
    pub edges: Vec<usize>,
    pub weight: F,
}

/// Single-source shortest paths: `(dist, parent edge)` per vertex.
/// Unreachable vertices have `dist = None`. Ties go to the lowest vertex
/// index, and a parent is replaced only on strict improvement.
pub fn shortest_paths<F: Float + Scalar>(
    graph: &CapacitatedGraph<F>,
    weights: &[F],
    source: usize,
) -> (Vec<Option<F>>, Vec<Option<usize>>) {
    let n = graph.nodes();
    let mut dist: Vec<Option<F>> = vec![None; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    dist[source] = Some(F::zero());
    loop {
        let mut next: Option<usize> = None;
        for v in 0..n {
            if done[v] {
                continue;
            }
            if let Some(d) = dist[v] {
                if next.map_or(true, |u| d < dist[u].expect("tentative")) {
                    next = Some(v);
                }
            }
        }
        let Some(u) = next else { break };
        done[u] = true;
        let du = dist[u].expect("settled");
        for &(v, e) in graph.incident(u) {
            let cand = du + weights[e];
            if !done[v] && dist[v].map_or(true, |dv| cand < dv) {
                dist[v] = Some(cand);
                parent[v] = Some(e);
            }
        }
    }
    (dist, parent)
}

fn path_edges<F: Float + Scalar>(graph: &CapacitatedGraph<F>, parent: &[Option<usize>], source: usize, target: usize) -> Vec<usize> {
    let mut edges = Vec::new();
    let mut v = target;
    while v != source {
        let e = parent[v].expect("reachable target has a parent chain");
        edges.push(e);
        v = graph.other_end(e, v);
    }
    edges
}

fn total<F: Float>(edges: &[usize], weights: &[F]) -> F {
    edges.iter().fold(F::zero(), |acc, &e| acc + weights[e])
}

/// Exact shortest `source`-`sink` path.
pub fn shortest_path<F: Float + Scalar>(
    graph: &CapacitatedGraph<F>,
    weights: &[F],
    source: usize,
    sink: usize,
) -> Option<Connector<F>> {
    let (dist, parent) = shortest_paths(graph, weights, source);
    dist[sink]?;
    let mut edges = path_edges(graph, &parent, source, sink);
    edges.sort_unstable();
    let weight = total(&edges, weights);
    Some(Connector { edges, weight })
}

/// Steiner tree within twice the optimum: minimum spanning tree of the
/// terminals' metric closure, expanded into shortest paths, re-spanned and
/// stripped of non-terminal leaves.
pub fn steiner_tree<F: Float + Scalar>(graph: &CapacitatedGraph<F>, weights: &[F], terminals: &[usize]) -> Option<Connector<F>> {
    let t = terminals.len();
    if t <= 1 {
        return Some(Connector { edges: Vec::new(), weight: F::zero() });
    }
    let trees: Vec<_> = terminals.iter().map(|&s| shortest_paths(graph, weights, s)).collect();
    for (dist, _) in &trees {
        if terminals.iter().any(|&x| dist[x].is_none()) {
            return None;
        }
    }

    // Prim on the closure
    let mut in_tree = vec![false; t];
    let mut best: Vec<Option<(F, usize)>> = vec![None; t];
    in_tree[0] = true;
    for j in 1..t {
        best[j] = Some((trees[0].0[terminals[j]].expect("connected"), 0));
    }
    let mut union = vec![false; graph.edge_count()];
    for _ in 1..t {
        let mut pick: Option<usize> = None;
        for j in 0..t {
            if in_tree[j] {
                continue;
            }
            let (d, _) = best[j].expect("finite");
            if pick.map_or(true, |p| d < best[p].expect("finite").0) {
                pick = Some(j);
            }
        }
        let j = pick.expect("some terminal left");
        let (_, from) = best[j].expect("finite");
        in_tree[j] = true;
        for e in path_edges(graph, &trees[from].1, terminals[from], terminals[j]) {
            union[e] = true;
        }
        for l in 0..t {
            if !in_tree[l] {
                let d = trees[j].0[terminals[l]].expect("connected");
                if d < best[l].expect("finite").0 {
                    best[l] = Some((d, j));
                }
            }
        }
    }

    // spanning forest of the union (Kruskal, weight then index)
    let mut cand: Vec<usize> = (0..graph.edge_count()).filter(|&e| union[e]).collect();
    cand.sort_by(|&a, &b| weights[a].cmp_total(&weights[b]).then(a.cmp(&b)));
    let mut uf = UnionFind::new(graph.nodes());
    let mut kept: Vec<usize> = cand
        .into_iter()
        .filter(|&e| {
            let (u, v) = graph.endpoints(e);
            uf.union(u, v)
        })
        .collect();

    // prune non-terminal leaves
    let mut is_terminal = vec![false; graph.nodes()];
    for &x in terminals {
        is_terminal[x] = true;
    }
    loop {
        let mut degree = vec![0usize; graph.nodes()];
        for &e in &kept {
            let (u, v) = graph.endpoints(e);
            degree[u] += 1;
            degree[v] += 1;
        }
        let before = kept.len();
        kept.retain(|&e| {
            let (u, v) = graph.endpoints(e);
            !((degree[u] == 1 && !is_terminal[u]) || (degree[v] == 1 && !is_terminal[v]))
        });
        if kept.len() == before {
            break;
        }
    }
    kept.sort_unstable();
    let weight = total(&kept, weights);
    Some(Connector { edges: kept, weight })
}

/// Cheapest connector for a firm: exact for unicast, 2-approximate for
/// multicast.
pub fn min_weight_connector<F: Float + Scalar>(
    graph: &CapacitatedGraph<F>,
    weights: &[F],
    firm: usize,
    terminals: &Terminals,
) -> Result<Connector<F>> {
    let found = match terminals {
        Terminals::Unicast { source, sink } => shortest_path(graph, weights, *source, *sink),
        Terminals::Multicast(all) => steiner_tree(graph, weights, all),
    };
    found.ok_or(Error::Disconnected(firm))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            c = std::mem::replace(&mut self.parent[c], r);
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> CapacitatedGraph<f64> {
        // edges: (s,a), (a,t), (s,t) with s=0, a=1, t=2
        CapacitatedGraph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![2.0; 3]).unwrap()
    }

    #[test]
    fn single_edge_path() {
        let g = CapacitatedGraph::new(2, vec![(0, 1)], vec![2.0]).unwrap();
        let c = shortest_path(&g, &[0.5], 0, 1).unwrap();
        assert_eq!(c, Connector { edges: vec![0], weight: 0.5 });
    }

    #[test]
    fn detour_beats_heavy_edge() {
        let c = shortest_path(&triangle(), &[1.0, 1.0, 3.0], 0, 2).unwrap();
        assert_eq!(c.edges, vec![0, 1]);
        assert_eq!(c.weight, 2.0);
    }

    #[test]
    fn disconnected_firm_reported() {
        let g = CapacitatedGraph::new(3, vec![(0, 1)], vec![2.0]).unwrap();
        let err = min_weight_connector(&g, &[1.0], 4, &Terminals::Unicast { source: 0, sink: 2 }).unwrap_err();
        assert_eq!(err, Error::Disconnected(4));
    }

    #[test]
    fn steiner_on_star_uses_center() {
        // center 0, leaves 1..=3, plus a heavy ring among the leaves
        let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)];
        let g = CapacitatedGraph::new(4, edges, vec![2.0; 5]).unwrap();
        let w = [1.0, 1.0, 1.0, 1.9, 1.9];
        let c = steiner_tree(&g, &w, &[1, 2, 3]).unwrap();
        // metric closure distances are all 1.9 (direct ring) or 2 (via center);
        // the result must still be a tree spanning the terminals
        assert!(c.weight <= 2.0 * 3.0);
        assert!(!c.edges.is_empty());
    }
}
