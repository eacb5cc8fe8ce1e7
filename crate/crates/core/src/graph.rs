//! Small undirected simple graph with bitset adjacency.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    neighbors: Vec<Vec<usize>>,
    bits: Vec<Vec<u64>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Graph {
            neighbors: vec![Vec::new(); n],
            bits: vec![vec![0; words]; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInstance(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("self-loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Adds `{u, v}`; duplicates are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert_ne!(u, v);
        if self.is_adjacent(u, v) {
            return;
        }
        self.bits[u][v / 64] |= 1 << (v % 64);
        self.bits[v][u / 64] |= 1 << (u % 64);
        let pos = self.neighbors[u].binary_search(&v).unwrap_err();
        self.neighbors[u].insert(pos, v);
        let pos = self.neighbors[v].binary_search(&u).unwrap_err();
        self.neighbors[v].insert(pos, u);
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.bits[u][v / 64] >> (v % 64) & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.len()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|u| self.neighbors[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(a, &u)| set[a + 1..].iter().all(|&v| u != v && !self.is_adjacent(u, v)))
    }

    /// Neighbourhood of `v` as a bitmask; only valid for graphs with at most
    /// 64 vertices.
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        assert!(self.len() <= 64, "bitmask view needs n <= 64");
        self.bits[v].first().copied().unwrap_or(0)
    }

    /// Largest number of pairwise non-adjacent neighbours of any vertex
    /// (the graph is `(t+1)`-claw-free iff this is at most `t`).
    /// Exhaustive; intended for small graphs.
    pub fn max_independent_neighbors(&self) -> usize {
        (0..self.len())
            .map(|v| {
                let nb = &self.neighbors[v];
                let mut best = 0;
                let mut cur = Vec::new();
                self.grow_independent(nb, 0, &mut cur, &mut best);
                best
            })
            .max()
            .unwrap_or(0)
    }

    fn grow_independent(&self, pool: &[usize], start: usize, cur: &mut Vec<usize>, best: &mut usize) {
        *best = (*best).max(cur.len());
        if cur.len() + (pool.len() - start) <= *best {
            return;
        }
        for idx in start..pool.len() {
            let v = pool[idx];
            if cur.iter().all(|&u| !self.is_adjacent(u, v)) {
                cur.push(v);
                self.grow_independent(pool, idx + 1, cur, best);
                cur.pop();
            }
        }
    }
}
