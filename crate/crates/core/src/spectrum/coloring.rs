use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

/// `k` disjoint independent sets (one per channel) built up one vertex at a
/// time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringState {
    classes: Vec<Vec<usize>>,
    /// `blocked[j][v]`: `v` has a neighbour in class `j`.
    blocked: Vec<Vec<bool>>,
    color: Vec<Option<usize>>,
}

impl ColoringState {
    pub fn new(vertices: usize, k: usize) -> Self {
        ColoringState {
            classes: vec![Vec::new(); k],
            blocked: vec![vec![false; vertices]; k],
            color: vec![None; vertices],
        }
    }

    /// Lowest class that stays independent when `v` joins it.
    pub fn first_fit(&self, v: usize) -> Option<usize> {
        if self.color[v].is_some() {
            return None;
        }
        (0..self.classes.len()).find(|&j| !self.blocked[j][v])
    }

    pub fn assign(&mut self, graph: &Graph, v: usize, class: usize) {
        debug_assert!(!self.blocked[class][v] && self.color[v].is_none());
        self.classes[class].push(v);
        self.color[v] = Some(class);
        for &u in graph.neighbors(v) {
            self.blocked[class][u] = true;
        }
    }

    /// Places `v` in its first-fit class; returns the class, or `None` if no
    /// class can take it.
    pub fn insert(&mut self, graph: &Graph, v: usize) -> Option<usize> {
        let j = self.first_fit(v)?;
        self.assign(graph, v, j);
        Some(j)
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn color_of(&self, v: usize) -> Option<usize> {
        self.color[v]
    }

    /// Union of all classes, ascending.
    pub fn retained(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.classes.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    /// Every class is independent and classes are pairwise disjoint.
    pub fn is_valid(&self, graph: &Graph) -> bool {
        let mut seen = vec![false; graph.len()];
        for class in &self.classes {
            if !graph.is_independent(class) {
                return false;
            }
            for &v in class {
                if std::mem::replace(&mut seen[v], true) {
                    return false;
                }
            }
        }
        true
    }
}

/// Vertices with positive weight, heaviest first, ties by index.
pub(crate) fn weight_order<T: Scalar>(weights: &[T], among: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut order: Vec<usize> = among.into_iter().filter(|&v| weights[v] > T::zero()).collect();
    order.sort_by(|&a, &b| weights[b].cmp_total(&weights[a]).then(a.cmp(&b)));
    order
}

/// Result of the greedy k-colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KColoring {
    /// Retained vertices in the order they were coloured.
    pub order: Vec<usize>,
    pub state: ColoringState,
}

impl KColoring {
    pub fn retained(&self) -> Vec<usize> {
        self.state.retained()
    }
}

/// Greedy maximum-weight k-colourable subgraph: scan vertices by decreasing
/// weight and put each into the first colour class that stays independent.
///
/// Zero-weight vertices are never retained (they add nothing and the
/// matching auction gives them score 0).
pub fn greedy_k_colorable<T: Scalar>(graph: &Graph, weights: &[T], k: usize) -> KColoring {
    assert_eq!(graph.len(), weights.len(), "one weight per vertex");
    let mut state = ColoringState::new(graph.len(), k);
    let mut order = Vec::new();
    for v in weight_order(weights, 0..graph.len()) {
        if state.insert(graph, v).is_some() {
            order.push(v);
        }
    }
    KColoring { order, state }
}

/// Greedy maximum-weight independent set restricted to `vertices`: take
/// vertices by decreasing weight while they stay independent. Returned in
/// selection order.
pub fn greedy_mwis_on<T: Scalar>(graph: &Graph, weights: &[T], vertices: &[usize]) -> Vec<usize> {
    let mut blocked = vec![false; graph.len()];
    let mut chosen = Vec::new();
    for v in weight_order(weights, vertices.iter().copied()) {
        if !blocked[v] {
            chosen.push(v);
            for &u in graph.neighbors(v) {
                blocked[u] = true;
            }
        }
    }
    chosen
}

pub fn greedy_mwis<T: Scalar>(graph: &Graph, weights: &[T]) -> Vec<usize> {
    let all: Vec<usize> = (0..graph.len()).collect();
    greedy_mwis_on(graph, weights, &all)
}

/// Builds `k` colour classes one after another, each by calling `mwis` on
/// the residual graph (`vertices` not yet coloured). Returns the classes.
pub fn sequential_k_color<T, F>(graph: &Graph, weights: &[T], k: usize, mut mwis: F) -> Result<Vec<Vec<usize>>>
where
    T: Scalar,
    F: FnMut(&Graph, &[T], &[usize]) -> Vec<usize>,
{
    let mut residual: Vec<usize> = (0..graph.len()).collect();
    let mut classes = Vec::with_capacity(k);
    for round in 0..k {
        let set = mwis(graph, weights, &residual);
        if !graph.is_independent(&set) {
            return Err(Error::Fault(format!("round {round}: subroutine returned a dependent set")));
        }
        if let Some(v) = set.iter().find(|v| residual.binary_search(v).is_err()) {
            return Err(Error::Fault(format!(
                "round {round}: subroutine returned vertex {v} outside the residual graph"
            )));
        }
        residual.retain(|v| !set.contains(v));
        classes.push(set);
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn w(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from_integer(x)).collect()
    }

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn path_one_channel_keeps_heaviest() {
        let out = greedy_k_colorable(&path3(), &w(&[3, 5, 2]), 1);
        assert_eq!(out.order, vec![1]);
        assert_eq!(out.retained(), vec![1]);
    }

    #[test]
    fn edgeless_keeps_everything_in_first_class() {
        let g = Graph::empty(4);
        let out = greedy_k_colorable(&g, &w(&[1, 2, 3, 4]), 1);
        assert_eq!(out.retained(), vec![0, 1, 2, 3]);
        assert_eq!(out.state.classes()[0].len(), 4);
    }

    #[test]
    fn triangle_two_channels() {
        let out = greedy_k_colorable(&triangle(), &w(&[4, 3, 2]), 2);
        assert_eq!(out.state.classes(), &[vec![0], vec![1]]);
        assert!(out.state.is_valid(&triangle()));
    }

    #[test]
    fn zero_weight_vertices_are_skipped() {
        let out = greedy_k_colorable(&Graph::empty(2), &w(&[0, 1]), 1);
        assert_eq!(out.retained(), vec![1]);
    }

    #[test]
    fn star_greedy_takes_center() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(greedy_mwis(&g, &w(&[10, 4, 4, 4])), vec![0]);
        assert_eq!(greedy_mwis(&Graph::empty(3), &w(&[1, 1, 1])), vec![0, 1, 2]);
    }

    #[test]
    fn sequential_path_two_channels() {
        let classes = sequential_k_color(&path3(), &w(&[3, 5, 2]), 2, greedy_mwis_on).unwrap();
        assert_eq!(classes, vec![vec![1], vec![0, 2]]);
    }

    #[test]
    fn sequential_rejects_bad_subroutine() {
        let bad = |_: &Graph, _: &[Rational], _: &[usize]| vec![0, 1];
        assert!(matches!(
            sequential_k_color(&path3(), &w(&[1, 1, 1]), 1, bad),
            Err(Error::Fault(_))
        ));
    }
}
