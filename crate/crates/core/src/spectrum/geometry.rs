use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

/// Closed interval `[left, left + length]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval<T> {
    pub left: T,
    pub length: T,
}

/// Closed disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Disk<T> {
    pub x: T,
    pub y: T,
    pub radius: T,
}

/// How the interference graph is described.
#[derive(Debug, Clone, PartialEq)]
pub enum GeometrySpec<T> {
    Interval(Vec<Interval<T>>),
    Disk(Vec<Disk<T>>),
    Explicit {
        vertices: usize,
        edges: Vec<(usize, usize)>,
        max_degree: usize,
    },
}

impl<T: Scalar> GeometrySpec<T> {
    pub fn vertices(&self) -> usize {
        match self {
            GeometrySpec::Interval(v) => v.len(),
            GeometrySpec::Disk(v) => v.len(),
            GeometrySpec::Explicit { vertices, .. } => *vertices,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GeometrySpec::Interval(iv) => {
                if let Some(i) = iv.iter().position(|x| x.length <= T::zero()) {
                    return Err(Error::InvalidInstance(format!("interval {i} has nonpositive length")));
                }
            }
            GeometrySpec::Disk(ds) => {
                if let Some(i) = ds.iter().position(|d| d.radius <= T::zero()) {
                    return Err(Error::InvalidInstance(format!("disk {i} has nonpositive radius")));
                }
            }
            GeometrySpec::Explicit { vertices, edges, max_degree } => {
                let g = Graph::from_edges(*vertices, edges)?;
                if g.max_degree() > *max_degree {
                    return Err(Error::InvalidInstance(format!(
                        "declared degree bound {max_degree} but a vertex has degree {}",
                        g.max_degree()
                    )));
                }
            }
        }
        Ok(())
    }

    /// `l_max / l_min` over lengths or radii; `None` for explicit graphs or
    /// an empty vertex set.
    pub fn gamma(&self) -> Option<T> {
        let sizes: Vec<&T> = match self {
            GeometrySpec::Interval(iv) => iv.iter().map(|x| &x.length).collect(),
            GeometrySpec::Disk(ds) => ds.iter().map(|d| &d.radius).collect(),
            GeometrySpec::Explicit { .. } => return None,
        };
        let max = sizes.iter().copied().max_by(|a, b| a.cmp_total(b))?;
        let min = sizes.iter().copied().min_by(|a, b| a.cmp_total(b))?;
        Some(max.clone() / min.clone())
    }
}

/// Intersection graph of the geometry; touching shapes interfere.
pub fn build_interference_graph<T: Scalar>(geometry: &GeometrySpec<T>) -> Result<Graph> {
    geometry.validate()?;
    match geometry {
        GeometrySpec::Interval(iv) => {
            let mut g = Graph::empty(iv.len());
            for u in 0..iv.len() {
                for v in u + 1..iv.len() {
                    let (a, b) = (&iv[u], &iv[v]);
                    let a_right = a.left.clone() + a.length.clone();
                    let b_right = b.left.clone() + b.length.clone();
                    if a.left <= b_right && b.left <= a_right {
                        g.add_edge(u, v);
                    }
                }
            }
            Ok(g)
        }
        GeometrySpec::Disk(ds) => {
            let mut g = Graph::empty(ds.len());
            for u in 0..ds.len() {
                for v in u + 1..ds.len() {
                    let (a, b) = (&ds[u], &ds[v]);
                    let dx = a.x.clone() - b.x.clone();
                    let dy = a.y.clone() - b.y.clone();
                    let reach = a.radius.clone() + b.radius.clone();
                    if dx.clone() * dx + dy.clone() * dy <= reach.clone() * reach {
                        g.add_edge(u, v);
                    }
                }
            }
            Ok(g)
        }
        GeometrySpec::Explicit { vertices, edges, .. } => Graph::from_edges(*vertices, edges),
    }
}

/// Approximation parameter of greedy independent sets on this class of
/// graph: `2 + γ` for intervals, `(2 + γ)²` for disks, `d` for degree-`d`
/// graphs. An empty geometric instance reports `γ = 1`.
pub fn claw_bound<T: Scalar>(geometry: &GeometrySpec<T>) -> T {
    let two = T::one() + T::one();
    match geometry {
        GeometrySpec::Interval(_) => two + geometry.gamma().unwrap_or_else(T::one),
        GeometrySpec::Disk(_) => {
            let s = two + geometry.gamma().unwrap_or_else(T::one);
            s.clone() * s
        }
        GeometrySpec::Explicit { max_degree, .. } => T::from_count(*max_degree),
    }
}

/// `1 - e^{-1/α}`, the welfare guarantee of the greedy k-colouring.
pub fn coloring_guarantee(alpha: f64) -> f64 {
    1.0 - (-1.0 / alpha).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn iv(left: i64, len: i64) -> Interval<Rational> {
        Interval { left: r(left), length: r(len) }
    }

    #[test]
    fn touching_intervals_interfere() {
        let g = build_interference_graph(&GeometrySpec::Interval(vec![iv(0, 1), iv(1, 1)])).unwrap();
        assert!(g.is_adjacent(0, 1));
        let g = build_interference_graph(&GeometrySpec::Interval(vec![iv(0, 1), iv(2, 1)])).unwrap();
        assert!(!g.is_adjacent(0, 1));
    }

    #[test]
    fn distant_disks_do_not_interfere() {
        let d = |x: i64| Disk { x: r(x), y: r(0), radius: r(1) };
        let g = build_interference_graph(&GeometrySpec::Disk(vec![d(0), d(3)])).unwrap();
        assert!(!g.is_adjacent(0, 1));
        let g = build_interference_graph(&GeometrySpec::Disk(vec![d(0), d(2)])).unwrap();
        assert!(g.is_adjacent(0, 1));
    }

    #[test]
    fn nonpositive_sizes_rejected() {
        assert!(build_interference_graph(&GeometrySpec::Interval(vec![iv(0, 0)])).is_err());
        let bad = Disk { x: r(0), y: r(0), radius: r(-1) };
        assert!(build_interference_graph(&GeometrySpec::Disk(vec![bad])).is_err());
    }

    #[test]
    fn explicit_degree_bound_is_checked() {
        let spec = GeometrySpec::<Rational>::Explicit {
            vertices: 4,
            edges: vec![(0, 1), (0, 2), (0, 3)],
            max_degree: 2,
        };
        assert!(build_interference_graph(&spec).is_err());
    }

    #[test]
    fn claw_bounds_for_unit_shapes() {
        assert_eq!(claw_bound(&GeometrySpec::Interval(vec![iv(0, 1), iv(5, 1)])), r(3));
        let unit = Disk { x: r(0), y: r(0), radius: r(1) };
        assert_eq!(claw_bound(&GeometrySpec::Disk(vec![unit])), r(9));
        let spec = GeometrySpec::<Rational>::Explicit { vertices: 1, edges: vec![], max_degree: 4 };
        assert_eq!(claw_bound(&spec), r(4));
        // gamma = 3 / 1
        assert_eq!(claw_bound(&GeometrySpec::Interval(vec![iv(0, 1), iv(5, 3)])), r(5));
    }
}
