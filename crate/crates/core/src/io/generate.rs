//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::auction::BidSpace;
use crate::error::{Error, Result};
use crate::io::{
    DiskFile, Exact, FirmFile, GeometryFile, InstanceFile, IntervalFile, NetworkPayload, Problem,
    SetCoverPayload, SpectrumPayload,
};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryClass {
    Interval,
    Disk,
    /// Random graph with a degree bound.
    Degree,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    /// Bidders (spectrum vertices, firms, or sets before any safety set).
    pub bidders: usize,
    /// Size of each bid menu; at least 3.
    pub levels: usize,

    pub channels: usize,
    pub class: GeometryClass,
    /// Ratio of largest to smallest length or radius.
    pub gamma: Rational,
    /// Positions are drawn from `[0, span]` on a quarter grid.
    pub span: Rational,
    pub max_degree: usize,

    pub nodes: usize,
    pub extra_edges: usize,
    /// Minimum edge capacity `C`; must exceed 1.
    pub capacity: f64,
    /// Capacities are `C + j` for `j` drawn from `0..=capacity_spread`.
    pub capacity_spread: u32,
    pub multicast_prob: f64,

    pub elements: usize,
    pub density: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            bidders: 6,
            levels: 6,
            channels: 1,
            class: GeometryClass::Interval,
            gamma: Rational::from_integer(1),
            span: Rational::from_integer(3),
            max_degree: 4,
            nodes: 5,
            extra_edges: 2,
            capacity: 2.0,
            capacity_spread: 0,
            multicast_prob: 0.0,
            elements: 5,
            density: 0.35,
        }
    }
}

impl GenParams {
    pub fn validate(&self, problem: Problem) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInstance(format!("generator: {m}")));
        if self.levels < 3 {
            return bad("levels must be at least 3");
        }
        match problem {
            Problem::Spectrum => {
                if self.channels == 0 {
                    return bad("channels must be at least 1");
                }
                if self.gamma < Rational::from_integer(1) {
                    return bad("gamma must be at least 1");
                }
                if self.span < Rational::from_integer(0) {
                    return bad("span must be nonnegative");
                }
            }
            Problem::Network => {
                if !(self.capacity > 1.0) || !self.capacity.is_finite() {
                    return bad("minimum capacity must exceed 1");
                }
                if self.nodes < 2 {
                    return bad("at least two nodes are required");
                }
                if !(0.0..=1.0).contains(&self.multicast_prob) {
                    return bad("multicast probability must lie in [0, 1]");
                }
            }
            Problem::Setcover => {
                if self.elements == 0 {
                    return bad("at least one element is required");
                }
                if !(0.0..=1.0).contains(&self.density) {
                    return bad("density must lie in [0, 1]");
                }
            }
        }
        Ok(())
    }
}

fn quarter(rng: &mut ChaCha8Rng, span: Rational) -> Rational {
    let steps = (span * 4).floor().to_integer();
    Rational::new(rng.gen_range(0..=steps), 4)
}

/// A size in `[1, γ]`; the first two vertices pin both ends so `γ` is exact.
fn size(rng: &mut ChaCha8Rng, gamma: Rational, v: usize) -> Rational {
    let one = Rational::from_integer(1);
    match v {
        0 => one,
        1 => gamma,
        _ => one + (gamma - one) * Rational::new(rng.gen_range(0..=4), 4),
    }
}

fn spectrum_payload(rng: &mut ChaCha8Rng, p: &GenParams) -> SpectrumPayload {
    let n = p.bidders;
    let geometry = match p.class {
        GeometryClass::Interval => GeometryFile::Interval {
            intervals: (0..n)
                .map(|v| {
                    let left = Exact(quarter(rng, p.span));
                    IntervalFile { left, length: Exact(size(rng, p.gamma, v)) }
                })
                .collect(),
        },
        GeometryClass::Disk => GeometryFile::Disk {
            disks: (0..n)
                .map(|v| {
                    let x = Exact(quarter(rng, p.span));
                    let y = Exact(quarter(rng, p.span));
                    DiskFile { x, y, radius: Exact(size(rng, p.gamma, v) / 2) }
                })
                .collect(),
        },
        GeometryClass::Degree => {
            let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            pairs.shuffle(rng);
            let mut degree = vec![0usize; n];
            let mut edges = Vec::new();
            for (u, v) in pairs {
                if degree[u] < p.max_degree && degree[v] < p.max_degree && rng.gen_bool(0.5) {
                    degree[u] += 1;
                    degree[v] += 1;
                    edges.push((u, v));
                }
            }
            edges.sort_unstable();
            GeometryFile::Explicit { vertices: n, edges, max_degree: p.max_degree }
        }
    };
    SpectrumPayload { channels: p.channels, geometry }
}

fn network_payload(rng: &mut ChaCha8Rng, p: &GenParams) -> NetworkPayload {
    let n = p.nodes;
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    let mut missing: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|e| !edges.contains(e))
        .collect();
    missing.shuffle(rng);
    edges.extend(missing.into_iter().take(p.extra_edges));
    let capacities = edges
        .iter()
        .map(|_| p.capacity + f64::from(rng.gen_range(0..=p.capacity_spread)))
        .collect();
    let demands = [0.25, 0.5, 0.75, 1.0];
    let firms = (0..p.bidders)
        .map(|_| {
            let demand = demands[rng.gen_range(0..demands.len())];
            let mut nodes: Vec<usize> = (0..n).collect();
            nodes.shuffle(rng);
            if n >= 3 && rng.gen_bool(p.multicast_prob) {
                FirmFile::Multicast { terminals: nodes[..3].to_vec(), demand }
            } else {
                FirmFile::Unicast { source: nodes[0], sink: nodes[1], demand }
            }
        })
        .collect();
    NetworkPayload { nodes: n, edges, capacities, firms }
}

fn setcover_payload(rng: &mut ChaCha8Rng, p: &GenParams) -> SetCoverPayload {
    let mut sets: Vec<Vec<usize>> = (0..p.bidders)
        .map(|_| (0..p.elements).filter(|_| rng.gen_bool(p.density)).collect())
        .collect();
    let orphans: Vec<usize> = (0..p.elements).filter(|e| !sets.iter().any(|s| s.contains(e))).collect();
    if !orphans.is_empty() {
        sets.push(orphans);
    }
    SetCoverPayload { elements: p.elements, sets }
}

/// Random menus of `levels` distinct integers in `[0, 2·levels]`, with caps at
/// the second-largest level and values strictly between the smallest level
/// and the cap (inclusive), so truthful bids exist in both orientations.
fn bids_for(rng: &mut ChaCha8Rng, bidders: usize, levels: usize) -> (BidSpace<Rational>, Vec<Rational>) {
    let mut menus = Vec::with_capacity(bidders);
    let mut caps = Vec::with_capacity(bidders);
    let mut values = Vec::with_capacity(bidders);
    let pool: Vec<i64> = (0..=2 * levels as i64).collect();
    for _ in 0..bidders {
        let mut menu: Vec<i64> = pool.choose_multiple(rng, levels).copied().collect();
        menu.sort_unstable();
        let cap = menu[levels - 2];
        values.push(Rational::from_integer(rng.gen_range(menu[0] + 1..=cap)));
        caps.push(Rational::from_integer(cap));
        menus.push(menu.into_iter().map(Rational::from_integer).collect());
    }
    let space = BidSpace::new(menus, Some(caps)).expect("generated menus are valid");
    (space, values)
}

/// Deterministic in `(problem, seed, params)`.
pub fn generate_instance(problem: Problem, seed: u64, params: &GenParams) -> Result<InstanceFile> {
    params.validate(problem)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut spectrum, mut network, mut setcover) = (None, None, None);
    let bidders = match problem {
        Problem::Spectrum => {
            spectrum = Some(spectrum_payload(&mut rng, params));
            params.bidders
        }
        Problem::Network => {
            network = Some(network_payload(&mut rng, params));
            params.bidders
        }
        Problem::Setcover => {
            let payload = setcover_payload(&mut rng, params);
            let n = payload.sets.len();
            setcover = Some(payload);
            n
        }
    };
    let (space, values) = bids_for(&mut rng, bidders, params.levels);
    let file = InstanceFile { spectrum, network, setcover, ..InstanceFile::from_parts(problem, &space, &values, None) };
    file.prepare()?;
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_bytes() {
        for problem in Problem::ALL {
            let p = GenParams::default();
            let a = generate_instance(problem, 7, &p).unwrap().to_json();
            let b = generate_instance(problem, 7, &p).unwrap().to_json();
            assert_eq!(a, b);
            assert_ne!(a, generate_instance(problem, 8, &p).unwrap().to_json());
        }
    }

    #[test]
    fn unit_intervals_have_equal_lengths() {
        let f = generate_instance(Problem::Spectrum, 7, &GenParams::default()).unwrap();
        let Some(SpectrumPayload { geometry: GeometryFile::Interval { intervals }, .. }) = f.spectrum else {
            panic!("interval payload expected")
        };
        assert!(intervals.iter().all(|i| i.length == Exact(Rational::from_integer(1))));
    }

    #[test]
    fn bad_params_rejected() {
        let p = GenParams { capacity: 1.0, ..GenParams::default() };
        assert!(generate_instance(Problem::Network, 1, &p).is_err());
        let p = GenParams { gamma: Rational::new(1, 2), ..GenParams::default() };
        assert!(generate_instance(Problem::Spectrum, 1, &p).is_err());
        let p = GenParams { levels: 2, ..GenParams::default() };
        assert!(generate_instance(Problem::Setcover, 1, &p).is_err());
    }

    #[test]
    fn setcover_always_covers() {
        let p = GenParams { density: 0.1, ..GenParams::default() };
        for seed in 0..100 {
            let f = generate_instance(Problem::Setcover, seed, &p).unwrap();
            let inst = f.setcover.unwrap().build().unwrap();
            assert!(inst.is_cover(&(0..inst.sets().len()).collect::<Vec<_>>()));
        }
    }
}
