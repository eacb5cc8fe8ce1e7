#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use da_realloc::io::{generate_instance, GenParams, GeometryClass, InstanceFile, Prepared, Problem};
use da_realloc::oracles::OracleBudget;
use da_realloc::Rational;

pub const BUDGET: OracleBudget = OracleBudget { max_states: 200_000_000, timeout: None };

pub fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn fixture(name: &str) -> Prepared {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    let text = std::fs::read_to_string(path).expect("fixture exists");
    InstanceFile::parse(&text).expect("fixture parses").prepare().expect("fixture is valid")
}

fn sizing(tag: u64, seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(tag.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ seed)
}

pub fn class_span(class: GeometryClass, n: usize) -> Rational {
    match class {
        GeometryClass::Interval => Rational::new(n as i64, 2),
        GeometryClass::Disk => Rational::new(3 * n as i64, 4).min(r(3)),
        GeometryClass::Degree => r(0),
    }
}

/// Small instances for the exhaustive incentive checks.
pub fn incentive_params(problem: Problem, seed: u64) -> GenParams {
    let mut rng = sizing(1, seed);
    let levels = rng.gen_range(3..=8);
    match problem {
        Problem::Spectrum => {
            let n = rng.gen_range(2..=6);
            let class = [GeometryClass::Interval, GeometryClass::Disk, GeometryClass::Degree][seed as usize % 3];
            GenParams {
                bidders: n,
                levels,
                channels: rng.gen_range(1..=2),
                class,
                span: class_span(class, n),
                max_degree: 3,
                ..GenParams::default()
            }
        }
        Problem::Network => GenParams {
            bidders: rng.gen_range(2..=5),
            levels,
            nodes: rng.gen_range(3..=6),
            extra_edges: rng.gen_range(0..=3),
            capacity: 2.0,
            capacity_spread: rng.gen_range(0..=1),
            multicast_prob: if seed % 4 == 0 { 0.4 } else { 0.0 },
            ..GenParams::default()
        },
        Problem::Setcover => GenParams {
            bidders: rng.gen_range(2..=4),
            levels,
            elements: rng.gen_range(2..=5),
            density: 0.45,
            ..GenParams::default()
        },
    }
}

pub fn incentive_corpus(problem: Problem, count: u64) -> Vec<(u64, Prepared)> {
    (0..count)
        .map(|seed| {
            let p = incentive_params(problem, seed);
            let f = generate_instance(problem, seed, &p).expect("generator params are valid");
            (seed, f.prepare().expect("generated instances are valid"))
        })
        .collect()
}

/// Spectrum instances of one class with `n ≤ max_n` for the approximation
/// checks.
pub fn spectrum_corpus(class: GeometryClass, count: u64, max_n: usize, max_k: usize, tag: u64) -> Vec<(u64, Prepared)> {
    degree_corpus(class, count, max_n, max_k, 4, tag)
}

pub fn degree_corpus(class: GeometryClass, count: u64, max_n: usize, max_k: usize, degree: usize, tag: u64) -> Vec<(u64, Prepared)> {
    (0..count)
        .map(|seed| {
            let mut rng = sizing(tag, seed);
            let n = rng.gen_range(2..=max_n);
            let p = GenParams {
                bidders: n,
                levels: 8,
                channels: rng.gen_range(1..=max_k),
                class,
                span: class_span(class, n),
                max_degree: degree,
                ..GenParams::default()
            };
            let f = generate_instance(Problem::Spectrum, seed ^ (tag << 32), &p).expect("valid params");
            (seed, f.prepare().expect("valid instance"))
        })
        .collect()
}

pub fn network_corpus(count: u64, tag: u64) -> Vec<(u64, Prepared)> {
    (0..count)
        .map(|seed| {
            let mut rng = sizing(tag, seed);
            let p = GenParams {
                bidders: rng.gen_range(1..=5),
                levels: 8,
                nodes: rng.gen_range(2..=6),
                extra_edges: rng.gen_range(0..=4),
                capacity: 2.0,
                capacity_spread: 0,
                multicast_prob: if seed % 3 == 0 { 0.5 } else { 0.0 },
                ..GenParams::default()
            };
            let f = generate_instance(Problem::Network, seed ^ (tag << 32), &p).expect("valid params");
            (seed, f.prepare().expect("valid instance"))
        })
        .collect()
}

pub fn setcover_corpus(count: u64, max_sets: usize, tag: u64) -> Vec<(u64, Prepared)> {
    (0..count)
        .map(|seed| {
            let mut rng = sizing(tag, seed);
            let p = GenParams {
                bidders: rng.gen_range(1..max_sets),
                levels: 8,
                elements: rng.gen_range(1..=8),
                density: rng.gen_range(0.2..0.6),
                ..GenParams::default()
            };
            let f = generate_instance(Problem::Setcover, seed ^ (tag << 32), &p).expect("valid params");
            (seed, f.prepare().expect("valid instance"))
        })
        .collect()
}
