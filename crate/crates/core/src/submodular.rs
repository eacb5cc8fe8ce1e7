//! Monotone submodular maximization under a cardinality constraint.
//!
//! The greedy adds, `k` times, an element whose marginal value is within a
//! factor `α` of the best available marginal. With `α = 1` this is the
//! classic `(1 - 1/e)` greedy; in general it guarantees `(1 - e^{-1/α})`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A set function over the ground set `0..ground_size()` with `f(∅) = 0`.
pub trait SetFunction<T> {
    fn ground_size(&self) -> usize;

    /// `set` holds distinct ground elements in any order.
    fn value(&self, set: &[usize]) -> T;

    fn marginal(&self, set: &[usize], element: usize) -> T
    where
        T: Scalar,
    {
        let mut with = set.to_vec();
        with.push(element);
        self.value(&with) - self.value(set)
    }
}

/// Weighted coverage: each ground element is a family of items and
/// `f(S)` is the total weight of the items covered by `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageFunction<T> {
    families: Vec<Vec<usize>>,
    weights: Vec<T>,
}

impl<T: Scalar> CoverageFunction<T> {
    pub fn new(families: Vec<Vec<usize>>, weights: Vec<T>) -> Result<Self> {
        if let Some(&bad) = families.iter().flatten().find(|&&x| x >= weights.len()) {
            return Err(Error::InvalidInstance(format!("item {bad} has no weight")));
        }
        if weights.iter().any(|w| *w < T::zero()) {
            return Err(Error::InvalidInstance("negative item weight".into()));
        }
        Ok(CoverageFunction { families, weights })
    }

    pub fn families(&self) -> &[Vec<usize>] {
        &self.families
    }
}

impl<T: Scalar> SetFunction<T> for CoverageFunction<T> {
    fn ground_size(&self) -> usize {
        self.families.len()
    }

    fn value(&self, set: &[usize]) -> T {
        let mut covered = vec![false; self.weights.len()];
        let mut total = T::zero();
        for &s in set {
            for &item in &self.families[s] {
                if !std::mem::replace(&mut covered[item], true) {
                    total = total + self.weights[item].clone();
                }
            }
        }
        total
    }
}

/// Chooses the next element given `(element, marginal)` candidates
/// (nonempty, ascending by element).
pub trait ElementPicker<T> {
    /// The approximation factor this picker promises.
    fn alpha(&self) -> T;

    fn pick(&self, candidates: &[(usize, T)]) -> usize;
}

/// Exact argmax, lowest element on ties.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactPicker;

impl<T: Scalar> ElementPicker<T> for ExactPicker {
    fn alpha(&self) -> T {
        T::one()
    }

    fn pick(&self, candidates: &[(usize, T)]) -> usize {
        let mut best = &candidates[0];
        for c in &candidates[1..] {
            if c.1 > best.1 {
                best = c;
            }
        }
        best.0
    }
}

/// Deliberately weak picker: the smallest marginal that is still at least
/// `max / α` (lowest element on ties).
#[derive(Debug, Clone)]
pub struct WeakestAllowedPicker<T> {
    pub alpha: T,
}

impl<T: Scalar> ElementPicker<T> for WeakestAllowedPicker<T> {
    fn alpha(&self) -> T {
        self.alpha.clone()
    }

    fn pick(&self, candidates: &[(usize, T)]) -> usize {
        let max = candidates
            .iter()
            .map(|c| &c.1)
            .max_by(|a, b| a.cmp_total(b))
            .expect("nonempty")
            .clone();
        let mut pick: Option<&(usize, T)> = None;
        for c in candidates {
            if c.1.clone() * self.alpha.clone() >= max && pick.map_or(true, |p| c.1 < p.1) {
                pick = Some(c);
            }
        }
        pick.expect("the maximum itself qualifies").0
    }
}

/// Trace of one greedy run.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyRun<T> {
    /// Chosen elements in order.
    pub chosen: Vec<usize>,
    /// `f(S_0), f(S_1), ...`, one longer than `chosen`.
    pub values: Vec<T>,
}

impl<T: Scalar> GreedyRun<T> {
    pub fn value(&self) -> &T {
        self.values.last().expect("f(S_0) is always recorded")
    }
}

/// Greedy with an `α`-approximate picker. Fails if the picker returns an
/// element outside the candidates or one whose marginal breaks its promise.
pub fn greedy_cardinality_max<T, F, P>(oracle: &F, k: usize, picker: &P) -> Result<GreedyRun<T>>
where
    T: Scalar,
    F: SetFunction<T> + ?Sized,
    P: ElementPicker<T> + ?Sized,
{
    let m = oracle.ground_size();
    let mut chosen: Vec<usize> = Vec::new();
    let mut values = vec![oracle.value(&chosen)];
    let alpha = picker.alpha();
    for _ in 0..k.min(m) {
        let candidates: Vec<(usize, T)> = (0..m)
            .filter(|e| !chosen.contains(e))
            .map(|e| (e, oracle.marginal(&chosen, e)))
            .collect();
        let e = picker.pick(&candidates);
        let Some((_, gain)) = candidates.iter().find(|c| c.0 == e) else {
            return Err(Error::Fault(format!("picker returned unavailable element {e}")));
        };
        let max = candidates.iter().map(|c| &c.1).max_by(|a, b| a.cmp_total(b)).expect("nonempty");
        if gain.clone() * alpha.clone() < *max {
            return Err(Error::Fault(format!(
                "picker chose marginal {gain} below max {max} / alpha {alpha}"
            )));
        }
        chosen.push(e);
        values.push(oracle.value(&chosen));
    }
    Ok(GreedyRun { chosen, values })
}

/// Exact `max_{|S| <= k} f(S)` by enumeration; refuses when the number of
/// subsets exceeds `max_subsets`.
pub fn brute_force_max<T, F>(oracle: &F, k: usize, max_subsets: u64) -> Result<(Vec<usize>, T)>
where
    T: Scalar,
    F: SetFunction<T> + ?Sized,
{
    let m = oracle.ground_size();
    let k = k.min(m);
    let count: u64 = (0..=k).map(|j| binomial(m as u64, j as u64)).fold(0u64, u64::saturating_add);
    if count > max_subsets {
        return Err(Error::BudgetExceeded {
            what: "subset enumeration".into(),
            needed: count,
            limit: max_subsets,
        });
    }
    let mut best = (Vec::new(), oracle.value(&[]));
    let mut cur = Vec::new();
    enumerate(oracle, m, k, 0, &mut cur, &mut best);
    Ok(best)
}

fn enumerate<T: Scalar, F: SetFunction<T> + ?Sized>(
    oracle: &F,
    m: usize,
    k: usize,
    start: usize,
    cur: &mut Vec<usize>,
    best: &mut (Vec<usize>, T),
) {
    if !cur.is_empty() {
        let v = oracle.value(cur);
        if v > best.1 {
            *best = (cur.clone(), v);
        }
    }
    if cur.len() == k {
        return;
    }
    for e in start..m {
        cur.push(e);
        enumerate(oracle, m, k, e + 1, cur, best);
        cur.pop();
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// `achieved >= (1 - e^{-1/α}) · optimum`, with relative slack `1e-12` on
/// the irrational constant.
pub fn check_greedy_bound<T: Scalar>(optimum: &T, alpha: f64, achieved: &T) -> bool {
    if achieved >= optimum {
        return true;
    }
    let bound = (1.0 - (-1.0 / alpha).exp()) * optimum.as_f64();
    achieved.as_f64() >= bound * (1.0 - 1e-12)
}

/// Per-step progress: `f(S_{j+1}) - f(S_j) >= (f(O) - f(S_j)) / (αk)` for
/// every recorded step. Exact in `T`.
pub fn check_step_progress<T: Scalar>(run: &GreedyRun<T>, optimum: &T, alpha: &T, k: usize) -> bool {
    let ak = alpha.clone() * T::from_count(k);
    run.values
        .windows(2)
        .all(|w| (w[1].clone() - w[0].clone()) * ak.clone() >= optimum.clone() - w[0].clone())
}

/// Geometric decay: `f(O) - f(S_j) <= (1 - 1/(αk))^j f(O)`. Exact in `T`.
pub fn check_gap_decay<T: Scalar>(run: &GreedyRun<T>, optimum: &T, alpha: &T, k: usize) -> bool {
    let factor = T::one() - T::one() / (alpha.clone() * T::from_count(k));
    let mut pow = T::one();
    for v in &run.values {
        if optimum.clone() - v.clone() > pow.clone() * optimum.clone() {
            return false;
        }
        pow = pow * factor.clone();
    }
    true
}

/// Spot-checks `f(∅) = 0`, monotonicity and diminishing returns on the
/// given `(A, B, i)` triples, where `A ⊆ B` is required of the caller.
pub fn check_submodular_triples<T, F>(oracle: &F, triples: &[(Vec<usize>, Vec<usize>, usize)]) -> bool
where
    T: Scalar,
    F: SetFunction<T> + ?Sized,
{
    if !oracle.value(&[]).is_zero() {
        return false;
    }
    triples.iter().all(|(a, b, i)| {
        let mono = oracle.value(a) <= oracle.value(b);
        let dr = b.contains(i) || oracle.marginal(a, *i) >= oracle.marginal(b, *i);
        mono && dr
    })
}
