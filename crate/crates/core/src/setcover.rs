//! Cost minimization under set-cover constraints.
//!
//! Bidders hold contracts (sets of responsibilities) and bid to be released
//! early. The auctioneer must keep enough contracts that every element stays
//! covered. The primal-dual greedy raises the dual price of an uncovered
//! element until some set becomes tight and keeps that set; its inverted DA
//! auction rejects the bidder with the smallest remaining slack.

use std::sync::Arc;

use crate::auction::{Orientation, Scorer, ScoringRule};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Score};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    elements: usize,
    sets: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    /// Sets are normalised to sorted, deduplicated element lists.
    pub fn new(elements: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut covered = vec![false; elements];
        let mut norm = Vec::with_capacity(sets.len());
        for (i, mut s) in sets.into_iter().enumerate() {
            s.sort_unstable();
            s.dedup();
            if let Some(&e) = s.iter().find(|&&e| e >= elements) {
                return Err(Error::InvalidInstance(format!("set {i} names unknown element {e}")));
            }
            for &e in &s {
                covered[e] = true;
            }
            norm.push(s);
        }
        if let Some(e) = covered.iter().position(|c| !c) {
            return Err(Error::InvalidInstance(format!("element {e} is in no set")));
        }
        Ok(SetCoverInstance { elements, sets: norm })
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// `f = max_e |{i : e ∈ S_i}|`.
    pub fn frequency(&self) -> usize {
        let mut count = vec![0usize; self.elements];
        for s in &self.sets {
            for &e in s {
                count[e] += 1;
            }
        }
        count.into_iter().max().unwrap_or(0)
    }

    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        let mut covered = vec![false; self.elements];
        for &i in chosen {
            for &e in &self.sets[i] {
                covered[e] = true;
            }
        }
        covered.into_iter().all(|c| c)
    }
}

/// Element prices, the cover built so far and the coverage flags.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverDualState<T> {
    y: Vec<T>,
    covered: Vec<bool>,
    cover: Vec<usize>,
    /// Element whose price was raised for each cover entry.
    raised: Vec<usize>,
}

impl<T: Scalar> CoverDualState<T> {
    pub fn new(inst: &SetCoverInstance) -> Self {
        CoverDualState {
            y: vec![T::zero(); inst.elements],
            covered: vec![false; inst.elements],
            cover: Vec::new(),
            raised: Vec::new(),
        }
    }

    pub fn prices(&self) -> &[T] {
        &self.y
    }

    pub fn cover(&self) -> &[usize] {
        &self.cover
    }

    pub fn raised(&self) -> &[usize] {
        &self.raised
    }

    /// Lowest uncovered element of `S_i`, if any.
    pub fn first_uncovered(&self, inst: &SetCoverInstance, i: usize) -> Option<usize> {
        inst.sets[i].iter().copied().find(|&e| !self.covered[e])
    }

    /// `Σ_{e ∈ S_i} y(e)`.
    pub fn load(&self, inst: &SetCoverInstance, i: usize) -> T {
        inst.sets[i].iter().fold(T::zero(), |acc, &e| acc + self.y[e].clone())
    }

    /// Raises `y(e)` by `amount`, then adds set `i` to the cover.
    fn select(&mut self, inst: &SetCoverInstance, i: usize, e: usize, amount: T) {
        self.y[e] = self.y[e].clone() + amount;
        for &x in &inst.sets[i] {
            self.covered[x] = true;
        }
        self.cover.push(i);
        self.raised.push(e);
    }

    /// `Σ_{e ∈ S_i} y(e) <= c(i)` for every set.
    pub fn is_feasible(&self, inst: &SetCoverInstance, costs: &[T]) -> bool {
        self.y.iter().all(|y| *y >= T::zero())
            && (0..inst.sets.len()).all(|i| self.load(inst, i) <= costs[i])
    }

    /// Every selected set has `Σ y = c`.
    pub fn all_tight(&self, inst: &SetCoverInstance, costs: &[T]) -> bool {
        self.cover.iter().all(|&i| self.load(inst, i) == costs[i])
    }
}

/// Remaining slack of bidder `i` while it still covers something new,
/// `+∞` once all its elements are covered.
pub fn setcover_score<T: Scalar>(inst: &SetCoverInstance, dual: &CoverDualState<T>, bidder: usize, bid: &T) -> Score<T> {
    if dual.first_uncovered(inst, bidder).is_some() {
        Score::Finite(bid.clone() - dual.load(inst, bidder))
    } else {
        Score::Infinite
    }
}

/// Primal-dual cover.
///
/// Each round takes the set with the least slack among sets that still
/// cover an uncovered element (lowest index on ties), and raises the price
/// of its lowest-indexed uncovered element by exactly that slack. Every set
/// containing that element has at least as much slack, so this is a valid
/// "raise `y(e)` until some set is tight" step.
pub fn primal_dual_cover<T: Scalar>(inst: &SetCoverInstance, costs: &[T]) -> Result<CoverDualState<T>> {
    if costs.len() != inst.sets.len() {
        return Err(Error::InvalidBids(format!(
            "expected {} costs, got {}",
            inst.sets.len(),
            costs.len()
        )));
    }
    if costs.iter().any(|c| *c < T::zero()) {
        return Err(Error::InvalidBids("negative cost".into()));
    }
    let mut dual = CoverDualState::new(inst);
    loop {
        let mut best: Option<(usize, usize, T)> = None;
        for i in 0..inst.sets.len() {
            let Some(e) = dual.first_uncovered(inst, i) else { continue };
            let slack = costs[i].clone() - dual.load(inst, i);
            if best.as_ref().map_or(true, |(_, _, s)| slack < *s) {
                best = Some((i, e, slack));
            }
        }
        let Some((i, e, slack)) = best else { break };
        if slack < T::zero() {
            return Err(Error::Fault(format!("set {i} has negative slack")));
        }
        dual.select(inst, i, e, slack);
    }
    Ok(dual)
}

/// `Σ_e y(e)`, a lower bound on the optimal cover cost when `y` is feasible.
pub fn dual_cover_certificate<T: Scalar>(inst: &SetCoverInstance, y: &[T], costs: &[T]) -> Result<T> {
    if y.len() != inst.elements {
        return Err(Error::InvalidInstance("one price per element required".into()));
    }
    if y.iter().any(|v| *v < T::zero()) {
        return Err(Error::Fault("negative element price".into()));
    }
    for (i, s) in inst.sets.iter().enumerate() {
        let load = s.iter().fold(T::zero(), |acc, &e| acc + y[e].clone());
        if load > costs[i] {
            return Err(Error::Fault(format!("set {i} is overpriced: {load} > {}", costs[i])));
        }
    }
    Ok(y.iter().fold(T::zero(), |acc, v| acc + v.clone()))
}

pub fn cover_cost<T: Scalar>(cover: &[usize], costs: &[T]) -> T {
    cover.iter().fold(T::zero(), |acc, &i| acc + costs[i].clone())
}

#[derive(Debug, Clone)]
pub struct SetCoverScorer<T> {
    inst: Arc<SetCoverInstance>,
    dual: CoverDualState<T>,
}

impl<T: Scalar> SetCoverScorer<T> {
    pub fn dual(&self) -> &CoverDualState<T> {
        &self.dual
    }
}

impl<T: Scalar> Scorer<T> for SetCoverScorer<T> {
    type Value = T;

    fn score(&self, bidder: usize, bid: &T) -> Score<T> {
        setcover_score(&self.inst, &self.dual, bidder, bid)
    }

    fn reject(&mut self, bidder: usize, bid: &T) {
        let e = self
            .dual
            .first_uncovered(&self.inst, bidder)
            .expect("rejected bidder had a finite score");
        let slack = bid.clone() - self.dual.load(&self.inst, bidder);
        self.dual.select(&self.inst, bidder, e, slack);
    }
}

#[derive(Debug, Clone)]
pub struct SetCoverRule {
    inst: Arc<SetCoverInstance>,
}

impl SetCoverRule {
    pub fn new(inst: SetCoverInstance) -> Self {
        SetCoverRule { inst: Arc::new(inst) }
    }

    pub fn instance(&self) -> &SetCoverInstance {
        &self.inst
    }
}

impl<T: Scalar> ScoringRule<T> for SetCoverRule {
    type Scorer = SetCoverScorer<T>;

    fn bidders(&self) -> usize {
        self.inst.sets.len()
    }

    fn orientation(&self) -> Orientation {
        Orientation::Selling
    }

    fn scorer(&self) -> SetCoverScorer<T> {
        SetCoverScorer {
            dual: CoverDualState::new(&self.inst),
            inst: Arc::clone(&self.inst),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auction::run_rule;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// S1 = {e1}, S2 = {e2}, S3 = {e1, e2} with costs 1, 1, 3/2.
    fn example() -> (SetCoverInstance, Vec<Rational>) {
        let inst = SetCoverInstance::new(2, vec![vec![0], vec![1], vec![0, 1]]).unwrap();
        (inst, vec![q(1, 1), q(1, 1), q(3, 2)])
    }

    #[test]
    fn example_trace() {
        let (inst, c) = example();
        let dual = primal_dual_cover(&inst, &c).unwrap();
        assert_eq!(dual.cover(), &[0, 2]);
        assert_eq!(dual.raised(), &[0, 1]);
        assert_eq!(dual.prices(), &[q(1, 1), q(1, 2)]);
        assert_eq!(cover_cost(dual.cover(), &c), q(5, 2));
        assert_eq!(inst.frequency(), 2);
        assert_eq!(dual_cover_certificate(&inst, dual.prices(), &c).unwrap(), q(3, 2));
        assert!(dual.all_tight(&inst, &c));
    }

    #[test]
    fn example_scores_after_first_selection() {
        let (inst, c) = example();
        let rule = SetCoverRule::new(inst.clone());
        let mut scorer = <SetCoverRule as ScoringRule<Rational>>::scorer(&rule);
        for i in 0..3 {
            assert_eq!(scorer.score(i, &c[i]), Score::Finite(c[i]));
        }
        scorer.reject(0, &c[0]);
        assert_eq!(scorer.score(2, &c[2]), Score::Finite(q(1, 2)));
        assert_eq!(scorer.score(1, &c[1]), Score::Finite(q(1, 1)));
        scorer.reject(2, &c[2]);
        assert_eq!(scorer.score(1, &c[1]), Score::Infinite);
    }

    #[test]
    fn engine_honors_the_redundant_set() {
        let (inst, c) = example();
        let out = run_rule(&SetCoverRule::new(inst), &c).unwrap();
        assert_eq!(out.retained(), vec![0, 2]);
        assert_eq!(out.allocation, vec![1]);
    }

    #[test]
    fn disjoint_singletons_are_forced() {
        let inst = SetCoverInstance::new(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        let c = vec![q(2, 1), q(7, 3), q(0, 1)];
        let dual = primal_dual_cover(&inst, &c).unwrap();
        let mut cover = dual.cover().to_vec();
        cover.sort_unstable();
        assert_eq!(cover, vec![0, 1, 2]);
        // zero-cost set first, at zero price
        assert_eq!(dual.cover()[0], 2);
        assert_eq!(dual.prices()[2], q(0, 1));
    }

    #[test]
    fn uncoverable_element_rejected() {
        assert!(SetCoverInstance::new(2, vec![vec![0]]).is_err());
        assert!(SetCoverInstance::new(1, vec![vec![3]]).is_err());
    }

    #[test]
    fn overpriced_dual_is_a_fault() {
        let (inst, c) = example();
        assert!(matches!(
            dual_cover_certificate(&inst, &[q(2, 1), q(0, 1)], &c),
            Err(Error::Fault(_))
        ));
        assert_eq!(dual_cover_certificate(&inst, &[q(0, 1), q(0, 1)], &c).unwrap(), q(0, 1));
    }
}
