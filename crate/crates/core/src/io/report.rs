//! Run reports in text and JSON form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::auction::Orientation;
use crate::error::Result;
use crate::io::{format_rational, Exact, Mechanism, Prepared, Problem};
use crate::network::{check_capacity_feasibility, dual_certificate, greedy_routing};
use crate::oracles::{opt_k_colorable, opt_routing, opt_setcover, OracleBudget};
use crate::registry::{RunSummary, TraceEntry};
use crate::scalar::Scalar;
use crate::setcover::{dual_cover_certificate, primal_dual_cover};
use crate::spectrum::coloring_guarantee;
use crate::Rational;

/// Relative slack allowed when comparing against guarantees that involve `e`.
pub const RATIO_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    /// No optimum was computed, so the ratio was not checked.
    Unchecked,
    #[serde(rename = "FAILED")]
    Failed,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RatioParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channels: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_capacity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frequency: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    /// `Σ c(e) y(e)` before the first and after every selection.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_mass_history: Option<Vec<f64>>,
    /// Upper bound on the optimum from the edge prices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_upper_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capacity_violations: Option<Vec<usize>>,
    /// Lower bound on the optimum from the element prices.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover_lower_bound: Option<Exact>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element_prices: Option<Vec<Exact>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub problem: Problem,
    pub orientation: Orientation,
    /// Active bidders at the end (they transact).
    pub allocation: Vec<usize>,
    /// Rejected bidders in rejection order (they keep their rights).
    pub retained: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub payments: Option<Vec<Exact>>,
    /// Bids summed over the retained bidders; a cost for set cover.
    pub retained_welfare: Exact,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub optimum: Option<Exact>,
    /// Retained over optimum, or optimum over cost for set cover.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub achieved_ratio: Option<f64>,
    pub theoretical_ratio: f64,
    pub params: RatioParams,
    pub trace: Vec<TraceEntry>,
    pub certificates: Certificates,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub flagged: Vec<usize>,
    pub status: RunStatus,
}

fn ratio(num: Rational, den: Rational) -> f64 {
    if den == Rational::from_integer(0) {
        1.0
    } else {
        (num / den).as_f64()
    }
}

/// Assembles a report; runs the brute-force optimum when `oracle` is set.
pub fn build_report(prep: &Prepared, summary: &RunSummary, oracle: Option<OracleBudget>) -> Result<RunReport> {
    let bids = &prep.bids;
    let mut params = RatioParams::default();
    let mut certs = Certificates::default();
    let mut optimum = None;
    let mut failed = false;
    let theoretical;
    let achieved;
    match &prep.mechanism {
        Mechanism::Spectrum(inst) => {
            let alpha = inst.claw_bound().as_f64();
            params.alpha = Some(alpha);
            params.gamma = inst.geometry().gamma().map(|g| g.as_f64());
            params.channels = Some(inst.channels());
            theoretical = coloring_guarantee(alpha);
            if let Some(budget) = oracle {
                let (_, opt) = opt_k_colorable(inst.graph(), bids, inst.channels(), budget)?;
                optimum = Some(opt);
            }
            achieved = optimum.map(|o| ratio(summary.retained_welfare, o));
        }
        Mechanism::Network(rule) => {
            let inst = rule.instance();
            let gamma = inst.connector_gamma();
            params.gamma = Some(gamma);
            params.min_capacity = inst.graph().min_capacity();
            params.edges = Some(inst.graph().edge_count());
            if inst.has_multicast() {
                params.note = Some("multicast connectors are 2-approximate Steiner trees, so gamma = 2".into());
            }
            theoretical = inst.welfare_guarantee();
            let sol = greedy_routing(inst, bids)?;
            let load = check_capacity_feasibility(&sol, inst);
            failed |= !load.violations.is_empty();
            certs.capacity_violations = Some(load.violations);
            certs.dual_upper_bound = Some(dual_certificate(inst, &sol.dual, bids)?.bound);
            certs.dual_mass_history = Some(sol.mass_history);
            if let Some(budget) = oracle {
                optimum = Some(opt_routing(inst, bids, budget)?.2);
            }
            achieved = optimum.map(|o| ratio(summary.retained_welfare, o));
        }
        Mechanism::Setcover(rule) => {
            let inst = rule.instance();
            let f = inst.frequency();
            params.frequency = Some(f);
            theoretical = if f == 0 { 1.0 } else { 1.0 / f as f64 };
            let dual = primal_dual_cover(inst, bids)?;
            certs.cover_lower_bound = Some(Exact(dual_cover_certificate(inst, dual.prices(), bids)?));
            certs.element_prices = Some(dual.prices().iter().copied().map(Exact).collect());
            if let Some(budget) = oracle {
                optimum = Some(opt_setcover(inst, bids, budget)?.1);
            }
            achieved = optimum.map(|o| ratio(o, summary.retained_welfare));
        }
    }
    if let Some(a) = achieved {
        failed |= a < theoretical * (1.0 - RATIO_TOLERANCE);
    }
    let status = if failed {
        RunStatus::Failed
    } else if achieved.is_some() {
        RunStatus::Ok
    } else {
        RunStatus::Unchecked
    };
    Ok(RunReport {
        problem: prep.problem,
        orientation: prep.problem.orientation(),
        allocation: summary.allocation.clone(),
        retained: summary.retained(),
        payments: summary.payments.as_ref().map(|p| p.iter().copied().map(Exact).collect()),
        retained_welfare: Exact(summary.retained_welfare),
        optimum: optimum.map(Exact),
        achieved_ratio: achieved,
        theoretical_ratio: theoretical,
        params,
        trace: summary.trace.clone(),
        certificates: certs,
        flagged: summary.flagged.clone(),
        status,
    })
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::Parse(format!("line {}: {e}", e.line())))
    }
}

fn list(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orientation = match self.orientation {
            Orientation::Procurement => "procurement",
            Orientation::Selling => "selling",
        };
        writeln!(f, "problem      {} ({orientation})", self.problem)?;
        writeln!(f, "allocation   {}", list(&self.allocation))?;
        writeln!(f, "retained     {}", list(&self.retained))?;
        if let Some(p) = &self.payments {
            let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            writeln!(f, "payments     [{}]", parts.join(", "))?;
        }
        let label = if self.problem == Problem::Setcover { "cost" } else { "welfare" };
        writeln!(f, "{label:<12} {}", self.retained_welfare)?;
        if let Some(o) = &self.optimum {
            writeln!(f, "optimum      {o}")?;
        }
        let p = &self.params;
        let mut shown = Vec::new();
        if let Some(a) = p.alpha {
            shown.push(format!("alpha={a}"));
        }
        if let Some(g) = p.gamma {
            shown.push(format!("gamma={g}"));
        }
        if let Some(k) = p.channels {
            shown.push(format!("k={k}"));
        }
        if let Some(c) = p.min_capacity {
            shown.push(format!("C={c}"));
        }
        if let Some(m) = p.edges {
            shown.push(format!("m={m}"));
        }
        if let Some(fr) = p.frequency {
            shown.push(format!("f={fr}"));
        }
        writeln!(f, "guarantee    {:.6} ({})", self.theoretical_ratio, shown.join(" "))?;
        if let Some(note) = &p.note {
            writeln!(f, "             {note}")?;
        }
        match self.achieved_ratio {
            Some(a) => writeln!(f, "achieved     {a:.6}")?,
            None => writeln!(f, "achieved     (no optimum computed)")?,
        }
        writeln!(f, "trace")?;
        for (step, t) in self.trace.iter().enumerate() {
            writeln!(f, "  {:>3}  bidder {:<3} score {}", step + 1, t.bidder, t.score)?;
        }
        let c = &self.certificates;
        if let Some(h) = &c.dual_mass_history {
            let parts: Vec<String> = h.iter().map(|x| format!("{x:.9}")).collect();
            writeln!(f, "dual mass    [{}]", parts.join(", "))?;
        }
        if let Some(b) = c.dual_upper_bound {
            writeln!(f, "upper bound  {b:.9}")?;
        }
        if let Some(v) = &c.capacity_violations {
            writeln!(f, "overloaded   {}", list(v))?;
        }
        if let Some(y) = &c.element_prices {
            let parts: Vec<String> = y.iter().map(|x| format_rational(&x.0)).collect();
            writeln!(f, "prices       [{}]", parts.join(", "))?;
        }
        if let Some(b) = &c.cover_lower_bound {
            writeln!(f, "lower bound  {b}")?;
        }
        if !self.flagged.is_empty() {
            writeln!(f, "non-monotone {}", list(&self.flagged))?;
        }
        let status = match self.status {
            RunStatus::Ok => "ok",
            RunStatus::Unchecked => "unchecked",
            RunStatus::Failed => "FAILED",
        };
        write!(f, "status       {status}")
    }
}
