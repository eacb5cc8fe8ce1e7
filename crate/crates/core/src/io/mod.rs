//! Instance files, generators and run reports.
//!
//! Instances are JSON documents. Bids, values and geometry are exact
//! rationals written as strings (`"3"`, `"3/2"`, `"0.25"`); network
//! capacities and demands are plain JSON numbers.

mod generate;
mod report;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::auction::{BidSpace, Orientation};
use crate::error::{Error, Result};
use crate::network::{CapacitatedGraph, Firm, NetworkInstance, NetworkRule, Terminals};
use crate::setcover::{SetCoverInstance, SetCoverRule};
use crate::spectrum::{Disk, GeometrySpec, Interval, SpectrumInstance};
use crate::Rational;

pub use generate::{generate_instance, GenParams, GeometryClass};
pub use report::{build_report, Certificates, RatioParams, RunReport, RunStatus, RATIO_TOLERANCE};

/// Parses `"7"`, `"-3/4"` or `"1.25"` exactly.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    let bad = || format!("not an exact number: {s:?}");
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let scale = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let mag = whole.abs().checked_mul(scale).and_then(|w| w.checked_add(f)).ok_or_else(bad)?;
        return Ok(Rational::new(if negative { -mag } else { mag }, scale));
    }
    s.parse::<i64>().map(Rational::from_integer).map_err(|_| bad())
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An exact number in a file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub Rational);

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for Exact {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_rational(s).map(Exact)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(Exact).map_err(serde::de::Error::custom)
    }
}

fn exact_vec(xs: &[Rational]) -> Vec<Exact> {
    xs.iter().copied().map(Exact).collect()
}

fn inner_vec(xs: &[Exact]) -> Vec<Rational> {
    xs.iter().map(|x| x.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Spectrum,
    Network,
    Setcover,
}

impl Problem {
    pub const ALL: [Problem; 3] = [Problem::Spectrum, Problem::Network, Problem::Setcover];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Spectrum => "spectrum",
            Problem::Network => "network",
            Problem::Setcover => "setcover",
        }
    }

    pub fn orientation(self) -> Orientation {
        match self {
            Problem::Setcover => Orientation::Selling,
            _ => Orientation::Procurement,
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown problem {s:?} (expected spectrum, network or setcover)")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalFile {
    pub left: Exact,
    pub length: Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskFile {
    pub x: Exact,
    pub y: Exact,
    pub radius: Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GeometryFile {
    Interval { intervals: Vec<IntervalFile> },
    Disk { disks: Vec<DiskFile> },
    Explicit { vertices: usize, edges: Vec<(usize, usize)>, max_degree: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumPayload {
    pub channels: usize,
    pub geometry: GeometryFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FirmFile {
    Unicast { source: usize, sink: usize, demand: f64 },
    /// The first terminal is the source.
    Multicast { terminals: Vec<usize>, demand: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkPayload {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub capacities: Vec<f64>,
    pub firms: Vec<FirmFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetCoverPayload {
    pub elements: usize,
    pub sets: Vec<Vec<usize>>,
}

/// On-disk instance. Exactly one payload, matching `problem`, is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub problem: Problem,
    /// Allowed bids per bidder, strictly increasing.
    pub bid_spaces: Vec<Vec<Exact>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_caps: Option<Vec<Exact>>,
    /// True values, used for truthful bids and verification.
    pub values: Vec<Exact>,
    /// Submitted bids; truthful bids are derived from `values` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bids: Option<Vec<Exact>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumPayload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkPayload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setcover: Option<SetCoverPayload>,
}

/// A validated instance ready to run.
#[derive(Debug, Clone)]
pub enum Mechanism {
    Spectrum(SpectrumInstance<Rational>),
    Network(NetworkRule<f64>),
    Setcover(SetCoverRule),
}

#[derive(Debug, Clone)]
pub struct Prepared {
    pub problem: Problem,
    pub mechanism: Mechanism,
    pub space: BidSpace<Rational>,
    pub values: Vec<Rational>,
    pub bids: Vec<Rational>,
}

fn line_context(text: &str, err: &serde_json::Error) -> Error {
    let line = err.line();
    let snippet = text.lines().nth(line.saturating_sub(1)).unwrap_or("").trim();
    Error::Parse(format!("line {line}, column {}: {err}\n  | {snippet}", err.column()))
}

impl InstanceFile {
    /// Parses and validates.
    pub fn parse(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| line_context(text, &e))?;
        file.prepare()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files always serialize");
        s.push('\n');
        s
    }

    pub fn from_parts(
        problem: Problem,
        space: &BidSpace<Rational>,
        values: &[Rational],
        bids: Option<&[Rational]>,
    ) -> Self {
        InstanceFile {
            problem,
            bid_spaces: (0..space.bidders()).map(|i| exact_vec(space.levels(i))).collect(),
            value_caps: space.caps().map(exact_vec),
            values: exact_vec(values),
            bids: bids.map(exact_vec),
            spectrum: None,
            network: None,
            setcover: None,
        }
    }

    /// Builds the mechanism, bid space and bid vector.
    pub fn prepare(&self) -> Result<Prepared> {
        let present = [self.spectrum.is_some(), self.network.is_some(), self.setcover.is_some()];
        let expected = Problem::ALL.iter().position(|p| *p == self.problem).expect("listed");
        if present.iter().filter(|&&p| p).count() != 1 || !present[expected] {
            return Err(Error::InvalidInstance(format!(
                "a {} instance needs exactly one \"{}\" payload",
                self.problem, self.problem
            )));
        }
        let mechanism = match self.problem {
            Problem::Spectrum => Mechanism::Spectrum(self.spectrum.as_ref().expect("checked").build()?),
            Problem::Network => Mechanism::Network(NetworkRule::new(self.network.as_ref().expect("checked").build()?)),
            Problem::Setcover => Mechanism::Setcover(SetCoverRule::new(self.setcover.as_ref().expect("checked").build()?)),
        };
        let bidders = mechanism.bidders();
        let space = BidSpace::new(
            self.bid_spaces.iter().map(|l| inner_vec(l)).collect(),
            self.value_caps.as_ref().map(|c| inner_vec(c)),
        )?;
        if space.bidders() != bidders {
            return Err(Error::InvalidInstance(format!(
                "{} bid spaces for {bidders} bidders",
                space.bidders()
            )));
        }
        let values = inner_vec(&self.values);
        let orientation = self.problem.orientation();
        space.validate_values(&values, orientation)?;
        let bids = match &self.bids {
            Some(b) => crate::auction::BidProfile::new(&space, inner_vec(b))?.into_inner(),
            None => crate::auction::truthful_profile(&space, &values, orientation)?,
        };
        Ok(Prepared { problem: self.problem, mechanism, space, values, bids })
    }
}

impl SpectrumPayload {
    pub fn geometry_spec(&self) -> GeometrySpec<Rational> {
        match &self.geometry {
            GeometryFile::Interval { intervals } => GeometrySpec::Interval(
                intervals.iter().map(|i| Interval { left: i.left.0, length: i.length.0 }).collect(),
            ),
            GeometryFile::Disk { disks } => GeometrySpec::Disk(
                disks.iter().map(|d| Disk { x: d.x.0, y: d.y.0, radius: d.radius.0 }).collect(),
            ),
            GeometryFile::Explicit { vertices, edges, max_degree } => GeometrySpec::Explicit {
                vertices: *vertices,
                edges: edges.clone(),
                max_degree: *max_degree,
            },
        }
    }

    pub fn build(&self) -> Result<SpectrumInstance<Rational>> {
        SpectrumInstance::new(self.geometry_spec(), self.channels)
    }
}

impl NetworkPayload {
    pub fn build(&self) -> Result<NetworkInstance<f64>> {
        let graph = CapacitatedGraph::new(self.nodes, self.edges.clone(), self.capacities.clone())?;
        let firms = self
            .firms
            .iter()
            .map(|f| match f {
                FirmFile::Unicast { source, sink, demand } => Firm {
                    terminals: Terminals::Unicast { source: *source, sink: *sink },
                    demand: *demand,
                },
                FirmFile::Multicast { terminals, demand } => Firm {
                    terminals: Terminals::Multicast(terminals.clone()),
                    demand: *demand,
                },
            })
            .collect();
        NetworkInstance::new(graph, firms)
    }
}

impl SetCoverPayload {
    pub fn build(&self) -> Result<SetCoverInstance> {
        SetCoverInstance::new(self.elements, self.sets.clone())
    }
}

impl Mechanism {
    pub fn bidders(&self) -> usize {
        use crate::auction::ScoringRule;
        match self {
            Mechanism::Spectrum(m) => ScoringRule::<Rational>::bidders(m),
            Mechanism::Network(m) => ScoringRule::<Rational>::bidders(m),
            Mechanism::Setcover(m) => ScoringRule::<Rational>::bidders(m),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_round_trip() {
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3));
        assert_eq!(parse_rational("3/2").unwrap(), Rational::new(3, 2));
        assert_eq!(parse_rational("1.25").unwrap(), Rational::new(5, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), Rational::new(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.").is_err());
        assert!(parse_rational("abc").is_err());
        for s in ["0", "7", "3/2", "-1/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
    }

    const PATH: &str = r#"{
  "problem": "spectrum",
  "bid_spaces": [["0","1","2","3","4","5","6"],["0","1","2","3","4","5","6"],["0","1","2","3","4","5","6"]],
  "values": ["2","4","1"],
  "spectrum": {"channels": 1, "geometry": {"kind": "explicit", "vertices": 3, "edges": [[0,1],[1,2]], "max_degree": 2}}
}"#;

    #[test]
    fn parses_and_derives_truthful_bids() {
        let f = InstanceFile::parse(PATH).unwrap();
        let p = f.prepare().unwrap();
        assert_eq!(p.bids, vec![Rational::from_integer(3), Rational::from_integer(5), Rational::from_integer(2)]);
        assert_eq!(InstanceFile::parse(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn unknown_field_has_line_context() {
        let text = PATH.replace("\"values\"", "\"valuez\"");
        let Err(Error::Parse(msg)) = InstanceFile::parse(&text) else { panic!("expected parse error") };
        assert!(msg.contains("line 4"), "{msg}");
        assert!(msg.contains("valuez"), "{msg}");
    }

    #[test]
    fn bad_number_has_line_context() {
        let text = PATH.replace("[\"2\",\"4\",\"1\"]", "[\"2\",\"x\",\"1\"]");
        let Err(Error::Parse(msg)) = InstanceFile::parse(&text) else { panic!("expected parse error") };
        assert!(msg.contains("line 4"), "{msg}");
    }

    #[test]
    fn payload_must_match_problem() {
        let text = PATH.replace("\"problem\": \"spectrum\"", "\"problem\": \"setcover\"");
        assert!(matches!(InstanceFile::parse(&text), Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn bidder_count_checked() {
        let text = PATH.replace("\"vertices\": 3", "\"vertices\": 4");
        assert!(InstanceFile::parse(&text).is_err());
    }
}
