use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use da_realloc::auction::{verify_strategyproof, verify_wgsp, PaymentMethod, VerifyConfig};
use da_realloc::io::{build_report, generate_instance, Exact, GenParams, GeometryClass, InstanceFile, Problem, RunReport, RunStatus};
use da_realloc::oracles::OracleBudget;
use da_realloc::{Error, Rational};

const EXIT_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "darealloc", version, about = "Deferred-acceptance auctions for spectrum, bandwidth and set-cover reallocation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sp,
    Wgsp,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Interval,
    Disk,
    Degree,
}

#[derive(Subcommand)]
enum Command {
    /// Run the auction on an instance file.
    Run {
        file: PathBuf,
        /// Compute threshold payments for the winners.
        #[arg(long)]
        payments: bool,
        /// Compare against the brute-force optimum.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Oracle state budget.
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        /// Oracle time limit in seconds.
        #[arg(long, default_value_t = 60)]
        timeout: u64,
    },
    /// Search for profitable deviations from truthful bidding.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Largest coalition for wgsp mode.
        #[arg(long, default_value_t = 2)]
        coalition: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Maximum number of bid profiles to evaluate.
        #[arg(long, default_value_t = 10_000_000)]
        max_profiles: u64,
    },
    /// Write a random instance to stdout or a file.
    Gen {
        #[arg(value_parser = parse_problem)]
        problem: Problem,
        #[arg(long)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long)]
        bidders: Option<usize>,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        channels: Option<usize>,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
        #[arg(long, value_parser = parse_exact)]
        gamma: Option<Rational>,
        #[arg(long, value_parser = parse_exact)]
        span: Option<Rational>,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        extra_edges: Option<usize>,
        #[arg(long)]
        capacity: Option<f64>,
        #[arg(long)]
        capacity_spread: Option<u32>,
        #[arg(long)]
        multicast: Option<f64>,
        #[arg(long)]
        elements: Option<usize>,
        #[arg(long)]
        density: Option<f64>,
    },
    /// Re-render a structured run report.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn parse_problem(s: &str) -> Result<Problem, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_exact(s: &str) -> Result<Rational, String> {
    da_realloc::io::parse_rational(s)
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded { .. } | Error::Timeout(_) => EXIT_BUDGET,
        Error::Fault(_) | Error::MonotonicityViolation { .. } | Error::NoWinningBid(_) => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

fn read_instance(path: &PathBuf) -> Result<InstanceFile, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    InstanceFile::parse(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

#[derive(Serialize)]
struct DeviationOut {
    bidder: usize,
    bid: Exact,
    truthful_utility: Exact,
    deviating_utility: Exact,
}

#[derive(Serialize)]
struct CoalitionOut {
    members: Vec<usize>,
    bids: Vec<Exact>,
    truthful_utilities: Vec<Exact>,
    deviating_utilities: Vec<Exact>,
}

#[derive(Serialize)]
struct VerifyOut<T> {
    problem: Problem,
    mode: &'static str,
    violations: Vec<T>,
}

fn exact(xs: &[Rational]) -> Vec<Exact> {
    xs.iter().copied().map(Exact).collect()
}

fn print_report(report: &RunReport, format: Format) {
    match format {
        Format::Text => println!("{report}"),
        Format::Structured => print!("{}", report.to_json()),
    }
}

fn run(cmd: Command) -> Result<u8, Error> {
    match cmd {
        Command::Run { file, payments, oracle, format, budget, timeout } => {
            let prep = read_instance(&file)?.prepare()?;
            let method = payments.then_some(PaymentMethod::BinarySearch);
            let summary = prep.mechanism.run(&prep.space, &prep.bids, method)?;
            let budget = OracleBudget { max_states: budget, timeout: Some(Duration::from_secs(timeout)) };
            let report = build_report(&prep, &summary, oracle.then_some(budget))?;
            print_report(&report, format);
            Ok(if report.status == RunStatus::Failed { EXIT_FAILED } else { 0 })
        }
        Command::Verify { file, mode, coalition, format, max_profiles } => {
            let prep = read_instance(&file)?.prepare()?;
            let cfg = VerifyConfig { max_profiles };
            let mech = prep.mechanism.as_fn(&prep.space);
            let orientation = prep.problem.orientation();
            let (count, json) = match mode {
                Mode::Sp => {
                    let found = verify_strategyproof(mech, orientation, &prep.values, &prep.space, &cfg)?;
                    let out: Vec<DeviationOut> = found
                        .into_iter()
                        .map(|d| DeviationOut {
                            bidder: d.bidder,
                            bid: Exact(d.bid),
                            truthful_utility: Exact(d.truthful_utility),
                            deviating_utility: Exact(d.deviating_utility),
                        })
                        .collect();
                    if let Format::Text = format {
                        for d in &out {
                            println!(
                                "bidder {} gains by bidding {}: utility {} instead of {}",
                                d.bidder, d.bid, d.deviating_utility, d.truthful_utility
                            );
                        }
                    }
                    let n = out.len();
                    (n, serde_json::to_string_pretty(&VerifyOut { problem: prep.problem, mode: "sp", violations: out }))
                }
                Mode::Wgsp => {
                    let found = verify_wgsp(mech, orientation, &prep.values, &prep.space, coalition, &cfg)?;
                    let out: Vec<CoalitionOut> = found
                        .into_iter()
                        .map(|c| CoalitionOut {
                            members: c.members,
                            bids: exact(&c.bids),
                            truthful_utilities: exact(&c.truthful_utilities),
                            deviating_utilities: exact(&c.deviating_utilities),
                        })
                        .collect();
                    if let Format::Text = format {
                        for c in &out {
                            let bids: Vec<String> = c.bids.iter().map(|b| b.to_string()).collect();
                            println!("coalition {:?} all gain by bidding [{}]", c.members, bids.join(", "));
                        }
                    }
                    let n = out.len();
                    (n, serde_json::to_string_pretty(&VerifyOut { problem: prep.problem, mode: "wgsp", violations: out }))
                }
            };
            match format {
                Format::Text if count == 0 => println!("no profitable deviation found"),
                Format::Text => println!("{count} profitable deviation(s)"),
                Format::Structured => println!("{}", json.expect("reports serialize")),
            }
            Ok(if count == 0 { 0 } else { EXIT_FAILED })
        }
        Command::Gen {
            problem,
            seed,
            out,
            bidders,
            levels,
            channels,
            class,
            gamma,
            span,
            max_degree,
            nodes,
            extra_edges,
            capacity,
            capacity_spread,
            multicast,
            elements,
            density,
        } => {
            let d = GenParams::default();
            let params = GenParams {
                bidders: bidders.unwrap_or(d.bidders),
                levels: levels.unwrap_or(d.levels),
                channels: channels.unwrap_or(d.channels),
                class: match class {
                    Some(ClassArg::Interval) | None => GeometryClass::Interval,
                    Some(ClassArg::Disk) => GeometryClass::Disk,
                    Some(ClassArg::Degree) => GeometryClass::Degree,
                },
                gamma: gamma.unwrap_or(d.gamma),
                span: span.unwrap_or(d.span),
                max_degree: max_degree.unwrap_or(d.max_degree),
                nodes: nodes.unwrap_or(d.nodes),
                extra_edges: extra_edges.unwrap_or(d.extra_edges),
                capacity: capacity.unwrap_or(d.capacity),
                capacity_spread: capacity_spread.unwrap_or(d.capacity_spread),
                multicast_prob: multicast.unwrap_or(d.multicast_prob),
                elements: elements.unwrap_or(d.elements),
                density: density.unwrap_or(d.density),
            };
            let text = generate_instance(problem, seed, &params)?.to_json();
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Report { file, format } => {
            let text = fs::read_to_string(&file).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
            let report = RunReport::from_json(&text)?;
            print_report(&report, format);
            Ok(if report.status == RunStatus::Failed { EXIT_FAILED } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
