//! Command-line front end: decompose graphs into paths, verify certificates,
//! run the exact oracle, generate instances, and batch-benchmark families.
//!
//! Exit codes: 0 success, 1 bound-check failure, 2 malformed input,
//! 3 hypothesis not satisfied, 4 oracle bound miss.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use pathdec::certificate::Certificate;
use pathdec::decomp::{bound_check, verify_decomposition, BoundKind, BoundReport, Decomposition};
use pathdec::edgelist::{parse_edge_list, write_edge_list};
use pathdec::generate::{generate, GenError, GenSpec};
use pathdec::graph::Graph;
use pathdec::pipeline::{decompose_eulerian, PipelineError};
use pathdec::solver::{exact_min_decomposition, SolverBudget, SolverError};

const EXIT_BOUND_FAIL: u8 = 1;
const EXIT_MALFORMED: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;
const EXIT_ORACLE_MISS: u8 = 4;

#[derive(Parser)]
#[command(
    name = "pathdec",
    about = "Path decompositions of Eulerian graphs with machine-checkable certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundFlag {
    /// floor(3n/5)
    #[value(name = "3n5")]
    ThreeFifths,
    /// alpha/2 + floor(3*beta/5)
    Cfz,
    /// record the count without checking a bound
    None,
}

#[derive(Args)]
struct CommonIo {
    /// Input edge-list file.
    #[arg(long)]
    input: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the constructive pipeline on an Eulerian graph and emit a
    /// certificate.
    Decompose {
        #[command(flatten)]
        io: CommonIo,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "budget-ms", default_value_t = 10_000)]
        budget_ms: u64,
        #[arg(long, value_enum, default_value = "3n5")]
        bound: BoundFlag,
    },
    /// Check a certificate against a graph.
    Verify {
        #[command(flatten)]
        io: CommonIo,
        /// Certificate JSON file.
        certificate: PathBuf,
    },
    /// Exact minimum decomposition for small graphs.
    Exact {
        #[command(flatten)]
        io: CommonIo,
        #[arg(long = "budget-ms", default_value_t = 10_000)]
        budget_ms: u64,
        #[arg(long, value_enum, default_value = "none")]
        bound: BoundFlag,
    },
    /// Generate an instance and write its edge list.
    Gen {
        /// disjoint_triangles | flower | spaced_triangle_eulerian |
        /// triangle_free_eulerian
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Family parameters as key=value: k=, n=, t=, q=, lengths=3,4,5
        params: Vec<String>,
    },
    /// Batch pipeline runs over consecutive seeds; one CSV row per instance.
    Bench {
        #[arg(long)]
        family: String,
        /// Number of instances (seeds seed..seed+count).
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "budget-ms", default_value_t = 10_000)]
        budget_ms: u64,
        /// Family parameters as key=value.
        params: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

type CliError = (u8, String);

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Decompose {
            io,
            seed,
            budget_ms,
            bound,
        } => decompose_cmd(io, seed, budget_ms, bound),
        Command::Verify { io, certificate } => verify_cmd(io, certificate),
        Command::Exact {
            io,
            budget_ms,
            bound,
        } => exact_cmd(io, budget_ms, bound),
        Command::Gen {
            family,
            seed,
            output,
            params,
        } => gen_cmd(&family, seed, output, &params),
        Command::Bench {
            family,
            count,
            seed,
            budget_ms,
            params,
        } => bench_cmd(&family, count, seed, budget_ms, &params),
    }
}

fn read_graph(path: &PathBuf) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| (EXIT_MALFORMED, format!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| (EXIT_MALFORMED, e.to_string()))
}

fn write_out(output: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, content)
            .map_err(|e| (EXIT_MALFORMED, format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn pipeline_exit(e: &PipelineError) -> u8 {
    match e {
        PipelineError::Solver(SolverError::OracleBoundMiss { .. }) => EXIT_ORACLE_MISS,
        PipelineError::Solver(SolverError::BudgetTooSmall) => EXIT_ORACLE_MISS,
        PipelineError::BoundViolated { .. } => EXIT_BOUND_FAIL,
        _ => EXIT_HYPOTHESIS,
    }
}

fn bound_report(g: &Graph, d: &Decomposition, flag: BoundFlag) -> Result<BoundReport, CliError> {
    let kind = match flag {
        BoundFlag::ThreeFifths => BoundKind::ThreeFifthsN,
        BoundFlag::Cfz => BoundKind::CfzAlphaBeta,
        BoundFlag::None => {
            return Ok(BoundReport {
                kind: BoundKind::ThreeFifthsN,
                allowed: d.count(),
                achieved: d.count(),
                pass: true,
            })
        }
    };
    bound_check(g, d, kind).map_err(|e| (EXIT_BOUND_FAIL, e.to_string()))
}

fn decompose_cmd(
    io: CommonIo,
    seed: u64,
    budget_ms: u64,
    bound: BoundFlag,
) -> Result<(), CliError> {
    let g = read_graph(&io.input)?;
    let budget = SolverBudget::new(2_000_000, budget_ms);
    let (d, ledger) =
        decompose_eulerian(&g, &budget, seed).map_err(|e| (pipeline_exit(&e), e.to_string()))?;
    let report = bound_report(&g, &d, bound)?;
    let mut cert = Certificate::new(&g, &d, &report, Some(&ledger));
    if matches!(bound, BoundFlag::None) {
        cert.bound.kind = "none".into();
    }
    write_out(&io.output, &(cert.to_json() + "\n"))?;
    eprintln!(
        "decomposed into {} paths (allowed {}, {})",
        report.achieved,
        report.allowed,
        if report.pass { "pass" } else { "FAIL" }
    );
    if report.pass {
        Ok(())
    } else {
        Err((EXIT_BOUND_FAIL, "bound check failed".into()))
    }
}

fn verify_cmd(io: CommonIo, certificate: PathBuf) -> Result<(), CliError> {
    let g = read_graph(&io.input)?;
    let text = fs::read_to_string(&certificate)
        .map_err(|e| (EXIT_MALFORMED, format!("{}: {e}", certificate.display())))?;
    let cert = Certificate::from_json(&text).map_err(|e| (EXIT_MALFORMED, e.to_string()))?;
    let d = cert
        .decomposition_for(&g)
        .map_err(|e| (EXIT_BOUND_FAIL, e.to_string()))?;
    let report = verify_decomposition(&g, &d);
    if !report.ok() {
        for v in &report.violations {
            eprintln!("violation: {v}");
        }
        return Err((
            EXIT_BOUND_FAIL,
            format!("{} violation(s)", report.violations.len()),
        ));
    }
    let recomputed = match cert.bound.kind.as_str() {
        "three_fifths_n" => Some(BoundKind::ThreeFifthsN),
        "cfz_alpha_beta" => Some(BoundKind::CfzAlphaBeta),
        _ => None,
    };
    if let Some(kind) = recomputed {
        let rb = bound_check(&g, &d, kind).map_err(|e| (EXIT_BOUND_FAIL, e.to_string()))?;
        if rb.allowed != cert.bound.allowed
            || rb.achieved != cert.bound.achieved
            || rb.pass != cert.bound.pass
        {
            return Err((
                EXIT_BOUND_FAIL,
                format!(
                    "bound mismatch: certificate says {}/{} pass={}, recomputed {}/{} pass={}",
                    cert.bound.achieved,
                    cert.bound.allowed,
                    cert.bound.pass,
                    rb.achieved,
                    rb.allowed,
                    rb.pass
                ),
            ));
        }
        if !rb.pass {
            return Err((EXIT_BOUND_FAIL, "bound check failed".into()));
        }
    }
    println!("certificate ok: {} paths cover all {} edges", d.count(), g.m());
    Ok(())
}

fn exact_cmd(io: CommonIo, budget_ms: u64, bound: BoundFlag) -> Result<(), CliError> {
    let g = read_graph(&io.input)?;
    let budget = SolverBudget::new(2_000_000, budget_ms);
    let (d, optimal) = exact_min_decomposition(&g, &budget).map_err(|e| match e {
        SolverError::EdgeCapExceeded { .. } => (EXIT_HYPOTHESIS, e.to_string()),
        _ => (EXIT_ORACLE_MISS, e.to_string()),
    })?;
    let report = bound_report(&g, &d, bound)?;
    let mut cert = Certificate::new(&g, &d, &report, None);
    if matches!(bound, BoundFlag::None) {
        cert.bound.kind = "none".into();
    }
    if io.output.is_some() {
        write_out(&io.output, &(cert.to_json() + "\n"))?;
    }
    println!(
        "exact: {} paths ({})",
        d.count(),
        if optimal { "optimal" } else { "budget exhausted, best found" }
    );
    if report.pass {
        Ok(())
    } else {
        Err((EXIT_BOUND_FAIL, "bound check failed".into()))
    }
}

fn parse_params(params: &[String]) -> Result<std::collections::BTreeMap<String, String>, CliError> {
    let mut map = std::collections::BTreeMap::new();
    for p in params {
        let (k, v) = p.split_once('=').ok_or((
            EXIT_MALFORMED,
            format!("parameter '{p}' is not key=value"),
        ))?;
        map.insert(k.to_string(), v.to_string());
    }
    Ok(map)
}

fn build_spec(
    family: &str,
    params: &std::collections::BTreeMap<String, String>,
) -> Result<GenSpec, CliError> {
    let get_usize = |key: &str| -> Result<Option<usize>, CliError> {
        params
            .get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| (EXIT_MALFORMED, format!("bad value for {key}: '{v}'")))
            })
            .transpose()
    };
    match family {
        "disjoint_triangles" => {
            let k = get_usize("k")?.ok_or((EXIT_MALFORMED, "need k=".into()))?;
            Ok(GenSpec::DisjointTriangles { k })
        }
        "flower" => {
            let lengths = if let Some(spec) = params.get("lengths") {
                spec.split(',')
                    .map(|s| {
                        s.parse::<usize>()
                            .map_err(|_| (EXIT_MALFORMED, format!("bad length '{s}'")))
                    })
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                let q = get_usize("q")?.ok_or((EXIT_MALFORMED, "need q= or lengths=".into()))?;
                vec![3; q]
            };
            Ok(GenSpec::Flower {
                cycle_lengths: lengths,
            })
        }
        "spaced_triangle_eulerian" => {
            let n = get_usize("n")?.ok_or((EXIT_MALFORMED, "need n=".into()))?;
            let t = get_usize("t")?.ok_or((EXIT_MALFORMED, "need t=".into()))?;
            Ok(GenSpec::SpacedTriangleEulerian { n, t })
        }
        "triangle_free_eulerian" => {
            let n = get_usize("n")?.ok_or((EXIT_MALFORMED, "need n=".into()))?;
            Ok(GenSpec::TriangleFreeEulerian { n })
        }
        other => Err((EXIT_MALFORMED, format!("unknown family '{other}'"))),
    }
}

fn gen_cmd(
    family: &str,
    seed: u64,
    output: Option<PathBuf>,
    params: &[String],
) -> Result<(), CliError> {
    let map = parse_params(params)?;
    let spec = build_spec(family, &map)?;
    let g = generate(&spec, seed)
        .map_err(|e: GenError| (EXIT_MALFORMED, e.to_string()))?;
    write_out(&output, &write_edge_list(&g))
}

fn bench_cmd(
    family: &str,
    count: u64,
    seed0: u64,
    budget_ms: u64,
    params: &[String],
) -> Result<(), CliError> {
    let map = parse_params(params)?;
    let spec = build_spec(family, &map)?;
    let seeds: Vec<u64> = (seed0..seed0 + count).collect();
    let rows: Vec<Result<String, CliError>> = seeds
        .par_iter()
        .map(|&seed| {
            let g = generate(&spec, seed)
                .map_err(|e| (EXIT_MALFORMED, format!("seed {seed}: {e}")))?;
            let budget = SolverBudget::new(2_000_000, budget_ms);
            let started = Instant::now();
            let (d, ledger) = decompose_eulerian(&g, &budget, seed)
                .map_err(|e| (pipeline_exit(&e), format!("seed {seed}: {e}")))?;
            let millis = started.elapsed().as_millis();
            let q_total: usize = ledger.records.iter().map(|r| r.cycles_formed).sum();
            let pass = d.count() <= ledger.allowed;
            Ok(format!(
                "{seed},{},{},{},{},{},{},{},{millis}",
                g.n(),
                g.m(),
                ledger.records.len(),
                q_total,
                d.count(),
                ledger.allowed,
                pass
            ))
        })
        .collect();
    println!("seed,n,m,k,q_total,count,allowed,pass,millis");
    let mut failures = Vec::new();
    for row in rows {
        match row {
            Ok(r) => println!("{r}"),
            Err(e) => failures.push(e),
        }
    }
    if let Some((code, msg)) = failures.into_iter().next() {
        return Err((code, msg));
    }
    Ok(())
}
