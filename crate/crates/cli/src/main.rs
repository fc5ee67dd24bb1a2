use std::fmt::Display;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use hlc_core::conditions::{eval, Condition, ParamVector};
use hlc_core::correspondence::CorrespondenceCover;
use hlc_core::experiment::{run_campaign_capped, to_csv, Campaign, ExperimentError};
use hlc_core::generators::{
    gen_adversarial_cover, gen_complete_capped, gen_lists, gen_random_capped, GenError, ListModel,
    DEFAULT_INSTANCE_CAP,
};
use hlc_core::io::{self, Keyed};
use hlc_core::lists::is_proper_list_coloring;
use hlc_core::oracle::{
    claim_31_harris_instance, to_f64, verify_claim_31, verify_claim_32, verify_lemma_41, OracleError,
};
use hlc_core::solver::{dp_solve, moser_tardos_solve, Regime, ResampleScope, SolveStatus, SolverConfig, TraceStep};
use hlc_core::{Color, ListAssignment, PartiteHypergraph, VertexId, VertexMap};
use num_rational::BigRational;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_INVALID: u8 = 3;
const EXIT_CAP: u8 = 4;

/// Partite hypergraph list coloring toolkit.
#[derive(Parser)]
#[command(name = "hlc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instances as JSON on stdout.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Evaluate the sufficient conditions on a parameter vector.
    Check(CheckArgs),
    /// Color an instance by resampling.
    Solve(SolveArgs),
    /// Exact checks on small instances.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Run a Monte-Carlo campaign and write CSV.
    Experiment(ExperimentArgs),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Complete k-partite k-graph with n vertices per part.
    Complete {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Random k-partite k-graph: each transversal edge kept with probability p.
    Random {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lists for a graph read from --graph or stdin.
    Lists {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, value_enum)]
        model: ListModelArg,
        /// One size, or one per part (comma separated).
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<usize>,
        /// Palette size for palette_random.
        #[arg(long)]
        palette: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random correspondence cover for a graph read from --graph or stdin.
    Cover {
        #[arg(long)]
        graph: Option<PathBuf>,
        /// List size per part (comma separated).
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ListModelArg {
    UniformQ,
    PerPartQ,
    PaletteRandom,
}

#[derive(Args)]
struct CheckArgs {
    /// JSON with k, j, q, D, Delta and optional eps.
    #[arg(long)]
    params: PathBuf,
    /// Exit 1 when no condition holds.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, required_unless_present = "cover")]
    lists: Option<PathBuf>,
    /// Solve a correspondence cover instead of lists.
    #[arg(long)]
    cover: Option<PathBuf>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_resamples: Option<u64>,
    #[arg(long, default_value = "auto")]
    regime: Regime,
    #[arg(long, default_value = "neighborhood")]
    scope: ResampleScope,
    /// Include every resampling step in the output.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct Instance {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    lists: PathBuf,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Whether a coloring file is a proper list coloring.
    Coloring {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        strict: bool,
    },
    /// Exact probability that one color is blocked, against its bound.
    Claim31 {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        j: usize,
        /// Vertex of V_j as part:index.
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        color: Color,
        #[arg(long)]
        strict: bool,
    },
    /// Exact negative correlation of blocked colors at one vertex.
    Claim32 {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        strict: bool,
    },
    /// Exact probability of an empty residual list, for every vertex of V_j
    /// unless one is given.
    Lemma41 {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long)]
        strict: bool,
    },
    /// Harris inequality for the blocking events of one color.
    Harris {
        #[command(flatten)]
        instance: Instance,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        color: Color,
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// Campaign JSON.
    #[arg(long)]
    campaign: PathBuf,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    /// Seed base; overrides HLC_SEED and the campaign's own.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug)]
enum CliError {
    Invalid(String),
    Cap(String),
}

impl CliError {
    fn invalid(e: impl Display) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        match e {
            GenError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::invalid(e),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::invalid(e),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Gen { source: GenError::CapExceeded { .. }, .. } => CliError::Cap(e.to_string()),
            _ => CliError::invalid(e),
        }
    }
}

impl From<io::IoError> for CliError {
    fn from(e: io::IoError) -> Self {
        CliError::invalid(e)
    }
}

type CliResult = Result<u8, CliError>;

fn env_u64(name: &str) -> Result<Option<u64>, CliError> {
    match std::env::var(name) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Invalid(format!("{name} must be an unsigned integer, got {s:?}"))),
        Err(_) => Ok(None),
    }
}

fn instance_cap() -> Result<u64, CliError> {
    Ok(env_u64("HLC_MAX_CAP")?.unwrap_or(DEFAULT_INSTANCE_CAP))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn read_graph_from(path: Option<&Path>) -> Result<PartiteHypergraph, CliError> {
    let text = match path {
        Some(p) => read_text(p)?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Invalid(format!("stdin: {e}")))?;
            s
        }
    };
    let (h, warnings) = io::read_graph(&text)?;
    for w in warnings {
        eprintln!("warning: {w:?}");
    }
    Ok(h)
}

fn read_instance(inst: &Instance) -> Result<(PartiteHypergraph, ListAssignment), CliError> {
    let h = read_graph_from(Some(&inst.graph))?;
    let lists = io::read_lists(&h, &read_text(&inst.lists)?)?;
    Ok((h, lists))
}

fn parse_vertex(s: &str) -> Result<VertexId, CliError> {
    io::parse_vertex_key(s).ok_or_else(|| CliError::Invalid(format!("bad vertex {s:?} (expected part:index)")))
}

fn rational(x: &BigRational) -> String {
    format!("{x} (~{:.6e})", to_f64(x))
}

fn verdict_code(ok: bool, strict: bool) -> u8 {
    if strict && !ok {
        EXIT_NEGATIVE
    } else {
        0
    }
}

fn gen(cmd: GenCommand) -> CliResult {
    let cap = instance_cap()?;
    let text = match cmd {
        GenCommand::Complete { k, n } => io::write_graph(&gen_complete_capped(k, n, cap)?),
        GenCommand::Random { k, n, p, seed } => io::write_graph(&gen_random_capped(k, n, p, seed, cap)?),
        GenCommand::Lists { graph, model, q, palette, seed } => {
            let h = read_graph_from(graph.as_deref())?;
            let per_part = |q: Vec<usize>| if q.len() == 1 { vec![q[0]; h.k()] } else { q };
            let model = match model {
                ListModelArg::UniformQ => match q.as_slice() {
                    [q] => ListModel::UniformQ { q: *q },
                    _ => return Err(CliError::invalid("uniform_q takes a single --q")),
                },
                ListModelArg::PerPartQ => ListModel::PerPartQ { q: per_part(q) },
                ListModelArg::PaletteRandom => ListModel::PaletteRandom {
                    q: per_part(q),
                    palette: palette.ok_or_else(|| CliError::invalid("palette_random needs --palette"))?,
                },
            };
            io::write_lists(&gen_lists(&h, &model, seed)?)
        }
        GenCommand::Cover { graph, q, seed } => {
            let h = read_graph_from(graph.as_deref())?;
            let q = if q.len() == 1 { vec![q[0]; h.k()] } else { q };
            io::write_cover(&gen_adversarial_cover(&h, &q, seed)?)
        }
    };
    println!("{text}");
    Ok(0)
}

fn check(args: CheckArgs) -> CliResult {
    let pv: ParamVector = io::read_params(&read_text(&args.params)?)?;
    pv.check_shape().map_err(CliError::invalid)?;
    println!("{:<9} {:<9} {:>14} {:>14} {:>14}", "condition", "satisfied", "lhs_log", "rhs_log", "margin");
    let mut any = false;
    for c in [Condition::C1, Condition::C2, Condition::C3] {
        match eval(c, &pv) {
            Ok(v) => {
                any |= v.satisfied;
                println!("{:<9} {:<9} {:>14.6} {:>14.6} {:>14.6}", c, v.satisfied, v.lhs_log, v.rhs_log, v.margin);
            }
            Err(e) => println!("{c:<9} error     {e}"),
        }
    }
    Ok(verdict_code(any, args.strict))
}

#[derive(serde::Serialize)]
struct SolveReport<'a, T: serde::Serialize> {
    #[serde(flatten)]
    status: &'a SolveStatus,
    j: usize,
    guarantee: Option<Condition>,
    resample_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    colors: Option<Keyed<'a, T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a Vec<TraceStep>>,
}

fn solve(args: SolveArgs) -> CliResult {
    let h = read_graph_from(Some(&args.graph))?;
    let config = SolverConfig {
        j: args.j,
        regime: args.regime,
        seed: args.seed,
        max_resamples: args.max_resamples,
        record_trace: args.trace,
        scope: args.scope,
    };
    fn emit<T: serde::Serialize>(
        status: &SolveStatus,
        j: usize,
        guarantee: Option<Condition>,
        resample_count: u64,
        coloring: Option<&VertexMap<T>>,
        trace: Option<&Vec<TraceStep>>,
    ) -> u8 {
        let report = SolveReport { status, j, guarantee, resample_count, colors: coloring.map(Keyed), trace };
        println!("{}", serde_json::to_string(&report).expect("reports serialize"));
        if guarantee.is_none() {
            eprintln!("note: outside guarantee (no sufficient condition holds for j = {j})");
        }
        match status {
            SolveStatus::Success => 0,
            SolveStatus::BudgetExhausted => EXIT_BUDGET,
            SolveStatus::InfeasibleList { vertex } => {
                eprintln!("error: vertex {vertex} has an empty list");
                EXIT_INVALID
            }
        }
    }
    if let Some(cover_path) = &args.cover {
        let cover: CorrespondenceCover = io::read_cover(&h, &read_text(cover_path)?)?;
        let out = dp_solve(&h, &cover, &config).map_err(CliError::invalid)?;
        Ok(emit(&out.status, out.j, out.guarantee, out.resample_count, out.coloring.as_ref(), out.trace.as_ref()))
    } else {
        let path = args.lists.as_ref().expect("clap requires lists without cover");
        let lists = io::read_lists(&h, &read_text(path)?)?;
        let out = moser_tardos_solve(&h, &lists, &config).map_err(CliError::invalid)?;
        Ok(emit(&out.status, out.j, out.guarantee, out.resample_count, out.coloring.as_ref(), out.trace.as_ref()))
    }
}

fn verify(cmd: VerifyCommand) -> CliResult {
    match cmd {
        VerifyCommand::Coloring { instance, coloring, strict } => {
            let (h, lists) = read_instance(&instance)?;
            let phi = io::read_coloring(&h, &read_text(&coloring)?)?;
            let uncolored = h.vertices().filter(|&v| phi.get(v).is_none()).count();
            let ok = uncolored == 0 && is_proper_list_coloring(&h, &lists, &phi).map_err(CliError::invalid)?;
            println!("proper list coloring: {ok}");
            if uncolored > 0 {
                println!("uncolored vertices: {uncolored}");
            }
            Ok(verdict_code(ok, strict))
        }
        VerifyCommand::Claim31 { instance, j, vertex, color, strict } => {
            let (h, lists) = read_instance(&instance)?;
            let r = verify_claim_31(&h, &lists, j, parse_vertex(&vertex)?, color)?;
            println!("vertex {} color {} color-degree {}", r.vertex, r.color, r.color_degree);
            println!("exact {}", rational(&r.exact));
            println!("bound {:.12e}", r.bound);
            println!("ok {}", r.ok);
            Ok(verdict_code(r.ok, strict))
        }
        VerifyCommand::Claim32 { instance, j, vertex, strict } => {
            let (h, lists) = read_instance(&instance)?;
            let rows = verify_claim_32(&h, &lists, j, parse_vertex(&vertex)?)?;
            println!("{:<12} {:<28} {:<28} ok", "subset", "joint", "product");
            for r in &rows {
                println!("{:<12} {:<28} {:<28} {}", format!("{:?}", r.subset), rational(&r.joint), rational(&r.product), r.ok);
            }
            Ok(verdict_code(rows.iter().all(|r| r.ok), strict))
        }
        VerifyCommand::Lemma41 { instance, j, vertex, strict } => {
            let (h, lists) = read_instance(&instance)?;
            let vertices: Vec<VertexId> = match vertex {
                Some(v) => vec![parse_vertex(&v)?],
                None => h.part_vertices(j).collect(),
            };
            println!("{:<8} {:>6} {:<32} {:>20} ok", "vertex", "sum", "exact", "bound");
            let mut all = true;
            for v in vertices {
                let r = verify_lemma_41(&h, &lists, j, v)?;
                all &= r.ok;
                println!("{:<8} {:>6} {:<32} {:>20.12e} {}", r.vertex.to_string(), r.color_degree_sum, rational(&r.exact), r.bound, r.ok);
            }
            Ok(verdict_code(all, strict))
        }
        VerifyCommand::Harris { instance, j, vertex, color, strict } => {
            let (h, lists) = read_instance(&instance)?;
            let inst = claim_31_harris_instance(&h, &lists, j, parse_vertex(&vertex)?, color)?;
            let r = inst.verify()?;
            println!("ground set {} families {}", inst.ground.len(), inst.required.len());
            println!("intersection {}", rational(&r.intersection));
            println!("product      {}", rational(&r.product));
            println!("ok {}", r.ok);
            Ok(verdict_code(r.ok, strict))
        }
    }
}

fn experiment(args: ExperimentArgs) -> CliResult {
    let mut campaign: Campaign = io::parse_json(&read_text(&args.campaign)?)?;
    if let Some(t) = args.trials {
        campaign.trials = t;
    }
    if let Some(seed) = args.seed.or(env_u64("HLC_SEED")?) {
        campaign.seed_base = seed;
    }
    let rows = run_campaign_capped(&campaign, instance_cap()?)?;
    let csv = to_csv(&rows);
    match &args.out {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    eprintln!("{} cells, {} trials each", rows.len(), campaign.trials);
    Ok(0)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Gen(cmd) => gen(cmd),
        Command::Check(args) => check(args),
        Command::Solve(args) => solve(args),
        Command::Verify(cmd) => verify(cmd),
        Command::Experiment(args) => experiment(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_INVALID,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(CliError::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CAP)
        }
    }
}

