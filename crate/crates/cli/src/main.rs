//! `apls`: generate graphs, prove, verify, extract partitions and report.
//!
//! Exit codes: 0 success or accept, 1 reject or infeasible, 2 usage or
//! format error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use apls_core::driver::{cmd_extract, cmd_generate, cmd_prove, cmd_report, cmd_verify, ProveConfig, WitnessSource};
use apls_core::generators::FamilySpec;
use apls_core::labeling::ProofLabeling;
use apls_core::rational::{format_rational, parse_rational};
use apls_core::separators::SeparatorDistribution;
use apls_core::verifier::Predicate;
use apls_core::{BoundedDegreeGraph, Error, Rational};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "apls", version, about = "Approximate proof labeling schemes for bounded-degree graphs")]
struct Cli {
    /// Worker threads for per-vertex work; results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph from a family: grid R C, path N, cycle N, tree B DEPTH,
    /// random-regular N D.
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long, num_args = 1.., value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the honest prover and write a labeling.
    Prove {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Target edit fraction; sets eps' = 2 eps / d^2 unless --eps-prime is given.
        #[arg(long, value_parser = rational)]
        eps: Option<Rational>,
        #[arg(long = "eps-prime", value_parser = rational)]
        eps_prime: Option<Rational>,
        #[arg(long)]
        alpha: Option<u64>,
        /// Shift period for `--witness auto`.
        #[arg(long = "k-shift")]
        k_shift: Option<usize>,
        /// Locally-P horizon written to the header (default: max |B_2r|).
        #[arg(long = "K")]
        locality: Option<usize>,
        /// uniform-ball | separators:<file> | auto
        #[arg(long, default_value = "uniform-ball")]
        witness: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the pipeline verifier at every vertex.
    Verify {
        #[command(flatten)]
        input: LabeledInput,
        /// Require the header to certify an edit fraction of at most this.
        #[arg(long, value_parser = rational)]
        eps: Option<Rational>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode an accepted labeling and write the extracted partition.
    Extract {
        #[command(flatten)]
        input: LabeledInput,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `key = value` summary of a graph and optionally a labeling.
    Report {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, default_value = "planar", value_parser = predicate)]
        predicate: Predicate,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GraphInput {
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct LabeledInput {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, default_value = "planar", value_parser = predicate)]
    predicate: Predicate,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn predicate(s: &str) -> Result<Predicate, String> {
    s.parse::<Predicate>().map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn read_graph(path: &Path) -> Result<BoundedDegreeGraph, Error> {
    BoundedDegreeGraph::from_text(&read(path)?)
}

fn read_labeling(path: &Path) -> Result<ProofLabeling, Error> {
    ProofLabeling::from_text(&read(path)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn witness_source(spec: &str, graph: &BoundedDegreeGraph) -> Result<WitnessSource, Error> {
    match spec {
        "uniform-ball" => Ok(WitnessSource::UniformBall),
        "auto" => Ok(WitnessSource::Auto),
        _ => match spec.strip_prefix("separators:") {
            Some(file) => Ok(WitnessSource::Separators(SeparatorDistribution::from_text(graph, &read(Path::new(file))?)?)),
            None => Err(Error::Usage(format!("unknown witness source {spec:?}"))),
        },
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InfeasibleSpec(_)
        | Error::NotAFamilyMember(_)
        | Error::Overflow(_)
        | Error::InfeasibleAlpha { .. }
        | Error::NotUniform { .. }
        | Error::SupportViolation { .. }
        | Error::EmptySubgraph
        | Error::AmbiguousColor { .. }
        | Error::NotAccepted
        | Error::NoQualifyingSet
        | Error::WitnessTooRough { .. } => 1,
        _ => 2,
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Gen { family, n, seed, out } => {
            let spec = FamilySpec::parse(&family, &n, seed)?;
            emit(out.as_deref(), &cmd_generate(&spec)?)?;
            Ok(0)
        }
        Command::Prove { input, r, eps, eps_prime, alpha, k_shift, locality, witness, out } => {
            let graph = read_graph(&input.graph)?;
            let witness = witness_source(&witness, &graph)?;
            let config = ProveConfig { r, eps, eps_prime, alpha, k_shift, locality, witness };
            let outcome = cmd_prove(&graph, &config)?;
            let p = &outcome.labeling.params;
            eprintln!(
                "witness = {}\neps_measured = {}\nr = {}\nalpha = {}\npalette = {}",
                outcome.witness_kind,
                format_rational(&outcome.measured_eps),
                p.r,
                p.alpha,
                p.palette
            );
            emit(out.as_deref(), &outcome.labeling.to_text())?;
            Ok(0)
        }
        Command::Verify { input, eps, out } => {
            let graph = read_graph(&input.graph)?;
            let labeling = read_labeling(&input.labels)?;
            let verdict = cmd_verify(&graph, &labeling, eps.as_ref(), input.predicate)?;
            emit(out.as_deref(), &verdict.to_report())?;
            Ok(if verdict.accepted() { 0 } else { 1 })
        }
        Command::Extract { input, out } => {
            let graph = read_graph(&input.graph)?;
            let labeling = read_labeling(&input.labels)?;
            let ex = cmd_extract(&graph, &labeling, input.predicate)?;
            eprintln!(
                "eps_measured = {}\nblocks = {}\nmax_block = {}\nremoved_edges = {}\nedit_bound = {}",
                format_rational(&ex.decoded_eps),
                ex.partition.blocks.len(),
                ex.partition.max_block(),
                ex.partition.removed.len(),
                ex.edit_bound.to_text()
            );
            emit(out.as_deref(), &ex.partition.to_text())?;
            Ok(0)
        }
        Command::Report { input, labels, predicate, out } => {
            let graph = read_graph(&input.graph)?;
            let labeling = labels.as_deref().map(read_labeling).transpose()?;
            emit(out.as_deref(), &cmd_report(&graph, labeling.as_ref(), predicate)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().expect("thread pool is set once");
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
