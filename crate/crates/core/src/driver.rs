//! End-to-end operations behind the command-line tool: generate, prove,
//! verify, extract and report. Everything here is a pure function of its
//! inputs; file handling lives in the binary.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::generators::{generate, FamilySpec};
use crate::graph::{max_ball_size_actual, max_ball_size_bound, BoundedDegreeGraph};
use crate::hyperfinite::{edit_distance_upper_bound, extract_partition, EditBound, PartitionResult};
use crate::labeling::{build_proof, distance_coloring, ProofLabeling};
use crate::measures::{check_uniformity, discretize_witness, required_alpha, uniform_ball_witness, WitnessFunction};
use crate::rational::{format_rational, ratio, Rational};
use crate::separators::{
    grid_dimensions, grid_shift_distribution, path_shift_distribution, tree_depth_shift_distribution,
    witness_from_separators, SeparatorDistribution,
};
use crate::verifier::pipeline::certified_edit_fraction;
use crate::verifier::{decode_accepted_witness, pipeline_verify, verify_locally_p, Predicate, Verdict};

pub fn cmd_generate(spec: &FamilySpec) -> Result<String> {
    Ok(generate(spec)?.to_text())
}

/// Where the prover gets its witness from.
#[derive(Clone, Debug, Default)]
pub enum WitnessSource {
    #[default]
    UniformBall,
    Separators(SeparatorDistribution),
    /// A shift separator measure when the graph is a recognised grid, path,
    /// cycle or tree and a shift period is given; uniform balls otherwise.
    Auto,
}

#[derive(Clone, Debug, Default)]
pub struct ProveConfig {
    pub r: usize,
    /// Target edit fraction; implies `eps' = 2 eps / d^2` when `eps'` is
    /// not given.
    pub eps: Option<Rational>,
    pub eps_prime: Option<Rational>,
    pub alpha: Option<u64>,
    pub k_shift: Option<usize>,
    /// Locally-P horizon; defaults to `max_x |B_{2r}(x)|`.
    pub locality: Option<usize>,
    pub witness: WitnessSource,
}

#[derive(Clone, Debug)]
pub struct ProveOutcome {
    pub labeling: ProofLabeling,
    /// Maximum edge l1 of the unquantized witness.
    pub measured_eps: Rational,
    pub witness_kind: &'static str,
}

fn shift_witness(graph: &BoundedDegreeGraph, k: usize) -> Option<(SeparatorDistribution, &'static str)> {
    // Paths are also 1 x n grids; the path shift has smaller marginals.
    if let Ok(d) = path_shift_distribution(graph, k) {
        return Some((d, "path-shift"));
    }
    if grid_dimensions(graph).is_some() {
        return grid_shift_distribution(graph, k).ok().map(|d| (d, "grid-shift"));
    }
    tree_depth_shift_distribution(graph, k).ok().map(|d| (d, "tree-shift"))
}

fn choose_witness(graph: &BoundedDegreeGraph, config: &ProveConfig) -> Result<(WitnessFunction, &'static str)> {
    let from_separators = |dist: &SeparatorDistribution| -> Result<WitnessFunction> {
        Ok(witness_from_separators(graph, dist)?.tightened(graph))
    };
    match &config.witness {
        WitnessSource::UniformBall => Ok((uniform_ball_witness(graph, config.r), "uniform-ball")),
        WitnessSource::Separators(dist) => Ok((from_separators(dist)?, "separators")),
        WitnessSource::Auto => match config.k_shift.and_then(|k| shift_witness(graph, k)) {
            Some((dist, kind)) => Ok((from_separators(&dist)?, kind)),
            None => Ok((uniform_ball_witness(graph, config.r), "uniform-ball")),
        },
    }
}

/// Honest prover: witness, quantization, distance-`2r` coloring, labels.
pub fn cmd_prove(graph: &BoundedDegreeGraph, config: &ProveConfig) -> Result<ProveOutcome> {
    let d = graph.degree_bound();
    let eps_prime = match (&config.eps_prime, &config.eps) {
        (Some(e), _) => *e,
        (None, Some(eps)) if d > 0 => *eps * 2 / Rational::from_integer((d * d) as i128),
        _ => return Err(Error::Usage("prove needs --eps-prime or --eps".into())),
    };
    if eps_prime <= Rational::from_integer(0) || eps_prime >= Rational::from_integer(2) {
        return Err(Error::Usage("eps' must lie in (0, 2)".into()));
    }
    let (witness, witness_kind) = choose_witness(graph, config)?;
    let r = witness.radius;
    let measured_eps = check_uniformity(graph, &witness).max_edge_l1;
    if measured_eps >= eps_prime {
        return Err(Error::WitnessTooRough { measured: measured_eps, eps_prime });
    }
    let required = required_alpha(max_ball_size_actual(graph, r), &measured_eps, &eps_prime)?;
    let alpha = match config.alpha {
        Some(a) if a < required => return Err(Error::InfeasibleAlpha { alpha: a, required }),
        Some(a) => a,
        None => required,
    };
    let quantized = discretize_witness(graph, &witness, &measured_eps, &eps_prime, alpha)?;
    let colors = distance_coloring(graph, 2 * r);
    let locality = config.locality.unwrap_or_else(|| max_ball_size_actual(graph, 2 * r));
    let labeling = build_proof(graph, &quantized, &colors, alpha, eps_prime, Some(locality))?;
    Ok(ProveOutcome { labeling, measured_eps, witness_kind })
}

pub fn cmd_verify(
    graph: &BoundedDegreeGraph,
    labeling: &ProofLabeling,
    eps: Option<&Rational>,
    predicate: Predicate,
) -> Result<Verdict> {
    pipeline_verify(graph, labeling, eps, predicate)
}

#[derive(Clone, Debug)]
pub struct ExtractOutcome {
    pub partition: PartitionResult,
    /// Maximum edge l1 of the decoded witness.
    pub decoded_eps: Rational,
    pub edit_bound: EditBound,
}

/// Decodes an accepted labeling and extracts a partition from it.
pub fn cmd_extract(graph: &BoundedDegreeGraph, labeling: &ProofLabeling, predicate: Predicate) -> Result<ExtractOutcome> {
    let witness = decode_accepted_witness(graph, labeling)?;
    let decoded_eps = check_uniformity(graph, &witness).max_edge_l1;
    let partition = extract_partition(graph, &witness, &decoded_eps)?;
    let edit_bound = edit_distance_upper_bound(graph, &partition, predicate)?;
    Ok(ExtractOutcome { partition, decoded_eps, edit_bound })
}

/// `key = value` summary of a graph and, if given, a labeling run through
/// the whole pipeline.
pub fn cmd_report(graph: &BoundedDegreeGraph, labeling: Option<&ProofLabeling>, predicate: Predicate) -> Result<String> {
    let mut out = String::new();
    let d = graph.degree_bound();
    let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").unwrap();
    kv("n", graph.n().to_string());
    kv("m", graph.edge_count().to_string());
    kv("d", d.to_string());
    kv("max_degree", graph.max_degree().to_string());
    let Some(labeling) = labeling else {
        return Ok(out);
    };
    let p = &labeling.params;
    kv("r", p.r.to_string());
    kv("alpha", p.alpha.to_string());
    kv("palette", p.palette.to_string());
    kv("eps_prime", format_rational(&p.eps_prime));
    kv("K", p.locality.map_or("none".into(), |k| k.to_string()));
    let verdict = match p.locality {
        Some(_) => pipeline_verify(graph, labeling, None, predicate)?,
        None => crate::verifier::verify_property_a(graph, labeling)?,
    };
    kv("verdict", if verdict.accepted() { "accept" } else { "reject" }.into());
    kv("rejecting", verdict.rejecting().count().to_string());
    kv("certified_edit_fraction", format_rational(&certified_edit_fraction(d, &p.eps_prime)));
    let ball_actual = max_ball_size_actual(graph, 2 * p.r);
    let bound = max_ball_size_bound(d, 2 * p.r).map_or("overflow".to_string(), |b| b.to_string());
    kv("block_bound_formula", bound);
    kv("block_bound_actual", ball_actual.to_string());
    match cmd_extract(graph, labeling, predicate) {
        Ok(ex) => {
            let w = ex.partition.removed.len();
            kv("eps_measured", format_rational(&ex.decoded_eps));
            kv("blocks", ex.partition.blocks.len().to_string());
            kv("max_block", ex.partition.max_block().to_string());
            kv("removed_edges", w.to_string());
            let per = |total: usize| if total == 0 { "0/1".into() } else { format_rational(&ratio(w as u128, total as u128)) };
            kv("removed_per_vertex", per(graph.n()));
            kv("removed_per_edge", per(graph.edge_count()));
            let locally_ok = p.locality.map(|k| verify_locally_p(graph, k, predicate).accepted());
            kv("locally_p", locally_ok.map_or("unchecked".into(), |b| b.to_string()));
            kv("edit_bound", ex.edit_bound.to_text());
        }
        Err(Error::NotAccepted) => kv("extract", "not-accepted".into()),
        Err(e) => return Err(e),
    }
    Ok(out)
}
