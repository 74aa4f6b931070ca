//! Test-family catalogue: grids, paths, cycles, full trees and random
//! regular graphs, plus a few named small graphs.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;

/// Attempts before the pairing model gives up on a simple graph.
const PAIRING_ATTEMPTS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    /// `rows x cols` grid; vertex `(i, j)` has id `i * cols + j`.
    Grid { rows: usize, cols: usize },
    Path { n: usize },
    Cycle { n: usize },
    /// Complete `branching`-ary tree with levels `0..=depth`, root `0`,
    /// children of `v` at `branching * v + 1 ..= branching * v + branching`.
    FullTree { branching: usize, depth: usize },
    /// Uniform-ish random `d`-regular simple graph from the pairing model.
    RandomRegular { n: usize, d: usize, seed: u64 },
}

impl FamilySpec {
    /// Degree bound the generated graph is declared with.
    pub fn degree_bound(&self) -> usize {
        match *self {
            FamilySpec::Grid { .. } => 4,
            FamilySpec::Path { .. } | FamilySpec::Cycle { .. } => 2,
            FamilySpec::FullTree { branching, .. } => branching + 1,
            FamilySpec::RandomRegular { d, .. } => d,
        }
    }

    /// Builds a spec from a family name and its integer parameters, e.g.
    /// `("grid", [50, 50])` or `("random-regular", [200, 3])`.
    pub fn parse(family: &str, dims: &[usize], seed: u64) -> Result<Self> {
        let want = |k: usize| {
            if dims.len() == k {
                Ok(())
            } else {
                Err(Error::Usage(format!("family {family} takes {k} size parameter(s)")))
            }
        };
        Ok(match family {
            "grid" => {
                want(2)?;
                FamilySpec::Grid { rows: dims[0], cols: dims[1] }
            }
            "path" => {
                want(1)?;
                FamilySpec::Path { n: dims[0] }
            }
            "cycle" => {
                want(1)?;
                FamilySpec::Cycle { n: dims[0] }
            }
            "tree" | "full-tree" | "full_tree" => {
                want(2)?;
                FamilySpec::FullTree { branching: dims[0], depth: dims[1] }
            }
            "random-regular" | "random_regular" => {
                want(2)?;
                FamilySpec::RandomRegular { n: dims[0], d: dims[1], seed }
            }
            other => return Err(Error::Usage(format!("unknown family {other:?}"))),
        })
    }
}

pub fn generate(spec: &FamilySpec) -> Result<BoundedDegreeGraph> {
    let d = spec.degree_bound();
    match *spec {
        FamilySpec::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return Err(Error::InfeasibleSpec("grid needs positive dimensions".into()));
            }
            let mut edges = Vec::new();
            for i in 0..rows {
                for j in 0..cols {
                    let v = i * cols + j;
                    if j + 1 < cols {
                        edges.push((v, v + 1));
                    }
                    if i + 1 < rows {
                        edges.push((v, v + cols));
                    }
                }
            }
            BoundedDegreeGraph::from_edges(rows * cols, &edges, d)
        }
        FamilySpec::Path { n } => {
            let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
            BoundedDegreeGraph::from_edges(n, &edges, d)
        }
        FamilySpec::Cycle { n } => {
            if n < 3 {
                return Err(Error::InfeasibleSpec("cycle needs at least 3 vertices".into()));
            }
            let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
            edges.push((0, n - 1));
            BoundedDegreeGraph::from_edges(n, &edges, d)
        }
        FamilySpec::FullTree { branching, depth } => {
            if branching == 0 {
                return Err(Error::InfeasibleSpec("tree needs branching >= 1".into()));
            }
            let mut n: usize = 0;
            let mut level: usize = 1;
            for _ in 0..=depth {
                n = n.checked_add(level).ok_or(Error::Overflow("tree size"))?;
                level = level.saturating_mul(branching);
            }
            let edges: Vec<_> = (1..n).map(|v| ((v - 1) / branching, v)).collect();
            BoundedDegreeGraph::from_edges(n, &edges, d)
        }
        FamilySpec::RandomRegular { n, d, seed } => random_regular(n, d, seed),
    }
}

/// Pairing (configuration) model with rejection of loops and multi-edges.
fn random_regular(n: usize, d: usize, seed: u64) -> Result<BoundedDegreeGraph> {
    if !(n * d).is_multiple_of(2) {
        return Err(Error::InfeasibleSpec("n * d must be even".into()));
    }
    if d >= n && n > 0 {
        return Err(Error::InfeasibleSpec("need d < n for a simple d-regular graph".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..PAIRING_ATTEMPTS {
        points.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = points
            .chunks_exact(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                continue 'attempt;
            }
        }
        if edges.iter().any(|&(u, v)| u == v) {
            continue;
        }
        return BoundedDegreeGraph::from_edges(n, &edges, d);
    }
    Err(Error::InfeasibleSpec(format!(
        "pairing model found no simple {d}-regular graph on {n} vertices"
    )))
}

/// `K_n` with degree bound `n - 1`.
pub fn complete_graph(n: usize) -> BoundedDegreeGraph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    BoundedDegreeGraph::from_edges(n, &edges, n.saturating_sub(1).max(2)).unwrap()
}

/// `K_{a,b}`; the first `a` ids form one side.
pub fn complete_bipartite(a: usize, b: usize) -> BoundedDegreeGraph {
    let edges: Vec<_> = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
    BoundedDegreeGraph::from_edges(a + b, &edges, a.max(b).max(2)).unwrap()
}

pub fn petersen() -> BoundedDegreeGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    let edges: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
    BoundedDegreeGraph::from_edges(10, &edges, 3).unwrap()
}

/// Wheel `W_n`: hub `0` joined to every vertex of the cycle `1..=n`.
pub fn wheel(n: usize) -> BoundedDegreeGraph {
    let mut edges: Vec<_> = (1..=n).map(|v| (0, v)).collect();
    edges.extend((1..n).map(|v| (v, v + 1)));
    edges.push((1, n));
    BoundedDegreeGraph::from_edges(n + 1, &edges, n.max(3)).unwrap()
}
