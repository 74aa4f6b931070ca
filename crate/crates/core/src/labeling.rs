//! Honest-prover encoding of a quantized witness into per-vertex labels.
//!
//! Each vertex `z` carries a color `T1(z)` and a table `T2(z)` indexed by
//! colors. Entry `T2(z)[q]` is `alpha * g(x)(z)` for the unique vertex `x`
//! of color `q` within distance `r` of `z`. Vertices cannot name each other,
//! so the color plays the role of an identifier that is locally unique.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::measures::WitnessFunction;
use crate::rational::{format_rational, parse_rational, ratio, zero, Rational};

/// Scheme parameters recorded in the labeling header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeParams {
    /// Witness radius; the Property-A verifier looks at radius `r + 1`.
    pub r: usize,
    pub alpha: u64,
    pub palette: usize,
    pub eps_prime: Rational,
    /// Horizon `K` of the locally-P verifier, when the labeling is meant
    /// for the combined pipeline.
    pub locality: Option<usize>,
}

impl SchemeParams {
    pub fn validate(&self) -> Result<()> {
        if self.alpha == 0 {
            return Err(Error::MalformedLabeling("alpha must be positive".into()));
        }
        if self.palette == 0 {
            return Err(Error::MalformedLabeling("palette must be nonempty".into()));
        }
        if self.eps_prime <= zero() || self.eps_prime >= Rational::from_integer(2) {
            return Err(Error::MalformedLabeling("eps' must lie in (0, 2)".into()));
        }
        Ok(())
    }
}

/// Label of one vertex: `(T1, T2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexLabel {
    pub color: usize,
    /// Dense, length = palette size, entries in `0..=alpha`.
    pub table: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLabeling {
    pub params: SchemeParams,
    pub labels: Vec<VertexLabel>,
}

impl ProofLabeling {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Structural well-formedness against a graph on `n` vertices.
    pub fn check_structure(&self, n: usize) -> Result<()> {
        self.params.validate()?;
        if self.labels.len() != n {
            return Err(Error::MalformedLabeling(format!(
                "labeling has {} vertices, graph has {n}",
                self.labels.len()
            )));
        }
        for (x, l) in self.labels.iter().enumerate() {
            if l.color >= self.params.palette || l.table.len() != self.params.palette {
                return Err(Error::MalformedLabeling(format!("vertex {x}: color or table size out of range")));
            }
            if l.table.iter().any(|&t| t > self.params.alpha) {
                return Err(Error::MalformedLabeling(format!("vertex {x}: table entry above alpha")));
            }
        }
        Ok(())
    }

    /// Header `labels <n> <r> <alpha> <palette> <eps'>` with an optional
    /// seventh field `<K>`, then `<x> <color> <t_0> ... <t_{palette-1}>`.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = format!("labels {} {} {} {} {}", self.n(), p.r, p.alpha, p.palette, format_rational(&p.eps_prime));
        if let Some(k) = p.locality {
            write!(out, " {k}").unwrap();
        }
        out.push('\n');
        for (x, l) in self.labels.iter().enumerate() {
            write!(out, "{x} {}", l.color).unwrap();
            for t in &l.table {
                write!(out, " {t}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::format(1, "empty labeling file"))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        if !(f.len() == 6 || f.len() == 7) || f[0] != "labels" {
            return Err(Error::format(1, "expected `labels <n> <r> <alpha> <palette> <eps'> [<K>]`"));
        }
        let int = |s: &str, line: usize| {
            s.parse::<u64>().map_err(|_| Error::format(line, format!("bad integer {s:?}")))
        };
        let n = int(f[1], 1)? as usize;
        let params = SchemeParams {
            r: int(f[2], 1)? as usize,
            alpha: int(f[3], 1)?,
            palette: int(f[4], 1)? as usize,
            eps_prime: parse_rational(f[5]).map_err(|e| Error::format(1, e.to_string()))?,
            locality: f.get(6).map(|s| int(s, 1)).transpose()?.map(|k| k as usize),
        };
        if !f[5].contains('/') {
            return Err(Error::format(1, "eps' must be written as <num>/<den>"));
        }
        let mut labels = Vec::with_capacity(n);
        for (idx, line) in lines {
            let lineno = idx + 1;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != params.palette + 2 || int(parts[0], lineno)? as usize != labels.len() {
                return Err(Error::format(lineno, "expected `<x> <color> <palette entries>` in vertex order"));
            }
            let color = int(parts[1], lineno)? as usize;
            let table = parts[2..].iter().map(|s| int(s, lineno)).collect::<Result<Vec<_>>>()?;
            labels.push(VertexLabel { color, table });
        }
        if labels.len() != n {
            return Err(Error::format(1, format!("header declares {n} vertices, found {}", labels.len())));
        }
        let labeling = ProofLabeling { params, labels };
        labeling.check_structure(n).map_err(|e| Error::format(1, e.to_string()))?;
        Ok(labeling)
    }
}

/// Greedy coloring of the power graph (`x ~ y` iff `0 < d(x, y) <= q`):
/// vertices in id order, smallest color unused within distance `q`.
pub fn distance_coloring(graph: &BoundedDegreeGraph, q: usize) -> Vec<usize> {
    let n = graph.n();
    let mut colors: Vec<usize> = vec![usize::MAX; n];
    let mut used: Vec<bool> = Vec::new();
    for v in 0..n {
        used.clear();
        for (u, _) in graph.bfs_layers(v, q) {
            let c = colors[u];
            if c != usize::MAX {
                if c >= used.len() {
                    used.resize(c + 1, false);
                }
                used[c] = true;
            }
        }
        colors[v] = used.iter().position(|&b| !b).unwrap_or(used.len());
    }
    colors
}

/// Encodes a quantized witness (values multiples of `1/alpha`, supports in
/// radius `r`) with a coloring that is proper at distance `2r`.
pub fn build_proof(
    graph: &BoundedDegreeGraph,
    witness: &WitnessFunction,
    colors: &[usize],
    alpha: u64,
    eps_prime: Rational,
    locality: Option<usize>,
) -> Result<ProofLabeling> {
    let n = graph.n();
    if witness.n() != n || colors.len() != n {
        return Err(Error::MalformedLabeling("witness, coloring and graph sizes differ".into()));
    }
    let r = witness.radius;
    let palette = colors.iter().max().map_or(1, |m| m + 1);
    let scaled = witness
        .dists
        .iter()
        .enumerate()
        .map(|(x, d)| {
            d.with_denominator(alpha).ok_or_else(|| {
                Error::MalformedLabeling(format!("measure of vertex {x} is not a multiple of 1/{alpha}"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = (0..n)
        .into_par_iter()
        .map(|z| {
            let mut table = vec![0u64; palette];
            let mut owner = vec![usize::MAX; palette];
            for (x, _) in graph.bfs_layers(z, r) {
                let q = colors[x];
                if owner[q] != usize::MAX {
                    return Err(Error::AmbiguousColor { vertex: z, color: q });
                }
                owner[q] = x;
                table[q] = scaled[x].numerator(z);
            }
            Ok(VertexLabel { color: colors[z], table })
        })
        .collect::<Result<Vec<_>>>()?;
    let labeling = ProofLabeling {
        params: SchemeParams { r, alpha, palette, eps_prime, locality },
        labels,
    };
    labeling.check_structure(n)?;
    Ok(labeling)
}

/// `T2(z)[T1(x)] / alpha` when `d(x, z) <= r`, else zero.
pub fn decode_value(graph: &BoundedDegreeGraph, labeling: &ProofLabeling, x: usize, z: usize) -> Result<Rational> {
    graph.check_vertex(x)?;
    graph.check_vertex(z)?;
    let p = &labeling.params;
    if graph.distance_within(x, z, p.r).is_none() {
        return Ok(zero());
    }
    let entry = labeling.labels[z].table[labeling.labels[x].color];
    Ok(ratio(entry as u128, p.alpha as u128))
}
