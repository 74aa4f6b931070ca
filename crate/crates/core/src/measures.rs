//! Exact probability measures on vertices and Property-A witnesses.
//!
//! A witness assigns to every vertex `x` a probability measure supported in
//! the ball `B_r(x, G)`; it is `(eps, r)`-uniform when measures of adjacent
//! vertices are within `eps` in l1. Everything here is integer arithmetic:
//! a [`RationalDist`] stores integer numerators over one denominator and
//! its numerators always sum to that denominator exactly.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{max_ball_size_actual, BoundedDegreeGraph};
use crate::rational::{ceil_u64, ratio, zero, Rational};

/// A probability measure with integer numerators over a common denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalDist {
    denominator: u64,
    /// Sorted by vertex, zero numerators omitted.
    entries: Vec<(usize, u64)>,
}

impl RationalDist {
    /// Builds a distribution, merging repeated vertices; fails unless the
    /// numerators sum to `denominator` exactly.
    pub fn new(denominator: u64, entries: impl IntoIterator<Item = (usize, u64)>) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidDistribution("zero denominator".into()));
        }
        let mut merged: BTreeMap<usize, u64> = BTreeMap::new();
        for (v, a) in entries {
            let slot = merged.entry(v).or_insert(0);
            *slot = slot.checked_add(a).ok_or(Error::Overflow("distribution numerator"))?;
        }
        let total: u128 = merged.values().map(|&a| a as u128).sum();
        if total != denominator as u128 {
            return Err(Error::InvalidDistribution(format!(
                "numerators sum to {total}, expected {denominator}"
            )));
        }
        Ok(Self {
            denominator,
            entries: merged.into_iter().filter(|&(_, a)| a > 0).collect(),
        })
    }

    pub fn point_mass(v: usize) -> Self {
        Self { denominator: 1, entries: vec![(v, 1)] }
    }

    /// Uniform measure on a nonempty vertex set.
    pub fn uniform(vertices: &[usize]) -> Self {
        assert!(!vertices.is_empty(), "uniform measure on an empty set");
        let mut entries: Vec<(usize, u64)> = vertices.iter().map(|&v| (v, 1)).collect();
        entries.sort_unstable();
        entries.dedup();
        Self { denominator: entries.len() as u64, entries }
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// `(vertex, numerator)` pairs, ascending by vertex, nonzero only.
    pub fn entries(&self) -> &[(usize, u64)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|&(v, _)| v)
    }

    pub fn numerator(&self, v: usize) -> u64 {
        self.entries
            .binary_search_by_key(&v, |&(u, _)| u)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    pub fn value(&self, v: usize) -> Rational {
        ratio(self.numerator(v) as u128, self.denominator as u128)
    }

    /// Re-expresses the measure over `denominator`, if every value is a
    /// multiple of `1 / denominator`.
    pub fn with_denominator(&self, denominator: u64) -> Option<Self> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for &(v, a) in &self.entries {
            let scaled = a as u128 * denominator as u128;
            if !scaled.is_multiple_of(self.denominator as u128) {
                return None;
            }
            entries.push((v, u64::try_from(scaled / self.denominator as u128).ok()?));
        }
        Some(Self { denominator, entries })
    }

    /// Same measure in lowest terms.
    pub fn reduced(&self) -> Self {
        let g = self
            .entries
            .iter()
            .fold(self.denominator, |g, &(_, a)| num_integer::gcd(g, a));
        Self {
            denominator: self.denominator / g,
            entries: self.entries.iter().map(|&(v, a)| (v, a / g)).collect(),
        }
    }

    /// Pushes mass forward along `map` (vertex `t` sends its mass to `map[t]`).
    pub fn push_forward(&self, map: &[usize]) -> Self {
        let mut merged: BTreeMap<usize, u64> = BTreeMap::new();
        for &(t, a) in &self.entries {
            *merged.entry(map[t]).or_insert(0) += a;
        }
        Self { denominator: self.denominator, entries: merged.into_iter().collect() }
    }
}

/// `sum_z |p(z) - q(z)|`, exact.
pub fn l1_distance(p: &RationalDist, q: &RationalDist) -> Rational {
    let (dp, dq) = (p.denominator as u128, q.denominator as u128);
    let g = num_integer::gcd(dp, dq);
    let (sp, sq) = (dq / g, dp / g);
    let (mut i, mut j) = (0, 0);
    let mut total: u128 = 0;
    while i < p.entries.len() || j < q.entries.len() {
        let pv = p.entries.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let qv = q.entries.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        let (a, b) = if pv == qv {
            i += 1;
            j += 1;
            (p.entries[i - 1].1 as u128 * sp, q.entries[j - 1].1 as u128 * sq)
        } else if pv < qv {
            i += 1;
            (p.entries[i - 1].1 as u128 * sp, 0)
        } else {
            j += 1;
            (0, q.entries[j - 1].1 as u128 * sq)
        };
        total += a.abs_diff(b);
    }
    ratio(total, dp / g * dq)
}

/// Per-vertex measures on a graph, nominally supported in radius-`radius`
/// balls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessFunction {
    pub radius: usize,
    pub dists: Vec<RationalDist>,
}

impl WitnessFunction {
    pub fn new(radius: usize, dists: Vec<RationalDist>) -> Self {
        Self { radius, dists }
    }

    pub fn n(&self) -> usize {
        self.dists.len()
    }

    /// The denominator shared by every vertex, if there is one.
    pub fn common_denominator(&self) -> Option<u64> {
        let first = self.dists.first()?.denominator;
        self.dists.iter().all(|d| d.denominator == first).then_some(first)
    }

    /// Largest distance from `x` to a point of `Supp(f(x))`, over all `x`.
    /// `None` if some support point is unreachable.
    pub fn support_radius(&self, graph: &BoundedDegreeGraph) -> Option<usize> {
        (0..self.n())
            .into_par_iter()
            .map(|x| {
                let dist = graph.distances(x);
                self.dists[x].support().map(|z| dist[z]).try_fold(0usize, |m, d| Some(m.max(d?)))
            })
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().max().unwrap_or(0))
    }

    /// Same witness with `radius` lowered to its actual support radius.
    pub fn tightened(&self, graph: &BoundedDegreeGraph) -> Self {
        let radius = self.support_radius(graph).unwrap_or(self.radius).min(self.radius);
        Self { radius, dists: self.dists.clone() }
    }

    /// `witness <n> <r>` then `<x> <D> <z>:<num> ...` per vertex.
    pub fn to_text(&self) -> String {
        let mut out = format!("witness {} {}\n", self.n(), self.radius);
        for (x, d) in self.dists.iter().enumerate() {
            write!(out, "{x} {}", d.denominator).unwrap();
            for &(z, a) in &d.entries {
                write!(out, " {z}:{a}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::format(1, "empty witness file"))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        if f.len() != 3 || f[0] != "witness" {
            return Err(Error::format(1, "expected `witness <n> <r>`"));
        }
        let int = |s: &str, line: usize| {
            s.parse::<u64>().map_err(|_| Error::format(line, format!("bad integer {s:?}")))
        };
        let n = int(f[1], 1)? as usize;
        let radius = int(f[2], 1)? as usize;
        let mut dists = Vec::with_capacity(n);
        for (idx, line) in lines {
            let lineno = idx + 1;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() < 2 || int(parts[0], lineno)? as usize != dists.len() {
                return Err(Error::format(lineno, "expected `<x> <D> ...` in vertex order"));
            }
            let denom = int(parts[1], lineno)?;
            let mut entries = Vec::new();
            let mut last = None;
            for tok in &parts[2..] {
                let (z, a) = tok
                    .split_once(':')
                    .ok_or_else(|| Error::format(lineno, format!("bad entry {tok:?}")))?;
                let z = int(z, lineno)? as usize;
                if z >= n || last.is_some_and(|l| z <= l) {
                    return Err(Error::format(lineno, "entries must be ascending and in range"));
                }
                last = Some(z);
                entries.push((z, int(a, lineno)?));
            }
            let dist = RationalDist::new(denom, entries).map_err(|e| Error::format(lineno, e.to_string()))?;
            dists.push(dist);
        }
        if dists.len() != n {
            return Err(Error::format(1, format!("header declares {n} vertices, found {}", dists.len())));
        }
        Ok(Self { radius, dists })
    }
}

/// Result of measuring a witness against the uniformity conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformityReport {
    /// Maximum l1 distance over edges (zero for edgeless graphs).
    pub max_edge_l1: Rational,
    /// First edge (lexicographic) attaining the maximum.
    pub worst_edge: Option<(usize, usize)>,
    pub support_ok: bool,
    /// First vertex whose measure leaves its ball.
    pub support_violation: Option<usize>,
    /// l1 distance for every edge `(u, v)`, `u < v`, ascending.
    pub edge_l1: Vec<((usize, usize), Rational)>,
}

impl UniformityReport {
    /// Uniform at level `eps` under the non-strict convention `<= eps`.
    pub fn is_uniform(&self, eps: &Rational) -> bool {
        self.support_ok && self.max_edge_l1 <= *eps
    }
}

/// `f(x)` = uniform measure on `B_r(x, G)`.
pub fn uniform_ball_witness(graph: &BoundedDegreeGraph, r: usize) -> WitnessFunction {
    let dists = (0..graph.n())
        .into_par_iter()
        .map(|x| {
            let ball: Vec<usize> = graph.bfs_layers(x, r).into_iter().map(|(v, _)| v).collect();
            RationalDist::uniform(&ball)
        })
        .collect();
    WitnessFunction { radius: r, dists }
}

pub fn check_uniformity(graph: &BoundedDegreeGraph, witness: &WitnessFunction) -> UniformityReport {
    assert_eq!(graph.n(), witness.n(), "witness and graph sizes differ");
    let support_bad: Vec<bool> = (0..graph.n())
        .into_par_iter()
        .map(|x| {
            let ball: HashSet<usize> =
                graph.bfs_layers(x, witness.radius).into_iter().map(|(v, _)| v).collect();
            witness.dists[x].support().any(|z| !ball.contains(&z))
        })
        .collect();
    let edges: Vec<(usize, usize)> = graph.edges().collect();
    let edge_l1: Vec<((usize, usize), Rational)> = edges
        .par_iter()
        .map(|&(u, v)| ((u, v), l1_distance(&witness.dists[u], &witness.dists[v])))
        .collect();
    let mut max_edge_l1 = zero();
    let mut worst_edge = None;
    for &(e, ref l1) in &edge_l1 {
        if worst_edge.is_none() || *l1 > max_edge_l1 {
            max_edge_l1 = *l1;
            worst_edge = Some(e);
        }
    }
    let support_violation = support_bad.iter().position(|&b| b);
    UniformityReport {
        max_edge_l1,
        worst_edge,
        support_ok: support_violation.is_none(),
        support_violation,
        edge_l1,
    }
}

/// Rounds `f` to a measure with denominator `alpha`: floor every value to a
/// multiple of `1/alpha`, then raise the `alpha - k` points with the largest
/// fractional parts (ties by vertex id) so the total is exactly one. The l1
/// error is at most `|Supp(f)| / alpha`.
pub fn discretize(f: &RationalDist, alpha: u64) -> Result<RationalDist> {
    if alpha == 0 {
        return Err(Error::InfeasibleAlpha { alpha, required: 1 });
    }
    let d = f.denominator as u128;
    let mut floors: Vec<(usize, u64, u128)> = f
        .entries
        .iter()
        .map(|&(v, a)| {
            let scaled = a as u128 * alpha as u128;
            (v, (scaled / d) as u64, scaled % d)
        })
        .collect();
    let k: u64 = floors.iter().map(|e| e.1).sum();
    let missing = (alpha - k) as usize;
    let mut order: Vec<usize> = (0..floors.len()).filter(|&i| floors[i].2 > 0).collect();
    if order.len() < missing {
        return Err(Error::InfeasibleAlpha { alpha, required: f.entries.len() as u64 });
    }
    order.sort_by(|&i, &j| floors[j].2.cmp(&floors[i].2).then(floors[i].0.cmp(&floors[j].0)));
    for &i in &order[..missing] {
        floors[i].1 += 1;
    }
    RationalDist::new(alpha, floors.into_iter().map(|(v, a, _)| (v, a)))
}

/// Smallest `alpha` with `alpha * (eps' - eps) >= 3 * max_ball`.
pub fn required_alpha(max_ball: usize, eps: &Rational, eps_prime: &Rational) -> Result<u64> {
    if eps_prime <= eps {
        return Err(Error::WitnessTooRough { measured: *eps, eps_prime: *eps_prime });
    }
    ceil_u64(&(Rational::from_integer(3 * max_ball as i128) / (eps_prime - eps)))
}

/// Quantizes every measure of an `(eps, r)`-uniform witness to multiples of
/// `1/alpha`; the result is `(eps', r)`-uniform.
pub fn discretize_witness(
    graph: &BoundedDegreeGraph,
    witness: &WitnessFunction,
    eps: &Rational,
    eps_prime: &Rational,
    alpha: u64,
) -> Result<WitnessFunction> {
    let report = check_uniformity(graph, witness);
    if !report.support_ok {
        return Err(Error::SupportViolation {
            vertex: report.support_violation.unwrap(),
            radius: witness.radius,
        });
    }
    if report.max_edge_l1 > *eps {
        return Err(Error::NotUniform { measured: report.max_edge_l1, bound: *eps });
    }
    let required = required_alpha(max_ball_size_actual(graph, witness.radius), eps, eps_prime)?;
    if alpha < required {
        return Err(Error::InfeasibleAlpha { alpha, required });
    }
    let dists = witness
        .dists
        .par_iter()
        .map(|f| discretize(f, alpha))
        .collect::<Result<Vec<_>>>()?;
    Ok(WitnessFunction { radius: witness.radius, dists })
}

/// `tau(x)`: a nearest vertex of `targets` under `d_G`, ties by smallest id.
/// Vertices in components without targets map to `usize::MAX`.
pub fn nearest_projection(graph: &BoundedDegreeGraph, targets: &[usize]) -> Vec<usize> {
    let n = graph.n();
    let mut tau = vec![usize::MAX; n];
    let mut frontier: Vec<usize> = Vec::new();
    for &t in targets {
        if tau[t] == usize::MAX {
            tau[t] = t;
            frontier.push(t);
        }
    }
    let mut settled = vec![false; n];
    for &t in &frontier {
        settled[t] = true;
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in graph.neighbors(u) {
                if settled[w] {
                    continue;
                }
                if tau[w] == usize::MAX {
                    next.push(w);
                }
                tau[w] = tau[w].min(tau[u]);
            }
        }
        for &w in &next {
            settled[w] = true;
        }
        frontier = next;
    }
    tau
}

/// A witness defined on an induced subgraph `F` of `G` (measures on `V(F)`,
/// supports measured in `d_G`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeWitness {
    /// `V(F)`, ascending.
    pub domain: Vec<usize>,
    pub radius: usize,
    /// `dists[i]` is the measure of `domain[i]`.
    pub dists: Vec<RationalDist>,
}

impl RelativeWitness {
    pub fn position(&self, v: usize) -> Option<usize> {
        self.domain.binary_search(&v).ok()
    }

    pub fn dist_of(&self, v: usize) -> Option<&RationalDist> {
        self.position(v).map(|i| &self.dists[i])
    }

    /// Edges of `F` (both ends in the domain) with their l1 distances.
    pub fn edge_l1(&self, graph: &BoundedDegreeGraph) -> Vec<((usize, usize), Rational)> {
        let mut out = Vec::new();
        for (i, &x) in self.domain.iter().enumerate() {
            for &y in graph.neighbors(x) {
                if y > x {
                    if let Some(j) = self.position(y) {
                        out.push(((x, y), l1_distance(&self.dists[i], &self.dists[j])));
                    }
                }
            }
        }
        out
    }
}

/// Projects a witness on `G` onto the induced subgraph on `subset`
/// (any order, deduplicated) through the nearest-point map.
pub fn project_witness(
    graph: &BoundedDegreeGraph,
    witness: &WitnessFunction,
    subset: &[usize],
) -> Result<RelativeWitness> {
    if subset.is_empty() {
        return Err(Error::EmptySubgraph);
    }
    let mut domain = subset.to_vec();
    domain.sort_unstable();
    domain.dedup();
    for &v in &domain {
        graph.check_vertex(v)?;
    }
    let tau = nearest_projection(graph, &domain);
    let dists = domain.par_iter().map(|&x| witness.dists[x].push_forward(&tau)).collect();
    Ok(RelativeWitness { domain, radius: 2 * witness.radius, dists })
}
