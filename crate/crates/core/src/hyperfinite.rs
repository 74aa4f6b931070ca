//! From a uniform witness to a hyperfinite partition.
//!
//! Each step projects the witness onto the remaining induced subgraph `F`,
//! picks the vertex `z0` whose mass profile `x -> f(x)(z0)` has the smallest
//! total variation per unit mass, and takes the largest superlevel set of
//! that profile whose edge boundary is small. Cutting that boundary and
//! repeating yields blocks of bounded size with few removed edges.

use std::fmt::Write as _;
use std::ops::{Add, AddAssign, Mul, Sub};

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::measures::{check_uniformity, project_witness, RelativeWitness, WitnessFunction};
use crate::rational::{checked_lcm, format_rational, one, ratio, zero, Rational};
use crate::verifier::Predicate;

/// `Omega_t = {x : zeta(x) > t}` over the indices of `zeta`.
pub fn threshold_set(zeta: &[Rational], t: &Rational) -> Vec<usize> {
    (0..zeta.len()).filter(|&i| zeta[i] > *t).collect()
}

/// Vertex and edge boundary of `A` inside the induced subgraph on `in_f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundarySets {
    /// Vertices of `A` with a neighbor in `F - A`, ascending.
    pub vertices: Vec<usize>,
    /// Edges `(a, b)` with `a` in `A` and `b` in `F - A`, ascending.
    pub edges: Vec<(usize, usize)>,
}

pub fn boundary_sets(graph: &BoundedDegreeGraph, in_f: &[bool], set: &[usize]) -> BoundarySets {
    let mut in_a = vec![false; graph.n()];
    for &a in set {
        in_a[a] = true;
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for &a in &sorted {
        let before = edges.len();
        edges.extend(graph.neighbors(a).iter().filter(|&&b| in_f[b] && !in_a[b]).map(|&b| (a, b)));
        if edges.len() > before {
            vertices.push(a);
        }
    }
    BoundarySets { vertices, edges }
}

/// Both sides of the coarea and area identities for `zeta : V(F) -> [0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaCoarea {
    /// `sum_x sum_{y ~ x} |zeta(x) - zeta(y)|`.
    pub coarea_lhs: Rational,
    /// `2 * integral_0^1 |boundary_e(Omega_t)| dt`.
    pub coarea_rhs: Rational,
    /// `sum_x zeta(x)`.
    pub area_lhs: Rational,
    /// `integral_0^1 |Omega_t| dt`.
    pub area_rhs: Rational,
}

impl AreaCoarea {
    pub fn holds(&self) -> bool {
        self.coarea_lhs == self.coarea_rhs && self.area_lhs == self.area_rhs
    }
}

/// Evaluates both identities exactly; the integrals are finite sums over
/// the intervals between consecutive values of `zeta`.
pub fn area_coarea_check(f: &BoundedDegreeGraph, zeta: &[Rational]) -> Result<AreaCoarea> {
    assert_eq!(f.n(), zeta.len(), "one value per vertex");
    if let Some(bad) = zeta.iter().find(|z| **z < zero() || **z > one()) {
        return Err(Error::OutOfRange(*bad));
    }
    let mut coarea_lhs = zero();
    for x in 0..f.n() {
        for &y in f.neighbors(x) {
            coarea_lhs += (zeta[x] - zeta[y]).abs();
        }
    }
    let area_lhs = zeta.iter().fold(zero(), |s, z| s + z);

    let mut points: Vec<Rational> = zeta.to_vec();
    points.push(zero());
    points.push(one());
    points.sort();
    points.dedup();
    let all = vec![true; f.n()];
    let (mut boundary_integral, mut area_rhs) = (zero(), zero());
    for w in points.windows(2) {
        let omega = threshold_set(zeta, &w[0]);
        let len = w[1] - w[0];
        boundary_integral += len * Rational::from_integer(boundary_sets(f, &all, &omega).edges.len() as i128);
        area_rhs += len * Rational::from_integer(omega.len() as i128);
    }
    Ok(AreaCoarea { coarea_lhs, coarea_rhs: boundary_integral * 2, area_lhs, area_rhs })
}

/// One step of the extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowBoundarySet {
    /// The block `L`, ascending.
    pub vertices: Vec<usize>,
    pub z0: usize,
    /// `L = Omega_t` for this `t`.
    pub threshold: Rational,
    pub boundary: BoundarySets,
}

/// Exact nonnegative numbers the sweep can run on: scaled integers when the
/// witness has a small common denominator, rationals otherwise.
trait Exact: Copy + Ord + Send + Sync + Zero + AddAssign + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {}
impl Exact for u128 {}
impl Exact for Rational {}

fn abs_diff<T: Exact>(a: T, b: T) -> T {
    if a > b {
        a - b
    } else {
        b - a
    }
}

/// Above this common denominator the integer fast path could overflow in
/// the ratio cross-multiplication.
const FAST_PATH_DENOMINATOR: u64 = 1 << 40;

/// Finds `L` with `|boundary_e(L)| <= (d eps / 2) |L|`, where `d` is the
/// degree bound of `graph` and `F` is the induced subgraph on the witness
/// domain.
pub fn find_low_boundary_set(graph: &BoundedDegreeGraph, witness: &RelativeWitness, eps: &Rational) -> Result<LowBoundarySet> {
    if witness.domain.is_empty() {
        return Err(Error::EmptySubgraph);
    }
    let common = witness
        .dists
        .iter()
        .try_fold(1u64, |l, d| checked_lcm(l, d.denominator()))
        .filter(|&l| l <= FAST_PATH_DENOMINATOR);
    match common {
        Some(l) => sweep(graph, witness, eps, |a, d| a as u128 * (l / d) as u128, |v| ratio(v, l as u128)),
        None => sweep(graph, witness, eps, |a, d| ratio(a as u128, d as u128), |v| v),
    }
}

fn sweep<T: Exact>(
    graph: &BoundedDegreeGraph,
    witness: &RelativeWitness,
    eps: &Rational,
    value: impl Fn(u64, u64) -> T + Sync,
    to_rational: impl Fn(T) -> Rational,
) -> Result<LowBoundarySet> {
    let n = graph.n();
    let domain = &witness.domain;
    let mut in_f = vec![false; n];
    for &x in domain {
        in_f[x] = true;
    }
    let dist_of = |x: usize| &witness.dists[witness.position(x).unwrap()];

    // variation[z] = sum over ordered F-edges of |f(x)(z) - f(y)(z)|,
    // mass[z] = sum_x f(x)(z).
    let f_edges: Vec<(usize, usize)> = domain
        .iter()
        .flat_map(|&x| graph.neighbors(x).iter().filter(move |&&y| y > x).map(move |&y| (x, y)))
        .filter(|&(_, y)| in_f[y])
        .collect();
    let variation = f_edges
        .par_chunks(256)
        .map(|chunk| {
            let mut acc: Vec<(usize, T)> = Vec::new();
            for &(x, y) in chunk {
                let (p, q) = (dist_of(x), dist_of(y));
                let (dp, dq) = (p.denominator(), q.denominator());
                let (mut i, mut j) = (0, 0);
                let (pe, qe) = (p.entries(), q.entries());
                while i < pe.len() || j < qe.len() {
                    let (z, a, b) = if j == qe.len() || (i < pe.len() && pe[i].0 < qe[j].0) {
                        i += 1;
                        (pe[i - 1].0, value(pe[i - 1].1, dp), T::zero())
                    } else if i == pe.len() || qe[j].0 < pe[i].0 {
                        j += 1;
                        (qe[j - 1].0, T::zero(), value(qe[j - 1].1, dq))
                    } else {
                        i += 1;
                        j += 1;
                        (pe[i - 1].0, value(pe[i - 1].1, dp), value(qe[j - 1].1, dq))
                    };
                    let diff = abs_diff(a, b);
                    acc.push((z, diff + diff));
                }
            }
            acc
        })
        .fold(
            || vec![T::zero(); n],
            |mut total, part| {
                for (z, v) in part {
                    total[z] += v;
                }
                total
            },
        )
        .reduce(
            || vec![T::zero(); n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let mut mass = vec![T::zero(); n];
    for (i, d) in witness.dists.iter().enumerate() {
        debug_assert!(in_f[domain[i]]);
        for &(z, a) in d.entries() {
            mass[z] += value(a, d.denominator());
        }
    }

    // argmin variation / mass over z0 with positive mass, ties by id.
    let mut z0 = usize::MAX;
    for &z in domain {
        if mass[z].is_zero() {
            continue;
        }
        if z0 == usize::MAX || variation[z] * mass[z0] < variation[z0] * mass[z] {
            z0 = z;
        }
    }
    if z0 == usize::MAX {
        return Err(Error::NoQualifyingSet);
    }

    // Superlevel sets of zeta = f(.)(z0), grown by decreasing value.
    let mut positive: Vec<(T, usize)> = domain
        .iter()
        .filter_map(|&x| {
            let d = dist_of(x);
            let a = d.numerator(z0);
            (a > 0).then(|| (value(a, d.denominator()), x))
        })
        .collect();
    positive.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

    let d = graph.degree_bound() as u128;
    let (eps_num, eps_den) = (*eps.numer(), *eps.denom());
    if eps_num < 0 {
        return Err(Error::NoQualifyingSet);
    }
    let mut in_omega = vec![false; n];
    let mut boundary: i64 = 0;
    // Largest qualifying prefix length and its threshold.
    let mut best: Option<(usize, T)> = None;
    let mut k = 0;
    while k < positive.len() {
        let level = positive[k].0;
        while k < positive.len() && positive[k].0 == level {
            let x = positive[k].1;
            in_omega[x] = true;
            for &y in graph.neighbors(x) {
                if in_f[y] {
                    boundary += if in_omega[y] { -1 } else { 1 };
                }
            }
            k += 1;
        }
        let t = if k < positive.len() { positive[k].0 } else { T::zero() };
        // 2 |boundary_e| <= d eps |Omega|
        if 2 * boundary as u128 * eps_den as u128 <= d * eps_num as u128 * k as u128 {
            best = Some((k, t));
        }
    }
    let (size, t) = best.ok_or(Error::NoQualifyingSet)?;
    let mut vertices: Vec<usize> = positive[..size].iter().map(|&(_, x)| x).collect();
    vertices.sort_unstable();
    let boundary = boundary_sets(graph, &in_f, &vertices);
    debug_assert!(boundary.vertices.len() <= boundary.edges.len());
    Ok(LowBoundarySet { vertices, z0, threshold: to_rational(t), boundary })
}

/// Blocks `L_1, ..., L_m` partitioning `V(G)` and the removed edges `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionResult {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
    /// `(u, v)` with `u < v`, ascending.
    pub removed: Vec<(usize, usize)>,
    /// Per-step data; empty for partitions read from a file.
    pub steps: Vec<LowBoundarySet>,
}

impl PartitionResult {
    pub fn max_block(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Every vertex in exactly one block, `W` a set of graph edges, and no
    /// edge of `G - W` joining two blocks.
    pub fn validate(&self, graph: &BoundedDegreeGraph) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDistribution(m));
        if self.n != graph.n() {
            return bad(format!("partition has {} vertices, graph has {}", self.n, graph.n()));
        }
        let mut block_of = vec![usize::MAX; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                if v >= self.n || block_of[v] != usize::MAX {
                    return bad(format!("vertex {v} is out of range or in two blocks"));
                }
                block_of[v] = i;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return bad(format!("vertex {v} is in no block"));
        }
        let mut removed = self.removed.clone();
        removed.sort_unstable();
        removed.dedup();
        if removed.len() != self.removed.len() {
            return bad("removed edges repeat".into());
        }
        for &(u, v) in &removed {
            if !graph.has_edge(u, v) {
                return bad(format!("removed pair ({u}, {v}) is not an edge"));
            }
        }
        for (u, v) in graph.edges() {
            if block_of[u] != block_of[v] && removed.binary_search(&(u, v)).is_err() {
                return bad(format!("edge ({u}, {v}) joins two blocks"));
            }
        }
        Ok(())
    }

    /// `partition <n> <blocks> <|W|>`, one `<size> <v...>` line per block,
    /// then `removed` and one `u v` line per removed edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("partition {} {} {}\n", self.n, self.blocks.len(), self.removed.len());
        for b in &self.blocks {
            write!(out, "{}", b.len()).unwrap();
            for v in b {
                write!(out, " {v}").unwrap();
            }
            out.push('\n');
        }
        out.push_str("removed\n");
        for (u, v) in &self.removed {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> =
            text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty()).collect();
        let nums = |line: usize, s: &str| {
            s.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::format(line, format!("bad integer {t:?}"))))
                .collect::<Result<Vec<_>>>()
        };
        let (_, header) = lines.first().ok_or_else(|| Error::format(1, "empty partition file"))?;
        let h = header
            .strip_prefix("partition ")
            .ok_or_else(|| Error::format(1, "expected `partition <n> <blocks> <|W|>`"))?;
        let h = nums(1, h)?;
        if h.len() != 3 {
            return Err(Error::format(1, "expected `partition <n> <blocks> <|W|>`"));
        }
        let (n, nb, nw) = (h[0], h[1], h[2]);
        if lines.len() != 1 + nb + 1 + nw {
            return Err(Error::format(1, "line count does not match header"));
        }
        let mut blocks = Vec::with_capacity(nb);
        for &(line, l) in &lines[1..=nb] {
            let v = nums(line, l)?;
            if v.is_empty() || v[0] != v.len() - 1 {
                return Err(Error::format(line, "block size does not match"));
            }
            blocks.push(v[1..].to_vec());
        }
        let (line, marker) = lines[nb + 1];
        if marker != "removed" {
            return Err(Error::format(line, "expected `removed`"));
        }
        let mut removed = Vec::with_capacity(nw);
        for &(line, l) in &lines[nb + 2..] {
            match nums(line, l)?[..] {
                [u, v] if u < v => removed.push((u, v)),
                _ => return Err(Error::format(line, "expected `u v` with u < v")),
            }
        }
        Ok(Self { n, blocks, removed, steps: Vec::new() })
    }
}

/// Greedy extraction from an `(eps, r)`-uniform witness on `G`.
pub fn extract_partition(graph: &BoundedDegreeGraph, witness: &WitnessFunction, eps: &Rational) -> Result<PartitionResult> {
    let report = check_uniformity(graph, witness);
    if !report.support_ok {
        return Err(Error::SupportViolation { vertex: report.support_violation.unwrap(), radius: witness.radius });
    }
    if report.max_edge_l1 > *eps {
        return Err(Error::NotUniform { measured: report.max_edge_l1, bound: *eps });
    }
    let n = graph.n();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::new();
    let mut removed = Vec::new();
    let mut steps = Vec::new();
    while !remaining.is_empty() {
        let projected = project_witness(graph, witness, &remaining)?;
        let step = find_low_boundary_set(graph, &projected, eps)?;
        removed.extend(step.boundary.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))));
        let mut taken = vec![false; n];
        for &v in &step.vertices {
            taken[v] = true;
        }
        remaining.retain(|&v| !taken[v]);
        blocks.push(step.vertices.clone());
        steps.push(step);
    }
    removed.sort_unstable();
    Ok(PartitionResult { n, blocks, removed, steps })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// `|W| <= eps |E(G)|`.
    PerEdge,
    /// `|W| <= eps |V(G)|`.
    PerVertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperfiniteReport {
    pub removed_per_edge: Rational,
    pub removed_per_vertex: Rational,
    pub max_block: usize,
    pub holds: bool,
}

/// Whether `partition` witnesses `(eps, k)`-hyperfiniteness of `G`.
pub fn check_hyperfinite(
    graph: &BoundedDegreeGraph,
    partition: &PartitionResult,
    eps: &Rational,
    k: usize,
    normalization: Normalization,
) -> Result<HyperfiniteReport> {
    partition.validate(graph)?;
    let w = partition.removed.len() as u128;
    let per = |total: usize| if total == 0 { zero() } else { ratio(w, total as u128) };
    let removed_per_edge = per(graph.edge_count());
    let removed_per_vertex = per(graph.n());
    let max_block = partition.max_block();
    let fraction = match normalization {
        Normalization::PerEdge => removed_per_edge,
        Normalization::PerVertex => removed_per_vertex,
    };
    Ok(HyperfiniteReport { removed_per_edge, removed_per_vertex, max_block, holds: max_block <= k && fraction <= *eps })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EditBound {
    /// `|W| / |V(G)|`.
    Bound(Rational),
    /// Index of a block whose induced subgraph fails the predicate.
    Infeasible { block: usize },
}

impl EditBound {
    pub fn to_text(&self) -> String {
        match self {
            EditBound::Bound(q) => format_rational(q),
            EditBound::Infeasible { block } => format!("infeasible(block {block})"),
        }
    }
}

/// Upper bound on the edit distance to a monotone property: deleting `W`
/// leaves a disjoint union of blocks, which has the property when each block
/// does.
pub fn edit_distance_upper_bound(
    graph: &BoundedDegreeGraph,
    partition: &PartitionResult,
    predicate: Predicate,
) -> Result<EditBound> {
    partition.validate(graph)?;
    let failing = partition
        .blocks
        .par_iter()
        .position_first(|b| !predicate.holds(&graph.induced_subgraph(b)));
    Ok(match failing {
        Some(block) => EditBound::Infeasible { block },
        None if graph.n() == 0 => EditBound::Bound(zero()),
        None => EditBound::Bound(ratio(partition.removed.len() as u128, graph.n() as u128)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, generate, FamilySpec};
    use crate::graph::max_ball_size_actual;
    use crate::measures::{uniform_ball_witness, RationalDist};
    use crate::separators::witness_from_separators;
    use crate::separators::SeparatorDistribution;
    use proptest::prelude::*;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn threshold_sets_are_strict() {
        let zeta = [q(1, 1), q(1, 2), q(0, 1)];
        assert_eq!(threshold_set(&zeta, &q(1, 2)), vec![0]);
        assert!(threshold_set(&zeta, &q(1, 1)).is_empty());
        assert_eq!(threshold_set(&zeta, &q(-1, 1)), vec![0, 1, 2]);
    }

    #[test]
    fn area_coarea_on_p3() {
        let g = generate(&FamilySpec::Path { n: 3 }).unwrap();
        let r = area_coarea_check(&g, &[q(1, 1), q(1, 2), q(0, 1)]).unwrap();
        assert_eq!((r.coarea_lhs, r.coarea_rhs), (q(2, 1), q(2, 1)));
        assert_eq!((r.area_lhs, r.area_rhs), (q(3, 2), q(3, 2)));
        let flat = area_coarea_check(&g, &[q(1, 3); 3]).unwrap();
        assert_eq!((flat.coarea_lhs, flat.coarea_rhs), (zero(), zero()));
        assert!(matches!(area_coarea_check(&g, &[q(3, 2), zero(), zero()]), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn boundary_vertices_never_exceed_boundary_edges() {
        let g = generate(&FamilySpec::Grid { rows: 4, cols: 4 }).unwrap();
        let b = boundary_sets(&g, &[true; 16], &[0, 1, 4, 5]);
        assert_eq!(b.vertices, vec![1, 4, 5]);
        assert_eq!(b.edges, vec![(1, 2), (4, 8), (5, 6), (5, 9)]);
    }

    #[test]
    fn single_vertex_subgraph() {
        let g = generate(&FamilySpec::Path { n: 4 }).unwrap();
        let w = uniform_ball_witness(&g, 1);
        let rel = project_witness(&g, &w, &[2]).unwrap();
        let l = find_low_boundary_set(&g, &rel, &q(1, 10)).unwrap();
        assert_eq!(l.vertices, vec![2]);
        assert!(l.boundary.edges.is_empty());
    }

    #[test]
    fn cycle_low_boundary_set() {
        let g = generate(&FamilySpec::Cycle { n: 20 }).unwrap();
        let w = uniform_ball_witness(&g, 3);
        let eps = q(2, 7);
        let rel = project_witness(&g, &w, &(0..20).collect::<Vec<_>>()).unwrap();
        let l = find_low_boundary_set(&g, &rel, &eps).unwrap();
        let size = l.vertices.len() as i128;
        assert!(size > 0);
        assert!(Rational::from_integer(l.boundary.edges.len() as i128) <= q(2, 1) * eps / 2 * size);
        assert!(Rational::from_integer(l.boundary.vertices.len() as i128) <= q(2, 1) * eps / 2 * size);
        let ball = g.bfs_layers(l.z0, 6);
        assert!(l.vertices.iter().all(|v| ball.iter().any(|(b, _)| b == v)));
    }

    #[test]
    fn c100_extraction_meets_bounds() {
        let g = generate(&FamilySpec::Cycle { n: 100 }).unwrap();
        let w = uniform_ball_witness(&g, 5);
        let eps = check_uniformity(&g, &w).max_edge_l1;
        assert_eq!(eps, q(2, 11));
        let p = extract_partition(&g, &w, &eps).unwrap();
        p.validate(&g).unwrap();
        assert!(p.max_block() <= 21);
        assert!(p.removed.len() <= 36);
        assert!(Rational::from_integer(p.removed.len() as i128) <= q(4, 1) * eps / 2 * 100);
        assert_eq!(p.blocks.iter().map(Vec::len).sum::<usize>(), 100);
        assert_eq!(edit_distance_upper_bound(&g, &p, Predicate::Planar).unwrap(), EditBound::Bound(ratio(p.removed.len() as u128, 100)));
    }

    #[test]
    fn point_mass_on_empty_separator_gives_one_block() {
        let g = generate(&FamilySpec::Grid { rows: 3, cols: 3 }).unwrap();
        let dist = SeparatorDistribution::new(&g, 9, vec![(vec![], one())]).unwrap();
        let w = witness_from_separators(&g, &dist).unwrap().tightened(&g);
        let p = extract_partition(&g, &w, &zero()).unwrap();
        assert_eq!(p.blocks, vec![(0..9).collect::<Vec<_>>()]);
        assert!(p.removed.is_empty());
    }

    #[test]
    fn non_uniform_input_is_refused() {
        let g = generate(&FamilySpec::Path { n: 5 }).unwrap();
        let w = uniform_ball_witness(&g, 1);
        assert!(matches!(extract_partition(&g, &w, &q(1, 10)), Err(Error::NotUniform { .. })));
    }

    #[test]
    fn hyperfinite_reports() {
        let g = generate(&FamilySpec::Path { n: 10 }).unwrap();
        let pairs = PartitionResult {
            n: 10,
            blocks: (0..5).map(|i| vec![2 * i, 2 * i + 1]).collect(),
            removed: (0..4).map(|i| (2 * i + 1, 2 * i + 2)).collect(),
            steps: vec![],
        };
        let rep = check_hyperfinite(&g, &pairs, &q(2, 5), 2, Normalization::PerVertex).unwrap();
        assert_eq!(rep.removed_per_vertex, q(4, 10));
        assert_eq!(rep.removed_per_edge, q(4, 9));
        assert!(rep.holds);
        assert!(!check_hyperfinite(&g, &pairs, &q(2, 5), 1, Normalization::PerVertex).unwrap().holds);
        assert!(!check_hyperfinite(&g, &pairs, &q(2, 5), 2, Normalization::PerEdge).unwrap().holds);
        let whole = PartitionResult { n: 10, blocks: vec![(0..10).collect()], removed: vec![], steps: vec![] };
        assert!(check_hyperfinite(&g, &whole, &zero(), 10, Normalization::PerEdge).unwrap().holds);
        let text = pairs.to_text();
        assert_eq!(PartitionResult::from_text(&text).unwrap(), pairs);
        let mut broken = pairs.clone();
        broken.removed.pop();
        assert!(broken.validate(&g).is_err());
        assert!(PartitionResult::from_text("partition 2 1 0\n1 0\nremoved\n").is_ok());
        assert!(PartitionResult::from_text("partition 2 1 0\n2 0\nremoved\n").is_err());
    }

    #[test]
    fn infeasible_block() {
        let g = generate(&FamilySpec::Path { n: 3 }).unwrap().disjoint_union(&complete_graph(5));
        let p = PartitionResult { n: 8, blocks: vec![vec![0, 1, 2], (3..8).collect()], removed: vec![], steps: vec![] };
        assert_eq!(edit_distance_upper_bound(&g, &p, Predicate::Planar).unwrap(), EditBound::Infeasible { block: 1 });
    }

    #[test]
    fn rational_fallback_matches_integer_path() {
        // Denominators whose lcm exceeds the fast-path limit.
        let g = generate(&FamilySpec::Path { n: 3 }).unwrap();
        let big = [1_000_003u64, 1_000_033, 1_000_037];
        let dists: Vec<RationalDist> = big
            .iter()
            .enumerate()
            .map(|(x, &d)| RationalDist::new(d, [(x, d / 2), ((x + 1) % 3, d - d / 2)]).unwrap())
            .collect();
        let rel = RelativeWitness { domain: vec![0, 1, 2], radius: 2, dists };
        let l = find_low_boundary_set(&g, &rel, &q(2, 1)).unwrap();
        assert!(!l.vertices.is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn area_and_coarea_identities(seed in any::<u64>(), family in 0usize..4) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let spec = match family {
                0 => FamilySpec::Grid { rows: rng.gen_range(1..6), cols: rng.gen_range(1..6) },
                1 => FamilySpec::Path { n: rng.gen_range(1..20) },
                2 => FamilySpec::Cycle { n: rng.gen_range(3..20) },
                _ => FamilySpec::RandomRegular { n: 12, d: 3, seed },
            };
            let g = generate(&spec).unwrap();
            let zeta: Vec<Rational> = (0..g.n()).map(|_| {
                let den = rng.gen_range(1..12);
                q(rng.gen_range(0..=den), den)
            }).collect();
            prop_assert!(area_coarea_check(&g, &zeta).unwrap().holds());
        }

        #[test]
        fn extraction_postconditions(n in 3usize..40, r in 1usize..5, cycle in any::<bool>()) {
            let g = if cycle { generate(&FamilySpec::Cycle { n }).unwrap() } else { generate(&FamilySpec::Path { n }).unwrap() };
            let w = uniform_ball_witness(&g, r);
            let eps = check_uniformity(&g, &w).max_edge_l1;
            let p = extract_partition(&g, &w, &eps).unwrap();
            p.validate(&g).unwrap();
            let d = Rational::from_integer(g.degree_bound() as i128);
            prop_assert!(Rational::from_integer(p.removed.len() as i128) <= d * d * eps / 2 * Rational::from_integer(n as i128));
            prop_assert!(p.max_block() <= max_ball_size_actual(&g, 2 * r));
            for s in &p.steps {
                let ball = g.bfs_layers(s.z0, 2 * r);
                prop_assert!(s.vertices.iter().all(|v| ball.iter().any(|(b, _)| b == v)));
                prop_assert!(s.boundary.vertices.len() <= s.boundary.edges.len());
            }
            let mut removed: Vec<(usize, usize)> = p.steps.iter().flat_map(|s| s.boundary.edges.iter().map(|&(a, b)| (a.min(b), a.max(b)))).collect();
            removed.sort_unstable();
            prop_assert_eq!(removed, p.removed.clone());
        }
    }
}
