//! K-separators, probability measures over them, shift constructions for
//! paths, cycles, grids and trees, and the conversion of a separator
//! measure into a Property-A witness.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::{generate, FamilySpec};
use crate::graph::{max_ball_size_bound, BoundedDegreeGraph};
use crate::measures::{RationalDist, WitnessFunction};
use crate::rational::{checked_lcm, one, zero, Rational};

/// A vertex set whose removal leaves components of at most `k` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorSample {
    /// Ascending, deduplicated.
    pub vertices: Vec<usize>,
    pub k: usize,
}

/// Components of `G - Y` as a per-vertex component index (`None` on `Y`)
/// plus component sizes.
#[derive(Clone, Debug)]
pub struct Residual {
    pub component_of: Vec<Option<usize>>,
    pub components: Vec<Vec<usize>>,
}

pub fn residual(graph: &BoundedDegreeGraph, removed: &[usize]) -> Residual {
    let mut mask = vec![false; graph.n()];
    for &y in removed {
        mask[y] = true;
    }
    let components = graph.components_avoiding(&mask);
    let mut component_of = vec![None; graph.n()];
    for (i, c) in components.iter().enumerate() {
        for &v in c {
            component_of[v] = Some(i);
        }
    }
    Residual { component_of, components }
}

pub fn is_k_separator(graph: &BoundedDegreeGraph, removed: &[usize], k: usize) -> bool {
    residual(graph, removed).components.iter().all(|c| c.len() <= k)
}

/// A finitely supported probability measure on `Sep(G, K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorDistribution {
    n: usize,
    k: usize,
    support: Vec<(SeparatorSample, Rational)>,
}

impl SeparatorDistribution {
    /// Validates weights (positive, summing to one) and every sample.
    pub fn new(graph: &BoundedDegreeGraph, k: usize, support: Vec<(Vec<usize>, Rational)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let total: Rational = support.iter().map(|(_, w)| *w).sum();
        if total != one() {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        let mut samples = Vec::with_capacity(support.len());
        for (mut vertices, weight) in support {
            if weight <= zero() {
                return Err(Error::InvalidDistribution("nonpositive weight".into()));
            }
            vertices.sort_unstable();
            vertices.dedup();
            for &v in &vertices {
                graph.check_vertex(v)?;
            }
            samples.push((SeparatorSample { vertices, k }, weight));
        }
        let bad = samples.par_iter().position_first(|(s, _)| !is_k_separator(graph, &s.vertices, k));
        if let Some(i) = bad {
            return Err(Error::InvalidDistribution(format!("sample {i} is not a {k}-separator")));
        }
        Ok(Self { n: graph.n(), k, support: samples })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[(SeparatorSample, Rational)] {
        &self.support
    }

    /// `mu(Y : x in Y)` for every vertex.
    pub fn marginals(&self) -> Vec<Rational> {
        let mut m = vec![zero(); self.n];
        for (s, w) in &self.support {
            for &v in &s.vertices {
                m[v] += *w;
            }
        }
        m
    }

    /// Largest marginal and the first vertex attaining it.
    pub fn max_marginal(&self) -> (Rational, Option<usize>) {
        let mut best = (zero(), None);
        for (v, m) in self.marginals().into_iter().enumerate() {
            if best.1.is_none() || m > best.0 {
                best = (m, Some(v));
            }
        }
        best
    }

    /// `sepdist <n> <K> <support_size>` then `<num>/<den> <|Y|> <y...>`.
    pub fn to_text(&self) -> String {
        let mut out = format!("sepdist {} {} {}\n", self.n, self.k, self.support.len());
        for (s, w) in &self.support {
            write!(out, "{}/{} {}", w.numer(), w.denom(), s.vertices.len()).unwrap();
            for y in &s.vertices {
                write!(out, " {y}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(graph: &BoundedDegreeGraph, text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::format(1, "empty sepdist file"))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        if f.len() != 4 || f[0] != "sepdist" {
            return Err(Error::format(1, "expected `sepdist <n> <K> <support_size>`"));
        }
        let int = |s: &str, line: usize| {
            s.parse::<usize>().map_err(|_| Error::format(line, format!("bad integer {s:?}")))
        };
        let (n, k, size) = (int(f[1], 1)?, int(f[2], 1)?, int(f[3], 1)?);
        if n != graph.n() {
            return Err(Error::format(1, format!("sepdist is for {n} vertices, graph has {}", graph.n())));
        }
        let mut support = Vec::with_capacity(size);
        for (idx, line) in lines {
            let lineno = idx + 1;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() < 2 {
                return Err(Error::format(lineno, "expected `<weight> <|Y|> ...`"));
            }
            let weight = crate::rational::parse_rational(parts[0])
                .map_err(|e| Error::format(lineno, e.to_string()))?;
            let count = int(parts[1], lineno)?;
            if parts.len() != count + 2 {
                return Err(Error::format(lineno, "separator size does not match"));
            }
            let ys = parts[2..].iter().map(|s| int(s, lineno)).collect::<Result<Vec<_>>>()?;
            support.push((ys, weight));
        }
        if support.len() != size {
            return Err(Error::format(1, "support size does not match header"));
        }
        Self::new(graph, k, support)
    }
}

fn uniform_over(graph: &BoundedDegreeGraph, k: usize, samples: Vec<Vec<usize>>) -> Result<SeparatorDistribution> {
    let w = Rational::new(1, samples.len() as i128);
    SeparatorDistribution::new(graph, k, samples.into_iter().map(|s| (s, w)).collect())
}

/// Matches `graph` against the path `0 - 1 - ... - (n-1)`, optionally closed
/// into a cycle.
fn is_path_or_cycle(graph: &BoundedDegreeGraph) -> Option<bool> {
    let n = graph.n();
    let path = generate(&FamilySpec::Path { n }).ok()?;
    if same_edges(graph, &path) {
        return Some(false);
    }
    let cycle = generate(&FamilySpec::Cycle { n }).ok()?;
    same_edges(graph, &cycle).then_some(true)
}

fn same_edges(a: &BoundedDegreeGraph, b: &BoundedDegreeGraph) -> bool {
    a.n() == b.n() && a.edges().eq(b.edges())
}

/// Uniform over the `k` shifts `Y_s = {v : v = s mod k}` of a path or
/// cycle labelled in order. Every marginal is exactly `1/k`. The declared
/// `K` is the largest residual component, which is `k - 1` except on
/// cycles with `k` not dividing `n`, where the wrap-around arc is longer.
pub fn path_shift_distribution(graph: &BoundedDegreeGraph, k: usize) -> Result<SeparatorDistribution> {
    if k == 0 {
        return Err(Error::Usage("shift period must be positive".into()));
    }
    if is_path_or_cycle(graph).is_none() {
        return Err(Error::NotAFamilyMember("path or cycle in vertex order"));
    }
    let samples: Vec<Vec<usize>> =
        (0..k).map(|s| (0..graph.n()).filter(|v| v % k == s).collect()).collect();
    let largest = samples
        .iter()
        .flat_map(|y| residual(graph, y).components.into_iter().map(|c| c.len()))
        .max()
        .unwrap_or(0);
    uniform_over(graph, largest, samples)
}

/// Detects a `rows x cols` grid in row-major labelling.
pub fn grid_dimensions(graph: &BoundedDegreeGraph) -> Option<(usize, usize)> {
    let n = graph.n();
    (1..=n).filter(|r| n.is_multiple_of(*r)).find_map(|rows| {
        let cols = n / rows;
        let g = generate(&FamilySpec::Grid { rows, cols }).ok()?;
        same_edges(graph, &g).then_some((rows, cols))
    })
}

/// Uniform over the `k^2` separators `Y = {(i, j) : i = s1 or j = s2 mod k}`
/// of a row-major grid; `K = (k-1)^2`, marginals `(2k-1)/k^2 <= 2/k`.
pub fn grid_shift_distribution(graph: &BoundedDegreeGraph, k: usize) -> Result<SeparatorDistribution> {
    if k == 0 {
        return Err(Error::Usage("shift period must be positive".into()));
    }
    let (_, cols) = grid_dimensions(graph).ok_or(Error::NotAFamilyMember("row-major grid"))?;
    let mut samples = Vec::with_capacity(k * k);
    for s1 in 0..k {
        for s2 in 0..k {
            samples.push(
                (0..graph.n())
                    .filter(|v| (v / cols) % k == s1 || (v % cols) % k == s2)
                    .collect(),
            );
        }
    }
    uniform_over(graph, (k - 1) * (k - 1), samples)
}

/// BFS depth from vertex 0, if the graph is a tree.
fn tree_depths(graph: &BoundedDegreeGraph) -> Option<Vec<usize>> {
    if graph.n() == 0 || graph.edge_count() + 1 != graph.n() {
        return None;
    }
    graph.distances(0).into_iter().collect()
}

/// Uniform over `Y_s = {v : depth(v) = s mod k}` with the root at vertex 0;
/// marginals exactly `1/k`, `K = N^d_{k-1}`.
pub fn tree_depth_shift_distribution(graph: &BoundedDegreeGraph, k: usize) -> Result<SeparatorDistribution> {
    if k == 0 {
        return Err(Error::Usage("shift period must be positive".into()));
    }
    let depth = tree_depths(graph).ok_or(Error::NotAFamilyMember("tree"))?;
    let bound = max_ball_size_bound(graph.degree_bound(), k - 1)?;
    let bound = usize::try_from(bound).map_err(|_| Error::Overflow("separator bound"))?;
    let samples = (0..k).map(|s| (0..graph.n()).filter(|&v| depth[v] % k == s).collect()).collect();
    uniform_over(graph, bound, samples)
}

/// One summand `f_{Y,x}`: mass `weight` spread uniformly over `support`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub weight: Rational,
    /// `{x}` when `x` is in `Y`, else the component of `G - Y` holding `x`.
    pub support: Vec<usize>,
}

/// Per-sample residual structure, reusable across vertices.
pub struct SeparatorWitnessBuilder<'a> {
    dist: &'a SeparatorDistribution,
    residuals: Vec<Residual>,
}

impl<'a> SeparatorWitnessBuilder<'a> {
    pub fn new(graph: &BoundedDegreeGraph, dist: &'a SeparatorDistribution) -> Self {
        let residuals = dist.support.par_iter().map(|(s, _)| residual(graph, &s.vertices)).collect();
        Self { dist, residuals }
    }

    pub fn contribution(&self, sample: usize, x: usize) -> Contribution {
        let weight = self.dist.support[sample].1;
        let support = match self.residuals[sample].component_of[x] {
            None => vec![x],
            Some(c) => self.residuals[sample].components[c].clone(),
        };
        Contribution { weight, support }
    }

    /// `f(x) = sum_Y f_{Y,x}` over the lcm of the denominators involved.
    pub fn measure(&self, x: usize) -> Result<RationalDist> {
        let parts: Vec<Contribution> = (0..self.residuals.len()).map(|i| self.contribution(i, x)).collect();
        let mut denom: u64 = 1;
        for p in &parts {
            let den = u64::try_from(*p.weight.denom()).map_err(|_| Error::Overflow("weight denominator"))?;
            let part = den.checked_mul(p.support.len() as u64).ok_or(Error::Overflow("witness denominator"))?;
            denom = checked_lcm(denom, part).ok_or(Error::Overflow("witness denominator"))?;
        }
        let mut mass: BTreeMap<usize, u64> = BTreeMap::new();
        for p in &parts {
            // weight / |support| expressed over `denom`.
            let each = (Rational::from_integer(denom as i128) * p.weight) / Rational::from_integer(p.support.len() as i128);
            debug_assert!(each.is_integer());
            let each = *each.numer() as u64;
            for &z in &p.support {
                *mass.entry(z).or_insert(0) += each;
            }
        }
        Ok(RationalDist::new(denom, mass)?.reduced())
    }
}

/// Property-A witness from a separator measure; supports lie in
/// `B_K(x, G)` and adjacent measures differ by at most four times the
/// largest marginal.
pub fn witness_from_separators(graph: &BoundedDegreeGraph, dist: &SeparatorDistribution) -> Result<WitnessFunction> {
    if dist.n != graph.n() {
        return Err(Error::InvalidDistribution("distribution is for a different graph".into()));
    }
    let builder = SeparatorWitnessBuilder::new(graph, dist);
    let dists = (0..graph.n()).into_par_iter().map(|x| builder.measure(x)).collect::<Result<Vec<_>>>()?;
    Ok(WitnessFunction::new(dist.k, dists))
}

/// Multiplicative-weights search for a separator measure with small
/// marginals. Each round carves a `K`-separator greedily against the
/// current vertex weights, then penalises its vertices. Best effort: the
/// result is always valid but carries no optimality guarantee.
pub fn minimax_separator_search(
    graph: &BoundedDegreeGraph,
    k: usize,
    rounds: usize,
    seed: u64,
) -> Result<SeparatorDistribution> {
    let n = graph.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = vec![1.0f64; n];
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let rounds = rounds.max(1);
    for _ in 0..rounds {
        let sep = carve_separator(graph, k, &weights, &mut rng);
        for &v in &sep {
            weights[v] *= 1.5;
        }
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total / n as f64;
        }
        *counts.entry(sep).or_insert(0) += 1;
    }
    let support = counts
        .into_iter()
        .map(|(sep, c)| (sep, Rational::new(c as i128, rounds as i128)))
        .collect();
    SeparatorDistribution::new(graph, k, support)
}

/// Repeatedly grows a BFS ball inside an oversized component until it holds
/// `K` vertices, then removes the lightest BFS layer that seals off a piece
/// of size at most `K`.
fn carve_separator(graph: &BoundedDegreeGraph, k: usize, weights: &[f64], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = graph.n();
    let mut removed = vec![false; n];
    let mut done = vec![false; n];
    loop {
        let blocked: Vec<bool> = (0..n).map(|v| removed[v] || done[v]).collect();
        let oversized: Vec<Vec<usize>> =
            graph.components_avoiding(&blocked).into_iter().filter(|c| c.len() > k).collect();
        if oversized.is_empty() {
            break;
        }
        for comp in oversized {
            let start = comp[rng.gen_range(0..comp.len())];
            // BFS layers inside the component.
            let mut layers: Vec<Vec<usize>> = vec![vec![start]];
            let mut seen = blocked.clone();
            seen[start] = true;
            loop {
                let mut next = Vec::new();
                for &u in layers.last().unwrap() {
                    for &w in graph.neighbors(u) {
                        if !seen[w] {
                            seen[w] = true;
                            next.push(w);
                        }
                    }
                }
                if next.is_empty() {
                    break;
                }
                layers.push(next);
            }
            // Largest j with |L_0 .. L_{j-1}| <= K; candidate cut layers 1..=j.
            let mut inner = 0;
            let mut j = 0;
            while j < layers.len() && inner + layers[j].len() <= k {
                inner += layers[j].len();
                j += 1;
            }
            let cut = if j == 0 {
                0
            } else {
                let hi = j.min(layers.len() - 1);
                (1..=hi)
                    .min_by(|&a, &b| {
                        let wa: f64 = layers[a].iter().map(|&v| weights[v]).sum();
                        let wb: f64 = layers[b].iter().map(|&v| weights[v]).sum();
                        wa.total_cmp(&wb)
                    })
                    .unwrap_or(0)
            };
            for &v in &layers[cut] {
                removed[v] = true;
            }
            for layer in &layers[..cut] {
                for &v in layer {
                    done[v] = true;
                }
            }
        }
    }
    (0..n).filter(|&v| removed[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{check_uniformity, l1_distance};

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn fam(spec: FamilySpec) -> BoundedDegreeGraph {
        generate(&spec).unwrap()
    }

    #[test]
    fn separator_predicate() {
        let p5 = fam(FamilySpec::Path { n: 5 });
        assert!(is_k_separator(&p5, &[2], 2));
        assert!(!is_k_separator(&p5, &[], 4));
        let g = fam(FamilySpec::Grid { rows: 3, cols: 3 });
        assert!(is_k_separator(&g, &[1, 3, 4, 5, 7], 1));
    }

    #[test]
    fn point_mass_marginals() {
        let p5 = fam(FamilySpec::Path { n: 5 });
        let d = SeparatorDistribution::new(&p5, 2, vec![(vec![2], one())]).unwrap();
        assert_eq!(d.max_marginal(), (one(), Some(2)));
        assert!(SeparatorDistribution::new(&p5, 1, vec![(vec![2], one())]).is_err());
        assert!(SeparatorDistribution::new(&p5, 2, vec![(vec![2], q(1, 2))]).is_err());
    }

    #[test]
    fn shift_family_marginals() {
        let p100 = fam(FamilySpec::Path { n: 100 });
        let d = path_shift_distribution(&p100, 10).unwrap();
        assert_eq!(d.k(), 9);
        assert!(d.marginals().iter().all(|m| *m == q(1, 10)));

        let c10 = fam(FamilySpec::Cycle { n: 10 });
        let d = path_shift_distribution(&c10, 3).unwrap();
        assert!(d.marginals().iter().all(|m| *m == q(1, 3)));
        assert_eq!(d.k(), 3);

        let g4 = fam(FamilySpec::Grid { rows: 4, cols: 4 });
        let d = grid_shift_distribution(&g4, 2).unwrap();
        assert_eq!((d.support().len(), d.k()), (4, 1));
        for (s, _) in d.support() {
            assert!(residual(&g4, &s.vertices).components.iter().all(|c| c.len() == 1));
        }
        let d1 = grid_shift_distribution(&g4, 1).unwrap();
        assert_eq!(d1.max_marginal().0, one());

        let g30 = fam(FamilySpec::Grid { rows: 30, cols: 30 });
        let d = grid_shift_distribution(&g30, 10).unwrap();
        assert_eq!(d.k(), 81);
        assert_eq!(d.max_marginal().0, q(19, 100));

        let tree = fam(FamilySpec::FullTree { branching: 2, depth: 8 });
        let d = tree_depth_shift_distribution(&tree, 6).unwrap();
        assert_eq!(d.k(), 94);
        assert!(d.marginals().iter().all(|m| *m == q(1, 6)));
        assert!(matches!(tree_depth_shift_distribution(&g4, 2), Err(Error::NotAFamilyMember(_))));
        assert!(matches!(grid_shift_distribution(&tree, 2), Err(Error::NotAFamilyMember(_))));
    }

    #[test]
    fn empty_separator_gives_component_average() {
        let c6 = fam(FamilySpec::Cycle { n: 6 });
        let d = SeparatorDistribution::new(&c6, 6, vec![(vec![], one())]).unwrap();
        let w = witness_from_separators(&c6, &d).unwrap();
        assert!(w.dists.iter().all(|f| *f == RationalDist::uniform(&[0, 1, 2, 3, 4, 5])));
        assert_eq!(check_uniformity(&c6, &w).max_edge_l1, zero());
    }

    /// Enumerates the three shifts of P_6 by hand.
    #[test]
    fn path_shift_witness_matches_enumeration() {
        let p6 = fam(FamilySpec::Path { n: 6 });
        let d = path_shift_distribution(&p6, 3).unwrap();
        let w = witness_from_separators(&p6, &d).unwrap();
        // Y_0 = {0,3}: comps {1,2},{4,5}; Y_1 = {1,4}: {0},{2,3},{5}; Y_2 = {2,5}: {0,1},{3,4}.
        let expected_1 = RationalDist::new(6, [(0, 1), (1, 4), (2, 1), (3, 0)]).unwrap();
        // x=1: Y_0 -> uniform{1,2}/3, Y_1 -> delta_1/3, Y_2 -> uniform{0,1}/3
        assert_eq!(w.dists[1], expected_1.reduced());
        let report = check_uniformity(&p6, &w);
        assert!(report.max_edge_l1 <= q(4, 3));
        // f(0): Y_0 delta_0, Y_1 {0}, Y_2 {0,1} -> (5/6, 1/6); l1(f0, f1) = |5/6-1/6|+|1/6-2/3|+1/6
        assert_eq!(l1_distance(&w.dists[0], &w.dists[1]), q(8, 6));
    }

    #[test]
    fn contributions_agree_off_the_separator() {
        let g = fam(FamilySpec::Grid { rows: 8, cols: 8 });
        let d = grid_shift_distribution(&g, 3).unwrap();
        let b = SeparatorWitnessBuilder::new(&g, &d);
        for (i, (s, _)) in d.support().iter().enumerate() {
            for (x, y) in g.edges() {
                if !s.vertices.contains(&x) && !s.vertices.contains(&y) {
                    assert_eq!(b.contribution(i, x), b.contribution(i, y));
                }
            }
        }
    }

    #[test]
    fn minimax_search_is_valid() {
        let p10 = fam(FamilySpec::Path { n: 10 });
        let d = minimax_separator_search(&p10, 1, 20, 3).unwrap();
        assert!(d.max_marginal().0 <= one());
        let trivial = minimax_separator_search(&p10, 10, 5, 3).unwrap();
        assert_eq!(trivial.max_marginal().0, zero());

        let g = fam(FamilySpec::Grid { rows: 5, cols: 5 });
        let d = minimax_separator_search(&g, 4, 200, 7).unwrap();
        assert!(d.support().iter().all(|(s, _)| is_k_separator(&g, &s.vertices, 4)));
        assert_eq!(minimax_separator_search(&g, 4, 200, 7).unwrap(), d);
    }

    #[test]
    fn sepdist_text_round_trip() {
        let g = fam(FamilySpec::Grid { rows: 4, cols: 4 });
        let d = grid_shift_distribution(&g, 2).unwrap();
        assert_eq!(SeparatorDistribution::from_text(&g, &d.to_text()).unwrap(), d);
        assert!(SeparatorDistribution::from_text(&g, "sepdist 16 1 1\n1/1 0\n").is_err());
    }
}
