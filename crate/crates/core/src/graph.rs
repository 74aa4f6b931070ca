//! Immutable bounded-degree graphs, rooted balls and the graph text format.
//!
//! Vertices are dense ids `0..n`. Adjacency lists are kept sorted so every
//! BFS visits neighbors in ascending id order, which makes all derived
//! objects (balls, colorings, projections) deterministic.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A finite simple undirected graph whose degrees never exceed `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedDegreeGraph {
    degree_bound: usize,
    adjacency: Vec<Vec<usize>>,
}

impl BoundedDegreeGraph {
    /// Validates an edge list into a graph on `n` vertices with degree cap `d`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], d: usize) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::NonSimple(format!("loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (v, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::NonSimple(format!("parallel edge at vertex {v}")));
            }
        }
        if let Some(v) = (0..n).find(|&v| adjacency[v].len() > d) {
            return Err(Error::DegreeExceeded(v));
        }
        Ok(Self { degree_bound: d, adjacency })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Vertices within distance `s` of `x` paired with their distance, in
    /// BFS order (ties by ascending id).
    pub fn bfs_layers(&self, x: usize, s: usize) -> Vec<(usize, usize)> {
        let mut dist: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![(x, 0)];
        dist.insert(x, 0);
        let mut head = 0;
        while head < order.len() {
            let (u, du) = order[head];
            head += 1;
            if du == s {
                continue;
            }
            for &w in &self.adjacency[u] {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(du + 1);
                    order.push((w, du + 1));
                }
            }
        }
        order
    }

    /// Distance from `x` to `y`, if it is at most `limit`.
    pub fn distance_within(&self, x: usize, y: usize, limit: usize) -> Option<usize> {
        if x == y {
            return Some(0);
        }
        self.bfs_layers(x, limit).into_iter().find(|&(v, _)| v == y).map(|(_, d)| d)
    }

    /// Full single-source distances; `None` for unreachable vertices.
    pub fn distances(&self, x: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[x] = Some(0);
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The induced subgraph on `{y : d(x, y) <= s}`, rooted at `x`.
    pub fn ball(&self, x: usize, s: usize) -> RootedBall {
        let layers = self.bfs_layers(x, s);
        let local_index: HashMap<usize, usize> =
            layers.iter().enumerate().map(|(i, &(v, _))| (v, i)).collect();
        let adjacency = layers
            .iter()
            .map(|&(v, _)| {
                let mut local: Vec<usize> =
                    self.adjacency[v].iter().filter_map(|w| local_index.get(w).copied()).collect();
                local.sort_unstable();
                local
            })
            .collect();
        RootedBall {
            vertices: layers.iter().map(|&(v, _)| v).collect(),
            depth: layers.iter().map(|&(_, d)| d).collect(),
            adjacency,
            radius_bound: s,
            local_index,
        }
    }

    /// Removes the edges in `removed` (each given in either orientation).
    pub fn remove_edges(&self, removed: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = self.adjacency.clone();
        for &(u, v) in removed {
            if !self.has_edge(u, v) {
                return Err(Error::NonSimple(format!("edge ({u}, {v}) is not in the graph")));
            }
            adjacency[u].retain(|&w| w != v);
            adjacency[v].retain(|&w| w != u);
        }
        Ok(Self { degree_bound: self.degree_bound, adjacency })
    }

    /// Connected components, each sorted, ordered by minimum vertex id.
    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_avoiding(&vec![false; self.n()])
    }

    /// Components of the graph with the `removed` vertices deleted.
    pub fn components_avoiding(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = removed.to_vec();
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Induced subgraph on `vertices` (ascending); local id `i` is
    /// `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> BoundedDegreeGraph {
        let index: HashMap<usize, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adjacency = vertices
            .iter()
            .map(|v| {
                let mut local: Vec<usize> =
                    self.adjacency[*v].iter().filter_map(|w| index.get(w).copied()).collect();
                local.sort_unstable();
                local
            })
            .collect();
        BoundedDegreeGraph { degree_bound: self.degree_bound, adjacency }
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &BoundedDegreeGraph) -> BoundedDegreeGraph {
        let shift = self.n();
        let mut adjacency = self.adjacency.clone();
        adjacency.extend(other.adjacency.iter().map(|l| l.iter().map(|w| w + shift).collect()));
        BoundedDegreeGraph {
            degree_bound: self.degree_bound.max(other.degree_bound),
            adjacency,
        }
    }

    /// The isomorphic copy in which vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> BoundedDegreeGraph {
        let mut adjacency = vec![Vec::new(); self.n()];
        for (v, list) in self.adjacency.iter().enumerate() {
            let mut mapped: Vec<usize> = list.iter().map(|&w| perm[w]).collect();
            mapped.sort_unstable();
            adjacency[perm[v]] = mapped;
        }
        BoundedDegreeGraph { degree_bound: self.degree_bound, adjacency }
    }

    /// Serializes to the line format `graph <n> <m> <d>` + one `u v` per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("graph {} {} {}\n", self.n(), self.edge_count(), self.degree_bound);
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    /// Parses the graph line format, rejecting unsorted, duplicate or
    /// out-of-range edges and count mismatches.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::format(1, "empty graph file"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "graph" {
            return Err(Error::format(1, "expected `graph <n> <m> <d>`"));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::format(1, format!("bad integer {s:?}")));
        let (n, m, d) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines {
            let lineno = idx + 1;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::format(lineno, "expected `<u> <v>`"));
            }
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::format(lineno, format!("bad vertex {s:?}")))
            };
            let (u, v) = (parse(parts[0])?, parse(parts[1])?);
            if u >= v {
                return Err(Error::format(lineno, "edges must be written with u < v"));
            }
            if v >= n {
                return Err(Error::format(lineno, format!("vertex {v} out of range")));
            }
            if let Some(&prev) = edges.last() {
                if (u, v) <= prev {
                    return Err(Error::format(lineno, "edges must be strictly ascending"));
                }
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::format(1, format!("header declares {m} edges, found {}", edges.len())));
        }
        Self::from_edges(n, &edges, d)
    }
}

/// The ball `B_s(x, G)` with local re-indexing. Local vertex `0` is the
/// center and local ids follow BFS order.
#[derive(Clone, Debug)]
pub struct RootedBall {
    vertices: Vec<usize>,
    depth: Vec<usize>,
    adjacency: Vec<Vec<usize>>,
    radius_bound: usize,
    local_index: HashMap<usize, usize>,
}

impl RootedBall {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn center(&self) -> usize {
        self.vertices[0]
    }

    /// Parent-graph ids in BFS order.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Distance from the center, by local id.
    pub fn depths(&self) -> &[usize] {
        &self.depth
    }

    /// Local adjacency (sorted local ids).
    pub fn local_adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn radius_bound(&self) -> usize {
        self.radius_bound
    }

    pub fn actual_radius(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn local_index(&self, parent: usize) -> Option<usize> {
        self.local_index.get(&parent).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// The ball as a standalone graph on local ids.
    pub fn to_graph(&self, degree_bound: usize) -> BoundedDegreeGraph {
        BoundedDegreeGraph { degree_bound, adjacency: self.adjacency.clone() }
    }
}

/// `N^d_r`: the largest possible ball of radius `r` in a graph of maximum
/// degree `d`, attained by the `d`-regular tree.
pub fn max_ball_size_bound(d: usize, r: usize) -> Result<u64> {
    let overflow = || Error::Overflow("N^d_r");
    match d {
        0 => return Ok(1),
        1 => return Ok(if r == 0 { 1 } else { 2 }),
        2 => {
            let r = u64::try_from(r).map_err(|_| overflow())?;
            return r.checked_mul(2).and_then(|x| x.checked_add(1)).ok_or_else(overflow);
        }
        _ => {}
    }
    // 1 + d * sum_{i<r} (d-1)^i
    let branch = (d - 1) as u64;
    let mut layer: u64 = d as u64;
    let mut total: u64 = 1;
    for i in 0..r {
        if i > 0 {
            layer = layer.checked_mul(branch).ok_or_else(overflow)?;
        }
        total = total.checked_add(layer).ok_or_else(overflow)?;
    }
    Ok(total)
}

/// `max_x |B_r(x, G)|`.
pub fn max_ball_size_actual(graph: &BoundedDegreeGraph, r: usize) -> usize {
    use rayon::prelude::*;
    (0..graph.n())
        .into_par_iter()
        .map(|x| graph.bfs_layers(x, r).len())
        .max()
        .unwrap_or(0)
}
