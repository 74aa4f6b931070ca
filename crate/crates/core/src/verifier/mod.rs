//! Distributed decision: every vertex inspects its labeled ball and accepts
//! or rejects; a labeling is accepted iff all vertices accept.
//!
//! Local checks only ever see a [`LabeledBall`], which carries structure
//! and labels in local coordinates (center = `0`) and no parent ids.

use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::graph::BoundedDegreeGraph;

pub mod canonical;
pub mod local_p;
pub mod pipeline;
pub mod planarity;
pub mod property_a;

pub use canonical::{canonical_code, BallCode, BallSetVerifier};
pub use local_p::{verify_locally_p, LocallyPVerifier, Predicate};
pub use pipeline::{pipeline_verify, PipelineVerifier};
pub use planarity::is_planar;
pub use property_a::{decode_accepted_witness, verify_property_a, L1Range, PropertyAVerifier};

/// Which local condition rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckKind {
    Properness,
    Probability,
    L1,
    LocalP,
    /// Ball not in an explicitly enumerated verifier set.
    Membership,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Properness => "properness",
            CheckKind::Probability => "probability",
            CheckKind::L1 => "l1",
            CheckKind::LocalP => "localP",
            CheckKind::Membership => "membership",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Accept,
    Reject(CheckKind),
}

impl Decision {
    pub fn is_accept(self) -> bool {
        self == Decision::Accept
    }
}

impl From<Result<(), CheckKind>> for Decision {
    fn from(r: Result<(), CheckKind>) -> Self {
        match r {
            Ok(()) => Decision::Accept,
            Err(c) => Decision::Reject(c),
        }
    }
}

/// Per-vertex decisions; the graph is accepted iff every vertex accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub decisions: Vec<Decision>,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.decisions.iter().all(|d| d.is_accept())
    }

    pub fn rejecting(&self) -> impl Iterator<Item = (usize, CheckKind)> + '_ {
        self.decisions.iter().enumerate().filter_map(|(x, d)| match d {
            Decision::Reject(c) => Some((x, *c)),
            Decision::Accept => None,
        })
    }

    /// `verdict <accept|reject>` then `reject <x> <check>` per rejecting vertex.
    pub fn to_report(&self) -> String {
        let mut out = format!("verdict {}\n", if self.accepted() { "accept" } else { "reject" });
        for (x, c) in self.rejecting() {
            writeln!(out, "reject {x} {c}").unwrap();
        }
        out
    }
}

/// A labeled rooted ball in local coordinates. Vertex `0` is the center and
/// `depth[i]` is the distance from the center.
#[derive(Debug)]
pub struct LabeledBall<'a, L> {
    adjacency: Vec<Vec<usize>>,
    depth: Vec<usize>,
    labels: Vec<&'a L>,
}

impl<L> Clone for LabeledBall<'_, L> {
    fn clone(&self) -> Self {
        Self { adjacency: self.adjacency.clone(), depth: self.depth.clone(), labels: self.labels.clone() }
    }
}

impl<'a, L> LabeledBall<'a, L> {
    /// `adjacency` must be symmetric and connected with depths measured
    /// from vertex `0`.
    pub fn new(adjacency: Vec<Vec<usize>>, labels: Vec<&'a L>) -> Self {
        assert_eq!(adjacency.len(), labels.len());
        let depth = bfs(&adjacency, 0, usize::MAX)
            .into_iter()
            .map(|d| d.expect("labeled ball must be connected"))
            .collect();
        Self { adjacency, depth, labels }
    }

    /// The labeled ball `B_radius(x, G)` with labels taken from `labels`.
    pub fn around(graph: &BoundedDegreeGraph, labels: &'a [L], x: usize, radius: usize) -> Self {
        let ball = graph.ball(x, radius);
        Self {
            adjacency: ball.local_adjacency().to_vec(),
            depth: ball.depths().to_vec(),
            labels: ball.vertices().iter().map(|&v| &labels[v]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn depth(&self, i: usize) -> usize {
        self.depth[i]
    }

    pub fn label(&self, i: usize) -> &'a L {
        self.labels[i]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn radius(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Distances inside the ball from local vertex `i`, cut off at `limit`.
    pub fn distances_from(&self, i: usize, limit: usize) -> Vec<Option<usize>> {
        bfs(&self.adjacency, i, limit)
    }

    /// Sub-ball of the given radius around the center.
    pub fn restrict(&self, radius: usize) -> LabeledBall<'a, L> {
        if self.radius() <= radius {
            return self.clone();
        }
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.depth[i] <= radius).collect();
        let mut index = vec![usize::MAX; self.len()];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new;
        }
        let adjacency = keep
            .iter()
            .map(|&old| self.adjacency[old].iter().filter_map(|&w| (index[w] != usize::MAX).then_some(index[w])).collect())
            .collect();
        LabeledBall {
            adjacency,
            depth: keep.iter().map(|&i| self.depth[i]).collect(),
            labels: keep.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Same structure, labels projected through `f`.
    pub fn map_labels<M>(&self, f: impl Fn(&'a L) -> &'a M) -> LabeledBall<'a, M> {
        LabeledBall {
            adjacency: self.adjacency.clone(),
            depth: self.depth.clone(),
            labels: self.labels.iter().map(|&l| f(l)).collect(),
        }
    }

    /// The unlabeled ball as a graph on local ids.
    pub fn to_graph(&self) -> BoundedDegreeGraph {
        let edges: Vec<(usize, usize)> = self
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        let d = self.adjacency.iter().map(Vec::len).max().unwrap_or(0).max(2);
        BoundedDegreeGraph::from_edges(self.len(), &edges, d).expect("ball is a simple graph")
    }
}

fn bfs(adjacency: &[Vec<usize>], src: usize, limit: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adjacency.len()];
    dist[src] = Some(0);
    let mut queue = std::collections::VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        if du == limit {
            continue;
        }
        for &w in &adjacency[u] {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// A verifier of local horizon `horizon()`: a set of labeled balls,
/// represented by its membership test.
pub trait LocalVerifier: Sync {
    type Label: Sync;

    fn horizon(&self) -> usize;

    /// Accepts or names the first failed check. The ball has radius at most
    /// `horizon()`.
    fn check(&self, ball: &LabeledBall<'_, Self::Label>) -> Result<(), CheckKind>;
}

/// Runs `verifier` at every vertex of `graph`.
pub fn run_verifier<V: LocalVerifier>(graph: &BoundedDegreeGraph, labels: &[V::Label], verifier: &V) -> Verdict {
    assert_eq!(graph.n(), labels.len(), "one label per vertex");
    let horizon = verifier.horizon();
    let decisions = (0..graph.n())
        .into_par_iter()
        .map(|x| verifier.check(&LabeledBall::around(graph, labels, x, horizon)).into())
        .collect();
    Verdict { decisions }
}

/// Accepts every ball.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrivialVerifier<L> {
    pub horizon: usize,
    _marker: std::marker::PhantomData<fn() -> L>,
}

impl<L> TrivialVerifier<L> {
    pub fn new(horizon: usize) -> Self {
        Self { horizon, _marker: std::marker::PhantomData }
    }
}

impl<L: Sync> LocalVerifier for TrivialVerifier<L> {
    type Label = L;

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn check(&self, _ball: &LabeledBall<'_, L>) -> Result<(), CheckKind> {
        Ok(())
    }
}

/// Product verifier over pair labels: the ball is accepted iff the first
/// verifier accepts the `horizon_1`-sub-ball with first coordinates and
/// the second accepts the `horizon_2`-sub-ball with second coordinates.
/// Horizon is the larger of the two.
pub struct Product<A, B>(pub A, pub B);

impl<A: LocalVerifier, B: LocalVerifier> LocalVerifier for Product<A, B> {
    type Label = (A::Label, B::Label);

    fn horizon(&self) -> usize {
        self.0.horizon().max(self.1.horizon())
    }

    fn check(&self, ball: &LabeledBall<'_, Self::Label>) -> Result<(), CheckKind> {
        let first = ball.restrict(self.0.horizon()).map_labels(|l| &l.0);
        self.0.check(&first)?;
        let second = ball.restrict(self.1.horizon()).map_labels(|l| &l.1);
        self.1.check(&second)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, FamilySpec};

    /// Accepts iff the center's label differs from all neighbours' labels.
    struct ProperColoring;

    impl LocalVerifier for ProperColoring {
        type Label = u8;
        fn horizon(&self) -> usize {
            1
        }
        fn check(&self, ball: &LabeledBall<'_, u8>) -> Result<(), CheckKind> {
            let c = ball.label(0);
            if ball.neighbors(0).iter().any(|&j| ball.label(j) == c) {
                Err(CheckKind::Properness)
            } else {
                Ok(())
            }
        }
    }

    #[test]
    fn run_and_report() {
        let g = generate(&FamilySpec::Path { n: 4 }).unwrap();
        let good = vec![0u8, 1, 0, 1];
        assert!(run_verifier(&g, &good, &ProperColoring).accepted());
        let bad = vec![0u8, 0, 1, 0];
        let v = run_verifier(&g, &bad, &ProperColoring);
        assert_eq!(v.to_report(), "verdict reject\nreject 0 properness\nreject 1 properness\n");
    }

    #[test]
    fn product_with_trivial_is_identity_and_idempotent() {
        let g = generate(&FamilySpec::Cycle { n: 5 }).unwrap();
        for labels in [vec![0u8, 1, 0, 1, 2], vec![0u8, 1, 0, 1, 0]] {
            let base = run_verifier(&g, &labels, &ProperColoring);
            let paired: Vec<(u8, ())> = labels.iter().map(|&l| (l, ())).collect();
            let with_trivial = run_verifier(&g, &paired, &Product(ProperColoring, TrivialVerifier::<()>::new(3)));
            assert_eq!(base, with_trivial);
            let doubled: Vec<(u8, u8)> = labels.iter().map(|&l| (l, l)).collect();
            let twice = run_verifier(&g, &doubled, &Product(ProperColoring, ProperColoring));
            assert_eq!(base, twice);
        }
    }

    #[test]
    fn restrict_reindexes() {
        let g = generate(&FamilySpec::Path { n: 7 }).unwrap();
        let labels: Vec<usize> = (0..7).collect();
        let ball = LabeledBall::around(&g, &labels, 3, 3);
        assert_eq!(ball.len(), 7);
        let small = ball.restrict(1);
        assert_eq!(small.len(), 3);
        let mut seen: Vec<usize> = (0..3).map(|i| *small.label(i)).collect();
        seen.sort_unstable();
        assert_eq!(seen, vec![2, 3, 4]);
        assert_eq!(small.to_graph().edge_count(), 2);
    }
}
