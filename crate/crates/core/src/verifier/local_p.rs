//! Label-free verifier: vertex `x` accepts iff `B_K(x, G)` has the property.

use std::marker::PhantomData;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::Error;
use crate::graph::BoundedDegreeGraph;

use super::{is_planar, CheckKind, LabeledBall, LocalVerifier, Verdict};

/// Shipped graph predicates. All are monotone (closed under subgraphs).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Predicate {
    #[default]
    Planar,
    /// Forests.
    Acyclic,
    AlwaysTrue,
}

impl Predicate {
    pub fn holds(self, graph: &BoundedDegreeGraph) -> bool {
        match self {
            Predicate::Planar => is_planar(graph),
            Predicate::Acyclic => graph.edge_count() + graph.components().len() == graph.n(),
            Predicate::AlwaysTrue => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Planar => "planar",
            Predicate::Acyclic => "acyclic",
            Predicate::AlwaysTrue => "true",
        }
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "planar" | "planarity" => Ok(Predicate::Planar),
            "acyclic" | "forest" => Ok(Predicate::Acyclic),
            "true" | "always-true" | "trivial" => Ok(Predicate::AlwaysTrue),
            other => Err(Error::Usage(format!("unknown predicate {other:?}"))),
        }
    }
}

/// Locally-P verifier of horizon `k`; ignores labels of type `L`.
#[derive(Clone, Copy, Debug)]
pub struct LocallyPVerifier<L = ()> {
    pub k: usize,
    pub predicate: Predicate,
    _labels: PhantomData<fn() -> L>,
}

impl<L> LocallyPVerifier<L> {
    pub fn new(k: usize, predicate: Predicate) -> Self {
        Self { k, predicate, _labels: PhantomData }
    }
}

impl<L: Sync> LocalVerifier for LocallyPVerifier<L> {
    type Label = L;

    fn horizon(&self) -> usize {
        self.k
    }

    fn check(&self, ball: &LabeledBall<'_, L>) -> Result<(), CheckKind> {
        if self.predicate.holds(&ball.to_graph()) {
            Ok(())
        } else {
            Err(CheckKind::LocalP)
        }
    }
}

/// Same decisions as running [`LocallyPVerifier`] at every vertex. A ball
/// that covers its whole component is decided once per component.
pub fn verify_locally_p(graph: &BoundedDegreeGraph, k: usize, predicate: Predicate) -> Verdict {
    let comps = graph.components();
    let mut comp_of = vec![0; graph.n()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let whole: Vec<std::sync::OnceLock<bool>> = comps.iter().map(|_| std::sync::OnceLock::new()).collect();
    let decisions = (0..graph.n())
        .into_par_iter()
        .map(|x| {
            let ball = graph.ball(x, k);
            let c = comp_of[x];
            let ok = if ball.len() == comps[c].len() {
                *whole[c].get_or_init(|| predicate.holds(&graph.induced_subgraph(&comps[c])))
            } else {
                predicate.holds(&ball.to_graph(graph.degree_bound()))
            };
            if ok {
                super::Decision::Accept
            } else {
                super::Decision::Reject(CheckKind::LocalP)
            }
        })
        .collect();
    Verdict { decisions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, generate, FamilySpec};
    use crate::verifier::run_verifier;

    #[test]
    fn grid_is_locally_planar() {
        let g = generate(&FamilySpec::Grid { rows: 6, cols: 6 }).unwrap();
        assert!(verify_locally_p(&g, 3, Predicate::Planar).accepted());
    }

    #[test]
    fn k5_component_rejects_exactly() {
        let g = generate(&FamilySpec::Grid { rows: 5, cols: 5 }).unwrap().disjoint_union(&complete_graph(5));
        let v = verify_locally_p(&g, 2, Predicate::Planar);
        let rejecting: Vec<usize> = v.rejecting().map(|(x, _)| x).collect();
        assert_eq!(rejecting, (25..30).collect::<Vec<_>>());
        let labels = vec![(); g.n()];
        assert_eq!(run_verifier(&g, &labels, &LocallyPVerifier::<()>::new(2, Predicate::Planar)), v);
    }

    #[test]
    fn radius_zero_sees_a_point() {
        let g = complete_graph(6);
        for p in [Predicate::Planar, Predicate::Acyclic, Predicate::AlwaysTrue] {
            assert!(verify_locally_p(&g, 0, p).accepted());
        }
    }

    #[test]
    fn acyclic_predicate() {
        let tree = generate(&FamilySpec::FullTree { branching: 2, depth: 4 }).unwrap();
        assert!(verify_locally_p(&tree, 3, Predicate::Acyclic).accepted());
        let cycle = generate(&FamilySpec::Cycle { n: 8 }).unwrap();
        assert!(verify_locally_p(&cycle, 3, Predicate::Acyclic).accepted());
        assert!(!verify_locally_p(&cycle, 4, Predicate::Acyclic).accepted());
        assert_eq!("forest".parse::<Predicate>().unwrap(), Predicate::Acyclic);
        assert!("nope".parse::<Predicate>().is_err());
    }
}
