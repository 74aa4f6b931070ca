//! Verifiers given extensionally, as a finite set of accepted labeled balls
//! up to isomorphism fixing the center.

use std::collections::BTreeSet;

use super::{CheckKind, LabeledBall, LocalVerifier};

/// Isomorphism invariant of a small labeled rooted ball: the
/// lexicographically least `(depths, labels, adjacency matrix)` over all
/// orderings of the non-center vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BallCode<L> {
    depths: Vec<usize>,
    labels: Vec<L>,
    adjacency: Vec<bool>,
}

/// Largest ball handled; the search is factorial in the ball size.
pub const MAX_CANONICAL_BALL: usize = 9;

pub fn canonical_code<L: Ord + Clone>(ball: &LabeledBall<'_, L>) -> BallCode<L> {
    let n = ball.len();
    assert!(n <= MAX_CANONICAL_BALL, "ball too large for exhaustive canonical form");
    let mut order: Vec<usize> = (0..n).collect();
    let mut best: Option<BallCode<L>> = None;
    permute_tail(&mut order, 1, &mut |order| {
        let code = BallCode {
            depths: order.iter().map(|&i| ball.depth(i)).collect(),
            labels: order.iter().map(|&i| ball.label(i).clone()).collect(),
            adjacency: order
                .iter()
                .flat_map(|&i| order.iter().map(move |&j| ball.neighbors(i).contains(&j)))
                .collect(),
        };
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    });
    best.expect("ball has a center")
}

fn permute_tail(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k >= items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_tail(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Accepts exactly the balls whose canonical code is in `accepted`.
#[derive(Clone, Debug)]
pub struct BallSetVerifier<L> {
    pub horizon: usize,
    pub accepted: BTreeSet<BallCode<L>>,
}

impl<L: Ord + Clone + Sync + Send> LocalVerifier for BallSetVerifier<L> {
    type Label = L;

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn check(&self, ball: &LabeledBall<'_, L>) -> Result<(), CheckKind> {
        if self.accepted.contains(&canonical_code(ball)) {
            Ok(())
        } else {
            Err(CheckKind::Membership)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, FamilySpec};

    #[test]
    fn codes_are_isomorphism_invariant() {
        let g = generate(&FamilySpec::Cycle { n: 6 }).unwrap();
        let labels = vec![0u8, 1, 0, 1, 0, 1];
        let a = canonical_code(&LabeledBall::around(&g, &labels, 0, 1));
        let b = canonical_code(&LabeledBall::around(&g, &labels, 2, 1));
        let c = canonical_code(&LabeledBall::around(&g, &labels, 1, 1));
        assert_eq!(a, b);
        assert_ne!(a, c);
        let h = g.relabel(&[3, 5, 1, 0, 2, 4]);
        let mut moved = vec![0u8; 6];
        for v in 0..6 {
            moved[[3, 5, 1, 0, 2, 4][v]] = labels[v];
        }
        assert_eq!(a, canonical_code(&LabeledBall::around(&h, &moved, 3, 1)));
    }
}
