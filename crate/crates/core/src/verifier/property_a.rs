//! Verifier for `(eps', r)`-uniform witnesses encoded by [`ProofLabeling`].
//!
//! Vertex `x` inspects `N = B_{r+1}(x, G)` and runs three checks: colors are
//! distinct at distance `<= r` inside `N`, its own decoded measure sums to
//! `alpha`, and the decoded measures of `x` and each neighbor are within
//! `eps' * alpha` in l1.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::labeling::{ProofLabeling, SchemeParams, VertexLabel};
use crate::measures::{RationalDist, WitnessFunction};
use crate::rational::Rational;

use super::{run_verifier, CheckKind, LabeledBall, LocalVerifier, Verdict};

/// Which table entries the l1 check sums over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum L1Range {
    /// Entry `T2(z)[C1(x)]` counts only if `d(x, z) <= r`, and likewise for
    /// the neighbor. The sum is then exactly the l1 distance of the two
    /// decoded measures.
    #[default]
    BallTruncated,
    /// Sum raw entries over all of `N`. Entries outside the radius-`r` balls
    /// are not part of any decoded measure, so an adversary can use them to
    /// cancel real differences, and an honest distance-`2r` coloring can
    /// leave nonzero entries there that cause spurious rejections.
    Verbatim,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyAVerifier {
    pub r: usize,
    pub alpha: u64,
    pub eps_prime: Rational,
    pub l1_range: L1Range,
}

impl PropertyAVerifier {
    pub fn from_params(params: &SchemeParams) -> Self {
        Self {
            r: params.r,
            alpha: params.alpha,
            eps_prime: params.eps_prime,
            l1_range: L1Range::default(),
        }
    }

    pub fn with_range(mut self, l1_range: L1Range) -> Self {
        self.l1_range = l1_range;
        self
    }
}

fn entry(label: &VertexLabel, color: usize) -> u64 {
    label.table.get(color).copied().unwrap_or(0)
}

impl LocalVerifier for PropertyAVerifier {
    type Label = VertexLabel;

    fn horizon(&self) -> usize {
        self.r + 1
    }

    fn check(&self, ball: &LabeledBall<'_, VertexLabel>) -> Result<(), CheckKind> {
        let r = self.r;
        let len = ball.len();

        for i in 0..len {
            let ci = ball.label(i).color;
            let dist = ball.distances_from(i, r);
            if (i + 1..len).any(|j| dist[j].is_some() && ball.label(j).color == ci) {
                return Err(CheckKind::Properness);
            }
        }

        let cx = ball.label(0).color;
        let mass: u128 = (0..len)
            .filter(|&z| ball.depth(z) <= r)
            .map(|z| entry(ball.label(z), cx) as u128)
            .sum();
        if mass != self.alpha as u128 {
            return Err(CheckKind::Probability);
        }

        // sum / alpha <= num / den, cross-multiplied.
        let num = *self.eps_prime.numer();
        let den = *self.eps_prime.denom();
        if num < 0 {
            return Err(CheckKind::L1);
        }
        let bound = num as u128 * self.alpha as u128;
        for &y in ball.neighbors(0) {
            let cy = ball.label(y).color;
            let dy = ball.distances_from(y, r);
            let mut sum: u128 = 0;
            for z in 0..len {
                let l = ball.label(z);
                let (a, b) = match self.l1_range {
                    L1Range::BallTruncated => (
                        if ball.depth(z) <= r { entry(l, cx) } else { 0 },
                        if dy[z].is_some() { entry(l, cy) } else { 0 },
                    ),
                    L1Range::Verbatim => (entry(l, cx), entry(l, cy)),
                };
                sum += a.abs_diff(b) as u128;
            }
            if sum * den as u128 > bound {
                return Err(CheckKind::L1);
            }
        }
        Ok(())
    }
}

/// Runs the Property-A verifier with the parameters from the labeling
/// header.
pub fn verify_property_a(graph: &BoundedDegreeGraph, labeling: &ProofLabeling) -> Result<Verdict> {
    verify_property_a_with(graph, labeling, L1Range::default())
}

pub fn verify_property_a_with(graph: &BoundedDegreeGraph, labeling: &ProofLabeling, range: L1Range) -> Result<Verdict> {
    labeling.check_structure(graph.n())?;
    let verifier = PropertyAVerifier::from_params(&labeling.params).with_range(range);
    Ok(run_verifier(graph, &labeling.labels, &verifier))
}

/// Reads the witness back from an accepted labeling:
/// `f(x)(z) = T2(z)[T1(x)] / alpha` for `d(x, z) <= r`.
pub fn decode_accepted_witness(graph: &BoundedDegreeGraph, labeling: &ProofLabeling) -> Result<WitnessFunction> {
    if !verify_property_a(graph, labeling)?.accepted() {
        return Err(Error::NotAccepted);
    }
    Ok(decode_witness(graph, labeling))
}

/// Decoding without the acceptance gate. Panics if some decoded measure does
/// not sum to one, which the probability check rules out.
pub(crate) fn decode_witness(graph: &BoundedDegreeGraph, labeling: &ProofLabeling) -> WitnessFunction {
    use rayon::prelude::*;
    let p = &labeling.params;
    let dists = (0..graph.n())
        .into_par_iter()
        .map(|x| {
            let cx = labeling.labels[x].color;
            let entries = graph.bfs_layers(x, p.r).into_iter().map(|(z, _)| (z, entry(&labeling.labels[z], cx)));
            RationalDist::new(p.alpha, entries).expect("accepted labeling decodes to probability measures")
        })
        .collect();
    WitnessFunction::new(p.r, dists)
}

/// A labeled ball detached from its parent graph, for recomputing a
/// decision from serialized data alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OwnedBall {
    pub adjacency: Vec<Vec<usize>>,
    pub labels: Vec<VertexLabel>,
}

impl OwnedBall {
    pub fn from_ball(ball: &LabeledBall<'_, VertexLabel>) -> Self {
        Self {
            adjacency: ball.adjacency().to_vec(),
            labels: (0..ball.len()).map(|i| ball.label(i).clone()).collect(),
        }
    }

    pub fn view(&self) -> LabeledBall<'_, VertexLabel> {
        LabeledBall::new(self.adjacency.clone(), self.labels.iter().collect())
    }

    /// `ball <len>` then `<color> <table...> ; <neighbors...>` per local
    /// vertex, center first.
    pub fn to_text(&self) -> String {
        let mut out = format!("ball {}\n", self.labels.len());
        for (l, nbrs) in self.labels.iter().zip(&self.adjacency) {
            write!(out, "{}", l.color).unwrap();
            for t in &l.table {
                write!(out, " {t}").unwrap();
            }
            out.push_str(" ;");
            for v in nbrs {
                write!(out, " {v}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let len: usize = lines
            .next()
            .and_then(|h| h.strip_prefix("ball "))
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::format(1, "expected `ball <len>`"))?;
        let mut adjacency = Vec::with_capacity(len);
        let mut labels = Vec::with_capacity(len);
        for (i, line) in lines.enumerate().take(len) {
            let bad = || Error::format(i + 2, "bad ball line");
            let (lab, nbrs) = line.split_once(';').ok_or_else(bad)?;
            let nums = |s: &str| s.split_whitespace().map(|t| t.parse::<u64>().map_err(|_| bad())).collect::<Result<Vec<_>>>();
            let lab = nums(lab)?;
            let (&color, table) = lab.split_first().ok_or_else(bad)?;
            labels.push(VertexLabel { color: color as usize, table: table.to_vec() });
            let nbrs: Vec<usize> = nums(nbrs)?.into_iter().map(|v| v as usize).collect();
            if nbrs.iter().any(|&v| v >= len) {
                return Err(bad());
            }
            adjacency.push(nbrs);
        }
        if labels.len() != len {
            return Err(Error::format(1, "ball is truncated"));
        }
        Ok(Self { adjacency, labels })
    }
}
