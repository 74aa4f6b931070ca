//! Combined verifier for approximate planarity: Property-A checks at
//! radius `r + 1` and the locally-P check at radius `K`, both read from the
//! labeling header.

use crate::error::{Error, Result};
use crate::graph::BoundedDegreeGraph;
use crate::labeling::{ProofLabeling, VertexLabel};
use crate::rational::{format_rational, Rational};

use super::{
    verify_locally_p, CheckKind, Decision, LabeledBall, LocalVerifier, LocallyPVerifier, Predicate,
    PropertyAVerifier, Verdict,
};

/// The product of the Property-A verifier and the locally-P verifier with
/// both coordinates taken from the same label.
#[derive(Clone, Debug)]
pub struct PipelineVerifier {
    pub property_a: PropertyAVerifier,
    pub local: LocallyPVerifier<VertexLabel>,
}

impl PipelineVerifier {
    pub fn from_labeling(labeling: &ProofLabeling, predicate: Predicate) -> Result<Self> {
        let k = labeling
            .params
            .locality
            .ok_or_else(|| Error::MalformedLabeling("labeling header carries no locality K".into()))?;
        Ok(Self {
            property_a: PropertyAVerifier::from_params(&labeling.params),
            local: LocallyPVerifier::new(k, predicate),
        })
    }
}

impl LocalVerifier for PipelineVerifier {
    type Label = VertexLabel;

    fn horizon(&self) -> usize {
        self.property_a.horizon().max(self.local.horizon())
    }

    fn check(&self, ball: &LabeledBall<'_, VertexLabel>) -> Result<(), CheckKind> {
        self.property_a.check(&ball.restrict(self.property_a.horizon()))?;
        self.local.check(&ball.restrict(self.local.horizon()))
    }
}

/// `d^2 eps' / 2`: the per-vertex edge-removal fraction an accepting
/// pipeline certifies.
pub fn certified_edit_fraction(d: usize, eps_prime: &Rational) -> Rational {
    Rational::from_integer((d * d) as i128) * eps_prime / 2
}

/// Runs the pipeline verifier at every vertex. When `eps` is given the
/// header must certify an edit fraction of at most `eps`.
///
/// Evaluates the two factors separately (the locally-P side shares work
/// across vertices whose ball is their whole component); decisions equal
/// those of [`PipelineVerifier`].
pub fn pipeline_verify(
    graph: &BoundedDegreeGraph,
    labeling: &ProofLabeling,
    eps: Option<&Rational>,
    predicate: Predicate,
) -> Result<Verdict> {
    labeling.check_structure(graph.n())?;
    let verifier = PipelineVerifier::from_labeling(labeling, predicate)?;
    if let Some(eps) = eps {
        let certified = certified_edit_fraction(graph.degree_bound(), &labeling.params.eps_prime);
        if certified > *eps {
            return Err(Error::MalformedLabeling(format!(
                "header certifies edit fraction {}, above the requested {}",
                format_rational(&certified),
                format_rational(eps)
            )));
        }
    }
    let a = super::run_verifier(graph, &labeling.labels, &verifier.property_a);
    let p = verify_locally_p(graph, verifier.local.k, predicate);
    let decisions = a
        .decisions
        .into_iter()
        .zip(p.decisions)
        .map(|(a, p)| if a.is_accept() { p } else { a })
        .collect::<Vec<Decision>>();
    Ok(Verdict { decisions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, generate, FamilySpec};
    use crate::graph::max_ball_size_actual;
    use crate::labeling::{build_proof, distance_coloring};
    use crate::measures::{check_uniformity, discretize_witness, required_alpha, uniform_ball_witness};
    use crate::verifier::run_verifier;

    fn honest(graph: &BoundedDegreeGraph, r: usize, k: usize, eps_prime: Rational, alpha: Option<u64>) -> ProofLabeling {
        let w = uniform_ball_witness(graph, r);
        let eps = check_uniformity(graph, &w).max_edge_l1;
        let alpha = alpha.unwrap_or_else(|| required_alpha(max_ball_size_actual(graph, r), &eps, &eps_prime).unwrap());
        let g = discretize_witness(graph, &w, &eps, &eps_prime, alpha).unwrap();
        build_proof(graph, &g, &distance_coloring(graph, 2 * r), alpha, eps_prime, Some(k)).unwrap()
    }

    #[test]
    fn fast_path_matches_product_verifier() {
        let grid = generate(&FamilySpec::Grid { rows: 4, cols: 5 }).unwrap();
        let g = grid.disjoint_union(&complete_graph(5));
        let mut labeling = honest(&g, 3, 2, Rational::new(3, 4), None);
        let c = labeling.labels[3].color;
        labeling.labels[4].table[c] += 1;
        let fast = pipeline_verify(&g, &labeling, None, Predicate::Planar).unwrap();
        let slow = run_verifier(&g, &labeling.labels, &PipelineVerifier::from_labeling(&labeling, Predicate::Planar).unwrap());
        assert_eq!(fast, slow);
        assert!(fast.rejecting().any(|(_, c)| c == CheckKind::LocalP));
        assert!(fast.rejecting().any(|(_, c)| c == CheckKind::Probability));
    }

    #[test]
    fn header_requirements() {
        let g = generate(&FamilySpec::Path { n: 30 }).unwrap();
        let mut labeling = honest(&g, 3, 4, Rational::new(1, 2), None);
        assert!(pipeline_verify(&g, &labeling, None, Predicate::Planar).unwrap().accepted());
        // d = 2, eps' = 1/2: certified fraction 1.
        assert!(pipeline_verify(&g, &labeling, Some(&Rational::from_integer(1)), Predicate::Planar).is_ok());
        assert!(pipeline_verify(&g, &labeling, Some(&Rational::new(1, 2)), Predicate::Planar).is_err());
        labeling.params.locality = None;
        assert!(matches!(pipeline_verify(&g, &labeling, None, Predicate::Planar), Err(Error::MalformedLabeling(_))));
    }

    #[test]
    fn disjoint_unions_of_accepted_instances_accept() {
        let a = generate(&FamilySpec::Path { n: 25 }).unwrap();
        let b = generate(&FamilySpec::Cycle { n: 20 }).unwrap();
        let eps_prime = Rational::new(1, 2);
        let alpha = 210;
        let la = honest(&a, 3, 3, eps_prime, Some(alpha));
        let lb = honest(&b, 3, 3, eps_prime, Some(alpha));
        assert!(pipeline_verify(&a, &la, None, Predicate::Planar).unwrap().accepted());
        assert!(pipeline_verify(&b, &lb, None, Predicate::Planar).unwrap().accepted());
        let palette = la.params.palette.max(lb.params.palette);
        let labels = la
            .labels
            .iter()
            .chain(&lb.labels)
            .map(|v| {
                let mut table = v.table.clone();
                table.resize(palette, 0);
                VertexLabel { color: v.color, table }
            })
            .collect();
        let params = crate::labeling::SchemeParams { palette, ..la.params.clone() };
        let joint = ProofLabeling { params, labels };
        let g = a.disjoint_union(&b);
        let verdict = pipeline_verify(&g, &joint, None, Predicate::Planar).unwrap();
        assert!(verdict.accepted());
        let mut expected = pipeline_verify(&a, &la, None, Predicate::Planar).unwrap().decisions;
        expected.extend(pipeline_verify(&b, &lb, None, Predicate::Planar).unwrap().decisions);
        assert_eq!(verdict.decisions, expected);
    }
}
