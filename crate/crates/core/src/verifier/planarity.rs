//! Left-right planarity test (de Fraysseix–Rosenstiehl, in the formulation
//! of Brandes). Decision only; no embedding is built.
//!
//! Both DFS passes are iterative so deep balls cannot overflow the stack.

use crate::graph::BoundedDegreeGraph;

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Interval {
    low: usize,
    high: usize,
}

impl Interval {
    const EMPTY: Interval = Interval { low: NONE, high: NONE };

    fn is_empty(&self) -> bool {
        self.low == NONE && self.high == NONE
    }
}

#[derive(Clone, Copy, Debug)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct Lr<'a> {
    g: &'a BoundedDegreeGraph,
    /// Oriented edges: `src[e] -> dst[e]`.
    src: Vec<usize>,
    dst: Vec<usize>,
    height: Vec<usize>,
    parent_edge: Vec<usize>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting_depth: Vec<usize>,
    /// Outgoing oriented edges per vertex, sorted by nesting depth.
    out: Vec<Vec<usize>>,
    lowpt_edge: Vec<usize>,
    reference: Vec<usize>,
    stack_bottom: Vec<usize>,
    stack: Vec<ConflictPair>,
}

/// Exact planarity decision.
pub fn is_planar(graph: &BoundedDegreeGraph) -> bool {
    let n = graph.n();
    let m = graph.edge_count();
    if n > 2 && m > 3 * n - 6 {
        return false;
    }
    let mut lr = Lr::new(graph);
    let roots = lr.orient();
    for e in 0..lr.src.len() {
        let v = lr.src[e];
        lr.out[v].push(e);
    }
    for list in &mut lr.out {
        list.sort_by_key(|&e| lr.nesting_depth[e]);
    }
    roots.into_iter().all(|root| lr.test(root))
}

impl<'a> Lr<'a> {
    fn new(g: &'a BoundedDegreeGraph) -> Self {
        let n = g.n();
        let m = g.edge_count();
        Self {
            g,
            src: Vec::with_capacity(m),
            dst: Vec::with_capacity(m),
            height: vec![NONE; n],
            parent_edge: vec![NONE; n],
            lowpt: Vec::with_capacity(m),
            lowpt2: Vec::with_capacity(m),
            nesting_depth: Vec::with_capacity(m),
            out: vec![Vec::new(); n],
            lowpt_edge: vec![NONE; m],
            reference: vec![NONE; m],
            stack_bottom: vec![0; m],
            stack: Vec::new(),
        }
    }

    /// First DFS: orients every edge away from the root (tree edges) or
    /// towards an ancestor (back edges) and computes lowpoints.
    fn orient(&mut self) -> Vec<usize> {
        let g = self.g;
        let n = g.n();
        // Undirected edge already oriented, keyed by (min, max) via the
        // position in the sorted adjacency of the smaller endpoint.
        let mut oriented: Vec<Vec<bool>> = (0..n).map(|v| vec![false; g.degree(v)]).collect();
        let slot = |u: usize, v: usize| {
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            (a, g.neighbors(a).binary_search(&b).unwrap())
        };
        let mut roots = Vec::new();
        for root in 0..n {
            if self.height[root] != NONE {
                continue;
            }
            self.height[root] = 0;
            roots.push(root);
            // (vertex, next neighbor index, tree edge awaiting its return)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, 0, NONE)];
            while let Some(frame) = stack.last_mut() {
                let v = frame.0;
                if frame.2 != NONE {
                    let e = std::mem::replace(&mut frame.2, NONE);
                    self.finish_edge(e, v);
                }
                if frame.1 == g.degree(v) {
                    stack.pop();
                    continue;
                }
                let w = g.neighbors(v)[frame.1];
                frame.1 += 1;
                let (a, k) = slot(v, w);
                if oriented[a][k] {
                    continue;
                }
                oriented[a][k] = true;
                let e = self.src.len();
                self.src.push(v);
                self.dst.push(w);
                self.lowpt.push(self.height[v]);
                self.lowpt2.push(self.height[v]);
                self.nesting_depth.push(0);
                if self.height[w] == NONE {
                    frame.2 = e;
                    self.parent_edge[w] = e;
                    self.height[w] = self.height[v] + 1;
                    stack.push((w, 0, NONE));
                } else {
                    self.lowpt[e] = self.height[w];
                    self.finish_edge(e, v);
                }
            }
        }
        roots
    }

    /// Nesting depth of `e = (v, w)` and lowpoint update of `v`'s parent edge.
    fn finish_edge(&mut self, e: usize, v: usize) {
        self.nesting_depth[e] = 2 * self.lowpt[e] + usize::from(self.lowpt2[e] < self.height[v]);
        let pe = self.parent_edge[v];
        if pe == NONE {
            return;
        }
        if self.lowpt[e] < self.lowpt[pe] {
            self.lowpt2[pe] = self.lowpt[pe].min(self.lowpt2[e]);
            self.lowpt[pe] = self.lowpt[e];
        } else if self.lowpt[e] > self.lowpt[pe] {
            self.lowpt2[pe] = self.lowpt2[pe].min(self.lowpt[e]);
        } else {
            self.lowpt2[pe] = self.lowpt2[pe].min(self.lowpt2[e]);
        }
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        if p.left.is_empty() {
            self.lowpt[p.right.low]
        } else if p.right.is_empty() {
            self.lowpt[p.left.low]
        } else {
            self.lowpt[p.left.low].min(self.lowpt[p.right.low])
        }
    }

    fn conflicting(&self, i: &Interval, b: usize) -> bool {
        !i.is_empty() && self.lowpt[i.high] > self.lowpt[b]
    }

    /// Second DFS over the oriented graph, maintaining the conflict-pair
    /// stack. Returns `false` on the first unresolvable conflict.
    fn test(&mut self, root: usize) -> bool {
        // (vertex, index into out[vertex], child edge awaiting integration)
        let mut frames: Vec<(usize, usize, bool)> = vec![(root, 0, false)];
        while let Some(&mut (v, ref mut i, ref mut returning)) = frames.last_mut() {
            let e = self.parent_edge[v];
            if *returning {
                *returning = false;
                let k = *i - 1;
                if !self.integrate(v, k, e) {
                    return false;
                }
                continue;
            }
            if *i == self.out[v].len() {
                frames.pop();
                if e != NONE {
                    self.remove_back_edges(e);
                }
                continue;
            }
            let k = *i;
            *i += 1;
            let ei = self.out[v][k];
            self.stack_bottom[ei] = self.stack.len();
            let w = self.dst[ei];
            if self.parent_edge[w] == ei {
                frames.last_mut().unwrap().2 = true;
                frames.push((w, 0, false));
            } else {
                self.lowpt_edge[ei] = ei;
                self.stack.push(ConflictPair { left: Interval::EMPTY, right: Interval { low: ei, high: ei } });
                if !self.integrate(v, k, e) {
                    return false;
                }
            }
        }
        true
    }

    /// Integrates the return edges of the `k`-th outgoing edge of `v`.
    fn integrate(&mut self, v: usize, k: usize, e: usize) -> bool {
        let ei = self.out[v][k];
        if self.lowpt[ei] < self.height[v] {
            if k == 0 {
                self.lowpt_edge[e] = self.lowpt_edge[ei];
            } else if !self.add_constraints(ei, e) {
                return false;
            }
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p = ConflictPair { left: Interval::EMPTY, right: Interval::EMPTY };
        loop {
            let mut q = self.stack.pop().expect("return edges of ei are on the stack");
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            if self.lowpt[q.right.low] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else {
                    self.reference[p.right.low] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.reference[q.right.low] = self.lowpt_edge[e];
            }
            if self.stack.len() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if p.right.low != NONE {
                self.reference[p.right.low] = q.right.high;
            }
            if q.right.low != NONE {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else {
                self.reference[p.left.low] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.src[e];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            self.stack.pop();
        }
        if let Some(mut p) = self.stack.pop() {
            while p.left.high != NONE && self.dst[p.left.high] == u {
                p.left.high = self.reference[p.left.high];
            }
            if p.left.high == NONE && p.left.low != NONE {
                self.reference[p.left.low] = p.right.low;
                p.left.low = NONE;
            }
            while p.right.high != NONE && self.dst[p.right.high] == u {
                p.right.high = self.reference[p.right.high];
            }
            if p.right.high == NONE && p.right.low != NONE {
                self.reference[p.right.low] = p.left.low;
                p.right.low = NONE;
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < self.height[u] {
            let top = self.stack.last().expect("e has a return edge");
            let (hl, hr) = (top.left.high, top.right.high);
            self.reference[e] = if hl != NONE && (hr == NONE || self.lowpt[hl] > self.lowpt[hr]) { hl } else { hr };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_bipartite, complete_graph, generate, petersen, wheel, FamilySpec};
    use proptest::prelude::*;

    /// Planar iff some rotation system has Euler characteristic 2 on every
    /// component. Tries all rotation systems.
    fn planar_by_rotations(g: &BoundedDegreeGraph) -> bool {
        let n = g.n();
        let comps = g.components();
        let isolated = (0..n).filter(|&v| g.degree(v) == 0).count();
        let mut rotations: Vec<Vec<Vec<usize>>> = Vec::new();
        for v in 0..n {
            let nb = g.neighbors(v);
            if nb.len() <= 2 {
                rotations.push(vec![nb.to_vec()]);
                continue;
            }
            let mut all = Vec::new();
            let mut rest: Vec<usize> = nb[1..].to_vec();
            permute(&mut rest, 0, &mut |p| {
                let mut r = vec![nb[0]];
                r.extend_from_slice(p);
                all.push(r);
            });
            rotations.push(all);
        }
        let mut choice = vec![0usize; n];
        loop {
            let faces = count_faces(g, &rotations, &choice) + isolated;
            if n + faces == g.edge_count() + 2 * comps.len() {
                return true;
            }
            let mut v = 0;
            loop {
                if v == n {
                    return false;
                }
                choice[v] += 1;
                if choice[v] < rotations[v].len() {
                    break;
                }
                choice[v] = 0;
                v += 1;
            }
        }
    }

    fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, visit);
            items.swap(k, i);
        }
    }

    fn count_faces(g: &BoundedDegreeGraph, rotations: &[Vec<Vec<usize>>], choice: &[usize]) -> usize {
        let rot = |v: usize| &rotations[v][choice[v]];
        let mut seen = std::collections::HashSet::new();
        let mut faces = 0;
        for (u, v) in g.edges().flat_map(|(u, v)| [(u, v), (v, u)]) {
            if seen.contains(&(u, v)) {
                continue;
            }
            faces += 1;
            let (mut a, mut b) = (u, v);
            while seen.insert((a, b)) {
                let r = rot(b);
                let pos = r.iter().position(|&x| x == a).unwrap();
                let c = r[(pos + 1) % r.len()];
                (a, b) = (b, c);
            }
        }
        faces
    }

    fn rotation_count(g: &BoundedDegreeGraph) -> u64 {
        (0..g.n()).map(|v| (1..g.degree(v).max(1) as u64).product::<u64>()).product()
    }

    #[test]
    fn kuratowski_graphs_and_petersen() {
        assert!(!is_planar(&complete_graph(5)));
        assert!(!is_planar(&complete_bipartite(3, 3)));
        assert!(!is_planar(&petersen()));
        assert!(is_planar(&complete_graph(4)));
        assert!(is_planar(&complete_bipartite(2, 5)));
        assert!(!planar_by_rotations(&complete_bipartite(3, 3)));
        assert!(!planar_by_rotations(&petersen()));
        assert!(planar_by_rotations(&complete_graph(4)));
    }

    #[test]
    fn planar_families() {
        for spec in [
            FamilySpec::Grid { rows: 12, cols: 17 },
            FamilySpec::Path { n: 300 },
            FamilySpec::Cycle { n: 77 },
            FamilySpec::FullTree { branching: 3, depth: 5 },
        ] {
            assert!(is_planar(&generate(&spec).unwrap()), "{spec:?}");
        }
        for n in 3..12 {
            assert!(is_planar(&wheel(n)));
        }
        assert!(is_planar(&BoundedDegreeGraph::from_edges(0, &[], 2).unwrap()));
    }

    #[test]
    fn subdivisions_and_unions() {
        // K5 with every edge subdivided once.
        let mut edges = Vec::new();
        let mut next = 5;
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push((u, next));
                edges.push((v, next));
                next += 1;
            }
        }
        let sub = BoundedDegreeGraph::from_edges(next, &edges, 4).unwrap();
        assert!(!is_planar(&sub));
        let grid = generate(&FamilySpec::Grid { rows: 5, cols: 5 }).unwrap();
        assert!(!is_planar(&grid.disjoint_union(&complete_graph(5))));
        assert!(is_planar(&grid.disjoint_union(&complete_graph(4))));
    }

    #[test]
    fn deep_paths_do_not_overflow() {
        let g = generate(&FamilySpec::Cycle { n: 200_000 }).unwrap();
        assert!(is_planar(&g));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn agrees_with_rotation_systems(n in 1usize..8, bits in any::<u64>(), density in 1u64..4) {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    let h = bits.rotate_left(k as u32).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 60;
                    if h % 4 < density {
                        edges.push((u, v));
                    }
                    k += 7;
                }
            }
            let g = BoundedDegreeGraph::from_edges(n, &edges, n.max(2)).unwrap();
            prop_assume!(rotation_count(&g) <= 60_000);
            prop_assert_eq!(is_planar(&g), planar_by_rotations(&g));
        }

        #[test]
        fn invariant_under_relabeling(n in 5usize..9, bits in any::<u64>(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if (bits >> (k % 64)) & 1 == 1 {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            let g = BoundedDegreeGraph::from_edges(n, &edges, n).unwrap();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(is_planar(&g), is_planar(&g.relabel(&perm)));
        }
    }
}
