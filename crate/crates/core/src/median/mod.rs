//! Halfspaces of finite median graphs, ℋ-segments, staircases and median
//! quasimorphisms, plus the halfspace structure of free-group Cayley trees.

mod catalog;
mod quasimorphism;
mod staircase;
mod tree;

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use smallvec::SmallVec;
use thiserror::Error;

use crate::graph::{FiniteGraph, GraphError};

pub use catalog::*;
pub use quasimorphism::*;
pub use staircase::*;
pub use tree::*;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MedianError {
    #[error("not a median graph: ({0}, {1}, {2}) has no unique median")]
    NotMedian(String, String, String),
    #[error("not connected")]
    Disconnected,
    #[error("generator {generator} does not map halfspaces to halfspaces")]
    NotAutomorphism { generator: String },
    #[error("orbit enumeration exceeded {0} segments")]
    Budget(usize),
    #[error("unknown complex {0:?}")]
    UnknownComplex(String),
    #[error("{0} is not an ℋ-segment")]
    NotSegment(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Halfspace ids of a [`MedianComplex`]; `h ^ 1` is the complement of `h`.
pub type HalfspaceId = usize;

/// A chain `(h₁ ⊃ ⋯ ⊃ h_ℓ)` of halfspace ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HSegment(pub SmallVec<[HalfspaceId; 8]>);

impl HSegment {
    pub fn new(ids: &[HalfspaceId]) -> Self {
        HSegment(ids.iter().copied().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ids(&self) -> &[HalfspaceId] {
        &self.0
    }

    /// `s̄ = (h̄_ℓ ⊃ ⋯ ⊃ h̄₁)`.
    pub fn reverse(&self) -> HSegment {
        HSegment(self.0.iter().rev().map(|h| h ^ 1).collect())
    }
}

/// A finite median graph with its halfspaces.
///
/// Halfspaces come from gate maps: the edge `(α, ω)` gives the halfspace
/// `{x : D(x, ω) < D(x, α)}`. Edges with equal gate partitions share a
/// hyperplane. Hyperplane `k` owns halfspaces `2k` (the side of the larger
/// endpoint of its first edge) and `2k + 1`.
#[derive(Clone, Debug)]
pub struct MedianComplex {
    graph: Arc<FiniteGraph>,
    halfspaces: Vec<FixedBitSet>,
    dual_edges: Vec<Vec<(usize, usize)>>,
    edge_halfspace: HashMap<(usize, usize), HalfspaceId>,
    /// `below[h]` holds every `k ⊊ h`.
    below: Vec<FixedBitSet>,
    tight: Vec<Vec<HalfspaceId>>,
}

impl MedianComplex {
    pub fn new(graph: Arc<FiniteGraph>) -> Result<Self, MedianError> {
        if !graph.is_connected() {
            return Err(MedianError::Disconnected);
        }
        if let Some((a, b, c)) = graph.median_violation() {
            let name = |v: usize| graph.name(v).to_string();
            return Err(MedianError::NotMedian(name(a), name(b), name(c)));
        }
        let n = graph.vertex_count();
        let mut halfspaces: Vec<FixedBitSet> = Vec::new();
        let mut dual_edges: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut index: HashMap<FixedBitSet, HalfspaceId> = HashMap::new();
        let mut edge_halfspace = HashMap::new();
        for (u, v) in graph.edges() {
            let mut side = FixedBitSet::with_capacity(n);
            for x in 0..n {
                if graph.distance(x, v) < graph.distance(x, u) {
                    side.insert(x);
                }
            }
            let h = match index.get(&side) {
                Some(&h) => h,
                None => {
                    let h = halfspaces.len();
                    let mut other = side.clone();
                    other.toggle_range(..);
                    index.insert(side.clone(), h);
                    index.insert(other.clone(), h + 1);
                    halfspaces.push(side);
                    halfspaces.push(other);
                    dual_edges.push(Vec::new());
                    h
                }
            };
            dual_edges[h / 2].push((u, v));
            edge_halfspace.insert((u, v), h);
            edge_halfspace.insert((v, u), h ^ 1);
        }
        let count = halfspaces.len();
        let below: Vec<FixedBitSet> = halfspaces
            .iter()
            .map(|h| {
                let mut set = FixedBitSet::with_capacity(count);
                for (k, other) in halfspaces.iter().enumerate() {
                    if other != h && other.is_subset(h) {
                        set.insert(k);
                    }
                }
                set
            })
            .collect();
        let tight = (0..count)
            .map(|h| {
                below[h]
                    .ones()
                    .filter(|&k| !below[h].ones().any(|m| below[m].contains(k)))
                    .collect()
            })
            .collect();
        Ok(MedianComplex {
            graph,
            halfspaces,
            dual_edges,
            edge_halfspace,
            below,
            tight,
        })
    }

    pub fn graph(&self) -> &Arc<FiniteGraph> {
        &self.graph
    }

    pub fn hyperplane_count(&self) -> usize {
        self.dual_edges.len()
    }

    pub fn halfspace_count(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn halfspace(&self, h: HalfspaceId) -> &FixedBitSet {
        &self.halfspaces[h]
    }

    /// Looks up a vertex set among the halfspaces.
    pub fn find_halfspace(&self, set: &FixedBitSet) -> Option<HalfspaceId> {
        self.halfspaces.iter().position(|h| h == set)
    }

    pub fn complement(h: HalfspaceId) -> HalfspaceId {
        h ^ 1
    }

    pub fn contains(&self, h: HalfspaceId, v: usize) -> bool {
        self.halfspaces[h].contains(v)
    }

    /// Edges dual to the hyperplane of `h`, each oriented into `h`.
    pub fn dual_edges(&self, h: HalfspaceId) -> Vec<(usize, usize)> {
        self.dual_edges[h / 2]
            .iter()
            .map(|&(u, v)| if self.contains(h, v) { (u, v) } else { (v, u) })
            .collect()
    }

    /// The halfspace dual to the edge that contains its tail `omega`.
    pub fn halfspace_of_edge(&self, alpha: usize, omega: usize) -> HalfspaceId {
        self.edge_halfspace[&(alpha, omega)]
    }

    /// A readable name: the first dual edge oriented into the halfspace.
    pub fn label(&self, h: HalfspaceId) -> String {
        let (u, v) = self.dual_edges(h)[0];
        format!("{}→{}", self.graph.name(u), self.graph.name(v))
    }

    pub fn segment_label(&self, s: &HSegment) -> String {
        let parts: Vec<String> = s.ids().iter().map(|&h| self.label(h)).collect();
        format!("({})", parts.join(" ⊃ "))
    }

    /// `[x, y]_ℋ`: halfspaces containing `y` but not `x`, in id order.
    pub fn interval_halfspaces(&self, x: usize, y: usize) -> Vec<HalfspaceId> {
        (0..self.halfspace_count())
            .filter(|&h| self.contains(h, y) && !self.contains(h, x))
            .collect()
    }

    /// `k ⊊ h`.
    pub fn strictly_contains(&self, h: HalfspaceId, k: HalfspaceId) -> bool {
        self.below[h].contains(k)
    }

    /// All four of `h ∩ k`, `h ∩ k̄`, `h̄ ∩ k`, `h̄ ∩ k̄` are nonempty.
    pub fn transverse(&self, h: HalfspaceId, k: HalfspaceId) -> bool {
        let (a, b) = (&self.halfspaces[h], &self.halfspaces[k]);
        let mut union = a.clone();
        union.union_with(b);
        !a.is_disjoint(b) && !a.is_subset(b) && !b.is_subset(a) && union.count_ones(..) < self.graph.vertex_count()
    }

    /// `h ⊋ k` with no halfspace strictly in between.
    pub fn tightly_nested(&self, h: HalfspaceId, k: HalfspaceId) -> bool {
        self.tight[h].contains(&k)
    }

    pub fn is_segment(&self, ids: &[HalfspaceId]) -> bool {
        !ids.is_empty() && ids.windows(2).all(|w| self.tightly_nested(w[0], w[1]))
    }

    fn chains(&self, allowed: &dyn Fn(HalfspaceId) -> bool, ell: usize) -> Vec<HSegment> {
        fn extend(c: &MedianComplex, allowed: &dyn Fn(HalfspaceId) -> bool, ell: usize, stack: &mut Vec<HalfspaceId>, out: &mut Vec<HSegment>) {
            if stack.len() == ell {
                out.push(HSegment::new(stack));
                return;
            }
            let last = *stack.last().unwrap();
            for &k in &c.tight[last] {
                if allowed(k) {
                    stack.push(k);
                    extend(c, allowed, ell, stack, out);
                    stack.pop();
                }
            }
        }
        let mut out = Vec::new();
        if ell == 0 {
            return out;
        }
        for h in (0..self.halfspace_count()).filter(|&h| allowed(h)) {
            extend(self, allowed, ell, &mut vec![h], &mut out);
        }
        out
    }

    /// `X_ℋ^(ℓ)`, every ℋ-segment of length ℓ.
    pub fn segments(&self, ell: usize) -> Vec<HSegment> {
        self.chains(&|_| true, ell)
    }

    /// `[x, y]_ℋ^(ℓ)`, the segments of length ℓ inside `[x, y]_ℋ`.
    pub fn segments_in_interval(&self, x: usize, y: usize, ell: usize) -> Vec<HSegment> {
        self.chains(&|h| self.contains(h, y) && !self.contains(h, x), ell)
    }

    /// Heads: endpoints in `h̄₁` of edges dual to `h₁`.
    pub fn heads(&self, s: &HSegment) -> Vec<usize> {
        let mut out: Vec<usize> = self.dual_edges(s.ids()[0]).into_iter().map(|(a, _)| a).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Tails: endpoints in `h_ℓ` of edges dual to `h_ℓ`.
    pub fn tails(&self, s: &HSegment) -> Vec<usize> {
        let mut out: Vec<usize> = self.dual_edges(*s.ids().last().unwrap()).into_iter().map(|(_, w)| w).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `x ∈ h₁ ∩ h̄_ℓ`.
    pub fn in_interior(&self, s: &HSegment, x: usize) -> bool {
        self.contains(s.ids()[0], x) && !self.contains(*s.ids().last().unwrap(), x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::all_pairs;

    fn complex(g: FiniteGraph) -> MedianComplex {
        MedianComplex::new(Arc::new(g)).unwrap()
    }

    #[test]
    fn hyperplane_counts() {
        let edge = complex(FiniteGraph::path_graph(1));
        assert_eq!(edge.hyperplane_count(), 1);
        assert_eq!(edge.halfspace(0).count_ones(..), 1);
        assert_eq!(edge.halfspace(1).count_ones(..), 1);
        assert_eq!(complex(FiniteGraph::cycle(4)).hyperplane_count(), 2);
        assert_eq!(complex(FiniteGraph::path_graph(5)).hyperplane_count(), 5);
        assert_eq!(complex(grid(3, 3)).hyperplane_count(), 4);
        assert!(matches!(
            MedianComplex::new(Arc::new(FiniteGraph::cycle(5))),
            Err(MedianError::NotMedian(..))
        ));
    }

    #[test]
    fn interval_sizes_match_distances() {
        for g in [grid(3, 4), binary_tree(12), young_diagram(&[3, 2, 1])] {
            let c = complex(g);
            for (x, y) in all_pairs(&c.graph().vertices()) {
                assert_eq!(c.interval_halfspaces(x, y).len() as u32, c.graph().distance(x, y));
            }
        }
    }

    #[test]
    fn interval_examples() {
        let c = complex(grid(3, 3));
        assert!(c.interval_halfspaces(4, 4).is_empty());
        assert_eq!(c.interval_halfspaces(0, 1), vec![c.halfspace_of_edge(0, 1)]);
        assert_eq!(c.interval_halfspaces(0, 8).len(), 4);
    }

    #[test]
    fn transversality() {
        let sq = complex(FiniteGraph::cycle(4));
        assert!(sq.transverse(0, 2));
        assert!(!sq.transverse(0, 1));
        let tree = complex(binary_tree(15));
        let n = tree.halfspace_count();
        assert!((0..n).all(|h| (0..n).all(|k| !tree.transverse(h, k))));
    }

    #[test]
    fn segment_enumeration() {
        let p = complex(FiniteGraph::path_graph(2));
        let segs = p.segments(2);
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[0].reverse(), segs[1]);
        assert_eq!(p.segments(1).len(), p.halfspace_count());
        assert!(p.segments_in_interval(1, 1, 1).is_empty());
        let g = complex(grid(3, 3));
        for s in g.segments(2).iter().chain(&g.segments(3)) {
            assert!(g.is_segment(s.reverse().ids()));
            assert_eq!(g.heads(&s.reverse()), g.tails(s));
            assert_eq!(g.tails(&s.reverse()), g.heads(s));
        }
    }

    #[test]
    fn heads_and_tails_of_an_edge() {
        let e = complex(FiniteGraph::path_graph(1));
        let s = HSegment::new(&[e.halfspace_of_edge(0, 1)]);
        assert_eq!(e.heads(&s), vec![0]);
        assert_eq!(e.tails(&s), vec![1]);
        assert!(!e.in_interior(&s, 0));
    }
}
