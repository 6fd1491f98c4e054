use serde::Serialize;

use crate::weights::ActionQuasimorphism;
use crate::words::{tree_geodesic, ReducedWord};

/// A halfspace of a free-group Cayley tree, stored as its unique dual edge
/// `(α, ω)` with `ω` inside the halfspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TreeHalfspace {
    pub alpha: ReducedWord,
    pub omega: ReducedWord,
}

impl TreeHalfspace {
    /// Panics unless `alpha` and `omega` are adjacent.
    pub fn new(alpha: ReducedWord, omega: ReducedWord) -> Self {
        assert_eq!(alpha.distance(&omega), 1, "dual edges join adjacent vertices");
        TreeHalfspace { alpha, omega }
    }

    pub fn complement(&self) -> Self {
        TreeHalfspace {
            alpha: self.omega.clone(),
            omega: self.alpha.clone(),
        }
    }

    pub fn contains(&self, x: &ReducedWord) -> bool {
        x.distance(&self.omega) < x.distance(&self.alpha)
    }

    /// `(w, true)` for `{x : w is a prefix of x}` and `(w, false)` for its
    /// complement.
    fn shape(&self) -> (&ReducedWord, bool) {
        if self.omega.len() > self.alpha.len() {
            (&self.omega, true)
        } else {
            (&self.alpha, false)
        }
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &TreeHalfspace) -> bool {
        let is_prefix = |u: &ReducedWord, w: &ReducedWord| u.common_prefix_len(w) == u.len();
        match (self.shape(), other.shape()) {
            ((w, true), (u, true)) => is_prefix(u, w),
            ((w, true), (u, false)) => !is_prefix(u, w) && !is_prefix(w, u),
            ((_, false), (_, true)) => false,
            ((w, false), (u, false)) => is_prefix(w, u),
        }
    }

    /// Left translation by `g`.
    pub fn translate(&self, g: &ReducedWord) -> Self {
        TreeHalfspace {
            alpha: g.mul(&self.alpha),
            omega: g.mul(&self.omega),
        }
    }

    fn touches(&self, other: &TreeHalfspace) -> bool {
        [&self.alpha, &self.omega]
            .iter()
            .any(|v| **v == other.alpha || **v == other.omega)
    }
}

/// `k ⊊ h` with no halfspace strictly between. In a tree the halfspaces
/// between two nested ones are those dual to the edges joining their dual
/// edges, so this holds exactly when the dual edges share a vertex.
pub fn tree_tightly_nested(h: &TreeHalfspace, k: &TreeHalfspace) -> bool {
    h != k && k.is_subset(h) && h.touches(k) && *k != h.complement()
}

/// `[x, y]_ℋ` in the tree, in order along the geodesic.
pub fn tree_interval_halfspaces(x: &ReducedWord, y: &ReducedWord) -> Vec<TreeHalfspace> {
    tree_geodesic(x, y)
        .edges()
        .map(|e| TreeHalfspace::new(e.head, e.tail))
        .collect()
}

/// `[x, y]_ℋ^(ℓ)`: chains of tightly nested halfspaces of the interval.
pub fn tree_segments_in_interval(x: &ReducedWord, y: &ReducedWord, ell: usize) -> Vec<Vec<TreeHalfspace>> {
    fn extend(pool: &[TreeHalfspace], ell: usize, stack: &mut Vec<TreeHalfspace>, out: &mut Vec<Vec<TreeHalfspace>>) {
        if stack.len() == ell {
            out.push(stack.clone());
            return;
        }
        for k in pool {
            if tree_tightly_nested(stack.last().unwrap(), k) {
                stack.push(k.clone());
                extend(pool, ell, stack, out);
                stack.pop();
            }
        }
    }
    let pool = tree_interval_halfspaces(x, y);
    let mut out = Vec::new();
    if ell == 0 {
        return out;
    }
    for h in &pool {
        extend(&pool, ell, &mut vec![h.clone()], &mut out);
    }
    out
}

/// The segment of the geodesic from `e` to `ω`.
pub fn tree_segment_of_word(omega: &ReducedWord) -> Vec<TreeHalfspace> {
    tree_interval_halfspaces(&ReducedWord::identity(), omega)
}

pub fn tree_segment_reverse(s: &[TreeHalfspace]) -> Vec<TreeHalfspace> {
    s.iter().rev().map(TreeHalfspace::complement).collect()
}

/// Translates a segment so that the head of its first dual edge is `e`; two
/// segments are in one orbit of the free action iff their canonical forms
/// agree.
pub fn tree_canonical(s: &[TreeHalfspace]) -> Vec<TreeHalfspace> {
    let g = s[0].alpha.inverse();
    s.iter().map(|h| h.translate(&g)).collect()
}

/// `f_s` for a segment of the Cayley tree with the free group acting by left
/// translation.
#[derive(Clone, Debug)]
pub struct TreeMedianQm {
    plus: Vec<TreeHalfspace>,
    minus: Vec<TreeHalfspace>,
}

impl TreeMedianQm {
    pub fn new(segment: &[TreeHalfspace]) -> Self {
        assert!(!segment.is_empty());
        TreeMedianQm {
            plus: tree_canonical(segment),
            minus: tree_canonical(&tree_segment_reverse(segment)),
        }
    }

    pub fn ell(&self) -> usize {
        self.plus.len()
    }

    pub fn sign(&self, t: &[TreeHalfspace]) -> i64 {
        let c = tree_canonical(t);
        if self.plus == self.minus {
            0
        } else if c == self.plus {
            1
        } else if c == self.minus {
            -1
        } else {
            0
        }
    }

    pub fn value(&self, x: &ReducedWord, y: &ReducedWord) -> i64 {
        tree_segments_in_interval(x, y, self.ell()).iter().map(|t| self.sign(t)).sum()
    }
}

impl ActionQuasimorphism<ReducedWord> for TreeMedianQm {
    fn name(&self) -> String {
        "f_s(tree)".into()
    }

    fn eval(&self, x: &ReducedWord, y: &ReducedWord) -> f64 {
        self.value(x, y) as f64
    }

    fn is_integral(&self) -> bool {
        true
    }
}
