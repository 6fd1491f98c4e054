use serde::Serialize;

use super::{HalfspaceId, MedianComplex};

/// The longest staircase found, up to `cap`.
#[derive(Clone, Debug, Serialize)]
pub struct StaircaseReport {
    pub length: usize,
    /// `h₁ ⊋ ⋯ ⊋ h_σ`.
    pub h_chain: Vec<HalfspaceId>,
    /// `k₁ ⊋ ⋯ ⊋ k_σ`.
    pub k_chain: Vec<HalfspaceId>,
    pub cap: usize,
    /// True when the search stopped at the cap, so the staircase length may
    /// be larger.
    pub capped: bool,
}

/// Exhaustive search for chains `h₁ ⊋ ⋯ ⊋ h_σ`, `k₁ ⊋ ⋯ ⊋ k_σ` with
/// `hᵢ ⊋ kᵢ` and `hᵢ ⋔ kⱼ` for all `j < i`.
pub fn staircase_length(c: &MedianComplex, cap: usize) -> StaircaseReport {
    let n = c.halfspace_count();
    let transverse: Vec<Vec<bool>> = (0..n).map(|h| (0..n).map(|k| c.transverse(h, k)).collect()).collect();

    struct Search<'a> {
        c: &'a MedianComplex,
        transverse: Vec<Vec<bool>>,
        cap: usize,
        best: (Vec<HalfspaceId>, Vec<HalfspaceId>),
    }

    impl Search<'_> {
        fn dfs(&mut self, hs: &mut Vec<HalfspaceId>, ks: &mut Vec<HalfspaceId>) {
            if hs.len() > self.best.0.len() {
                self.best = (hs.clone(), ks.clone());
            }
            if self.best.0.len() >= self.cap || hs.len() >= self.cap {
                return;
            }
            for h in 0..self.c.halfspace_count() {
                if hs.last().is_some_and(|&last| !self.c.strictly_contains(last, h)) {
                    continue;
                }
                if ks.iter().any(|&k| !self.transverse[h][k]) {
                    continue;
                }
                for k in 0..self.c.halfspace_count() {
                    if !self.c.strictly_contains(h, k) || ks.last().is_some_and(|&last| !self.c.strictly_contains(last, k)) {
                        continue;
                    }
                    hs.push(h);
                    ks.push(k);
                    self.dfs(hs, ks);
                    hs.pop();
                    ks.pop();
                    if self.best.0.len() >= self.cap {
                        return;
                    }
                }
            }
        }
    }

    let mut search = Search {
        c,
        transverse,
        cap,
        best: (Vec::new(), Vec::new()),
    };
    search.dfs(&mut Vec::new(), &mut Vec::new());
    let (h_chain, k_chain) = search.best;
    StaircaseReport {
        length: h_chain.len(),
        capped: h_chain.len() >= cap,
        h_chain,
        k_chain,
        cap,
    }
}

/// Checks the defining conditions of a staircase witness.
pub fn is_staircase(c: &MedianComplex, hs: &[HalfspaceId], ks: &[HalfspaceId]) -> bool {
    hs.len() == ks.len()
        && hs.windows(2).all(|w| c.strictly_contains(w[0], w[1]))
        && ks.windows(2).all(|w| c.strictly_contains(w[0], w[1]))
        && hs.iter().zip(ks).all(|(&h, &k)| c.strictly_contains(h, k))
        && (0..hs.len()).all(|i| (0..i).all(|j| c.transverse(hs[i], ks[j])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FiniteGraph;
    use crate::median::{binary_tree, grid, staircase_complex};
    use std::sync::Arc;

    fn sigma(g: FiniteGraph) -> StaircaseReport {
        staircase_length(&MedianComplex::new(Arc::new(g)).unwrap(), 8)
    }

    #[test]
    fn known_lengths() {
        assert_eq!(sigma(binary_tree(10)).length, 1);
        assert_eq!(sigma(grid(4, 4)).length, 1);
        assert_eq!(sigma(FiniteGraph::cycle(4)).length, 0);
        for k in 1..=3 {
            assert_eq!(sigma(staircase_complex(k)).length, k);
        }
    }

    #[test]
    fn witnesses_are_staircases() {
        let c = MedianComplex::new(Arc::new(staircase_complex(3))).unwrap();
        let r = staircase_length(&c, 8);
        assert!(is_staircase(&c, &r.h_chain, &r.k_chain));
        assert!(!r.capped);
        let capped = staircase_length(&c, 2);
        assert_eq!(capped.length, 2);
        assert!(capped.capped);
    }
}
