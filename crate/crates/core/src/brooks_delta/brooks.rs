use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cochain::GroupQuasimorphism;
use crate::coherent::CoherentPair;
use crate::graph::{Fragment, OrientedEdge};
use crate::weights::{Weight, WeightError, WeightQuasimorphism};
use crate::words::{Alphabet, CayleyTree, ReducedWord, WordError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BrooksError {
    #[error("Brooks words must be nonempty")]
    Empty,
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A nonempty reduced word ω whose occurrences are counted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BrooksWord {
    word: ReducedWord,
    inverse: ReducedWord,
}

impl BrooksWord {
    pub fn new(word: ReducedWord) -> Result<Self, BrooksError> {
        if word.is_identity() {
            return Err(BrooksError::Empty);
        }
        let inverse = word.inverse();
        Ok(BrooksWord { word, inverse })
    }

    pub fn parse(alphabet: &Alphabet, s: &str) -> Result<Self, BrooksError> {
        BrooksWord::new(alphabet.parse(s)?)
    }

    pub fn word(&self) -> &ReducedWord {
        &self.word
    }

    /// ℓ = |ω|.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn chi_letters(&self, window: &[u8]) -> i64 {
        if window == self.word.letters() {
            1
        } else if window == self.inverse.letters() {
            -1
        } else {
            0
        }
    }
}

impl std::fmt::Display for BrooksWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.word)
    }
}

/// `χ_ω(g)`: +1 if `g = ω`, −1 if `g = ω⁻¹`, else 0.
pub fn chi(omega: &BrooksWord, g: &ReducedWord) -> i64 {
    omega.chi_letters(g.letters())
}

/// `φ_ω(g)`: occurrences of ω in the reduced spelling of `g` minus
/// occurrences of ω⁻¹, overlaps included.
pub fn brooks_qm_direct(omega: &BrooksWord, g: &ReducedWord) -> i64 {
    g.letters().windows(omega.len()).map(|w| omega.chi_letters(w)).sum()
}

/// The group quasimorphism `φ_ω`.
pub fn brooks_group_qm(omega: &BrooksWord) -> GroupQuasimorphism {
    let w = omega.clone();
    let defect = (omega.len() == 1).then_some(0.0);
    GroupQuasimorphism::new(format!("φ_{omega}"), true, defect, move |g| brooks_qm_direct(&w, g) as f64)
}

/// `W(e₁, …, e_ℓ) = χ_ω(λ(e₁)⋯λ(e_ℓ))` on connected tuples, 0 otherwise,
/// with edge labels `λ(e) = α(e)⁻¹ω(e)`.
#[derive(Clone, Debug)]
pub struct BrooksWeight {
    omega: BrooksWord,
}

impl BrooksWeight {
    pub fn new(omega: BrooksWord) -> Self {
        BrooksWeight { omega }
    }

    pub fn omega(&self) -> &BrooksWord {
        &self.omega
    }
}

impl Weight<ReducedWord> for BrooksWeight {
    fn name(&self) -> String {
        format!("brooks({})", self.omega)
    }

    fn size(&self) -> usize {
        self.omega.len()
    }

    fn declared_norm(&self) -> f64 {
        1.0
    }

    /// ℓ − 1 supported fragments can hold a vertex in their interior; for
    /// ℓ = 1 there are none and the smallest admissible constant 2 is used.
    fn finiteness(&self) -> Option<usize> {
        Some(match self.omega.len() {
            1 => 2,
            l => l - 1,
        })
    }

    fn is_integral(&self) -> bool {
        true
    }

    fn evaluate(&self, edges: &[OrientedEdge<ReducedWord>]) -> f64 {
        if edges.windows(2).any(|w| w[0].tail != w[1].head) {
            return 0.0;
        }
        let label = edges
            .iter()
            .fold(ReducedWord::identity(), |acc, e| acc.mul(&e.head.left_quotient(&e.tail)));
        chi(&self.omega, &label) as f64
    }

    /// On a path, a tuple is connected iff its edges are consecutive, and then
    /// the product of labels telescopes to `α⁻¹ω` of the whole fragment.
    fn on_fragment(&self, a: &Fragment<'_, ReducedWord>) -> f64 {
        if a.indices().windows(2).any(|w| w[1] != w[0] + 1) {
            return 0.0;
        }
        chi(&self.omega, &a.head().left_quotient(a.tail())) as f64
    }
}

/// Tree geodesics with index bijections, of size `size`.
pub fn tree_pair(alphabet: Alphabet, size: usize) -> CoherentPair<ReducedWord> {
    CoherentPair::with_index_bijections(Arc::new(CayleyTree::new(alphabet)), size)
}

/// `f_W` for the Brooks weight of ω on the Cayley tree of `alphabet`.
pub fn brooks_qm(alphabet: Alphabet, omega: &BrooksWord) -> Result<WeightQuasimorphism<ReducedWord>, WeightError> {
    WeightQuasimorphism::new(
        Arc::new(BrooksWeight::new(omega.clone())),
        tree_pair(alphabet, omega.len()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Path;
    use crate::weights::ActionQuasimorphism;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn bw(s: &str) -> BrooksWord {
        BrooksWord::parse(&f2(), s).unwrap()
    }

    fn w(s: &str) -> ReducedWord {
        f2().parse(s).unwrap()
    }

    #[test]
    fn chi_values() {
        assert_eq!(chi(&bw("ab"), &w("ab")), 1);
        assert_eq!(chi(&bw("ab"), &w("BA")), -1);
        assert_eq!(chi(&bw("ab"), &w("aa")), 0);
        assert_eq!(BrooksWord::parse(&f2(), "e").unwrap_err(), BrooksError::Empty);
    }

    #[test]
    fn sliding_window_counts() {
        assert_eq!(brooks_qm_direct(&bw("ab"), &w("ab")), 1);
        assert_eq!(brooks_qm_direct(&bw("ab"), &w("abab")), 2);
        assert_eq!(brooks_qm_direct(&bw("ab"), &w("BABA")), -2);
        assert_eq!(brooks_qm_direct(&bw("ab"), &ReducedWord::identity()), 0);
        assert_eq!(brooks_qm_direct(&bw("aa"), &w("aaa")), 2);
        assert_eq!(brooks_qm_direct(&bw("a"), &w("abAAb")), -1);
    }

    #[test]
    fn disconnected_tuples_vanish() {
        let weight = BrooksWeight::new(bw("ab"));
        let p = Path::new(vec![w("e"), w("a"), w("ab"), w("aba")]).unwrap();
        assert_eq!(weight.on_fragment(&Fragment::new(&p, [0, 1].into_iter().collect())), 1.0);
        assert_eq!(weight.on_fragment(&Fragment::new(&p, [0, 2].into_iter().collect())), 0.0);
        let edges = vec![p.edge(0), p.edge(2)];
        assert_eq!(weight.evaluate(&edges), 0.0);
        assert_eq!(weight.evaluate(&[p.edge(0), p.edge(1)]), 1.0);
        assert_eq!(weight.evaluate(&[p.edge(1).reversed(), p.edge(0).reversed()]), -1.0);
    }

    #[test]
    fn weight_matches_direct_count_on_b4() {
        for s in ["a", "ab", "aab", "abA"] {
            let omega = bw(s);
            let f = brooks_qm(f2(), &omega).unwrap();
            for g in f2().ball(4).unwrap() {
                assert_eq!(f.eval(&ReducedWord::identity(), &g), brooks_qm_direct(&omega, &g) as f64, "{s} {g}");
            }
        }
    }

    #[test]
    fn finiteness_constants() {
        assert_eq!(BrooksWeight::new(bw("a")).finiteness(), Some(2));
        assert_eq!(BrooksWeight::new(bw("ab")).finiteness(), Some(1));
        assert_eq!(BrooksWeight::new(bw("abab")).finiteness(), Some(3));
    }
}
