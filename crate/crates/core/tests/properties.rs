use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::Arc;

use proptest::prelude::*;
use wqm::brooks_delta::{
    brooks_qm, brooks_qm_direct, delta_qm, inverse_sequence, BrooksWord, DeltaDecomposition, LetterDecomposition,
    PieceWeight, SyllableDecomposition,
};
use wqm::cochain::{Cochain, Invariance, NormInfo};
use wqm::graph::FiniteGraph;
use wqm::median::builtin_complex;
use wqm::weights::ActionQuasimorphism;
use wqm::words::tree_median;
use wqm::{Alphabet, ReducedWord};

const OMEGAS: [&str; 5] = ["ab", "aab", "abab", "bba", "abAB"];

fn word(max_len: usize) -> impl Strategy<Value = ReducedWord> {
    prop::collection::vec(0u8..4, 0..=max_len).prop_map(|raw| ReducedWord::reduce(&raw))
}

fn tuple(n: usize) -> impl Strategy<Value = Vec<ReducedWord>> {
    prop::collection::vec(word(6), n)
}

/// A non-invariant cochain with pseudo-random values in `-3..=3`.
fn hashed(degree: usize, seed: u64, real: bool) -> Cochain<ReducedWord> {
    Cochain::new(degree, format!("h{seed}"), !real, Invariance::Partial, NormInfo::Exact(3.0), move |x: &[ReducedWord]| {
        let mut h = DefaultHasher::new();
        seed.hash(&mut h);
        for w in x {
            w.letters().hash(&mut h);
        }
        let v = (h.finish() % 7) as f64 - 3.0;
        if real { v * 0.1 + 1.0 / 3.0 } else { v }
    })
}

fn brooks(s: &str) -> BrooksWord {
    BrooksWord::parse(&Alphabet::new(2).unwrap(), s).unwrap()
}

fn tol(integral: bool) -> f64 {
    if integral { 0.0 } else { 1e-9 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn coboundary_squares_to_zero(seed in any::<u64>(), degree in 0usize..3, real in any::<bool>(), x in tuple(5)) {
        let f = hashed(degree, seed, real);
        let dd = f.coboundary().coboundary();
        prop_assert!(dd.eval(&x[..degree + 3]).abs() <= tol(!real));
    }

    #[test]
    fn leibniz_rule(s1 in any::<u64>(), s2 in any::<u64>(), p in 0usize..3, q in 0usize..3, real in any::<bool>(), x in tuple(6)) {
        let (f, g) = (hashed(p, s1, real), hashed(q, s2, false));
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = f.cup(&g).coboundary();
        let rhs = f.coboundary().cup(&g).add(&f.cup(&g.coboundary()).scale(sign));
        let t = &x[..p + q + 2];
        prop_assert!((lhs.eval(t) - rhs.eval(t)).abs() <= tol(!real));
    }

    #[test]
    fn brooks_weight_agrees_with_window_count(i in 0usize..OMEGAS.len(), g in word(12)) {
        let omega = brooks(OMEGAS[i]);
        let f = brooks_qm(Alphabet::new(2).unwrap(), &omega).unwrap();
        prop_assert_eq!(f.eval(&ReducedWord::identity(), &g), brooks_qm_direct(&omega, &g) as f64);
    }

    #[test]
    fn brooks_is_invariant_antisymmetric_and_bounded(i in 0usize..OMEGAS.len(), g in word(6), x in word(6), y in word(6), z in word(6)) {
        let omega = brooks(OMEGAS[i]);
        let f = brooks_qm(Alphabet::new(2).unwrap(), &omega).unwrap();
        prop_assert_eq!(f.eval(&g.mul(&x), &g.mul(&y)), f.eval(&x, &y));
        prop_assert_eq!(f.eval(&x, &y), -f.eval(&y, &x));
        let d = f.eval(&x, &y) + f.eval(&y, &z) - f.eval(&x, &z);
        prop_assert!(d.abs() <= f.defect_bound(), "defect {} > {}", d, f.defect_bound());
    }

    #[test]
    fn decompositions_commute_with_inversion(g in word(12)) {
        let pieces: [&dyn DeltaDecomposition; 2] = [&LetterDecomposition, &SyllableDecomposition];
        for delta in pieces {
            let s = delta.decompose(&g);
            prop_assert_eq!(delta.decompose(&g.inverse()), inverse_sequence(&s));
            prop_assert!(s.iter().all(|p| delta.is_piece(p)));
            let product = s.iter().fold(ReducedWord::identity(), |acc, p| acc.mul(p));
            prop_assert_eq!(product, g.clone());
        }
    }

    #[test]
    fn letter_weights_are_homomorphisms(la in -3i32..=3, lb in -3i32..=3, x in word(6), y in word(6), z in word(6)) {
        let f2 = Alphabet::new(2).unwrap();
        let lambda = PieceWeight::new([(f2.parse("a").unwrap(), la as f64), (f2.parse("b").unwrap(), lb as f64)]).unwrap();
        let f = delta_qm(&lambda, Arc::new(LetterDecomposition)).unwrap();
        prop_assert_eq!(f.eval(&x, &y) + f.eval(&y, &z), f.eval(&x, &z));
    }

    #[test]
    fn tree_median_is_symmetric_and_central(x in word(8), y in word(8), z in word(8)) {
        let m = tree_median(&x, &y, &z);
        prop_assert_eq!(&m, &tree_median(&y, &z, &x));
        prop_assert_eq!(&m, &tree_median(&y, &x, &z));
        for (u, v) in [(&x, &y), (&y, &z), (&x, &z)] {
            prop_assert_eq!(u.distance(&m) + m.distance(v), u.distance(v));
        }
    }

    #[test]
    fn median_commutes_with_relabelling(
        perm in Just((0..16).collect::<Vec<usize>>()).prop_shuffle(),
        a in 0usize..16, b in 0usize..16, c in 0usize..16,
    ) {
        let (g, _) = builtin_complex("grid:4x4").unwrap();
        let edges: Vec<_> = g.edges().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
        let h = FiniteGraph::from_edges(16, &edges).unwrap();
        prop_assert_eq!(h.median(perm[a], perm[b], perm[c]).unwrap(), perm[g.median(a, b, c).unwrap()]);
    }
}
