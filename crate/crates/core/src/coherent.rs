//! Path families with the quasi-median property, fragment correspondences Φ,
//! and verification of the coherence conditions.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{fragment_indices, FiniteGraph, FragmentIndices, GraphAction, Path, Vertex};
use crate::report::CheckEntry;

/// Default cap on the number of path triples tried by the exhaustive witness
/// search for one vertex triple.
pub const DEFAULT_WITNESS_BUDGET: usize = 100_000;

/// A family `P(x, y)` of paths from `x` to `y`.
pub trait PathFamily<V: Vertex>: Send + Sync {
    fn name(&self) -> String;

    /// All paths in `P(x, y)`, in a fixed deterministic order.
    fn paths(&self, x: &V, y: &V) -> Vec<Path<V>>;

    /// The first path of [`PathFamily::paths`].
    fn first_path(&self, x: &V, y: &V) -> Option<Path<V>> {
        self.paths(x, y).into_iter().next()
    }

    fn contains(&self, p: &Path<V>) -> bool {
        self.paths(p.start(), p.end()).contains(p)
    }

    /// The quasi-median constant the family is declared to satisfy.
    fn declared_r(&self) -> usize;

    /// A quasi-median witness for `(x, y, z)` with r-paths of length at most
    /// `r_bound`, if one exists.
    fn witness(&self, x: &V, y: &V, z: &V, r_bound: usize) -> Option<QmpWitness<V>> {
        exhaustive_witness(self, x, y, z, r_bound, DEFAULT_WITNESS_BUDGET)
    }
}

/// Decomposition `p_xy = s_x * r₁ * s̄_y`, `p_yz = s_y * r₂ * s̄_z`,
/// `p_xz = s_x * r₃ * s̄_z` around the points `(m_x, m_y, m_z)`.
#[derive(Clone, Debug, Serialize)]
pub struct QmpWitness<V> {
    pub centers: [V; 3],
    pub s_x: Path<V>,
    pub s_y: Path<V>,
    pub s_z: Path<V>,
    pub r: [Path<V>; 3],
    pub p_xy: Path<V>,
    pub p_yz: Path<V>,
    pub p_xz: Path<V>,
}

fn join<V: Vertex>(parts: &[&Path<V>]) -> Option<Vec<V>> {
    let mut out = parts[0].vertices().to_vec();
    for p in &parts[1..] {
        if out.last() != Some(p.start()) {
            return None;
        }
        out.extend(p.vertices()[1..].iter().cloned());
    }
    Some(out)
}

impl<V: Vertex> QmpWitness<V> {
    pub fn max_r(&self) -> usize {
        self.r.iter().map(Path::len).max().unwrap()
    }

    /// Checks the three decompositions vertex for vertex, the r-length bound
    /// and family membership of all nine paths.
    pub fn validate<F: PathFamily<V> + ?Sized>(&self, family: &F, r_bound: usize) -> Result<(), String> {
        let [m_x, m_y, m_z] = &self.centers;
        let endpoints = [
            (&self.s_x, self.p_xy.start(), m_x),
            (&self.s_y, self.p_yz.start(), m_y),
            (&self.s_z, self.p_xz.end(), m_z),
            (&self.r[0], m_x, m_y),
            (&self.r[1], m_y, m_z),
            (&self.r[2], m_x, m_z),
        ];
        for (p, a, b) in endpoints {
            if p.start() != a || p.end() != b {
                return Err(format!("subpath {p:?} does not run from {a:?} to {b:?}"));
            }
        }
        let checks = [
            (&self.p_xy, [&self.s_x, &self.r[0], &self.s_y.reversed()]),
            (&self.p_yz, [&self.s_y, &self.r[1], &self.s_z.reversed()]),
            (&self.p_xz, [&self.s_x, &self.r[2], &self.s_z.reversed()]),
        ];
        for (whole, parts) in &checks {
            if join(parts).as_deref() != Some(whole.vertices()) {
                return Err(format!("{whole:?} does not re-concatenate from its parts"));
            }
        }
        if self.max_r() > r_bound {
            return Err(format!("r-path of length {} exceeds {r_bound}", self.max_r()));
        }
        let members = [
            &self.s_x, &self.s_y, &self.s_z, &self.r[0], &self.r[1], &self.r[2], &self.p_xy, &self.p_yz, &self.p_xz,
        ];
        if let Some(p) = members.iter().find(|p| !family.contains(p)) {
            return Err(format!("{p:?} is not in the family"));
        }
        Ok(())
    }
}

/// Searches all path triples and all split points for a witness with
/// r-lengths at most `r_bound`, trying at most `budget` path triples.
pub fn exhaustive_witness<V: Vertex, F: PathFamily<V> + ?Sized>(
    family: &F,
    x: &V,
    y: &V,
    z: &V,
    r_bound: usize,
    budget: usize,
) -> Option<QmpWitness<V>> {
    let pxy = family.paths(x, y);
    let pyz = family.paths(y, z);
    let pxz = family.paths(x, z);
    let mut tried = 0;
    for a in &pxy {
        for b in &pyz {
            for c in &pxz {
                tried += 1;
                if tried > budget {
                    return None;
                }
                if let Some(w) = split_witness(family, a, b, c, r_bound) {
                    return Some(w);
                }
            }
        }
    }
    None
}

fn common_prefix<V: PartialEq>(a: &[V], b: &[V]) -> usize {
    a.iter().zip(b).take_while(|(u, v)| u == v).count()
}

fn split_witness<V: Vertex, F: PathFamily<V> + ?Sized>(
    family: &F,
    pxy: &Path<V>,
    pyz: &Path<V>,
    pxz: &Path<V>,
    r_bound: usize,
) -> Option<QmpWitness<V>> {
    let (nxy, nyz, nxz) = (pxy.len(), pyz.len(), pxz.len());
    let rxy = pxy.reversed();
    let rxz = pxz.reversed();
    let ryz = pyz.reversed();
    // s_x is a common prefix of p_xy and p_xz, s_y of p̄_xy and p_yz, s_z of p̄_yz and p̄_xz.
    let lx = common_prefix(pxy.vertices(), pxz.vertices()) - 1;
    let ly = common_prefix(rxy.vertices(), pyz.vertices()) - 1;
    let lz = common_prefix(ryz.vertices(), rxz.vertices()) - 1;
    for i in (0..=lx).rev() {
        for j in (0..=ly).rev() {
            if i + j > nxy || nxy - i - j > r_bound {
                continue;
            }
            for k in (0..=lz).rev() {
                if j + k > nyz || i + k > nxz || nyz - j - k > r_bound || nxz - i - k > r_bound {
                    continue;
                }
                let w = QmpWitness {
                    centers: [
                        pxy.vertices()[i].clone(),
                        pyz.vertices()[j].clone(),
                        pxz.vertices()[nxz - k].clone(),
                    ],
                    s_x: pxy.subpath(0, i),
                    s_y: pyz.subpath(0, j),
                    s_z: rxz.subpath(0, k),
                    r: [pxy.subpath(i, nxy - j), pyz.subpath(j, nyz - k), pxz.subpath(i, nxz - k)],
                    p_xy: pxy.clone(),
                    p_yz: pyz.clone(),
                    p_xz: pxz.clone(),
                };
                if w.validate(family, r_bound).is_ok() {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// Outcome of a quasi-median sweep.
#[derive(Clone, Debug, Serialize)]
pub struct QmpReport {
    pub family: String,
    pub r: usize,
    pub triples_checked: usize,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

/// Looks for a witness with constant `r` at every triple; reports the first
/// failing triple in input order.
pub fn verify_qmp<V: Vertex, F: PathFamily<V> + ?Sized>(family: &F, r: usize, triples: &[[V; 3]]) -> QmpReport {
    let failure = triples
        .par_iter()
        .position_first(|[x, y, z]| family.witness(x, y, z, r).is_none());
    QmpReport {
        family: family.name(),
        r,
        triples_checked: triples.len(),
        holds: failure.is_none(),
        counterexample: failure.map(|i| {
            let [x, y, z] = &triples[i];
            format!("({x:?}, {y:?}, {z:?})")
        }),
    }
}

/// The bijections `φ_{p,q}: p^(ℓ) → q^(ℓ)` for paths `p, q` in one `P(x, y)`.
pub trait FragmentCorrespondence<V: Vertex>: Send + Sync {
    fn name(&self) -> String;

    /// Images of the fragments of `p`, listed in the lexicographic order of
    /// `p^(ℓ)`, as index sets of `q`.
    fn map(&self, p: &Path<V>, q: &Path<V>, ell: usize) -> Vec<FragmentIndices>;

    fn apply(&self, p: &Path<V>, q: &Path<V>, a: &[usize]) -> FragmentIndices {
        let ell = a.len();
        let pos = fragment_indices(p.len(), ell)
            .position(|f| f.as_slice() == a)
            .expect("index set is a fragment of p");
        self.map(p, q, ell).swap_remove(pos)
    }
}

/// Sends the i-th chosen edges of `p` to the i-th edges of `q`.
#[derive(Clone, Copy, Debug, Default)]
pub struct IndexCorrespondence;

impl<V: Vertex> FragmentCorrespondence<V> for IndexCorrespondence {
    fn name(&self) -> String {
        "index".into()
    }

    fn map(&self, p: &Path<V>, _q: &Path<V>, ell: usize) -> Vec<FragmentIndices> {
        fragment_indices(p.len(), ell).collect()
    }

    fn apply(&self, _p: &Path<V>, _q: &Path<V>, a: &[usize]) -> FragmentIndices {
        FragmentIndices::from_slice(a)
    }
}

/// A path family with fragment bijections of a fixed size ℓ.
#[derive(Clone)]
pub struct CoherentPair<V: Vertex> {
    pub family: Arc<dyn PathFamily<V>>,
    pub correspondence: Arc<dyn FragmentCorrespondence<V>>,
    pub size: usize,
}

impl<V: Vertex> fmt::Debug for CoherentPair<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoherentPair")
            .field("family", &self.family.name())
            .field("correspondence", &self.correspondence.name())
            .field("size", &self.size)
            .finish()
    }
}

impl<V: Vertex> CoherentPair<V> {
    pub fn new(family: Arc<dyn PathFamily<V>>, correspondence: Arc<dyn FragmentCorrespondence<V>>, size: usize) -> Self {
        assert!(size >= 1, "coherent pairs have positive size");
        CoherentPair {
            family,
            correspondence,
            size,
        }
    }

    /// The family with the index correspondence.
    pub fn with_index_bijections(family: Arc<dyn PathFamily<V>>, size: usize) -> Self {
        CoherentPair::new(family, Arc::new(IndexCorrespondence), size)
    }

    pub fn declared_r(&self) -> usize {
        self.family.declared_r()
    }
}

pub fn qmp_witness<V: Vertex>(pair: &CoherentPair<V>, x: &V, y: &V, z: &V) -> Option<QmpWitness<V>> {
    pair.family.witness(x, y, z, pair.declared_r())
}

fn translate<V: Vertex>(action: &dyn GraphAction<V>, i: usize, p: &Path<V>) -> Path<V> {
    p.map(|v| action.apply(i, v))
}

/// Checks nonemptiness, the four coherence conditions and bijectivity of Φ on
/// the given vertex pairs. Each entry carries the first counterexample.
pub fn verify_coherence<V: Vertex>(
    pair: &CoherentPair<V>,
    action: &dyn GraphAction<V>,
    pairs: &[(V, V)],
) -> Vec<CheckEntry> {
    let family = pair.family.as_ref();
    let first = |f: &(dyn Fn(&V, &V, &[Path<V>]) -> Option<String> + Sync)| -> Option<String> {
        pairs
            .par_iter()
            .map(|(x, y)| {
                let ps = family.paths(x, y);
                f(x, y, &ps)
            })
            .find_map_first(|w| w)
    };

    let nonempty = first(&|x, y, ps| ps.is_empty().then(|| format!("P({x:?}, {y:?}) is empty")));

    let action_compatible = first(&|x, y, ps| {
        let here: BTreeSet<Vec<V>> = ps.iter().map(|p| p.vertices().to_vec()).collect();
        (0..action.generator_count()).find_map(|i| {
            let moved: BTreeSet<Vec<V>> = here
                .iter()
                .map(|p| translate(action, i, &Path::from_distinct(p.clone())).vertices().to_vec())
                .collect();
            let (gx, gy) = (action.apply(i, x), action.apply(i, y));
            let there: BTreeSet<Vec<V>> = family.paths(&gx, &gy).iter().map(|p| p.vertices().to_vec()).collect();
            (moved != there).then(|| format!("{}·P({x:?}, {y:?}) ≠ P({gx:?}, {gy:?})", action.generator_name(i)))
        })
    });

    let inversion_compatible = first(&|x, y, ps| {
        let forward: BTreeSet<Vec<V>> = ps.iter().map(|p| p.vertices().to_vec()).collect();
        let backward: BTreeSet<Vec<V>> = family
            .paths(y, x)
            .iter()
            .map(|p| p.reversed().vertices().to_vec())
            .collect();
        (forward != backward).then(|| format!("P({x:?}, {y:?}) is not the reversal of P({y:?}, {x:?})"))
    });

    let subpath_closed = first(&|_, _, ps| {
        ps.iter().find_map(|p| {
            (0..=p.len()).find_map(|i| {
                (i..=p.len()).find_map(|j| {
                    let sub = p.subpath(i, j);
                    (!family.contains(&sub)).then(|| format!("subpath {sub:?} of {p:?} is not in the family"))
                })
            })
        })
    });

    let equal_length = first(&|x, y, ps| {
        let lengths: BTreeSet<usize> = ps.iter().map(Path::len).collect();
        (lengths.len() > 1).then(|| format!("P({x:?}, {y:?}) has lengths {lengths:?}"))
    });

    let phi_bijective = first(&|_, _, ps| {
        for p in ps {
            for q in ps {
                let images = pair.correspondence.map(p, q, pair.size);
                let domain: Vec<FragmentIndices> = fragment_indices(p.len(), pair.size).collect();
                let target: BTreeSet<FragmentIndices> = fragment_indices(q.len(), pair.size).collect();
                let hit: BTreeSet<FragmentIndices> = images.iter().cloned().collect();
                if images.len() != domain.len() || hit.len() != images.len() || hit != target {
                    return Some(format!("φ for {p:?} → {q:?} is not a bijection"));
                }
                if p == q && images != domain {
                    return Some(format!("φ for {p:?} → {p:?} is not the identity"));
                }
            }
        }
        None
    });

    vec![
        CheckEntry::from_witness("nonempty", nonempty),
        CheckEntry::from_witness("action-compatible", action_compatible),
        CheckEntry::from_witness("inversion-compatible", inversion_compatible),
        CheckEntry::from_witness("subpath-closed", subpath_closed),
        CheckEntry::from_witness("equal-length", equal_length),
        CheckEntry::from_witness("phi-bijective", phi_bijective),
    ]
}

/// All geodesics of a finite graph.
///
/// On a median graph the witness is built around the median with trivial
/// r-paths; elsewhere it falls back to exhaustive search.
#[derive(Clone, Debug)]
pub struct GeodesicFamily {
    graph: Arc<FiniteGraph>,
    declared_r: usize,
}

impl GeodesicFamily {
    pub fn new(graph: Arc<FiniteGraph>) -> Self {
        GeodesicFamily { graph, declared_r: 1 }
    }

    pub fn with_declared_r(mut self, r: usize) -> Self {
        self.declared_r = r;
        self
    }

    pub fn graph(&self) -> &Arc<FiniteGraph> {
        &self.graph
    }

    fn median_witness(&self, x: usize, y: usize, z: usize) -> Option<QmpWitness<usize>> {
        let m = self.graph.median(x, y, z).ok()?;
        let g = &self.graph;
        let s_x = g.first_geodesic(x, m).ok()?;
        let s_y = g.first_geodesic(y, m).ok()?;
        let s_z = g.first_geodesic(z, m).ok()?;
        let glue = |a: &Path<usize>, b: &Path<usize>| a.concat(&b.reversed());
        Some(QmpWitness {
            centers: [m, m, m],
            p_xy: glue(&s_x, &s_y)?,
            p_yz: glue(&s_y, &s_z)?,
            p_xz: glue(&s_x, &s_z)?,
            s_x,
            s_y,
            s_z,
            r: [Path::trivial(m), Path::trivial(m), Path::trivial(m)],
        })
    }
}

impl PathFamily<usize> for GeodesicFamily {
    fn name(&self) -> String {
        "geodesics".into()
    }

    fn paths(&self, x: &usize, y: &usize) -> Vec<Path<usize>> {
        self.graph.all_geodesics(*x, *y).unwrap_or_default()
    }

    fn first_path(&self, x: &usize, y: &usize) -> Option<Path<usize>> {
        self.graph.first_geodesic(*x, *y).ok()
    }

    fn contains(&self, p: &Path<usize>) -> bool {
        self.graph.is_geodesic(p)
    }

    fn declared_r(&self) -> usize {
        self.declared_r
    }

    fn witness(&self, x: &usize, y: &usize, z: &usize, r_bound: usize) -> Option<QmpWitness<usize>> {
        if let Some(w) = self.median_witness(*x, *y, *z) {
            if w.validate(self, r_bound).is_ok() {
                return Some(w);
            }
        }
        exhaustive_witness(self, x, y, z, r_bound, DEFAULT_WITNESS_BUDGET)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{PermutationAction, TrivialAction};
    use crate::report::find;
    use crate::sampling::{all_pairs, all_triples};
    use crate::words::{Alphabet, CayleyTree, FreeGroupTranslation};

    fn tree10() -> Arc<FiniteGraph> {
        let edges = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6), (3, 7), (4, 8), (6, 9)];
        Arc::new(FiniteGraph::from_edges(10, &edges).unwrap())
    }

    #[test]
    fn tree_geodesics_are_coherent_and_qmp_zero() {
        let g = tree10();
        let family = GeodesicFamily::new(g.clone());
        let triples = all_triples(&g.vertices());
        assert!(verify_qmp(&family, 0, &triples).holds);
        assert!(verify_qmp(&family, 1, &triples).holds);
        let pair = CoherentPair::with_index_bijections(Arc::new(family), 2);
        let entries = verify_coherence(&pair, &TrivialAction, &all_pairs(&g.vertices()));
        assert!(entries.iter().all(CheckEntry::is_pass), "{entries:?}");
    }

    #[test]
    fn five_cycle_fails_at_zero() {
        let g = Arc::new(FiniteGraph::cycle(5));
        let family = GeodesicFamily::new(g.clone()).with_declared_r(0);
        let report = verify_qmp(&family, 0, &all_triples(&g.vertices()));
        assert!(!report.holds);
        assert!(report.counterexample.is_some());
    }

    #[test]
    fn degenerate_triple_has_empty_subpaths() {
        let family = GeodesicFamily::new(tree10());
        let w = family.witness(&4, &4, &4, 0).unwrap();
        assert!(w.s_x.is_empty() && w.s_y.is_empty() && w.s_z.is_empty());
        assert_eq!(w.max_r(), 0);
    }

    #[test]
    fn exhaustive_search_agrees_with_median_witness_on_square() {
        let g = Arc::new(FiniteGraph::cycle(4));
        let family = GeodesicFamily::new(g.clone());
        for [x, y, z] in all_triples(&g.vertices()) {
            let w = exhaustive_witness(&family, &x, &y, &z, 0, usize::MAX).unwrap();
            assert!(w.validate(&family, 0).is_ok());
            assert_eq!(w.centers[0], g.median(x, y, z).unwrap());
        }
    }

    #[test]
    fn square_rotation_is_compatible() {
        let g = Arc::new(FiniteGraph::cycle(4));
        let action = PermutationAction::new().with_generator("r", vec![1, 2, 3, 0]);
        action.verify(&g).unwrap();
        let pair = CoherentPair::with_index_bijections(Arc::new(GeodesicFamily::new(g.clone())), 1);
        let entries = verify_coherence(&pair, &action, &all_pairs(&g.vertices()));
        assert!(entries.iter().all(CheckEntry::is_pass), "{entries:?}");
    }

    struct Uneven;

    impl PathFamily<usize> for Uneven {
        fn name(&self) -> String {
            "uneven".into()
        }

        fn paths(&self, x: &usize, y: &usize) -> Vec<Path<usize>> {
            let g = FiniteGraph::cycle(4);
            let mut ps = g.all_geodesics(*x, *y).unwrap();
            if (*x, *y) == (0, 1) {
                ps.push(Path::new(vec![0, 3, 2, 1]).unwrap());
            }
            ps
        }

        fn declared_r(&self) -> usize {
            0
        }
    }

    #[test]
    fn differing_lengths_are_reported() {
        let pair = CoherentPair::with_index_bijections(Arc::new(Uneven), 1);
        let entries = verify_coherence(&pair, &TrivialAction, &[(0, 1), (1, 2)]);
        let e = find(&entries, "equal-length").unwrap();
        assert!(!e.is_pass());
        assert!(e.counterexample.as_ref().unwrap().contains("P(0, 1)"));
    }

    #[test]
    fn diagonal_family_is_vacuously_coherent() {
        let g = tree10();
        let pair = CoherentPair::with_index_bijections(Arc::new(GeodesicFamily::new(g.clone())), 3);
        let diagonal: Vec<_> = g.vertices().into_iter().map(|v| (v, v)).collect();
        assert!(verify_coherence(&pair, &TrivialAction, &diagonal).iter().all(CheckEntry::is_pass));
    }

    #[test]
    fn cayley_tree_is_coherent_on_a_ball() {
        let f2 = Alphabet::new(2).unwrap();
        let ball = f2.ball(2).unwrap();
        let tree = CayleyTree::new(f2);
        let pair = CoherentPair::with_index_bijections(Arc::new(tree), 2);
        let entries = verify_coherence(&pair, &FreeGroupTranslation::new(f2), &all_pairs(&ball));
        assert!(entries.iter().all(CheckEntry::is_pass), "{entries:?}");
        assert!(verify_qmp(&tree, 0, &all_triples(&ball)).holds);
    }
}
