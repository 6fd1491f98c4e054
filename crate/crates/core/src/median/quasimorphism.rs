use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::cochain::Cochain;
use crate::coherent::{CoherentPair, FragmentCorrespondence, GeodesicFamily};
use crate::graph::{fragment_indices, FragmentIndices, GraphAction, OrientedEdge, Path, PermutationAction};
use crate::sampling::all_pairs;
use crate::vanishing::phi_stability_check;
use crate::weights::{empirical_finiteness, ActionQuasimorphism, Weight, WeightQuasimorphism};

use super::{HSegment, HalfspaceId, MedianComplex, MedianError};

/// Largest segment orbit enumerated before giving up.
pub const ORBIT_BUDGET: usize = 100_000;

/// The permutation each generator induces on halfspace ids.
pub fn halfspace_action(c: &MedianComplex, action: &PermutationAction) -> Result<Vec<Vec<HalfspaceId>>, MedianError> {
    let n = c.graph().vertex_count();
    action
        .permutations()
        .iter()
        .enumerate()
        .map(|(i, perm)| {
            (0..c.halfspace_count())
                .map(|h| {
                    let mut image = FixedBitSet::with_capacity(n);
                    for v in c.halfspace(h).ones() {
                        image.insert(perm[v]);
                    }
                    c.find_halfspace(&image).ok_or_else(|| MedianError::NotAutomorphism {
                        generator: action.generator_name(i),
                    })
                })
                .collect()
        })
        .collect()
}

/// `Γs`, by closing `{s}` under the generators of a finite group.
pub fn segment_orbit(s: &HSegment, generators: &[Vec<HalfspaceId>], budget: usize) -> Result<HashSet<HSegment>, MedianError> {
    let mut seen = HashSet::from([s.clone()]);
    let mut queue = VecDeque::from([s.clone()]);
    while let Some(t) = queue.pop_front() {
        for g in generators {
            let image = HSegment(t.ids().iter().map(|&h| g[h]).collect());
            if seen.insert(image.clone()) {
                if seen.len() > budget {
                    return Err(MedianError::Budget(budget));
                }
                queue.push_back(image);
            }
        }
    }
    Ok(seen)
}

/// `ε_s`: +1 on `Γs`, −1 on `Γs̄`, 0 elsewhere, and identically 0 when the
/// two orbits coincide.
#[derive(Clone, Debug)]
pub struct SegmentSign {
    pub segment: HSegment,
    plus: HashSet<HSegment>,
    minus: HashSet<HSegment>,
    self_reverse: bool,
}

impl SegmentSign {
    pub fn new(c: &MedianComplex, s: &HSegment, action: &PermutationAction) -> Result<Self, MedianError> {
        if !c.is_segment(s.ids()) {
            return Err(MedianError::NotSegment(format!("{:?}", s.ids())));
        }
        let generators = halfspace_action(c, action)?;
        let plus = segment_orbit(s, &generators, ORBIT_BUDGET)?;
        let self_reverse = plus.contains(&s.reverse());
        let minus = if self_reverse {
            HashSet::new()
        } else {
            plus.iter().map(HSegment::reverse).collect()
        };
        Ok(SegmentSign {
            segment: s.clone(),
            plus,
            minus,
            self_reverse,
        })
    }

    pub fn ell(&self) -> usize {
        self.segment.len()
    }

    /// Whether `Γs = Γs̄`, in which case `f_s ≡ 0`.
    pub fn is_zero_map(&self) -> bool {
        self.self_reverse
    }

    pub fn orbit(&self) -> impl Iterator<Item = &HSegment> {
        self.plus.iter()
    }

    pub fn eval(&self, t: &HSegment) -> i64 {
        if self.self_reverse {
            0
        } else if self.plus.contains(t) {
            1
        } else if self.minus.contains(t) {
            -1
        } else {
            0
        }
    }
}

/// `f_s(x, y) = Σ_{t ∈ [x,y]_ℋ^(ℓ)} ε_s(t)`, summed over enumerated segments.
#[derive(Clone, Debug)]
pub struct MedianQm {
    complex: Arc<MedianComplex>,
    sign: Arc<SegmentSign>,
}

impl MedianQm {
    pub fn new(complex: Arc<MedianComplex>, sign: Arc<SegmentSign>) -> Self {
        MedianQm { complex, sign }
    }

    pub fn value(&self, x: usize, y: usize) -> i64 {
        if self.sign.is_zero_map() {
            return 0;
        }
        self.complex
            .segments_in_interval(x, y, self.sign.ell())
            .iter()
            .map(|t| self.sign.eval(t))
            .sum()
    }
}

impl ActionQuasimorphism<usize> for MedianQm {
    fn name(&self) -> String {
        format!("f_s{}", self.complex.segment_label(&self.sign.segment))
    }

    fn eval(&self, x: &usize, y: &usize) -> f64 {
        self.value(*x, *y) as f64
    }

    fn is_integral(&self) -> bool {
        true
    }
}

fn image(c: &MedianComplex, edges: impl Iterator<Item = OrientedEdge<usize>>) -> HSegment {
    HSegment(edges.map(|e| c.halfspace_of_edge(e.head, e.tail)).collect())
}

/// `W(a) = ε_s(λ(a))`, where λ sends each edge to its dual halfspace
/// containing the edge's tail.
#[derive(Clone, Debug)]
pub struct MedianWeight {
    complex: Arc<MedianComplex>,
    sign: Arc<SegmentSign>,
    c: Option<usize>,
}

impl MedianWeight {
    pub fn new(complex: Arc<MedianComplex>, sign: Arc<SegmentSign>) -> Self {
        MedianWeight { complex, sign, c: None }
    }

    pub fn with_c(mut self, c: usize) -> Self {
        self.c = Some(c);
        self
    }
}

impl Weight<usize> for MedianWeight {
    fn name(&self) -> String {
        format!("median{}", self.complex.segment_label(&self.sign.segment))
    }

    fn size(&self) -> usize {
        self.sign.ell()
    }

    fn declared_norm(&self) -> f64 {
        1.0
    }

    fn finiteness(&self) -> Option<usize> {
        self.c
    }

    fn is_integral(&self) -> bool {
        true
    }

    fn evaluate(&self, edges: &[OrientedEdge<usize>]) -> f64 {
        self.sign.eval(&image(&self.complex, edges.iter().cloned())) as f64
    }
}

/// Matches fragments of two geodesics with the same segment image, and
/// pairs the remaining fragments in lexicographic order.
#[derive(Clone, Debug)]
pub struct SegmentCorrespondence {
    complex: Arc<MedianComplex>,
}

impl SegmentCorrespondence {
    pub fn new(complex: Arc<MedianComplex>) -> Self {
        SegmentCorrespondence { complex }
    }

    fn lambda(&self, p: &Path<usize>, a: &[usize]) -> HSegment {
        image(&self.complex, a.iter().map(|&i| p.edge(i)))
    }
}

impl FragmentCorrespondence<usize> for SegmentCorrespondence {
    fn name(&self) -> String {
        "segment-image".into()
    }

    fn map(&self, p: &Path<usize>, q: &Path<usize>, ell: usize) -> Vec<FragmentIndices> {
        let q_frags: Vec<FragmentIndices> = fragment_indices(q.len(), ell).collect();
        let by_image: HashMap<HSegment, usize> = q_frags
            .iter()
            .enumerate()
            .map(|(j, b)| (self.lambda(q, b), j))
            .filter(|(img, _)| self.complex.is_segment(img.ids()))
            .collect();
        let mut used = vec![false; q_frags.len()];
        let mut out: Vec<Option<usize>> = fragment_indices(p.len(), ell)
            .map(|a| {
                let img = self.lambda(p, &a);
                let j = by_image.get(&img).copied()?;
                used[j] = true;
                Some(j)
            })
            .collect();
        let mut free = (0..q_frags.len()).filter(|&j| !used[j]);
        for slot in out.iter_mut().filter(|s| s.is_none()) {
            *slot = free.next();
        }
        out.into_iter()
            .map(|j| q_frags[j.expect("fragment counts agree on equal-length paths")].clone())
            .collect()
    }
}

/// A median quasimorphism together with its weight-quasimorphism form.
#[derive(Clone, Debug)]
pub struct MedianInstance {
    pub complex: Arc<MedianComplex>,
    pub sign: Arc<SegmentSign>,
    pub direct: MedianQm,
    pub weight_qm: WeightQuasimorphism<usize>,
    /// The finiteness count observed over all vertex pairs.
    pub empirical_c: usize,
}

/// Geodesics with the segment-image correspondence, of size `ell`.
pub fn median_pair(complex: &Arc<MedianComplex>, ell: usize) -> CoherentPair<usize> {
    CoherentPair::new(
        Arc::new(GeodesicFamily::new(complex.graph().clone())),
        Arc::new(SegmentCorrespondence::new(complex.clone())),
        ell,
    )
}

/// Builds `f_s` both directly and as `f_W`; c is the exhaustive finiteness
/// count over all vertex pairs, raised to at least 2.
pub fn median_instance(complex: Arc<MedianComplex>, s: &HSegment, action: &PermutationAction) -> Result<MedianInstance, MedianError> {
    let sign = Arc::new(SegmentSign::new(&complex, s, action)?);
    let pair = median_pair(&complex, s.len());
    let probe = WeightQuasimorphism::new(Arc::new(MedianWeight::new(complex.clone(), sign.clone())), pair.clone())
        .expect("sizes agree");
    let empirical_c = empirical_finiteness(&probe, &all_pairs(&complex.graph().vertices()));
    let c = empirical_c.max(2);
    let weight = MedianWeight::new(complex.clone(), sign.clone()).with_c(c);
    let weight_qm = WeightQuasimorphism::new(Arc::new(weight), pair).expect("sizes agree");
    Ok(MedianInstance {
        direct: MedianQm::new(complex.clone(), sign.clone()),
        complex,
        sign,
        weight_qm,
        empirical_c,
    })
}

/// Checks that ζ(α, x⃗) is constant over the heads α of every translate and
/// ζ(ω, x⃗) over the tails, for each trailing tuple x⃗.
pub fn nontransverse_check<'a>(
    c: &MedianComplex,
    zeta: &Cochain<usize>,
    orbit: impl IntoIterator<Item = &'a HSegment>,
    rests: &[Vec<usize>],
) -> Option<String> {
    for t in orbit {
        for (kind, ends) in [("heads", c.heads(t)), ("tails", c.tails(t))] {
            for rest in rests {
                let value = |v: usize| {
                    let mut args = vec![v];
                    args.extend_from_slice(rest);
                    zeta.eval(&args)
                };
                let first = value(ends[0]);
                if let Some(&other) = ends[1..].iter().find(|&&v| value(v) != first) {
                    return Some(format!(
                        "{kind} {} and {} of {} differ with trailing {rest:?}",
                        c.graph().name(ends[0]),
                        c.graph().name(other),
                        c.segment_label(t)
                    ));
                }
            }
        }
    }
    None
}

/// Outcome of checking that non-transversality implies Φ-stability.
#[derive(Clone, Debug, Serialize)]
pub struct NontransverseReport {
    pub nontransverse: bool,
    pub stable: bool,
    /// `!nontransverse || stable`.
    pub implication_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nontransverse_witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability_witness: Option<String>,
}

/// Runs the non-transversality check against `Γs` and the Φ-stability check
/// on the same vertex pairs and trailing tuples.
pub fn nontransverse_implies_stable(
    instance: &MedianInstance,
    zeta: &Cochain<usize>,
    pairs: &[(usize, usize)],
    rests: &[Vec<usize>],
) -> NontransverseReport {
    let nt = nontransverse_check(&instance.complex, zeta, instance.sign.orbit(), rests);
    let st = phi_stability_check(zeta, &instance.weight_qm, pairs, rests);
    NontransverseReport {
        nontransverse: nt.is_none(),
        stable: st.stable,
        implication_holds: nt.is_some() || st.stable,
        nontransverse_witness: nt,
        stability_witness: st.witness,
    }
}
