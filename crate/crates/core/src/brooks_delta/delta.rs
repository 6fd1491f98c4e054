use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cochain::GroupQuasimorphism;
use crate::coherent::{CoherentPair, PathFamily, QmpWitness};
use crate::graph::{Fragment, OrientedEdge, Path};
use crate::report::{CheckEntry, Status};
use crate::weights::{Weight, WeightError, WeightQuasimorphism};
use crate::words::{Alphabet, ReducedWord, WordError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeltaError {
    #[error("Δ({word}) = {pieces} violates {axiom}")]
    Axiom {
        axiom: &'static str,
        word: String,
        pieces: String,
    },
    #[error("piece weight is not alternating: λ({piece}) = {value} but λ({inverse}) = {inverse_value}")]
    NotAlternating {
        piece: String,
        value: f64,
        inverse: String,
        inverse_value: f64,
    },
    #[error("the identity is not a piece")]
    IdentityPiece,
    #[error("piece weight JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

fn show(pieces: &[ReducedWord]) -> String {
    let inner: Vec<String> = pieces.iter().map(ToString::to_string).collect();
    format!("({})", inner.join(", "))
}

/// `s⁻¹ = (a_n⁻¹, …, a_1⁻¹)`.
pub fn inverse_sequence(s: &[ReducedWord]) -> Vec<ReducedWord> {
    s.iter().rev().map(ReducedWord::inverse).collect()
}

/// Length of the longest common prefix of two piece sequences.
pub fn common_sequence_len(s: &[ReducedWord], t: &[ReducedWord]) -> usize {
    s.iter().zip(t).take_while(|(a, b)| a == b).count()
}

/// A map `Δ: F → 𝒫*` into a symmetric set of pieces.
pub trait DeltaDecomposition: Send + Sync {
    fn name(&self) -> String;

    fn is_piece(&self, w: &ReducedWord) -> bool;

    fn decompose(&self, g: &ReducedWord) -> Vec<ReducedWord>;

    /// The bound on r-parts of Δ-triangles this decomposition is declared to
    /// satisfy.
    fn declared_r(&self) -> usize;

    /// Whether the triangle condition is known to hold globally, rather than
    /// only observed on finite balls.
    fn is_proven(&self) -> bool {
        true
    }
}

/// Pieces `S ∪ S⁻¹`; Δ is the reduced spelling.
#[derive(Clone, Copy, Debug, Default)]
pub struct LetterDecomposition;

impl DeltaDecomposition for LetterDecomposition {
    fn name(&self) -> String {
        "letters".into()
    }

    fn is_piece(&self, w: &ReducedWord) -> bool {
        w.len() == 1
    }

    fn decompose(&self, g: &ReducedWord) -> Vec<ReducedWord> {
        g.letters().iter().map(|&l| ReducedWord::letter(l)).collect()
    }

    fn declared_r(&self) -> usize {
        0
    }
}

/// Pieces are nonzero powers of a single generator; Δ splits the spelling
/// into maximal such powers. Whether the triangle condition holds globally is
/// not known, so it is reported as a candidate.
#[derive(Clone, Copy, Debug, Default)]
pub struct SyllableDecomposition;

impl DeltaDecomposition for SyllableDecomposition {
    fn name(&self) -> String {
        "syllables (candidate)".into()
    }

    fn is_piece(&self, w: &ReducedWord) -> bool {
        !w.is_identity() && w.letters().iter().all(|&l| l == w.letters()[0])
    }

    fn decompose(&self, g: &ReducedWord) -> Vec<ReducedWord> {
        g.letters()
            .chunk_by(|a, b| a == b)
            .map(ReducedWord::reduce)
            .collect()
    }

    fn declared_r(&self) -> usize {
        1
    }

    fn is_proven(&self) -> bool {
        false
    }
}

/// Letters, except that every word of length two is a single piece. This
/// keeps concatenation and inversion but breaks the sub-product condition,
/// e.g. `Δ(abc) = (a, b, c)` while `Δ(ab) = (ab)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct BrokenDecomposition;

impl DeltaDecomposition for BrokenDecomposition {
    fn name(&self) -> String {
        "broken".into()
    }

    fn is_piece(&self, w: &ReducedWord) -> bool {
        matches!(w.len(), 1 | 2)
    }

    fn decompose(&self, g: &ReducedWord) -> Vec<ReducedWord> {
        if g.len() == 2 {
            vec![g.clone()]
        } else {
            LetterDecomposition.decompose(g)
        }
    }

    fn declared_r(&self) -> usize {
        0
    }

    fn is_proven(&self) -> bool {
        false
    }
}

/// Looks up a decomposition by name: `letters`, `syllables` or `broken`.
pub fn decomposition_by_name(name: &str) -> Option<Arc<dyn DeltaDecomposition>> {
    match name {
        "letters" => Some(Arc::new(LetterDecomposition)),
        "syllables" => Some(Arc::new(SyllableDecomposition)),
        "broken" => Some(Arc::new(BrokenDecomposition)),
        _ => None,
    }
}

/// Checks that Δ(g) consists of pieces whose concatenation is the reduced
/// spelling of `g` without cancellation.
pub fn check_concatenation(delta: &dyn DeltaDecomposition, g: &ReducedWord) -> Result<Vec<ReducedWord>, DeltaError> {
    let pieces = delta.decompose(g);
    let raw: Vec<u8> = pieces.iter().flat_map(|p| p.letters().iter().copied()).collect();
    let ok = pieces.iter().all(|p| !p.is_identity() && delta.is_piece(p)) && raw == g.letters();
    if ok {
        Ok(pieces)
    } else {
        Err(DeltaError::Axiom {
            axiom: "concatenation",
            word: g.to_string(),
            pieces: show(&pieces),
        })
    }
}

/// The c- and r-parts of the Δ-triangle of `(g, h)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaTriangle {
    pub c: [Vec<ReducedWord>; 3],
    pub r: [Vec<ReducedWord>; 3],
}

impl DeltaTriangle {
    pub fn max_r(&self) -> usize {
        self.r.iter().map(Vec::len).max().unwrap()
    }
}

fn split(seq: &[ReducedWord], front: usize, back: usize) -> Option<Vec<ReducedWord>> {
    (front + back <= seq.len()).then(|| seq[front..seq.len() - back].to_vec())
}

/// Computes the Δ-triangle of `(g, h)` from common sequences and checks the
/// three re-assemblies `Δ(g) = c₁⁻¹r₁c₂`, `Δ(h) = c₂⁻¹r₂c₃`,
/// `Δ(gh) = c₁⁻¹r₃⁻¹c₃`.
pub fn delta_triangle(delta: &dyn DeltaDecomposition, g: &ReducedWord, h: &ReducedWord) -> Result<DeltaTriangle, String> {
    let gh = g.mul(h);
    let (dg, dh, dgh) = (delta.decompose(g), delta.decompose(h), delta.decompose(&gh));
    let (dgi, dhi, dghi) = (
        delta.decompose(&g.inverse()),
        delta.decompose(&h.inverse()),
        delta.decompose(&gh.inverse()),
    );
    let k1 = common_sequence_len(&dg, &dgh);
    let k2 = common_sequence_len(&dgi, &dh);
    let k3 = common_sequence_len(&dhi, &dghi);
    let c1 = inverse_sequence(&dg[..k1]);
    let c2 = inverse_sequence(&dh[..k2]);
    let c3 = inverse_sequence(&dhi[..k3]);
    let fail = |what: &str| format!("Δ-triangle of ({g}, {h}): {what}");
    let r1 = split(&dg, k1, k2).ok_or_else(|| fail("c₁ and c₂ overlap in Δ(g)"))?;
    let r2 = split(&dh, k2, k3).ok_or_else(|| fail("c₂ and c₃ overlap in Δ(h)"))?;
    let r3 = inverse_sequence(&split(&dgh, k1, k3).ok_or_else(|| fail("c₁ and c₃ overlap in Δ(gh)"))?);
    let assemble = |parts: [&[ReducedWord]; 3]| parts.concat();
    let checks = [
        ("Δ(g) ≠ c₁⁻¹r₁c₂", &dg, assemble([&dg[..k1], &r1, &c2])),
        ("Δ(h) ≠ c₂⁻¹r₂c₃", &dh, assemble([&dh[..k2], &r2, &c3])),
        ("Δ(gh) ≠ c₁⁻¹r₃⁻¹c₃", &dgh, assemble([&dg[..k1], &inverse_sequence(&r3), &c3])),
    ];
    for (what, lhs, rhs) in checks {
        if *lhs != rhs {
            return Err(fail(what));
        }
    }
    Ok(DeltaTriangle {
        c: [c1, c2, c3],
        r: [r1, r2, r3],
    })
}

/// Per-axiom results of [`verify_delta_axioms`].
#[derive(Clone, Debug, Serialize)]
pub struct DeltaReport {
    pub decomposition: String,
    pub proven: bool,
    pub words_checked: usize,
    pub pairs_checked: usize,
    pub declared_r: usize,
    pub empirical_r: usize,
    pub entries: Vec<CheckEntry>,
}

impl DeltaReport {
    pub fn status(&self) -> Status {
        Status::from_bool(self.entries.iter().all(CheckEntry::is_pass))
    }
}

/// Checks concatenation, inversion and sub-product closure for every word of
/// `ball`, and the triangle condition for every pair; the largest r-part seen
/// is the empirical R. The triangle entry fails when a triangle cannot be
/// formed or its r-parts exceed the declared R.
pub fn verify_delta_axioms(delta: &dyn DeltaDecomposition, ball: &[ReducedWord]) -> DeltaReport {
    let first = |f: &(dyn Fn(&ReducedWord) -> Option<String> + Sync)| ball.par_iter().find_map_first(f);

    let concatenation = first(&|g| check_concatenation(delta, g).err().map(|e| e.to_string()));
    let inversion = first(&|g| {
        let lhs = delta.decompose(&g.inverse());
        let rhs = inverse_sequence(&delta.decompose(g));
        (lhs != rhs).then(|| format!("Δ({}) = {} but Δ({g})⁻¹ = {}", g.inverse(), show(&lhs), show(&rhs)))
    });
    let subproduct = first(&|g| {
        let pieces = delta.decompose(g);
        for i in 0..pieces.len() {
            let mut product = ReducedWord::identity();
            for j in i..pieces.len() {
                product = product.mul(&pieces[j]);
                let d = delta.decompose(&product);
                if d != pieces[i..=j] {
                    return Some(format!(
                        "Δ({g}) = {}, but Δ({product}) = {}",
                        show(&pieces),
                        show(&d)
                    ));
                }
            }
        }
        None
    });

    let declared = delta.declared_r();
    let per_g: Vec<(usize, Option<String>)> = ball
        .par_iter()
        .map(|g| {
            let mut worst = 0;
            for h in ball {
                match delta_triangle(delta, g, h) {
                    Ok(t) => {
                        let r = t.max_r();
                        if r > declared {
                            return (worst.max(r), Some(format!("Δ-triangle of ({g}, {h}) has r-part of length {r}")));
                        }
                        worst = worst.max(r);
                    }
                    Err(e) => return (worst, Some(e)),
                }
            }
            (worst, None)
        })
        .collect();
    let empirical_r = per_g.iter().map(|(r, _)| *r).max().unwrap_or(0);
    let triangle = per_g.into_iter().find_map(|(_, w)| w);

    let entries = vec![
        CheckEntry::from_witness("concatenation", concatenation),
        CheckEntry::from_witness("inversion", inversion),
        CheckEntry::from_witness("sub-product", subproduct),
        CheckEntry::from_witness("triangle", triangle),
    ];
    DeltaReport {
        decomposition: delta.name(),
        proven: delta.is_proven(),
        words_checked: ball.len(),
        pairs_checked: ball.len() * ball.len(),
        declared_r: declared,
        empirical_r,
        entries,
    }
}

/// `P(x, y) = {x, xs₁, xs₁s₂, …}` for `Δ(x⁻¹y) = (s₁, …, sₙ)`, a path family
/// in the Cayley graph with respect to the pieces.
#[derive(Clone)]
pub struct DeltaPaths {
    delta: Arc<dyn DeltaDecomposition>,
}

impl std::fmt::Debug for DeltaPaths {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DeltaPaths({})", self.delta.name())
    }
}

impl DeltaPaths {
    pub fn new(delta: Arc<dyn DeltaDecomposition>) -> Self {
        DeltaPaths { delta }
    }

    pub fn decomposition(&self) -> &dyn DeltaDecomposition {
        self.delta.as_ref()
    }

    pub fn path(&self, x: &ReducedWord, y: &ReducedWord) -> Result<Path<ReducedWord>, DeltaError> {
        let pieces = check_concatenation(self.delta.as_ref(), &x.left_quotient(y))?;
        let mut vertices = Vec::with_capacity(pieces.len() + 1);
        vertices.push(x.clone());
        for s in &pieces {
            let next = vertices.last().unwrap().mul(s);
            vertices.push(next);
        }
        Ok(Path::new(vertices).expect("prefixes of a reduced concatenation are distinct"))
    }

    fn prefix_path(x: &ReducedWord, pieces: &[ReducedWord]) -> Path<ReducedWord> {
        let mut vertices = vec![x.clone()];
        for s in pieces {
            let next = vertices.last().unwrap().mul(s);
            vertices.push(next);
        }
        Path::new(vertices).expect("prefixes of a reduced concatenation are distinct")
    }
}

impl PathFamily<ReducedWord> for DeltaPaths {
    fn name(&self) -> String {
        format!("delta-paths({})", self.delta.name())
    }

    /// Empty when Δ violates the concatenation axiom at `x⁻¹y`.
    fn paths(&self, x: &ReducedWord, y: &ReducedWord) -> Vec<Path<ReducedWord>> {
        self.path(x, y).into_iter().collect()
    }

    fn declared_r(&self) -> usize {
        self.delta.declared_r()
    }

    /// Read off the Δ-triangle of `(x⁻¹y, y⁻¹z)`.
    fn witness(&self, x: &ReducedWord, y: &ReducedWord, z: &ReducedWord, r_bound: usize) -> Option<QmpWitness<ReducedWord>> {
        let t = delta_triangle(self.delta.as_ref(), &x.left_quotient(y), &y.left_quotient(z)).ok()?;
        if t.max_r() > r_bound {
            return None;
        }
        let [c1, c2, c3] = &t.c;
        let [r1, r2, r3] = &t.r;
        let s_x = Self::prefix_path(x, &inverse_sequence(c1));
        let s_y = Self::prefix_path(y, &inverse_sequence(c2));
        let s_z = Self::prefix_path(z, &inverse_sequence(c3));
        let (m_x, m_y, m_z) = (s_x.end().clone(), s_y.end().clone(), s_z.end().clone());
        let w = QmpWitness {
            r: [
                Self::prefix_path(&m_x, r1),
                Self::prefix_path(&m_y, r2),
                Self::prefix_path(&m_x, &inverse_sequence(r3)),
            ],
            centers: [m_x, m_y, m_z],
            p_xy: self.path(x, y).ok()?,
            p_yz: self.path(y, z).ok()?,
            p_xz: self.path(x, z).ok()?,
            s_x,
            s_y,
            s_z,
        };
        w.validate(self, r_bound).ok()?;
        Some(w)
    }
}

/// An alternating bounded map λ on pieces; unlisted pieces have value 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PieceWeight {
    values: BTreeMap<ReducedWord, f64>,
}

impl PieceWeight {
    pub fn zero() -> Self {
        PieceWeight { values: BTreeMap::new() }
    }

    /// Completes `entries` alternatingly: λ(p⁻¹) = −λ(p) is filled in when
    /// missing and must agree when given.
    pub fn new(entries: impl IntoIterator<Item = (ReducedWord, f64)>) -> Result<Self, DeltaError> {
        let mut values: BTreeMap<ReducedWord, f64> = BTreeMap::new();
        for (p, v) in entries {
            if p.is_identity() {
                return Err(DeltaError::IdentityPiece);
            }
            let inverse = p.inverse();
            // The stored value of p⁻¹, whichever of p and p⁻¹ was given earlier.
            let known = values.get(&inverse).copied().or_else(|| values.get(&p).map(|x| -x));
            if let Some(inverse_value) = known.filter(|&x| x != -v) {
                return Err(DeltaError::NotAlternating {
                    piece: p.to_string(),
                    value: v,
                    inverse: inverse.to_string(),
                    inverse_value,
                });
            }
            values.insert(p, v);
            values.insert(inverse, -v);
        }
        Ok(PieceWeight { values })
    }

    /// Parses `{"piece": value, …}` with uppercase letters for inverses.
    pub fn from_json(alphabet: &Alphabet, text: &str) -> Result<Self, DeltaError> {
        let raw: BTreeMap<String, f64> = serde_json::from_str(text).map_err(|e| DeltaError::Json(e.to_string()))?;
        let mut entries = Vec::with_capacity(raw.len());
        for (k, v) in raw {
            entries.push((alphabet.parse(&k)?, v));
        }
        PieceWeight::new(entries)
    }

    pub fn value(&self, piece: &ReducedWord) -> f64 {
        self.values.get(piece).copied().unwrap_or(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.values.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_integral(&self) -> bool {
        self.values.values().all(|v| v.fract() == 0.0)
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .values
            .iter()
            .filter(|(_, v)| **v > 0.0)
            .map(|(k, v)| format!("{k}:{v}"))
            .collect();
        format!("λ{{{}}}", parts.join(","))
    }
}

/// The 1-weight `W(e) = λ(α(e)⁻¹ω(e))`.
#[derive(Clone, Debug)]
pub struct DeltaWeight {
    lambda: PieceWeight,
}

impl DeltaWeight {
    pub fn new(lambda: PieceWeight) -> Self {
        DeltaWeight { lambda }
    }
}

impl Weight<ReducedWord> for DeltaWeight {
    fn name(&self) -> String {
        format!("delta({})", self.lambda.label())
    }

    fn size(&self) -> usize {
        1
    }

    fn declared_norm(&self) -> f64 {
        self.lambda.norm()
    }

    /// 1-fragments hold no vertex in their interior, so the smallest
    /// admissible constant works.
    fn finiteness(&self) -> Option<usize> {
        Some(2)
    }

    fn is_integral(&self) -> bool {
        self.lambda.is_integral()
    }

    fn evaluate(&self, edges: &[OrientedEdge<ReducedWord>]) -> f64 {
        self.lambda.value(&edges[0].head.left_quotient(&edges[0].tail))
    }

    fn on_fragment(&self, a: &Fragment<'_, ReducedWord>) -> f64 {
        self.lambda.value(&a.head().left_quotient(a.tail()))
    }
}

/// `φ_{λ,Δ}(g) = Σ λ(gᵢ)` over `Δ(g) = (g₁, …, gₙ)`.
pub fn delta_group_qm(lambda: &PieceWeight, delta: Arc<dyn DeltaDecomposition>) -> GroupQuasimorphism {
    let l = lambda.clone();
    let label = format!("φ[{}, {}]", lambda.label(), delta.name());
    GroupQuasimorphism::new(label, lambda.is_integral(), None, move |g| {
        delta.decompose(g).iter().map(|p| l.value(p)).sum()
    })
}

/// The weight quasimorphism `f_{λ,Δ}` of the 1-weight on the Δ-path family.
pub fn delta_qm(
    lambda: &PieceWeight,
    delta: Arc<dyn DeltaDecomposition>,
) -> Result<WeightQuasimorphism<ReducedWord>, WeightError> {
    let pair = CoherentPair::with_index_bijections(Arc::new(DeltaPaths::new(delta)), 1);
    WeightQuasimorphism::new(Arc::new(DeltaWeight::new(lambda.clone())), pair)
}
