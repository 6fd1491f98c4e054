//! Free groups of finite rank as reduced words, balls, and the Cayley tree.
//!
//! Letters are stored as indices: generator `k` is `2k`, its inverse `2k + 1`,
//! so inversion of a letter is `l ^ 1`. In ASCII a generator is a lowercase
//! letter and its inverse the matching uppercase letter (`a` ↔ `A`). The
//! empty word prints as `e`; both `""` and `"e"` parse as the identity.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;
use thiserror::Error;

use crate::coherent::{exhaustive_witness, PathFamily, QmpWitness};
use crate::graph::{Graph, GraphAction, Path};

/// Largest supported rank; generators are `a`..`d` so that `e` stays free for
/// the identity.
pub const MAX_RANK: u8 = 4;

/// Default cap on ball radius (|B₈(F₂)| = 13121).
pub const DEFAULT_MAX_RADIUS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown symbol {symbol:?} for an alphabet of rank {rank}")]
    UnknownSymbol { symbol: char, rank: u8 },
    #[error("rank must be between 1 and {MAX_RANK}, got {0}")]
    RankOutOfRange(u8),
    #[error("ball radius {radius} exceeds the configured cap {cap}")]
    RadiusTooLarge { radius: usize, cap: usize },
    #[error("word {word} uses letters outside the rank-{rank} alphabet")]
    AlphabetMismatch { word: String, rank: u8 },
}

pub type Letter = u8;

#[inline]
pub fn inverse_letter(l: Letter) -> Letter {
    l ^ 1
}

pub fn letter_to_char(l: Letter) -> char {
    let base = b'a' + l / 2;
    if l.is_multiple_of(2) {
        base as char
    } else {
        base.to_ascii_uppercase() as char
    }
}

fn char_to_letter(c: char) -> Option<Letter> {
    if !c.is_ascii_alphabetic() {
        return None;
    }
    let lower = c.to_ascii_lowercase() as u8;
    if !(b'a'..b'a' + MAX_RANK).contains(&lower) {
        return None;
    }
    let gen = lower - b'a';
    Some(2 * gen + u8::from(c.is_ascii_uppercase()))
}

/// An element of a free group in reduced normal form.
///
/// Ordered shortlex (length first, then letter order `a < A < b < B < …`), so
/// every enumeration downstream is deterministic.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ReducedWord {
    letters: SmallVec<[Letter; 16]>,
}

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord::default()
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce(raw: &[Letter]) -> Self {
        let mut letters: SmallVec<[Letter; 16]> = SmallVec::with_capacity(raw.len());
        for &l in raw {
            if letters.last() == Some(&inverse_letter(l)) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        ReducedWord { letters }
    }

    pub fn letter(l: Letter) -> Self {
        ReducedWord {
            letters: SmallVec::from_slice(&[l]),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(raw: &[Letter]) -> bool {
        raw.windows(2).all(|w| w[1] != inverse_letter(w[0]))
    }

    pub fn mul(&self, other: &ReducedWord) -> ReducedWord {
        let mut cancel = 0;
        let a = &self.letters;
        let b = &other.letters;
        while cancel < a.len() && cancel < b.len() && a[a.len() - 1 - cancel] == inverse_letter(b[cancel]) {
            cancel += 1;
        }
        let mut letters: SmallVec<[Letter; 16]> = SmallVec::with_capacity(a.len() + b.len() - 2 * cancel);
        letters.extend_from_slice(&a[..a.len() - cancel]);
        letters.extend_from_slice(&b[cancel..]);
        ReducedWord { letters }
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord {
            letters: self.letters.iter().rev().map(|&l| inverse_letter(l)).collect(),
        }
    }

    /// `self⁻¹ · other`, the label of the tree path from `self` to `other`.
    pub fn left_quotient(&self, other: &ReducedWord) -> ReducedWord {
        self.inverse().mul(other)
    }

    pub fn prefix(&self, k: usize) -> ReducedWord {
        ReducedWord {
            letters: SmallVec::from_slice(&self.letters[..k]),
        }
    }

    pub fn common_prefix_len(&self, other: &ReducedWord) -> usize {
        self.letters
            .iter()
            .zip(other.letters.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Cayley-tree distance, `|x⁻¹y|`.
    pub fn distance(&self, other: &ReducedWord) -> usize {
        self.len() + other.len() - 2 * self.common_prefix_len(other)
    }

    /// Largest generator index used plus one, or 0 for the identity.
    pub fn min_rank(&self) -> u8 {
        self.letters.iter().map(|&l| l / 2 + 1).max().unwrap_or(0)
    }

    /// Plain ASCII spelling; the identity spells as the empty string.
    pub fn to_ascii(&self) -> String {
        self.letters.iter().map(|&l| letter_to_char(l)).collect()
    }

    /// Parses case-encoded ASCII over the largest supported alphabet, reducing
    /// the input. Use [`Alphabet::parse`] to restrict the rank.
    pub fn parse_any(s: &str) -> Result<ReducedWord, WordError> {
        Alphabet::new(MAX_RANK)?.parse(s)
    }
}

impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            f.write_str("e")
        } else {
            f.write_str(&self.to_ascii())
        }
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ReducedWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ReducedWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        ReducedWord::parse_any(&s).map_err(serde::de::Error::custom)
    }
}

/// The symmetric generating set `S ∪ S⁻¹` of a free group of rank `rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alphabet {
    rank: u8,
    max_radius: usize,
}

impl Alphabet {
    pub fn new(rank: u8) -> Result<Self, WordError> {
        if rank == 0 || rank > MAX_RANK {
            return Err(WordError::RankOutOfRange(rank));
        }
        Ok(Alphabet {
            rank,
            max_radius: DEFAULT_MAX_RADIUS,
        })
    }

    pub fn with_max_radius(mut self, max_radius: usize) -> Self {
        self.max_radius = max_radius;
        self
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn max_radius(&self) -> usize {
        self.max_radius
    }

    /// Letters in their total order `a, A, b, B, …`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..2 * self.rank
    }

    pub fn contains(&self, w: &ReducedWord) -> bool {
        w.min_rank() <= self.rank
    }

    pub fn parse_letters(&self, s: &str) -> Result<Vec<Letter>, WordError> {
        if s == "e" {
            return Ok(Vec::new());
        }
        s.chars()
            .map(|c| {
                char_to_letter(c)
                    .filter(|l| l / 2 < self.rank)
                    .ok_or(WordError::UnknownSymbol { symbol: c, rank: self.rank })
            })
            .collect()
    }

    /// Parses and freely reduces a case-encoded word.
    pub fn parse(&self, s: &str) -> Result<ReducedWord, WordError> {
        Ok(ReducedWord::reduce(&self.parse_letters(s)?))
    }

    pub fn reduce(&self, raw: &[Letter]) -> Result<ReducedWord, WordError> {
        if let Some(&bad) = raw.iter().find(|&&l| l >= 2 * self.rank) {
            return Err(WordError::UnknownSymbol {
                symbol: letter_to_char(bad),
                rank: self.rank,
            });
        }
        Ok(ReducedWord::reduce(raw))
    }

    fn check(&self, w: &ReducedWord) -> Result<(), WordError> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(WordError::AlphabetMismatch {
                word: w.to_string(),
                rank: self.rank,
            })
        }
    }

    pub fn multiply(&self, u: &ReducedWord, v: &ReducedWord) -> Result<ReducedWord, WordError> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.mul(v))
    }

    pub fn inverse(&self, u: &ReducedWord) -> Result<ReducedWord, WordError> {
        self.check(u)?;
        Ok(u.inverse())
    }

    /// All reduced words of length exactly `r`, in shortlex order.
    pub fn sphere(&self, r: usize) -> Result<Vec<ReducedWord>, WordError> {
        self.check_radius(r)?;
        let mut layer = vec![ReducedWord::identity()];
        for _ in 0..r {
            layer = self.extend_layer(&layer);
        }
        Ok(layer)
    }

    /// All reduced words of length at most `r`, in shortlex order.
    pub fn ball(&self, r: usize) -> Result<Vec<ReducedWord>, WordError> {
        self.check_radius(r)?;
        let mut out = vec![ReducedWord::identity()];
        let mut layer = out.clone();
        for _ in 0..r {
            layer = self.extend_layer(&layer);
            out.extend(layer.iter().cloned());
        }
        Ok(out)
    }

    fn check_radius(&self, r: usize) -> Result<(), WordError> {
        if r > self.max_radius {
            Err(WordError::RadiusTooLarge {
                radius: r,
                cap: self.max_radius,
            })
        } else {
            Ok(())
        }
    }

    fn extend_layer(&self, layer: &[ReducedWord]) -> Vec<ReducedWord> {
        let mut next = Vec::with_capacity(layer.len() * (2 * self.rank as usize));
        for w in layer {
            for l in self.letters() {
                if w.letters.last() == Some(&inverse_letter(l)) {
                    continue;
                }
                let mut letters = w.letters.clone();
                letters.push(l);
                next.push(ReducedWord { letters });
            }
        }
        next
    }
}

/// The unique path from `x` to `y` in the Cayley tree: up from `x` to the
/// longest common prefix, then down to `y`.
pub fn tree_geodesic(x: &ReducedWord, y: &ReducedWord) -> Path<ReducedWord> {
    let k = x.common_prefix_len(y);
    let mut vertices = Vec::with_capacity(x.len() + y.len() + 1 - 2 * k);
    for i in (k..=x.len()).rev() {
        vertices.push(x.prefix(i));
    }
    for i in k + 1..=y.len() {
        vertices.push(y.prefix(i));
    }
    Path::from_distinct(vertices)
}

/// Median of three vertices of the Cayley tree: the longest of the three
/// pairwise common prefixes.
pub fn tree_median(x: &ReducedWord, y: &ReducedWord, z: &ReducedWord) -> ReducedWord {
    [
        (x.common_prefix_len(y), x),
        (y.common_prefix_len(z), y),
        (x.common_prefix_len(z), x),
    ]
    .into_iter()
    .max_by_key(|(k, _)| *k)
    .map(|(k, w)| w.prefix(k))
    .unwrap()
}

/// The Cayley tree `Cayl(F, S)` as a lazily generated graph together with its
/// geodesic path family.
///
/// The declared quasi-median constant is 1, the value used for geodesic
/// families of median graphs; [`crate::coherent::verify_qmp`] confirms that
/// 0 already suffices on a tree.
#[derive(Clone, Copy, Debug)]
pub struct CayleyTree {
    alphabet: Alphabet,
    declared_r: usize,
}

impl CayleyTree {
    pub fn new(alphabet: Alphabet) -> Self {
        CayleyTree {
            alphabet,
            declared_r: 1,
        }
    }

    pub fn with_declared_r(mut self, r: usize) -> Self {
        self.declared_r = r;
        self
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }
}

impl Graph for CayleyTree {
    type Vertex = ReducedWord;

    fn is_adjacent(&self, u: &ReducedWord, v: &ReducedWord) -> bool {
        u.distance(v) == 1 && self.alphabet.contains(u) && self.alphabet.contains(v)
    }
}

impl PathFamily<ReducedWord> for CayleyTree {
    fn name(&self) -> String {
        format!("tree-geodesics(F{})", self.alphabet.rank)
    }

    fn paths(&self, x: &ReducedWord, y: &ReducedWord) -> Vec<Path<ReducedWord>> {
        vec![tree_geodesic(x, y)]
    }

    fn first_path(&self, x: &ReducedWord, y: &ReducedWord) -> Option<Path<ReducedWord>> {
        Some(tree_geodesic(x, y))
    }

    fn contains(&self, p: &Path<ReducedWord>) -> bool {
        *p == tree_geodesic(p.start(), p.end())
    }

    fn declared_r(&self) -> usize {
        self.declared_r
    }

    fn witness(
        &self,
        x: &ReducedWord,
        y: &ReducedWord,
        z: &ReducedWord,
        r_bound: usize,
    ) -> Option<QmpWitness<ReducedWord>> {
        let m = tree_median(x, y, z);
        let trivial = Path::trivial(m.clone());
        let w = QmpWitness {
            centers: [m.clone(), m.clone(), m.clone()],
            s_x: tree_geodesic(x, &m),
            s_y: tree_geodesic(y, &m),
            s_z: tree_geodesic(z, &m),
            r: [trivial.clone(), trivial.clone(), trivial],
            p_xy: tree_geodesic(x, y),
            p_yz: tree_geodesic(y, z),
            p_xz: tree_geodesic(x, z),
        };
        if w.validate(self, r_bound).is_ok() {
            Some(w)
        } else {
            exhaustive_witness(self, x, y, z, r_bound, usize::MAX)
        }
    }
}

/// Left translation of `F` on its Cayley tree, generated by the letters
/// (inverses included).
#[derive(Clone, Copy, Debug)]
pub struct FreeGroupTranslation {
    alphabet: Alphabet,
}

impl FreeGroupTranslation {
    pub fn new(alphabet: Alphabet) -> Self {
        FreeGroupTranslation { alphabet }
    }

    pub fn generator_word(&self, i: usize) -> ReducedWord {
        ReducedWord::letter(i as Letter)
    }
}

impl GraphAction<ReducedWord> for FreeGroupTranslation {
    fn generator_count(&self) -> usize {
        2 * self.alphabet.rank as usize
    }

    fn generator_name(&self, i: usize) -> String {
        letter_to_char(i as Letter).to_string()
    }

    fn apply(&self, i: usize, v: &ReducedWord) -> ReducedWord {
        self.generator_word(i).mul(v)
    }
}
