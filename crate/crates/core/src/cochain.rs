//! Invariant cochains as closed evaluators, with coboundary, cup product,
//! hat-lifts of group quasimorphisms and orbit pullbacks.
//!
//! A degree-n cochain is a function of n+1 vertices. Cochains are never
//! tabulated; each constructor builds a closure from invariant ingredients
//! and records how its invariance and norm are known.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphAction, Vertex};
use crate::weights::ActionQuasimorphism;
use crate::words::{Alphabet, ReducedWord, WordError};

#[derive(Debug, Error)]
pub enum CochainError {
    #[error("invalid cochain table: {0}")]
    Json(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("table row {0} has {1} entries, expected {2}")]
    Arity(usize, usize, usize),
    #[error("table rows disagree at the normalised tuple {0}")]
    Conflict(String),
    #[error("table is empty")]
    Empty,
}

/// How invariance of a cochain is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariance {
    /// Built only from invariant ingredients.
    ByConstruction,
    /// Checked on samples only.
    Sampled,
    /// Extended from a finite table by invariance, zero off the table.
    Partial,
}

/// What is known about `‖f‖∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormInfo {
    /// A proven upper bound.
    Exact(f64),
    Unknown,
}

impl NormInfo {
    fn map2(self, other: NormInfo, f: impl Fn(f64, f64) -> f64) -> NormInfo {
        match (self, other) {
            (NormInfo::Exact(a), NormInfo::Exact(b)) => NormInfo::Exact(f(a, b)),
            _ => NormInfo::Unknown,
        }
    }

    pub fn bound(self) -> Option<f64> {
        match self {
            NormInfo::Exact(b) => Some(b),
            NormInfo::Unknown => None,
        }
    }
}

type Evaluator<V> = dyn Fn(&[V]) -> f64 + Send + Sync;

/// A degree-n cochain: a function of n+1 vertices.
#[derive(Clone)]
pub struct Cochain<V> {
    degree: usize,
    label: String,
    integral: bool,
    invariance: Invariance,
    norm: NormInfo,
    eval: Arc<Evaluator<V>>,
}

impl<V> fmt::Debug for Cochain<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cochain")
            .field("degree", &self.degree)
            .field("label", &self.label)
            .field("integral", &self.integral)
            .field("invariance", &self.invariance)
            .field("norm", &self.norm)
            .finish()
    }
}

impl<V: Vertex> Cochain<V> {
    pub fn new(
        degree: usize,
        label: impl Into<String>,
        integral: bool,
        invariance: Invariance,
        norm: NormInfo,
        eval: impl Fn(&[V]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Cochain {
            degree,
            label: label.into(),
            integral,
            invariance,
            norm,
            eval: Arc::new(eval),
        }
    }

    pub fn zero(degree: usize) -> Self {
        Cochain::constant(degree, 0.0)
    }

    pub fn constant(degree: usize, c: f64) -> Self {
        Cochain::new(
            degree,
            format!("{c}"),
            c.fract() == 0.0,
            Invariance::ByConstruction,
            NormInfo::Exact(c.abs()),
            move |_| c,
        )
    }

    /// The degree-1 cochain `(x, y) ↦ f(x, y)`.
    pub fn from_quasimorphism(f: Arc<dyn ActionQuasimorphism<V>>) -> Self {
        let label = f.name();
        let integral = f.is_integral();
        Cochain::new(1, label, integral, Invariance::ByConstruction, NormInfo::Unknown, move |s| {
            f.eval(&s[0], &s[1])
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn invariance(&self) -> Invariance {
        self.invariance
    }

    pub fn norm(&self) -> NormInfo {
        self.norm
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_norm(mut self, norm: NormInfo) -> Self {
        self.norm = norm;
        self
    }

    pub fn with_invariance(mut self, invariance: Invariance) -> Self {
        self.invariance = invariance;
        self
    }

    /// Evaluates on exactly `degree + 1` vertices.
    pub fn eval(&self, args: &[V]) -> f64 {
        assert_eq!(
            args.len(),
            self.degree + 1,
            "cochain {} of degree {} evaluated on {} vertices",
            self.label,
            self.degree,
            args.len()
        );
        (self.eval)(args)
    }

    /// `(δf)(s₀, …, s_{n+1}) = Σᵢ (−1)ⁱ f(s₀, …, ŝᵢ, …, s_{n+1})`.
    pub fn coboundary(&self) -> Cochain<V> {
        let inner = self.eval.clone();
        let n = self.degree;
        Cochain {
            degree: n + 1,
            label: format!("δ{}", self.label),
            integral: self.integral,
            invariance: self.invariance,
            norm: match self.norm {
                NormInfo::Exact(b) => NormInfo::Exact((n + 2) as f64 * b),
                NormInfo::Unknown => NormInfo::Unknown,
            },
            eval: Arc::new(move |s: &[V]| {
                let mut face: Vec<V> = Vec::with_capacity(n + 1);
                let mut total = 0.0;
                for i in 0..=n + 1 {
                    face.clear();
                    face.extend(s[..i].iter().cloned());
                    face.extend(s[i + 1..].iter().cloned());
                    let v = inner(&face);
                    if i % 2 == 0 {
                        total += v;
                    } else {
                        total -= v;
                    }
                }
                total
            }),
        }
    }

    /// `(f ∪ g)(s₀, …, s_{p+q}) = f(s₀, …, s_p)·g(s_p, …, s_{p+q})`.
    pub fn cup(&self, other: &Cochain<V>) -> Cochain<V> {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        let p = self.degree;
        Cochain {
            degree: p + other.degree,
            label: format!("({} ∪ {})", self.label, other.label),
            integral: self.integral && other.integral,
            invariance: self.invariance.max(other.invariance),
            norm: self.norm.map2(other.norm, |a, b| a * b),
            eval: Arc::new(move |s: &[V]| {
                let a = f(&s[..=p]);
                if a == 0.0 {
                    0.0
                } else {
                    a * g(&s[p..])
                }
            }),
        }
    }

    pub fn scale(&self, k: f64) -> Cochain<V> {
        let f = self.eval.clone();
        Cochain {
            degree: self.degree,
            label: format!("{k}·{}", self.label),
            integral: self.integral && k.fract() == 0.0,
            invariance: self.invariance,
            norm: match self.norm {
                NormInfo::Exact(b) => NormInfo::Exact(k.abs() * b),
                NormInfo::Unknown => NormInfo::Unknown,
            },
            eval: Arc::new(move |s: &[V]| k * f(s)),
        }
    }

    fn combine(&self, other: &Cochain<V>, sign: f64, op: &str) -> Cochain<V> {
        assert_eq!(self.degree, other.degree, "cannot combine cochains of different degrees");
        let (f, g) = (self.eval.clone(), other.eval.clone());
        Cochain {
            degree: self.degree,
            label: format!("({} {op} {})", self.label, other.label),
            integral: self.integral && other.integral,
            invariance: self.invariance.max(other.invariance),
            norm: self.norm.map2(other.norm, |a, b| a + b),
            eval: Arc::new(move |s: &[V]| f(s) + sign * g(s)),
        }
    }

    pub fn add(&self, other: &Cochain<V>) -> Cochain<V> {
        self.combine(other, 1.0, "+")
    }

    pub fn sub(&self, other: &Cochain<V>) -> Cochain<V> {
        self.combine(other, -1.0, "−")
    }

    /// The first tuple and generator at which the cochain is not invariant.
    pub fn check_invariance(&self, action: &dyn GraphAction<V>, tuples: &[Vec<V>]) -> Option<String> {
        let exact = self.integral;
        tuples.par_iter().find_map_first(|t| {
            let v = self.eval(t);
            (0..action.generator_count()).find_map(|i| {
                let moved: Vec<V> = t.iter().map(|x| action.apply(i, x)).collect();
                let w = self.eval(&moved);
                (!crate::report::agree(v, w, exact))
                    .then(|| format!("{}: f{t:?} = {v} but f({}·…) = {w}", self.label, action.generator_name(i)))
            })
        })
    }
}

/// `max |f|` over the given tuples, 0 for an empty set.
pub fn sup_norm_sampled<V: Vertex>(f: &Cochain<V>, tuples: &[Vec<V>]) -> f64 {
    tuples.par_iter().map(|t| f.eval(t).abs()).reduce(|| 0.0, f64::max)
}

/// `max |f|` with the first tuple attaining it.
pub fn sup_with_witness<V: Vertex>(f: &Cochain<V>, tuples: &[Vec<V>]) -> (f64, Option<usize>) {
    tuples
        .par_iter()
        .enumerate()
        .map(|(i, t)| (f.eval(t).abs(), Some(i)))
        .reduce(
            || (0.0, None),
            |a, b| match (a.1, b.1) {
                (_, None) => a,
                (None, _) => b,
                (Some(i), Some(j)) => {
                    if b.0 > a.0 || (b.0 == a.0 && j < i) {
                        b
                    } else {
                        a
                    }
                }
            },
        )
}

/// A real-valued function on a free group with a recorded defect.
#[derive(Clone)]
pub struct GroupQuasimorphism {
    pub label: String,
    pub integral: bool,
    /// A known bound on `|φ(g) + φ(h) − φ(gh)|`, if any.
    pub defect: Option<f64>,
    eval: Arc<dyn Fn(&ReducedWord) -> f64 + Send + Sync>,
}

impl fmt::Debug for GroupQuasimorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupQuasimorphism")
            .field("label", &self.label)
            .field("integral", &self.integral)
            .field("defect", &self.defect)
            .finish()
    }
}

impl GroupQuasimorphism {
    pub fn new(
        label: impl Into<String>,
        integral: bool,
        defect: Option<f64>,
        eval: impl Fn(&ReducedWord) -> f64 + Send + Sync + 'static,
    ) -> Self {
        GroupQuasimorphism {
            label: label.into(),
            integral,
            defect,
            eval: Arc::new(eval),
        }
    }

    pub fn zero() -> Self {
        GroupQuasimorphism::new("0", true, Some(0.0), |_| 0.0)
    }

    pub fn eval(&self, g: &ReducedWord) -> f64 {
        (self.eval)(g)
    }

    /// `max |φ(g) + φ(h) − φ(gh)|` over all `g, h` in `domain`.
    pub fn sampled_defect(&self, domain: &[ReducedWord]) -> f64 {
        domain
            .par_iter()
            .map(|g| {
                let fg = self.eval(g);
                domain
                    .iter()
                    .map(|h| (fg + self.eval(h) - self.eval(&g.mul(h))).abs())
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// `φ̂(g, h) = φ(g⁻¹h)`, a left-invariant degree-1 cochain.
pub fn hat(phi: &GroupQuasimorphism) -> Cochain<ReducedWord> {
    let f = phi.eval.clone();
    Cochain::new(
        1,
        format!("{}^", phi.label),
        phi.integral,
        Invariance::ByConstruction,
        NormInfo::Unknown,
        move |s: &[ReducedWord]| f(&s[0].left_quotient(&s[1])),
    )
}

/// `δφ̂`, with its norm bounded by the defect when one is recorded.
pub fn hat_coboundary(phi: &GroupQuasimorphism) -> Cochain<ReducedWord> {
    let d = hat(phi).coboundary();
    match phi.defect {
        Some(b) => d.with_norm(NormInfo::Exact(b)),
        None => d,
    }
}

/// `o_s(f)(g₀, …, gₙ) = f(g₀·s, …, gₙ·s)` for a group acting on vertices.
pub fn orbit_pullback<G: Vertex, V: Vertex>(
    f: &Cochain<V>,
    act: Arc<dyn Fn(&G, &V) -> V + Send + Sync>,
    base: V,
) -> Cochain<G> {
    let inner = f.clone();
    Cochain::new(
        f.degree,
        format!("o[{base:?}]({})", f.label),
        f.integral,
        f.invariance,
        f.norm,
        move |gs: &[G]| {
            let moved: Vec<V> = gs.iter().map(|g| act(g, &base)).collect();
            inner.eval(&moved)
        },
    )
}

/// One row of a JSON cochain table: a tuple of words and a value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableRow(pub Vec<String>, pub f64);

/// Builds a cochain from rows `[[words…], value]`, extended by left
/// invariance and zero away from the table.
///
/// Each row is normalised to `(e, g₀⁻¹g₁, …, g₀⁻¹gₙ)`; rows that normalise to
/// the same tuple must agree.
pub fn table_cochain(alphabet: &Alphabet, rows: &[TableRow]) -> Result<Cochain<ReducedWord>, CochainError> {
    let arity = rows.first().ok_or(CochainError::Empty)?.0.len();
    if arity == 0 {
        return Err(CochainError::Arity(0, 0, 1));
    }
    let mut table: HashMap<Vec<ReducedWord>, f64> = HashMap::new();
    for (i, TableRow(words, value)) in rows.iter().enumerate() {
        if words.len() != arity {
            return Err(CochainError::Arity(i, words.len(), arity));
        }
        let tuple = words.iter().map(|w| alphabet.parse(w)).collect::<Result<Vec<_>, _>>()?;
        let key = normalise(&tuple);
        if let Some(old) = table.insert(key.clone(), *value) {
            if old != *value {
                return Err(CochainError::Conflict(format!("{key:?}")));
            }
        }
    }
    let norm = table.values().fold(0.0f64, |m, v| m.max(v.abs()));
    let integral = table.values().all(|v| v.fract() == 0.0);
    Ok(Cochain::new(
        arity - 1,
        "table",
        integral,
        Invariance::Partial,
        NormInfo::Exact(norm),
        move |s: &[ReducedWord]| table.get(&normalise(s)).copied().unwrap_or(0.0),
    ))
}

pub fn table_cochain_from_json(alphabet: &Alphabet, text: &str) -> Result<Cochain<ReducedWord>, CochainError> {
    let rows: Vec<TableRow> = serde_json::from_str(text).map_err(|e| CochainError::Json(e.to_string()))?;
    table_cochain(alphabet, &rows)
}

fn normalise(tuple: &[ReducedWord]) -> Vec<ReducedWord> {
    let inv = tuple[0].inverse();
    tuple.iter().map(|g| inv.mul(g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::sample_tuples;
    use crate::words::FreeGroupTranslation;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn exponent_sum_a() -> GroupQuasimorphism {
        GroupQuasimorphism::new("a#", true, Some(0.0), |g| {
            g.letters()
                .iter()
                .map(|&l| match l {
                    0 => 1.0,
                    1 => -1.0,
                    _ => 0.0,
                })
                .sum()
        })
    }

    fn word_length_parity() -> Cochain<ReducedWord> {
        Cochain::new(1, "len", true, Invariance::ByConstruction, NormInfo::Unknown, |s: &[ReducedWord]| {
            s[0].distance(&s[1]) as f64
        })
    }

    #[test]
    fn constants_and_zero() {
        let c = Cochain::<ReducedWord>::constant(0, 3.0);
        assert_eq!(c.coboundary().eval(&[ReducedWord::identity(), ReducedWord::identity()]), 0.0);
        let ball = f2().ball(2).unwrap();
        let tuples = sample_tuples(&ball, 3, 100, 1);
        assert_eq!(sup_norm_sampled(&Cochain::<ReducedWord>::zero(2), &tuples), 0.0);
        assert_eq!(sup_norm_sampled(&Cochain::<ReducedWord>::constant(2, -2.5), &tuples), 2.5);
    }

    #[test]
    fn cup_identities() {
        let f = word_length_parity();
        let one = Cochain::constant(0, 1.0);
        let zero = Cochain::zero(2);
        let ball = f2().ball(2).unwrap();
        for t in sample_tuples(&ball, 4, 200, 2) {
            assert_eq!(f.cup(&zero).eval(&t), 0.0);
            assert_eq!(one.cup(&f).eval(&t[..2]), f.eval(&t[..2]));
        }
    }

    #[test]
    fn hat_lifts_group_values() {
        let phi = exponent_sum_a();
        let h = hat(&phi);
        let g = f2().parse("abaB").unwrap();
        assert_eq!(h.eval(&[ReducedWord::identity(), g.clone()]), phi.eval(&g));
        let ball = f2().ball(3).unwrap();
        let tuples = sample_tuples(&ball, 2, 200, 3);
        assert!(h.check_invariance(&FreeGroupTranslation::new(f2()), &tuples).is_none());
        let triples = sample_tuples(&ball, 3, 500, 4);
        assert_eq!(sup_norm_sampled(&h.coboundary(), &triples), 0.0);
    }

    #[test]
    fn non_invariant_cochain_is_caught() {
        let c = Cochain::new(0, "len", true, Invariance::Sampled, NormInfo::Unknown, |s: &[ReducedWord]| {
            s[0].len() as f64
        });
        let ball = f2().ball(1).unwrap();
        let tuples: Vec<Vec<ReducedWord>> = ball.iter().map(|g| vec![g.clone()]).collect();
        assert!(c.check_invariance(&FreeGroupTranslation::new(f2()), &tuples).is_some());
    }

    #[test]
    fn orbit_pullback_of_zero_and_of_products() {
        let act: Arc<dyn Fn(&ReducedWord, &ReducedWord) -> ReducedWord + Send + Sync> =
            Arc::new(|g: &ReducedWord, v: &ReducedWord| g.mul(v));
        let s = f2().parse("b").unwrap();
        let zero = orbit_pullback(&Cochain::<ReducedWord>::zero(1), act.clone(), s.clone());
        let f = word_length_parity();
        let g = hat(&exponent_sum_a());
        let both = orbit_pullback(&f.cup(&g), act.clone(), s.clone());
        let separately = orbit_pullback(&f, act.clone(), s.clone()).cup(&orbit_pullback(&g, act, s));
        let ball = f2().ball(3).unwrap();
        for t in sample_tuples(&ball, 3, 1000, 5) {
            assert_eq!(zero.eval(&t[..2]), 0.0);
            assert_eq!(both.eval(&t), separately.eval(&t));
        }
    }

    #[test]
    fn tables_extend_by_invariance() {
        let rows = r#"[[["e","a"], 2.0], [["b","ba"], 2.0], [["a","ab"], -1.0]]"#;
        let c = table_cochain_from_json(&f2(), rows).unwrap();
        assert_eq!(c.degree(), 1);
        assert_eq!(c.invariance(), Invariance::Partial);
        let w = |s: &str| f2().parse(s).unwrap();
        assert_eq!(c.eval(&[w("bb"), w("bba")]), 2.0);
        assert_eq!(c.eval(&[w(""), w("b")]), -1.0);
        assert_eq!(c.eval(&[w(""), w("aa")]), 0.0);
        let bad = r#"[[["e","a"], 2.0], [["b","ba"], 3.0]]"#;
        assert!(matches!(table_cochain_from_json(&f2(), bad), Err(CochainError::Conflict(_))));
        assert!(matches!(table_cochain_from_json(&f2(), "[]"), Err(CochainError::Empty)));
    }
}
