//! ℓ-weights, weight quasimorphisms, defects and the triangle estimate.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coherent::CoherentPair;
use crate::graph::{fragments, Fragment, GraphAction, OrientedEdge, Path, Vertex};
use crate::report::{agree, CheckEntry};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("weight has size {weight} but the coherent pair has size {pair}")]
    SizeMismatch { weight: usize, pair: usize },
    #[error("the path family is empty between {0}")]
    EmptyFamily(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// A map on ℓ-tuples of oriented edges.
pub trait Weight<V: Vertex>: Send + Sync {
    fn name(&self) -> String;

    /// ℓ.
    fn size(&self) -> usize;

    /// The bound `‖W‖∞` the weight is declared to satisfy.
    fn declared_norm(&self) -> f64;

    /// The finiteness constant `c`, when known analytically.
    fn finiteness(&self) -> Option<usize>;

    /// Whether every value is an integer, so identities can be checked exactly.
    fn is_integral(&self) -> bool;

    fn evaluate(&self, edges: &[OrientedEdge<V>]) -> f64;

    /// The value on a fragment. Implementations may override this with a
    /// faster route that does not materialise the edge list.
    fn on_fragment(&self, a: &Fragment<'_, V>) -> f64 {
        self.evaluate(&a.edges())
    }
}

/// Evaluates `W(a)` and asserts the declared norm.
pub fn weight_value<V: Vertex>(w: &dyn Weight<V>, a: &Fragment<'_, V>) -> f64 {
    let v = w.on_fragment(a);
    assert!(
        v.abs() <= w.declared_norm() + 1e-12,
        "weight {} exceeds its declared norm at {:?}",
        w.name(),
        a.edges()
    );
    v
}

/// The weight that is zero everywhere.
#[derive(Clone, Copy, Debug)]
pub struct ZeroWeight {
    pub size: usize,
}

impl<V: Vertex> Weight<V> for ZeroWeight {
    fn name(&self) -> String {
        "zero".into()
    }

    fn size(&self) -> usize {
        self.size
    }

    fn declared_norm(&self) -> f64 {
        0.0
    }

    fn finiteness(&self) -> Option<usize> {
        Some(2)
    }

    fn is_integral(&self) -> bool {
        true
    }

    fn evaluate(&self, _edges: &[OrientedEdge<V>]) -> f64 {
        0.0
    }
}

type EdgeFn<V> = dyn Fn(&[OrientedEdge<V>]) -> f64 + Send + Sync;

/// A weight given by a closure.
pub struct FnWeight<V> {
    pub name: String,
    pub size: usize,
    pub norm: f64,
    pub finiteness: Option<usize>,
    pub integral: bool,
    pub eval: Arc<EdgeFn<V>>,
}

impl<V: Vertex> Weight<V> for FnWeight<V> {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn size(&self) -> usize {
        self.size
    }

    fn declared_norm(&self) -> f64 {
        self.norm
    }

    fn finiteness(&self) -> Option<usize> {
        self.finiteness
    }

    fn is_integral(&self) -> bool {
        self.integral
    }

    fn evaluate(&self, edges: &[OrientedEdge<V>]) -> f64 {
        (self.eval)(edges)
    }
}

/// Result of [`verify_weight`].
#[derive(Clone, Debug, Serialize)]
pub struct WeightReport {
    pub weight: String,
    pub size: usize,
    pub declared_norm: f64,
    pub max_abs_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub declared_c: Option<usize>,
    /// Largest count of supported fragments through one interior vertex.
    pub empirical_c: usize,
    /// The constant used downstream: the declared one, else
    /// `max(2, empirical_c)`.
    pub c: usize,
    pub entries: Vec<CheckEntry>,
}

impl WeightReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(CheckEntry::is_pass)
    }
}

/// Checks the five weight properties on the paths between the given pairs:
/// invariance under each generator, the alternating property, the norm,
/// path independence along Φ, and the finiteness count.
pub fn verify_weight<V: Vertex>(
    w: &dyn Weight<V>,
    pair: &CoherentPair<V>,
    action: &dyn GraphAction<V>,
    pairs: &[(V, V)],
) -> Result<WeightReport, WeightError> {
    let ell = w.size();
    if ell != pair.size {
        return Err(WeightError::SizeMismatch {
            weight: ell,
            pair: pair.size,
        });
    }
    let integral = w.is_integral();
    let norm = w.declared_norm();

    struct PairOutcome {
        invariance: Option<String>,
        alternating: Option<String>,
        bounded: Option<String>,
        path_independent: Option<String>,
        max_abs: f64,
        max_count: usize,
    }

    let outcomes: Vec<PairOutcome> = pairs
        .par_iter()
        .map(|(x, y)| {
            let mut out = PairOutcome {
                invariance: None,
                alternating: None,
                bounded: None,
                path_independent: None,
                max_abs: 0.0,
                max_count: 0,
            };
            let ps = pair.family.paths(x, y);
            for (pi, p) in ps.iter().enumerate() {
                let rev = p.reversed();
                let frags = fragments(p, ell);
                let mut values = Vec::with_capacity(frags.len());
                for a in &frags {
                    let edges = a.edges();
                    let v = w.evaluate(&edges);
                    values.push(v);
                    out.max_abs = out.max_abs.max(v.abs());
                    if out.bounded.is_none() && v.abs() > norm + 1e-12 {
                        out.bounded = Some(format!("|W({edges:?})| = {} > {norm}", v.abs()));
                    }
                    if pi == 0 {
                        if out.alternating.is_none() {
                            let back = w.on_fragment(&a.reversed_on(&rev));
                            if !agree(back, -v, integral) {
                                out.alternating = Some(format!("W(ā) = {back} but W(a) = {v} for a = {edges:?}"));
                            }
                        }
                        if out.invariance.is_none() {
                            out.invariance = (0..action.generator_count()).find_map(|i| {
                                let moved: Vec<_> = edges
                                    .iter()
                                    .map(|e| OrientedEdge::new(action.apply(i, &e.head), action.apply(i, &e.tail)))
                                    .collect();
                                let gv = w.evaluate(&moved);
                                (!agree(gv, v, integral)).then(|| {
                                    format!("W({}·a) = {gv} but W(a) = {v} for a = {edges:?}", action.generator_name(i))
                                })
                            });
                        }
                    }
                }
                for m in 1..p.len() {
                    let count = frags
                        .iter()
                        .zip(&values)
                        .filter(|(a, &v)| v != 0.0 && a.contains_position(m))
                        .count();
                    out.max_count = out.max_count.max(count);
                }
                if out.path_independent.is_none() {
                    for q in &ps {
                        let images = pair.correspondence.map(p, q, ell);
                        for (a, (img, &v)) in frags.iter().zip(images.iter().zip(&values)) {
                            let b = Fragment::new(q, img.clone());
                            let u = w.on_fragment(&b);
                            if !agree(u, v, integral) {
                                out.path_independent = Some(format!(
                                    "W({:?}) = {v} but W(φ(a)) = {u} on {q:?}",
                                    a.edges()
                                ));
                                break;
                            }
                        }
                        if out.path_independent.is_some() {
                            break;
                        }
                    }
                }
            }
            out
        })
        .collect();

    let first = |f: fn(&PairOutcome) -> &Option<String>| outcomes.iter().find_map(|o| f(o).clone());
    let max_abs = outcomes.iter().map(|o| o.max_abs).fold(0.0, f64::max);
    let empirical_c = outcomes.iter().map(|o| o.max_count).max().unwrap_or(0);
    let declared_c = w.finiteness();
    let c = declared_c.unwrap_or(empirical_c.max(2));
    let finiteness = match declared_c {
        Some(dc) if empirical_c > dc => Some(format!("{empirical_c} supported fragments contain one vertex, c = {dc}")),
        _ => None,
    };
    let entries = vec![
        CheckEntry::from_witness("invariant", first(|o| &o.invariance)),
        CheckEntry::from_witness("alternating", first(|o| &o.alternating)),
        CheckEntry::from_witness("bounded", first(|o| &o.bounded)),
        CheckEntry::from_witness("path-independent", first(|o| &o.path_independent)),
        CheckEntry::from_witness("finiteness", finiteness).with_detail(serde_json::json!({
            "declared_c": declared_c,
            "empirical_c": empirical_c,
            "c": c,
        })),
    ];
    Ok(WeightReport {
        weight: w.name(),
        size: ell,
        declared_norm: norm,
        max_abs_value: max_abs,
        declared_c,
        empirical_c,
        c,
        entries,
    })
}

/// The largest number of supported fragments of one path in `P(x, y)` that
/// contain a common vertex in their interior, over the given pairs.
pub fn empirical_finiteness<V: Vertex>(f: &WeightQuasimorphism<V>, pairs: &[(V, V)]) -> usize {
    pairs
        .par_iter()
        .map(|(x, y)| {
            let mut worst = 0;
            for p in f.pair.family.paths(x, y) {
                let support = f.support(&p);
                for m in 1..p.len() {
                    worst = worst.max(support.iter().filter(|(a, _)| a.contains_position(m)).count());
                }
            }
            worst
        })
        .max()
        .unwrap_or(0)
}

/// A two-variable quasimorphism of an action.
pub trait ActionQuasimorphism<V: Vertex>: Send + Sync {
    fn name(&self) -> String;

    fn eval(&self, x: &V, y: &V) -> f64;

    fn is_integral(&self) -> bool;
}

/// `f_W(x, y) = Σ_{a ∈ p^(ℓ)} W(a)` for the first path `p ∈ P(x, y)`.
#[derive(Clone)]
pub struct WeightQuasimorphism<V: Vertex> {
    pub weight: Arc<dyn Weight<V>>,
    pub pair: CoherentPair<V>,
    c: usize,
}

impl<V: Vertex> fmt::Debug for WeightQuasimorphism<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightQuasimorphism")
            .field("weight", &self.weight.name())
            .field("pair", &self.pair)
            .field("c", &self.c)
            .finish()
    }
}

impl<V: Vertex> WeightQuasimorphism<V> {
    /// Uses the weight's declared finiteness constant, or 2 when none is
    /// declared; see [`WeightQuasimorphism::with_c`].
    pub fn new(weight: Arc<dyn Weight<V>>, pair: CoherentPair<V>) -> Result<Self, WeightError> {
        if weight.size() != pair.size {
            return Err(WeightError::SizeMismatch {
                weight: weight.size(),
                pair: pair.size,
            });
        }
        let c = weight.finiteness().unwrap_or(2);
        Ok(WeightQuasimorphism { weight, pair, c })
    }

    pub fn with_c(mut self, c: usize) -> Self {
        self.c = c;
        self
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn r(&self) -> usize {
        self.pair.declared_r()
    }

    pub fn norm(&self) -> f64 {
        self.weight.declared_norm()
    }

    pub fn path(&self, x: &V, y: &V) -> Result<Path<V>, WeightError> {
        self.pair
            .family
            .first_path(x, y)
            .ok_or_else(|| WeightError::EmptyFamily(format!("{x:?} and {y:?}")))
    }

    pub fn value(&self, x: &V, y: &V) -> Result<f64, WeightError> {
        if x == y {
            return Ok(0.0);
        }
        Ok(self.value_along(&self.path(x, y)?))
    }

    pub fn value_along(&self, p: &Path<V>) -> f64 {
        self.weighted_sum(p, |_| 1.0)
    }

    /// `Σ_{a ∈ p^(ℓ)} W(a)·τ(a)`, skipping fragments outside the support.
    pub fn weighted_sum(&self, p: &Path<V>, mut tau: impl FnMut(&Fragment<'_, V>) -> f64) -> f64 {
        if p.len() < self.pair.size {
            return 0.0;
        }
        let mut total = 0.0;
        for a in fragments(p, self.pair.size) {
            let w = weight_value(self.weight.as_ref(), &a);
            if w != 0.0 {
                total += w * tau(&a);
            }
        }
        total
    }

    /// The supported fragments of `p` with their weights.
    pub fn support<'p>(&self, p: &'p Path<V>) -> Vec<(Fragment<'p, V>, f64)> {
        if p.len() < self.pair.size {
            return Vec::new();
        }
        fragments(p, self.pair.size)
            .into_iter()
            .filter_map(|a| {
                let w = weight_value(self.weight.as_ref(), &a);
                (w != 0.0).then_some((a, w))
            })
            .collect()
    }

    /// `3(R+1)·c·‖W‖∞`.
    pub fn defect_bound(&self) -> f64 {
        triangle_bound(self.r(), self.c, self.norm(), 1.0)
    }
}

impl<V: Vertex> ActionQuasimorphism<V> for WeightQuasimorphism<V> {
    fn name(&self) -> String {
        format!("f_W[{}]", self.weight.name())
    }

    fn eval(&self, x: &V, y: &V) -> f64 {
        self.value(x, y).expect("path family is nonempty")
    }

    fn is_integral(&self) -> bool {
        self.weight.is_integral()
    }
}

/// A two-variable map given by a closure.
pub struct FnQuasimorphism<V> {
    pub name: String,
    pub integral: bool,
    pub eval: Arc<dyn Fn(&V, &V) -> f64 + Send + Sync>,
}

impl<V: Vertex> ActionQuasimorphism<V> for FnQuasimorphism<V> {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn eval(&self, x: &V, y: &V) -> f64 {
        (self.eval)(x, y)
    }

    fn is_integral(&self) -> bool {
        self.integral
    }
}

/// `3(R+1)·c·‖W‖∞·‖τ‖∞`.
pub fn triangle_bound(r: usize, c: usize, w_norm: f64, tau_norm: f64) -> f64 {
    3.0 * (r as f64 + 1.0) * c as f64 * w_norm * tau_norm
}

/// Largest `|δf|` over a triple set, with the first triple attaining it.
#[derive(Clone, Debug, Serialize)]
pub struct DefectReport {
    pub defect: f64,
    pub triples_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// `max |f(y,z) − f(x,z) + f(x,y)|` over the given triples.
pub fn defect<V: Vertex>(f: &dyn ActionQuasimorphism<V>, triples: &[[V; 3]]) -> DefectReport {
    let best = triples
        .par_iter()
        .enumerate()
        .map(|(i, [x, y, z])| ((f.eval(y, z) - f.eval(x, z) + f.eval(x, y)).abs(), i))
        .reduce(|| (0.0, usize::MAX), max_first);
    report_from(best, triples.len(), |i| {
        let [x, y, z] = &triples[i];
        format!("({x:?}, {y:?}, {z:?})")
    })
}

fn max_first(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn report_from(best: (f64, usize), checked: usize, describe: impl Fn(usize) -> String) -> DefectReport {
    DefectReport {
        defect: best.0,
        triples_checked: checked,
        witness: (best.1 != usize::MAX && best.0 > 0.0).then(|| describe(best.1)),
    }
}

/// The defect over all `|domain|³` triples, evaluating `f` once per pair.
pub fn defect_exhaustive<V: Vertex>(f: &dyn ActionQuasimorphism<V>, domain: &[V]) -> DefectReport {
    let n = domain.len();
    let table: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| f.eval(&domain[k / n], &domain[k % n]))
        .collect();
    let best = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut best = (0.0, usize::MAX);
            for y in 0..n {
                for z in 0..n {
                    let d = (table[y * n + z] - table[x * n + z] + table[x * n + y]).abs();
                    best = max_first(best, (d, (x * n + y) * n + z));
                }
            }
            best
        })
        .reduce(|| (0.0, usize::MAX), max_first);
    report_from(best, n * n * n, |k| {
        format!("({:?}, {:?}, {:?})", domain[k / (n * n)], domain[(k / n) % n], domain[k % n])
    })
}

/// Residual of the triangle sum against the analytic bound.
#[derive(Clone, Debug, Serialize)]
pub struct TriangleResidual {
    pub residual: f64,
    pub bound: f64,
}

/// `|Σ_{p_xy} Wτ + Σ_{p_yz} Wτ − Σ_{p_xz} Wτ|` for the first family paths,
/// with the bound `3(R+1)·c·‖W‖∞·‖τ‖∞`.
///
/// Before summing, `τ` is spot-checked for symmetry under reversal on the
/// three paths and for Φ-stability on the supported fragments of every path
/// between each pair.
pub fn triangle_sum_residual<V: Vertex>(
    f: &WeightQuasimorphism<V>,
    tau: &(dyn Fn(&Fragment<'_, V>) -> f64 + Sync),
    tau_norm: f64,
    x: &V,
    y: &V,
    z: &V,
) -> Result<TriangleResidual, WeightError> {
    let integral = f.weight.is_integral();
    let mut sums = [0.0; 3];
    for (k, (u, v)) in [(x, y), (y, z), (x, z)].into_iter().enumerate() {
        let ps = f.pair.family.paths(u, v);
        let p = ps.first().ok_or_else(|| WeightError::EmptyFamily(format!("{u:?} and {v:?}")))?;
        let rev = p.reversed();
        for (a, _) in f.support(p) {
            let t = tau(&a);
            let back = tau(&a.reversed_on(&rev));
            if !agree(t, back, integral) {
                return Err(WeightError::Precondition(format!(
                    "τ is not symmetric at {:?}: {t} vs {back}",
                    a.edges()
                )));
            }
            for q in &ps[1..] {
                let b = Fragment::new(q, f.pair.correspondence.apply(p, q, a.indices()));
                let u = tau(&b);
                if !agree(t, u, integral) {
                    return Err(WeightError::Precondition(format!(
                        "τ is not Φ-stable at {:?}: {t} vs {u}",
                        a.edges()
                    )));
                }
            }
        }
        sums[k] = f.weighted_sum(p, tau);
    }
    Ok(TriangleResidual {
        residual: (sums[0] + sums[1] - sums[2]).abs(),
        bound: triangle_bound(f.r(), f.c(), f.norm(), tau_norm),
    })
}
