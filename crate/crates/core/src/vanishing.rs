//! Explicit bounded primitives for cup products and Massey triple products
//! with the class of `δf_W`, and certificates that check them on samples.
//!
//! For a cocycle ζ of degree n ≥ 1 and a weight quasimorphism `f_W`:
//!
//! * `ζ̃(a, x₁…xₙ) = ½(ζ(α(a), x₁…xₙ) + ζ(ω(a), x₁…xₙ))`
//! * `η(x₀…xₙ) = Σ_{a ∈ p₀₁} W(a)·ζ̃(a, x₁…xₙ)`
//! * `ν(x₀…xₙ) = Σ_{a ∈ p_{n−1,n}} W(a)·ζ̃(a, x₀…x_{n−1})`
//! * `β = f_W ∪ ζ + δη` with `δβ = δf_W ∪ ζ`
//! * `β′ = (−1)ⁿ(ζ ∪ f_W − δν)` with `δβ′ = ζ ∪ δf_W`
//!
//! and for a second cocycle of degree m,
//! `κ(x₀…x_{n+m−1}) = Σ_{a ∈ p_{n−1,n}} W(a)·ζ̃₁(a, x₀…x_{n−1})·ζ̃₂(a, x_n…x_{n+m−1})`,
//! whose coboundary turns `ζ₁ ∪ η + (−1)ⁿ ν ∪ ζ₂` into a bounded cochain.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cochain::{Cochain, Invariance, NormInfo};
use crate::graph::{Fragment, Path, Vertex};
use crate::report::{tolerance, Status};
use crate::sampling::{sample_pairs, sample_tuples, SamplePlan};
use crate::weights::{triangle_bound, ActionQuasimorphism, WeightQuasimorphism};

/// Largest tuple count for which sup-norms are computed exhaustively.
pub const EXHAUSTIVE_NORM_LIMIT: usize = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VanishingError {
    #[error("cocycle degree {0} is not supported; the constructions need degree at least 1")]
    UnsupportedDegree(usize),
    #[error("cochain {label} is not Φ-stable: {witness}")]
    NotStable { label: String, witness: String },
    #[error("empty sampling domain")]
    EmptyDomain,
}

/// Which path of `P(x, y)` a sum runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PathChoice {
    First,
    Last,
}

fn choose_path<V: Vertex>(f: &WeightQuasimorphism<V>, x: &V, y: &V, choice: PathChoice) -> Path<V> {
    let p = match choice {
        PathChoice::First => f.pair.family.first_path(x, y),
        PathChoice::Last => f.pair.family.paths(x, y).pop(),
    };
    p.expect("path family is nonempty")
}

/// `ζ̃`, the average of a cochain over the head and tail of a fragment placed
/// in front of the remaining arguments.
#[derive(Clone, Debug)]
pub struct ZetaTilde<V: Vertex> {
    zeta: Cochain<V>,
}

impl<V: Vertex> ZetaTilde<V> {
    pub fn new(zeta: Cochain<V>) -> Self {
        ZetaTilde { zeta }
    }

    pub fn eval_at(&self, head: &V, tail: &V, rest: &[V]) -> f64 {
        let mut args = Vec::with_capacity(rest.len() + 1);
        args.push(head.clone());
        args.extend_from_slice(rest);
        let h = self.zeta.eval(&args);
        args[0] = tail.clone();
        let t = self.zeta.eval(&args);
        0.5 * (h + t)
    }

    pub fn eval(&self, a: &Fragment<'_, V>, rest: &[V]) -> f64 {
        self.eval_at(a.head(), a.tail(), rest)
    }
}

fn require_degree<V: Vertex>(zeta: &Cochain<V>) -> Result<usize, VanishingError> {
    match zeta.degree() {
        0 => Err(VanishingError::UnsupportedDegree(0)),
        n => Ok(n),
    }
}

fn sum_cochain<V: Vertex>(
    label: String,
    degree: usize,
    integral: bool,
    eval: impl Fn(&[V]) -> f64 + Send + Sync + 'static,
) -> Cochain<V> {
    Cochain::new(degree, label, integral, Invariance::ByConstruction, NormInfo::Unknown, eval)
}

/// `η` with the sum running over the first path of the family.
pub fn eta<V: Vertex>(f: &WeightQuasimorphism<V>, zeta: &Cochain<V>) -> Result<Cochain<V>, VanishingError> {
    eta_with(f, zeta, PathChoice::First)
}

pub fn eta_with<V: Vertex>(
    f: &WeightQuasimorphism<V>,
    zeta: &Cochain<V>,
    choice: PathChoice,
) -> Result<Cochain<V>, VanishingError> {
    let n = require_degree(zeta)?;
    let (f, zt) = (f.clone(), ZetaTilde::new(zeta.clone()));
    let integral = f.is_integral() && zeta.is_integral();
    Ok(sum_cochain(format!("η[{}]", zeta.label()), n, integral, move |x: &[V]| {
        if x[0] == x[1] {
            return 0.0;
        }
        let p = choose_path(&f, &x[0], &x[1], choice);
        f.weighted_sum(&p, |a| zt.eval(a, &x[1..]))
    }))
}

/// `ν` with the sum running over the first path of the family.
pub fn nu<V: Vertex>(f: &WeightQuasimorphism<V>, zeta: &Cochain<V>) -> Result<Cochain<V>, VanishingError> {
    nu_with(f, zeta, PathChoice::First)
}

pub fn nu_with<V: Vertex>(
    f: &WeightQuasimorphism<V>,
    zeta: &Cochain<V>,
    choice: PathChoice,
) -> Result<Cochain<V>, VanishingError> {
    let n = require_degree(zeta)?;
    let (f, zt) = (f.clone(), ZetaTilde::new(zeta.clone()));
    let integral = f.is_integral() && zeta.is_integral();
    Ok(sum_cochain(format!("ν[{}]", zeta.label()), n, integral, move |x: &[V]| {
        if x[n - 1] == x[n] {
            return 0.0;
        }
        let p = choose_path(&f, &x[n - 1], &x[n], choice);
        f.weighted_sum(&p, |a| zt.eval(a, &x[..n]))
    }))
}

/// `κ`, a function of `n + m` vertices (degree `n + m − 1`).
pub fn kappa<V: Vertex>(
    f: &WeightQuasimorphism<V>,
    zeta1: &Cochain<V>,
    zeta2: &Cochain<V>,
) -> Result<Cochain<V>, VanishingError> {
    kappa_with(f, zeta1, zeta2, PathChoice::First)
}

pub fn kappa_with<V: Vertex>(
    f: &WeightQuasimorphism<V>,
    zeta1: &Cochain<V>,
    zeta2: &Cochain<V>,
    choice: PathChoice,
) -> Result<Cochain<V>, VanishingError> {
    let n = require_degree(zeta1)?;
    let m = require_degree(zeta2)?;
    let integral = f.is_integral() && zeta1.is_integral() && zeta2.is_integral();
    let (f, z1, z2) = (f.clone(), ZetaTilde::new(zeta1.clone()), ZetaTilde::new(zeta2.clone()));
    let label = format!("κ[{}, {}]", zeta1.label(), zeta2.label());
    Ok(sum_cochain(label, n + m - 1, integral, move |x: &[V]| {
        if x[n - 1] == x[n] {
            return 0.0;
        }
        let p = choose_path(&f, &x[n - 1], &x[n], choice);
        f.weighted_sum(&p, |a| {
            let t1 = z1.eval(a, &x[..n]);
            if t1 == 0.0 {
                0.0
            } else {
                t1 * z2.eval(a, &x[n..])
            }
        })
    }))
}

/// `Σ_{p_ij} Wτ + Σ_{p_jk} Wτ − Σ_{p_ik} Wτ` over first family paths.
fn triangle_sum<V: Vertex>(
    f: &WeightQuasimorphism<V>,
    (xi, xj, xk): (&V, &V, &V),
    tau: impl Fn(&Fragment<'_, V>) -> f64,
) -> f64 {
    let side = |u: &V, v: &V| {
        if u == v {
            0.0
        } else {
            f.weighted_sum(&choose_path(f, u, v, PathChoice::First), &tau)
        }
    };
    side(xi, xj) + side(xj, xk) - side(xi, xk)
}

/// The right-hand side of the κ-coboundary identity:
/// `ζ₁∪η + (−1)ⁿ ν∪ζ₂ − (−1)ⁿ(Σ_{p_{n,n+1}} Wτ + Σ_{p_{n−1,n}} Wτ − Σ_{p_{n−1,n+1}} Wτ)`
/// with `τ = ζ̃₁(·, x₀…x_{n−1})·ζ̃₂(·, x_{n+1}…x_{n+m})`.
pub struct KappaIdentity<V: Vertex> {
    f: WeightQuasimorphism<V>,
    n: usize,
    m: usize,
    z1: ZetaTilde<V>,
    z2: ZetaTilde<V>,
    left: Cochain<V>,
    delta_kappa: Cochain<V>,
}

impl<V: Vertex> KappaIdentity<V> {
    pub fn new(f: &WeightQuasimorphism<V>, zeta1: &Cochain<V>, zeta2: &Cochain<V>) -> Result<Self, VanishingError> {
        let n = require_degree(zeta1)?;
        let m = require_degree(zeta2)?;
        let eta2 = eta(f, zeta2)?;
        let nu1 = nu(f, zeta1)?;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let left = zeta1.cup(&eta2).add(&nu1.cup(zeta2).scale(sign));
        Ok(KappaIdentity {
            f: f.clone(),
            n,
            m,
            z1: ZetaTilde::new(zeta1.clone()),
            z2: ZetaTilde::new(zeta2.clone()),
            left,
            delta_kappa: kappa(f, zeta1, zeta2)?.coboundary(),
        })
    }

    pub fn arity(&self) -> usize {
        self.n + self.m + 1
    }

    /// `(−1)ⁿ · (triangle sum of Wτ)`, which equals the Massey primitive β.
    pub fn signed_triangle(&self, x: &[V]) -> f64 {
        let n = self.n;
        let tau = |a: &Fragment<'_, V>| {
            let t1 = self.z1.eval(a, &x[..n]);
            if t1 == 0.0 {
                0.0
            } else {
                t1 * self.z2.eval(a, &x[n + 1..])
            }
        };
        let s = triangle_sum(&self.f, (&x[n - 1], &x[n], &x[n + 1]), tau);
        if n.is_multiple_of(2) {
            s
        } else {
            -s
        }
    }

    /// `|δκ(x) − right-hand side(x)|`, both sides evaluated independently.
    pub fn residual(&self, x: &[V]) -> f64 {
        assert_eq!(x.len(), self.arity());
        let rhs = self.left.eval(x) - self.signed_triangle(x);
        (self.delta_kappa.eval(x) - rhs).abs()
    }
}

/// Residual of `δκ` against its closed form at one tuple.
pub fn kappa_coboundary_identity<V: Vertex>(
    f: &WeightQuasimorphism<V>,
    zeta1: &Cochain<V>,
    zeta2: &Cochain<V>,
    tuple: &[V],
) -> Result<f64, VanishingError> {
    Ok(KappaIdentity::new(f, zeta1, zeta2)?.residual(tuple))
}

/// Outcome of a Φ-stability spot check.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub stable: bool,
    pub pairs_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Checks `ζ(α(a), x⃗) = ζ(α(φ_{p,q}(a)), x⃗)` and the same for tails, for
/// supported fragments `a` of paths `p, q ∈ P(x, y)` over the given vertex
/// pairs and trailing tuples.
pub fn phi_stability_check<V: Vertex>(
    zeta: &Cochain<V>,
    f: &WeightQuasimorphism<V>,
    pairs: &[(V, V)],
    rests: &[Vec<V>],
) -> StabilityReport {
    let exact = zeta.is_integral();
    let tol = tolerance(exact);
    let witness = pairs.par_iter().find_map_first(|(x, y)| {
        let ps = f.pair.family.paths(x, y);
        if ps.len() < 2 {
            return None;
        }
        for p in &ps {
            for (a, _) in f.support(p) {
                for q in &ps {
                    if p == q {
                        continue;
                    }
                    let b = Fragment::new(q, f.pair.correspondence.apply(p, q, a.indices()));
                    for rest in rests {
                        for (u, v, end) in [(a.head(), b.head(), "head"), (a.tail(), b.tail(), "tail")] {
                            let mut args = vec![u.clone()];
                            args.extend_from_slice(rest);
                            let lhs = zeta.eval(&args);
                            args[0] = v.clone();
                            let rhs = zeta.eval(&args);
                            if (lhs - rhs).abs() > tol {
                                return Some(format!(
                                    "{end} {u:?} ↦ {v:?} on {p:?} → {q:?} with trailing {rest:?}: {lhs} ≠ {rhs}"
                                ));
                            }
                        }
                    }
                }
            }
        }
        None
    });
    StabilityReport {
        stable: witness.is_none(),
        pairs_checked: pairs.len(),
        witness,
    }
}

/// The maximum of `|g(t)|` over tuples with the first tuple exceeding `tol`.
#[derive(Clone, Debug, Serialize)]
pub struct SweepStats {
    pub tuples: usize,
    pub max_abs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<String>,
}

impl SweepStats {
    pub fn within(&self, tol: f64) -> bool {
        self.max_abs <= tol
    }
}

pub fn sweep<V: Vertex>(tuples: &[Vec<V>], tol: f64, g: impl Fn(&[V]) -> f64 + Sync) -> SweepStats {
    let values: Vec<f64> = tuples.par_iter().map(|t| g(t).abs()).collect();
    let max_abs = values.iter().copied().fold(0.0, f64::max);
    let first_violation = values
        .iter()
        .position(|&v| v > tol)
        .map(|i| format!("{:?} gives {}", tuples[i], values[i]));
    SweepStats {
        tuples: tuples.len(),
        max_abs,
        first_violation,
    }
}

/// `sup |ζ|` over `domain^(n+1)`: exhaustive when there are at most
/// [`EXHAUSTIVE_NORM_LIMIT`] tuples, otherwise over a seeded sample.
pub fn ball_sup<V: Vertex>(zeta: &Cochain<V>, domain: &[V], plan: SamplePlan) -> (f64, NormSource) {
    let arity = zeta.degree() + 1;
    let total = domain.len().checked_pow(arity as u32).filter(|&t| t <= EXHAUSTIVE_NORM_LIMIT);
    match total {
        Some(total) => {
            let n = domain.len();
            let sup = (0..total)
                .into_par_iter()
                .map_init(
                    || Vec::with_capacity(arity),
                    |buf, mut k| {
                        buf.clear();
                        for _ in 0..arity {
                            buf.push(domain[k % n].clone());
                            k /= n;
                        }
                        zeta.eval(buf).abs()
                    },
                )
                .reduce(|| 0.0, f64::max);
            (sup, NormSource::Exhaustive)
        }
        None => {
            let tuples = sample_tuples(domain, arity, plan.samples, plan.seed);
            let sup = tuples.par_iter().map(|t| zeta.eval(t).abs()).reduce(|| 0.0, f64::max);
            (sup, NormSource::Sampled)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormSource {
    Exhaustive,
    Sampled,
}

/// The analytic bound a sampled norm is compared with.
#[derive(Clone, Debug, Serialize)]
pub struct BoundInfo {
    pub formula: String,
    pub r: usize,
    pub c: usize,
    pub weight_norm: f64,
    pub tau_norm: f64,
    pub value: f64,
}

/// Where the ζ norm in a bound comes from.
#[derive(Clone, Debug, Serialize)]
pub struct ZetaNorm {
    pub label: String,
    pub value: f64,
    pub source: NormSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub declared: Option<f64>,
}

/// Sampling domain and plan for a certificate.
#[derive(Clone, Debug)]
pub struct SweepConfig<V> {
    pub domain: Vec<V>,
    pub plan: SamplePlan,
}

impl<V: Vertex> SweepConfig<V> {
    pub fn new(domain: Vec<V>, plan: SamplePlan) -> Result<Self, VanishingError> {
        if domain.is_empty() {
            return Err(VanishingError::EmptyDomain);
        }
        Ok(SweepConfig { domain, plan })
    }

    fn tuples(&self, arity: usize, stream: u64) -> Vec<Vec<V>> {
        let p = self.plan.stream(stream);
        sample_tuples(&self.domain, arity, p.samples, p.seed)
    }

    fn zeta_norm(&self, zeta: &Cochain<V>) -> ZetaNorm {
        let (value, source) = ball_sup(zeta, &self.domain, self.plan.stream(7));
        ZetaNorm {
            label: zeta.label().to_string(),
            value,
            source,
            declared: zeta.norm().bound(),
        }
    }
}

/// Which side of the cup product a primitive is for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `δf_W ∪ ζ = δβ`, `β = f_W ∪ ζ + δη`.
    Left,
    /// `ζ ∪ δf_W = δβ′`, `β′ = (−1)ⁿ(ζ ∪ f_W − δν)`.
    Right,
}

/// Sampled evidence that a primitive is bounded and has the right coboundary.
#[derive(Clone, Debug, Serialize)]
pub struct PrimitiveCertificate<V: Vertex> {
    pub side: Side,
    pub primitive: String,
    pub target: String,
    pub zeta_degree: usize,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    /// `|δ(primitive) − target|` on tuples of length n + 3.
    pub coboundary_residual: SweepStats,
    /// `|primitive − triangle form|` on tuples of length n + 2.
    pub triangle_residual: SweepStats,
    /// `|δζ|` on tuples of length n + 2.
    pub cocycle_residual: SweepStats,
    /// `|η or ν along the first path − along the last path|`.
    pub path_choice_residual: SweepStats,
    /// `sup |primitive|` on tuples of length n + 2.
    pub primitive_norm: SweepStats,
    pub zeta_norm: ZetaNorm,
    pub bound: BoundInfo,
    pub status: Status,
    #[serde(skip)]
    pub cochain: Cochain<V>,
}

fn primitive_bound<V: Vertex>(f: &WeightQuasimorphism<V>, tau_norm: f64, formula: &str) -> BoundInfo {
    BoundInfo {
        formula: formula.to_string(),
        r: f.r(),
        c: f.c(),
        weight_norm: f.norm(),
        tau_norm,
        value: triangle_bound(f.r(), f.c(), f.norm(), tau_norm),
    }
}

fn check_stable<V: Vertex>(
    f: &WeightQuasimorphism<V>,
    zeta: &Cochain<V>,
    cfg: &SweepConfig<V>,
) -> Result<(), VanishingError> {
    let probe = cfg.plan.stream(11);
    let pairs = sample_pairs(&cfg.domain, probe.samples.min(500), probe.seed);
    let rests = sample_tuples(&cfg.domain, zeta.degree(), 4, probe.seed ^ 1);
    let report = phi_stability_check(zeta, f, &pairs, &rests);
    match report.witness {
        None => Ok(()),
        Some(witness) => Err(VanishingError::NotStable {
            label: zeta.label().to_string(),
            witness,
        }),
    }
}

fn sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// The cochain `f_W` of degree 1.
pub fn f_cochain<V: Vertex>(f: &WeightQuasimorphism<V>) -> Cochain<V> {
    Cochain::from_quasimorphism(Arc::new(f.clone()))
}

/// Builds `β = f_W ∪ ζ + δη` and checks it against `δf_W ∪ ζ`.
pub fn cup_primitive_left<V: Vertex>(
    f: &WeightQuasimorphism<V>,
    zeta: &Cochain<V>,
    cfg: &SweepConfig<V>,
) -> Result<PrimitiveCertificate<V>, VanishingError> {
    cup_primitive(f, zeta, cfg, Side::Left)
}

/// Builds `β′ = (−1)ⁿ(ζ ∪ f_W − δν)` and checks it against `ζ ∪ δf_W`.
pub fn cup_primitive_right<V: Vertex>(
    f: &WeightQuasimorphism<V>,
    zeta: &Cochain<V>,
    cfg: &SweepConfig<V>,
) -> Result<PrimitiveCertificate<V>, VanishingError> {
    cup_primitive(f, zeta, cfg, Side::Right)
}

fn cup_primitive<V: Vertex>(
    f: &WeightQuasimorphism<V>,
    zeta: &Cochain<V>,
    cfg: &SweepConfig<V>,
    side: Side,
) -> Result<PrimitiveCertificate<V>, VanishingError> {
    let n = require_degree(zeta)?;
    check_stable(f, zeta, cfg)?;
    let fw = f_cochain(f);
    let dfw = fw.coboundary();
    let zt = ZetaTilde::new(zeta.clone());
    let (beta, target, aux_first, aux_last) = match side {
        Side::Left => (
            fw.cup(zeta).add(&eta(f, zeta)?.coboundary()),
            dfw.cup(zeta),
            eta_with(f, zeta, PathChoice::First)?,
            eta_with(f, zeta, PathChoice::Last)?,
        ),
        Side::Right => (
            zeta.cup(&fw).sub(&nu(f, zeta)?.coboundary()).scale(sign(n)),
            zeta.cup(&dfw),
            nu_with(f, zeta, PathChoice::First)?,
            nu_with(f, zeta, PathChoice::Last)?,
        ),
    };
    let beta = beta.with_label(match side {
        Side::Left => format!("β[{}]", zeta.label()),
        Side::Right => format!("β′[{}]", zeta.label()),
    });
    let tol = tolerance(f.is_integral() && zeta.is_integral());
    let delta_beta = beta.coboundary();

    let long = cfg.tuples(n + 3, 1);
    let coboundary_residual = sweep(&long, tol, |t| delta_beta.eval(t) - target.eval(t));

    let short = cfg.tuples(n + 2, 2);
    let triangle_residual = sweep(&short, tol, |x| {
        let form = match side {
            Side::Left => triangle_sum(f, (&x[0], &x[1], &x[2]), |a| zt.eval(a, &x[2..])),
            Side::Right => triangle_sum(f, (&x[n - 1], &x[n], &x[n + 1]), |a| zt.eval(a, &x[..n])),
        };
        beta.eval(x) - form
    });
    let dzeta = zeta.coboundary();
    let cocycle_residual = sweep(&short, tol, |t| dzeta.eval(t));
    let primitive_norm = sweep(&short, f64::INFINITY, |t| beta.eval(t));

    let mid = cfg.tuples(n + 1, 3);
    let probe = &mid[..mid.len().min(1000)];
    let path_choice_residual = sweep(probe, tol, |t| aux_first.eval(t) - aux_last.eval(t));

    let zeta_norm = cfg.zeta_norm(zeta);
    let bound = primitive_bound(f, zeta_norm.value, "3(R+1)·c·‖W‖∞·‖ζ‖∞");
    let ok = coboundary_residual.within(tol)
        && triangle_residual.within(tol)
        && cocycle_residual.within(tol)
        && path_choice_residual.within(tol)
        && primitive_norm.max_abs <= bound.value + tol;
    Ok(PrimitiveCertificate {
        side,
        primitive: beta.label().to_string(),
        target: target.label().to_string(),
        zeta_degree: n,
        seed: cfg.plan.seed,
        samples: cfg.plan.samples,
        tolerance: tol,
        coboundary_residual,
        triangle_residual,
        cocycle_residual,
        path_choice_residual,
        primitive_norm,
        zeta_norm,
        bound,
        status: Status::from_bool(ok),
        cochain: beta,
    })
}

/// Sampled evidence that a Massey triple product contains zero.
#[derive(Clone, Debug, Serialize)]
pub struct MasseyCertificate<V: Vertex> {
    pub witness: String,
    pub degrees: [usize; 2],
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub beta1: PrimitiveCertificate<V>,
    pub beta2: PrimitiveCertificate<V>,
    /// `|δκ − closed form|` on tuples of length n + m + 1.
    pub kappa_identity_residual: SweepStats,
    /// `|(−1)ⁿζ₁∪β₂ − β₁∪ζ₂ − δ(ζ₁∪η + (−1)ⁿν∪ζ₂)|` on tuples of length n + m + 2.
    pub bookkeeping_residual: SweepStats,
    /// `|δβ − ((−1)ⁿζ₁∪β₂ − β₁∪ζ₂)|` on tuples of length n + m + 2.
    pub coboundary_residual: SweepStats,
    /// `|β − (−1)ⁿ·triangle sum|` on tuples of length n + m + 1.
    pub triangle_residual: SweepStats,
    /// `sup |β|` on tuples of length n + m + 1.
    pub witness_norm: SweepStats,
    pub zeta_norms: [ZetaNorm; 2],
    pub bound: BoundInfo,
    pub status: Status,
    #[serde(skip)]
    pub cochain: Cochain<V>,
}

/// Builds `β = ζ₁∪η + (−1)ⁿ ν∪ζ₂ − δκ` for the triple product
/// `⟨[ζ₁], [δf_W], [ζ₂]⟩` and checks it against `(−1)ⁿζ₁∪β₂ − β₁∪ζ₂`, where
/// β₁ is the right primitive for ζ₁ and β₂ the left primitive for ζ₂.
pub fn massey_witness<V: Vertex>(
    f: &WeightQuasimorphism<V>,
    zeta1: &Cochain<V>,
    zeta2: &Cochain<V>,
    cfg: &SweepConfig<V>,
) -> Result<MasseyCertificate<V>, VanishingError> {
    let n = require_degree(zeta1)?;
    let m = require_degree(zeta2)?;
    let beta1 = cup_primitive_right(f, zeta1, cfg)?;
    let beta2 = cup_primitive_left(f, zeta2, cfg)?;
    let tol = tolerance(f.is_integral() && zeta1.is_integral() && zeta2.is_integral());
    let s = sign(n);

    let eta2 = eta(f, zeta2)?;
    let nu1 = nu(f, zeta1)?;
    let pre = zeta1.cup(&eta2).add(&nu1.cup(zeta2).scale(s));
    let beta = pre
        .sub(&kappa(f, zeta1, zeta2)?.coboundary())
        .with_label(format!("β[{}, {}]", zeta1.label(), zeta2.label()));
    let target = zeta1.cup(&beta2.cochain).scale(s).sub(&beta1.cochain.cup(zeta2));

    let identity = KappaIdentity::new(f, zeta1, zeta2)?;
    let mid = cfg.tuples(n + m + 1, 4);
    let kappa_identity_residual = sweep(&mid, tol, |t| identity.residual(t));
    let triangle_residual = sweep(&mid, tol, |t| beta.eval(t) - identity.signed_triangle(t));
    let witness_norm = sweep(&mid, f64::INFINITY, |t| beta.eval(t));

    let long = cfg.tuples(n + m + 2, 5);
    let delta_pre = pre.coboundary();
    let bookkeeping_residual = sweep(&long, tol, |t| target.eval(t) - delta_pre.eval(t));
    let delta_beta = beta.coboundary();
    let coboundary_residual = sweep(&long, tol, |t| delta_beta.eval(t) - target.eval(t));

    let zeta_norms = [beta1.zeta_norm.clone(), beta2.zeta_norm.clone()];
    let tau_norm = zeta_norms[0].value * zeta_norms[1].value;
    let bound = primitive_bound(f, tau_norm, "3(R+1)·c·‖W‖∞·‖ζ₁‖∞·‖ζ₂‖∞");
    let ok = beta1.status.is_pass()
        && beta2.status.is_pass()
        && kappa_identity_residual.within(tol)
        && bookkeeping_residual.within(tol)
        && coboundary_residual.within(tol)
        && triangle_residual.within(tol)
        && witness_norm.max_abs <= bound.value + tol;
    Ok(MasseyCertificate {
        witness: beta.label().to_string(),
        degrees: [n, m],
        seed: cfg.plan.seed,
        samples: cfg.plan.samples,
        tolerance: tol,
        beta1,
        beta2,
        kappa_identity_residual,
        bookkeeping_residual,
        coboundary_residual,
        triangle_residual,
        witness_norm,
        zeta_norms,
        bound,
        status: Status::from_bool(ok),
        cochain: beta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::{CoherentPair, GeodesicFamily};
    use crate::graph::{FiniteGraph, OrientedEdge};
    use crate::sampling::all_tuples;
    use crate::weights::FnWeight;

    /// Path graph 0–…–6 with the 2-weight counting two consecutive rightward
    /// steps (and −1 for two leftward ones).
    fn line_instance() -> (Arc<FiniteGraph>, WeightQuasimorphism<usize>) {
        let g = Arc::new(FiniteGraph::path_graph(6));
        let pair = CoherentPair::with_index_bijections(Arc::new(GeodesicFamily::new(g.clone())), 2);
        let w = FnWeight {
            name: "steps".into(),
            size: 2,
            norm: 1.0,
            finiteness: Some(1),
            integral: true,
            eval: Arc::new(|e: &[OrientedEdge<usize>]| {
                if e[0].tail != e[1].head {
                    0.0
                } else if e[1].tail == e[0].head + 2 {
                    1.0
                } else {
                    -1.0
                }
            }),
        };
        (g, WeightQuasimorphism::new(Arc::new(w), pair).unwrap())
    }

    fn indicator_coboundary() -> Cochain<usize> {
        let ind = Cochain::new(0, "1{0}", true, Invariance::Sampled, NormInfo::Exact(1.0), |s: &[usize]| {
            f64::from(s[0] == 0)
        });
        ind.coboundary()
    }

    fn cfg(g: &FiniteGraph) -> SweepConfig<usize> {
        SweepConfig::new(g.vertices(), SamplePlan::new(400, 9)).unwrap()
    }

    #[test]
    fn zeta_tilde_is_symmetric_and_averages() {
        let zeta = indicator_coboundary();
        let zt = ZetaTilde::new(zeta.clone());
        assert_eq!(zt.eval_at(&0, &1, &[3]), 0.5 * (zeta.eval(&[0, 3]) + zeta.eval(&[1, 3])));
        assert_eq!(zt.eval_at(&0, &1, &[3]), zt.eval_at(&1, &0, &[3]));
        let c = ZetaTilde::new(Cochain::constant(1, 4.0));
        assert_eq!(c.eval_at(&2, &5, &[1]), 4.0);
    }

    #[test]
    fn degenerate_inputs_vanish() {
        let (_, f) = line_instance();
        let zeta = indicator_coboundary();
        assert_eq!(eta(&f, &zeta).unwrap().eval(&[3, 3]), 0.0);
        assert_eq!(nu(&f, &zeta).unwrap().eval(&[4, 4]), 0.0);
        assert_eq!(eta(&f, &Cochain::zero(1)).unwrap().eval(&[0, 6]), 0.0);
        assert_eq!(kappa(&f, &zeta, &Cochain::zero(1)).unwrap().eval(&[0, 6]), 0.0);
        assert_eq!(
            eta(&f, &Cochain::constant(0, 1.0)).unwrap_err(),
            VanishingError::UnsupportedDegree(0)
        );
    }

    #[test]
    fn eta_matches_direct_summation() {
        let (_, f) = line_instance();
        let zeta = indicator_coboundary();
        let e = eta(&f, &zeta).unwrap();
        // Path 1→5 has supported fragments (1,2,3), (2,3,4), (3,4,5), each of weight 1.
        let direct: f64 = [(1, 3), (2, 4), (3, 5)]
            .iter()
            .map(|&(h, t)| 0.5 * (zeta.eval(&[h, 5]) + zeta.eval(&[t, 5])))
            .sum();
        assert_eq!(e.eval(&[1, 5]), direct);
    }

    #[test]
    fn primitives_on_a_line() {
        let (g, f) = line_instance();
        let zeta = indicator_coboundary();
        let c = cfg(&g);
        for cert in [
            cup_primitive_left(&f, &zeta, &c).unwrap(),
            cup_primitive_right(&f, &zeta, &c).unwrap(),
        ] {
            assert_eq!(cert.status, Status::Pass, "{cert:#?}");
            assert_eq!(cert.coboundary_residual.max_abs, 0.0);
        }
        let zero = cup_primitive_left(&f, &Cochain::zero(2), &c).unwrap();
        assert_eq!(zero.primitive_norm.max_abs, 0.0);
    }

    #[test]
    fn kappa_identity_on_a_line() {
        let (g, f) = line_instance();
        let zeta = indicator_coboundary();
        let id = KappaIdentity::new(&f, &zeta, &zeta).unwrap();
        for t in all_tuples(&g.vertices(), 3) {
            assert_eq!(id.residual(&t), 0.0, "{t:?}");
        }
        let cert = massey_witness(&f, &zeta, &zeta, &cfg(&g)).unwrap();
        assert_eq!(cert.status, Status::Pass, "{cert:#?}");
    }
}
