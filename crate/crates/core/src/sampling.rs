//! Seeded sampling of vertex tuples from a finite domain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// How many tuples to draw and from which seed.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SamplePlan {
    pub samples: usize,
    pub seed: u64,
}

impl SamplePlan {
    pub fn new(samples: usize, seed: u64) -> Self {
        SamplePlan { samples, seed }
    }

    /// A plan with the same seed family but a different stream, so that two
    /// sweeps of one run do not reuse the same tuples.
    pub fn stream(&self, stream: u64) -> Self {
        SamplePlan {
            samples: self.samples,
            seed: self.seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15),
        }
    }
}

impl Default for SamplePlan {
    fn default() -> Self {
        SamplePlan {
            samples: 10_000,
            seed: 0x5EED,
        }
    }
}

/// Draws `count` tuples of length `arity`, each coordinate uniform on `domain`.
pub fn sample_tuples<V: Clone>(domain: &[V], arity: usize, count: usize, seed: u64) -> Vec<Vec<V>> {
    assert!(!domain.is_empty(), "cannot sample from an empty domain");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..arity)
                .map(|_| domain[rng.gen_range(0..domain.len())].clone())
                .collect()
        })
        .collect()
}

pub fn sample_pairs<V: Clone>(domain: &[V], count: usize, seed: u64) -> Vec<(V, V)> {
    sample_tuples(domain, 2, count, seed)
        .into_iter()
        .map(|mut t| {
            let y = t.pop().unwrap();
            let x = t.pop().unwrap();
            (x, y)
        })
        .collect()
}

pub fn all_pairs<V: Clone>(domain: &[V]) -> Vec<(V, V)> {
    let mut out = Vec::with_capacity(domain.len() * domain.len());
    for x in domain {
        for y in domain {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}

pub fn all_triples<V: Clone>(domain: &[V]) -> Vec<[V; 3]> {
    let mut out = Vec::with_capacity(domain.len().pow(3));
    for x in domain {
        for y in domain {
            for z in domain {
                out.push([x.clone(), y.clone(), z.clone()]);
            }
        }
    }
    out
}

/// Every tuple of length `arity` over `domain`, in lexicographic order.
pub fn all_tuples<V: Clone>(domain: &[V], arity: usize) -> Vec<Vec<V>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * domain.len());
        for prefix in &out {
            for v in domain {
                let mut t = prefix.clone();
                t.push(v.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// All pairs when there are at most `limit` of them, otherwise a seeded sample.
pub fn pairs_up_to<V: Clone>(domain: &[V], limit: usize, seed: u64) -> Vec<(V, V)> {
    if domain.len().saturating_mul(domain.len()) <= limit {
        all_pairs(domain)
    } else {
        sample_pairs(domain, limit, seed)
    }
}
