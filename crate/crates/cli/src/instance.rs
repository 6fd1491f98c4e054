//! Turning command-line flags into instances, domains and cochains.

use std::fs;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use serde::Serialize;
use wqm::brooks_delta::{brooks_group_qm, brooks_qm, decomposition_by_name, delta_qm, BrooksWord, DeltaDecomposition, PieceWeight};
use wqm::cochain::{hat_coboundary, table_cochain_from_json, Cochain};
use wqm::graph::{FiniteGraph, PermutationAction};
use wqm::median::{builtin_complex, HSegment, MedianComplex};
use wqm::sampling::SamplePlan;
use wqm::weights::WeightQuasimorphism;
use wqm::words::FreeGroupTranslation;
use wqm::{Alphabet, ReducedWord};

pub const TREE_F2: &str = "tree-F2";

#[derive(Args, Clone, Debug)]
pub struct InstanceArgs {
    /// Brooks word ω, as ASCII ("ab") or a JSON string ("\"ab\"").
    #[arg(long, conflicts_with_all = ["delta", "complex", "graph"])]
    pub brooks: Option<String>,

    /// Δ-decomposition: letters, syllables or broken.
    #[arg(long, conflicts_with_all = ["complex", "graph"])]
    pub delta: Option<String>,

    /// Piece weight λ as JSON, e.g. '{"a":1}'.
    #[arg(long, requires = "delta")]
    pub lambda: Option<String>,

    /// Built-in complex: square, grid:AxB, path:N, tree:N, cycle:N, staircase:K, or tree-F2.
    #[arg(long, conflicts_with = "graph")]
    pub complex: Option<String>,

    /// Finite graph JSON file: {"vertices": [..], "edges": [[u, v], ..], "generators": [..]}.
    #[arg(long)]
    pub graph: Option<String>,

    /// Segment: halfspace ids ("0,5") on a finite complex, a word ("ab") on tree-F2.
    #[arg(long)]
    pub segment: Option<String>,

    /// Ball radius in F₂.
    #[arg(long, default_value_t = 3)]
    pub radius: usize,

    /// Largest radius accepted.
    #[arg(long, default_value_t = 6)]
    pub max_radius: usize,

    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,

    #[arg(long, default_value_t = 0x5EED)]
    pub seed: u64,
}

/// Everything a report needs to be reproduced.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segment: Option<String>,
    pub samples: usize,
    pub seed: u64,
}

pub struct FreeInstance {
    pub alphabet: Alphabet,
    pub f: WeightQuasimorphism<ReducedWord>,
    pub action: FreeGroupTranslation,
    pub domain: Vec<ReducedWord>,
}

pub struct FiniteComplex {
    pub name: String,
    pub complex: Arc<MedianComplex>,
    pub action: PermutationAction,
}

pub enum Instance {
    Free(FreeInstance),
    Finite(FiniteComplex),
    Tree,
}

impl InstanceArgs {
    pub fn plan(&self) -> SamplePlan {
        SamplePlan::new(self.samples, self.seed)
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(2).expect("rank 2").with_max_radius(self.max_radius)
    }

    pub fn ball(&self) -> Result<Vec<ReducedWord>> {
        Ok(self.alphabet().ball(self.radius)?)
    }

    pub fn describe(&self) -> String {
        if let Some(w) = &self.brooks {
            format!("brooks:{}", parse_brooks_text(w).unwrap_or_else(|_| w.clone()))
        } else if let Some(d) = &self.delta {
            format!("delta:{d}:{}", self.lambda.as_deref().unwrap_or("{}"))
        } else if let Some(c) = &self.complex {
            format!("complex:{c}")
        } else if let Some(g) = &self.graph {
            format!("graph:{g}")
        } else {
            "none".to_string()
        }
    }

    pub fn config(&self) -> RunConfig {
        let free = self.brooks.is_some() || self.delta.is_some() || self.complex.as_deref() == Some(TREE_F2);
        RunConfig {
            instance: self.describe(),
            radius: free.then_some(self.radius),
            complex: self.complex.clone().or_else(|| self.graph.clone()),
            segment: self.segment.clone(),
            samples: self.samples,
            seed: self.seed,
        }
    }

    pub fn brooks_word(&self) -> Result<Option<BrooksWord>> {
        self.brooks
            .as_deref()
            .map(|w| Ok(BrooksWord::parse(&self.alphabet(), &parse_brooks_text(w)?)?))
            .transpose()
    }

    pub fn decomposition(&self) -> Result<Option<(String, Arc<dyn DeltaDecomposition>)>> {
        self.delta
            .as_deref()
            .map(|name| {
                decomposition_by_name(name)
                    .map(|d| (name.to_string(), d))
                    .ok_or_else(|| anyhow!("unknown decomposition {name:?} (letters, syllables, broken)"))
            })
            .transpose()
    }

    pub fn resolve(&self) -> Result<Instance> {
        let alphabet = self.alphabet();
        let free = |f: WeightQuasimorphism<ReducedWord>| -> Result<Instance> {
            Ok(Instance::Free(FreeInstance {
                domain: self.ball()?,
                action: FreeGroupTranslation::new(alphabet),
                alphabet,
                f,
            }))
        };
        if let Some(omega) = self.brooks_word()? {
            return free(brooks_qm(alphabet, &omega)?);
        }
        if let Some((_, delta)) = self.decomposition()? {
            let text = self.lambda.as_deref().ok_or_else(|| anyhow!("--delta needs --lambda"))?;
            let lambda = PieceWeight::from_json(&alphabet, text)?;
            return free(delta_qm(&lambda, delta)?);
        }
        if self.complex.as_deref() == Some(TREE_F2) {
            return Ok(Instance::Tree);
        }
        let (name, graph, action) = if let Some(spec) = &self.complex {
            let (g, a) = builtin_complex(spec)?;
            (spec.clone(), g, a)
        } else if let Some(path) = &self.graph {
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let (g, a) = FiniteGraph::from_json(&text)?;
            (path.clone(), g, a)
        } else {
            bail!("no instance: pass --brooks, --delta, --complex or --graph");
        };
        let complex = Arc::new(MedianComplex::new(Arc::new(graph)).with_context(|| format!("validating {name}"))?);
        Ok(Instance::Finite(FiniteComplex { name, complex, action }))
    }

    /// The segment on a finite complex.
    pub fn finite_segment(&self, c: &MedianComplex) -> Result<Option<HSegment>> {
        let Some(text) = &self.segment else { return Ok(None) };
        let ids = text
            .split(',')
            .map(|s| s.trim().parse::<usize>().with_context(|| format!("bad halfspace id {s:?}")))
            .collect::<Result<Vec<_>>>()?;
        if let Some(&bad) = ids.iter().find(|&&h| h >= c.halfspace_count()) {
            bail!("halfspace {bad} out of range (complex has {})", c.halfspace_count());
        }
        if !c.is_segment(&ids) {
            bail!("{text} is not a tightly nested chain");
        }
        Ok(Some(HSegment::new(&ids)))
    }
}

/// Accepts `ab` or the JSON string `"ab"`.
fn parse_brooks_text(s: &str) -> Result<String> {
    if s.trim_start().starts_with('"') {
        Ok(serde_json::from_str::<String>(s).context("--brooks JSON")?)
    } else {
        Ok(s.to_string())
    }
}

/// `brooks:W` (δφ̂ of the Brooks quasimorphism of W), `zero:N`, or `table:FILE`.
pub fn parse_zeta(alphabet: &Alphabet, spec: &str) -> Result<Cochain<ReducedWord>> {
    let (kind, arg) = spec.split_once(':').ok_or_else(|| anyhow!("cochain {spec:?}: expected KIND:ARG"))?;
    match kind {
        "brooks" => {
            let omega = BrooksWord::parse(alphabet, arg)?;
            Ok(hat_coboundary(&brooks_group_qm(&omega)))
        }
        "zero" => {
            let n: usize = arg.parse().with_context(|| format!("degree {arg:?}"))?;
            Ok(Cochain::zero(n))
        }
        "table" => {
            let text = fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
            Ok(table_cochain_from_json(alphabet, &text)?)
        }
        _ => bail!("unknown cochain kind {kind:?} (brooks, zero, table)"),
    }
}
