use anyhow::{anyhow, bail, Result};
use wqm::brooks_delta::verify_delta_axioms;
use wqm::coherent::{verify_coherence, verify_qmp, CoherentPair};
use wqm::graph::GraphAction;
use wqm::median::{median_instance, median_pair};
use wqm::report::Status;
use wqm::sampling::{all_pairs, all_triples, sample_tuples};
use wqm::weights::verify_weight;
use wqm::{CheckEntry, Vertex};

use crate::instance::{Instance, InstanceArgs};
use crate::report::{Report, Row};

/// Pair and triple sweeps run exhaustively below these sizes.
const EXHAUSTIVE_PAIRS: usize = 250_000;
const EXHAUSTIVE_TRIPLES: usize = 2_000_000;

fn pairs_of<V: Vertex>(domain: &[V], args: &InstanceArgs) -> Vec<(V, V)> {
    if domain.len().pow(2) <= EXHAUSTIVE_PAIRS {
        all_pairs(domain)
    } else {
        wqm::sampling::sample_pairs(domain, args.samples, args.seed)
    }
}

fn triples_of<V: Vertex>(domain: &[V], args: &InstanceArgs) -> Vec<[V; 3]> {
    if domain.len().pow(3) <= EXHAUSTIVE_TRIPLES {
        all_triples(domain)
    } else {
        sample_tuples(domain, 3, args.samples, args.seed)
            .into_iter()
            .map(|t| [t[0].clone(), t[1].clone(), t[2].clone()])
            .collect()
    }
}

fn entry_rows(report: &mut Report, entries: &[CheckEntry]) {
    for e in entries {
        report.row(Row::check(e.condition.clone(), e.counterexample.clone().unwrap_or_default(), e.status));
    }
}

pub fn run_weight(args: &InstanceArgs) -> Result<Report> {
    let mut report = Report::new("verify-weight", args.config());
    let w = match args.resolve()? {
        Instance::Free(inst) => {
            let pairs = pairs_of(&inst.domain, args);
            verify_weight(inst.f.weight.as_ref(), &inst.f.pair, &inst.action, &pairs)?
        }
        Instance::Finite(fc) => {
            let s = args
                .finite_segment(&fc.complex)?
                .ok_or_else(|| anyhow!("verify-weight on a finite complex needs --segment"))?;
            let inst = median_instance(fc.complex.clone(), &s, &fc.action)?;
            let pairs = all_pairs(&fc.complex.graph().vertices());
            verify_weight(inst.weight_qm.weight.as_ref(), &inst.weight_qm.pair, &fc.action, &pairs)?
        }
        Instance::Tree => bail!("verify-weight on tree-F2: use --brooks"),
    };
    report.row(Row::info("weight", &w.weight));
    report.row(Row::info("empirical c", w.empirical_c));
    entry_rows(&mut report, &w.entries);
    report.set("report", &w);
    Ok(report)
}

fn coherence<V: Vertex>(
    report: &mut Report,
    pair: &CoherentPair<V>,
    action: &dyn GraphAction<V>,
    domain: &[V],
    args: &InstanceArgs,
) {
    let entries = verify_coherence(pair, action, &pairs_of(domain, args));
    let r = pair.family.declared_r();
    let qmp = verify_qmp(pair.family.as_ref(), r, &triples_of(domain, args));
    entry_rows(report, &entries);
    report.row(Row::check(
        format!("quasi-median property, R = {r}"),
        qmp.counterexample.clone().unwrap_or_else(|| format!("{} triples", qmp.triples_checked)),
        Status::from_bool(qmp.holds),
    ));
    report.set("family", pair.family.name());
    report.set("entries", &entries);
    report.set("qmp", &qmp);
}

pub fn run_coherence(args: &InstanceArgs) -> Result<Report> {
    let mut report = Report::new("verify-coherence", args.config());
    match args.resolve()? {
        Instance::Free(inst) => coherence(&mut report, &inst.f.pair, &inst.action, &inst.domain, args),
        Instance::Finite(fc) => {
            let ell = args.finite_segment(&fc.complex)?.map_or(1, |s| s.len());
            let pair = median_pair(&fc.complex, ell);
            let vertices = fc.complex.graph().vertices();
            coherence(&mut report, &pair, &fc.action, &vertices, args);
        }
        Instance::Tree => bail!("verify-coherence on tree-F2: use --brooks"),
    }
    Ok(report)
}

pub fn run_delta(args: &InstanceArgs) -> Result<Report> {
    let mut report = Report::new("verify-delta", args.config());
    let (name, delta) = args.decomposition()?.ok_or_else(|| anyhow!("verify-delta needs --delta"))?;
    let d = verify_delta_axioms(delta.as_ref(), &args.ball()?);
    report.row(Row::info("decomposition", &name));
    report.row(Row::info("proven", d.proven));
    report.row(Row::info("empirical R", d.empirical_r));
    entry_rows(&mut report, &d.entries);
    report.set("report", &d);
    Ok(report)
}
