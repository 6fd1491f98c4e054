use anyhow::{bail, Result};
use wqm::report::{tolerance, Status};
use wqm::sampling::{all_triples, sample_tuples};
use wqm::weights::{defect, defect_exhaustive, ActionQuasimorphism, DefectReport, WeightQuasimorphism};
use wqm::Vertex;

use super::DefectBound;
use crate::instance::{Instance, InstanceArgs};
use crate::report::{Report, Row};

/// Balls with at most this many triples are swept exhaustively.
const EXHAUSTIVE_TRIPLES: usize = 20_000_000;

pub fn run(args: &InstanceArgs) -> Result<Report> {
    let mut report = Report::new("defect", args.config());
    match args.resolve()? {
        Instance::Free(inst) => {
            let n = inst.domain.len();
            let d = if n.pow(3) <= EXHAUSTIVE_TRIPLES {
                defect_exhaustive(&inst.f, &inst.domain)
            } else {
                let triples: Vec<_> = sample_tuples(&inst.domain, 3, args.samples, args.seed)
                    .into_iter()
                    .map(|t| [t[0].clone(), t[1].clone(), t[2].clone()])
                    .collect();
                defect(&inst.f, &triples)
            };
            fill(&mut report, &inst.f, d, n.pow(3) <= EXHAUSTIVE_TRIPLES, n);
        }
        Instance::Finite(fc) => {
            let Some(s) = args.finite_segment(&fc.complex)? else {
                bail!("defect on a finite complex needs --segment");
            };
            let inst = wqm::median::median_instance(fc.complex.clone(), &s, &fc.action)?;
            let vertices = fc.complex.graph().vertices();
            let d = defect(&inst.weight_qm, &all_triples(&vertices));
            report.set("segment_label", fc.complex.segment_label(&s));
            report.set("empirical_c", inst.empirical_c);
            fill(&mut report, &inst.weight_qm, d, true, vertices.len());
        }
        Instance::Tree => bail!("defect on tree-F2: use --brooks with the segment word instead"),
    }
    Ok(report)
}

fn fill<V: Vertex>(report: &mut Report, f: &WeightQuasimorphism<V>, d: DefectReport, exhaustive: bool, domain: usize) {
    let bound = DefectBound::of(f);
    let tol = tolerance(f.is_integral());
    let ok = d.defect <= bound.value + tol;
    report.row(Row::info("domain size", domain));
    report.row(Row::info("triples checked", d.triples_checked));
    report.row(Row::check(
        "defect ≤ 3(R+1)·c·‖W‖∞",
        format!("{} ≤ {}", d.defect, bound.value),
        Status::from_bool(ok),
    ));
    report.set("weight", f.weight.name());
    report.set("domain_size", domain);
    report.set("exhaustive", exhaustive);
    report.set("defect", &d);
    report.set("bound", bound);
    report.set("tolerance", tol);
}
