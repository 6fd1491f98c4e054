use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use clap::Args;
use wqm::brooks_delta::{brooks_qm_direct, BrooksWord};
use wqm::median::{median_instance, staircase_length, tree_segment_of_word, TreeMedianQm};
use wqm::report::Status;
use wqm::sampling::{all_pairs, sample_pairs};
use wqm::weights::ActionQuasimorphism;
use wqm::ReducedWord;

use crate::instance::{FiniteComplex, Instance, InstanceArgs};
use crate::report::{Report, Row};

#[derive(Args, Clone, Debug)]
pub struct MedianArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,

    /// Search for the longest staircase.
    #[arg(long)]
    pub staircase: bool,

    /// Staircase search depth cap.
    #[arg(long, default_value_t = 8)]
    pub cap: usize,

    /// Check weight and direct median quasimorphisms agree for every segment of this length.
    #[arg(long)]
    pub ell: Option<usize>,

    /// On tree-F2, compare f_s with the Brooks quasimorphism of the segment word.
    #[arg(long)]
    pub agree_brooks: bool,
}

pub fn run(args: &MedianArgs) -> Result<Report> {
    let mut report = Report::new("median", args.instance.config());
    match args.instance.resolve()? {
        Instance::Finite(fc) => finite(args, &fc, &mut report)?,
        Instance::Tree => tree(args, &mut report)?,
        Instance::Free(_) => bail!("median needs --complex or --graph"),
    }
    Ok(report)
}

fn finite(args: &MedianArgs, fc: &FiniteComplex, report: &mut Report) -> Result<()> {
    let c = &fc.complex;
    let g = c.graph();
    report.row(Row::info("vertices", g.vertex_count()));
    report.row(Row::info("edges", g.edge_count()));
    report.row(Row::info("hyperplanes", c.hyperplane_count()));
    report.row(Row::check("median graph", fc.name.as_str(), Status::Pass));
    report.set("vertices", g.vertex_count());
    report.set("edges", g.edge_count());
    report.set("hyperplanes", c.hyperplane_count());
    report.set(
        "halfspaces",
        (0..c.halfspace_count()).map(|h| c.label(h)).collect::<Vec<_>>(),
    );

    if args.staircase {
        let s = staircase_length(c, args.cap);
        report.row(Row::info("staircase length σ", s.length));
        report.row(Row::check("staircase search complete", format!("cap {}", s.cap), Status::from_bool(!s.capped)));
        report.set("staircase", &s);
    }

    let pairs = all_pairs(&g.vertices());
    if let Some(s) = args.instance.finite_segment(c)? {
        let inst = median_instance(c.clone(), &s, &fc.action)?;
        let mismatch = pairs.iter().find(|(x, y)| inst.weight_qm.eval(x, y) != inst.direct.value(*x, *y) as f64);
        let base = g.vertices()[0];
        let values: BTreeMap<String, i64> = g
            .vertices()
            .into_iter()
            .map(|y| (g.name(y).to_string(), inst.direct.value(base, y)))
            .collect();
        report.row(Row::info("segment", c.segment_label(&s)));
        report.row(Row::info("empirical c", inst.empirical_c));
        report.row(Row::check(
            "weight qm = median qm",
            format!("{} pairs", pairs.len()),
            Status::from_bool(mismatch.is_none()),
        ));
        report.set("segment", c.segment_label(&s));
        report.set("empirical_c", inst.empirical_c);
        report.set("base", g.name(base));
        report.set("values", values);
        report.set("mismatch", mismatch.map(|(x, y)| format!("({}, {})", g.name(*x), g.name(*y))));
    }

    if let Some(ell) = args.ell {
        let segments = c.segments(ell);
        let mut failures = Vec::new();
        for s in &segments {
            let inst = median_instance(c.clone(), s, &fc.action)?;
            if pairs.iter().any(|(x, y)| inst.weight_qm.eval(x, y) != inst.direct.value(*x, *y) as f64) {
                failures.push(c.segment_label(s));
            }
        }
        report.row(Row::check(
            format!("weight qm = median qm, all length-{ell} segments"),
            format!("{} segments", segments.len()),
            Status::from_bool(failures.is_empty()),
        ));
        report.set("segments_checked", segments.len());
        report.set("segment_failures", failures);
    }
    Ok(())
}

fn tree(args: &MedianArgs, report: &mut Report) -> Result<()> {
    let inst = &args.instance;
    if args.staircase {
        bail!("staircase search needs a finite complex (try --complex tree:N)");
    }
    let Some(text) = &inst.segment else {
        bail!("tree-F2 needs --segment WORD");
    };
    let alphabet = inst.alphabet();
    let word = alphabet.parse(text).with_context(|| format!("segment word {text:?}"))?;
    if word.is_identity() {
        bail!("segment word must be non-empty");
    }
    let f = TreeMedianQm::new(&tree_segment_of_word(&word));
    let ball = inst.ball()?;
    let e = ReducedWord::identity();
    let values: BTreeMap<String, i64> = ball.iter().map(|g| (g.to_string(), f.value(&e, g))).collect();

    let pairs = sample_pairs(&ball, inst.samples, inst.seed);
    let asym = pairs.iter().find(|(x, y)| f.eval(x, y) != -f.eval(y, x));
    report.row(Row::info("segment length", word.len()));
    report.row(Row::info("ball size", ball.len()));
    report.row(Row::check(
        "antisymmetry",
        format!("{} pairs", pairs.len()),
        Status::from_bool(asym.is_none()),
    ));
    report.set("segment", word.to_string());
    report.set("ball_size", ball.len());
    report.set("values", values);

    if args.agree_brooks {
        let omega = BrooksWord::new(word.clone())?;
        let mismatch = ball.iter().find(|g| f.value(&e, g) != brooks_qm_direct(&omega, g));
        report.row(Row::check(
            "f_s = Brooks φ_ω on ball",
            format!("{} words", ball.len()),
            Status::from_bool(mismatch.is_none()),
        ));
        report.set("brooks_mismatch", mismatch.map(|g| g.to_string()));
    }
    Ok(())
}
