use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use wqm::report::Status;
use wqm::vanishing::{cup_primitive_left, cup_primitive_right, massey_witness, SweepConfig, VanishingError};

use crate::instance::{parse_zeta, FreeInstance, Instance, InstanceArgs};
use crate::report::{Report, Row};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
    Both,
}

#[derive(Args, Clone, Debug)]
pub struct CupArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,

    /// Cocycle ζ: brooks:WORD (δφ̂ of a Brooks quasimorphism), zero:DEGREE or table:FILE.
    #[arg(long)]
    pub zeta: String,

    #[arg(long, value_enum, default_value_t = SideArg::Both)]
    pub side: SideArg,
}

#[derive(Args, Clone, Debug)]
pub struct MasseyArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,

    #[arg(long)]
    pub zeta1: String,

    #[arg(long)]
    pub zeta2: String,
}

fn free(args: &InstanceArgs) -> Result<FreeInstance> {
    match args.resolve()? {
        Instance::Free(inst) => Ok(inst),
        _ => bail!("cup and massey run on F₂ instances (--brooks or --delta)"),
    }
}

/// A failed Φ-stability preflight is a FAIL report carrying the witness; other
/// errors abort.
fn preflight(report: &mut Report, e: VanishingError) -> Result<()> {
    match e {
        VanishingError::NotStable { label, witness } => {
            report.set("preflight", serde_json::json!({ "cochain": label, "witness": witness }));
            report.row(Row::check(format!("Φ-stability of {label}"), witness, Status::Fail));
            Ok(())
        }
        e => Err(e.into()),
    }
}

pub fn run_cup(args: &CupArgs) -> Result<Report> {
    let mut report = Report::new("cup", args.instance.config());
    let inst = free(&args.instance)?;
    let zeta = parse_zeta(&inst.alphabet, &args.zeta)?;
    let cfg = SweepConfig::new(inst.domain.clone(), args.instance.plan())?;
    report.set("zeta", zeta.label());
    let mut certs = Vec::new();
    let sides: &[SideArg] = match args.side {
        SideArg::Both => &[SideArg::Left, SideArg::Right],
        SideArg::Left => &[SideArg::Left],
        SideArg::Right => &[SideArg::Right],
    };
    for side in sides {
        let cert = if *side == SideArg::Left {
            cup_primitive_left(&inst.f, &zeta, &cfg)
        } else {
            cup_primitive_right(&inst.f, &zeta, &cfg)
        };
        match cert {
            Ok(c) => {
                report.row(Row::check(
                    format!("{} residual", c.primitive),
                    c.coboundary_residual.max_abs,
                    Status::from_bool(c.coboundary_residual.within(c.tolerance)),
                ));
                report.row(Row::check(
                    format!("‖{}‖ ≤ bound", c.primitive),
                    format!("{} ≤ {}", c.primitive_norm.max_abs, c.bound.value),
                    Status::from_bool(c.primitive_norm.max_abs <= c.bound.value + c.tolerance),
                ));
                report.row(Row::check(format!("{} certificate", c.primitive), "", c.status));
                certs.push(c);
            }
            Err(e) => {
                preflight(&mut report, e)?;
                break;
            }
        }
    }
    report.set("certificates", &certs);
    Ok(report)
}

pub fn run_massey(args: &MasseyArgs) -> Result<Report> {
    let mut report = Report::new("massey", args.instance.config());
    let inst = free(&args.instance)?;
    let z1 = parse_zeta(&inst.alphabet, &args.zeta1)?;
    let z2 = parse_zeta(&inst.alphabet, &args.zeta2)?;
    let cfg = SweepConfig::new(inst.domain.clone(), args.instance.plan())?;
    report.set("zeta1", z1.label());
    report.set("zeta2", z2.label());
    match massey_witness(&inst.f, &z1, &z2, &cfg) {
        Ok(c) => {
            report.row(Row::check(
                "κ identity residual",
                c.kappa_identity_residual.max_abs,
                Status::from_bool(c.kappa_identity_residual.within(c.tolerance)),
            ));
            report.row(Row::check(
                "δβ residual",
                c.coboundary_residual.max_abs,
                Status::from_bool(c.coboundary_residual.within(c.tolerance)),
            ));
            report.row(Row::check(
                "‖β‖ ≤ bound",
                format!("{} ≤ {}", c.witness_norm.max_abs, c.bound.value),
                Status::from_bool(c.witness_norm.max_abs <= c.bound.value + c.tolerance),
            ));
            report.row(Row::check("certificate", &c.witness, c.status));
            report.set("certificate", &c);
        }
        Err(e) => preflight(&mut report, e)?,
    }
    Ok(report)
}
