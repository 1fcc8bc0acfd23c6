//! Time-domain reflection compared with the closed-form `R1`.

use cavgate_core::analytic::{r1_at, reflection_r1, ReflectionQuery};
use cavgate_core::dynamics::{evolve_deterministic, extract_reflection, plan_run, Channel};
use cavgate_core::{Complex64, SystemParams};
use serde::Serialize;

use super::{final_state_json, trajectory_csv};
use crate::config::CriticalChoice;
use crate::output::{pair, Artifact, Verdict};
use crate::{CliError, Report, RunConfig};

/// Largest relative error `|R_est - R1| / |R1|` accepted.
pub const RELATIVE_TOLERANCE: f64 = 0.02;
/// Largest `|R_est|` accepted where `R1` vanishes.
pub const NULL_TOLERANCE: f64 = 0.05;
/// Below this `|R1|` the comparison switches to the null check.
const NULL_THRESHOLD: f64 = 0.05;
/// Narrowband requirement `Δω <= 0.05 max(|Ω_c|, κ_Σ)`.
pub const NARROWBAND_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub kappa: f64,
    pub delta_0: f64,
    pub r_est: [f64; 2],
    pub r1: [f64; 2],
    pub abs_error: f64,
    pub rel_error: Option<f64>,
    pub reflected_fraction: f64,
    pub strong_coupling: bool,
    pub weak_coupling: bool,
    pub narrowband_ok: Option<bool>,
    pub modes: usize,
    pub steps: usize,
    pub dt: f64,
    pub t_end: f64,
    pub t1: Option<f64>,
    pub max_leak_residual: f64,
}

pub fn narrowband(p: &SystemParams, bandwidth: f64) -> bool {
    bandwidth <= NARROWBAND_FRACTION * p.rabi_abs().max(p.kappa_sigma())
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.params()?;
    if !narrowband(&p, cfg.grid.bandwidth) {
        return Err(CliError::Config(format!(
            "bandwidth {} is not narrowband: need <= {} max(|Ω_c|, κ_Σ)",
            cfg.grid.bandwidth, NARROWBAND_FRACTION
        )));
    }
    let plan = plan_run(&p, &cfg.plan_request())?;
    let record = evolve_deterministic(&plan.state0, &p, &plan.grid, &plan.settings)?;
    let est = extract_reflection(&record, &plan.state0, Channel::E1)?;
    let analytic = reflection_r1(&p, &ReflectionQuery { bandwidth: Some(cfg.grid.bandwidth), incident_angle: Some(cfg.pulse.phi) });
    let r1 = analytic.r1;
    let abs_error = (est.r_est - r1).norm();
    let null_case = cfg.system.critical != CriticalChoice::None || r1.norm() < NULL_THRESHOLD;
    let rel_error = (r1.norm() >= NULL_THRESHOLD).then(|| abs_error / r1.norm());

    let mut verdicts = Vec::new();
    if null_case {
        verdicts.push(Verdict::new(
            "reflection-null",
            est.r_est.norm() <= NULL_TOLERANCE,
            format!("|R_est| = {:.2e} (limit {NULL_TOLERANCE}), |R1| = {:.2e}", est.r_est.norm(), r1.norm()),
        ));
        if cfg.system.critical != CriticalChoice::None {
            verdicts.push(Verdict::new("analytic-null", r1.norm() < 1e-10, format!("|R1| = {:.2e}", r1.norm())));
        }
    } else {
        let rel = rel_error.unwrap_or(f64::INFINITY);
        verdicts.push(Verdict::new(
            "oracle-agreement",
            rel <= RELATIVE_TOLERANCE,
            format!("R_est = {:.6}, R1 = {:.6}, relative error {rel:.2e}", est.r_est, r1),
        ));
    }
    verdicts.push(Verdict::new(
        "norm-leak",
        record.max_leak_residual < plan.settings.leak_tolerance,
        format!("max residual {:.2e} per unit time", record.max_leak_residual),
    ));

    let summary = OracleSummary {
        kappa: p.kappa,
        delta_0: p.delta_0,
        r_est: pair(est.r_est),
        r1: pair(r1),
        abs_error,
        rel_error,
        reflected_fraction: est.reflected_fraction,
        strong_coupling: analytic.flags.strong_coupling,
        weak_coupling: analytic.flags.weak_coupling,
        narrowband_ok: analytic.flags.narrowband_ok,
        modes: plan.grid.len(),
        steps: plan.settings.steps(),
        dt: plan.settings.dt,
        t_end: record.t_end,
        t1: record.t1,
        max_leak_residual: record.max_leak_residual,
    };
    let modes = Artifact::csv(
        "modes.csv",
        "cavgate oracle-modes v1",
        &["detuning", "ratio_re", "ratio_im", "r1_re", "r1_im"],
        est.ratios.iter().enumerate().filter_map(|(j, ratio)| {
            let ratio: Complex64 = (*ratio)?;
            let dk = plan.grid.detuning(j);
            let r = r1_at(&p, dk);
            Some(vec![dk, ratio.re, ratio.im, r.re, r.im])
        }),
    );
    Ok(Report {
        experiment: "oracle-compare".into(),
        artifacts: vec![
            Artifact::json("oracle.json", &summary),
            modes,
            trajectory_csv("trajectory.csv", &record),
            final_state_json("final_state.json", &plan, &record),
        ],
        verdicts,
    })
}
