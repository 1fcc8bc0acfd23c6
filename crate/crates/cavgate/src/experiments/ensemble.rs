//! Noisy ensemble: norm bookkeeping and the dephasing noise in the
//! reflected pulse.

use cavgate_core::analytic::{dephasing_fraction, DephasingRegime};
use cavgate_core::dynamics::{plan_run, Ensemble, EnsembleStats, NoiseClosure, StochasticRun};
use rayon::prelude::*;
use serde::Serialize;

use super::trajectory_csv;
use crate::config::{ClosureChoice, CriticalChoice};
use crate::output::{Artifact, Verdict};
use crate::{CliError, Report, RunConfig};

/// Standard errors allowed between an ensemble mean and its target.
pub const STANDARD_ERRORS: f64 = 3.0;
/// Relative tolerance on the critical-coupling noise fraction.
pub const DEPHASING_TOLERANCE: f64 = 0.2;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub std_error: f64,
}

impl From<EnsembleStats> for Stat {
    fn from(s: EnsembleStats) -> Self {
        Self { mean: s.mean, std_error: s.std_error }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleSummary {
    pub n_traj: usize,
    pub seed: u64,
    pub closure: ClosureChoice,
    pub modes: usize,
    pub steps: usize,
    pub final_norm: Stat,
    pub final_ground: Stat,
    pub deterministic_deficit: f64,
    pub noise_fraction: Stat,
    /// First-order estimate at critical coupling, when that is configured.
    pub critical_noise_estimate: Option<f64>,
}

/// Runs the ensemble with trajectories spread over the rayon pool; results
/// are collected in index order.
pub fn run_ensemble(cfg: &RunConfig) -> Result<(EnsembleSummary, Ensemble), CliError> {
    let p = cfg.params()?;
    let plan = plan_run(&p, &cfg.plan_request())?;
    let closure: NoiseClosure = cfg.ensemble.closure.into();
    let run = StochasticRun::new(&plan.state0, &p, &plan.grid, plan.settings, closure, cfg.seed)?;
    run.check_budget(cfg.n_traj, cfg.ensemble.memory_budget)?;
    let trajectories = (0..cfg.n_traj as u64).into_par_iter().map(|i| run.trajectory(i)).collect::<Result<Vec<_>, _>>()?;
    let ensemble = Ensemble { reference: run.into_reference(), trajectories };

    let critical_noise_estimate = match cfg.system.critical {
        CriticalChoice::None => None,
        _ => Some(dephasing_fraction(&p, DephasingRegime::Critical)?.fraction),
    };
    let summary = EnsembleSummary {
        n_traj: cfg.n_traj,
        seed: cfg.seed,
        closure: cfg.ensemble.closure,
        modes: plan.grid.len(),
        steps: plan.settings.steps(),
        final_norm: ensemble.final_norm().into(),
        final_ground: ensemble.final_ground().into(),
        deterministic_deficit: 1.0 - ensemble.reference.final_norm(),
        noise_fraction: ensemble.noise_fraction(&plan.state0).into(),
        critical_noise_estimate,
    };
    Ok((summary, ensemble))
}

fn within(s: Stat, target: f64) -> bool {
    (s.mean - target).abs() <= STANDARD_ERRORS * s.std_error
}

pub fn verdicts(cfg: &RunConfig, s: &EnsembleSummary) -> Vec<Verdict> {
    let mut v = Vec::new();
    if s.closure == ClosureChoice::SelfConsistent {
        v.push(Verdict::new(
            "mean-norm-restored",
            within(s.final_norm, 1.0),
            format!("mean norm {:.5} ± {:.5}", s.final_norm.mean, s.final_norm.std_error),
        ));
    }
    if cfg.system.gamma_el == 0.0 {
        v.push(Verdict::new(
            "ground-matches-deficit",
            within(s.final_ground, s.deterministic_deficit),
            format!(
                "E|C_0|² = {:.5} ± {:.5}, deterministic deficit {:.5}",
                s.final_ground.mean, s.final_ground.std_error, s.deterministic_deficit
            ),
        ));
    }
    if let (Some(target), true) = (s.critical_noise_estimate, cfg.system.gamma_el > 0.0) {
        let rel = (s.noise_fraction.mean - target).abs() / target;
        v.push(Verdict::new(
            "critical-noise-fraction",
            rel <= DEPHASING_TOLERANCE,
            format!(
                "noise fraction {:.4} ± {:.4}, estimate {target:.4}, relative difference {rel:.3}",
                s.noise_fraction.mean, s.noise_fraction.std_error
            ),
        ));
    }
    v
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let (summary, ensemble) = run_ensemble(cfg)?;
    let verdicts = verdicts(cfg, &summary);
    let reference = &ensemble.reference.final_state.e1;
    let per_traj = Artifact::csv(
        "trajectories.csv",
        "cavgate ensemble v1",
        &["index", "final_norm", "ground", "reflected_e1", "deviation_from_reference"],
        ensemble.trajectories.iter().enumerate().map(|(i, r)| {
            let dev: f64 = r.final_state.e1.iter().zip(reference).map(|(a, b)| (a - b).norm_sqr()).sum();
            vec![i as f64, r.final_norm(), r.final_state.ground.norm_sqr(), r.final_state.beam_e1(), dev]
        }),
    );
    Ok(Report {
        experiment: "ensemble".into(),
        artifacts: vec![
            Artifact::json("ensemble.json", &summary),
            per_traj,
            trajectory_csv("reference_trajectory.csv", &ensemble.reference),
        ],
        verdicts,
    })
}
