//! `R1` over a range of one parameter, optionally checked point by point
//! against the time-domain engine.

use cavgate_core::analytic::reflection_r1;
use cavgate_core::analytic::ReflectionQuery;
use cavgate_core::dynamics::{evolve_deterministic, extract_reflection, plan_run, Channel};
use cavgate_core::Complex64;
use rayon::prelude::*;

use super::oracle::{narrowband, NULL_TOLERANCE, RELATIVE_TOLERANCE};
use crate::config::SweepParameter;
use crate::output::{Artifact, Verdict};
use crate::{CliError, Report, RunConfig};

fn with_value(cfg: &RunConfig, value: f64) -> RunConfig {
    let mut c = cfg.clone();
    let s = &mut c.system;
    let field = match cfg.sweep.parameter {
        SweepParameter::Kappa => &mut s.kappa,
        SweepParameter::MuC => &mut s.mu_c,
        SweepParameter::GammaE => &mut s.gamma_e,
        SweepParameter::GammaEl => &mut s.gamma_el,
        SweepParameter::OmegaRabi => &mut s.omega_rabi,
        SweepParameter::Delta0 => &mut s.delta_0,
        SweepParameter::DeltaE => &mut s.delta_e,
    };
    *field = value;
    c
}

struct Point {
    value: f64,
    r1: Complex64,
    loss: f64,
    r_est: Option<Complex64>,
}

fn point(cfg: &RunConfig, value: f64) -> Result<Point, CliError> {
    let c = with_value(cfg, value);
    let p = c.params()?;
    let analytic = reflection_r1(&p, &ReflectionQuery::default());
    let r_est = if cfg.sweep.numeric {
        if !narrowband(&p, c.grid.bandwidth) {
            return Err(CliError::Config(format!("bandwidth {} is not narrowband at {value}", c.grid.bandwidth)));
        }
        let plan = plan_run(&p, &c.plan_request())?;
        let record = evolve_deterministic(&plan.state0, &p, &plan.grid, &plan.settings)?;
        Some(extract_reflection(&record, &plan.state0, Channel::E1)?.r_est)
    } else {
        None
    };
    Ok(Point { value, r1: analytic.r1, loss: analytic.loss_fraction, r_est })
}

fn agrees(pt: &Point) -> bool {
    match pt.r_est {
        None => true,
        Some(est) if pt.r1.norm() < NULL_TOLERANCE => est.norm() <= NULL_TOLERANCE,
        Some(est) => (est - pt.r1).norm() <= RELATIVE_TOLERANCE * pt.r1.norm(),
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let sw = &cfg.sweep;
    let values: Vec<f64> = (0..sw.steps).map(|i| sw.min + (sw.max - sw.min) * i as f64 / (sw.steps - 1) as f64).collect();
    let points = values.par_iter().map(|&v| point(cfg, v)).collect::<Result<Vec<_>, _>>()?;

    let passive = points.iter().all(|pt| pt.r1.norm() <= 1.0 + 1e-9);
    let mut verdicts = vec![Verdict::new("passive", passive, "|R1| <= 1 at every point")];
    if sw.numeric {
        let bad: Vec<f64> = points.iter().filter(|pt| !agrees(pt)).map(|pt| pt.value).collect();
        verdicts.push(Verdict::new("oracle-agreement", bad.is_empty(), format!("disagreeing points: {bad:?}")));
    }

    let mut header = vec!["value", "r1_re", "r1_im", "r1_abs", "loss_fraction"];
    if sw.numeric {
        header.extend(["r_est_re", "r_est_im"]);
    }
    let csv = Artifact::csv(
        "sweep.csv",
        &format!("cavgate sweep v1; parameter {}", sw.parameter.name()),
        &header,
        points.iter().map(|pt| {
            let mut row = vec![pt.value, pt.r1.re, pt.r1.im, pt.r1.norm(), pt.loss];
            if let Some(e) = pt.r_est {
                row.extend([e.re, e.im]);
            }
            row
        }),
    );
    Ok(Report { experiment: "sweep".into(), artifacts: vec![csv], verdicts })
}
