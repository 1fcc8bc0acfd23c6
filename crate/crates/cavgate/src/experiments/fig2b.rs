//! Resonant `R1` against `|Ω_c|/κ` for fixed loss rates.

use cavgate_core::analytic::r1_at;
use cavgate_core::SystemParams;
use serde::Serialize;

use crate::output::{Artifact, Verdict};
use crate::{CliError, Report, RunConfig};

/// Tolerance on the curve at `|Ω_c| = 0` and `|Ω_c| = κ`.
pub const ENDPOINT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Serialize)]
struct Summary {
    gamma: f64,
    mu_c: f64,
    r1_at_0: f64,
    r1_at_1: f64,
    expected_at_0: f64,
    expected_at_1: f64,
    strictly_increasing: bool,
}

/// `1 - κγ / ((γ/2)(κ + μ_c/2) + |Ω_c|²)` with `κ = 1`.
fn resonant_closed_form(gamma: f64, mu_c: f64, rabi: f64) -> f64 {
    1.0 - gamma / (0.5 * gamma * (1.0 + 0.5 * mu_c) + rabi * rabi)
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let f = &cfg.fig2b;
    let base = SystemParams::resonant(1.0, f.mu_c, f.gamma, 0.0, 0.0);
    base.validate()?;
    let r1 = |rabi: f64| r1_at(&base.with_rabi(rabi), 0.0);

    let xs: Vec<f64> = (0..f.points).map(|i| f.max_rabi * i as f64 / (f.points - 1) as f64).collect();
    let values: Vec<_> = xs.iter().map(|&x| r1(x)).collect();
    let strictly_increasing = values.windows(2).all(|w| w[1].re > w[0].re);
    let real = values.iter().all(|v| v.im == 0.0);

    let summary = Summary {
        gamma: f.gamma,
        mu_c: f.mu_c,
        r1_at_0: r1(0.0).re,
        r1_at_1: r1(1.0).re,
        expected_at_0: resonant_closed_form(f.gamma, f.mu_c, 0.0),
        expected_at_1: resonant_closed_form(f.gamma, f.mu_c, 1.0),
        strictly_increasing,
    };
    let endpoint = |name: &str, got: f64, want: f64| {
        let err = (got - want).abs();
        Verdict::new(name, err <= ENDPOINT_TOLERANCE, format!("R1 = {got:.9}, closed form {want:.9}, |diff| = {err:.1e}"))
    };
    let verdicts = vec![
        endpoint("r1-at-zero-coupling", summary.r1_at_0, summary.expected_at_0),
        endpoint("r1-at-unit-coupling", summary.r1_at_1, summary.expected_at_1),
        Verdict::new("strictly-increasing", strictly_increasing, format!("{} points on [0, {}]", f.points, f.max_rabi)),
        Verdict::new("real-on-resonance", real, "Im R1 = 0 at every point"),
    ];
    let csv = Artifact::csv(
        "fig2b.csv",
        "cavgate fig2b v1",
        &["omega_rabi_over_kappa", "r1_re", "r1_im"],
        xs.iter().zip(&values).map(|(x, v)| vec![*x, v.re, v.im]),
    );
    Ok(Report { experiment: "fig2b".into(), artifacts: vec![csv, Artifact::json("fig2b.json", &summary)], verdicts })
}
