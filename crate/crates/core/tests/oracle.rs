//! Time-domain runs compared against the closed-form reflection coefficient.

use cavgate_core::analytic::{critical_coupling, r1_at};
use cavgate_core::dynamics::{evolve_deterministic, extract_reflection, plan_run, Channel, PlanRequest};
use cavgate_core::{Complex64, SystemParams};

struct Case {
    name: &'static str,
    params: SystemParams,
    bandwidth: f64,
}

fn run(case: &Case, modes: usize) -> (Complex64, Complex64, f64) {
    let plan = plan_run(&case.params, &PlanRequest::new(case.bandwidth, modes)).unwrap();
    let start = std::time::Instant::now();
    let record = evolve_deterministic(&plan.state0, &case.params, &plan.grid, &plan.settings).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let est = extract_reflection(&record, &plan.state0, Channel::E1).unwrap();
    let analytic = r1_at(&case.params, case.params.delta_0);
    println!(
        "{:<12} R_est = {:+.6}{:+.6}i  R1 = {:+.6}{:+.6}i  steps = {}  {:.2}s  leak = {:.1e}",
        case.name,
        est.r_est.re,
        est.r_est.im,
        analytic.re,
        analytic.im,
        plan.settings.steps(),
        secs,
        record.max_leak_residual
    );
    (est.r_est, analytic, secs)
}

fn cases() -> Vec<Case> {
    vec![
        Case { name: "strong", params: SystemParams::resonant(1.0, 0.1, 0.1, 0.0, 10.0), bandwidth: 0.5 },
        Case { name: "weak", params: SystemParams::resonant(1.0, 0.1, 1.0, 0.0, 0.1), bandwidth: 0.05 },
        Case { name: "empty", params: SystemParams::resonant(1.0, 0.0, 0.5, 0.0, 0.0), bandwidth: 0.05 },
        Case {
            name: "detuned",
            params: SystemParams::resonant(1.0, 0.1, 0.5, 0.0, 1.0).with_detunings(1.5, 0.3),
            bandwidth: 0.05,
        },
        Case { name: "lossy-empty", params: SystemParams::resonant(1.0, 0.4, 0.5, 0.0, 0.0), bandwidth: 0.05 },
    ]
}

#[test]
fn narrowband_runs_match_closed_form() {
    for case in cases() {
        let (est, analytic, secs) = run(&case, 2048);
        let rel = (est - analytic).norm() / (1.0 + analytic.norm());
        assert!(rel <= 0.02, "{}: relative error {rel}", case.name);
        assert!(secs < 60.0);
    }
}

#[test]
fn critical_coupling_nulls_reflection() {
    let base = SystemParams::resonant(0.0, 1.0, 1.0, 0.0, 2.0);
    for sol in critical_coupling(&base).unwrap() {
        let params = sol.apply_to(&base);
        let (est, analytic, _) = run(&Case { name: "critical", params, bandwidth: 0.05 }, 2048);
        assert!(analytic.norm() < 1e-10);
        assert!(est.norm() <= 0.05, "{sol:?}: |R_est| = {}", est.norm());
    }
}
