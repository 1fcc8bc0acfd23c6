//! Truth table of the polarization gate: emitters in the ground state leave
//! the photon's polarization alone, emitters in the dark state rotate it by
//! `π/2`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use cavgate_core::analytic::r1_at;
use cavgate_core::emitters::{prepare_with_classical_pulse, PreparationTarget};
use cavgate_core::polarization::{
    reduce_axis_angle, reflect_superposition, rotation_angle_after_reflection, EntangledOutput, PolarizationState, SuperpositionInput,
};
use cavgate_core::Complex64;
use serde::Serialize;

use crate::output::{pair, Artifact, Verdict};
use crate::{CliError, Report, RunConfig};

pub const FIDELITY_THRESHOLD: f64 = 0.95;
pub const UNIFORMITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct GateRow {
    pub emitters: &'static str,
    pub ground_amplitude: [f64; 2],
    pub dark_amplitude: [f64; 2],
    pub r1: [f64; 2],
    /// Expected photon polarization relative to the incident one.
    pub expected_rotation: f64,
    /// Orientation of the reflected polarization relative to the incident one.
    pub observed_rotation: f64,
    /// `observed - expected`, as an axis angle in `(-π/2, π/2]`.
    pub rotation_error: f64,
    /// Probability that a photon is reflected at all.
    pub survival: f64,
    /// `|⟨expected|reflected⟩|²`, unconditional.
    pub fidelity_unconditional: f64,
    /// Fidelity given that a photon is detected.
    pub fidelity: f64,
}

#[derive(Debug, Serialize)]
struct GateSummary {
    phi: f64,
    r_bright: [f64; 2],
    r_dark: [f64; 2],
    rows: Vec<GateRow>,
    uniform_density_max_deviation: f64,
}

/// Photon polarized along `x` and `y`, in the cavity axes, for `x` at
/// angle `φ` to `e1`.
fn lab_axes(phi: f64) -> (PolarizationState, PolarizationState) {
    let (s, c) = phi.sin_cos();
    let zero = Complex64::new(0.0, 0.0);
    (
        PolarizationState::new(Complex64::new(c, 0.0), Complex64::new(-s, 0.0), zero),
        PolarizationState::new(Complex64::new(s, 0.0), Complex64::new(c, 0.0), zero),
    )
}

/// Ground-branch photon expected along `x`, dark-branch photon along `y`.
fn row(name: &'static str, out: &EntangledOutput, phi: f64, r: Complex64, expected_rotation: f64) -> GateRow {
    let (x, y) = lab_axes(phi);
    let overlap = |expected: &PolarizationState, got: &PolarizationState| expected.inner(got).norm_sqr();
    let unconditional = out.g.norm_sqr() * overlap(&x, &out.bright) + out.d.norm_sqr() * overlap(&y, &out.dark);
    let survival = out.photon_probability();
    // the incident polarization is at -φ in the cavity axes
    let observed = reduce_axis_angle(rotation_angle_after_reflection(phi, r).angle + phi);
    GateRow {
        emitters: name,
        ground_amplitude: pair(out.g),
        dark_amplitude: pair(out.d),
        r1: pair(r),
        expected_rotation,
        observed_rotation: observed,
        rotation_error: reduce_axis_angle(observed - expected_rotation),
        survival,
        fidelity_unconditional: unconditional,
        fidelity: if survival > 0.0 { unconditional / survival } else { 0.0 },
    }
}

pub fn gate_rows(cfg: &RunConfig) -> Result<(Vec<GateRow>, Complex64, Complex64), CliError> {
    let p = cfg.params()?;
    let phi = cfg.gate.phi;
    let r_bright = r1_at(&p, p.delta_0);
    let r_dark = r1_at(&p.decoupled(), p.delta_0);
    let input = |g: Complex64, d: Complex64| SuperpositionInput { r_bright, r_dark, ..SuperpositionInput::idealized(phi, g, d) };

    let ground = reflect_superposition(&input(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)))?;
    let prep = prepare_with_classical_pulse(cfg.gate.prep_rabi, cfg.gate.prep_duration, PreparationTarget::Dark)?;
    let dark = reflect_superposition(&input(prep.ground, prep.excited))?;
    Ok((vec![row("ground", &ground, phi, r_bright, 0.0), row("dark", &dark, phi, r_dark, FRAC_PI_2)], r_bright, r_dark))
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let phi = cfg.gate.phi;
    let (rows, r_bright, r_dark) = gate_rows(cfg)?;

    let half = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let ideal = reflect_superposition(&SuperpositionInput::idealized(phi, half, half))?;
    let model = reflect_superposition(&SuperpositionInput { r_bright, r_dark, ..SuperpositionInput::idealized(phi, half, half) })?;
    let n = cfg.gate.theta_points;
    let thetas: Vec<f64> = (0..n).map(|i| -FRAC_PI_2 + PI * i as f64 / (n - 1) as f64).collect();
    let deviation = thetas.iter().map(|&t| (ideal.detection_density(t) - 1.0 / PI).abs()).fold(0.0, f64::max);

    let mut verdicts: Vec<Verdict> = rows
        .iter()
        .map(|r| {
            Verdict::new(
                &format!("{}-row-fidelity", r.emitters),
                r.fidelity >= FIDELITY_THRESHOLD,
                format!(
                    "fidelity {:.4} given a photon (survival {:.4}, unconditional {:.4})",
                    r.fidelity, r.survival, r.fidelity_unconditional
                ),
            )
        })
        .collect();
    verdicts.push(Verdict::new(
        "equal-superposition-uniform",
        deviation <= UNIFORMITY_TOLERANCE,
        format!("max |p(θ) - 1/π| = {deviation:.1e}"),
    ));

    let density = Artifact::csv(
        "detection.csv",
        "cavgate detection-density v1",
        &["theta", "density_ideal", "density_model"],
        thetas.iter().map(|&t| vec![t, ideal.detection_density(t), model.detection_density(t)]),
    );
    let summary =
        GateSummary { phi, r_bright: pair(r_bright), r_dark: pair(r_dark), rows, uniform_density_max_deviation: deviation };
    Ok(Report { experiment: "gate-demo".into(), artifacts: vec![Artifact::json("gate.json", &summary), density], verdicts })
}
