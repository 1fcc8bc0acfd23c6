//! Two identical dipole-coupled emitters: eigenstates, energies, and the
//! classical square pulse that moves them from the ground state into the
//! bright or dark single-excitation state.

use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

#[allow(unused_imports)] // std's inherent float methods win whenever std is linked
use num_traits::Float;

use crate::{Complex64, Error, Result, I, MUCH_LESS_MARGIN};

/// Emitter parameters. `omega_dd` is taken real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterParams {
    /// Single-emitter transition energy `W`.
    pub transition_energy: f64,
    /// Dipole-dipole coupling `Ω_dd`.
    pub omega_dd: f64,
    pub gamma_e: f64,
    pub gamma_el: f64,
}

impl EmitterParams {
    pub fn gamma(&self) -> f64 {
        self.gamma_e + 2.0 * self.gamma_el
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("gamma_e", self.gamma_e), ("gamma_el", self.gamma_el)] {
            if !(v >= 0.0) {
                return Err(Error::InvalidParameter { name, reason: "rate must be >= 0" });
            }
        }
        if !self.transition_energy.is_finite() || !self.omega_dd.is_finite() {
            return Err(Error::InvalidParameter { name: "omega_dd", reason: "must be finite" });
        }
        Ok(())
    }
}

/// Labels of the two-emitter eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitterState {
    Ground,
    /// Symmetric single excitation `(|1,0⟩ + |0,1⟩)/√2`.
    Plus,
    /// Antisymmetric single excitation `(|1,0⟩ - |0,1⟩)/√2`.
    Minus,
    Double,
}

/// Energies and product-basis coefficients of the two-emitter eigenstates.
///
/// Rows of [`coefficients`](Self::coefficients) are the eigenstates in the
/// order of [`EmitterEigensystem::ORDER`]; columns are the product states
/// `|0,0⟩, |1,0⟩, |0,1⟩, |1,1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmitterEigensystem {
    pub ground: f64,
    pub double: f64,
    pub plus: f64,
    pub minus: f64,
    pub coefficients: [[f64; 4]; 4],
}

impl EmitterEigensystem {
    pub const ORDER: [EmitterState; 4] =
        [EmitterState::Ground, EmitterState::Plus, EmitterState::Minus, EmitterState::Double];

    pub fn energy(&self, state: EmitterState) -> f64 {
        match state {
            EmitterState::Ground => self.ground,
            EmitterState::Plus => self.plus,
            EmitterState::Minus => self.minus,
            EmitterState::Double => self.double,
        }
    }

    /// Bright/dark splitting `E_+ - E_- = 2Ω_dd`.
    pub fn splitting(&self) -> f64 {
        self.plus - self.minus
    }
}

pub fn build_eigensystem(p: &EmitterParams) -> EmitterEigensystem {
    let w = p.transition_energy;
    let s = FRAC_1_SQRT_2;
    EmitterEigensystem {
        ground: 0.0,
        double: 2.0 * w,
        plus: w + p.omega_dd,
        minus: w - p.omega_dd,
        coefficients: [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, s, s, 0.0],
            [0.0, s, -s, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
    }
}

/// Which single-excitation state the classical pulse targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreparationTarget {
    /// The state decoupled from the cavity mode.
    Dark,
    /// The state coupled to the cavity mode.
    Bright,
}

/// Two-level amplitudes after a resonant square pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QePreparation {
    pub ground: Complex64,
    pub excited: Complex64,
    pub target: PreparationTarget,
}

impl QePreparation {
    pub fn excited_population(&self) -> f64 {
        self.excited.norm_sqr()
    }
}

/// Resonant square pulse of Rabi frequency `rabi` (phase folded into the
/// target amplitude) applied for `duration`, starting from the ground state.
pub fn prepare_with_classical_pulse(
    rabi: f64,
    duration: f64,
    target: PreparationTarget,
) -> Result<QePreparation> {
    if !(rabi >= 0.0) || !rabi.is_finite() {
        return Err(Error::InvalidParameter { name: "rabi", reason: "must be finite and >= 0" });
    }
    if !(duration >= 0.0) || !duration.is_finite() {
        return Err(Error::InvalidParameter { name: "duration", reason: "must be finite and >= 0" });
    }
    let area = rabi * duration;
    Ok(QePreparation {
        ground: Complex64::new(area.cos(), 0.0),
        excited: I * area.sin(),
        target,
    })
}

/// Inputs of the classical-pulse feasibility check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreparationRequest {
    pub emitters: EmitterParams,
    /// Single-emitter classical Rabi frequency `Ω^(cl)`.
    pub rabi_classical: f64,
    pub duration: f64,
    /// Residual coupling of the classical field to the symmetric state,
    /// `Ω_s^(cl) = α Ω^(cl)`.
    pub alpha: f64,
    /// Field nonuniformity scale over emitter separation, `L/Δ`; the
    /// antisymmetric Rabi frequency is `Ω_a^(cl) = Ω^(cl) / (L/Δ)`.
    pub l_over_separation: f64,
    /// Vacuum Rabi frequency of the cavity mode.
    pub omega_rabi_cavity: f64,
}

/// Pass/fail per preparation constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintReport {
    /// `Ω_s^(cl) ≪ 2Ω_dd`.
    pub symmetric_field: bool,
    /// `Ω_a^(cl) ≪ 2Ω_dd`.
    pub antisymmetric_field: bool,
    /// `Ω_a^(cl) t` within tolerance of `π/2`.
    pub pulse_area: bool,
    /// `1/t > γ`.
    pub duration: bool,
    /// `(1/α)(Ω_dd/Ω_c) > √n > (L/Δ)(γ/Ω_c)`.
    pub photon_window: bool,
    pub sqrt_photon_number: f64,
    pub window: (f64, f64),
    pub pulse_area_value: f64,
}

impl ConstraintReport {
    pub fn all_pass(&self) -> bool {
        self.symmetric_field && self.antisymmetric_field && self.pulse_area && self.duration && self.photon_window
    }
}

/// Thresholds used by [`validate_preparation_constraints`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintSettings {
    /// Factor for "much less than".
    pub margin: f64,
    /// Allowed relative deviation of the pulse area from `π/2`.
    pub area_tolerance: f64,
}

impl Default for ConstraintSettings {
    fn default() -> Self {
        Self { margin: MUCH_LESS_MARGIN, area_tolerance: 0.05 }
    }
}

/// The antisymmetric coupling is estimated as `Ω^(cl)·Δ/L`, which is only an
/// order-of-magnitude relation; the report treats it as exact.
pub fn validate_preparation_constraints(
    req: &PreparationRequest,
    settings: &ConstraintSettings,
) -> Result<ConstraintReport> {
    req.emitters.validate()?;
    let nonneg = [
        ("rabi_classical", req.rabi_classical),
        ("duration", req.duration),
        ("alpha", req.alpha),
        ("l_over_separation", req.l_over_separation),
        ("omega_rabi_cavity", req.omega_rabi_cavity),
    ];
    for (name, v) in nonneg {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::InvalidParameter { name, reason: "must be finite and >= 0" });
        }
    }
    if req.alpha == 0.0 {
        return Err(Error::ZeroLeakCoefficient);
    }
    if req.l_over_separation == 0.0 {
        return Err(Error::InvalidParameter { name: "l_over_separation", reason: "must be > 0" });
    }
    if req.omega_rabi_cavity == 0.0 {
        return Err(Error::InvalidParameter { name: "omega_rabi_cavity", reason: "must be > 0" });
    }

    let two_dd = 2.0 * req.emitters.omega_dd.abs();
    let gamma = req.emitters.gamma();
    let symmetric = req.alpha * req.rabi_classical;
    let antisymmetric = req.rabi_classical / req.l_over_separation;
    let area = antisymmetric * req.duration;

    let sqrt_n = req.rabi_classical / req.omega_rabi_cavity;
    let upper = req.emitters.omega_dd.abs() / (req.alpha * req.omega_rabi_cavity);
    let lower = req.l_over_separation * gamma / req.omega_rabi_cavity;

    Ok(ConstraintReport {
        symmetric_field: settings.margin * symmetric < two_dd,
        antisymmetric_field: settings.margin * antisymmetric < two_dd,
        pulse_area: (area - FRAC_PI_2).abs() <= settings.area_tolerance * FRAC_PI_2,
        duration: req.duration * gamma < 1.0,
        photon_window: lower < sqrt_n && sqrt_n < upper,
        sqrt_photon_number: sqrt_n,
        window: (lower, upper),
        pulse_area_value: area,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_4, PI};

    fn emitters(omega_dd: f64) -> EmitterParams {
        EmitterParams { transition_energy: 1.0, omega_dd, gamma_e: 0.01, gamma_el: 0.0 }
    }

    #[test]
    fn degenerate_without_dipole_coupling() {
        let e = build_eigensystem(&emitters(0.0));
        assert_eq!(e.plus, 1.0);
        assert_eq!(e.minus, 1.0);
    }

    #[test]
    fn dipole_splitting() {
        let e = build_eigensystem(&emitters(0.1));
        assert!((e.plus - 1.1).abs() < 1e-15);
        assert!((e.minus - 0.9).abs() < 1e-15);
        assert!((e.plus + e.minus - 2.0).abs() < 1e-15);
        assert!((e.splitting() - 0.2).abs() < 1e-15);
        assert_eq!(e.double, 2.0);
        assert_eq!(e.ground, 0.0);
    }

    #[test]
    fn eigenbasis_is_orthonormal() {
        let e = build_eigensystem(&emitters(0.37));
        for i in 0..4 {
            for j in 0..4 {
                let dot: f64 = (0..4).map(|k| e.coefficients[i][k] * e.coefficients[j][k]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-12);
            }
        }
        assert_eq!(e.coefficients[1][1], FRAC_1_SQRT_2);
        assert_eq!(e.coefficients[2][2], -FRAC_1_SQRT_2);
    }

    #[test]
    fn pi_half_pulse_reaches_target() {
        let p = prepare_with_classical_pulse(1.0, FRAC_PI_2, PreparationTarget::Dark).unwrap();
        assert!((p.excited - I).norm() < 1e-15);
        assert!(p.ground.norm() < 1e-15);
    }

    #[test]
    fn zero_area_is_identity() {
        let p = prepare_with_classical_pulse(0.0, 3.0, PreparationTarget::Bright).unwrap();
        assert_eq!(p.ground, Complex64::new(1.0, 0.0));
        assert_eq!(p.excited, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn quarter_pi_pulse() {
        let p = prepare_with_classical_pulse(2.0, FRAC_PI_4 / 2.0, PreparationTarget::Dark).unwrap();
        assert!((p.excited - I * FRAC_1_SQRT_2).norm() < 1e-15);
        assert!((p.ground - FRAC_1_SQRT_2).norm() < 1e-15);
    }

    #[test]
    fn preparation_is_unitary_and_periodic() {
        for i in 0..200 {
            let area = 0.173 * i as f64;
            let a = prepare_with_classical_pulse(1.0, area, PreparationTarget::Dark).unwrap();
            assert!((a.ground.norm_sqr() + a.excited.norm_sqr() - 1.0).abs() < 1e-12);
            let b = prepare_with_classical_pulse(1.0, area + 2.0 * PI, PreparationTarget::Dark).unwrap();
            assert!((a.ground - b.ground).norm() < 1e-12);
            assert!((a.excited - b.excited).norm() < 1e-12);
        }
    }

    #[test]
    fn negative_rabi_rejected() {
        assert!(prepare_with_classical_pulse(-1.0, 1.0, PreparationTarget::Dark).is_err());
    }

    fn request() -> PreparationRequest {
        PreparationRequest {
            emitters: EmitterParams { transition_energy: 100.0, omega_dd: 1000.0, gamma_e: 0.1, gamma_el: 0.0 },
            rabi_classical: 10.0,
            duration: FRAC_PI_2 / 10.0,
            alpha: 0.1,
            l_over_separation: 1.0,
            omega_rabi_cavity: 1.0,
        }
    }

    #[test]
    fn zero_classical_field() {
        let req = PreparationRequest { rabi_classical: 0.0, ..request() };
        let r = validate_preparation_constraints(&req, &ConstraintSettings::default()).unwrap();
        assert!(r.symmetric_field && r.antisymmetric_field);
        assert!(!r.pulse_area);
    }

    #[test]
    fn photon_number_window() {
        // Ω_dd/Ω_c = 10, α = 0.1 -> upper 100; (L/Δ)(γ/Ω_c) = 1 -> lower 1; √n = 10.
        let req = PreparationRequest {
            emitters: EmitterParams { transition_energy: 100.0, omega_dd: 10.0, gamma_e: 1.0, gamma_el: 0.0 },
            rabi_classical: 10.0,
            duration: 0.05,
            alpha: 0.1,
            l_over_separation: 1.0,
            omega_rabi_cavity: 1.0,
        };
        let r = validate_preparation_constraints(&req, &ConstraintSettings::default()).unwrap();
        assert_eq!(r.window, (1.0, 100.0));
        assert_eq!(r.sqrt_photon_number, 10.0);
        assert!(r.photon_window);
    }

    #[test]
    fn long_pulse_fails_duration() {
        let base = request();
        let req = PreparationRequest { duration: 2.0 / base.emitters.gamma(), ..base };
        let r = validate_preparation_constraints(&req, &ConstraintSettings::default()).unwrap();
        assert!(!r.duration);
    }

    #[test]
    fn feasible_request_passes() {
        let r = validate_preparation_constraints(&request(), &ConstraintSettings::default()).unwrap();
        assert!(r.all_pass(), "{r:?}");
    }

    #[test]
    fn zero_alpha_rejected() {
        let req = PreparationRequest { alpha: 0.0, ..request() };
        assert_eq!(
            validate_preparation_constraints(&req, &ConstraintSettings::default()),
            Err(Error::ZeroLeakCoefficient)
        );
    }
}
