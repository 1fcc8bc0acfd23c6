//! Physical parameters of the cavity, emitters and incident pulse carrier.

#[allow(unused_imports)] // std's inherent float methods win whenever std is linked
use num_traits::Float;

use crate::{Complex64, Error, Result};

/// Rates, detunings and couplings of the cavity/emitter system.
///
/// Every rate is nonnegative and expressed in a common dimensionless unit
/// (normally `κ = 1`). `omega_c` only sets the lab-frame phase reference and
/// never enters the rotating-frame equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Cavity mode frequency.
    pub omega_c: f64,
    /// Bright-state transition detuning `W_e - ω_c`.
    pub delta_e: f64,
    /// Carrier detuning of the incident pulse `ω_0 - ω_c`.
    pub delta_0: f64,
    /// Vacuum Rabi frequency of the cavity/bright-state coupling.
    pub omega_rabi: Complex64,
    /// Internal (Ohmic + scattering) cavity intensity loss rate.
    pub mu_c: f64,
    /// Outcoupling rate into the external beam.
    pub kappa: f64,
    /// Emitter population relaxation rate.
    pub gamma_e: f64,
    /// Emitter pure dephasing rate.
    pub gamma_el: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            omega_c: 0.0,
            delta_e: 0.0,
            delta_0: 0.0,
            omega_rabi: Complex64::new(0.0, 0.0),
            mu_c: 0.0,
            kappa: 1.0,
            gamma_e: 0.0,
            gamma_el: 0.0,
        }
    }
}

impl SystemParams {
    /// Resonant parameters (`Δ_e = Δ_0 = 0`) with a real Rabi frequency.
    pub fn resonant(kappa: f64, mu_c: f64, gamma_e: f64, gamma_el: f64, omega_rabi: f64) -> Self {
        Self {
            omega_rabi: Complex64::new(omega_rabi, 0.0),
            mu_c,
            kappa,
            gamma_e,
            gamma_el,
            ..Self::default()
        }
    }

    pub fn with_rabi(mut self, omega_rabi: f64) -> Self {
        self.omega_rabi = Complex64::new(omega_rabi, 0.0);
        self
    }

    pub fn with_detunings(mut self, delta_0: f64, delta_e: f64) -> Self {
        self.delta_0 = delta_0;
        self.delta_e = delta_e;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("mu_c", self.mu_c),
            ("kappa", self.kappa),
            ("gamma_e", self.gamma_e),
            ("gamma_el", self.gamma_el),
        ];
        for (name, value) in rates {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter { name, reason: "rate must be finite and >= 0" });
            }
        }
        let others = [
            ("omega_c", self.omega_c),
            ("delta_e", self.delta_e),
            ("delta_0", self.delta_0),
            ("omega_rabi.re", self.omega_rabi.re),
            ("omega_rabi.im", self.omega_rabi.im),
        ];
        for (name, value) in others {
            if !value.is_finite() {
                return Err(Error::InvalidParameter { name, reason: "must be finite" });
            }
        }
        Ok(())
    }

    /// Total emitter linewidth `γ = γ_e + 2γ_el`.
    pub fn gamma(&self) -> f64 {
        self.gamma_e + 2.0 * self.gamma_el
    }

    /// Total cavity amplitude decay rate `κ_Σ = μ_c/2 + κ`.
    pub fn kappa_sigma(&self) -> f64 {
        0.5 * self.mu_c + self.kappa
    }

    /// Complex emitter response rate `p_e = γ/2 + iΔ_e`.
    pub fn p_e(&self) -> Complex64 {
        Complex64::new(0.5 * self.gamma(), self.delta_e)
    }

    pub fn rabi_abs(&self) -> f64 {
        self.omega_rabi.norm()
    }

    /// Magnitude of the cavity/beam coupling `|𝔏|` for a beam of
    /// quantization length `length`, from `κ = L|𝔏|²/(2 v_g)`.
    pub fn beam_coupling(&self, length: f64, group_velocity: f64) -> f64 {
        (2.0 * self.kappa * group_velocity / length).sqrt()
    }

    /// The same system with the emitters decoupled (`Ω_c = 0`), as seen by a
    /// photon when the emitters sit in the dark state.
    pub fn decoupled(&self) -> Self {
        Self { omega_rabi: Complex64::new(0.0, 0.0), ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_rates() {
        let p = SystemParams::resonant(1.0, 0.1, 0.3, 0.1, 2.0);
        assert!((p.gamma() - 0.5).abs() < 1e-15);
        assert!((p.kappa_sigma() - 1.05).abs() < 1e-15);
        assert_eq!(p.p_e(), Complex64::new(0.25, 0.0));
    }

    #[test]
    fn negative_rate_rejected() {
        let p = SystemParams { mu_c: -0.1, ..SystemParams::default() };
        assert!(matches!(p.validate(), Err(Error::InvalidParameter { name: "mu_c", .. })));
    }

    #[test]
    fn coupling_reproduces_kappa() {
        let p = SystemParams { kappa: 0.7, ..SystemParams::default() };
        let (l, vg) = (123.0, 1.0);
        let c = p.beam_coupling(l, vg);
        assert!((l * c * c / (2.0 * vg) - 0.7).abs() < 1e-14);
    }
}
