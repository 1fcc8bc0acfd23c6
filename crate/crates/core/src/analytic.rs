//! Closed-form results for a narrowband photon: characteristic roots,
//! the amplitude reflection coefficient of the coupled polarization,
//! critical coupling, the outcoupling rate from geometry, and the
//! pure-dephasing noise fraction.

use alloc::vec::Vec;

#[allow(unused_imports)] // std's inherent float methods win whenever std is linked
use num_traits::Float;

use crate::polarization::rotation_angle_after_reflection;
use crate::{Complex64, Error, Result, SystemParams, I, MUCH_LESS_MARGIN};

/// Roots `P1, P2` of `(p + κ_Σ)(p_e + p) + |Ω_c|² = 0`.
///
/// `P1` takes the principal square root. Only the product and sum of the
/// roots enter the reflection coefficient, so the labeling is cosmetic.
pub fn roots_p(p: &SystemParams) -> (Complex64, Complex64) {
    let ks = Complex64::new(p.kappa_sigma(), 0.0);
    let pe = p.p_e();
    let half_sum = -(ks + pe) * 0.5;
    let half_diff = (ks - pe) * 0.5;
    let root = (half_diff * half_diff - p.omega_rabi.norm_sqr()).sqrt();
    (half_sum + root, half_sum - root)
}

/// `(p_e - iΔ)(κ_Σ - iΔ) + |Ω_c|²`, the resonant lineshape denominator
/// evaluated at detuning `Δ` from the cavity.
pub fn lineshape_denominator(p: &SystemParams, detuning: f64) -> Complex64 {
    let pe = p.p_e() - I * detuning;
    let ks = Complex64::new(p.kappa_sigma(), -detuning);
    pe * ks + p.omega_rabi.norm_sqr()
}

/// Reflection coefficient of the coupled polarization for a monochromatic
/// component at detuning `detuning` from the cavity.
pub fn r1_at(p: &SystemParams, detuning: f64) -> Complex64 {
    let num = (p.p_e() - I * detuning) * (2.0 * p.kappa);
    Complex64::new(1.0, 0.0) - num / lineshape_denominator(p, detuning)
}

/// Regime flags attached to a [`ReflectionResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegimeFlags {
    /// `|Ω_c| ≫ κ_Σ, |p_e|`.
    pub strong_coupling: bool,
    /// `|Ω_c| ≪ κ_Σ, |p_e|`.
    pub weak_coupling: bool,
    /// `Δω ≪ |P1,2 + iΔ_0|` (only the root near `-κ_Σ` in weak coupling).
    /// `None` when no bandwidth was supplied.
    pub narrowband_ok: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionResult {
    pub r1: Complex64,
    /// Orientation of the reflected polarization relative to the cavity
    /// axis `e1`, if an incident angle was supplied.
    pub phi_prime: Option<f64>,
    /// Probability that an `e1`-polarized narrowband photon is not reflected.
    pub loss_fraction: f64,
    pub flags: RegimeFlags,
}

/// Optional context for [`reflection_r1`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ReflectionQuery {
    /// Pulse bandwidth `Δω`, used for the narrowband flag.
    pub bandwidth: Option<f64>,
    /// Incident polarization angle `φ` relative to the cavity axis `e1`.
    pub incident_angle: Option<f64>,
}

pub fn reflection_r1(p: &SystemParams, query: &ReflectionQuery) -> ReflectionResult {
    let r1 = r1_at(p, p.delta_0);
    let rabi = p.rabi_abs();
    let ks = p.kappa_sigma();
    let pe = p.p_e().norm();
    let strong = rabi > MUCH_LESS_MARGIN * ks.max(pe);
    let weak = MUCH_LESS_MARGIN * rabi < ks.min(pe);

    let narrowband_ok = query.bandwidth.map(|dw| {
        let (p1, p2) = roots_p(p);
        let shift = I * p.delta_0;
        let scale = if weak {
            // the root approaching -p_e drops out; the other one is ~ -κ_Σ
            let (a, b) = ((p1 + p.p_e()).norm(), (p2 + p.p_e()).norm());
            if a < b { (p2 + shift).norm() } else { (p1 + shift).norm() }
        } else {
            (p1 + shift).norm().min((p2 + shift).norm())
        };
        MUCH_LESS_MARGIN * dw <= scale
    });

    ReflectionResult {
        r1,
        phi_prime: query.incident_angle.map(|phi| rotation_angle_after_reflection(phi, r1).angle),
        loss_fraction: 1.0 - r1.norm_sqr(),
        flags: RegimeFlags { strong_coupling: strong, weak_coupling: weak, narrowband_ok },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalBranch {
    /// `κ = μ_c/2 + γ/2`, `Δ_0² + γ²/4 = |Ω_c|²`: the photon is tuned to a
    /// coupling-split resonance.
    Detuned,
    /// `κ = μ_c/2 + 2|Ω_c|²/γ`, `Δ_0 = 0`.
    Resonant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalCouplingSolution {
    pub branch: CriticalBranch,
    pub kappa: f64,
    pub delta_0: f64,
}

impl CriticalCouplingSolution {
    /// `base` with the outcoupling rate and carrier detuning replaced.
    pub fn apply_to(&self, base: &SystemParams) -> SystemParams {
        SystemParams { kappa: self.kappa, delta_0: self.delta_0, ..*base }
    }
}

/// Outcoupling rates and detunings that null `R1`, for an emitter resonant
/// with the cavity (`Δ_e = 0`). `κ` and `Δ_0` of the input are ignored.
///
/// The detuned branch is returned as a `±Δ_0` pair (a single entry when
/// `|Ω_c| = γ/2`) and omitted when `|Ω_c| < γ/2`.
pub fn critical_coupling(p: &SystemParams) -> Result<Vec<CriticalCouplingSolution>> {
    p.validate()?;
    let gamma = p.gamma();
    if gamma <= 0.0 {
        return Err(Error::InvalidParameter { name: "gamma", reason: "critical coupling needs gamma > 0" });
    }
    if p.delta_e != 0.0 {
        return Err(Error::InvalidParameter { name: "delta_e", reason: "critical coupling assumes delta_e = 0" });
    }
    let rabi2 = p.omega_rabi.norm_sqr();
    let mut out = Vec::with_capacity(3);
    let disc = rabi2 - 0.25 * gamma * gamma;
    if disc >= 0.0 {
        let kappa = 0.5 * (p.mu_c + gamma);
        let d = disc.sqrt();
        out.push(CriticalCouplingSolution { branch: CriticalBranch::Detuned, kappa, delta_0: d });
        if d > 0.0 {
            out.push(CriticalCouplingSolution { branch: CriticalBranch::Detuned, kappa, delta_0: -d });
        }
    }
    out.push(CriticalCouplingSolution {
        branch: CriticalBranch::Resonant,
        kappa: 0.5 * p.mu_c + 2.0 * rabi2 / gamma,
        delta_0: 0.0,
    });
    Ok(out)
}

/// `κ = c²/(2 v_g l_d)`; `c` is the speed of light in the chosen unit system.
pub fn kappa_from_geometry(speed_of_light: f64, group_velocity: f64, l_d: f64) -> Result<f64> {
    for (name, v) in [("speed_of_light", speed_of_light), ("group_velocity", group_velocity), ("l_d", l_d)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidParameter { name, reason: "must be finite and > 0" });
        }
    }
    Ok(speed_of_light * speed_of_light / (2.0 * group_velocity * l_d))
}

/// Fabry-Perot estimate `l_d ≈ |T|² l_c` for a mirror of intensity
/// transmission `|T|²` and mirror spacing `l_c`.
pub fn l_d_fabry_perot(transmission: f64, mirror_spacing: f64) -> Result<f64> {
    if !(transmission > 0.0) || transmission > 1.0 {
        return Err(Error::InvalidParameter { name: "transmission", reason: "must lie in (0, 1]" });
    }
    if !(mirror_spacing > 0.0) || !mirror_spacing.is_finite() {
        return Err(Error::InvalidParameter { name: "mirror_spacing", reason: "must be finite and > 0" });
    }
    Ok(transmission * mirror_spacing)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DephasingRegime {
    /// Carrier resonant with the empty cavity (`Δ_0 = 0`), strong coupling.
    CavityResonant,
    /// Carrier resonant with a coupling-split resonance `ω_c ± |Ω_c|`.
    PolaritonResonant,
    /// Detuned critical coupling.
    Critical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingEstimate {
    /// `Σ|δC1k|² / Σ|C1k(0)|²` after the pulse has left.
    pub fraction: f64,
    /// Whether `|Ω_c| ≫ Γ` holds; the estimate assumes it.
    pub strong_coupling_valid: bool,
}

/// Fraction of the incident coupled-polarization probability that comes back
/// as pure-dephasing noise, to first order in the noise.
pub fn dephasing_fraction(p: &SystemParams, regime: DephasingRegime) -> Result<DephasingEstimate> {
    p.validate()?;
    let (kappa, mu, gel) = (p.kappa, p.mu_c, p.gamma_el);
    let gamma = p.gamma();
    let total = kappa + 0.5 * mu + 0.5 * gamma;
    let big_gamma = 0.5 * total;
    let rabi = p.rabi_abs();
    let strong_coupling_valid = rabi > MUCH_LESS_MARGIN * big_gamma;

    let fraction = if gel == 0.0 {
        0.0
    } else {
        match regime {
            DephasingRegime::CavityResonant => {
                if rabi == 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "omega_rabi",
                        reason: "cavity-resonant estimate diverges at zero coupling",
                    });
                }
                4.0 * gel * kappa * kappa / (total * rabi * rabi)
            }
            DephasingRegime::PolaritonResonant => 4.0 * gel * kappa * kappa / (total * total * total),
            DephasingRegime::Critical => gel / (mu + p.gamma_e + 2.0 * gel),
        }
    };
    Ok(DephasingEstimate { fraction, strong_coupling_valid })
}
