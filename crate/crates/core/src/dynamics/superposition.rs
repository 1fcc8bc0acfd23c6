#[allow(unused_imports)] // std's inherent float methods win whenever std is linked
use num_traits::Float;

use super::engine::evolve_deterministic;
use super::{AmplitudeState, RunSettings, TrajectoryRecord};
use crate::pulse::ModeGrid;
use crate::{Complex64, Error, Result, SystemParams};

/// The emitters' dark state: decoupled from the cavity, energy `W_d`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DarkBranch {
    pub energy: f64,
    /// Decay rate of the dark state; only used to flag runs longer than its
    /// lifetime.
    pub decay_rate: f64,
}

/// The two branches of an emitter superposition `G|ground⟩ + D|dark⟩`.
///
/// Amplitudes of both records already carry the weights `G` and `D`. The
/// dark branch additionally has the global phase `dark_phase = e^{-iW_d t}`,
/// kept separately.
#[derive(Debug, Clone)]
pub struct SuperpositionRecord {
    pub g: Complex64,
    pub d: Complex64,
    pub bright: TrajectoryRecord,
    pub dark: TrajectoryRecord,
    pub dark_phase: Complex64,
    /// The run outlasts the dark-state lifetime, so treating it as stable is
    /// questionable.
    pub dark_lifetime_exceeded: bool,
}

impl SuperpositionRecord {
    /// `|⟨bright photon|dark photon⟩|` over both polarizations, each branch
    /// normalized to its own reflected photon.
    pub fn branch_overlap(&self) -> f64 {
        let (b, d) = (&self.bright.final_state, &self.dark.final_state);
        let inner: Complex64 = b.e1.iter().zip(&d.e1).chain(b.e2.iter().zip(&d.e2)).map(|(x, y)| x.conj() * y).sum();
        let nb = b.beam_e1() + b.beam_e2();
        let nd = d.beam_e1() + d.beam_e2();
        if nb == 0.0 || nd == 0.0 {
            return 0.0;
        }
        inner.norm() / (nb * nd).sqrt()
    }
}

/// Evolves the ground branch with the full coupling and the dark branch with
/// `Ω_c = 0`. The branches never exchange amplitude.
pub fn evolve_superposition(
    photon: &AmplitudeState,
    g: Complex64,
    d: Complex64,
    p: &SystemParams,
    dark: &DarkBranch,
    grid: &ModeGrid,
    settings: &RunSettings,
) -> Result<SuperpositionRecord> {
    let weights = g.norm_sqr() + d.norm_sqr();
    if (weights - 1.0).abs() > 1e-9 || !weights.is_finite() {
        return Err(Error::NotNormalized(weights));
    }
    let n = photon.norm_sqr();
    if (n - 1.0).abs() > 1e-9 || !n.is_finite() {
        return Err(Error::NotNormalized(n));
    }
    if !dark.energy.is_finite() || !(dark.decay_rate >= 0.0) {
        return Err(Error::InvalidParameter { name: "dark", reason: "energy must be finite and decay rate >= 0" });
    }
    let bright = evolve_deterministic(&photon.scaled(g), p, grid, settings)?;
    let dark_record = evolve_deterministic(&photon.scaled(d), &p.decoupled(), grid, settings)?;
    let t = bright.t_end;
    Ok(SuperpositionRecord {
        g,
        d,
        bright,
        dark: dark_record,
        dark_phase: Complex64::from_polar(1.0, -dark.energy * t),
        dark_lifetime_exceeded: dark.decay_rate * t >= 1.0,
    })
}
