//! Time-domain integration of the coupled beam/cavity/emitter amplitudes.
//!
//! Amplitudes are integrated in the interaction picture: `s_k = C_1k e^{iω_k t}`,
//! `c = C_c e^{iω_c t}`, `f = C_e e^{iW_e t}`. The `e2` modes do not couple, so
//! their interaction-picture amplitudes stay constant. The fast `ω_c` phase
//! never appears; the remaining oscillations are the detunings `Δ_k`, `Δ_e`.
//!
//! The deterministic part uses fixed-step fourth-order Runge-Kutta. Langevin
//! noise is added after each step as an Euler-Maruyama increment.

mod engine;
mod plan;
mod stochastic;
mod superposition;

use alloc::vec::Vec;

#[allow(unused_imports)] // std's inherent float methods win whenever std is linked
use num_traits::Float;

use crate::pulse::{norm_sqr, ModeGrid, Wavepacket};
use crate::{Complex64, Error, Result, SystemParams};

pub use engine::{evolve_deterministic, max_time_step};
pub use plan::{plan_run, slowest_decay_rate, Plan, PlanRequest};
pub use stochastic::{evolve_stochastic, Ensemble, EnsembleStats, NoiseClosure, StochasticRun, DEFAULT_MEMORY_BUDGET};
pub use superposition::{evolve_superposition, DarkBranch, SuperpositionRecord};

/// Largest tolerated norm-leak residual per unit time.
pub const LEAK_TOLERANCE: f64 = 1e-4;

/// Residual cavity/emitter excitation (relative to the incident `e1`
/// probability) above which a run counts as not finished.
pub const CONVERGENCE_THRESHOLD: f64 = 1e-4;

/// Relative excitation marking the end of the interaction.
pub const T1_THRESHOLD: f64 = 1e-6;

/// Interaction-picture amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeState {
    /// `s_k` for the cavity-coupled polarization `e1`.
    pub e1: Vec<Complex64>,
    /// `e2` amplitudes; constant in this picture.
    pub e2: Vec<Complex64>,
    pub cavity: Complex64,
    /// Bright-state amplitude.
    pub emitter: Complex64,
    /// Amplitude of the state with no photon and the emitters in the ground
    /// state (the sink for all losses).
    pub ground: Complex64,
}

impl AmplitudeState {
    /// Incident photon, empty cavity, emitters unexcited.
    pub fn incident(packet: &Wavepacket) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self { e1: packet.e1.clone(), e2: packet.e2.clone(), cavity: zero, emitter: zero, ground: zero }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            e1: self.e1.iter().map(|c| c * factor).collect(),
            e2: self.e2.iter().map(|c| c * factor).collect(),
            cavity: self.cavity * factor,
            emitter: self.emitter * factor,
            ground: self.ground * factor,
        }
    }

    pub fn beam_e1(&self) -> f64 {
        norm_sqr(&self.e1)
    }

    pub fn beam_e2(&self) -> f64 {
        norm_sqr(&self.e2)
    }

    pub fn excitation(&self) -> f64 {
        self.cavity.norm_sqr() + self.emitter.norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.beam_e1() + self.beam_e2() + self.excitation() + self.ground.norm_sqr()
    }

    /// Lab-frame `C_1k(t) = s_k e^{-iω_k t}`.
    pub fn lab_e1(&self, grid: &ModeGrid, t: f64) -> Vec<Complex64> {
        self.e1.iter().enumerate().map(|(j, s)| s * Complex64::from_polar(1.0, -grid.omega(j) * t)).collect()
    }

    pub(crate) fn check(&self, grid: &ModeGrid) -> Result<()> {
        for v in [&self.e1, &self.e2] {
            if v.len() != grid.len() {
                return Err(Error::LengthMismatch { expected: grid.len(), found: v.len() });
            }
        }
        let n = self.norm_sqr();
        if !n.is_finite() {
            return Err(Error::NonFinite(0.0));
        }
        Ok(())
    }
}

/// Step size, duration and bookkeeping for a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub t_end: f64,
    pub dt: f64,
    /// Record a [`Sample`] every this many steps (and at the end).
    pub sample_every: usize,
    /// Norm-leak residual per unit time that aborts the run.
    pub leak_tolerance: f64,
}

impl RunSettings {
    pub fn new(t_end: f64, dt: f64) -> Self {
        Self { t_end, dt, sample_every: 100, leak_tolerance: LEAK_TOLERANCE }
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// Populations at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    /// `|C_c|²`
    pub cavity: f64,
    /// `|C_e|²`
    pub emitter: f64,
    /// `Σ_k |C_1k|²`
    pub beam_e1: f64,
    /// `|C_0|²`
    pub ground: f64,
    /// Total norm including the constant `e2` part.
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub samples: Vec<Sample>,
    pub final_state: AmplitudeState,
    pub t_end: f64,
    pub dt: f64,
    /// Largest norm-leak residual per unit time over all steps.
    pub max_leak_residual: f64,
    /// Peak of `|C_c|² + |C_e|²` and when it occurred.
    pub peak_excitation: f64,
    pub peak_time: f64,
    /// First time after the peak when the excitation fell below
    /// `1e-6` of the peak.
    pub t1: Option<f64>,
}

impl TrajectoryRecord {
    pub fn final_norm(&self) -> f64 {
        self.final_state.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    E1,
    E2,
}

/// Reflected amplitudes relative to the incident ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionEstimate {
    /// `C_k(t) e^{iω_k t} / C_k(0)` per mode; `None` where `C_k(0) = 0`.
    pub ratios: Vec<Option<Complex64>>,
    /// `Σ C_k*(0) C_k(t) e^{iω_k t} / Σ |C_k(0)|²`.
    pub r_est: Complex64,
    /// Reflected probability in the channel relative to the incident one.
    pub reflected_fraction: f64,
}

/// Compares the final amplitudes of `record` with the initial ones.
pub fn extract_reflection(record: &TrajectoryRecord, initial: &AmplitudeState, channel: Channel) -> Result<ReflectionEstimate> {
    let (before, after) = match channel {
        Channel::E1 => (&initial.e1, &record.final_state.e1),
        Channel::E2 => (&initial.e2, &record.final_state.e2),
    };
    if before.len() != after.len() {
        return Err(Error::LengthMismatch { expected: before.len(), found: after.len() });
    }
    let incident = norm_sqr(before);
    if incident == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    let residual = record.final_state.excitation();
    let threshold = CONVERGENCE_THRESHOLD * incident;
    if residual > threshold {
        return Err(Error::NotConverged { residual, threshold });
    }
    let mut overlap = Complex64::new(0.0, 0.0);
    let ratios = before
        .iter()
        .zip(after)
        .map(|(b, a)| {
            overlap += b.conj() * a;
            if *b == Complex64::new(0.0, 0.0) { None } else { Some(a / b) }
        })
        .collect();
    Ok(ReflectionEstimate { ratios, r_est: overlap / incident, reflected_fraction: norm_sqr(after) / incident })
}

pub(crate) fn validate_run(p: &SystemParams, grid: &ModeGrid, settings: &RunSettings) -> Result<()> {
    p.validate()?;
    if !(settings.t_end > 0.0) || !settings.t_end.is_finite() {
        return Err(Error::InvalidParameter { name: "t_end", reason: "must be finite and > 0" });
    }
    if !(settings.dt > 0.0) || !settings.dt.is_finite() {
        return Err(Error::InvalidParameter { name: "dt", reason: "must be finite and > 0" });
    }
    let steps = settings.t_end / settings.dt;
    if (steps - steps.round()).abs() > 1e-6 * steps.max(1.0) {
        return Err(Error::InvalidParameter { name: "dt", reason: "t_end must be an integer number of steps" });
    }
    if settings.sample_every == 0 {
        return Err(Error::InvalidParameter { name: "sample_every", reason: "must be >= 1" });
    }
    if p.kappa > 0.0 && grid.revival_period() < settings.t_end {
        return Err(Error::RevivalBeforeEnd { period: grid.revival_period(), t_end: settings.t_end });
    }
    let max_dt = max_time_step(p, grid);
    if settings.dt > max_dt * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { dt: settings.dt, max_dt });
    }
    Ok(())
}
