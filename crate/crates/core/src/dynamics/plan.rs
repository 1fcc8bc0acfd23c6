#[allow(unused_imports)] // std's inherent float methods win whenever std is linked
use num_traits::Float;

use super::engine::max_time_step;
use super::{AmplitudeState, RunSettings, LEAK_TOLERANCE};
use crate::analytic::roots_p;
use crate::pulse::{build_mode_grid_around, gaussian_wavepacket, ModeGrid, Wavepacket, WavepacketSpec, SPECTRAL_MARGIN};
use crate::{Complex64, Error, Result, SystemParams};

/// What to simulate; everything else is derived by [`plan_run`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanRequest {
    /// RMS spectral width of the pulse intensity, `Δω = v_g σ_k`.
    pub bandwidth: f64,
    pub modes: usize,
    pub group_velocity: f64,
    /// Grid midpoint as a detuning from the cavity; defaults to the carrier.
    pub grid_center: Option<f64>,
    /// Grid half-width; defaults to `8Δω`, the pulse spectrum itself.
    pub half_width: Option<f64>,
    /// Initial distance of the pulse from the cavity, in pulse lengths.
    pub start_distance: f64,
    /// Ring-down time appended after the pulse has passed, in units of the
    /// slowest decay time.
    pub ring_down: f64,
    pub e1: Complex64,
    pub e2: Complex64,
    pub sample_every: usize,
}

impl PlanRequest {
    pub fn new(bandwidth: f64, modes: usize) -> Self {
        Self {
            bandwidth,
            modes,
            group_velocity: 1.0,
            grid_center: None,
            half_width: None,
            start_distance: 6.0,
            ring_down: 14.0,
            e1: Complex64::new(1.0, 0.0),
            e2: Complex64::new(0.0, 0.0),
            sample_every: 100,
        }
    }

    pub fn with_polarization(mut self, e1: Complex64, e2: Complex64) -> Self {
        self.e1 = e1;
        self.e2 = e2;
        self
    }
}

#[derive(Debug, Clone)]
pub struct Plan {
    pub grid: ModeGrid,
    pub packet: WavepacketSpec,
    pub wavepacket: Wavepacket,
    pub state0: AmplitudeState,
    pub settings: RunSettings,
}

/// Slowest amplitude decay rate of the cavity/emitter system, ignoring the
/// emitter pole when it is decoupled.
pub fn slowest_decay_rate(p: &SystemParams) -> f64 {
    if p.rabi_abs() == 0.0 {
        return p.kappa_sigma();
    }
    let (p1, p2) = roots_p(p);
    (-p1.re).min(-p2.re)
}

/// Builds a carrier-centered grid, the incident pulse, and a run long enough
/// for the pulse to arrive, reflect and ring down.
pub fn plan_run(p: &SystemParams, req: &PlanRequest) -> Result<Plan> {
    p.validate()?;
    if !(req.bandwidth > 0.0) || !req.bandwidth.is_finite() {
        return Err(Error::InvalidParameter { name: "bandwidth", reason: "must be finite and > 0" });
    }
    if !(req.ring_down > 0.0) || req.sample_every == 0 {
        return Err(Error::InvalidParameter { name: "ring_down", reason: "ring-down and sampling must be positive" });
    }
    let vg = req.group_velocity;
    let center = req.grid_center.unwrap_or(p.delta_0);
    let half_width = req.half_width.unwrap_or(SPECTRAL_MARGIN * req.bandwidth);
    if !(half_width > 0.0) || req.modes < 2 {
        return Err(Error::InvalidParameter { name: "half_width", reason: "grid needs a positive width and two modes" });
    }
    let spacing = 2.0 * half_width / (req.modes as f64 - 1.0);
    let length = 2.0 * core::f64::consts::PI * vg / spacing;
    let grid = build_mode_grid_around(p.omega_c, center, req.bandwidth, req.modes, length, vg)?;

    let sigma_k = req.bandwidth / vg;
    let mut packet = WavepacketSpec { s0: -1.0, sigma_k, carrier_detuning: p.delta_0, e1: req.e1, e2: req.e2 };
    packet.s0 = -req.start_distance * packet.pulse_length();
    let wavepacket = gaussian_wavepacket(&grid, &packet)?;

    let rate = slowest_decay_rate(p);
    if !(rate > 0.0) {
        return Err(Error::InvalidParameter { name: "kappa", reason: "the cavity must decay for the pulse to leave" });
    }
    let t_end_min = 2.0 * packet.arrival_time(vg) + req.ring_down / rate;
    let max_dt = max_time_step(p, &grid);
    let steps = (t_end_min / max_dt).ceil().max(1.0);
    let dt = t_end_min / steps;
    let settings = RunSettings { t_end: steps * dt, dt, sample_every: req.sample_every, leak_tolerance: LEAK_TOLERANCE };
    if grid.revival_period() < settings.t_end {
        return Err(Error::RevivalBeforeEnd { period: grid.revival_period(), t_end: settings.t_end });
    }
    let state0 = AmplitudeState::incident(&wavepacket);
    Ok(Plan { grid, packet, wavepacket, state0, settings })
}
