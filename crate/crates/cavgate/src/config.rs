//! Run configuration, read from TOML.
//!
//! Every physical input is dimensionless: `ħ = 1` and rates, detunings and
//! couplings are in units of a reference rate (normally `κ = 1`). Missing
//! keys take the defaults below.

use std::f64::consts::FRAC_PI_4;
use std::path::{Path, PathBuf};

use cavgate_core::analytic::{critical_coupling, CriticalBranch};
use cavgate_core::dynamics::{NoiseClosure, PlanRequest, DEFAULT_MEMORY_BUDGET};
use cavgate_core::{Complex64, SystemParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub n_traj: usize,
    /// Output root; the CLI flag and `CAVGATE_OUT` take precedence.
    pub out_dir: Option<PathBuf>,
    pub system: SystemConfig,
    pub grid: GridConfig,
    pub pulse: PulseConfig,
    pub fig2b: Fig2bConfig,
    pub gate: GateConfig,
    pub sweep: SweepConfig,
    pub ensemble: EnsembleConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            n_traj: 200,
            out_dir: None,
            system: SystemConfig::default(),
            grid: GridConfig::default(),
            pulse: PulseConfig::default(),
            fig2b: Fig2bConfig::default(),
            gate: GateConfig::default(),
            sweep: SweepConfig::default(),
            ensemble: EnsembleConfig::default(),
        }
    }
}

/// Which critical-coupling solution, if any, replaces `kappa` and `delta_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriticalChoice {
    #[default]
    None,
    Resonant,
    DetunedPlus,
    DetunedMinus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub kappa: f64,
    pub mu_c: f64,
    pub gamma_e: f64,
    pub gamma_el: f64,
    /// `|Ω_c|`.
    pub omega_rabi: f64,
    /// `arg Ω_c`, radians.
    pub omega_rabi_phase: f64,
    pub delta_0: f64,
    pub delta_e: f64,
    pub omega_c: f64,
    pub critical: CriticalChoice,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            mu_c: 0.1,
            gamma_e: 0.1,
            gamma_el: 0.0,
            omega_rabi: 10.0,
            omega_rabi_phase: 0.0,
            delta_0: 0.0,
            delta_e: 0.0,
            omega_c: 0.0,
            critical: CriticalChoice::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub modes: usize,
    /// RMS spectral width of the pulse, `Δω`.
    pub bandwidth: f64,
    /// Defaults to `8Δω`.
    pub half_width: Option<f64>,
    /// Grid midpoint as a detuning from the cavity; defaults to the carrier.
    pub center: Option<f64>,
    pub group_velocity: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { modes: 2048, bandwidth: 0.05, half_width: None, center: None, group_velocity: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PulseConfig {
    /// Initial distance from the cavity, in pulse lengths.
    pub start_distance: f64,
    /// Ring-down after the pulse passes, in slowest decay times.
    pub ring_down: f64,
    /// Angle of the incident linear polarization to the cavity axis `e1`.
    pub phi: f64,
    pub sample_every: usize,
}

impl Default for PulseConfig {
    fn default() -> Self {
        Self { start_distance: 6.0, ring_down: 14.0, phi: 0.0, sample_every: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig2bConfig {
    pub gamma: f64,
    pub mu_c: f64,
    pub max_rabi: f64,
    pub points: usize,
}

impl Default for Fig2bConfig {
    fn default() -> Self {
        Self { gamma: 0.5, mu_c: 0.1, max_rabi: 5.0, points: 501 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GateConfig {
    pub phi: f64,
    /// Classical Rabi frequency and duration of the dark-state preparation.
    pub prep_rabi: f64,
    pub prep_duration: f64,
    /// Detection-density samples over `θ ∈ [-π/2, π/2]`.
    pub theta_points: usize,
}

impl Default for GateConfig {
    fn default() -> Self {
        Self { phi: FRAC_PI_4, prep_rabi: 1.0, prep_duration: std::f64::consts::FRAC_PI_2, theta_points: 181 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Kappa,
    MuC,
    GammaE,
    GammaEl,
    OmegaRabi,
    Delta0,
    DeltaE,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Kappa => "kappa",
            SweepParameter::MuC => "mu_c",
            SweepParameter::GammaE => "gamma_e",
            SweepParameter::GammaEl => "gamma_el",
            SweepParameter::OmegaRabi => "omega_rabi",
            SweepParameter::Delta0 => "delta_0",
            SweepParameter::DeltaE => "delta_e",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    /// Also run the time-domain engine at every point.
    pub numeric: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { parameter: SweepParameter::OmegaRabi, min: 0.0, max: 5.0, steps: 101, numeric: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureChoice {
    #[default]
    SelfConsistent,
    FirstOrder,
}

impl From<ClosureChoice> for NoiseClosure {
    fn from(c: ClosureChoice) -> Self {
        match c {
            ClosureChoice::SelfConsistent => NoiseClosure::SelfConsistent,
            ClosureChoice::FirstOrder => NoiseClosure::FirstOrder,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleConfig {
    pub closure: ClosureChoice,
    pub memory_budget: usize,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self { closure: ClosureChoice::SelfConsistent, memory_budget: DEFAULT_MEMORY_BUDGET }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.params()?;
        if self.sweep.steps < 2 {
            return Err(CliError::Config("sweep.steps must be >= 2".into()));
        }
        if !(self.sweep.min.is_finite() && self.sweep.max.is_finite() && self.sweep.max > self.sweep.min) {
            return Err(CliError::Config("sweep needs finite min < max".into()));
        }
        if self.fig2b.points < 2 || !(self.fig2b.max_rabi > 0.0) {
            return Err(CliError::Config("fig2b needs >= 2 points and max_rabi > 0".into()));
        }
        if self.gate.theta_points < 2 {
            return Err(CliError::Config("gate.theta_points must be >= 2".into()));
        }
        if self.n_traj == 0 {
            return Err(CliError::Config("n_traj must be >= 1".into()));
        }
        Ok(())
    }

    /// System parameters, with the critical-coupling choice applied.
    pub fn params(&self) -> Result<SystemParams, CliError> {
        let s = &self.system;
        let p = SystemParams {
            omega_c: s.omega_c,
            delta_e: s.delta_e,
            delta_0: s.delta_0,
            omega_rabi: Complex64::from_polar(s.omega_rabi, s.omega_rabi_phase),
            mu_c: s.mu_c,
            kappa: s.kappa,
            gamma_e: s.gamma_e,
            gamma_el: s.gamma_el,
        };
        p.validate()?;
        let branch = match s.critical {
            CriticalChoice::None => return Ok(p),
            CriticalChoice::Resonant => (CriticalBranch::Resonant, 0.0),
            CriticalChoice::DetunedPlus => (CriticalBranch::Detuned, 1.0),
            CriticalChoice::DetunedMinus => (CriticalBranch::Detuned, -1.0),
        };
        let solution = critical_coupling(&p)?
            .into_iter()
            .find(|sol| sol.branch == branch.0 && (branch.1 == 0.0 || sol.delta_0 * branch.1 >= 0.0))
            .ok_or_else(|| CliError::Config("no detuned critical-coupling solution: |Ω_c| < γ/2".into()))?;
        Ok(solution.apply_to(&p))
    }

    pub fn plan_request(&self) -> PlanRequest {
        let (s, c) = self.pulse.phi.sin_cos();
        let mut req = PlanRequest::new(self.grid.bandwidth, self.grid.modes)
            .with_polarization(Complex64::new(c, 0.0), Complex64::new(-s, 0.0));
        req.group_velocity = self.grid.group_velocity;
        req.grid_center = self.grid.center;
        req.half_width = self.grid.half_width;
        req.start_distance = self.pulse.start_distance;
        req.ring_down = self.pulse.ring_down;
        req.sample_every = self.pulse.sample_every;
        req
    }

    /// First 12 hex digits of the SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&canonical);
        format!("{digest:x}")[..12].to_string()
    }
}
