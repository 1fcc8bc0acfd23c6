use alloc::vec::Vec;

#[allow(unused_imports)] // std's inherent float methods win whenever std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::engine::{integrate, Kick, Recorder};
use super::{AmplitudeState, RunSettings, Sample, TrajectoryRecord};
use crate::pulse::ModeGrid;
use crate::{Complex64, Error, Result, SystemParams, I};

/// Default cap on the memory held by an ensemble's records, in bytes.
pub const DEFAULT_MEMORY_BUDGET: usize = 1 << 30;

/// How the ensemble-mean populations in the noise intensities
/// `D_00 = μ_c |C_c|² + γ_e |C_e|²` and `D_ee = 2γ_el |C_e|²` are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseClosure {
    /// Each trajectory uses its own instantaneous populations. Conserves the
    /// mean norm exactly and reproduces the master-equation averages.
    #[default]
    SelfConsistent,
    /// Populations are taken from the noise-free trajectory: the noise is
    /// kept to first order, as in the perturbative noise estimates.
    FirstOrder,
}

struct Langevin<'a> {
    rng: ChaCha8Rng,
    mu: f64,
    gamma_e: f64,
    gamma_el: f64,
    companion: Option<&'a [[f64; 2]]>,
}

impl Langevin<'_> {
    fn increment(&mut self) -> Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
    }
}

impl Kick for Langevin<'_> {
    fn kick(&mut self, step: usize, dt: f64, cavity_sq: f64, emitter_sq: f64, ground: &mut Complex64, emitter: &mut Complex64) {
        let [cav, emi] = match self.companion {
            Some(c) => c[step],
            None => [cavity_sq, emitter_sq],
        };
        let d00 = self.mu * cav + self.gamma_e * emi;
        let dee = 2.0 * self.gamma_el * emi;
        if d00 > 0.0 {
            *ground += -I * (d00 * dt).sqrt() * self.increment();
        }
        if dee > 0.0 {
            *emitter += (dee * dt).sqrt() * self.increment();
        }
    }
}

/// Shared inputs of a noisy ensemble. Trajectory `i` depends only on the
/// seed and `i`, so trajectories can be generated in any order or in
/// parallel.
#[derive(Debug, Clone)]
pub struct StochasticRun<'a> {
    state0: &'a AmplitudeState,
    params: &'a SystemParams,
    grid: &'a ModeGrid,
    settings: RunSettings,
    closure: NoiseClosure,
    seed: u64,
    reference: TrajectoryRecord,
    companion: Vec<[f64; 2]>,
}

impl<'a> StochasticRun<'a> {
    /// Runs the noise-free reference trajectory.
    pub fn new(
        state0: &'a AmplitudeState,
        params: &'a SystemParams,
        grid: &'a ModeGrid,
        settings: RunSettings,
        closure: NoiseClosure,
        seed: u64,
    ) -> Result<Self> {
        let mut recorder = Recorder(Vec::with_capacity(settings.steps()));
        let reference = integrate(state0, params, grid, &settings, &mut recorder)?;
        let companion = match closure {
            NoiseClosure::FirstOrder => recorder.0,
            NoiseClosure::SelfConsistent => Vec::new(),
        };
        Ok(Self { state0, params, grid, settings, closure, seed, reference, companion })
    }

    pub fn reference(&self) -> &TrajectoryRecord {
        &self.reference
    }

    pub fn into_reference(self) -> TrajectoryRecord {
        self.reference
    }

    /// Approximate bytes held by one trajectory record.
    pub fn record_bytes(&self) -> usize {
        let samples = self.settings.steps() / self.settings.sample_every + 2;
        samples * core::mem::size_of::<Sample>() + 2 * self.grid.len() * core::mem::size_of::<Complex64>()
    }

    /// Rejects ensembles whose records would exceed `budget` bytes.
    pub fn check_budget(&self, n_traj: usize, budget: usize) -> Result<()> {
        let requested = n_traj.saturating_mul(self.record_bytes());
        if requested > budget {
            return Err(Error::MemoryBudget { requested, budget });
        }
        Ok(())
    }

    pub fn trajectory(&self, index: u64) -> Result<TrajectoryRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let mut noise = Langevin {
            rng,
            mu: self.params.mu_c,
            gamma_e: self.params.gamma_e,
            gamma_el: self.params.gamma_el,
            companion: match self.closure {
                NoiseClosure::FirstOrder => Some(&self.companion),
                NoiseClosure::SelfConsistent => None,
            },
        };
        integrate(self.state0, self.params, self.grid, &self.settings, &mut noise)
    }
}

/// Noise-free reference plus the noisy trajectories, in index order.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub reference: TrajectoryRecord,
    pub trajectories: Vec<TrajectoryRecord>,
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleStats {
    pub mean: f64,
    pub std_error: f64,
}

impl EnsembleStats {
    pub fn from_values(values: impl Iterator<Item = f64> + Clone) -> Self {
        let n = values.clone().count();
        if n == 0 {
            return Self { mean: f64::NAN, std_error: f64::NAN };
        }
        let mean = values.clone().sum::<f64>() / n as f64;
        if n == 1 {
            return Self { mean, std_error: f64::NAN };
        }
        let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
        Self { mean, std_error: (var / n as f64).sqrt() }
    }

    /// `|mean - target| <= k` standard errors.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

impl Ensemble {
    pub fn final_norm(&self) -> EnsembleStats {
        EnsembleStats::from_values(self.trajectories.iter().map(|r| r.final_norm()))
    }

    pub fn final_ground(&self) -> EnsembleStats {
        EnsembleStats::from_values(self.trajectories.iter().map(|r| r.final_state.ground.norm_sqr()))
    }

    /// `Σ_k |C_1k - C̄_1k|² / Σ_k |C_1k(0)|²` at the end of the run, where
    /// `C̄` is the noise-free reference.
    pub fn noise_fraction(&self, initial: &AmplitudeState) -> EnsembleStats {
        let incident: f64 = initial.beam_e1();
        let reference = &self.reference.final_state.e1;
        EnsembleStats::from_values(self.trajectories.iter().map(move |r| {
            r.final_state.e1.iter().zip(reference).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / incident
        }))
    }
}

/// Runs `n_traj` noisy trajectories sequentially.
#[allow(clippy::too_many_arguments)]
pub fn evolve_stochastic(
    state0: &AmplitudeState,
    p: &SystemParams,
    grid: &ModeGrid,
    settings: &RunSettings,
    n_traj: usize,
    seed: u64,
    closure: NoiseClosure,
    memory_budget: usize,
) -> Result<Ensemble> {
    if n_traj == 0 {
        return Err(Error::InvalidParameter { name: "n_traj", reason: "must be >= 1" });
    }
    let run = StochasticRun::new(state0, p, grid, *settings, closure, seed)?;
    run.check_budget(n_traj, memory_budget)?;
    let trajectories = (0..n_traj as u64).map(|i| run.trajectory(i)).collect::<Result<Vec<_>>>()?;
    Ok(Ensemble { reference: run.into_reference(), trajectories })
}
