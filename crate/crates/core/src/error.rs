use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },

    #[error("symmetric-leak coefficient alpha must be nonzero")]
    ZeroLeakCoefficient,

    #[error("mode spacing {spacing} cannot resolve bandwidth {bandwidth} (need spacing <= bandwidth/16)")]
    UndersampledSpectrum { spacing: f64, bandwidth: f64 },

    #[error("pulse spectrum [{low}, {high}] is not covered by the mode grid")]
    SpectrumNotCovered { low: f64, high: f64 },

    #[error("pulse is not localized away from the cavity: {0}")]
    NotLocalized(&'static str),

    #[error("the discrete spectrum revives after {period}, before the run ends at {t_end}")]
    RevivalBeforeEnd { period: f64, t_end: f64 },

    #[error("time step {dt} does not resolve the fastest rate (need dt <= {max_dt})")]
    StepTooLarge { dt: f64, max_dt: f64 },

    #[error("norm-leak residual {residual:e} per unit time at t = {time} exceeds {tolerance:e}")]
    NormLeak { time: f64, residual: f64, tolerance: f64 },

    #[error("non-finite amplitude encountered at t = {0}")]
    NonFinite(f64),

    #[error("ensemble of {requested} bytes exceeds the memory budget of {budget} bytes")]
    MemoryBudget { requested: usize, budget: usize },

    #[error("cavity/emitter still excited at the end of the run ({residual:e} > {threshold:e})")]
    NotConverged { residual: f64, threshold: f64 },

    #[error("reflection ratio undefined: incident amplitude in the coupled polarization is zero")]
    UndefinedRatio,

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("basis transform is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
}
