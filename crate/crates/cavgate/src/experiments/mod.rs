//! Named experiments. Each returns a [`Report`] held in memory; nothing is
//! written until the caller hands it to [`crate::write_report`].

use std::fmt;
use std::str::FromStr;

use cavgate_core::dynamics::{Plan, TrajectoryRecord};

use crate::output::{pair, Artifact};
use crate::{CliError, Report, RunConfig};

pub mod ensemble;
pub mod fig2b;
pub mod gate;
pub mod oracle;
pub mod sweep;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig2b,
    OracleCompare,
    GateDemo,
    Sweep,
    Ensemble,
}

impl Experiment {
    pub const ALL: [Experiment; 5] =
        [Experiment::Fig2b, Experiment::OracleCompare, Experiment::GateDemo, Experiment::Sweep, Experiment::Ensemble];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig2b => "fig2b",
            Experiment::OracleCompare => "oracle-compare",
            Experiment::GateDemo => "gate-demo",
            Experiment::Sweep => "sweep",
            Experiment::Ensemble => "ensemble",
        }
    }

    pub fn run(self, cfg: &RunConfig) -> Result<Report, CliError> {
        match self {
            Experiment::Fig2b => fig2b::run(cfg),
            Experiment::OracleCompare => oracle::run(cfg),
            Experiment::GateDemo => gate::run(cfg),
            Experiment::Sweep => sweep::run(cfg),
            Experiment::Ensemble => ensemble::run(cfg),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

/// `(t, |C_c|², |C_e|², Σ|C_1k|², |C_0|², norm)` per recorded sample.
pub(crate) fn trajectory_csv(name: &str, record: &TrajectoryRecord) -> Artifact {
    Artifact::csv(
        name,
        "cavgate trajectory v1",
        &["t", "cavity", "emitter", "beam_e1", "ground", "norm"],
        record.samples.iter().map(|s| vec![s.t, s.cavity, s.emitter, s.beam_e1, s.ground, s.norm]),
    )
}

#[derive(serde::Serialize)]
struct FinalState {
    t: f64,
    detunings: Vec<f64>,
    e1: Vec<[f64; 2]>,
    e2: Vec<[f64; 2]>,
    cavity: [f64; 2],
    emitter: [f64; 2],
    ground: [f64; 2],
}

/// Final interaction-picture amplitudes as `[re, im]` pairs.
pub(crate) fn final_state_json(name: &str, plan: &Plan, record: &TrajectoryRecord) -> Artifact {
    let s = &record.final_state;
    Artifact::json(
        name,
        &FinalState {
            t: record.t_end,
            detunings: plan.grid.detunings(),
            e1: s.e1.iter().copied().map(pair).collect(),
            e2: s.e2.iter().copied().map(pair).collect(),
            cavity: pair(s.cavity),
            emitter: pair(s.emitter),
            ground: pair(s.ground),
        },
    )
}
