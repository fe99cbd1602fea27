//! Named experiment scenarios on top of the joint and reduced engines.

mod efficiency;
mod run;
mod scenario;
mod sweep;

pub use efficiency::{
    efficiency, micromaser_compare, reduced_heat_currents, Efficiency, MaserComparison,
    COHERENT_DOMINATED_ALPHA, MASER_MAX_COUPLING,
};
pub use run::{
    run_scenario, CrossValidation, LabeledGrid, Report, Representation, Row, SIGMA_FLOOR,
};
pub use scenario::{EngineMode, InitialState, JointLimits, Scenario};
pub use sweep::{default_jobs, run_parallel};
