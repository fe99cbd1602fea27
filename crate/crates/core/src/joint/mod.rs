//! Joint open dynamics of the working qubit and the piston mode.
//!
//! States handed to [`propagate`] and the thermodynamic helpers live in the
//! dressed frame, rho_d = U rho U^dag with U from [`dressed_transform`].
//! There the Hamiltonian is diagonal and the bath generators are built from
//! bare ladder operators. [`DressedFrame`] converts to and from the lab.

mod dressing;
mod liouvillian;
mod params;
mod propagate;
mod thermo;

pub use dressing::{dressed_transform, transition_operators, DressedFrame, TransitionOperators};
pub use liouvillian::{build_liouvillian, BlockInfo, Harmonic, Liouvillian};
pub use params::{EngineParams, HeatHamiltonian, MAX_COUPLING_RATIO, MIN_JOINT_FOCK_DIM};
pub use propagate::{
    max_stable_step, propagate, propagate_steps, JointRecord, PistonSnapshot, PropagateOptions, Trajectory,
    POSITIVITY_ABORT, STEP_SAFETY, TRACE_DRIFT_TOL,
};
pub use thermo::{entropy_production, heat_currents, heat_hamiltonian, qubit_steady_state, EntropyBalance};
