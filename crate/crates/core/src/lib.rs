//! Entanglement dynamics of two-qubit states under local Pauli noise.
//!
//! The crate is organised bottom-up: [`numerics`] supplies the eigen-solvers
//! and tensor helpers, [`qstate`] the state representations, [`entanglement`]
//! the concurrence routes, [`channels`] the noise models, [`dynamics`] the
//! closed-form stability results and [`spinchain`] the XXZ ring pipeline.

pub mod channels;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod numerics;
pub mod qstate;
pub mod report;
pub mod spinchain;

pub use channels::{
    apply_one_sided, apply_r_picture, apply_two_sided, make_dephasing, make_depolarizing, random_pauli_channel,
    ChannelSchedule,
    ChannelSpec, DepolarizingSchedule, PauliChannel, ShrinkCoefficients,
};
pub use dynamics::{
    critical_time, depolarizing_residual, evolve_trajectory, is_dps, local_unitary_search, mixed_upper_bound_check,
    optimal_family_unitary, residual_max, residual_one_sided, residual_schmidt, DpsVerdict, SearchOutcome,
    StabilityReport, Trajectory,
};
pub use entanglement::{concurrence_lorentz, concurrence_wootters, concurrence_x_form, eof, lorentz_singular_values};
pub use error::{Error, Result};
pub use numerics::{CMatrix, CVector};
pub use qstate::{
    from_pure, from_r_matrix, random_state, to_r_matrix, PureState, RMatrix, RandomKind, StateJson, TwoQubitState,
    XFormState,
};
pub use spinchain::{
    evolve_reduced, ground_reduced, heisenberg_depolarizing_closed_form, EvolvedSpinCoefficients, SpinReducedState,
    XXZParams,
};
pub use nalgebra::Matrix2;
pub use num_complex::Complex64;
