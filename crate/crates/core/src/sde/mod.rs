//! Seeded Euler–Maruyama integration of the diffusions that characterise the
//! hard-edge and bulk counting functions.

pub mod engine;
pub mod models;
mod ops;
mod types;

pub use ops::{
    count_from_alpha, count_from_phi, count_from_terminal, oscillatory_statistic, oscillatory_sup,
    simulate_alpha, simulate_coupled_increment, simulate_phi, simulate_riccati,
    simulate_riccati_run,
};
pub use types::{
    CountProcess, CountSample, DiffusionKind, DiffusionRun, HorizonPolicy, IntegratorConfig,
    ModelParams, Provenance, MAX_PATH_POINTS, STEP_CONTROL,
};
