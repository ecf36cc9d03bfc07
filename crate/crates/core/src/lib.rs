//! Numerical kernels for the delay-field dynamics of a rigid two-charge
//! particle constrained to one axis of motion.
//!
//! Each point charge feels the retarded Liénard–Wiechert field of its partner,
//! which turns the equation of motion into a state-dependent delay equation.
//! The crate provides the closed-form retardation geometry, the self-force and
//! energy kernels built on it, the characteristic root spectrum of the
//! linearized dynamics, time-domain propagation by the method of steps, and
//! utilities for rendering and export.

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod energy;
pub mod export;
pub mod history;
pub mod model;
pub mod render;
pub mod retardation;
pub mod selfforce;
pub mod spectrum;

pub use dynamics::{
    advance_map, default_grid_step, measure_spectrum, propagate, propagate_linearized,
    propagate_with_tolerance, seed_with_mode, seed_with_pulse, seed_with_sinusoid,
    uniform_history, LinearState, PropagationReport,
};
pub use export::{
    export_csv, export_csv_path, export_root_set, export_root_set_path, parse_root_set,
    trajectory_records, RootRecord, RootSetDocument, TRAJECTORY_SCHEMA,
};
pub use render::{
    render_domain_coloring, write_ppm, write_ppm_path, DomainColorImage, MAX_RESOLUTION,
};
pub use error::{Error, Result};
pub use energy::{
    energy_decomposition, q_along_trajectory, quantum_potential_closed, quantum_potential_series,
    self_energy_exact, series_coefficient, EnergyBreakdown, QuantumSeries,
};
pub use history::TrajectoryHistory;
pub use model::{
    characteristic_period, lorentz_gamma, make_params, KinematicState, ModelParams, UnitMode,
};
pub use retardation::{
    delay_closed_form, delay_variation, separation_l, solve_retarded_time, DelayResult,
};
pub use selfforce::{electromagnetic_mass, eom_residual, lw_field, self_force, FieldSample};
pub use spectrum::{
    char_fn, char_fn_derivative, count_roots, default_search_box, eigenfrequencies, find_roots,
    CharRoot, EigenLadder, RootSet, SearchBox, DEFAULT_GRID_DENSITY,
};
