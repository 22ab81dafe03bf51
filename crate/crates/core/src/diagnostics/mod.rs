//! Quench dynamics: long-time order parameters, Loschmidt rate functions,
//! rugosity traces and mean-field critical predictors.

mod grid;
mod loschmidt;
mod quench;
mod semiclassical;
mod sweep;

pub use grid::{time_average, TimeGrid};
pub use loschmidt::{clip, loschmidt_echo_manifold, loschmidt_trace, manifold_echo_from_setup, trace_from_setup, DiagnosticTrace};
pub use quench::{prepare_initial_state, InitialStateRule, QuenchSetup, QuenchSpec};
pub use semiclassical::{
    classical_energy, critical_predictions, symmetry_broken_magnetization, symmetry_resolved_ground_state, CriticalPredictions,
};
pub use sweep::{
    finite_difference, order_parameter_sweep, sweep_derivative, uniform_fields, GridRule, Horizon, SweepColumn, SweepPoint, SweepRow,
    SweepTable,
};
