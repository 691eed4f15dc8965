//! Slowly varying LTV benchmark and its low-rank observer-based controller.

pub mod placement;
pub mod plant;
pub mod simulate;

pub use placement::{charpoly_2x2, place_observer_si, place_poles_si, poly_from_roots};
pub use plant::{a_alpha, a_alpha_eigenvectors, rotated_plant, rotation_q};
pub use simulate::{ltv_simulate, LtvScenario, StepRecord, TrajectoryLog};
