//! Quantum recoupling at a root of unity and the flip operators it induces
//! on admissibly coloured triangulations.

mod colouring;
mod level;
mod operator;

pub use colouring::{count_colourings, enumerate_colourings, ColouringBasis};
pub use level::Level;
pub use operator::{
    braid_operator, compose_path, eigen_multiplicity, flip_operator, flip_operator_for_event,
    max_abs, run_operator, verify_commutation, verify_pentagon, FlipOperator, MatrixRecord,
};

use thiserror::Error;

use crate::kinetic::KineticError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecouplingError {
    #[error("level r must be at least 3, got {0}")]
    InvalidLevel(u32),
    #[error("inadmissible labels {0:?}")]
    InadmissibleLabels(Vec<u32>),
    #[error("quantum factorial [{0}]! vanishes in a denominator")]
    VanishingDenominator(u32),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("the flip sequence does not return to its initial triangulation")]
    NotClosedLoop,
    #[error("points are not in convex position")]
    NotConvex,
    #[error(transparent)]
    Kinetic(#[from] KineticError),
}
