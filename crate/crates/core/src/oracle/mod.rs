//! Exact reference solvers.
//!
//! Two independent routes to the same amplitudes: composed 2×2 transfer
//! matrices for piecewise-constant potentials with delta junctions, and a
//! fourth-order integration of the stationary Schrödinger equation. Neither
//! uses the diagram series.

mod ode;
mod profile;
mod transfer;

pub use ode::{ode_solve, ode_solve_profile};
pub use profile::{Profile, Step};
pub use transfer::{
    tm_amplitudes, tm_amplitudes_from, tm_compose, tm_delta_junction, tm_profile,
    tm_uniform_segment, transfer_solve, TransferMatrix,
};

use crate::born::{BornError, ScatteringAmplitudes};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("adjacent transfer matrices disagree on momentum ({left} vs {right})")]
    MomentumMismatch { left: f64, right: f64 },
    #[error("adjacent transfer matrices do not meet ({left} vs {right})")]
    PositionGap { left: f64, right: f64 },
    #[error("cannot compose an empty chain")]
    EmptyChain,
    #[error("segment length must be non-negative, got {0}")]
    NegativeLength(f64),
    #[error("transmission pole: |M22| = {0:e}")]
    TransmissionPole(f64),
    #[error("step {step} too large (p·h = {ph:.3}, q·h = {qh:.3}); estimated error {}", .result.error_estimate)]
    StepTooLarge {
        step: f64,
        ph: f64,
        qh: f64,
        result: Box<OracleResult>,
    },
    #[error("step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("step intervals must not overlap ({0} and {1})")]
    OverlappingSteps(usize, usize),
    #[error(transparent)]
    Potential(#[from] BornError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    TransferMatrix,
    OdeIntegration,
}

impl OracleMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::TransferMatrix => "transfer_matrix",
            Self::OdeIntegration => "ode_integration",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub amplitudes: ScatteringAmplitudes,
    pub method: OracleMethod,
    pub error_estimate: f64,
}

impl OracleResult {
    pub fn t(&self) -> num_complex::Complex64 {
        self.amplitudes.t
    }

    pub fn r(&self) -> num_complex::Complex64 {
        self.amplitudes.r
    }

    pub fn transmission(&self) -> f64 {
        self.amplitudes.transmission()
    }

    pub fn reflection(&self) -> f64 {
        self.amplitudes.reflection()
    }
}
