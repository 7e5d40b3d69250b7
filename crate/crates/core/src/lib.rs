//! One-dimensional quantum scattering by explicit diagram resummation.
//!
//! Units are ħ = 1 throughout. A scattering target is described by a
//! [`PotentialSpec`]: a single delta, a finite delta comb, or a square wall.
//! The [`born`] module builds each order of the diagram series and sums it
//! (closed form, partial sums, or series acceleration). The [`oracle`]
//! module solves the same problems exactly with transfer matrices and an
//! ODE integrator so every resummed amplitude can be checked.
//!
//! Amplitude convention: `t` is the coefficient of the momentum-conserving
//! channel and `r` that of the momentum-reversing channel, with the
//! reflected phase referenced so that a delta at `a` contributes
//! `e^{-2ipa}` to `r`. Physically this is the reflection amplitude for a
//! wave arriving from `+x`; see [`Incidence`].

pub mod born;
pub mod cli;
pub mod oracle;
pub mod propagator;

pub use born::{
    Acceleration, BornError, Convention, Incidence, OrderTerm, PotentialSpec, ScatteringAmplitudes,
    SeriesKernel, SeriesReport, Site,
};

pub use oracle::{OracleError, OracleMethod, OracleResult, Profile, TransferMatrix};
pub use propagator::{GaussianPacket, Kinematics, KinematicsError, PropagatorError};
