//! Diagram series for delta and square-wall potentials.
//!
//! Each vertex of the series contributes a factor `-iΛ`, so the n-th order
//! term is `(-iΛ)ⁿ` in the momentum-conserving channel and the same times a
//! reflection phase in the momentum-reversing channel. [`resum_closed`] sums
//! the geometric series exactly, [`partial_sum`] keeps every order, and
//! [`accelerate`] recovers the sum from partial sums even outside the radius
//! of convergence. [`comb_solve`] resums all diagrams for a finite comb of
//! deltas as a linear system over the site amplitudes.

mod accelerate;
mod comb;
mod kernel;
mod series;

pub use accelerate::{accelerate, pade, shanks, shanks_window, Acceleration};
pub use comb::{comb_solve, comb_solve_from};
pub use kernel::{
    barrier_first_order, barrier_kernel, delta_kernel, first_order_integral, Channel, SeriesKernel,
    THRESHOLD_RELATIVE,
};
pub use series::{order_term, partial_sum, resum_closed, OrderTerm, SeriesReport, MAX_ORDER};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BornError {
    #[error("delta comb must contain at least one site")]
    EmptyComb,
    #[error("delta comb positions must be strictly increasing (site {index})")]
    UnorderedComb { index: usize },
    #[error("barrier width must be positive, got {0}")]
    BarrierWidth(f64),
    #[error("potential parameter `{0}` must be finite")]
    NonFinite(&'static str),
    #[error("{operation} is not defined for a {kind} potential")]
    WrongPotential {
        operation: &'static str,
        kind: &'static str,
    },
    #[error("pole of the resummed amplitude: |1 + iΛ| = {residual:e} (bound-state condition)")]
    Pole { residual: f64 },
    #[error("order {0} exceeds the maximum of {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("acceleration needs at least 3 partial sums, have {0}")]
    TooFewPartialSums(usize),
    #[error("acceleration degenerate: every difference denominator is below threshold (series already converged)")]
    Degenerate,
    #[error("comb system singular: relative determinant {relative_det:e} (resonance pole)")]
    ResonancePole { relative_det: f64 },
}

/// One delta of strength `strength` at `position`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Site {
    pub strength: f64,
    pub position: f64,
}

impl Site {
    pub fn new(strength: f64, position: f64) -> Self {
        Self { strength, position }
    }
}

/// A scattering target.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    /// `α δ(x - a)`.
    Delta { strength: f64, position: f64 },
    /// Finite comb of deltas at strictly increasing positions.
    DeltaComb(Vec<Site>),
    /// `V₀` on `[0, width]`, zero elsewhere.
    Barrier { height: f64, width: f64 },
}

impl PotentialSpec {
    pub fn delta(strength: f64, position: f64) -> Result<Self, BornError> {
        let spec = Self::Delta { strength, position };
        spec.validate()?;
        Ok(spec)
    }

    pub fn comb(sites: Vec<Site>) -> Result<Self, BornError> {
        let spec = Self::DeltaComb(sites);
        spec.validate()?;
        Ok(spec)
    }

    pub fn barrier(height: f64, width: f64) -> Result<Self, BornError> {
        let spec = Self::Barrier { height, width };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), BornError> {
        match self {
            Self::Delta { strength, position } => {
                finite(*strength, "strength")?;
                finite(*position, "position")
            }
            Self::DeltaComb(sites) => {
                if sites.is_empty() {
                    return Err(BornError::EmptyComb);
                }
                for (index, site) in sites.iter().enumerate() {
                    finite(site.strength, "strength")?;
                    finite(site.position, "position")?;
                    if index > 0 && site.position <= sites[index - 1].position {
                        return Err(BornError::UnorderedComb { index });
                    }
                }
                Ok(())
            }
            Self::Barrier { height, width } => {
                finite(*height, "height")?;
                if !(*width > 0.0 && width.is_finite()) {
                    return Err(BornError::BarrierWidth(*width));
                }
                Ok(())
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Delta { .. } => "delta",
            Self::DeltaComb(_) => "comb",
            Self::Barrier { .. } => "barrier",
        }
    }

    /// Sites of a delta or comb potential; empty for a barrier.
    pub fn sites(&self) -> Vec<Site> {
        match self {
            Self::Delta { strength, position } => vec![Site::new(*strength, *position)],
            Self::DeltaComb(sites) => sites.clone(),
            Self::Barrier { .. } => Vec::new(),
        }
    }

    /// Largest value the potential takes on an interval (zero for deltas).
    pub fn step_height(&self) -> f64 {
        match self {
            Self::Barrier { height, .. } => *height,
            _ => 0.0,
        }
    }

    /// Same potential translated by `shift`.
    pub fn translated(&self, shift: f64) -> Option<Self> {
        match self {
            Self::Delta { strength, position } => Some(Self::Delta {
                strength: *strength,
                position: position + shift,
            }),
            Self::DeltaComb(sites) => Some(Self::DeltaComb(
                sites
                    .iter()
                    .map(|s| Site::new(s.strength, s.position + shift))
                    .collect(),
            )),
            // the barrier is anchored at the origin
            Self::Barrier { .. } => None,
        }
    }
}

fn finite(value: f64, name: &'static str) -> Result<(), BornError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(BornError::NonFinite(name))
    }
}

/// Side the incoming wave arrives from.
///
/// The crate-wide amplitude convention is [`Incidence::Right`]: a wave
/// `e^{-ipx}` arriving from `+x`, whose reflection off a delta at `a` carries
/// `e^{-2ipa}`. Transmission is the same from both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Incidence {
    Left,
    #[default]
    Right,
}

/// Sign convention for the kernel.
///
/// `Internal` sums the per-order terms `(-iΛ)ⁿ` as written, giving
/// `1/(1 + iΛ)`. `Paper` flips the sign of `Λ` first, giving the
/// `1/(1 - iΛ)` form. Probabilities agree under both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    #[default]
    Internal,
    Paper,
}

/// Coefficients of the momentum-conserving (`t`) and momentum-reversing
/// (`r`) channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    pub t: Complex64,
    pub r: Complex64,
}

impl ScatteringAmplitudes {
    pub fn new(t: Complex64, r: Complex64) -> Self {
        Self { t, r }
    }

    pub fn free() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// `T = |t|²`.
    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }

    /// `R = |r|²`.
    pub fn reflection(&self) -> f64 {
        self.r.norm_sqr()
    }

    pub fn unitarity_residual(&self) -> f64 {
        (self.transmission() + self.reflection() - 1.0).abs()
    }
}

impl std::ops::Add for ScatteringAmplitudes {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.t + rhs.t, self.r + rhs.r)
    }
}
