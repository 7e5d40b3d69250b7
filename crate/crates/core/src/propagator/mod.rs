//! Free-particle Green functions and the quadrature machinery that checks
//! the free-propagation identity on Gaussian wave packets.

mod packet;

pub use packet::{
    propagate_samples, reproduce, GaussianPacket, Propagated, QuadratureOptions, Samples,
};

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Relative tolerance on `p² = 2 m E`.
const MOMENTUM_CONSISTENCY: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KinematicsError {
    #[error("mass must be positive and finite, got {0}")]
    Mass(f64),
    #[error("energy must be positive and finite, got {0}")]
    Energy(f64),
    #[error("momentum must be positive and finite, got {0}")]
    Momentum(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PropagatorError {
    #[error(
        "time-domain propagator evaluated at zero elapsed time; use the reproducing identity limit"
    )]
    ZeroTime,
    #[error("propagation must run forward in time (t_to - t_from = {0})")]
    Backward(f64),
    #[error("quadrature window of {widths} widths is below the 8-width minimum; truncation bound {bound:e}")]
    WindowTooSmall { widths: f64, bound: f64 },
    #[error("kernel phase sampled at {points_per_oscillation:.2} points per oscillation (need {required})")]
    Undersampled {
        points_per_oscillation: f64,
        required: f64,
    },
    #[error("quadrature would need {needed} points (limit {limit})")]
    GridTooLarge { needed: usize, limit: usize },
    #[error("input samples must lie on a uniform grid with at least two points")]
    BadGrid,
}

/// Mass, energy and asymptotic momentum of the scattered particle (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    mass: f64,
    energy: f64,
    momentum: f64,
}

impl Kinematics {
    pub fn new(mass: f64, energy: f64) -> Result<Self, KinematicsError> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(KinematicsError::Mass(mass));
        }
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(KinematicsError::Energy(energy));
        }
        let momentum = (2.0 * mass * energy).sqrt();
        Ok(Self {
            mass,
            energy,
            momentum,
        })
    }

    pub fn from_momentum(mass: f64, momentum: f64) -> Result<Self, KinematicsError> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(KinematicsError::Mass(mass));
        }
        if !(momentum > 0.0 && momentum.is_finite()) {
            return Err(KinematicsError::Momentum(momentum));
        }
        let energy = momentum * momentum / (2.0 * mass);
        let kin = Self {
            mass,
            energy,
            momentum,
        };
        debug_assert!(kin.is_consistent());
        Ok(kin)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn momentum(&self) -> f64 {
        self.momentum
    }

    /// `p² = 2 m E` to one part in 10¹².
    pub fn is_consistent(&self) -> bool {
        let lhs = self.momentum * self.momentum;
        let rhs = 2.0 * self.mass * self.energy;
        (lhs - rhs).abs() <= MOMENTUM_CONSISTENCY * rhs
    }
}

/// Time-domain free propagator `sqrt(m / (2πi t)) · exp(i m x² / (2t))`,
/// principal branch of the square root.
pub fn green_time(x: f64, t: f64, mass: f64) -> Result<Complex64, PropagatorError> {
    if t == 0.0 {
        return Err(PropagatorError::ZeroTime);
    }
    Ok(green_time_unchecked(x, t, mass))
}

#[inline]
pub(crate) fn green_time_unchecked(x: f64, t: f64, mass: f64) -> Complex64 {
    let prefactor = (Complex64::new(mass, 0.0) / Complex64::new(0.0, 2.0 * PI * t)).sqrt();
    prefactor * Complex64::from_polar(1.0, mass * x * x / (2.0 * t))
}

/// Outgoing-wave energy-domain Green function `(m / (i p)) · exp(i p |x|)`.
///
/// This is the resolvent of `E - H₀` with `H₀ = -∂²/(2m)`; its derivative
/// jumps by `2m` across `x = 0`.
pub fn green_energy(x: f64, kin: &Kinematics) -> Complex64 {
    let p = kin.momentum();
    Complex64::new(0.0, -kin.mass() / p) * Complex64::from_polar(1.0, p * x.abs())
}
