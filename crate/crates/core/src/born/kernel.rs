use super::{BornError, Convention, PotentialSpec};
use crate::propagator::Kinematics;
use num_complex::Complex64;

/// Below `|E - V₀| < THRESHOLD_RELATIVE · max(E, |V₀|)` the barrier kernel is
/// taken from its small-`q` expansion.
pub const THRESHOLD_RELATIVE: f64 = 1e-8;

/// The ratio `Λ` whose powers generate the diagram series, together with the
/// phase attached to the momentum-reversing channel.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesKernel {
    lambda: Complex64,
    reflection_phase: Complex64,
    potential: PotentialSpec,
    kinematics: Kinematics,
}

impl SeriesKernel {
    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    /// `|Λ| < 1`.
    pub fn is_convergent(&self) -> bool {
        self.lambda.norm() < 1.0
    }

    pub fn reflection_phase(&self) -> Complex64 {
        self.reflection_phase
    }

    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    pub fn kinematics(&self) -> &Kinematics {
        &self.kinematics
    }

    /// Ratio of successive terms, `-iΛ`.
    pub fn vertex(&self) -> Complex64 {
        Complex64::new(0.0, -1.0) * self.lambda
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        if convention == Convention::Paper {
            self.lambda = -self.lambda;
        }
        self
    }

    /// Builds the kernel for a delta or barrier potential.
    pub fn for_potential(kin: &Kinematics, potential: &PotentialSpec) -> Result<Self, BornError> {
        match potential {
            PotentialSpec::Delta { strength, position } => {
                Ok(delta_kernel(kin, *strength, *position))
            }
            PotentialSpec::Barrier { height, width } => barrier_kernel(kin, *height, *width),
            PotentialSpec::DeltaComb(_) => Err(BornError::WrongPotential {
                operation: "series kernel",
                kind: "comb",
            }),
        }
    }
}

/// `Λ = m α / p`, reflection phase `e^{-2ipa}`.
pub fn delta_kernel(kin: &Kinematics, strength: f64, position: f64) -> SeriesKernel {
    let p = kin.momentum();
    SeriesKernel {
        lambda: Complex64::new(kin.mass() * strength / p, 0.0),
        reflection_phase: Complex64::from_polar(1.0, -2.0 * p * position),
        potential: PotentialSpec::Delta { strength, position },
        kinematics: *kin,
    }
}

/// Inside wavenumber `q = sqrt(2m(E - V₀))`, on the decaying branch
/// `q = +i sqrt(2m(V₀ - E))` below the barrier top.
pub(crate) fn inside_wavenumber(mass: f64, energy: f64, height: f64) -> Complex64 {
    let q2 = 2.0 * mass * (energy - height);
    if q2 >= 0.0 {
        Complex64::new(q2.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-q2).sqrt())
    }
}

/// `Λ = V₀ (e^{2iqa} - 1) / (4 sqrt(E (E - V₀)))` for a wall of height `V₀`
/// on `[0, a]`.
///
/// With `k = sqrt(2mE)` the denominator is `2kq/m`, which fixes the branch
/// of the square root in the tunnelling regime. Near `E = V₀` the expansion
/// `Λ ≈ i m V₀ a / k · (1 + i q a)` replaces the 0/0 form. The reflection
/// phase is that of `∫₀^a e^{-2ipz} dz`, i.e. `e^{-ipa}`.
pub fn barrier_kernel(
    kin: &Kinematics,
    height: f64,
    width: f64,
) -> Result<SeriesKernel, BornError> {
    PotentialSpec::barrier(height, width)?;
    let m = kin.mass();
    let e = kin.energy();
    let k = kin.momentum();
    let q = inside_wavenumber(m, e, height);
    let i = Complex64::i();
    let lambda = if (e - height).abs() < THRESHOLD_RELATIVE * e.max(height.abs()) {
        i * (m * height * width / k) * (1.0 + i * q * width)
    } else {
        m * height * ((2.0 * i * q * width).exp() - 1.0) / (2.0 * k * q)
    };
    Ok(SeriesKernel {
        lambda,
        reflection_phase: Complex64::from_polar(1.0, -k * width),
        potential: PotentialSpec::Barrier { height, width },
        kinematics: *kin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Transmit,
    Reflect,
}

/// `∫₀^a e^{iΔp z} dz = (e^{iΔp a} - 1)/(iΔp)`, equal to `a` at `Δp = 0`.
pub fn first_order_integral(delta_p: f64, width: f64) -> Complex64 {
    let theta = delta_p * width;
    if theta.abs() < 1e-6 {
        let i_theta = Complex64::new(0.0, theta);
        width * (1.0 + i_theta / 2.0 + i_theta * i_theta / 6.0)
    } else {
        (Complex64::new(0.0, theta).exp() - 1.0) / Complex64::new(0.0, delta_p)
    }
}

/// First diagram of a wall: `-i V₀ (m/p) ∫₀^a e^{iΔp z} dz` with `Δp = 0`
/// (transmit) or `Δp = -2p` (reflect).
pub fn barrier_first_order(
    kin: &Kinematics,
    height: f64,
    width: f64,
    channel: Channel,
) -> Complex64 {
    let p = kin.momentum();
    let delta_p = match channel {
        Channel::Transmit => 0.0,
        Channel::Reflect => -2.0 * p,
    };
    Complex64::new(0.0, -height * kin.mass() / p) * first_order_integral(delta_p, width)
}
