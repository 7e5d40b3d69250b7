use super::{BornError, Incidence, PotentialSpec, ScatteringAmplitudes, Site};
use crate::propagator::Kinematics;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Relative determinant of `I - K` below which the comb is at a pole.
const SINGULAR_RELATIVE: f64 = 1e-12;

/// Exact resummation of every diagram whose vertices sit on the comb sites,
/// in the crate-wide convention ([`Incidence::Right`]).
pub fn comb_solve(
    kin: &Kinematics,
    potential: &PotentialSpec,
) -> Result<ScatteringAmplitudes, BornError> {
    comb_solve_from(kin, potential, Incidence::default())
}

/// Comb amplitudes for a wave arriving from the given side.
///
/// The site amplitudes solve `c_j = φ_j + Σ_k K_jk c_k` with
/// `K_jk = -i (m α_k / p) e^{ip|a_j - a_k|}` and `φ_j` the incident wave at
/// `a_j`. Transmission and reflection then project the sites onto the
/// outgoing plane waves on either side.
pub fn comb_solve_from(
    kin: &Kinematics,
    potential: &PotentialSpec,
    incidence: Incidence,
) -> Result<ScatteringAmplitudes, BornError> {
    potential.validate()?;
    let sites = match potential {
        PotentialSpec::Barrier { .. } => {
            return Err(BornError::WrongPotential {
                operation: "comb_solve",
                kind: "barrier",
            })
        }
        _ => potential.sites(),
    };
    solve_sites(kin, &sites, incidence)
}

fn solve_sites(
    kin: &Kinematics,
    sites: &[Site],
    incidence: Incidence,
) -> Result<ScatteringAmplitudes, BornError> {
    let p = kin.momentum();
    let n = sites.len();
    let lambdas: Vec<f64> = sites.iter().map(|s| kin.mass() * s.strength / p).collect();
    // direction of travel of the incident wave
    let sign = match incidence {
        Incidence::Left => 1.0,
        Incidence::Right => -1.0,
    };
    let plane = |x: f64, s: f64| Complex64::from_polar(1.0, s * p * x);

    let system = DMatrix::from_fn(n, n, |j, k| {
        let kjk = Complex64::new(0.0, -lambdas[k])
            * Complex64::from_polar(1.0, p * (sites[j].position - sites[k].position).abs());
        let identity = if j == k { 1.0 } else { 0.0 };
        Complex64::new(identity, 0.0) - kjk
    });
    let incident = DVector::from_fn(n, |j, _| plane(sites[j].position, sign));

    let hadamard: f64 = system.row_iter().map(|row| row.norm()).product();
    let lu = system.lu();
    let det = lu.determinant();
    let relative_det = det.norm() / hadamard;
    if relative_det < SINGULAR_RELATIVE {
        return Err(BornError::ResonancePole { relative_det });
    }
    let amps = lu
        .solve(&incident)
        .ok_or(BornError::ResonancePole { relative_det })?;

    let mut t = Complex64::new(1.0, 0.0);
    let mut r = Complex64::new(0.0, 0.0);
    for (j, c) in amps.iter().enumerate() {
        let vertex = Complex64::new(0.0, -lambdas[j]) * c;
        let a = sites[j].position;
        t += vertex * plane(a, -sign);
        r += vertex * plane(a, sign);
    }
    Ok(ScatteringAmplitudes::new(t, r))
}
