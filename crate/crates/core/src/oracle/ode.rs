use super::{OracleError, OracleMethod, OracleResult, Profile};
use crate::born::{Incidence, PotentialSpec, ScatteringAmplitudes};
use crate::propagator::Kinematics;
use num_complex::Complex64;

/// Largest admissible `p·h` (and `|q|·h`).
const MAX_PHASE_PER_STEP: f64 = 0.1;

/// `(ψ, ψ')`.
type State = [Complex64; 2];

/// Integrates `-ψ''/(2m) + Vψ = Eψ` through the support with classical RK4,
/// applying the exact derivative jump `2mαψ` at each delta, and matches to
/// plane waves on both sides.
///
/// The amplitudes come from the half step `h/2`; the error estimate is the
/// Richardson difference `|y_h - y_{h/2}| / 15`.
pub fn ode_solve(
    kin: &Kinematics,
    spec: &PotentialSpec,
    step: f64,
) -> Result<OracleResult, OracleError> {
    ode_solve_profile(kin, &Profile::from_spec(spec)?, step, Incidence::default())
}

pub fn ode_solve_profile(
    kin: &Kinematics,
    profile: &Profile,
    step: f64,
    incidence: Incidence,
) -> Result<OracleResult, OracleError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(OracleError::BadStep(step));
    }
    let coarse = integrate(kin, profile, step, incidence);
    let fine = integrate(kin, profile, 0.5 * step, incidence);
    let estimate = (coarse.t - fine.t).norm().max((coarse.r - fine.r).norm()) / 15.0;
    let result = OracleResult {
        amplitudes: fine,
        method: OracleMethod::OdeIntegration,
        error_estimate: estimate,
    };

    let p = kin.momentum();
    let q_max = [profile.min_height(), profile.max_height()]
        .iter()
        .map(|&v| (2.0 * kin.mass() * (kin.energy() - v)).abs().sqrt())
        .fold(0.0, f64::max);
    let (ph, qh) = (p * step, q_max * step);
    if ph >= MAX_PHASE_PER_STEP || qh >= MAX_PHASE_PER_STEP {
        return Err(OracleError::StepTooLarge {
            step,
            ph,
            qh,
            result: Box::new(result),
        });
    }
    Ok(result)
}

fn integrate(
    kin: &Kinematics,
    profile: &Profile,
    step: f64,
    incidence: Incidence,
) -> ScatteringAmplitudes {
    let m = kin.mass();
    let e = kin.energy();
    let p = kin.momentum();
    let ip = Complex64::new(0.0, p);
    let mut points = profile.breakpoints();
    if points.is_empty() {
        points.push(0.0);
    }
    // start on the side the wave leaves through, where it is a pure outgoing wave
    let (sign, direction) = match incidence {
        Incidence::Right => (-1.0, 1.0),
        Incidence::Left => {
            points.reverse();
            (1.0, -1.0)
        }
    };
    let start = points[0];
    let wave = Complex64::from_polar(1.0, sign * p * start);
    let mut state: State = [wave, sign * ip * wave];

    for (i, &x) in points.iter().enumerate() {
        let jump = 2.0 * m * profile.strength_at(x) * state[0];
        state[1] += direction * jump;
        if let Some(&next) = points.get(i + 1) {
            let height = profile.height_at(0.5 * (x + next));
            let k2 = 2.0 * m * (height - e);
            let length = next - x;
            let n = (length.abs() / step).ceil().max(1.0) as usize;
            let h = length / n as f64;
            for _ in 0..n {
                state = rk4(state, h, k2);
            }
        }
    }

    // split (ψ, ψ') at the far end into e^{+ipx} and e^{-ipx}
    let end = *points.last().unwrap();
    let plus = 0.5 * (state[0] + state[1] / ip) * Complex64::from_polar(1.0, -p * end);
    let minus = 0.5 * (state[0] - state[1] / ip) * Complex64::from_polar(1.0, p * end);
    let (incoming, reflected) = match incidence {
        Incidence::Right => (minus, plus),
        Incidence::Left => (plus, minus),
    };
    ScatteringAmplitudes::new(1.0 / incoming, reflected / incoming)
}

/// One RK4 step of `ψ'' = k2 ψ`.
#[inline]
fn rk4(y: State, h: f64, k2: f64) -> State {
    let f = |s: State| -> State { [s[1], k2 * s[0]] };
    let add = |s: State, d: State, c: f64| -> State { [s[0] + c * d[0], s[1] + c * d[1]] };
    let k1 = f(y);
    let k2_ = f(add(y, k1, 0.5 * h));
    let k3 = f(add(y, k2_, 0.5 * h));
    let k4 = f(add(y, k3, h));
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2_[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2_[1] + 2.0 * k3[1] + k4[1]),
    ]
}
