use super::{OracleError, OracleMethod, OracleResult, Profile};
use crate::born::{Incidence, PotentialSpec, ScatteringAmplitudes};
use crate::propagator::Kinematics;
use nalgebra::Matrix2;
use num_complex::Complex64;

/// `|M22|` below this is a transmission pole.
const POLE_THRESHOLD: f64 = 1e-14;

/// Relative tolerance when checking that adjacent matrices meet.
const JOIN_TOLERANCE: f64 = 1e-12;

/// Maps the coefficients `(A, B)` of `A e^{ip(x - x_L)} + B e^{-ip(x - x_L)}`
/// on the left of a region to those referenced at `x_R` on its right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub matrix: Matrix2<Complex64>,
    pub p_left: f64,
    pub p_right: f64,
    pub x_left: f64,
    pub x_right: f64,
}

impl TransferMatrix {
    pub fn identity(kin: &Kinematics, x: f64) -> Self {
        Self {
            matrix: Matrix2::identity(),
            p_left: kin.momentum(),
            p_right: kin.momentum(),
            x_left: x,
            x_right: x,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.matrix.determinant()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Junction conditions of `α δ(x - a)`: `ψ` continuous, `ψ'` jumps by
/// `2 m α ψ`. With `Λ' = m α / p` this is `[[1 - iΛ', -iΛ'], [iΛ', 1 + iΛ']]`.
pub fn tm_delta_junction(kin: &Kinematics, strength: f64, position: f64) -> TransferMatrix {
    let l = kin.mass() * strength / kin.momentum();
    TransferMatrix {
        matrix: Matrix2::new(c(1.0, -l), c(0.0, -l), c(0.0, l), c(1.0, l)),
        p_left: kin.momentum(),
        p_right: kin.momentum(),
        x_left: position,
        x_right: position,
    }
}

/// `sin z / z`.
fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Region of constant height `V` and length `L` starting at `start`,
/// expressed in the outside plane-wave basis on both ends.
///
/// Inside, `(ψ, ψ')` evolves by `[[cos qL, L sinc qL], [-q² L sinc qL, cos qL]]`
/// with `q² = 2m(E - V)`. Every entry is even in `q`, so the tunnelling and
/// `E = V` cases need no separate branch.
pub fn tm_uniform_segment(
    kin: &Kinematics,
    height: f64,
    start: f64,
    length: f64,
) -> Result<TransferMatrix, OracleError> {
    if length.is_nan() || length < 0.0 {
        return Err(OracleError::NegativeLength(length));
    }
    let p = kin.momentum();
    let q2 = 2.0 * kin.mass() * (kin.energy() - height);
    let q = c(q2, 0.0).sqrt();
    let ql = q * length;
    let cos = ql.cos();
    let s = sinc(ql) * length;
    let inside = Matrix2::new(cos, s, -q2 * s, cos);
    let ip = c(0.0, p);
    let to_derivative = Matrix2::new(c(1.0, 0.0), c(1.0, 0.0), ip, -ip);
    let from_derivative = Matrix2::new(c(0.5, 0.0), 0.5 / ip, c(0.5, 0.0), -0.5 / ip);
    Ok(TransferMatrix {
        matrix: from_derivative * inside * to_derivative,
        p_left: p,
        p_right: p,
        x_left: start,
        x_right: start + length,
    })
}

/// Product of a left-to-right chain of matrices.
pub fn tm_compose(chain: &[TransferMatrix]) -> Result<TransferMatrix, OracleError> {
    let (first, rest) = chain.split_first().ok_or(OracleError::EmptyChain)?;
    let mut total = *first;
    for next in rest {
        let scale = total.p_right.abs().max(next.p_left.abs());
        if (total.p_right - next.p_left).abs() > JOIN_TOLERANCE * scale {
            return Err(OracleError::MomentumMismatch {
                left: total.p_right,
                right: next.p_left,
            });
        }
        let span = total.x_right.abs().max(next.x_left.abs()).max(1.0);
        if (total.x_right - next.x_left).abs() > JOIN_TOLERANCE * span {
            return Err(OracleError::PositionGap {
                left: total.x_right,
                right: next.x_left,
            });
        }
        total = TransferMatrix {
            matrix: next.matrix * total.matrix,
            p_left: total.p_left,
            p_right: next.p_right,
            x_left: total.x_left,
            x_right: next.x_right,
        };
    }
    Ok(total)
}

/// Amplitudes in the crate-wide convention ([`Incidence::Right`]).
pub fn tm_amplitudes(m: &TransferMatrix) -> Result<OracleResult, OracleError> {
    tm_amplitudes_from(m, Incidence::default())
}

/// Amplitudes for a wave arriving from the given side, referenced to the
/// global plane waves `e^{±ipx}`.
pub fn tm_amplitudes_from(
    m: &TransferMatrix,
    incidence: Incidence,
) -> Result<OracleResult, OracleError> {
    let m22 = m.matrix[(1, 1)];
    if m22.norm() < POLE_THRESHOLD {
        return Err(OracleError::TransmissionPole(m22.norm()));
    }
    let (pl, pr) = (m.p_left, m.p_right);
    // t = e^{i(p_L x_L - p_R x_R)} det M / M22 in general; det M = 1 for equal momenta
    let t = Complex64::from_polar(1.0, pl * m.x_left - pr * m.x_right) * m.determinant() / m22;
    let r = match incidence {
        Incidence::Left => {
            -m.matrix[(1, 0)] / m22 * Complex64::from_polar(1.0, 2.0 * pl * m.x_left)
        }
        Incidence::Right => {
            m.matrix[(0, 1)] / m22 * Complex64::from_polar(1.0, -2.0 * pr * m.x_right)
        }
    };
    let amplitudes = ScatteringAmplitudes::new(t, r);
    Ok(OracleResult {
        amplitudes,
        method: OracleMethod::TransferMatrix,
        error_estimate: amplitudes.unitarity_residual().max(f64::EPSILON),
    })
}

/// Transfer matrix across the whole support of `profile`.
pub fn tm_profile(kin: &Kinematics, profile: &Profile) -> TransferMatrix {
    let points = profile.breakpoints();
    let Some(&first) = points.first() else {
        return TransferMatrix::identity(kin, 0.0);
    };
    let mut chain = vec![TransferMatrix::identity(kin, first)];
    for (i, &x) in points.iter().enumerate() {
        let strength = profile.strength_at(x);
        if strength != 0.0 {
            chain.push(tm_delta_junction(kin, strength, x));
        }
        if let Some(&next) = points.get(i + 1) {
            let height = profile.height_at(0.5 * (x + next));
            chain.push(
                tm_uniform_segment(kin, height, x, next - x).expect("breakpoints are sorted"),
            );
        }
    }
    tm_compose(&chain).expect("chain built from contiguous pieces")
}

/// Exact amplitudes for a potential via composed transfer matrices.
pub fn transfer_solve(kin: &Kinematics, spec: &PotentialSpec) -> Result<OracleResult, OracleError> {
    tm_amplitudes(&tm_profile(kin, &Profile::from_spec(spec)?))
}
