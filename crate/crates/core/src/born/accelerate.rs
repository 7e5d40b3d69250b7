//! Recovering the sum of the diagram series from finitely many orders.
//!
//! Both methods are exact on geometric sequences, so they reproduce the
//! closed form even when `|Λ| ≥ 1` and the partial sums diverge.

use super::{BornError, ScatteringAmplitudes, SeriesReport};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Second differences below this are treated as zero.
const DENOMINATOR_FLOOR: f64 = 1e-14;

/// Hankel systems with `σ_min/σ_max` below this are treated as singular.
const PADE_CONDITION_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acceleration {
    Shanks,
    Pade,
}

impl Acceleration {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Shanks => "shanks",
            Self::Pade => "pade",
        }
    }
}

pub fn accelerate(
    report: &SeriesReport,
    method: Acceleration,
) -> Result<ScatteringAmplitudes, BornError> {
    let n = report.partial_sums.len();
    if n < 3 {
        return Err(BornError::TooFewPartialSums(n));
    }
    let (t_seq, r_seq): (Vec<Complex64>, Vec<Complex64>) =
        report.partial_sums.iter().map(|s| (s.t, s.r)).unzip();
    match method {
        Acceleration::Shanks => Ok(ScatteringAmplitudes::new(shanks(&t_seq)?, shanks(&r_seq)?)),
        Acceleration::Pade => {
            let (t_terms, r_terms): (Vec<Complex64>, Vec<Complex64>) =
                report.terms.iter().map(|term| (term.t, term.r)).unzip();
            Ok(ScatteringAmplitudes::new(pade(&t_terms)?, pade(&r_terms)?))
        }
    }
}

/// One Shanks step centred on `sums[k]`:
/// `(S_{k+1} S_{k-1} - S_k²) / (S_{k+1} + S_{k-1} - 2 S_k)`,
/// evaluated as `S_{k+1} - ΔS_k² / Δ²S` to avoid forming the products.
///
/// Returns the estimate and a rounding-error proxy, or `None` when the
/// denominator is below threshold.
pub fn shanks_window(sums: &[Complex64], k: usize) -> Option<(Complex64, f64)> {
    if k == 0 || k + 1 >= sums.len() {
        return None;
    }
    let forward = sums[k + 1] - sums[k];
    let backward = sums[k] - sums[k - 1];
    let denom = forward - backward;
    if denom.norm() < DENOMINATOR_FLOOR {
        return None;
    }
    let correction = forward * forward / denom;
    let value = sums[k + 1] - correction;
    Some((value, sums[k + 1].norm() + correction.norm()))
}

/// Shanks transform of a sequence, from the best-conditioned window.
///
/// For a divergent geometric sequence every window is exact in exact
/// arithmetic but later windows lose digits to cancellation, so the window
/// with the smallest magnitudes wins.
pub fn shanks(sums: &[Complex64]) -> Result<Complex64, BornError> {
    if sums.len() < 3 {
        return Err(BornError::TooFewPartialSums(sums.len()));
    }
    (1..sums.len() - 1)
        .filter_map(|k| shanks_window(sums, k))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(value, _)| value)
        .ok_or(BornError::Degenerate)
}

/// Diagonal Padé approximant `[L/L]` of `Σ cₙ zⁿ` evaluated at `z = 1`.
///
/// Uses the largest `L` (with `2L` not exceeding the last coefficient index)
/// for which the denominator system is well conditioned. A series that is
/// exactly rational of low degree makes the higher systems singular; the
/// lower approximant already equals it.
pub fn pade(coefficients: &[Complex64]) -> Result<Complex64, BornError> {
    if coefficients.len() < 3 {
        return Err(BornError::TooFewPartialSums(coefficients.len()));
    }
    let max_l = (coefficients.len() - 1) / 2;
    let mut best = None;
    for l in 1..=max_l {
        match pade_diagonal(coefficients, l) {
            Some(value) => best = Some(value),
            None => break,
        }
    }
    best.ok_or(BornError::Degenerate)
}

fn pade_diagonal(c: &[Complex64], l: usize) -> Option<Complex64> {
    // Σ_{j=1}^{L} b_j c_{L+i-j} = -c_{L+i},  i = 1..L
    let hankel = DMatrix::from_fn(l, l, |i, j| c[l + i - j]);
    let rhs = DVector::from_fn(l, |i, _| -c[l + i + 1]);
    let singular = hankel.clone().svd(false, false).singular_values;
    let s_max = singular.max();
    let s_min = singular.min();
    if s_max.is_nan() || s_max <= 0.0 || s_min / s_max < PADE_CONDITION_FLOOR {
        return None;
    }
    let tail = hankel.lu().solve(&rhs)?;
    let mut b = vec![Complex64::new(1.0, 0.0)];
    b.extend(tail.iter());
    let numerator: Complex64 = (0..=l)
        .map(|i| (0..=i.min(l)).map(|j| b[j] * c[i - j]).sum::<Complex64>())
        .sum();
    let denominator: Complex64 = b.iter().sum();
    if denominator.norm() < DENOMINATOR_FLOOR {
        return None;
    }
    Some(numerator / denominator)
}
