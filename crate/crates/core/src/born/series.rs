use super::{Acceleration, BornError, ScatteringAmplitudes, SeriesKernel};
use num_complex::Complex64;

/// Highest order the series is expanded to.
pub const MAX_ORDER: usize = 64;

/// Poles closer than this (in `|1 + iΛ|`) are reported rather than divided by.
const POLE_THRESHOLD: f64 = 1e-12;

/// Contribution of the diagram with `order` vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderTerm {
    pub order: usize,
    pub t: Complex64,
    pub r: Complex64,
}

impl OrderTerm {
    pub fn amplitudes(&self) -> ScatteringAmplitudes {
        ScatteringAmplitudes::new(self.t, self.r)
    }
}

/// `t_n = (-iΛ)ⁿ`, `r_n = (-iΛ)ⁿ · phase` for `n ≥ 1`; the free term is
/// `(1, 0)`.
pub fn order_term(kernel: &SeriesKernel, order: usize) -> Result<OrderTerm, BornError> {
    if order > MAX_ORDER {
        return Err(BornError::OrderTooLarge(order));
    }
    Ok(terms(kernel, order)[order])
}

fn terms(kernel: &SeriesKernel, max_order: usize) -> Vec<OrderTerm> {
    let vertex = kernel.vertex();
    let phase = kernel.reflection_phase();
    let mut out = Vec::with_capacity(max_order + 1);
    out.push(OrderTerm {
        order: 0,
        t: Complex64::new(1.0, 0.0),
        r: Complex64::new(0.0, 0.0),
    });
    // repeated multiplication keeps divergent growth exactly geometric
    let mut power = Complex64::new(1.0, 0.0);
    for order in 1..=max_order {
        power *= vertex;
        out.push(OrderTerm {
            order,
            t: power,
            r: power * phase,
        });
    }
    out
}

/// Exact sum of the series: `t = 1/(1 + iΛ)`, `r = -iΛ/(1 + iΛ) · phase`.
pub fn resum_closed(kernel: &SeriesKernel) -> Result<ScatteringAmplitudes, BornError> {
    let denom = 1.0 + Complex64::i() * kernel.lambda();
    let residual = denom.norm();
    if residual <= POLE_THRESHOLD {
        return Err(BornError::Pole { residual });
    }
    let t = 1.0 / denom;
    Ok(ScatteringAmplitudes::new(
        t,
        kernel.vertex() * t * kernel.reflection_phase(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesReport {
    pub kernel: SeriesKernel,
    pub terms: Vec<OrderTerm>,
    /// `partial_sums[k]` is the running sum of `terms[0..=k]`.
    pub partial_sums: Vec<ScatteringAmplitudes>,
    /// `None` at a pole of the closed form.
    pub closed_form: Option<ScatteringAmplitudes>,
    pub accelerated: Option<(Acceleration, ScatteringAmplitudes)>,
    /// `|Λ| ≥ 1`.
    pub divergent: bool,
}

impl SeriesReport {
    pub fn max_order(&self) -> usize {
        self.terms.len() - 1
    }

    /// Runs [`super::accelerate`] and stores the result.
    pub fn with_acceleration(mut self, method: Acceleration) -> Result<Self, BornError> {
        let value = super::accelerate(&self, method)?;
        self.accelerated = Some((method, value));
        Ok(self)
    }

    /// `|S_k.t - closed.t|` for each partial sum.
    pub fn transmission_errors(&self) -> Option<Vec<f64>> {
        let closed = self.closed_form?;
        Some(
            self.partial_sums
                .iter()
                .map(|s| (s.t - closed.t).norm())
                .collect(),
        )
    }
}

/// Terms `0..=max_order` with their running sums.
pub fn partial_sum(kernel: &SeriesKernel, max_order: usize) -> Result<SeriesReport, BornError> {
    if max_order > MAX_ORDER {
        return Err(BornError::OrderTooLarge(max_order));
    }
    let terms = terms(kernel, max_order);
    let mut partial_sums = Vec::with_capacity(terms.len());
    let mut running = ScatteringAmplitudes::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for term in &terms {
        running = running + term.amplitudes();
        partial_sums.push(running);
    }
    let closed_form = match resum_closed(kernel) {
        Ok(amps) => Some(amps),
        Err(BornError::Pole { .. }) => None,
        Err(other) => return Err(other),
    };
    Ok(SeriesReport {
        kernel: kernel.clone(),
        terms,
        partial_sums,
        closed_form,
        accelerated: None,
        divergent: !kernel.is_convergent(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::born::{barrier_kernel, delta_kernel, Convention};
    use crate::propagator::Kinematics;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Λ = mα/p with m = 1, p = 1.
    fn kernel(lambda: f64, position: f64) -> SeriesKernel {
        delta_kernel(
            &Kinematics::from_momentum(1.0, 1.0).unwrap(),
            lambda,
            position,
        )
    }

    #[test]
    fn order_term_examples() {
        let k = kernel(0.5, 0.0);
        let t0 = order_term(&k, 0).unwrap();
        assert_eq!((t0.t, t0.r), (c(1.0, 0.0), c(0.0, 0.0)));
        let t1 = order_term(&k, 1).unwrap();
        assert_eq!((t1.t, t1.r), (c(0.0, -0.5), c(0.0, -0.5)));
        let t2 = order_term(&k, 2).unwrap();
        assert_eq!((t2.t, t2.r), (c(-0.25, 0.0), c(-0.25, 0.0)));
        assert_eq!(order_term(&k, 65), Err(BornError::OrderTooLarge(65)));
    }

    #[test]
    fn order_term_moduli_are_powers_of_lambda() {
        let k = kernel(1.7, 0.8);
        for n in 1..=20 {
            let term = order_term(&k, n).unwrap();
            let expect = 1.7f64.powi(n as i32);
            assert!((term.t.norm() - expect).abs() < 1e-13 * expect);
            assert!((term.r.norm() - expect).abs() < 1e-13 * expect);
        }
    }

    #[test]
    fn partial_sum_examples() {
        let report = partial_sum(&kernel(0.5, 0.0), 2).unwrap();
        assert_eq!(report.partial_sums[2].t, c(0.75, -0.5));
        let closed = report.closed_form.unwrap();
        let err = (report.partial_sums[2].t - closed.t).norm();
        assert!((err - 0.125 / c(1.0, 0.5).norm()).abs() < 1e-15);
        assert!((err - 0.1118).abs() < 1e-4);
        assert!(!report.divergent);

        let report = partial_sum(&kernel(2.0, 0.0), 10).unwrap();
        assert!(report.divergent);
        for n in 1..=10 {
            assert!((report.terms[n].t.norm() - 2f64.powi(n as i32)).abs() < 1e-12);
        }
        let mags: Vec<f64> = report.partial_sums.iter().map(|s| s.t.norm()).collect();
        for n in 3..=10 {
            let ratio = mags[n] / mags[n - 1];
            assert!((ratio - 2.0).abs() < 0.2, "{n}: {ratio}");
        }
    }

    #[test]
    fn partial_sums_are_running_sums() {
        let report = partial_sum(&kernel(0.9, 0.3), 30).unwrap();
        let mut acc = ScatteringAmplitudes::new(c(0.0, 0.0), c(0.0, 0.0));
        for (term, sum) in report.terms.iter().zip(&report.partial_sums) {
            acc = acc + term.amplitudes();
            assert_eq!(&acc, sum);
        }
    }

    #[test]
    fn resum_closed_examples() {
        let free = resum_closed(&kernel(0.0, 0.0)).unwrap();
        assert_eq!(free.t, c(1.0, 0.0));
        assert_eq!(free.r.norm(), 0.0);

        let amps = resum_closed(&kernel(1.0, 0.0)).unwrap();
        assert!((amps.t - c(0.5, -0.5)).norm() < 1e-16);
        assert!((amps.r - c(-0.5, -0.5)).norm() < 1e-16);
        assert!((amps.transmission() - 0.5).abs() < 1e-16);
        assert!((amps.reflection() - 0.5).abs() < 1e-16);
    }

    #[test]
    fn resum_closed_reports_pole() {
        // barrier at threshold with m V₀ a = k: Λ = i exactly
        let kin = Kinematics::new(1.0, 2.0).unwrap();
        let k = barrier_kernel(&kin, 2.0, 1.0).unwrap();
        assert_eq!(k.lambda(), c(0.0, 1.0));
        assert!(matches!(resum_closed(&k), Err(BornError::Pole { .. })));
        let report = partial_sum(&k, 5).unwrap();
        assert!(report.closed_form.is_none());
        // the flipped sign moves the pole away
        assert!(resum_closed(&k.with_convention(Convention::Paper)).is_ok());
    }

    #[test]
    fn low_and_high_energy_limits() {
        let mut last = 0.0;
        for j in 0..200 {
            let p = 1e-3 * 1.08f64.powi(j);
            let kin = Kinematics::from_momentum(1.0, p).unwrap();
            let t = resum_closed(&delta_kernel(&kin, 0.7, 0.0))
                .unwrap()
                .transmission();
            assert!(t > last);
            last = t;
            if j == 0 {
                assert!(t < 1e-5);
            }
        }
        assert!(last > 1.0 - 1e-7);
    }

    proptest! {
        #[test]
        fn geometric_remainder(lambda in -0.99f64..0.99, n in 0usize..=30) {
            let k = kernel(lambda, 0.0);
            let report = partial_sum(&k, n).unwrap();
            let closed = report.closed_form.unwrap();
            let err = (report.partial_sums[n].t - closed.t).norm();
            let expect = lambda.abs().powi(n as i32 + 1) * closed.t.norm();
            prop_assert!((err - expect).abs() < 1e-12);
        }

        #[test]
        fn closed_form_unitary(lambda in -1e3f64..1e3, a in -10.0f64..10.0) {
            let amps = resum_closed(&kernel(lambda, a)).unwrap();
            prop_assert!(amps.unitarity_residual() < 1e-12);
        }

        #[test]
        fn position_covariance(lambda in -5.0f64..5.0, p in 0.1f64..5.0, a in -3.0f64..3.0, d in -3.0f64..3.0) {
            let kin = Kinematics::from_momentum(1.0, p).unwrap();
            let base = resum_closed(&delta_kernel(&kin, lambda * p, a)).unwrap();
            let moved = resum_closed(&delta_kernel(&kin, lambda * p, a + d)).unwrap();
            prop_assert!((base.t - moved.t).norm() < 1e-12);
            prop_assert!((base.r.norm() - moved.r.norm()).abs() < 1e-12);
            let shifted = base.r * Complex64::from_polar(1.0, -2.0 * p * d);
            prop_assert!((shifted - moved.r).norm() < 1e-12);
        }
    }
}
