use super::{green_time_unchecked, PropagatorError};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Smallest admissible quadrature half-window, in evolved spreads.
const MIN_WINDOW_SPREADS: f64 = 8.0;

/// Normalized Gaussian `(π w²)^{-1/4} exp(-(x - x₀)²/(2w²) + i k₀ (x - x₀))`
/// at `t = 0`.
///
/// Free evolution keeps the form with the complex width `W² = w² + i t/m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    center: f64,
    width: f64,
    carrier: f64,
    norm: Complex64,
}

impl GaussianPacket {
    pub fn new(center: f64, width: f64, carrier: f64) -> Option<Self> {
        if !(width > 0.0 && width.is_finite() && center.is_finite() && carrier.is_finite()) {
            return None;
        }
        let norm = Complex64::new((PI * width * width).powf(-0.25), 0.0);
        Some(Self {
            center,
            width,
            carrier,
            norm,
        })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn carrier(&self) -> f64 {
        self.carrier
    }

    pub fn normalization(&self) -> Complex64 {
        self.norm
    }

    pub fn value(&self, x: f64) -> Complex64 {
        let u = x - self.center;
        self.norm * Complex64::new(-u * u / (2.0 * self.width * self.width), self.carrier * u).exp()
    }

    /// Closed-form free evolution to time `t`.
    pub fn evolved(&self, x: f64, t: f64, mass: f64) -> Complex64 {
        if t == 0.0 {
            return self.value(x);
        }
        let w2 = self.width * self.width;
        let big_w2 = Complex64::new(w2, t / mass);
        let shift = x - self.center - self.carrier * t / mass;
        let ratio = (Complex64::new(w2, 0.0) / big_w2).sqrt();
        let phase = Complex64::new(
            0.0,
            self.carrier * (x - self.center) - self.carrier * self.carrier * t / (2.0 * mass),
        );
        self.norm * ratio * (-(shift * shift) / (2.0 * big_w2) + phase).exp()
    }

    /// Standard deviation of `|ψ(x, t)|²`.
    pub fn spread(&self, t: f64, mass: f64) -> f64 {
        let w2 = self.width * self.width;
        let tau = t / (mass * w2);
        (0.5 * w2 * (1.0 + tau * tau)).sqrt()
    }

    /// Expectation of position at time `t`.
    pub fn mean_position(&self, t: f64, mass: f64) -> f64 {
        self.center + self.carrier * t / mass
    }

    /// Largest local wavenumber of the evolved packet within `half_window`
    /// of its centre.
    fn local_wavenumber(&self, t: f64, mass: f64, half_window: f64) -> f64 {
        let w2 = self.width * self.width;
        let inv = Complex64::new(w2, -t / mass) / (w2 * w2 + (t / mass).powi(2));
        self.carrier.abs() + inv.im.abs() * half_window
    }

    /// Upper bound on `∫_{|x - x_c| > c} |ψ(x, t)| dx`.
    fn tail_bound(&self, t: f64, mass: f64, c: f64) -> f64 {
        let w2 = self.width * self.width;
        let big_w2 = Complex64::new(w2, t / mass);
        let amplitude = self.norm.norm() * (w2 / big_w2.norm()).sqrt();
        // |ψ| ∝ exp(-u²/(2ℓ²)) with ℓ² = |W|⁴ / w²
        let ell2 = big_w2.norm_sqr() / w2;
        2.0 * amplitude * ell2 / c * (-c * c / (2.0 * ell2)).exp()
    }
}

/// Values on a uniform grid `x_j = start + j·step`.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub x: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl Samples {
    pub fn uniform(start: f64, step: f64, count: usize, f: impl Fn(f64) -> Complex64) -> Self {
        let x: Vec<f64> = (0..count).map(|j| start + j as f64 * step).collect();
        let values = x.iter().map(|&xi| f(xi)).collect();
        Self { x, values }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    fn step(&self) -> Option<f64> {
        if self.x.len() < 2 || self.x.len() != self.values.len() {
            return None;
        }
        let h = (self.x[self.x.len() - 1] - self.x[0]) / (self.x.len() - 1) as f64;
        (h > 0.0).then_some(h)
    }

    /// Trapezoidal `∫ |ψ|² dx`.
    pub fn norm_sqr(&self) -> f64 {
        self.trapezoid(|_, v| v.norm_sqr())
    }

    /// Trapezoidal `∫ f(x, ψ(x)) dx`; zero for fewer than two samples.
    pub fn trapezoid(&self, f: impl Fn(f64, Complex64) -> f64) -> f64 {
        let Some(h) = self.step() else { return 0.0 };
        let n = self.x.len();
        let mut sum = 0.0;
        for (j, (&x, &v)) in self.x.iter().zip(&self.values).enumerate() {
            let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            sum += w * f(x, v);
        }
        sum * h
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Half-width of the input window, in spreads of the packet at `t_from`.
    pub window_spreads: f64,
    /// Required grid points per local oscillation of the kernel phase.
    pub points_per_oscillation: f64,
    pub max_points: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            window_spreads: 12.0,
            points_per_oscillation: 16.0,
            max_points: 1 << 22,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Propagated {
    pub samples: Samples,
    /// Worst-case sampling of the kernel phase over the window.
    pub points_per_oscillation: f64,
    /// Estimated error from truncating the input window.
    pub truncation_bound: f64,
}

/// Convolves uniformly sampled `ψ(y, t)` with the free kernel over `elapsed`
/// and evaluates the result at `targets`.
///
/// Fails when the grid resolves the kernel phase with fewer than
/// `required_ppo` points per oscillation at any (target, source) pair.
pub fn propagate_samples(
    input: &Samples,
    elapsed: f64,
    mass: f64,
    targets: &[f64],
    required_ppo: f64,
) -> Result<Propagated, PropagatorError> {
    if elapsed < 0.0 {
        return Err(PropagatorError::Backward(elapsed));
    }
    if elapsed == 0.0 {
        return Err(PropagatorError::ZeroTime);
    }
    let h = input.step().ok_or(PropagatorError::BadGrid)?;
    let lo = input.x[0];
    let hi = input.x[input.x.len() - 1];
    let reach = targets
        .iter()
        .map(|&x| (x - lo).abs().max((x - hi).abs()))
        .fold(0.0, f64::max);
    let k_max = mass * reach / elapsed;
    let ppo = if k_max > 0.0 {
        2.0 * PI / (h * k_max)
    } else {
        f64::INFINITY
    };
    if ppo < required_ppo {
        return Err(PropagatorError::Undersampled {
            points_per_oscillation: ppo,
            required: required_ppo,
        });
    }

    let n = input.x.len();
    let values: Vec<Complex64> = targets
        .par_iter()
        .map(|&x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, (&y, &psi)) in input.x.iter().zip(&input.values).enumerate() {
                let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                acc += w * psi * green_time_unchecked(x - y, elapsed, mass);
            }
            acc * h
        })
        .collect();

    let edge = input.values[0].norm() + input.values[n - 1].norm();
    let kernel_modulus = (mass / (2.0 * PI * elapsed)).sqrt();
    Ok(Propagated {
        samples: Samples {
            x: targets.to_vec(),
            values,
        },
        points_per_oscillation: ppo,
        truncation_bound: kernel_modulus * edge * h,
    })
}

/// Propagates `packet` (evaluated analytically at `t_from`) to `t_to` by
/// quadrature against the free kernel, sampling the result at `targets`.
///
/// The returned samples should reproduce [`GaussianPacket::evolved`] at
/// `t_to`; that agreement is the free-propagation identity.
pub fn reproduce(
    packet: &GaussianPacket,
    mass: f64,
    t_from: f64,
    t_to: f64,
    targets: &[f64],
    opts: &QuadratureOptions,
) -> Result<Propagated, PropagatorError> {
    let elapsed = t_to - t_from;
    if elapsed < 0.0 {
        return Err(PropagatorError::Backward(elapsed));
    }
    let spread = packet.spread(t_from, mass);
    let half = opts.window_spreads * spread;
    let center = packet.mean_position(t_from, mass);
    let truncation_bound = packet.tail_bound(t_from, mass, half);
    if opts.window_spreads < MIN_WINDOW_SPREADS {
        return Err(PropagatorError::WindowTooSmall {
            widths: opts.window_spreads,
            bound: truncation_bound,
        });
    }
    if elapsed == 0.0 {
        let values = targets
            .iter()
            .map(|&x| packet.evolved(x, t_from, mass))
            .collect();
        return Ok(Propagated {
            samples: Samples {
                x: targets.to_vec(),
                values,
            },
            points_per_oscillation: f64::INFINITY,
            truncation_bound: 0.0,
        });
    }

    let reach = targets
        .iter()
        .map(|&x| (x - center).abs() + half)
        .fold(half, f64::max);
    let k_kernel = mass * reach / elapsed;
    let k_packet = packet.local_wavenumber(t_from, mass, half);
    let h = 2.0 * PI / (opts.points_per_oscillation * k_kernel.max(k_packet));
    let intervals = (2.0 * half / h).ceil();
    let needed = intervals as usize + 1;
    if needed > opts.max_points {
        return Err(PropagatorError::GridTooLarge {
            needed,
            limit: opts.max_points,
        });
    }
    let step = 2.0 * half / intervals;
    let input = Samples::uniform(center - half, step, needed, |y| {
        packet.evolved(y, t_from, mass)
    });
    let mut out = propagate_samples(&input, elapsed, mass, targets, opts.points_per_oscillation)?;
    out.truncation_bound = truncation_bound * (mass / (2.0 * PI * elapsed)).sqrt();
    Ok(out)
}
