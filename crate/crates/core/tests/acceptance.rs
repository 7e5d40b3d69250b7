//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

mod common;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scatter1d::born::{
    accelerate, barrier_kernel, comb_solve, delta_kernel, first_order_integral, partial_sum,
    resum_closed, Acceleration, PotentialSpec, Site,
};
use scatter1d::oracle::{ode_solve, tm_amplitudes, tm_delta_junction, transfer_solve};
use scatter1d::propagator::{reproduce, GaussianPacket, QuadratureOptions};
use scatter1d::Kinematics;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn delta_exactness() -> Outcome {
    let (mut worst_t, mut worst_u) = (0.0f64, 0.0f64);
    for alpha in [0.3, -0.3, 1.0, -1.0, 3.0, -3.0] {
        for p in log_spaced(0.2, 5.0, 20) {
            let kin = Kinematics::from_momentum(1.0, p).unwrap();
            let closed =
                resum_closed(&delta_kernel(&kin, alpha, 0.0)).map_err(|e| e.to_string())?;
            let oracle =
                tm_amplitudes(&tm_delta_junction(&kin, alpha, 0.0)).map_err(|e| e.to_string())?;
            worst_t = worst_t.max((closed.transmission() - oracle.transmission()).abs());
            worst_u = worst_u.max(closed.unitarity_residual());
        }
    }
    check(
        worst_t < 1e-10 && worst_u < 1e-12,
        format!("max ||t|^2 - T| = {worst_t:.2e}, max |T + R - 1| = {worst_u:.2e}"),
    )
}

fn geometric_convergence() -> Outcome {
    let kin = Kinematics::from_momentum(1.0, 1.0).unwrap();
    let mut worst = 0.0f64;
    for lambda in [0.1, 0.5, 0.9] {
        // Λ = mα/p with m = p = 1
        let kernel = delta_kernel(&kin, lambda, 0.0);
        let report = partial_sum(&kernel, 30).map_err(|e| e.to_string())?;
        let closed = report.closed_form.ok_or("pole")?;
        for (n, sum) in report.partial_sums.iter().enumerate() {
            let predicted = lambda.powi(n as i32 + 1) * closed.t.norm();
            worst = worst.max(((sum.t - closed.t).norm() - predicted).abs());
        }
    }
    check(
        worst < 1e-12,
        format!("max |error - |Λ|^(N+1)|t|| = {worst:.2e} over N <= 30"),
    )
}

fn divergence_and_acceleration() -> Outcome {
    let kin = Kinematics::from_momentum(1.0, 1.0).unwrap();
    let mut details = Vec::new();
    let mut ok = true;
    for lambda in [1.5, 2.0, 10.0] {
        let report =
            partial_sum(&delta_kernel(&kin, lambda, 0.0), 12).map_err(|e| e.to_string())?;
        let sums: Vec<Complex64> = report.partial_sums.iter().map(|s| s.t).collect();
        let growth_ok = sums.windows(3).all(|w| {
            let ratio = (w[2] - w[1]).norm() / (w[1] - w[0]).norm();
            (ratio - lambda).abs() < 1e-9 * lambda
        });
        let closed = report.closed_form.ok_or("pole")?;
        let accelerated = accelerate(&report, Acceleration::Shanks).map_err(|e| e.to_string())?;
        let err = (accelerated.t - closed.t)
            .norm()
            .max((accelerated.r - closed.r).norm());
        ok &= report.divergent && growth_ok && err < 1e-10;
        details.push(format!(
            "|Λ|={lambda}: growth {growth_ok}, shanks err {err:.2e}"
        ));
    }
    check(ok, details.join("; "))
}

fn comb_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst_tm, mut worst_ode_excess) = (0.0f64, f64::NEG_INFINITY);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let mut positions: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
        positions.sort_by(f64::total_cmp);
        positions.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        let sites = positions
            .into_iter()
            .map(|x| Site::new(rng.gen_range(-1.0..1.0), x))
            .collect();
        let spec = PotentialSpec::comb(sites).map_err(|e| e.to_string())?;
        let kin = Kinematics::from_momentum(1.0, rng.gen_range(0.5..3.0)).unwrap();

        let resummed = comb_solve(&kin, &spec).map_err(|e| e.to_string())?;
        let tm = transfer_solve(&kin, &spec).map_err(|e| e.to_string())?;
        let ode = ode_solve(&kin, &spec, 0.02 / kin.momentum()).map_err(|e| e.to_string())?;
        worst_tm = worst_tm
            .max((resummed.t - tm.t()).norm())
            .max((resummed.r - tm.r()).norm());
        let dev = (resummed.t - ode.t())
            .norm()
            .max((resummed.r - ode.r()).norm());
        worst_ode_excess = worst_ode_excess.max(dev - 1e-8f64.max(ode.error_estimate));
    }
    check(
        worst_tm < 1e-10 && worst_ode_excess < 0.0,
        format!(
            "max |comb - tm| = {worst_tm:.2e}, max (|comb - ode| - tol) = {worst_ode_excess:.2e}"
        ),
    )
}

/// Composite Gauss–Legendre (5 nodes per panel) of `e^{iΔp z}` on `[0, a]`.
fn quadrature(delta_p: f64, a: f64) -> Complex64 {
    const NODES: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let panels = 400;
    let h = a / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * h;
        for (x, w) in NODES.iter().zip(WEIGHTS) {
            acc += w * Complex64::from_polar(1.0, delta_p * (mid + 0.5 * h * x));
        }
    }
    acc * 0.5 * h
}

fn barrier_first_order() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pairs: Vec<(f64, f64)> = vec![(0.0, 1.0), (0.0, 2.5), (1e-9, 1.3)];
    pairs.extend((0..17).map(|_| (rng.gen_range(-8.0..8.0), rng.gen_range(0.1..3.0))));
    let worst = pairs
        .iter()
        .map(|&(dp, a)| (first_order_integral(dp, a) - quadrature(dp, a)).norm())
        .fold(0.0, f64::max);
    check(
        worst < 1e-10,
        format!(
            "max |F1 - quadrature| = {worst:.2e} over {} pairs",
            pairs.len()
        ),
    )
}

fn barrier_scaling() -> Outcome {
    let kin = Kinematics::new(1.0, 2.0).unwrap();
    let mut deviations = Vec::new();
    for k in 0..5 {
        let v0 = 0.2 / 2f64.powi(k);
        let spec = PotentialSpec::barrier(v0, 1.0).map_err(|e| e.to_string())?;
        let paper = resum_closed(&barrier_kernel(&kin, v0, 1.0).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let exact = transfer_solve(&kin, &spec).map_err(|e| e.to_string())?;
        deviations.push((paper.t - exact.t()).norm());
    }
    let ratios: Vec<f64> = deviations.windows(2).map(|w| w[0] / w[1]).collect();
    let ok = ratios.iter().all(|r| (3.5..=4.5).contains(r));
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    check(
        ok,
        format!(
            "halving ratios [{}] (required within [3.5, 4.5])",
            shown.join(", ")
        ),
    )
}

fn propagator_identity() -> Outcome {
    let packet = GaussianPacket::new(0.0, 1.0, 1.0).ok_or("packet")?;
    let targets: Vec<f64> = (0..=60).map(|i| -5.0 + 0.2 * i as f64).collect();
    let opts = QuadratureOptions::default();
    let evolved = reproduce(&packet, 1.0, 0.0, 1.0, &targets, &opts).map_err(|e| e.to_string())?;
    let worst = evolved
        .samples
        .values
        .iter()
        .zip(&targets)
        .map(|(v, &x)| (v - packet.evolved(x, 1.0, 1.0)).norm())
        .fold(0.0, f64::max);
    let still = reproduce(&packet, 1.0, 0.0, 0.0, &targets, &opts).map_err(|e| e.to_string())?;
    let worst_zero = still
        .samples
        .values
        .iter()
        .zip(&targets)
        .map(|(v, &x)| (v - packet.value(x)).norm())
        .fold(0.0, f64::max);
    check(
        worst < 1e-8 && worst_zero < 1e-10,
        format!("t=1 max pointwise err {worst:.2e}, t=0 max err {worst_zero:.2e}"),
    )
}

fn phase_covariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let alpha = 0.8;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let p = rng.gen_range(0.3..4.0);
        let d = rng.gen_range(-3.0..3.0);
        let kin = Kinematics::from_momentum(1.0, p).unwrap();
        let shift = Complex64::from_polar(1.0, -2.0 * p * d);
        let base = resum_closed(&delta_kernel(&kin, alpha, 0.0)).map_err(|e| e.to_string())?;
        let moved = resum_closed(&delta_kernel(&kin, alpha, d)).map_err(|e| e.to_string())?;
        let comb_base = comb_solve(&kin, &PotentialSpec::delta(alpha, 0.0).unwrap())
            .map_err(|e| e.to_string())?;
        let comb_moved = comb_solve(&kin, &PotentialSpec::delta(alpha, d).unwrap())
            .map_err(|e| e.to_string())?;
        for (b, m) in [(base, moved), (comb_base, comb_moved)] {
            worst = worst
                .max((m.r - b.r * shift).norm())
                .max((m.r.norm() - b.r.norm()).abs())
                .max((m.t - b.t).norm());
        }
    }
    check(
        worst < 1e-12,
        format!("max deviation {worst:.2e} over 10 (p, d) pairs"),
    )
}

fn cli_contract() -> Outcome {
    let mut failures = Vec::new();
    for &(cmd, name, code, rows) in common::CONTRACT {
        let path = common::fixture(name);
        let args = [cmd, "--config", path.to_str().unwrap()];
        let first = common::run(&args);
        let second = common::run(&args);
        let got_code = first.status.code();
        let got_rows = common::data_rows(&first.stdout);
        if got_code != Some(code) || got_rows != rows || first.stdout != second.stdout {
            failures.push(format!("{cmd} {name}: exit {got_code:?} rows {got_rows}"));
        }
    }
    let n = common::CONTRACT.len();
    if failures.is_empty() {
        Ok(format!(
            "{n} fixture runs match exit code, row count and repeat output"
        ))
    } else {
        Err(failures.join("; "))
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("delta exactness", delta_exactness),
        ("geometric convergence", geometric_convergence),
        ("divergence + acceleration", divergence_and_acceleration),
        ("comb equivalence", comb_equivalence),
        ("barrier first order", barrier_first_order),
        ("barrier resummation scaling", barrier_scaling),
        ("propagator identity", propagator_identity),
        ("phase covariance", phase_covariance),
        ("cli contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
