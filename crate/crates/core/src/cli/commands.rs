use super::config::RunConfig;
use crate::born::{
    comb_solve, partial_sum, resum_closed, BornError, Convention, PotentialSpec,
    ScatteringAmplitudes, SeriesKernel, SeriesReport, Site,
};
use crate::oracle::{ode_solve, transfer_solve, OracleError, OracleResult};
use crate::propagator::Kinematics;
use num_complex::Complex64;
use rayon::prelude::*;
use std::fmt::Write;

pub const AMPLITUDES_HEADER: &str = "E,p,re_t,im_t,re_r,im_r,T,R,unitarity_residual,method,order";
pub const SERIES_HEADER: &str = "E,p,order,re_t_n,im_t_n,re_r_n,im_r_n,partial_T,partial_R,error";
pub const COMPARE_HEADER: &str =
    "E,p,re_t_paper,im_t_paper,T_paper,re_t_tm,im_t_tm,T_tm,re_t_ode,im_t_ode,T_ode,\
ode_error_estimate,dev_t,dev_T,dev_oracles,status";

/// Process exit status of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    Success = 0,
    ConfigError = 1,
    PartialFailure = 2,
    Divergent = 3,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        self as u8
    }
}

/// CSV text plus the status the run should exit with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub csv: String,
    pub status: ExitStatus,
}

/// Fixed-width scientific notation with 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// One resummed row; `T`, `R` and the residual are derived from the same
/// stored amplitudes so the residual is reproducible from the printed row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub energy: f64,
    pub momentum: f64,
    pub t: Complex64,
    pub r: Complex64,
    pub method: &'static str,
    pub order: String,
}

impl SweepRow {
    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }

    pub fn reflection(&self) -> f64 {
        self.r.norm_sqr()
    }

    pub fn unitarity_residual(&self) -> f64 {
        (self.transmission() + self.reflection() - 1.0).abs()
    }

    pub fn to_csv(&self) -> String {
        let nums = [
            self.energy,
            self.momentum,
            self.t.re,
            self.t.im,
            self.r.re,
            self.r.im,
            self.transmission(),
            self.reflection(),
            self.unitarity_residual(),
        ];
        let mut line: Vec<String> = nums.iter().map(|&v| fmt_num(v)).collect();
        line.push(self.method.to_string());
        line.push(self.order.clone());
        line.join(",")
    }
}

fn kinematics(config: &RunConfig, energy: f64) -> Kinematics {
    Kinematics::new(config.mass, energy).expect("validated grid energies are positive")
}

/// Flips every vertex sign under the printed-sign convention.
fn comb_with_convention(config: &RunConfig) -> PotentialSpec {
    match config.convention {
        Convention::Internal => config.potential.clone(),
        Convention::Paper => PotentialSpec::DeltaComb(
            config
                .potential
                .sites()
                .into_iter()
                .map(|s| Site::new(-s.strength, s.position))
                .collect(),
        ),
    }
}

/// Resummed amplitudes and the method tag.
fn resummed(
    config: &RunConfig,
    kin: &Kinematics,
) -> Result<(ScatteringAmplitudes, &'static str), BornError> {
    match &config.potential {
        PotentialSpec::DeltaComb(_) => Ok((
            comb_solve(kin, &comb_with_convention(config))?,
            "comb_solve",
        )),
        potential => {
            let kernel =
                SeriesKernel::for_potential(kin, potential)?.with_convention(config.convention);
            Ok((resum_closed(&kernel)?, "closed_form"))
        }
    }
}

fn is_pole(err: &BornError) -> bool {
    matches!(
        err,
        BornError::Pole { .. } | BornError::ResonancePole { .. }
    )
}

/// Resummed amplitudes across the energy grid, one row per energy.
pub fn cmd_amplitudes(config: &RunConfig) -> CommandOutput {
    let rows: Vec<(SweepRow, bool)> = config
        .grid
        .energies()
        .par_iter()
        .map(|&energy| {
            let kin = kinematics(config, energy);
            let (amps, method, ok) = match resummed(config, &kin) {
                Ok((amps, method)) => (amps, method, true),
                Err(e) => {
                    let nan = Complex64::new(f64::NAN, f64::NAN);
                    (
                        ScatteringAmplitudes::new(nan, nan),
                        if is_pole(&e) { "pole" } else { "error" },
                        false,
                    )
                }
            };
            let row = SweepRow {
                energy,
                momentum: kin.momentum(),
                t: amps.t,
                r: amps.r,
                method,
                order: "all".into(),
            };
            (row, ok)
        })
        .collect();

    let mut csv = format!("{AMPLITUDES_HEADER}\n");
    let mut status = ExitStatus::Success;
    for (row, ok) in &rows {
        csv.push_str(&row.to_csv());
        csv.push('\n');
        if !ok {
            status = ExitStatus::PartialFailure;
        }
    }
    CommandOutput { csv, status }
}

struct SeriesBlock {
    rows: Vec<String>,
    note: Option<String>,
    status: ExitStatus,
}

fn series_row(
    energy: f64,
    p: f64,
    order: &str,
    term: ScatteringAmplitudes,
    partial: ScatteringAmplitudes,
    error: f64,
) -> String {
    let nums = [
        term.t.re,
        term.t.im,
        term.r.re,
        term.r.im,
        partial.transmission(),
        partial.reflection(),
        error,
    ];
    let mut line = vec![fmt_num(energy), fmt_num(p), order.to_string()];
    line.extend(nums.iter().map(|&v| fmt_num(v)));
    line.join(",")
}

fn series_block(config: &RunConfig, energy: f64) -> Result<SeriesBlock, BornError> {
    let kin = kinematics(config, energy);
    let p = kin.momentum();
    let kernel =
        SeriesKernel::for_potential(&kin, &config.potential)?.with_convention(config.convention);
    let report: SeriesReport = partial_sum(&kernel, config.series.max_order)?;
    let closed_t = report.closed_form.map(|c| c.t);
    let error_of = |t: Complex64| closed_t.map_or(f64::NAN, |c| (t - c).norm());

    let mut rows: Vec<String> = report
        .terms
        .iter()
        .zip(&report.partial_sums)
        .map(|(term, partial)| {
            series_row(
                energy,
                p,
                &term.order.to_string(),
                term.amplitudes(),
                *partial,
                error_of(partial.t),
            )
        })
        .collect();
    let mut status = if closed_t.is_none() {
        ExitStatus::PartialFailure
    } else {
        ExitStatus::Success
    };
    let mut note = None;

    match config.series.acceleration {
        Some(method) => {
            let accelerated = match crate::born::accelerate(&report, method) {
                Ok(value) => value,
                // stationary partial sums are their own limit
                Err(BornError::Degenerate)
                    if report.terms[1..]
                        .iter()
                        .all(|t| t.t == Complex64::new(0.0, 0.0)) =>
                {
                    *report
                        .partial_sums
                        .last()
                        .expect("at least one partial sum")
                }
                Err(_) => {
                    status = ExitStatus::PartialFailure;
                    let nan = Complex64::new(f64::NAN, f64::NAN);
                    ScatteringAmplitudes::new(nan, nan)
                }
            };
            rows.push(series_row(
                energy,
                p,
                method.tag(),
                accelerated,
                accelerated,
                error_of(accelerated.t),
            ));
        }
        None if report.divergent => {
            status = status.max(ExitStatus::Divergent);
            note = Some(format!(
                "# divergent: |Lambda| = {} >= 1 at E = {}; partial sums do not converge without acceleration",
                fmt_num(kernel.lambda().norm()),
                fmt_num(energy)
            ));
        }
        None => {}
    }
    Ok(SeriesBlock { rows, note, status })
}

/// Per-order diagram table for each grid energy.
pub fn cmd_series(config: &RunConfig) -> CommandOutput {
    let blocks: Vec<Result<SeriesBlock, BornError>> = config
        .grid
        .energies()
        .par_iter()
        .map(|&e| series_block(config, e))
        .collect();
    let mut csv = format!("{SERIES_HEADER}\n");
    let mut notes = Vec::new();
    let mut status = ExitStatus::Success;
    for (energy, block) in config.grid.energies().into_iter().zip(blocks) {
        match block {
            Ok(block) => {
                for row in block.rows {
                    csv.push_str(&row);
                    csv.push('\n');
                }
                notes.extend(block.note);
                status = status.max(block.status);
            }
            Err(e) => {
                notes.push(format!("# error at E = {}: {e}", fmt_num(energy)));
                status = status.max(ExitStatus::PartialFailure);
            }
        }
    }
    for note in notes {
        csv.push_str(&note);
        csv.push('\n');
    }
    CommandOutput { csv, status }
}

/// Step for the integration oracle: well inside its `p·h, q·h < 0.1` bound.
fn ode_step(config: &RunConfig, kin: &Kinematics) -> f64 {
    let top = config.potential.step_height();
    let q = (2.0 * config.mass * (kin.energy() - top)).abs().sqrt();
    0.02 / kin.momentum().max(q).max(1.0)
}

struct Comparison {
    paper: Option<ScatteringAmplitudes>,
    tm: Result<OracleResult, OracleError>,
    ode: Result<OracleResult, OracleError>,
}

impl Comparison {
    fn status(&self) -> &'static str {
        match (&self.paper, &self.tm, &self.ode) {
            (None, _, _) => "pole",
            (_, Err(_), _) | (_, _, Err(_)) => "oracle_failure",
            _ => "ok",
        }
    }
}

/// Closed-form amplitudes against both exact oracles.
pub fn cmd_compare(config: &RunConfig) -> CommandOutput {
    let energies = config.grid.energies();
    let results: Vec<Comparison> = energies
        .par_iter()
        .map(|&energy| {
            let kin = kinematics(config, energy);
            Comparison {
                paper: resummed(config, &kin).ok().map(|(amps, _)| amps),
                tm: transfer_solve(&kin, &config.potential),
                ode: ode_solve(&kin, &config.potential, ode_step(config, &kin)),
            }
        })
        .collect();

    let nan = f64::NAN;
    let mut csv = format!("{COMPARE_HEADER}\n");
    let (mut max_t, mut max_big_t, mut max_oracles) = (0.0f64, 0.0f64, 0.0f64);
    let mut flagged = 0usize;
    for (energy, cmp) in energies.iter().zip(&results) {
        let p = kinematics(config, *energy).momentum();
        let status = cmp.status();
        let (paper_t, paper_big_t) = cmp
            .paper
            .map_or((Complex64::new(nan, nan), nan), |a| (a.t, a.transmission()));
        let split = |res: &Result<OracleResult, OracleError>| {
            res.as_ref()
                .map_or((Complex64::new(nan, nan), nan, nan), |o| {
                    (o.t(), o.transmission(), o.error_estimate)
                })
        };
        let (tm_t, tm_big_t, _) = split(&cmp.tm);
        let (ode_t, ode_big_t, ode_err) = split(&cmp.ode);
        let dev_t = (paper_t - tm_t).norm();
        let dev_big_t = (paper_big_t - tm_big_t).abs();
        let dev_oracles = (tm_t - ode_t).norm();
        if status == "ok" {
            max_t = max_t.max(dev_t);
            max_big_t = max_big_t.max(dev_big_t);
            max_oracles = max_oracles.max(dev_oracles);
        } else {
            flagged += 1;
        }
        let nums = [
            *energy,
            p,
            paper_t.re,
            paper_t.im,
            paper_big_t,
            tm_t.re,
            tm_t.im,
            tm_big_t,
            ode_t.re,
            ode_t.im,
            ode_big_t,
            ode_err,
            dev_t,
            dev_big_t,
            dev_oracles,
        ];
        let mut line: Vec<String> = nums.iter().map(|&v| fmt_num(v)).collect();
        line.push(status.to_string());
        csv.push_str(&line.join(","));
        csv.push('\n');
    }
    let _ = writeln!(csv, "# max dev_t = {}", fmt_num(max_t));
    let _ = writeln!(csv, "# max dev_T = {}", fmt_num(max_big_t));
    let _ = writeln!(csv, "# max dev_oracles = {}", fmt_num(max_oracles));
    let _ = writeln!(csv, "# flagged rows = {flagged}");
    let status = if flagged > 0 {
        ExitStatus::PartialFailure
    } else {
        ExitStatus::Success
    };
    CommandOutput { csv, status }
}
