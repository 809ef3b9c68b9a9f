use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sgq_core::dynamics::{
    adiabaticity_parameter, analytic_coefficients, basis_sweep, instantaneous_basis, ode_trajectory_partial,
    rabi_frequency, BasisMode, OdeOptions,
};
use sgq_core::{Branch, ControlParams};

use super::evolve::overlap;
use super::Produced;
use crate::args::SweepArgs;
use crate::error::CliError;
use crate::output::{num, Table};
use crate::report::Status;

/// Adiabaticity parameter below which a node counts as adiabatic.
const ADIABATIC_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub omega0: f64,
    pub omega: f64,
    pub theta: f64,
    pub rabi_frequency: f64,
    pub adiabaticity_parameter: f64,
    pub max_transition_population: f64,
    pub is_adiabatic: bool,
    /// Largest `| |α₁|² − |⟨1(t)|ψ_ode(t)⟩|² |` over the sampled times.
    pub max_population_error: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub command: String,
    pub verified: bool,
    pub points: usize,
    pub max_phase: f64,
    pub tol: f64,
    #[serde(flatten)]
    pub status: Status,
    /// Largest population error over the grid, when verified.
    pub worst_population_error: Option<f64>,
    pub rows: Vec<SweepRow>,
}

impl Table for SweepReport {
    fn header(&self) -> Vec<&'static str> {
        vec![
            "omega0",
            "omega",
            "theta",
            "rabi_frequency",
            "adiabaticity_parameter",
            "max_transition_population",
            "is_adiabatic",
            "max_population_error",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    num(r.omega0),
                    num(r.omega),
                    num(r.theta),
                    num(r.rabi_frequency),
                    num(r.adiabaticity_parameter),
                    num(r.max_transition_population),
                    r.is_adiabatic.to_string(),
                    r.max_population_error.map(num).unwrap_or_default(),
                ]
            })
            .collect()
    }
}

/// Sample times `0..=T` with `ω̄T = max_phase`.
pub fn verification_times(params: &ControlParams, points: usize, max_phase: f64) -> Vec<f64> {
    let wbar = rabi_frequency(params);
    let rate = if wbar > 1e-12 * (params.omega0() + params.omega()) { wbar } else { params.omega0() };
    let horizon = max_phase / rate;
    let n = points - 1;
    (0..=n)
        .map(|k| if k == n { horizon } else { horizon * k as f64 / n as f64 })
        .collect()
}

/// Largest gap between the closed-form transition population and the ODE
/// state projected on the diagonalized basis, starting in `|0(0)⟩`.
pub fn population_error(params: &ControlParams, times: &[f64], opts: &OdeOptions) -> Result<f64, String> {
    let psi0 = instantaneous_basis(params, 0.0, BasisMode::ExactDiagonalized).state0;
    let (traj, err) = ode_trajectory_partial(params, &psi0, times, opts);
    if let Some(e) = err {
        return Err(e.to_string());
    }
    let bases = basis_sweep(params, times, BasisMode::ExactDiagonalized);
    Ok(times
        .iter()
        .zip(&traj)
        .zip(&bases)
        .map(|((&t, y), b)| {
            let (_, a1) = analytic_coefficients(params, t, Branch::Up);
            (a1.norm_sqr() - overlap(&b.state1, y).norm_sqr()).abs()
        })
        .fold(0.0, f64::max))
}

fn node(params: ControlParams, args: &SweepArgs, opts: &OdeOptions) -> SweepRow {
    let rabi = rabi_frequency(&params);
    let adiabaticity = adiabaticity_parameter(&params);
    let transverse = params.omega() * params.theta().sin();
    let mut row = SweepRow {
        omega0: params.omega0(),
        omega: params.omega(),
        theta: params.theta(),
        rabi_frequency: rabi,
        adiabaticity_parameter: adiabaticity,
        max_transition_population: if rabi > 0.0 { (transverse / rabi).powi(2) } else { 0.0 },
        is_adiabatic: adiabaticity < ADIABATIC_THRESHOLD,
        max_population_error: None,
        error: None,
    };
    if args.verify {
        let times = verification_times(&params, args.points, args.max_phase);
        match population_error(&params, &times, opts) {
            Ok(e) => row.max_population_error = Some(e),
            Err(e) => row.error = Some(e),
        }
    }
    row
}

pub fn run(args: &SweepArgs) -> Result<Produced, CliError> {
    let opts = args.tol.options()?;
    if args.points < 2 {
        return Err(CliError::validation("--points must be at least 2"));
    }
    if !(args.max_phase > 0.0 && args.max_phase.is_finite()) {
        return Err(CliError::validation("--max-phase must be positive"));
    }
    let mut grid = Vec::new();
    for &w0 in &args.omega0_values {
        for &ratio in &args.ratio_values {
            for &theta in &args.theta_values {
                grid.push(ControlParams::new(w0, ratio * w0, theta).map_err(CliError::validation)?);
            }
        }
    }
    if grid.is_empty() {
        return Err(CliError::validation("sweep grid is empty"));
    }
    // Collecting an indexed parallel iterator keeps grid order.
    let rows: Vec<SweepRow> = grid.par_iter().map(|p| node(*p, args, &opts)).collect();
    let status = match rows.iter().find_map(|r| r.error.as_ref()) {
        Some(e) => Status::failed(e),
        None => Status::ok(),
    };
    let worst = args
        .verify
        .then(|| rows.iter().filter_map(|r| r.max_population_error).fold(0.0, f64::max));
    let failure = status.error.clone();
    let report = SweepReport {
        command: "sweep".into(),
        verified: args.verify,
        points: args.points,
        max_phase: args.max_phase,
        tol: opts.tol,
        status,
        worst_population_error: worst,
        rows,
    };
    Produced::new(&report, args.out.format, failure)
}
