use serde::{Deserialize, Serialize};
use sgq_core::dynamics::{
    basis_sweep, instantaneous_basis, ode_trajectory_partial, propagator_in_basis, BasisMode,
};
use num_complex::Complex64;
use sgq_core::{QubitState, Spinor};

use super::Produced;
use crate::args::{BasisChoice, EvolveArgs, Method};
use crate::error::CliError;
use crate::output::{num, Table};
use crate::report::{Cx, ParamsJson, StateJson, Status};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveRow {
    pub t: f64,
    pub c0: Cx,
    pub c1: Cx,
    pub p0: f64,
    pub p1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveReport {
    pub command: String,
    pub params: ParamsJson,
    pub method: String,
    pub basis: String,
    pub initial: StateJson,
    #[serde(flatten)]
    pub status: Status,
    pub rows: Vec<EvolveRow>,
}

impl Table for EvolveReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["t", "re_c0", "im_c0", "re_c1", "im_c1", "p0", "p1"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    num(r.t),
                    num(r.c0.re),
                    num(r.c0.im),
                    num(r.c1.re),
                    num(r.c1.im),
                    num(r.p0),
                    num(r.p1),
                ]
            })
            .collect()
    }
}

fn row(t: f64, c0: Complex64, c1: Complex64) -> EvolveRow {
    EvolveRow { t, c0: c0.into(), c1: c1.into(), p0: c0.norm_sqr(), p1: c1.norm_sqr() }
}

/// `⟨e|y⟩` without normalizing `y`.
pub(crate) fn overlap(e: &QubitState, y: &Spinor) -> Complex64 {
    e.a0().conj() * y[0] + e.a1().conj() * y[1]
}

pub fn run(args: &EvolveArgs) -> Result<Produced, CliError> {
    let params = args.drive.params()?;
    let times = args.grid.times()?;
    let input = args.state.state()?;
    let opts = args.tol.options()?;

    let (method, basis, rows, status) = match args.method {
        Method::Analytic => {
            let rows = times
                .iter()
                .map(|&t| {
                    let c = propagator_in_basis(&params, t).apply(&input.amplitudes());
                    row(t, c[0], c[1])
                })
                .collect();
            ("analytic", "corotating", rows, Status::ok())
        }
        Method::Ode => {
            let (mode, name) = match args.basis {
                BasisChoice::Exact => (BasisMode::ExactDiagonalized, "exact"),
                BasisChoice::Corotating => (BasisMode::Corotating, "corotating"),
            };
            let start = instantaneous_basis(&params, 0.0, mode);
            let [u0, u1] = start.compose(input.a0(), input.a1());
            let psi0 = QubitState::normalized(u0, u1).map_err(CliError::validation)?;
            let (traj, err) = ode_trajectory_partial(&params, &psi0, &times, &opts);
            let bases = basis_sweep(&params, &times, mode);
            let mut rows = Vec::with_capacity(traj.len());
            for ((&t, y), b) in times.iter().zip(&traj).zip(&bases) {
                // Raw amplitudes, so any norm drift of the integrator shows up in p0 + p1.
                rows.push(row(t, overlap(&b.state0, y), overlap(&b.state1, y)));
            }
            let status = err.map_or_else(Status::ok, Status::failed);
            ("ode", name, rows, status)
        }
    };
    let failure = status.error.clone();
    let report = EvolveReport {
        command: "evolve".into(),
        params: params.into(),
        method: method.into(),
        basis: basis.into(),
        initial: input.into(),
        status,
        rows,
    };
    Produced::new(&report, args.out.format, failure)
}
