use serde::{Deserialize, Serialize};
use sgq_core::gates::{
    solve_gate_time_with, synthesize_general, verify_gate, GateError, GateKind, GateSpec, ParamBounds, PhaseMode,
    SearchOptions, SynthesisError, SynthesisResult,
};
use sgq_core::{Mat2, QubitState};

use super::Produced;
use crate::args::{parse_range, parse_state, GateChoice, PhaseChoice, SynthesizeArgs};
use crate::error::CliError;
use crate::output::{num, Table};
use crate::report::{Cx, ParamsJson, StateJson};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationJson {
    pub analytic_fidelity: f64,
    pub ode_fidelity: f64,
    pub ode_phase_fidelity: f64,
    pub global_phase_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesizeReport {
    pub command: String,
    pub gate: String,
    pub phase_mode: String,
    /// `solved`, `infeasible`, `not_found` or `failed`.
    pub status: String,
    pub error: Option<String>,
    pub input: StateJson,
    pub target: Option<StateJson>,
    pub params: Option<ParamsJson>,
    pub tau: Option<f64>,
    pub residual: Option<f64>,
    pub predicted_output: Option<StateJson>,
    pub hold_hamiltonian: Option<[[Cx; 2]; 2]>,
    pub verification: Option<VerificationJson>,
}

impl Table for SynthesizeReport {
    fn header(&self) -> Vec<&'static str> {
        vec![
            "gate",
            "status",
            "omega0",
            "omega",
            "theta",
            "tau",
            "residual",
            "re_out0",
            "im_out0",
            "re_out1",
            "im_out1",
            "analytic_fidelity",
            "ode_fidelity",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
        let mut row = vec![
            self.gate.clone(),
            self.status.clone(),
            opt(self.params.map(|p| p.omega0)),
            opt(self.params.map(|p| p.omega)),
            opt(self.params.map(|p| p.theta)),
            opt(self.tau),
            opt(self.residual),
        ];
        match self.predicted_output {
            Some(s) => row.extend(s.cells()),
            None => row.extend(std::iter::repeat_n(String::new(), 4)),
        }
        row.push(opt(self.verification.map(|v| v.analytic_fidelity)));
        row.push(opt(self.verification.map(|v| v.ode_fidelity)));
        vec![row]
    }
}

fn matrix_json(m: &Mat2) -> [[Cx; 2]; 2] {
    m.0.map(|r| r.map(Cx::from))
}

fn gate_name(g: GateChoice) -> &'static str {
    match g {
        GateChoice::Not => "not",
        GateChoice::Z => "z",
        GateChoice::Hadamard => "hadamard",
        GateChoice::General => "general",
    }
}

fn blank(args: &SynthesizeArgs, input: QubitState, status: &str, error: Option<String>) -> SynthesizeReport {
    SynthesizeReport {
        command: "synthesize".into(),
        gate: gate_name(args.gate).into(),
        phase_mode: match args.phase_mode {
            PhaseChoice::Literal => "literal",
            PhaseChoice::Relaxed => "relaxed",
        }
        .into(),
        status: status.into(),
        error,
        input: input.into(),
        target: None,
        params: None,
        tau: None,
        residual: None,
        predicted_output: None,
        hold_hamiltonian: None,
        verification: None,
    }
}

fn fill(report: &mut SynthesizeReport, r: &SynthesisResult) {
    report.target = Some(r.target.into());
    report.params = Some(r.params.into());
    report.tau = Some(r.tau);
    report.residual = Some(r.residual);
    report.predicted_output = Some(r.predicted_output.into());
    report.hold_hamiltonian = Some(matrix_json(&r.hold_hamiltonian));
}

enum Solved {
    Ok(SynthesisResult),
    Partial(SynthesisResult, &'static str, String),
    Rejected(&'static str, String),
}

fn solve_named(args: &SynthesizeArgs, kind: GateKind, input: QubitState) -> Result<Solved, CliError> {
    let (Some(omega0), Some(omega)) = (args.omega0, args.omega) else {
        return Err(CliError::validation("named gates need --omega0 and --omega"));
    };
    let mode = match args.phase_mode {
        PhaseChoice::Literal => PhaseMode::Literal,
        PhaseChoice::Relaxed => PhaseMode::Relaxed,
    };
    match solve_gate_time_with(&GateSpec { kind, input }, omega0, omega, mode) {
        Ok(r) => Ok(Solved::Ok(r)),
        Err(e @ GateError::Infeasible(_)) => Ok(Solved::Rejected("infeasible", e.to_string())),
        Err(e) => Err(CliError::validation(e)),
    }
}

fn solve_general(args: &SynthesizeArgs, input: QubitState) -> Result<Solved, CliError> {
    let (Some(t0), Some(t1)) = (&args.target_a0, &args.target_a1) else {
        return Err(CliError::validation("--gate general needs --target-a0 and --target-a1"));
    };
    let target = parse_state(t0, t1)?;
    let bounds = ParamBounds {
        omega0: parse_range(&args.omega0_range)?,
        omega: parse_range(&args.omega_range)?,
        theta: parse_range(&args.theta_range)?,
        t: parse_range(&args.t_range)?,
    };
    match synthesize_general(&input, &target, &bounds, &SearchOptions::default()) {
        Ok(r) => Ok(Solved::Ok(r)),
        Err(e) => {
            let why = e.to_string();
            match e {
                SynthesisError::NotFound(r) => Ok(Solved::Partial(*r, "not_found", why)),
                SynthesisError::InvalidBounds => Err(CliError::Validation(why)),
            }
        }
    }
}

pub fn run(args: &SynthesizeArgs) -> Result<Produced, CliError> {
    let input = args.state.state()?;
    let opts = args.tol.options()?;
    let solved = match args.gate {
        GateChoice::Not => solve_named(args, GateKind::Not, input)?,
        GateChoice::Z => solve_named(args, GateKind::Z, input)?,
        GateChoice::Hadamard => solve_named(args, GateKind::Hadamard, input)?,
        GateChoice::General => solve_general(args, input)?,
    };
    let (report, failure) = match solved {
        Solved::Rejected(status, why) => (blank(args, input, status, Some(why.clone())), Some(why)),
        Solved::Partial(r, status, why) => {
            let mut report = blank(args, input, status, Some(why.clone()));
            fill(&mut report, &r);
            (report, Some(why))
        }
        Solved::Ok(r) => {
            let mut report = blank(args, input, "solved", None);
            fill(&mut report, &r);
            let mut failure = None;
            if !args.no_verify {
                match verify_gate(&r, &opts) {
                    Ok(v) => {
                        report.verification = Some(VerificationJson {
                            analytic_fidelity: v.analytic_fidelity,
                            ode_fidelity: v.ode_fidelity,
                            ode_phase_fidelity: v.ode_phase_fidelity,
                            global_phase_offset: v.global_phase_offset,
                        })
                    }
                    Err(e) => {
                        report.status = "failed".into();
                        report.error = Some(e.to_string());
                        failure = Some(e.to_string());
                    }
                }
            }
            (report, failure)
        }
    };
    Produced::new(&report, args.out.format, failure)
}
