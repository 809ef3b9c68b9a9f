use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sgq_core::{ControlParams, QubitState};

use crate::output::num;

/// Complex number as `{"re": x, "im": y}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Cx { re: z.re, im: z.im }
    }
}

impl From<Cx> for Complex64 {
    fn from(z: Cx) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub a0: Cx,
    pub a1: Cx,
}

impl From<QubitState> for StateJson {
    fn from(q: QubitState) -> Self {
        StateJson { a0: q.a0().into(), a1: q.a1().into() }
    }
}

impl StateJson {
    /// `re_a0, im_a0, re_a1, im_a1` as CSV cells.
    pub fn cells(&self) -> [String; 4] {
        [num(self.a0.re), num(self.a0.im), num(self.a1.re), num(self.a1.im)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub omega0: f64,
    pub omega: f64,
    pub theta: f64,
}

impl From<ControlParams> for ParamsJson {
    fn from(p: ControlParams) -> Self {
        ParamsJson { omega0: p.omega0(), omega: p.omega(), theta: p.theta() }
    }
}

/// `"ok"` or `"failed"` plus the reason, shared by reports that can be
/// cut short by a numerical failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Status {
    pub status: String,
    pub error: Option<String>,
}

impl Status {
    pub fn ok() -> Self {
        Status { status: "ok".into(), error: None }
    }

    pub fn failed(reason: impl ToString) -> Self {
        Status { status: "failed".into(), error: Some(reason.to_string()) }
    }
}
