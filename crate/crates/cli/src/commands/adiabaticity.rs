use serde::{Deserialize, Serialize};
use sgq_core::dynamics::{adiabaticity_ratio_numeric, adiabaticity_report, rabi_frequency};

use super::Produced;
use crate::args::AdiabaticityArgs;
use crate::error::CliError;
use crate::output::{num, Table};
use crate::report::ParamsJson;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub t: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticityReport {
    pub command: String,
    pub params: ParamsJson,
    pub rabi_frequency: f64,
    pub closed_form: f64,
    pub numeric_max: f64,
    pub threshold: f64,
    pub is_adiabatic: bool,
    /// Peak population leaving the initial eigenstate, `(ω sinθ / ω̄)²`.
    pub max_transition_population: f64,
    pub samples: Vec<RatioSample>,
}

impl Table for AdiabaticityReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["t", "ratio", "closed_form"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.samples
            .iter()
            .map(|s| vec![num(s.t), num(s.ratio), num(self.closed_form)])
            .collect()
    }
}

pub fn run(args: &AdiabaticityArgs) -> Result<Produced, CliError> {
    let params = args.drive.params()?;
    let times = args.grid.times()?;
    if !(args.threshold > 0.0 && args.threshold.is_finite()) {
        return Err(CliError::validation("--threshold must be positive"));
    }
    let summary = adiabaticity_report(&params, &times, args.threshold);
    let rabi = rabi_frequency(&params);
    let transverse = params.omega() * params.theta().sin();
    let report = AdiabaticityReport {
        command: "adiabaticity".into(),
        params: params.into(),
        rabi_frequency: rabi,
        closed_form: summary.closed_form,
        numeric_max: summary.numeric_max,
        threshold: summary.threshold,
        is_adiabatic: summary.is_adiabatic,
        max_transition_population: if rabi > 0.0 { (transverse / rabi).powi(2) } else { 0.0 },
        samples: times
            .iter()
            .map(|&t| RatioSample { t, ratio: adiabaticity_ratio_numeric(&params, t) })
            .collect(),
    };
    Produced::new(&report, args.out.format, None)
}
