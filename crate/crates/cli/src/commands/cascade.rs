use serde::{Deserialize, Serialize};
use sgq_core::ensemble::cascade;

use super::Produced;
use crate::args::CascadeArgs;
use crate::error::CliError;
use crate::output::{num, Table};
use crate::report::{ParamsJson, StateJson};

/// Stage counts above this would produce more than a million clusters.
const MAX_STAGES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterJson {
    pub index: usize,
    /// Branch taken at each stage, `U` for up and `D` for down.
    pub path: String,
    pub weight: f64,
    pub state: StateJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeReport {
    pub command: String,
    pub params: ParamsJson,
    pub input: StateJson,
    pub stage_times: Vec<f64>,
    pub weight_sum: f64,
    pub clusters: Vec<ClusterJson>,
}

impl Table for CascadeReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["index", "path", "weight", "re_a0", "im_a0", "re_a1", "im_a1"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.clusters
            .iter()
            .map(|c| {
                let mut row = vec![c.index.to_string(), c.path.clone(), num(c.weight)];
                row.extend(c.state.cells());
                row
            })
            .collect()
    }
}

fn path_label(index: usize, stages: usize) -> String {
    (0..stages)
        .map(|k| if index >> (stages - 1 - k) & 1 == 0 { 'U' } else { 'D' })
        .collect()
}

pub fn run(args: &CascadeArgs) -> Result<Produced, CliError> {
    let params = args.drive.params()?;
    let input = args.state.state()?;
    if args.stages > MAX_STAGES {
        return Err(CliError::validation(format!("--stages is limited to {MAX_STAGES}")));
    }
    let times = match (&args.stage_times, args.t) {
        (Some(ts), _) if ts.len() == args.stages => ts.clone(),
        (Some(ts), _) => {
            return Err(CliError::validation(format!(
                "--stage-times lists {} times for {} stages",
                ts.len(),
                args.stages
            )))
        }
        (None, Some(t)) => vec![t; args.stages],
        (None, None) => return Err(CliError::validation("--t or --stage-times is required")),
    };
    if times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
        return Err(CliError::validation("stage times must be finite and non-negative"));
    }
    let stages: Vec<_> = times.iter().map(|&t| (params, t)).collect();
    let clusters = cascade(&stages, &input);
    let report = CascadeReport {
        command: "cascade".into(),
        params: params.into(),
        input: input.into(),
        stage_times: times,
        weight_sum: clusters.iter().map(|c| c.weight).sum(),
        clusters: clusters
            .iter()
            .enumerate()
            .map(|(index, c)| ClusterJson {
                index,
                path: path_label(index, args.stages),
                weight: c.weight,
                state: c.state.into(),
            })
            .collect(),
    };
    Produced::new(&report, args.out.format, None)
}
