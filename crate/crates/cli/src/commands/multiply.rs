use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sgq_core::dynamics::adiabaticity_parameter;
use sgq_core::ensemble::{adiabatic_split, cluster_counts, cluster_counts_sampled, nonadiabatic_multiply_with_threshold};

use super::Produced;
use crate::args::MultiplyArgs;
use crate::error::CliError;
use crate::output::{num, Table};
use crate::report::{ParamsJson, StateJson};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchJson {
    pub branch: String,
    pub probability: f64,
    pub count: u64,
    pub state: StateJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplyReport {
    pub command: String,
    pub params: ParamsJson,
    pub t: f64,
    pub input: StateJson,
    pub adiabaticity_parameter: f64,
    pub adiabatic_warning: bool,
    pub particles: u64,
    pub sampling: bool,
    pub seed: u64,
    pub branches: Vec<BranchJson>,
}

impl Table for MultiplyReport {
    fn header(&self) -> Vec<&'static str> {
        vec!["branch", "probability", "count", "re_a0", "im_a0", "re_a1", "im_a1"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.branches
            .iter()
            .map(|b| {
                let mut row = vec![b.branch.clone(), num(b.probability), b.count.to_string()];
                row.extend(b.state.cells());
                row
            })
            .collect()
    }
}

pub fn run(args: &MultiplyArgs) -> Result<Produced, CliError> {
    let params = args.drive.params()?;
    let input = args.state.state()?;
    if !(args.t >= 0.0 && args.t.is_finite()) {
        return Err(CliError::validation("--t must be a finite non-negative time"));
    }
    let out = nonadiabatic_multiply_with_threshold(&params, &input, args.t, args.warn_threshold);
    if out.adiabatic_warning {
        eprintln!(
            "warning: adiabaticity parameter {} is below {}, the drive is close to adiabatic",
            adiabaticity_parameter(&params),
            args.warn_threshold
        );
    }
    let split = adiabatic_split(&input, 1.0, 1.0).map_err(CliError::validation)?;
    let counts = if args.sampling {
        cluster_counts_sampled(&split, args.particles, &mut ChaCha8Rng::seed_from_u64(args.seed))
    } else {
        cluster_counts(&split, args.particles)
    };
    let report = MultiplyReport {
        command: "multiply".into(),
        params: params.into(),
        t: args.t,
        input: input.into(),
        adiabaticity_parameter: adiabaticity_parameter(&params),
        adiabatic_warning: out.adiabatic_warning,
        particles: args.particles,
        sampling: args.sampling,
        seed: args.seed,
        branches: vec![
            BranchJson { branch: "up".into(), probability: out.probs.0, count: counts.n_up, state: out.up.into() },
            BranchJson {
                branch: "down".into(),
                probability: out.probs.1,
                count: counts.n_down,
                state: out.down.into(),
            },
        ],
    };
    Produced::new(&report, args.out.format, None)
}
