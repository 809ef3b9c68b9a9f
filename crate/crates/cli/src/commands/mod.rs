mod adiabaticity;
mod cascade;
mod evolve;
mod multiply;
mod swap;
mod sweep;
mod synthesize;

pub use adiabaticity::{AdiabaticityReport, RatioSample};
pub use cascade::{CascadeReport, ClusterJson};
pub use evolve::{EvolveReport, EvolveRow};
pub use multiply::{BranchJson, MultiplyReport};
pub use swap::{SwapReport, SwapStateJson};
pub use sweep::{population_error, verification_times, SweepReport, SweepRow};
pub use synthesize::{SynthesizeReport, VerificationJson};

use crate::args::{Command, Format};
use crate::error::CliError;
use crate::output::{render, Table};

/// Rendered report plus the numerical failure it records, if any.
pub struct Produced {
    pub bytes: Vec<u8>,
    pub failure: Option<String>,
}

impl Produced {
    fn new<T: Table>(report: &T, format: Format, failure: Option<String>) -> Result<Self, CliError> {
        Ok(Produced { bytes: render(report, format)?, failure })
    }
}

pub fn execute(cmd: &Command) -> Result<Produced, CliError> {
    match cmd {
        Command::Evolve(a) => evolve::run(a),
        Command::Adiabaticity(a) => adiabaticity::run(a),
        Command::Multiply(a) => multiply::run(a),
        Command::Cascade(a) => cascade::run(a),
        Command::Synthesize(a) => synthesize::run(a),
        Command::Swap(a) => swap::run(a),
        Command::Sweep(a) => sweep::run(a),
    }
}
