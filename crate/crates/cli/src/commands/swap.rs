use serde::{Deserialize, Serialize};
use sgq_core::swap::{build_swap_outputs, concurrence, extend_swap_family_on, Particle, TwoQubitState};

use super::Produced;
use crate::args::{parse_complex, ParticleChoice, SwapArgs};
use crate::error::CliError;
use crate::output::{num, Table};
use crate::report::{Cx, ParamsJson};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapStateJson {
    /// `base1`, `base2`, or `<base>_up` / `<base>_down` for the driven family.
    pub label: String,
    /// Amplitudes over `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub amps: [Cx; 4],
    pub concurrence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapReport {
    pub command: String,
    pub params: ParamsJson,
    pub t: f64,
    pub driven_particle: u8,
    pub states: Vec<SwapStateJson>,
}

impl Table for SwapReport {
    fn header(&self) -> Vec<&'static str> {
        vec![
            "label",
            "re_00",
            "im_00",
            "re_01",
            "im_01",
            "re_10",
            "im_10",
            "re_11",
            "im_11",
            "concurrence",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.states
            .iter()
            .map(|s| {
                let mut row = vec![s.label.clone()];
                for a in &s.amps {
                    row.push(num(a.re));
                    row.push(num(a.im));
                }
                row.push(num(s.concurrence));
                row
            })
            .collect()
    }
}

fn entry(label: &str, s: &TwoQubitState) -> SwapStateJson {
    SwapStateJson { label: label.into(), amps: s.amps.map(Cx::from), concurrence: concurrence(s) }
}

pub fn run(args: &SwapArgs) -> Result<Produced, CliError> {
    let params = args.drive.params()?;
    let (a, b) = (parse_complex(&args.a)?, parse_complex(&args.b)?);
    if !(args.t >= 0.0 && args.t.is_finite()) {
        return Err(CliError::validation("--t must be a finite non-negative time"));
    }
    let (particle, index) = match args.particle {
        ParticleChoice::Two => (Particle::Two, 2),
        ParticleChoice::Three => (Particle::Three, 3),
    };
    let (s1, s2) = build_swap_outputs(a, b).map_err(CliError::validation)?;
    let family = extend_swap_family_on(&params, args.t, a, b, particle).map_err(CliError::validation)?;
    let labels = ["base1_up", "base1_down", "base2_up", "base2_down"];
    let mut states = vec![entry("base1", &s1), entry("base2", &s2)];
    states.extend(labels.iter().zip(&family).map(|(l, s)| entry(l, s)));
    let report = SwapReport {
        command: "swap".into(),
        params: params.into(),
        t: args.t,
        driven_particle: index,
        states,
    };
    Produced::new(&report, args.out.format, None)
}
