//! Fixture runs shared by the CLI integration tests and the acceptance suite.
#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Fixture {
    /// File name of the golden copy under `tests/golden`.
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit_code: i32,
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "sweep_grid.json",
        args: &["sweep", "--verify", "--format", "json"],
        exit_code: 0,
    },
    Fixture {
        name: "sweep_grid.csv",
        args: &["sweep", "--verify", "--format", "csv"],
        exit_code: 0,
    },
    Fixture {
        name: "synthesize_not.json",
        args: &["synthesize", "--gate", "not", "--a0", "0.8i", "--a1", "0.6", "--omega0", "1", "--omega", "2"],
        exit_code: 0,
    },
    Fixture {
        name: "synthesize_hadamard.json",
        args: &[
            "synthesize", "--gate", "hadamard", "--a0", "0.5+0.5i", "--a1", "0.5-0.5i", "--omega0", "1", "--omega", "2",
        ],
        exit_code: 0,
    },
    Fixture {
        name: "synthesize_hadamard.csv",
        args: &[
            "synthesize", "--gate", "hadamard", "--a0", "0.5+0.5i", "--a1", "0.5-0.5i", "--omega0", "1", "--omega", "2",
            "--format", "csv",
        ],
        exit_code: 0,
    },
    Fixture {
        name: "synthesize_not_real_input.json",
        args: &["synthesize", "--gate", "not", "--a0", "0.8", "--a1", "0.6", "--omega0", "1", "--omega", "2"],
        exit_code: 3,
    },
    Fixture {
        name: "evolve_analytic.csv",
        args: &[
            "evolve", "--omega0", "1", "--omega", "2", "--theta", "1.0471975512", "--t-end", "5", "--points", "501",
            "--format", "csv",
        ],
        exit_code: 0,
    },
    Fixture {
        name: "evolve_ode.csv",
        args: &[
            "evolve", "--method", "ode", "--omega0", "1", "--omega", "2", "--theta", "1.0471975512", "--t-end", "5",
            "--points", "51", "--format", "csv",
        ],
        exit_code: 0,
    },
];

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn sgq() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sgq"));
    cmd.env_remove("SGQ_OUTPUT_DIR");
    cmd
}

/// Runs `args` writing to `out`, returning the exit code and file bytes.
pub fn run_to(args: &[&str], out: &Path) -> (i32, Vec<u8>) {
    let status = sgq()
        .args(args)
        .arg("--output")
        .arg(out)
        .output()
        .expect("binary runs");
    let code = status.status.code().expect("exited normally");
    let bytes = fs::read(out).unwrap_or_default();
    (code, bytes)
}

/// Compares a fixture run against its golden copy. With `SGQ_BLESS=1` the
/// golden copy is rewritten instead.
pub fn check_golden(f: &Fixture, scratch: &Path) -> Result<(), String> {
    let (code, bytes) = run_to(f.args, &scratch.join(f.name));
    if code != f.exit_code {
        return Err(format!("{}: exit code {code}, expected {}", f.name, f.exit_code));
    }
    let golden = golden_dir().join(f.name);
    if std::env::var_os("SGQ_BLESS").is_some() {
        fs::create_dir_all(golden_dir()).map_err(|e| e.to_string())?;
        fs::write(&golden, &bytes).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = fs::read(&golden).map_err(|e| format!("{}: {e}", golden.display()))?;
    if expected != bytes {
        return Err(format!("{}: output differs from golden copy", f.name));
    }
    Ok(())
}
