use std::process::ExitCode;

fn main() -> ExitCode {
    sgq_cli::run(std::env::args_os())
}
