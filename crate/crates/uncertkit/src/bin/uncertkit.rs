use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(uncertkit::cli::run_cli(std::env::args()) as u8)
}
