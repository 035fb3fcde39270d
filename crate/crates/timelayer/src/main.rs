use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(timelayer::cli::run(std::env::args()) as u8)
}
