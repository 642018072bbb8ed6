use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(gausscap::cli::run(std::env::args_os()))
}
