use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(scatter1d::cli::run(std::env::args_os()))
}
